import numpy as np

# Машинная точность для complex128
EPS = float(np.finfo(np.float64).eps)

# Допуск на совпадение полюсов в хордальной метрике
CHORDAL_TOLERANCE = 1e-12

# Порог вырожденности матрицы весов: |r_22| <= RANK_FACTOR * eps * ||W||_F
RANK_FACTOR = 100

# Делитель рекуррентности считается нулевым при |z k - h| <= DIVISOR_FACTOR * eps * (|z k| + |h|)
DIVISOR_FACTOR = 16

# Порог близости полюсов при делении на (z - p) в символьной арифметике
POLE_COLLISION_TOLERANCE = 1e-12

# Компоненты рациональных векторов нумеруются с единицы, как в индексном векторе
COMPONENTS = (1, 2)
