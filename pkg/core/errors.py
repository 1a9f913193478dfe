# Иерархия исключений пакета.
# Все ошибки наследуются от IEPError (RuntimeError), чтобы вызывающий код
# мог перехватывать сбои решателей одной веткой except.


class IEPError(RuntimeError):
    """Базовая ошибка задачи IEP"""


# --- Проверка входных данных ---

class ValidationError(IEPError):
    """Некорректная постановка задачи"""


class NodeEqualsPole(ValidationError):
    """Узел совпадает с конечным полюсом"""


class ZeroWeightRow(ValidationError):
    """Нулевая строка матрицы весов"""


class RepeatedFinitePoleInComponent(ValidationError):
    """Повтор конечного полюса в одной компоненте"""


class BadPrefix(ValidationError):
    """Первые два полюса/индекса не равны (inf, inf) / (1, 2)"""


class LengthMismatch(ValidationError):
    """Несогласованные размеры"""


class IndexOutOfRange(IEPError):
    """Индекс вращения вне матрицы"""


# --- Факторизация весов ---

class RankDeficientWeights(IEPError):
    """Матрица весов не имеет полного столбцового ранга"""


class SingularR(IEPError):
    """Вырожденный треугольный множитель R_W"""


# --- Вращения и пучки ---

class ZeroVector(IEPError):
    """Нечего исключать: нулевой вектор"""


class SingularPencil(IEPError):
    """Сингулярный 2x2 пучок"""


class OrderLost(IEPError):
    """Порядок собственных значений не сохранился даже после перестановки"""


class DegenerateRotation(IEPError):
    """Вектор для исключения численно равен нулю"""


class StructureError(IEPError):
    """Нарушена 2-хессенбергова структура"""


# --- Решатели ---

class Breakdown(IEPError):
    """Вырождение скалярного произведения в алгоритме обновления"""


class UnsupportedInfiniteMultiplicity(IEPError):
    """Кратность бесконечного полюса не поддерживается в текущем режиме"""


class KrylovBreakdown(IEPError):
    """Подпространство Крылова не расширилось"""


class PoleHitsNode(IEPError):
    """Полюс совпал с узлом при сдвиге-обращении"""


class ShadowUnavailable(IEPError):
    """Старший коэффициент потерян"""


class DegenerateCombination(IEPError):
    """Продолжающая комбинация вырождена"""


class IncompleteIteration(IEPError):
    """Итерация Арнольди не завершена"""


# --- Вычисление функций ---

class EvaluationAtPole(IEPError):
    """Вычисление в закодированном полюсе"""


class PoleCollision(IEPError):
    """Деление создало бы кратный полюс"""


class DivisionByZeroComponent(IEPError):
    """Вторая компонента обращается в ноль"""

