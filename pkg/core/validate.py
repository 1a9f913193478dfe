import logging
from typing import NewType

import numpy as np

from core.config import COMPONENTS
from core.errors import (
    BadPrefix,
    LengthMismatch,
    NodeEqualsPole,
    RepeatedFinitePoleInComponent,
    ValidationError,
    ZeroWeightRow,
)
from core.types import ProblemSpec, poles_coincide

logger = logging.getLogger(__name__)

ValidatedProblemSpec = NewType('ValidatedProblemSpec', ProblemSpec)


def validate(spec: ProblemSpec) -> ValidatedProblemSpec:
    """
    Проверяет постановку задачи и возвращает ее без изменений
    :param spec: узлы, веса, полюсы и индексный вектор
    """
    n = spec.n
    if spec.weights.shape != (n, 2):
        raise LengthMismatch(f"Матрица весов {spec.weights.shape}, ожидалось ({n}, 2)")
    if len(spec.poles) != n or len(spec.index) != n:
        raise LengthMismatch(
            f"Узлов {n}, полюсов {len(spec.poles)}, индексов {len(spec.index)}"
        )
    if n < 1:
        raise LengthMismatch("Пустая задача")
    if not (np.all(np.isfinite(spec.nodes)) and np.all(np.isfinite(spec.weights))):
        raise ValidationError("Узлы и веса должны быть конечными числами")

    if any(c not in COMPONENTS for c in spec.index):
        raise BadPrefix(f"Индексы должны принадлежать {COMPONENTS}: {spec.index}")
    for position, component in enumerate(spec.index[:2]):
        if component != position + 1 or not spec.poles[position].is_infinite:
            raise BadPrefix("Требуется p_1 = p_2 = inf и pi_1 = 1, pi_2 = 2")

    zero_rows = np.flatnonzero(np.all(spec.weights == 0, axis=1))
    if zero_rows.size:
        raise ZeroWeightRow(f"Нулевые строки весов: {zero_rows.tolist()}")

    seen = {c: [] for c in COMPONENTS}
    for k, (pole, component) in enumerate(zip(spec.poles, spec.index)):
        if pole.is_infinite:
            continue
        value = pole.value
        if any(poles_coincide(value, earlier) for earlier in seen[component]):
            raise RepeatedFinitePoleInComponent(
                f"Полюс {value} повторяется в компоненте {component} (позиция {k + 1})"
            )
        seen[component].append(value)

        # Узел может совпасть с полюсом, только если вес этой компоненты в узле нулевой
        for i in np.flatnonzero(spec.nodes == value):
            if spec.weights[i, component - 1] != 0:
                raise NodeEqualsPole(f"Узел z_{i + 1} совпадает с полюсом p_{k + 1} = {value}")

    logger.debug(f"[Validate] Problem of size {n} accepted")
    return ValidatedProblemSpec(spec)
