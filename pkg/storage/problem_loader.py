import json
import logging
import math
from pathlib import Path
from typing import Any, Union

import numpy as np

from core.types import ProblemSpec, ProjectivePole

logger = logging.getLogger(__name__)


def _complex(value: Any) -> complex:
    # Число, пара [re, im] или строка вида "inf"
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"Ожидалась пара [re, im], получено {value}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        text = value.replace(' ', '').lower()
        if text.lstrip('+-') in ('inf', 'infinity'):
            return complex(math.inf, 0.0)
        if text.endswith('i'):
            text = text[:-1] + 'j'
        return complex(text)
    return complex(value)


def _pole(value: Any) -> ProjectivePole:
    if isinstance(value, (list, tuple)) and len(value) == 2 and isinstance(value[0], (list, tuple)):
        return ProjectivePole(_complex(value[0]), _complex(value[1]))
    if isinstance(value, dict):
        return ProjectivePole(_complex(value['nu']), _complex(value['mu']))
    return ProjectivePole.from_value(_complex(value))


def problem_from_dict(data: dict) -> ProblemSpec:
    """
    Постановка из словаря с ключами nodes, weights, poles, index
    :param data: nodes - [re, im]; weights - n пар [[re, im], [re, im]]; poles - [nu, mu] (nu, mu - пары
                 [re, im]), число или "inf"; index - список из 1 и 2
    """
    try:
        nodes = np.array([_complex(z) for z in data['nodes']], dtype=np.complex128)
        weights = np.array([[_complex(c) for c in row] for row in data['weights']], dtype=np.complex128)
        poles = tuple(_pole(p) for p in data['poles'])
        index = tuple(int(c) for c in data['index'])
    except KeyError as e:
        raise ValueError(f"В описании задачи нет ключа {e}") from e
    except TypeError as e:
        raise ValueError(f"Некорректный формат задачи: {e}") from e
    return ProblemSpec(nodes, weights.reshape(-1, 2) if weights.size else weights, poles, index)


def load_problem(path: Union[str, Path]) -> ProblemSpec:
    """Читает постановку задачи из JSON-файла"""
    path = Path(path)
    with open(path, encoding='utf-8') as stream:
        data = json.load(stream)
    spec = problem_from_dict(data)
    logger.info(f"[Storage] Problem of size {spec.n} loaded from {path}")
    return spec
