import json

import numpy as np
import pytest

from core.types import ProjectivePole
from storage.csv_storage import CsvStorage
from storage.problem_loader import load_problem, problem_from_dict

PROBLEM = {
    'nodes': [[1, 0], [0, 1], [-1, 0], [0, -1]],
    'weights': [[[1, 0], [0.5, 0]], [[1, 1], [0, 1]], [[0.7, 0], [1, 0]], [[1, 0], [1, -1]]],
    'poles': ['inf', 'inf', [[1.5, 0], [1, 0]], {'nu': [0, 3], 'mu': [2, 0]}],
    'index': [1, 2, 1, 2],
}


def test_write_table_format(tmp_path):
    path = tmp_path / 'out' / 'table.csv'
    CsvStorage(path).write_table(('n', 'a', 'b'), [[5, 1.5, -2e-17], [10, np.nan, 3.0]])
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'n a b'
    assert lines[1] == '5 1.500000000000000e+00 -2.000000000000000e-17'
    assert lines[2].startswith('10 nan ')


def test_write_table_is_deterministic(tmp_path):
    rows = np.random.default_rng(0).standard_normal((4, 3))
    CsvStorage(tmp_path / 'a.csv').write_table(('x', 'y', 'z'), rows, integer_columns=0)
    CsvStorage(tmp_path / 'b.csv').write_table(('x', 'y', 'z'), rows, integer_columns=0)
    assert (tmp_path / 'a.csv').read_bytes() == (tmp_path / 'b.csv').read_bytes()


def test_write_failure_is_reported(tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('x')
    with pytest.raises(RuntimeError):
        CsvStorage(blocker / 'table.csv').write_table(('n',), [[1]])


def test_problem_from_dict():
    spec = problem_from_dict(PROBLEM)
    assert spec.n == 4
    assert spec.nodes[1] == 1j
    assert spec.weights[1, 0] == 1 + 1j
    assert spec.poles[0] == ProjectivePole.infinite()
    assert spec.poles[2].value == 1.5
    assert spec.poles[3].value == pytest.approx(1.5j)
    assert spec.index == (1, 2, 1, 2)


def test_problem_from_dict_scalar_values():
    data = dict(PROBLEM, nodes=[1, '1j', -1, '-1j'], poles=['inf', 'inf', 2.5, '0.5+2j'])
    spec = problem_from_dict(data)
    assert spec.nodes[3] == -1j
    assert spec.poles[3].value == 0.5 + 2j


def test_problem_from_dict_infinity_spellings():
    data = dict(PROBLEM, nodes=[1, '0.5+0.5i', -1, '-1j'], poles=['Inf', ' -inf', 'infinity', '2+3i'])
    spec = problem_from_dict(data)
    assert all(p.is_infinite for p in spec.poles[:3])
    assert spec.poles[3].value == 2 + 3j
    assert spec.nodes[1] == 0.5 + 0.5j


def test_problem_from_dict_rejects_missing_key():
    with pytest.raises(ValueError):
        problem_from_dict({'nodes': [1, 2]})


def test_load_problem(tmp_path):
    path = tmp_path / 'problem.json'
    path.write_text(json.dumps(PROBLEM), encoding='utf-8')
    assert load_problem(path).n == 4
