import json

import pytest

from main import run_cli
from test_storage import PROBLEM


@pytest.fixture
def problem_file(tmp_path):
    path = tmp_path / 'problem.json'
    path.write_text(json.dumps(PROBLEM), encoding='utf-8')
    return path


@pytest.mark.parametrize('algorithm', ['updating', 'krylov'])
def test_solve(tmp_path, problem_file, algorithm):
    out = tmp_path / 'solve.csv'
    assert run_cli(['solve', '--input', str(problem_file), '--algorithm', algorithm, '--out', str(out)]) == 0
    header, row = out.read_text(encoding='utf-8').splitlines()
    assert header == 'n err_Q err_phi err_p err_r'
    assert row.split()[0] == '4'
    assert float(row.split()[1]) <= 1e-12


def test_solver_failure_exit_code(tmp_path, capsys):
    data = dict(PROBLEM, index=[2, 1, 1, 2])
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps(data), encoding='utf-8')
    assert run_cli(['solve', '--input', str(path), '--out', str(tmp_path / 'x.csv')]) == 2
    assert capsys.readouterr().err.strip().startswith('error=BadPrefix message=')


def test_bad_input_exit_code(tmp_path, capsys):
    assert run_cli(['solve', '--input', str(tmp_path / 'missing.json'), '--out', str(tmp_path / 'x.csv')]) == 1
    assert 'error=FileNotFoundError' in capsys.readouterr().err


def test_bad_arguments_exit_code():
    assert run_cli(['exp1']) == 1
    assert run_cli(['unknown']) == 1


def test_exp1_is_byte_identical(tmp_path):
    arguments = ['exp1', '--n-min', '5', '--n-max', '9', '--n-step', '4', '--runs', '1', '--seed', '3']
    assert run_cli(arguments + ['--out', str(tmp_path / 'a.csv')]) == 0
    assert run_cli(arguments + ['--out', str(tmp_path / 'b.csv')]) == 0
    assert (tmp_path / 'a.csv').read_bytes() == (tmp_path / 'b.csv').read_bytes()
    lines = (tmp_path / 'a.csv').read_text(encoding='utf-8').splitlines()
    assert lines[0].split()[0] == 'Nvec' and len(lines) == 3


def test_exp2_runs(tmp_path):
    out = tmp_path / 'exp2.csv'
    arguments = ['exp2', '--n-min', '6', '--n-max', '6', '--runs', '1', '--close-index', '4', '--out', str(out)]
    assert run_cli(arguments) == 0
    assert len(out.read_text(encoding='utf-8').splitlines()) == 2


def test_sqrt_command(tmp_path):
    out = tmp_path / 'sqrt.csv'
    curves = tmp_path / 'curves.csv'
    assert run_cli(['sqrt', '--n1', '4', '--out', str(out), '--curves', str(curves), '--select', 'min']) == 0
    assert out.read_text(encoding='utf-8').splitlines()[0] == 'N Maxerr fzero'
    assert curves.read_text(encoding='utf-8').splitlines()[1].startswith('4 3 ')
