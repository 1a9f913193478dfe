import argparse
import logging
import math
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import List, Optional, Sequence

from core.errors import IEPError
from harness.experiments import ALGORITHMS, SWEEP_HEADER, Exp1Config, Exp2Config, n_grid, sweep
from harness.sqrt_problem import SQRT_CURVES_HEADER, SQRT_TABLE_HEADER, run_sqrt
from metrics.measures import compute_metrics
from settings import DEFAULT_SEED, LOG_DIR, LOG_LEVEL, SELECTION_RULES
from storage.csv_storage import CsvStorage
from storage.problem_loader import load_problem

logger = logging.getLogger(__name__)

SOLVE_HEADER = ('n', 'err_Q', 'err_phi', 'err_p', 'err_r')


def setup_logging() -> None:
    Path(LOG_DIR).mkdir(exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(),
            RotatingFileHandler(
                filename=str(Path(LOG_DIR) / 'iep.log'),
                maxBytes=5 * 1024 * 1024,
                backupCount=3,
                encoding='utf-8'
            )
        ]
    )


def _int_list(raw: str) -> List[int]:
    try:
        return [int(part) for part in raw.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"ожидался список целых через запятую: {raw}")


def _add_sweep_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--n-min', type=int, default=5)
    parser.add_argument('--n-max', type=int, default=300)
    parser.add_argument('--n-step', type=int, default=10)
    parser.add_argument('--runs', type=int, default=5)
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED)
    parser.add_argument('--out', required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='iep', description='Ортонормированные рациональные вектор-функции')
    commands = parser.add_subparsers(dest='command', required=True)

    exp1 = commands.add_parser('exp1', help='узлы на окружности, полюсы на окружности радиуса 3/2')
    _add_sweep_arguments(exp1)

    exp2 = commands.add_parser('exp2', help='как exp1, но с двумя почти совпадающими узлами')
    _add_sweep_arguments(exp2)
    exp2.add_argument('--close-index', type=int, default=40)
    exp2.add_argument('--theta', type=float, default=1e-6)

    sqrt = commands.add_parser('sqrt', help='рациональное приближение sqrt(t) на [0, 1]')
    sqrt.add_argument('--n1', type=_int_list, default=[4, 9, 16, 25, 36])
    sqrt.add_argument('--out', required=True)
    sqrt.add_argument('--curves')
    sqrt.add_argument('--select', choices=SELECTION_RULES)
    sqrt.add_argument('--algorithm', choices=sorted(ALGORITHMS), default='updating')

    solve = commands.add_parser('solve', help='решение задачи из JSON-файла')
    solve.add_argument('--input', required=True)
    solve.add_argument('--algorithm', choices=sorted(ALGORITHMS), default='updating')
    solve.add_argument('--out', required=True)
    return parser


def _run_sweep(args: argparse.Namespace) -> None:
    n_values = n_grid(args.n_min, args.n_max, args.n_step)
    if args.command == 'exp2':
        config = Exp2Config(n_values, args.runs, args.seed, args.close_index, args.theta)
    else:
        config = Exp1Config(n_values, args.runs, args.seed)
    logger.info(f"[CLI] {args.command}: n={n_values[0] if n_values else '-'}..{args.n_max}, runs={args.runs}")
    CsvStorage(args.out).write_table(SWEEP_HEADER, sweep(config))


def _run_sqrt(args: argparse.Namespace) -> None:
    runs = run_sqrt(args.n1, selection=args.select, curves=bool(args.curves), algorithm=args.algorithm)
    CsvStorage(args.out).write_table(SQRT_TABLE_HEADER, [run.table_row() for run in runs])
    if args.curves:
        rows = [row for run in runs for row in run.curve_rows()]
        CsvStorage(args.curves).write_table(SQRT_CURVES_HEADER, rows, integer_columns=2)


def _run_solve(args: argparse.Namespace) -> None:
    spec = load_problem(args.input)
    row = compute_metrics(ALGORITHMS[args.algorithm](spec))
    values = [math.nan if value is None else value for value in row.as_tuple()]
    CsvStorage(args.out).write_table(SOLVE_HEADER, [values])


COMMANDS = {
    'exp1': _run_sweep,
    'exp2': _run_sweep,
    'sqrt': _run_sqrt,
    'solve': _run_solve,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """
    Точка входа командной строки
    :return: код завершения: 0 - успех, 1 - ошибка аргументов или файлов, 2 - ошибка решателя
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    setup_logging()
    logger.info(f"[CLI] Command {args.command} started")
    try:
        COMMANDS[args.command](args)
    except IEPError as e:
        logger.error(f"[CLI] Solver failure: {e}", exc_info=True)
        print(f"error={type(e).__name__} message={e}", file=sys.stderr)
        return 2
    except (ValueError, OSError, RuntimeError) as e:
        logger.error(f"[CLI] Bad input: {e}")
        print(f"error={type(e).__name__} message={e}", file=sys.stderr)
        return 1
    logger.info(f"[CLI] Command {args.command} finished")
    return 0
