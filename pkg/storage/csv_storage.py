import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Sequence, TextIO, Union

import numpy as np

logger = logging.getLogger(__name__)


# Класс CsvStorage
# Запись таблиц результатов в текстовый файл:
# один заголовок, столбцы через пробел, целые столбцы как %d, остальные как %.15e.
# Основные методы:
# handle() - контекстный менеджер открытого файла
# write_table(header, rows, integer_columns) - запись таблицы целиком
class CsvStorage:
    def __init__(self, path: Union[str, Path]):
        """
        Хранилище результатов в файле
        :param path: путь к CSV-файлу (каталоги создаются при записи)
        """
        self.path = Path(path)

    @contextmanager
    def handle(self) -> Iterator[TextIO]:
        """Контекстный менеджер для записи файла"""
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, 'w', encoding='utf-8', newline='\n') as stream:
                yield stream
        except OSError as e:
            logger.error(f"[Storage] Cannot write {self.path}: {e}")
            raise RuntimeError(f"Не удалось записать файл {self.path}") from e

    def write_table(self, header: Sequence[str], rows, integer_columns: int = 1) -> None:
        rows = np.asarray(rows, dtype=np.float64).reshape(-1, len(header))
        fmt = ['%d'] * integer_columns + ['%.15e'] * (len(header) - integer_columns)
        with self.handle() as stream:
            np.savetxt(stream, rows, fmt=fmt, delimiter=' ', header=' '.join(header), comments='')
        logger.info(f"[Storage] {rows.shape[0]} rows written to {self.path}")
