from datetime import timedelta

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    'iep',
    max_examples=25,
    deadline=timedelta(seconds=30),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile('iep')


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def isolated_logs(tmp_path, monkeypatch):
    # CLI создает каталог логов относительно текущего каталога
    monkeypatch.chdir(tmp_path)
