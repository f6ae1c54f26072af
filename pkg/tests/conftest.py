import pytest
from hypothesis import HealthCheck, settings

from mso_access.fixtures import a0

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def A0():
    return a0()


@pytest.fixture
def a0_file(tmp_path):
    from mso_access.fixtures import A0_TEXT
    path = tmp_path / "a0.aut"
    path.write_text(A0_TEXT)
    return path
