import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("mgl", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("mgl")


@pytest.fixture(autouse=True)
def _cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MGL_CACHE_DIR", str(tmp_path / "cache"))
    yield


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
