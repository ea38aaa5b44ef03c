import os
import tempfile

import pytest

# keep test runs from writing ./.rtni-cache into the working tree
_CACHE = tempfile.mkdtemp(prefix="rtni-test-cache-")
os.environ["RTNI_CACHE_DIR"] = _CACHE

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fresh_cache(tmp_path, monkeypatch):
    """An empty cache directory, with the bundled tables hidden and memos cleared."""
    from rtni import cache
    from rtni.weingarten import clear_memo

    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path))
    monkeypatch.setattr(cache, "BUNDLED_DIR", tmp_path / "no-bundled-data")
    clear_memo()
    yield tmp_path
    clear_memo()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
