import pytest


@pytest.fixture
def announce(capfd):
    """Print a line that survives pytest's capture (acceptance summaries)."""
    def _announce(line: str) -> None:
        with capfd.disabled():
            print(line, flush=True)
    return _announce
