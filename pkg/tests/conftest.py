import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture()
def tmp_cache(tmp_path):
    """Isolated cache directory for tests that exercise cache semantics."""
    d = tmp_path / "cache"
    d.mkdir()
    return str(d)
