from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def zeros_path() -> Path:
    path = FIXTURES / "zeta_zeros_100k.txt"
    if not path.exists():
        pytest.fail(
            "missing fixtures/zeta_zeros_100k.txt; regenerate with "
            "scripts/generate_zeta_zeros.py"
        )
    return path


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES
