import random
from pathlib import Path

import pytest

from gfinv.gf_core import aes_field, make_field

DATA_DIR = Path(__file__).parent / "data"

# x^4 + x + 1, so that F_4 = {0, 1, 6, 7}
GF16_MODULUS = [1, 1, 0, 0, 1]


@pytest.fixture(scope="session")
def gf4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def gf8():
    return make_field(2, 3)


@pytest.fixture(scope="session")
def gf16():
    return make_field(2, 4, GF16_MODULUS)


@pytest.fixture(scope="session")
def gf32():
    return make_field(2, 5)


@pytest.fixture(scope="session")
def gf64():
    return make_field(2, 6)


@pytest.fixture(scope="session")
def gf9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def gf27():
    return make_field(3, 3)


@pytest.fixture(scope="session")
def gf25():
    return make_field(5, 2)


@pytest.fixture(scope="session")
def gf5():
    return make_field(5, 1)


@pytest.fixture(scope="session")
def aes():
    return aes_field()


@pytest.fixture
def rng():
    return random.Random(20240517)


@pytest.fixture(scope="session")
def aes_table_path():
    return DATA_DIR / "aes_sbox.hex"


@pytest.fixture(scope="session")
def aes_table(aes_table_path):
    return [int(tok, 16) for tok in aes_table_path.read_text().split()]
