from fractions import Fraction

import pytest

from ultrafractal import build_ifs_unital, nat, parse_ordinal

HALF = Fraction(1, 2)


@pytest.fixture(scope="session")
def half():
    return HALF


@pytest.fixture(scope="session")
def system_h1():
    return build_ifs_unital(nat(1), HALF)


@pytest.fixture(scope="session")
def system_h2():
    return build_ifs_unital(nat(2), HALF)


@pytest.fixture(scope="session")
def system_inf():
    return build_ifs_unital(parse_ordinal("inf"), HALF)
