import pytest

from pitesim.spinchain import build_chain, diagonalize


@pytest.fixture(scope="session")
def inst4():
    chain = build_chain(4, True, 7)
    return chain, diagonalize(chain)


@pytest.fixture(scope="session")
def inst6():
    chain = build_chain(6, True, 11)
    return chain, diagonalize(chain)


@pytest.fixture(scope="session")
def inst8():
    chain = build_chain(8, True, 42)
    return chain, diagonalize(chain)
