import pytest

from ditred.bigraph import Arrow, Ditalgebra, PathAlgebra
from ditred.scalars import QQ, PrimeField

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def make_ss(field=QQ):
    """Two trivial points, no arrows."""
    return Ditalgebra(field, [None, None], [], [], {})


def make_a2(field=QQ, ideal_a=False):
    """Two points, one full arrow."""
    dit = Ditalgebra(field, [None, None], [Arrow("a", 0, 1, 0)], [], {})
    if ideal_a:
        return Ditalgebra(field, [None, None], [Arrow("a", 0, 1, 0)], [], {},
                          ideal=[dit.alg.gen("a")])
    return dit


def make_reg(field=QQ):
    """Full arrow with its derivation hitting a dashed arrow."""
    a, v = Arrow("a", 0, 1, 0), Arrow("v", 0, 1, 1)
    alg = PathAlgebra(field, [None, None], [a, v])
    return Ditalgebra(field, [None, None], [a], [v], {"a": alg.gen("v")})


def make_kron(field=QQ):
    """Two parallel full arrows."""
    return Ditalgebra(field, [None, None], [Arrow("a", 0, 1, 0), Arrow("b", 0, 1, 0)], [], {})


@pytest.fixture
def ss():
    return make_ss()


@pytest.fixture
def a2():
    return make_a2()


@pytest.fixture
def reg():
    return make_reg()


@pytest.fixture
def kron():
    return make_kron()
