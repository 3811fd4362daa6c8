"""Shared fixtures: the small-rank corpus used across the suite."""

import pytest

from takiffalg.autos import (eigenspace_grading, inner_from_torus,
                             outer_involution)
from takiffalg.liealg import construct_classical
from takiffalg.scalars import cyc, zeta_pow


@pytest.fixture(scope="session")
def sl2():
    return construct_classical("sl", 2)


@pytest.fixture(scope="session")
def sl3():
    return construct_classical("sl", 3)


@pytest.fixture(scope="session")
def sl2_c2(sl2):
    return sl2.with_conductor(2)


@pytest.fixture(scope="session")
def sl3_c2(sl3):
    return sl3.with_conductor(2)


@pytest.fixture(scope="session")
def sl2_c4(sl2):
    return sl2.with_conductor(4)


@pytest.fixture(scope="session")
def sl3_c4(sl3):
    return sl3.with_conductor(4)


@pytest.fixture(scope="session")
def inv_sl2(sl2_c2):
    return outer_involution(sl2_c2, "neg_transpose")


@pytest.fixture(scope="session")
def inv_sl3(sl3_c2):
    return outer_involution(sl3_c2, "neg_transpose")


@pytest.fixture(scope="session")
def inv_sl2_c4(sl2_c4):
    return outer_involution(sl2_c4, "neg_transpose")


@pytest.fixture(scope="session")
def inv_sl3_c4(sl3_c4):
    return outer_involution(sl3_c4, "neg_transpose")


@pytest.fixture(scope="session")
def grading_sl2(inv_sl2):
    return eigenspace_grading(inv_sl2)


@pytest.fixture(scope="session")
def grading_sl3(inv_sl3):
    return eigenspace_grading(inv_sl3)


@pytest.fixture(scope="session")
def sp4_order4():
    """sp4 with the inner order-4 torus automorphism whose fixed block is
    the diagonal Cartan."""
    g = construct_classical("sp", 4).with_conductor(8)
    theta = inner_from_torus(g, (3, 1, 5, 7), 8)
    return g, theta, eigenspace_grading(theta)


@pytest.fixture(scope="session")
def gl3_order3():
    g = construct_classical("gl", 3).with_conductor(3)
    theta = inner_from_torus(g, (0, 1, 2), 3)
    return g, theta, eigenspace_grading(theta)


def coords(g, assignments, conductor=None):
    """Coordinate vector on g from a {label: value} dict."""
    N = conductor if conductor is not None else g.conductor
    vec = [cyc(0, N)] * g.dim
    for label, value in assignments.items():
        vec[g.labels.index(label)] = cyc(value, N) if not hasattr(
            value, "N") else value
    return vec


@pytest.fixture(scope="session")
def sl3_witnesses(sl3_c4):
    """Regular witnesses for the transposition involution on sl3:
    semisimple and nilpotent symmetric matrices, nilpotent antisymmetric."""
    i_ = zeta_pow(4, 1)
    s_reg = coords(sl3_c4, {"H1": 1, "H2": 1})
    n_sym = coords(sl3_c4, {"E12": 1, "E13": i_, "E21": 1, "E31": i_})
    n_anti = coords(sl3_c4, {"E12": 1, "E13": i_, "E21": -1, "E31": -i_})
    return {"S": s_reg, "N": n_sym, "g0": n_anti}
