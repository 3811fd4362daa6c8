"""Degree-slice invariants, block-degree transfer, Poisson structure,
index and the free-generation criterion.

Small invariant slice dimensions are cross-checked against a fully
independent sympy computation (symbolic derivations, sympy nullspace).
"""

import itertools

import pytest
import sympy as sp
from gmpy2 import mpq

from takiffalg.contract import as_quasi, contract, quasi_from_fixedpoints
from takiffalg.invariants import (Polynomial, act_derivation,
                                  argument_shift, block_degree,
                                  coadjoint_index, free_generation_check,
                                  graded_part, graded_span, invariant_basis,
                                  is_invariant, kirillov_matrix,
                                  kostant_bound, peak_summands, poincare,
                                  poisson, restrict, transfer_family,
                                  transport)
from takiffalg.liealg import Subspace, construct_classical, direct_sum
from takiffalg.scalars import cyc
from takiffalg.takiff import takiff
from takiffalg.verify import free_series


# -- independent oracle -----------------------------------------------------------


def sympy_invariant_dim(g, rep, degree):
    """Slice dimension via sympy: generic polynomial with unknown
    coefficients, symbolic derivation action, exact linear solve."""
    n = g.dim
    xs = sp.symbols(f"y0:{n}")
    monos = [m for m in itertools.combinations_with_replacement(range(n),
                                                                degree)]
    coeffs = sp.symbols(f"c0:{len(monos)}")
    F = sum(c * sp.prod([xs[i] for i in m]) for c, m in zip(coeffs, monos))
    equations = []
    for x in range(n):
        # derivation with var_j -> linear action of basis element x
        img = sp.Integer(0)
        for j in range(n):
            lin = sp.Integer(0)
            if rep == "adjoint":
                for l in range(n):
                    for s, cval in g.pair_bracket(x, l):
                        if s == j:
                            lin += -sp.Rational(str(cval.rational_value())) \
                                * xs[l]
            else:
                for s, cval in g.pair_bracket(x, j):
                    lin += sp.Rational(str(cval.rational_value())) * xs[s]
            img += sp.diff(F, xs[j]) * lin
        equations.append(sp.expand(img))
    system = []
    for eq in equations:
        poly = sp.Poly(eq, *xs) if eq != 0 else None
        if poly is None:
            continue
        for _, coeff in poly.terms():
            system.append(coeff)
    if not system:
        return len(monos)
    mat = sp.Matrix([[sp.diff(c, u) for u in coeffs] for c in system])
    return len(coeffs) - mat.rank()


@pytest.mark.parametrize("degree,expected", [(0, 1), (1, 0), (2, 1), (3, 0)])
def test_sl2_adjoint_dims_match_sympy(sl2, degree, expected):
    mine = invariant_basis(sl2, "adjoint", degree).dim
    assert mine == expected
    assert mine == sympy_invariant_dim(sl2, "adjoint", degree)


@pytest.mark.parametrize("degree", [1, 2, 3])
def test_sl3_adjoint_dims_match_sympy(sl3, degree):
    assert invariant_basis(sl3, "adjoint", degree).dim == \
        sympy_invariant_dim(sl3, "adjoint", degree)


@pytest.mark.parametrize("degree", [1, 2])
def test_takiff_sl2_dims_match_sympy(sl2, degree):
    u = takiff(sl2, 2).underlying
    assert invariant_basis(u, "adjoint", degree).dim == \
        sympy_invariant_dim(u, "adjoint", degree)
    assert invariant_basis(u, "coadjoint", degree).dim == \
        sympy_invariant_dim(u, "coadjoint", degree)


# -- series ------------------------------------------------------------------------


def test_sl2_poincare(sl2):
    assert poincare(sl2, "adjoint", 4) == [1, 0, 1, 0, 1]


def test_sl3_poincare_free_on_2_3(sl3):
    series = poincare(sl3, "adjoint", 6)
    assert series == [1, 0, 1, 1, 1, 1, 2]
    assert series == free_series([2, 3], 6)


def test_abelian_poincare():
    gl1 = construct_classical("gl", 1)
    assert poincare(gl1, "adjoint", 2) == [1, 1, 1]


def test_takiff_sl2_poincare(sl2):
    u = takiff(sl2, 2).underlying
    assert poincare(u, "adjoint", 4) == [1, 0, 2, 0, 3]
    assert poincare(u, "adjoint", 4) == free_series([2, 2], 4)


def test_acting_subset_enlarges_invariants(sl2):
    # invariants of the Borel subaction contain the full invariants
    full = invariant_basis(sl2, "adjoint", 2).dim
    partial = invariant_basis(sl2, "adjoint", 2, acting=[0, 1]).dim
    assert partial >= full


# -- derivations and Poisson ---------------------------------------------------------


def test_casimir_is_killed(sl2):
    c2 = invariant_basis(sl2, "adjoint", 2).basis[0]
    assert c2.terms == {(2, 0, 0): cyc(1), (0, 1, 1): cyc(1)}  # h^2 + ef
    for x in range(3):
        assert act_derivation(sl2, "adjoint", x, c2).is_zero()


def test_derivation_kills_constants(sl2):
    one = Polynomial.constant("fun", 3, 1)
    assert act_derivation(sl2, "adjoint", 0, one).is_zero()


def test_poisson_on_generators(sl2):
    h = Polynomial.variable("sym", 3, 0)
    e = Polynomial.variable("sym", 3, 1)
    f = Polynomial.variable("sym", 3, 2)
    assert poisson(sl2, e, f) == h
    assert poisson(sl2, e, e).is_zero()
    # coadjoint action of e on f equals {e, f}
    assert act_derivation(sl2, "coadjoint", 1, f) == h


def test_casimir_is_poisson_central(sl2):
    c2 = invariant_basis(sl2, "coadjoint", 2).basis[0]
    h = Polynomial.variable("sym", 3, 0)
    e = Polynomial.variable("sym", 3, 1)
    G = h * e + e * e
    assert poisson(sl2, c2, G).is_zero()


# -- block degrees, transfer -----------------------------------------------------------


def test_block_degree_split(grading_sl2):
    ga = grading_sl2.algebra
    c2 = invariant_basis(ga, "adjoint", 2).basis[0]
    lo, hi, parts = block_degree(c2, grading_sl2)
    assert (lo, hi) == (0, 2)
    assert set(parts) == {0, 2}                 # mixed part forced to vanish


def test_block_degree_monomials(grading_sl3):
    # variable weights follow the blocks: x in block b has degree b
    v0 = Polynomial.variable("fun", 8, grading_sl3.blocks[0][0], 2)
    v1 = Polynomial.variable("fun", 8, grading_sl3.blocks[1][0], 2)
    lo, hi, _ = block_degree(v0 * v0, grading_sl3)
    assert lo == hi == 0
    lo, hi, _ = block_degree(v0 * v1 * v1, grading_sl3)
    assert lo == hi == 2


def test_graded_part_and_transport(grading_sl2):
    ga = grading_sl2.algebra
    c2 = invariant_basis(ga, "adjoint", 2).basis[0]
    bot = graded_part(c2, grading_sl2, "bottom")
    top = graded_part(c2, grading_sl2, "top")
    assert bot + top == c2
    expansion = transport(c2, grading_sl2)
    assert [j for j, _ in expansion] == [0, 2]
    assert expansion[0][1] == bot and expansion[1][1] == top
    with pytest.raises(ValueError):
        graded_part(Polynomial.zero("fun", 3, 2), grading_sl2, "bottom")


def test_transport_matches_scaling_evaluation(grading_sl3):
    ga = grading_sl3.algebra
    F = invariant_basis(ga, "adjoint", 3).basis[0]
    t = cyc(5, 2)
    point = [cyc(k + 1, 2) for k in range(8)]
    block_of = grading_sl3.block_of
    scaled = [t ** block_of[i] * v for i, v in enumerate(point)]
    direct = F.evaluate(scaled)
    viaparts = sum((t ** j * part.evaluate(point)
                    for j, part in transport(F, grading_sl3)), cyc(0, 2))
    assert direct == viaparts


def test_invariant_transfer_theorem_instances(grading_sl2, grading_sl3):
    for grading in (grading_sl2, grading_sl3):
        ga = grading.algebra
        con = contract(as_quasi(grading))
        for d in (2, 3):
            for F in invariant_basis(ga, "adjoint", d).basis:
                part = graded_part(F, grading, "bottom")
                assert is_invariant(con, "adjoint", part)
            for F in invariant_basis(ga, "coadjoint", d).basis:
                part = graded_part(F, grading, "top")
                assert is_invariant(con, "coadjoint", part)


def test_transfer_through_quasi_grading(inv_sl3):
    qf = quasi_from_fixedpoints(inv_sl3)
    con = contract(qf)
    for F in invariant_basis(qf.algebra, "adjoint", 2).basis:
        assert is_invariant(con, "adjoint",
                            graded_part(F, qf, "bottom"))


def test_graded_span_dimension_equality(grading_sl3):
    """The span of bottom components matches the source slice dimension."""
    ga = grading_sl3.algebra
    for d in range(0, 5):
        basis = invariant_basis(ga, "adjoint", d).basis
        span = graded_span(basis, grading_sl3, "bottom")
        assert len(span) == len(basis)


def test_transfer_family_independence(grading_sl3):
    ga = grading_sl3.algebra
    con = contract(as_quasi(grading_sl3))
    g2 = invariant_basis(ga, "adjoint", 2).basis[0]
    g3 = invariant_basis(ga, "adjoint", 3).basis[0]
    fam = transfer_family([g2, g3], grading_sl3, "bottom", ga, con)
    assert fam.independent and fam.jacobian_rank == 2
    dep = transfer_family([g2, g2 * g2], grading_sl3, "bottom", ga, con)
    assert not dep.independent and dep.jacobian_rank == 1
    assert transfer_family([], grading_sl3, "bottom", ga, con).members == []
    with pytest.raises(ValueError):
        bad = Polynomial.variable("fun", 8, 0, 2)
        transfer_family([bad], grading_sl3, "bottom", ga, con)


# -- index, bound, free generation -------------------------------------------------------


def test_kirillov_matrix_antisymmetric(sl2):
    xi = [cyc(3), cyc(-1), cyc(7)]
    B = kirillov_matrix(sl2, xi)
    for i in range(3):
        assert B[i][i] == 0
        for j in range(3):
            assert B[i][j] == -B[j][i]


def test_index_values(sl2):
    assert coadjoint_index(sl2, 5, 1).value == 1
    tk = takiff(sl2, 2).underlying
    assert coadjoint_index(tk, 5, 1).value == 2
    assert coadjoint_index(direct_sum([sl2, sl2]), 5, 1).value == 2


def test_index_parity_and_witness(sl2):
    rep = coadjoint_index(sl2, 5, 1)
    assert (sl2.dim - rep.value) % 2 == 0
    assert rep.upper_bound_only
    assert len(rep.witness) == 3
    # the witness reproduces the reported value
    from takiffalg import linalg
    assert sl2.dim - linalg.rank(kirillov_matrix(sl2, rep.witness)) == \
        rep.value


def test_index_deterministic(sl2):
    a = coadjoint_index(sl2, 5, 42)
    b = coadjoint_index(sl2, 5, 42)
    assert a.value == b.value and a.witness == b.witness


def test_kostant_bound():
    assert kostant_bound(3, 1) == (mpq(2), True)
    assert kostant_bound(6, 2) == (mpq(4), True)
    assert kostant_bound(4, 1) == (mpq(5, 2), False)


def test_free_generation_certified(sl2):
    c2 = invariant_basis(sl2, "coadjoint", 2).basis[0]
    rep = free_generation_check(sl2, [c2], seed=3)
    assert rep.verdict == "free-generation-certified"
    assert rep.bound == 2 and rep.degree_sum == 2


def test_free_generation_power_exceeds(sl2):
    c2 = invariant_basis(sl2, "coadjoint", 2).basis[0]
    rep = free_generation_check(sl2, [c2 * c2], seed=3)
    assert rep.verdict == "sum-exceeds-b"


def test_free_generation_preconditions(sl2):
    c2 = invariant_basis(sl2, "coadjoint", 2).basis[0]
    h = Polynomial.variable("sym", 3, 0)
    rep = free_generation_check(sl2, [h], seed=3)   # h is not invariant
    assert rep.verdict == "failed-precondition"
    rep2 = free_generation_check(sl2, [c2, c2 * c2], seed=3)  # wrong count
    assert rep2.verdict == "failed-precondition"


# -- restriction, argument shift, peak summands -------------------------------------------


def test_restrict_casimir_to_symmetric_block(grading_sl2):
    ga = grading_sl2.algebra
    c2 = invariant_basis(ga, "adjoint", 2).basis[0]
    blk = Subspace.from_vectors(
        3, [ga.basis_vector(i) for i in grading_sl2.blocks[1]])
    r = restrict(c2, blk)
    assert not r.is_zero() and r.degree() == 2
    zero_sub = Subspace.from_vectors(3, [])
    assert restrict(c2, zero_sub).is_zero()


def test_restrict_sp4_top_invariant(sp4_order4):
    """Degree-4 slice of sp4: the quadratic Casimir square restricts to
    zero on the order-4 degree-1 block, the genuine degree-4 generator
    does not (torus weights leave one degree-4 invariant monomial)."""
    g, theta, grading = sp4_order4
    c2 = invariant_basis(g, "adjoint", 2).basis[0]
    sub = grading.block_subspace(1)
    assert restrict(c2, sub).is_zero()
    slice4 = invariant_basis(g, "adjoint", 4).basis
    assert len(slice4) == 2                    # {casimir^2, new generator}
    restrictions = [restrict(F, sub) for F in slice4]
    assert any(not r.is_zero() for r in restrictions)


def test_argument_shift_family(sl2):
    c2 = invariant_basis(sl2, "coadjoint", 2).basis[0]
    xi = [cyc(1), cyc(2), cyc(5)]
    fam = argument_shift(c2, xi)
    assert len(fam) == 3 and fam[0] == c2 and fam[2].degree() == 0
    for A in fam:
        for B in fam:
            assert poisson(sl2, A, B).is_zero()
    assert argument_shift(c2, [cyc(0)] * 3) == [c2]
    lin = Polynomial.variable("sym", 3, 0)
    shifted = argument_shift(lin, xi)
    assert len(shifted) == 2 and shifted[1].degree() == 0


def test_peak_summands_casimir(grading_sl2):
    ga = grading_sl2.algebra
    c2 = invariant_basis(ga, "coadjoint", 2).basis[0]
    rep = peak_summands(c2, grading_sl2)
    assert rep.at_most_one
    assert len(rep.matches) == 1 and rep.contained_in_top
    # mixing eigenvalues is rejected
    v0 = Polynomial.variable("sym", 3, grading_sl2.blocks[0][0], 2)
    v1 = Polynomial.variable("sym", 3, grading_sl2.blocks[1][0], 2)
    with pytest.raises(ValueError):
        peak_summands(v0 + v1, grading_sl2)


def test_peak_summands_block0_polynomial(grading_sl2):
    q0 = Polynomial.variable("sym", 3, grading_sl2.blocks[0][0], 2)
    rep = peak_summands(q0 * q0, grading_sl2)
    assert rep.matches == [] and rep.at_most_one


def test_peak_summands_sl3_degree3(grading_sl3):
    ga = grading_sl3.algebra
    F = invariant_basis(ga, "coadjoint", 3).basis[0]
    rep = peak_summands(F, grading_sl3)
    assert rep.at_most_one
    if rep.matches:
        assert rep.contained_in_top


def test_polynomial_json_round_trip(sl2):
    c2 = invariant_basis(sl2, "adjoint", 2).basis[0]
    data = c2.to_json()
    back = Polynomial.from_json(data, nvars=3, conductor=1)
    assert back == c2
    assert data["space"] == "fun"


def test_invariant_basis_canonical(sl2):
    a = invariant_basis(sl2, "adjoint", 4)
    b = invariant_basis(sl2, "adjoint", 4)
    assert [p.terms for p in a.basis] == [p.terms for p in b.basis]


def test_nilradical_invariants_polynomial_slices(sl2):
    """Invariants under the nilpotent-radical sub-action of the level-2
    Takiff algebra: the slice dimensions through degree 3 match the free
    algebra on degrees (1,1,1,2), and the low-degree slices carry 4
    algebraically independent elements (the generic orbit has dimension
    2 = rank of ad at a regular base point)."""
    tk = takiff(sl2, 2)
    u = tk.underlying
    radical = [i for i, layer in enumerate(tk.layer_of) if layer == 1]
    dims = [invariant_basis(u, "adjoint", m, acting=radical).dim
            for m in range(4)]
    assert dims == free_series([1, 1, 1, 2], 3)
    gens = []
    for m in (1, 2):
        gens.extend(invariant_basis(u, "adjoint", m, acting=radical).basis)
    from takiffalg.invariants import jacobian_rank
    assert jacobian_rank(gens, seed=2) == 4
    # full invariants embed into the sub-action invariants
    full = invariant_basis(u, "adjoint", 2).dim
    assert dims[2] >= full


def test_argument_shift_on_contraction_generator(grading_sl2):
    """Argument-shift family of the coadjoint generator of the order-2
    contraction: pairwise Poisson-commuting in the contracted algebra."""
    from takiffalg.contract import as_quasi, contract
    con = contract(as_quasi(grading_sl2))
    gen = invariant_basis(con, "coadjoint", 2).basis[0]
    xi = [cyc(2, 2), cyc(-1, 2), cyc(3, 2)]
    family = argument_shift(gen, xi)
    assert len(family) >= 2
    for A in family:
        for B in family:
            assert poisson(con, A, B).is_zero()
