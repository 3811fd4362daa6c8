"""Truncated current algebras, automorphism lifts, eigenspace blocks and
the antidiagonal form extension."""

import pytest

from takiffalg.autos import identity_automorphism
from takiffalg.contract import (compare_structure, identity_map,
                                semidirect_tower)
from takiffalg.liealg import construct_classical, invariant_form, validate
from takiffalg.takiff import (extend_form, form_eigen_report,
                              lift_automorphism, lifted_fixed_algebra,
                              lifted_grading, takiff)


def test_truncation_rule(sl2):
    tk = takiff(sl2, 2)
    u = tk.underlying
    assert u.dim == 6 and validate(u).ok
    e0 = u.basis_vector(tk.index(1, 0))
    f1 = u.basis_vector(tk.index(2, 1))
    v = u.bracket(e0, f1)
    assert v[tk.index(0, 1)] == 1 and sum(1 for x in v if x) == 1
    e1 = u.basis_vector(tk.index(1, 1))
    assert all(x == 0 for x in u.bracket(e1, f1))


def test_level_one_is_identity(sl2):
    assert takiff(sl2, 1).underlying is sl2


def test_level_zero_rejected(sl2):
    with pytest.raises(ValueError):
        takiff(sl2, 0)


def test_abelian_base():
    gl1 = construct_classical("gl", 1)
    tk = takiff(gl1, 3)
    assert tk.underlying.dim == 3 and not tk.underlying.brackets


def test_layer_tags_and_dims(sl3):
    tk = takiff(sl3, 4)
    assert tk.underlying.dim == 4 * 8
    assert tk.layer_of == tuple(i // 8 for i in range(32))
    assert validate(tk.underlying).ok


def test_lift_identity_is_identity(sl2):
    lift = lift_automorphism(identity_automorphism(sl2), 2)
    assert lift.auto.order == 1


def test_lift_keeps_order(inv_sl3):
    for m in (2, 3, 4):
        lift = lift_automorphism(inv_sl3, m)
        assert lift.auto.order == 2
    plain = lift_automorphism(inv_sl3, 3, variant="plain")
    assert plain.auto.order == 2


def test_lift_bracket_preservation(inv_sl3):
    from takiffalg.autos import validate_automorphism
    lift = lift_automorphism(inv_sl3, 2)
    assert validate_automorphism(lift.auto)["ok"]


def test_lift_order_sp4(sp4_order4):
    _, theta, _ = sp4_order4
    lift = lift_automorphism(theta, 4)
    assert lift.auto.order == 4


def test_eigenspace_block_dims(inv_sl3):
    lift = lift_automorphism(inv_sl3, 2)
    grading = lifted_grading(lift)
    assert grading.block_dims() == (8, 8)          # (3+5, 5+3)
    fx = lifted_fixed_algebra(lift, grading)
    assert fx.dim == 8 and validate(fx).ok
    assert fx.layer_tags == (0, 0, 0, 1, 1, 1, 1, 1)


def test_eigenspace_block_dims_sp4(sp4_order4):
    _, theta, _ = sp4_order4
    lift = lift_automorphism(theta, 4)
    grading = lifted_grading(lift)
    assert grading.block_dims() == (10, 10, 10, 10)


def test_plain_lift_fixed_algebra_is_takiff_of_fixed(inv_sl3):
    """The unscaled lift fixes the Takiff algebra of the fixed subalgebra."""
    from takiffalg.autos import eigenspace_grading
    lift = lift_automorphism(inv_sl3, 3, variant="plain")
    base = eigenspace_grading(inv_sl3)
    # fixed space of the plain lift = fixed block in every layer
    fixed_dim = 0
    mat = lift.auto.matrix
    n = len(mat)
    from takiffalg import linalg
    shifted = [[mat[r][c] - (1 if r == c else 0) for c in range(n)]
               for r in range(n)]
    fixed_dim = len(linalg.nullspace(shifted, n))
    assert fixed_dim == 3 * len(base.blocks[0])


def test_fixed_algebra_equals_tower(inv_sl3):
    from takiffalg.autos import eigenspace_grading
    base = eigenspace_grading(inv_sl3)
    for m in (2, 3, 4):
        lift = lift_automorphism(inv_sl3, m)
        fx = lifted_fixed_algebra(lift)
        tower = semidirect_tower(base, m)
        assert compare_structure(fx, tower,
                                 identity_map(tower.dim, tower.conductor))


def test_extend_form_values(sl2):
    B = invariant_form(sl2)
    BH = extend_form(B, 2)
    tk = takiff(sl2, 2)
    i_e0, i_f1, i_f0 = tk.index(1, 0), tk.index(2, 1), tk.index(2, 0)
    assert BH.matrix[i_e0][i_f1] == 4          # pairs layer 0 with layer 1
    assert BH.matrix[i_e0][i_f0] == 0
    assert BH.is_symmetric() and BH.is_nondegenerate()
    assert BH.is_invariant(tk.underlying)
    assert extend_form(B, 1).matrix == B.matrix


def test_extended_form_invariance_level3(sl2):
    BH3 = extend_form(invariant_form(sl2), 3)
    assert BH3.is_invariant(takiff(sl2, 3).underlying)


@pytest.mark.parametrize("m,expo", [(2, 1), (3, 0), (4, 1)])
def test_form_eigenvalue_involutions(inv_sl2, inv_sl3, m, expo):
    for theta in (inv_sl2, inv_sl3):
        B = invariant_form(theta.algebra)
        lift = lift_automorphism(theta, m)
        rep = form_eigen_report(lift, B)
        assert rep.c == 0
        assert rep.hat_exponent == expo
        assert rep.hat_eigenvalue == (1 if expo == 0 else -1)
        for i in (0, 1):
            assert rep.dual_index[i] == (1 - m - i) % 2
        assert rep.fixed_block_quadratic == (m % 2 == 1)


def test_form_eigenvalue_identity(sl2):
    lift = lift_automorphism(identity_automorphism(sl2), 1)
    rep = form_eigen_report(lift, invariant_form(sl2))
    assert rep.hat_eigenvalue == 1 and rep.c == 0


def test_takiff_json(sl2):
    tk = takiff(sl2, 2)
    data = tk.to_json()
    assert data["m"] == 2 and data["layers"] == [0, 0, 0, 1, 1, 1]
    assert data["dim"] == 6


def test_hat_component_subspaces(inv_sl3):
    from takiffalg.takiff import hat_component
    lift = lift_automorphism(inv_sl3, 2)
    grading = lifted_grading(lift)
    block0 = hat_component(grading, 0)
    block1 = hat_component(grading, 1)
    assert block0.dim == 8 and block1.dim == 8
    assert block0.ambient_dim == 16
    # block 0 contains the layer-0 embedding of a fixed vector
    col = [row[grading.blocks[0][0]] for row in grading.base_change]
    assert block0.contains(col)
    assert not block1.contains(col)
