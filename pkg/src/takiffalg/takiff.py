"""Truncated current algebras g<m> ("generalised Takiff algebras"),
automorphism lifts, their eigenspace blocks and the extended form.

Basis ordering is layer-major: all of layer 0 first, then layer 1, ...
with the base algebra's internal order preserved, so lifts are block
diagonal and the extended form pairs layer i with layer m-1-i on the
antidiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .autos import Automorphism, AutomorphismError, PeriodicGrading, \
    eigenspace_grading
from .liealg import BilinearForm, LieAlgebra, Subspace, change_basis, \
    restrict_to_indices
from .scalars import Cyclotomic, zeta_pow

__all__ = [
    "FormEigenReport",
    "TakiffAlgebra",
    "TakiffLift",
    "extend_form",
    "form_eigen_report",
    "hat_component",
    "lift_automorphism",
    "lifted_fixed_algebra",
    "lifted_grading",
    "takiff",
]


@dataclass
class TakiffAlgebra:
    """g<m> = g (x) k[T]/(T^m) with the truncated current bracket."""

    underlying: LieAlgebra
    base: LieAlgebra
    m: int

    @property
    def layer_of(self):
        return tuple(i // self.base.dim for i in range(self.underlying.dim))

    def index(self, base_index: int, layer: int) -> int:
        return layer * self.base.dim + base_index

    def to_json(self):
        data = self.underlying.to_json()
        data["m"] = self.m
        data["layers"] = list(self.layer_of)
        return data


def takiff(g: LieAlgebra, m: int) -> TakiffAlgebra:
    """Layer structure constants [(x,i),(y,j)] = ([x,y], i+j), cut at m."""
    if m < 1:
        raise ValueError(f"Takiff level must be >= 1, got {m}")
    if m == 1:
        return TakiffAlgebra(g, g, 1)
    d = g.dim
    brackets = {}
    for (i, j), terms in g.brackets.items():
        for a in range(m):
            for b in range(m - a):
                key = (a * d + i, b * d + j)
                if key[0] > key[1]:
                    # storage wants first index smaller; swap layers and flip
                    key = (b * d + j, a * d + i)
                    brackets[key] = tuple(
                        ((a + b) * d + k, -c) for k, c in terms)
                else:
                    brackets[key] = tuple(
                        ((a + b) * d + k, c) for k, c in terms)
    labels = [f"{lab}[{layer}]" for layer in range(m) for lab in g.labels]
    tags = [layer for layer in range(m) for _ in range(d)]
    under = LieAlgebra(m * d, g.conductor, brackets, labels, layer_tags=tags)
    return TakiffAlgebra(under, g, m)


@dataclass
class TakiffLift:
    """An automorphism of g<m> obtained by lifting one of g layerwise."""

    takiff: TakiffAlgebra
    auto: Automorphism            # on takiff.underlying
    base_auto: Automorphism       # theta on the base
    variant: str                  # "scaled" (zeta^-i theta) or "plain"


def lift_automorphism(theta: Automorphism, m: int,
                      variant: str = "scaled") -> TakiffLift:
    """Lift theta to g<m>; the scaled variant acts by zeta^-i theta on
    layer i and keeps the order of theta."""
    if variant not in ("scaled", "plain"):
        raise ValueError(f"unknown lift variant {variant!r}")
    g = theta.algebra
    k = theta.order
    if g.conductor % k != 0:
        raise AutomorphismError(
            f"conductor {g.conductor} not divisible by order {k}")
    tk = takiff(g, m)
    d = g.dim
    n = tk.underlying.dim
    zero = Cyclotomic.zero(g.conductor)
    matrix = [[zero] * n for _ in range(n)]
    for layer in range(m):
        scale = zeta_pow(g.conductor, (-(g.conductor // k) * layer) % g.conductor) \
            if variant == "scaled" else None
        for r in range(d):
            for c in range(d):
                v = theta.matrix[r][c]
                if v:
                    matrix[layer * d + r][layer * d + c] = \
                        scale * v if scale is not None else v
    lifted = Automorphism(tk.underlying, matrix, is_inner=theta.is_inner)
    if variant == "scaled" and lifted.order != k:
        raise AutomorphismError(
            f"scaled lift has order {lifted.order}, expected {k}")
    return TakiffLift(tk, lifted, theta, variant)


def lifted_grading(lift: TakiffLift) -> PeriodicGrading:
    """Eigenspace blocks of the scaled lift: block l collects the base
    eigenspaces g_(l+i) placed in layer i, for i = 0..m-1."""
    if lift.variant != "scaled":
        raise ValueError("eigenspace blocks are wired for the scaled lift")
    theta = lift.base_auto
    g = theta.algebra
    k = theta.order
    m = lift.takiff.m
    d = g.dim
    base = eigenspace_grading(theta)
    n = lift.takiff.underlying.dim
    zero = Cyclotomic.zero(g.conductor)
    columns = []
    blocks = []
    labels = []
    tags = []
    pos = 0
    for l in range(k):
        blk = []
        for layer in range(m):
            for c in base.blocks[(l + layer) % k]:
                u = [row[c] for row in base.base_change]
                vec = [zero] * n
                for r in range(d):
                    if u[r]:
                        vec[layer * d + r] = u[r]
                columns.append(vec)
                labels.append(f"g{(l + layer) % k}[{layer}].{pos}")
                tags.append(l)
                blk.append(pos)
                pos += 1
        blocks.append(tuple(blk))
    adapted = change_basis(lift.takiff.underlying, columns, labels=labels,
                           tags=tags)
    base_change = [[columns[c][r] for c in range(n)] for r in range(n)]
    grading = PeriodicGrading(adapted, k, tuple(blocks), base_change,
                              source=lift.takiff.underlying)
    if not grading.closure_ok():
        raise AutomorphismError("lift eigenspace closure law failed")
    # each adapted column really is an eigenvector of the lift
    for l in range(k):
        zl = zeta_pow(g.conductor, (g.conductor // k) * l)
        for c in blocks[l]:
            col = [row[c] for row in base_change]
            image = lift.auto.apply(col)
            if any(a - zl * b for a, b in zip(image, col)):
                raise AutomorphismError("lift eigenvector check failed")
    return grading


def hat_component(grading: PeriodicGrading, i: int) -> Subspace:
    """Eigenspace block i as a subspace in the original coordinates."""
    return grading.block_subspace(i)


def lifted_fixed_algebra(lift: TakiffLift,
                         grading: PeriodicGrading | None = None) -> LieAlgebra:
    """Fixed-point subalgebra of the scaled lift as a standalone algebra,
    with layer-major basis g_0[0], g_1[1], ..., g_(m-1)[m-1]."""
    grading = grading if grading is not None else lifted_grading(lift)
    sub = restrict_to_indices(grading.algebra, grading.blocks[0])
    # re-tag by layer so the semidirect tower structure is visible
    m = lift.takiff.m
    k = lift.base_auto.order
    base = eigenspace_grading(lift.base_auto)
    tags = []
    for layer in range(m):
        tags.extend([layer] * len(base.blocks[layer % k]))
    return LieAlgebra(sub.dim, sub.conductor, sub.brackets, sub.labels,
                      layer_tags=tags)


def extend_form(b: BilinearForm, m: int) -> BilinearForm:
    """Pair layer i against layer m-1-i with the base form values."""
    base = b.matrix
    d = len(base)
    n = m * d
    zero = base[0][0] * 0
    mat = [[zero] * n for _ in range(n)]
    for li in range(m):
        lj = m - 1 - li
        for i in range(d):
            for j in range(d):
                if base[i][j]:
                    mat[li * d + i][lj * d + j] = base[i][j]
    return BilinearForm(mat, source=f"extended({b.source})")


@dataclass
class FormEigenReport:
    c: int                        # theta-eigenvalue exponent of the base form
    hat_exponent: int             # exponent of the lift eigenvalue, mod k
    hat_eigenvalue: Cyclotomic
    dual_index: dict              # block i -> block pairing under the form
    fixed_block_quadratic: bool


def _form_eigen_exponent(theta: Automorphism, b: BilinearForm) -> int:
    """c with b(theta x, theta y) = zeta^c b(x, y), or raise."""
    g = theta.algebra
    k = theta.order
    At = linalg.transpose(theta.matrix)
    M = linalg.mat_mul(linalg.mat_mul(At, b.matrix), theta.matrix)
    for c in range(k):
        zc = zeta_pow(g.conductor, (g.conductor // k) * c)
        if all(M[i][j] == zc * b.matrix[i][j]
               for i in range(g.dim) for j in range(g.dim)):
            return c
    raise AutomorphismError("form is not an eigenvector of the automorphism")


def form_eigen_report(lift: TakiffLift, b: BilinearForm,
                      grading: PeriodicGrading | None = None) -> FormEigenReport:
    """Eigenvalue of the extended form under the lift and the induced
    duality pairing between eigenspace blocks."""
    theta = lift.base_auto
    g = theta.algebra
    k = theta.order
    m = lift.takiff.m
    N = g.conductor
    c = _form_eigen_exponent(theta, b)
    bhat = extend_form(b, m)
    At = linalg.transpose(lift.auto.matrix)
    M = linalg.mat_mul(linalg.mat_mul(At, bhat.matrix), lift.auto.matrix)
    expo = (c + 1 - m) % k
    lam = zeta_pow(N, (N // k) * expo)
    n = len(bhat.matrix)
    if any(M[i][j] != lam * bhat.matrix[i][j]
           for i in range(n) for j in range(n)):
        raise AutomorphismError("extended form eigenvalue check failed")
    grading = grading if grading is not None else lifted_grading(lift)
    # observed pairing: blocks i, j with bhat nonzero on them
    P = grading.base_change
    Pt = linalg.transpose(P)
    pairing = linalg.mat_mul(linalg.mat_mul(Pt, bhat.matrix), P)
    block_of = grading.block_of
    observed: dict[int, set] = {i: set() for i in range(k)}
    for i in range(n):
        for j in range(n):
            if pairing[i][j]:
                observed[block_of[i]].add(block_of[j])
    dual = {}
    for i in range(k):
        expected = (c + 1 - m - i) % k
        if observed[i] and observed[i] != {expected}:
            raise AutomorphismError(
                f"block {i} pairs with {sorted(observed[i])}, "
                f"expected {expected}")
        dual[i] = expected
    # quadratic fixed block: form restricted to block 0 nondegenerate
    idx0 = grading.blocks[0]
    sub = [[pairing[i][j] for j in idx0] for i in idx0]
    quadratic = bool(idx0) and dual[0] == 0 and \
        linalg.rank(sub) == len(idx0)
    return FormEigenReport(c, expo, lam, dual, quadratic)
