"""Periodic automorphisms and the gradings cut out by their eigenspaces.

A PeriodicGrading materializes the eigenspace decomposition as an explicit
base change, so every downstream construction (contractions, block degree
bookkeeping) works on coordinate index sets only.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .liealg import (ConstructionError, LieAlgebra, Subspace, change_basis,
                     coords_to_matrix, matrix_to_coords,
                     restrict_to_indices)
from .scalars import Cyclotomic, cyc, zeta_pow

__all__ = [
    "Automorphism",
    "AutomorphismError",
    "PeriodicGrading",
    "cyclic_shift",
    "eigenspace_grading",
    "extend_to_copies",
    "fixed_subalgebra",
    "identity_automorphism",
    "inner_from_torus",
    "outer_involution",
    "validate_automorphism",
    "vandermonde_grading",
]

ORDER_CAP = 48


class AutomorphismError(ValueError):
    pass


class Automorphism:
    """Invertible bracket-preserving map of finite order, as a matrix."""

    __slots__ = ("algebra", "matrix", "order", "columns", "is_inner", "_meta")

    def __init__(self, algebra: LieAlgebra, matrix, order: int | None = None,
                 is_inner: bool = False, meta: dict | None = None):
        self.algebra = algebra
        self.matrix = [list(row) for row in matrix]
        self.columns = [
            tuple((i, self.matrix[i][j]) for i in range(algebra.dim)
                  if self.matrix[i][j])
            for j in range(algebra.dim)]
        self.order = order if order is not None else _matrix_order(self.matrix)
        self.is_inner = is_inner
        self._meta = meta or {}

    def apply(self, vec):
        n = self.algebra.dim
        zero = Cyclotomic.zero(self.algebra.conductor)
        out = [zero] * n
        for j, v in enumerate(vec):
            if v:
                for i, m in self.columns[j]:
                    out[i] = out[i] + m * v
        return out

    def apply_basis(self, j: int):
        n = self.algebra.dim
        zero = Cyclotomic.zero(self.algebra.conductor)
        out = [zero] * n
        for i, m in self.columns[j]:
            out[i] = m
        return out

    def to_json(self):
        return {"matrix": [[c.to_json() for c in row] for row in self.matrix],
                "order": self.order}

    def __repr__(self):
        return f"<Automorphism order={self.order} on dim {self.algebra.dim}>"


def _matrix_order(matrix, cap: int = ORDER_CAP) -> int:
    n = len(matrix)
    one = Cyclotomic.one(matrix[0][0].N)
    ident = linalg.identity_matrix(n, one)
    power = matrix
    for k in range(1, cap + 1):
        if power == ident:
            return k
        power = linalg.mat_mul(power, matrix)
    raise AutomorphismError(f"order exceeds cap {cap}; not periodic?")


@dataclass
class PeriodicGrading:
    """Z_k-grading in an adapted basis; block i spans the zeta^i eigenspace."""

    algebra: LieAlgebra          # rewritten in the adapted basis
    k: int
    blocks: tuple                # k index tuples partitioning range(dim)
    base_change: list            # columns = adapted basis in old coordinates
    source: LieAlgebra | None = None

    @property
    def block_of(self):
        out = [0] * self.algebra.dim
        for b, idxs in enumerate(self.blocks):
            for i in idxs:
                out[i] = b
        return out

    def block_dims(self):
        return tuple(len(b) for b in self.blocks)

    def block_subspace(self, i: int) -> Subspace:
        cols = [tuple(self.base_change[r][c] for r in range(len(self.base_change)))
                for c in self.blocks[i]]
        return Subspace.from_vectors(len(self.base_change), cols)

    def coords_in_adapted(self, vec):
        """Rewrite a vector from original to adapted coordinates."""
        inv = linalg.inverse(self.base_change)
        return linalg.mat_vec(inv, list(vec))

    def closure_ok(self) -> bool:
        block_of = self.block_of
        for (i, j), terms in self.algebra.brackets.items():
            target = (block_of[i] + block_of[j]) % self.k
            if any(block_of[k] != target for k, _ in terms):
                return False
        return True

    def to_json(self):
        return {"k": self.k, "blocks": [list(b) for b in self.blocks],
                "base_change": [[c.to_json() for c in row]
                                for row in self.base_change]}


def validate_automorphism(theta: Automorphism) -> dict:
    """Invertibility, bracket preservation on basis pairs, exact order."""
    g = theta.algebra
    failures = []
    if linalg.rank(theta.matrix) != g.dim:
        failures.append({"kind": "not-invertible"})
    else:
        for i in range(g.dim):
            xi = theta.apply_basis(i)
            for j in range(i + 1, g.dim):
                lhs = theta.apply(g.bracket(g.basis_vector(i),
                                            g.basis_vector(j)))
                rhs = g.bracket(xi, theta.apply_basis(j))
                if any(a - b for a, b in zip(lhs, rhs)):
                    failures.append({"kind": "bracket", "pair": (i, j)})
                    break
            if failures:
                break
    try:
        true_order = _matrix_order(theta.matrix)
        if true_order != theta.order:
            failures.append({"kind": "order", "expected": theta.order,
                             "actual": true_order})
    except AutomorphismError as exc:
        failures.append({"kind": "order", "error": str(exc)})
    return {"ok": not failures, "failures": failures}


def eigenspace_grading(theta: Automorphism) -> PeriodicGrading:
    """Adapted eigenbasis grading computed by exact nullspaces of A - z^i."""
    g = theta.algebra
    k = theta.order
    if g.conductor % k != 0:
        raise AutomorphismError(
            f"conductor {g.conductor} not divisible by order {k}")
    n = g.dim
    columns = []
    blocks = []
    pos = 0
    for i in range(k):
        zi = zeta_pow(g.conductor, (g.conductor // k) * i)
        shifted = [[theta.matrix[r][c] - (zi if r == c else 0)
                    for c in range(n)] for r in range(n)]
        eig = linalg.nullspace(shifted, n)
        blocks.append(tuple(range(pos, pos + len(eig))))
        pos += len(eig)
        columns.extend(eig)
    if pos != n:
        raise AutomorphismError("eigenspaces do not fill the algebra")
    tags = [0] * n
    for b, idxs in enumerate(blocks):
        for i in idxs:
            tags[i] = b
    base_change = [[columns[c][r] for c in range(n)] for r in range(n)]
    adapted = change_basis(g, columns, labels=[f"g{tags[i]}.{i}"
                                               for i in range(n)], tags=tags)
    grading = PeriodicGrading(adapted, k, tuple(blocks), base_change, source=g)
    if not grading.closure_ok():
        raise AutomorphismError("eigenspace closure law failed")
    return grading


def fixed_subalgebra(theta: Automorphism, with_embedding: bool = False):
    """Block 0 of the eigenspace grading as a standalone algebra."""
    grading = eigenspace_grading(theta)
    sub = restrict_to_indices(grading.algebra, grading.blocks[0])
    if with_embedding:
        vectors = [tuple(theta_col) for theta_col in
                   ([row[c] for row in grading.base_change]
                    for c in grading.blocks[0])]
        return sub, vectors
    return sub


def inner_from_torus(g: LieAlgebra, weights, order: int) -> Automorphism:
    """Conjugation by diag(zeta^w_0, ..., zeta^w_{n-1}) with zeta of
    the given order, on a matrix-realized algebra."""
    if g.matrix_basis is None:
        raise ConstructionError("inner_from_torus needs a matrix realization")
    size = len(g.matrix_basis[0])
    if len(weights) != size:
        raise ConstructionError(
            f"need {size} weights, got {len(weights)}")
    if g.conductor % order != 0:
        raise AutomorphismError(
            f"conductor {g.conductor} not divisible by {order}")
    N = g.conductor
    step = N // order
    cols = []
    for b in range(g.dim):
        mat = coords_to_matrix(g, g.basis_vector(b))
        conj = [[mat[r][c] * zeta_pow(N, step * (weights[r] - weights[c]))
                 for c in range(size)] for r in range(size)]
        coords = matrix_to_coords(g, conj)
        if coords is None:
            raise AutomorphismError(
                "conjugated basis element leaves the algebra")
        cols.append(coords)
    matrix = [[cols[c][r] for c in range(g.dim)] for r in range(g.dim)]
    return Automorphism(g, matrix, is_inner=True,
                        meta={"weights": tuple(weights), "torus_order": order})


def outer_involution(g: LieAlgebra, variant: str) -> Automorphism:
    """The standard order-2 outer automorphisms of the classical series."""
    if g.matrix_basis is None:
        raise ConstructionError("outer_involution needs a matrix realization")
    size = len(g.matrix_basis[0])
    if variant == "neg_transpose":
        if g.kind not in ("sl", "gl"):
            raise ConstructionError("neg_transpose lives on sl/gl")
        def act(mat):
            return [[-mat[c][r] for c in range(size)] for r in range(size)]
    elif variant == "neg_sympl_transpose":
        if g.kind not in ("sl", "gl") or size % 2:
            raise ConstructionError(
                "neg_sympl_transpose needs sl/gl of even size")
        m = size // 2
        def act(mat):
            t = [[mat[c][r] for c in range(size)] for r in range(size)]
            # J (x^T) J^{-1} with J = [[0, I], [-I, 0]]
            out = [[cyc(0, g.conductor)] * size for _ in range(size)]
            for r in range(size):
                for c in range(size):
                    sr = (r + m) % size
                    sc = (c + m) % size
                    sign = 1
                    if r >= m:
                        sign = -sign
                    if c >= m:
                        sign = -sign
                    out[r][c] = -sign * t[sr][sc]
            return out
    elif variant == "conj_by_reflection":
        if g.kind != "so":
            raise ConstructionError("conj_by_reflection lives on so")
        def act(mat):
            return [[mat[r][c] * (-1 if (r == size - 1) != (c == size - 1)
                                  else 1)
                     for c in range(size)] for r in range(size)]
    else:
        raise ConstructionError(f"unknown involution variant {variant!r}")
    cols = []
    for b in range(g.dim):
        image = act(coords_to_matrix(g, g.basis_vector(b)))
        coords = matrix_to_coords(g, image)
        if coords is None:
            raise AutomorphismError("involution image leaves the algebra")
        cols.append(coords)
    matrix = [[cols[c][r] for c in range(g.dim)] for r in range(g.dim)]
    theta = Automorphism(g, matrix, meta={"variant": variant})
    if theta.order not in (1, 2):
        raise AutomorphismError(f"expected an involution, order {theta.order}")
    return theta


def identity_automorphism(g: LieAlgebra) -> Automorphism:
    return Automorphism(g, linalg.identity_matrix(
        g.dim, Cyclotomic.one(g.conductor)), order=1)


def cyclic_shift(g: LieAlgebra, n: int) -> Automorphism:
    """Order-n rotation of the summands of n copies of g (built internally);
    the fixed subalgebra is the diagonal copy."""
    return extend_to_copies(identity_automorphism(g), n)


def extend_to_copies(theta: Automorphism, n: int) -> Automorphism:
    """Rotation-with-twist on n copies: (a_1, ..., a_n) -> (a_2, ..., theta a_1).

    The result lives on the direct sum of n copies (its .algebra) and has
    order n*|theta|.
    """
    from .liealg import direct_sum
    g = theta.algebra
    k = theta.order
    if n < 1:
        raise ConstructionError("need n >= 1")
    if n == 1:
        return theta
    if g.conductor % (n * k) != 0:
        raise AutomorphismError(
            f"conductor {g.conductor} not divisible by {n * k}")
    nq = direct_sum([g] * n)
    d = g.dim
    zero = Cyclotomic.zero(g.conductor)
    matrix = [[zero] * nq.dim for _ in range(nq.dim)]
    for copy in range(1, n):
        for b in range(d):
            matrix[(copy - 1) * d + b][copy * d + b] = Cyclotomic.one(
                g.conductor)
    for b in range(d):
        for r in range(d):
            if theta.matrix[r][b]:
                matrix[(n - 1) * d + r][b] = theta.matrix[r][b]
    tilde = Automorphism(nq, matrix, order=n * k, is_inner=False,
                         meta={"copies": n, "base_order": k})
    if _matrix_order(tilde.matrix) != n * k:
        raise AutomorphismError("twisted rotation has unexpected order")
    return tilde


def vandermonde_grading(theta: Automorphism, n: int) -> PeriodicGrading:
    """Grading of n copies by the rotation-with-twist automorphism, in the
    explicit eigenbasis (x, mu^j x, ..., mu^((n-1)j) x) with mu^n = zeta."""
    tilde = extend_to_copies(theta, n)
    nq = tilde.algebra
    g = theta.algebra
    k = theta.order
    N = g.conductor
    if n == 1:
        return eigenspace_grading(theta)
    base = eigenspace_grading(theta)
    d = g.dim
    nk = n * k
    mu_step = N // nk
    columns = []
    blocks = []
    labels = []
    tags = []
    pos = 0
    for j in range(nk):
        jbar = j % k
        blk = []
        for c in base.blocks[jbar]:
            u = [row[c] for row in base.base_change]
            vec = []
            for copy in range(n):
                mu_pow = zeta_pow(N, mu_step * j * copy)
                vec.extend(mu_pow * x for x in u)
            columns.append(vec)
            labels.append(f"g{j}.{pos}")
            tags.append(j)
            blk.append(pos)
            pos += 1
        blocks.append(tuple(blk))
    base_change = [[columns[c][r] for c in range(nq.dim)]
                   for r in range(nq.dim)]
    adapted = change_basis(nq, columns, labels=labels, tags=tags)
    grading = PeriodicGrading(adapted, nk, tuple(blocks), base_change,
                              source=nq)
    if not grading.closure_ok():
        raise AutomorphismError("twisted eigenbasis closure law failed")
    # the explicit columns must diagonalize the rotation automorphism
    for j in range(nk):
        zj = zeta_pow(N, mu_step * j)
        for c in blocks[j]:
            col = [row[c] for row in base_change]
            image = tilde.apply(col)
            if any(a - zj * b for a, b in zip(image, col)):
                raise AutomorphismError("eigenvector formula failed")
    return grading
