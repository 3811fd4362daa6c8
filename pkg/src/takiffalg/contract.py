"""Quasi-graded structures, contracted brackets and the scaling family.

A quasi-grading of order k demands [q_i, q_j] inside q_(i+j) only when
i+j <= k-1; the contraction zeroes every bracket component that would
overflow.  Contractions are computed symbolically on structure constants,
never by numeric limits; the scaling family exists to test the limit
statement.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .autos import Automorphism, PeriodicGrading, eigenspace_grading
from .liealg import ConstructionError, LieAlgebra, change_basis, direct_sum
from .scalars import Cyclotomic, cyc

__all__ = [
    "QuasiGrading",
    "QuasiGradingError",
    "as_quasi",
    "compare_structure",
    "contract",
    "identity_map",
    "isotropy_contraction",
    "quasi_from_fixedpoints",
    "scaled_algebra",
    "scaling_exponents",
    "semidirect_tower",
    "validate_quasigrading",
]


class QuasiGradingError(ValueError):
    pass


@dataclass
class QuasiGrading:
    """Ordered block decomposition with the one-sided closure law."""

    algebra: LieAlgebra           # adapted basis: blocks are index sets
    k: int
    blocks: tuple
    base_change: list | None = None   # to original coordinates, if any
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

    def to_json(self):
        data = {"k": self.k, "blocks": [list(b) for b in self.blocks]}
        if self.base_change is not None:
            data["base_change"] = [[c.to_json() for c in row]
                                   for row in self.base_change]
        return data


def as_quasi(grading: PeriodicGrading) -> QuasiGrading:
    """A periodic (mod-k) grading, viewed as a quasi-grading of order k."""
    return QuasiGrading(grading.algebra, grading.k, grading.blocks,
                        grading.base_change, grading.source)


def validate_quasigrading(qg: QuasiGrading) -> dict:
    """Exact closure check; failures come back with a witness pair."""
    failures = []
    seen = sorted(i for blk in qg.blocks for i in blk)
    if seen != list(range(qg.algebra.dim)) or len(qg.blocks) != qg.k:
        failures.append({"kind": "partition"})
        return {"ok": False, "failures": failures}
    block_of = qg.block_of
    for (i, j), terms in qg.algebra.brackets.items():
        s = block_of[i] + block_of[j]
        if s <= qg.k - 1:
            for t, _ in terms:
                if block_of[t] != s:
                    failures.append({"kind": "closure", "pair": (i, j),
                                     "target": t})
                    return {"ok": False, "failures": failures}
    return {"ok": True, "failures": []}


def contract(qg: QuasiGrading) -> LieAlgebra:
    """Zero every bracket with block sum >= k; output is N-graded by blocks."""
    report = validate_quasigrading(qg)
    if not report["ok"]:
        raise QuasiGradingError(f"invalid quasi-grading: {report['failures']}")
    g = qg.algebra
    block_of = qg.block_of
    brackets = {}
    for (i, j), terms in g.brackets.items():
        if block_of[i] + block_of[j] <= qg.k - 1:
            brackets[(i, j)] = terms
    return LieAlgebra(g.dim, g.conductor, brackets, g.labels,
                      layer_tags=block_of)


def scaling_exponents(qg: QuasiGrading) -> dict:
    """(i, j) -> ((target, exponent, coeff), ...) for the family q_(t):
    each structure constant of q_(t) is t^(bi+bj-bs) times the original."""
    block_of = qg.block_of
    out = {}
    for (i, j), terms in qg.algebra.brackets.items():
        out[(i, j)] = tuple(
            (t, block_of[i] + block_of[j] - block_of[t], c)
            for t, c in terms)
    return out


def scaled_algebra(qg: QuasiGrading, t) -> LieAlgebra:
    """The isomorphic rescaled algebra q_(t), t != 0 (exact arithmetic)."""
    g = qg.algebra
    tval = t if isinstance(t, Cyclotomic) else cyc(t, g.conductor)
    if not tval:
        raise QuasiGradingError("scaling parameter must be nonzero")
    brackets = {}
    for (i, j), terms in scaling_exponents(qg).items():
        new = tuple((tgt, (tval ** e) * c) for tgt, e, c in terms)
        brackets[(i, j)] = new
    return LieAlgebra(g.dim, g.conductor, brackets, g.labels,
                      layer_tags=g.layer_tags)


def isotropy_contraction(g: LieAlgebra, h_block) -> LieAlgebra:
    """Order-2 contraction h |x m: the complement of the subalgebra
    h_block is made abelian."""
    h = sorted(h_block)
    hset = set(h)
    m = [i for i in range(g.dim) if i not in hset]
    for i in h:
        for j in h:
            if i < j:
                for t, _ in g.pair_bracket(i, j):
                    if t not in hset:
                        raise ConstructionError(
                            f"h_block not a subalgebra: [{i},{j}] -> {t}")
        for j in m:
            for t, _ in g.pair_bracket(i, j):
                if t in hset:
                    raise ConstructionError(
                        f"complement is not h-stable: [{i},{j}] -> {t}")
    perm = h + m
    inv = {old: new for new, old in enumerate(perm)}
    brackets = {}
    for (i, j), terms in g.brackets.items():
        a, b = inv[i], inv[j]
        key = (a, b) if a < b else (b, a)
        sign = 1 if a < b else -1
        brackets[key] = tuple(sorted(
            (inv[t], c if sign == 1 else -c) for t, c in terms))
    labels = [g.labels[i] for i in perm]
    reordered = LieAlgebra(g.dim, g.conductor, brackets, labels,
                           layer_tags=[0] * len(h) + [1] * len(m))
    qg = QuasiGrading(reordered, 2,
                      (tuple(range(len(h))),
                       tuple(range(len(h), g.dim))))
    return contract(qg)


def quasi_from_fixedpoints(theta: Automorphism,
                           grading: PeriodicGrading | None = None
                           ) -> QuasiGrading:
    """Order k+1 quasi-grading on g0 (+) g with blocks: the diagonal copy
    of g0, the eigenspaces g_1..g_(k-1), and the second copy of g0."""
    grading = grading if grading is not None else eigenspace_grading(theta)
    g = grading.source if grading.source is not None else theta.algebra
    adapted = grading.algebra
    k = grading.k
    d0 = len(grading.blocks[0])
    from .liealg import restrict_to_indices
    fixed = restrict_to_indices(adapted, grading.blocks[0])
    ambient = direct_sum([fixed, adapted])
    n = ambient.dim
    zero = Cyclotomic.zero(ambient.conductor)
    one = Cyclotomic.one(ambient.conductor)
    columns = []
    labels = []
    tags = []
    blocks = []
    # block 0: diagonal (x, x) over the fixed part
    blk = []
    for a, idx in enumerate(grading.blocks[0]):
        vec = [zero] * n
        vec[a] = one
        vec[d0 + idx] = one
        columns.append(vec)
        labels.append(f"diag.{a}")
        tags.append(0)
        blk.append(len(columns) - 1)
    blocks.append(tuple(blk))
    # blocks 1..k-1: the middle eigenspaces of the second copy
    for b in range(1, k):
        blk = []
        for idx in grading.blocks[b]:
            vec = [zero] * n
            vec[d0 + idx] = one
            columns.append(vec)
            labels.append(adapted.labels[idx])
            tags.append(b)
            blk.append(len(columns) - 1)
        blocks.append(tuple(blk))
    # block k: the second copy of g0
    blk = []
    for a, idx in enumerate(grading.blocks[0]):
        vec = [zero] * n
        vec[d0 + idx] = one
        columns.append(vec)
        labels.append(f"tail.{a}")
        tags.append(k)
        blk.append(len(columns) - 1)
    blocks.append(tuple(blk))
    rewritten = change_basis(ambient, columns, labels=labels, tags=tags)
    base_change = [[columns[c][r] for c in range(n)] for r in range(n)]
    qg = QuasiGrading(rewritten, k + 1, tuple(blocks), base_change,
                      source=ambient)
    report = validate_quasigrading(qg)
    if not report["ok"]:
        raise QuasiGradingError(
            f"fixed-point quasi-grading failed: {report['failures']}")
    return qg


def semidirect_tower(grading: PeriodicGrading, m: int) -> LieAlgebra:
    """The iterated semidirect product g_0 |x g_1 |x ... |x g_(m-1), built
    directly from the adapted eigenbasis blocks (subscripts mod k)."""
    adapted = grading.algebra
    k = grading.k
    index = []
    tags = []
    for layer in range(m):
        for idx in grading.blocks[layer % k]:
            index.append((idx, layer))
            tags.append(layer)
    pos = {pair: p for p, pair in enumerate(index)}
    brackets = {}
    for p, (i, li) in enumerate(index):
        for q in range(p + 1, len(index)):
            j, lj = index[q]
            if li + lj >= m:
                continue
            terms = []
            for t, c in adapted.pair_bracket(i, j):
                terms.append((pos[(t, li + lj)], c))
            if terms:
                brackets[(p, q)] = tuple(sorted(terms))
    labels = [f"{adapted.labels[i]}[{layer}]" for i, layer in index]
    return LieAlgebra(len(index), adapted.conductor, brackets, labels,
                      layer_tags=tags)


def compare_structure(a: LieAlgebra, b: LieAlgebra, basis_map) -> bool:
    """True iff the invertible map intertwines the two bracket tables."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    n = a.dim
    cols = [[basis_map[r][c] for r in range(n)] for c in range(n)]
    if linalg.rank(basis_map) != n:
        raise ValueError("basis map is not invertible")
    for i in range(n):
        for j in range(i + 1, n):
            image = b.bracket(cols[i], cols[j])
            expected = [Cyclotomic.zero(b.conductor)] * n
            for t, c in a.pair_bracket(i, j):
                expected = [x + c * y for x, y in zip(expected, cols[t])]
            if any(x - y for x, y in zip(image, expected)):
                return False
    return True


def identity_map(n: int, conductor: int):
    return linalg.identity_matrix(n, Cyclotomic.one(conductor))
