"""Lie algebras by sparse structure constants over a cyclotomic field.

Classical constructors keep their defining matrix realization attached,
which later feeds matrix-level automorphisms (transpose, torus
conjugation) and witness handling.  Bracket tables store only pairs
i < j; the rest is implied by antisymmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from gmpy2 import mpq

from . import linalg
from .scalars import Cyclotomic, cyc, lcm, lift_conductor

__all__ = [
    "BilinearForm",
    "ConstructionError",
    "LieAlgebra",
    "Subspace",
    "ValidationReport",
    "bracket",
    "centralizer",
    "change_basis",
    "construct_classical",
    "coords_to_matrix",
    "coxeter_number",
    "direct_sum",
    "element_type",
    "invariant_form",
    "is_regular",
    "matrix_to_coords",
    "restrict_to_indices",
    "validate",
]


class ConstructionError(ValueError):
    pass


Terms = tuple[tuple[int, Cyclotomic], ...]


class LieAlgebra:
    """Finite-dimensional Lie algebra with sparse bracket table.

    brackets maps (i, j) with i < j to ((k, coeff), ...); missing pairs
    bracket to zero.  layer_tags, when present, assign each basis index
    to a block of a grading.  Instances are treated as immutable.
    """

    __slots__ = ("dim", "conductor", "brackets", "labels", "layer_tags",
                 "kind", "size", "rank", "matrix_basis")

    def __init__(self, dim: int, conductor: int, brackets: dict,
                 labels=None, layer_tags=None, kind=None, size=None,
                 rank=None, matrix_basis=None):
        self.dim = dim
        self.conductor = conductor
        self.brackets = brackets
        self.labels = tuple(labels) if labels is not None else tuple(
            f"e{i}" for i in range(dim))
        self.layer_tags = tuple(layer_tags) if layer_tags is not None else None
        self.kind = kind
        self.size = size
        self.rank = rank
        self.matrix_basis = matrix_basis

    # -- bracket evaluation --------------------------------------------------

    def pair_bracket(self, i: int, j: int):
        """[e_i, e_j] as an iterable of (k, coeff)."""
        if i == j:
            return ()
        if i < j:
            return self.brackets.get((i, j), ())
        terms = self.brackets.get((j, i), ())
        return tuple((k, -c) for k, c in terms)

    def bracket(self, x, y):
        """Bilinear extension of the structure constants to vectors."""
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("vector length does not match algebra dimension")
        acc: dict[int, Cyclotomic] = {}
        xi = [(i, v) for i, v in enumerate(x) if v]
        yj = [(j, v) for j, v in enumerate(y) if v]
        for i, a in xi:
            for j, b in yj:
                for k, c in self.pair_bracket(i, j):
                    t = a * b * c
                    if k in acc:
                        acc[k] = acc[k] + t
                    else:
                        acc[k] = t
        zero = Cyclotomic.zero(self.conductor)
        return [acc.get(k, zero) for k in range(self.dim)]

    def ad(self, x):
        """Matrix of y -> [x, y] (rows: output coordinate)."""
        zero = Cyclotomic.zero(self.conductor)
        mat = [[zero] * self.dim for _ in range(self.dim)]
        xi = [(i, v) for i, v in enumerate(x) if v]
        for j in range(self.dim):
            for i, a in xi:
                for k, c in self.pair_bracket(i, j):
                    mat[k][j] = mat[k][j] + a * c
        return mat

    def basis_vector(self, i: int):
        zero = Cyclotomic.zero(self.conductor)
        one = Cyclotomic.one(self.conductor)
        return [one if j == i else zero for j in range(self.dim)]

    def nonzero_pairs(self):
        return self.brackets.keys()

    # -- conversions ----------------------------------------------------------

    def with_conductor(self, M: int) -> "LieAlgebra":
        if M == self.conductor:
            return self
        new = {key: tuple((k, lift_conductor(c, M)) for k, c in terms)
               for key, terms in self.brackets.items()}
        return LieAlgebra(self.dim, M, new, self.labels, self.layer_tags,
                          self.kind, self.size, self.rank, self.matrix_basis)

    def rational_table(self):
        """brackets with mpq coefficients, or None if not all rational."""
        out = {}
        for key, terms in self.brackets.items():
            row = []
            for k, c in terms:
                if not c.is_rational():
                    return None
                row.append((k, c.rational_value()))
            out[key] = tuple(row)
        return out

    def to_json(self) -> dict:
        entries = []
        for (i, j) in sorted(self.brackets):
            terms = sorted(self.brackets[(i, j)], key=lambda t: t[0])
            entries.append([i, j, [[k, c.to_json()] for k, c in terms]])
        return {
            "dim": self.dim,
            "N": self.conductor,
            "labels": list(self.labels),
            "brackets": entries,
            "tags": list(self.layer_tags) if self.layer_tags else None,
        }

    @staticmethod
    def from_json(data: dict) -> "LieAlgebra":
        brackets = {}
        for i, j, terms in data["brackets"]:
            if not 0 <= i < j < data["dim"]:
                raise ValueError(f"bad bracket key ({i}, {j})")
            brackets[(i, j)] = tuple(
                (k, Cyclotomic.from_json(c)) for k, c in terms)
        return LieAlgebra(data["dim"], data["N"], brackets,
                          data.get("labels"), data.get("tags"))

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self.dim == other.dim and self.conductor == other.conductor
                and self.labels == other.labels
                and self.layer_tags == other.layer_tags
                and self.brackets == other.brackets)

    def __repr__(self):
        tag = self.kind or "lie"
        return f"<LieAlgebra {tag} dim={self.dim} N={self.conductor}>"


@dataclass(frozen=True)
class Subspace:
    """Subspace given by a canonical reduced-echelon basis."""

    ambient_dim: int
    vectors: tuple

    @staticmethod
    def from_vectors(ambient_dim: int, vectors) -> "Subspace":
        vecs = [list(v) for v in vectors if any(v)]
        if not vecs:
            return Subspace(ambient_dim, ())
        rows, _ = linalg.rref(vecs)
        return Subspace(ambient_dim, tuple(tuple(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def coords_of(self, vec):
        """Coordinates of vec in the echelon basis, or None if outside."""
        if not self.vectors:
            return None if any(vec) else []
        cols = [list(col) for col in zip(*self.vectors)]
        return linalg.solve(cols, list(vec))

    def contains(self, vec) -> bool:
        return self.coords_of(vec) is not None

    def to_json(self):
        return {"ambient": self.ambient_dim,
                "vectors": [[c.to_json() for c in v] for v in self.vectors]}


@dataclass
class BilinearForm:
    """Symmetric bilinear form on a Lie algebra, stored as a dense matrix."""

    matrix: list
    source: str = "killing"

    def evaluate(self, x, y):
        acc = None
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if b and self.matrix[i][j]:
                    t = a * self.matrix[i][j] * b
                    acc = t if acc is None else acc + t
        return acc if acc is not None else self.matrix[0][0] * 0

    def is_symmetric(self) -> bool:
        n = len(self.matrix)
        return all(self.matrix[i][j] == self.matrix[j][i]
                   for i in range(n) for j in range(i + 1, n))

    def is_nondegenerate(self) -> bool:
        return linalg.rank(self.matrix) == len(self.matrix)

    def is_invariant(self, g: LieAlgebra) -> bool:
        """b([x,y],z) + b(y,[x,z]) = 0 on all basis triples."""
        n = g.dim
        for i in range(n):
            for j in range(n):
                bij = g.pair_bracket(i, j)
                for z in range(n):
                    acc = None
                    for k, c in bij:
                        if self.matrix[k][z]:
                            t = c * self.matrix[k][z]
                            acc = t if acc is None else acc + t
                    for k, c in g.pair_bracket(i, z):
                        if self.matrix[j][k]:
                            t = c * self.matrix[j][k]
                            acc = t if acc is None else acc + t
                    if acc is not None and acc:
                        return False
        return True

    def to_json(self):
        return {"matrix": [[c.to_json() for c in row] for row in self.matrix],
                "source": self.source}


@dataclass
class ValidationReport:
    ok: bool
    checked_pairs: int = 0
    checked_triples: int = 0
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


# -- classical constructors ----------------------------------------------------


def _mat(n, entries):
    m = [[mpq(0)] * n for _ in range(n)]
    for (a, b), v in entries.items():
        m[a][b] = mpq(v)
    return tuple(tuple(r) for r in m)


def _commutator(x, y):
    n = len(x)
    return tuple(
        tuple(sum(x[i][k] * y[k][j] - y[i][k] * x[k][j] for k in range(n))
              for j in range(n))
        for i in range(n))


class _BasisSolver:
    """Expresses n x n matrices in a fixed linearly independent basis."""

    def __init__(self, mats):
        self.mats = mats
        self.n = len(mats[0])
        self.dim = len(mats)
        cols = [[m[i][j] for m in mats]
                for i in range(self.n) for j in range(self.n)]
        _, pivots = linalg.rref(linalg.transpose(cols))
        # pivots are positions in the flattened n*n space
        self.rows = pivots
        sq = [[cols[r][j] for j in range(self.dim)] for r in pivots]
        self.inv = linalg.inverse(sq)
        self.sparse_cols = [
            [(i * self.n + j, m[i][j]) for i in range(self.n)
             for j in range(self.n) if m[i][j]]
            for m in mats]

    def coords(self, mat, check=True):
        flat = [mat[r // self.n][r % self.n] for r in self.rows]
        x = linalg.mat_vec(self.inv, flat)
        if check:
            residual = {}
            for j, xj in enumerate(x):
                if xj:
                    for pos, v in self.sparse_cols[j]:
                        residual[pos] = residual.get(pos, 0) + xj * v
            for i in range(self.n):
                for j in range(self.n):
                    want = mat[i][j]
                    got = residual.get(i * self.n + j, 0)
                    if got - want:
                        return None
        return x


def _basis_gl(n):
    mats, labels = [], []
    for a in range(n):
        for b in range(n):
            mats.append(_mat(n, {(a, b): 1}))
            labels.append(f"E{a + 1}{b + 1}")
    return mats, labels


def _basis_sl(n):
    mats, labels = [], []
    for a in range(n - 1):
        mats.append(_mat(n, {(a, a): 1, (a + 1, a + 1): -1}))
        labels.append(f"H{a + 1}")
    for a in range(n):
        for b in range(n):
            if a != b:
                mats.append(_mat(n, {(a, b): 1}))
                labels.append(f"E{a + 1}{b + 1}")
    return mats, labels


def _basis_so(n):
    mats, labels = [], []
    for a in range(n):
        for b in range(a + 1, n):
            mats.append(_mat(n, {(a, b): 1, (b, a): -1}))
            labels.append(f"M{a + 1}{b + 1}")
    return mats, labels


def _basis_sp(n):
    m = n // 2
    mats, labels = [], []
    for a in range(m):
        for b in range(m):
            mats.append(_mat(n, {(a, b): 1, (m + b, m + a): -1}))
            labels.append(f"A{a + 1}{b + 1}")
    for a in range(m):
        for b in range(a, m):
            if a == b:
                mats.append(_mat(n, {(a, m + a): 1}))
            else:
                mats.append(_mat(n, {(a, m + b): 1, (b, m + a): 1}))
            labels.append(f"B{a + 1}{b + 1}")
    for a in range(m):
        for b in range(a, m):
            if a == b:
                mats.append(_mat(n, {(m + a, a): 1}))
            else:
                mats.append(_mat(n, {(m + a, b): 1, (m + b, a): 1}))
            labels.append(f"C{a + 1}{b + 1}")
    return mats, labels


_RANKS = {"gl": lambda n: n, "sl": lambda n: n - 1,
          "so": lambda n: n // 2, "sp": lambda n: n // 2}


@lru_cache(maxsize=None)
def construct_classical(kind: str, n: int) -> LieAlgebra:
    """Structure constants of gl_n, sl_n, so_n or sp_n (n = defining size)."""
    if kind == "gl" and n >= 1:
        mats, labels = _basis_gl(n)
    elif kind == "sl" and n >= 2:
        mats, labels = _basis_sl(n)
    elif kind == "so" and n >= 2:
        mats, labels = _basis_so(n)
    elif kind == "sp" and n >= 2 and n % 2 == 0:
        mats, labels = _basis_sp(n)
    else:
        raise ConstructionError(f"no classical algebra ({kind}, {n})")
    solver = _BasisSolver(mats)
    dim = len(mats)
    brackets = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            comm = _commutator(mats[i], mats[j])
            coords = solver.coords(comm, check=False)
            terms = tuple((k, cyc(v)) for k, v in enumerate(coords) if v)
            if terms:
                brackets[(i, j)] = terms
    return LieAlgebra(dim, 1, brackets, labels, kind=kind, size=n,
                      rank=_RANKS[kind](n), matrix_basis=tuple(mats))


def coords_to_matrix(g: LieAlgebra, vec):
    """Realize a coordinate vector as a matrix (matrix-realized g only)."""
    if g.matrix_basis is None:
        raise ConstructionError("algebra has no matrix realization")
    n = len(g.matrix_basis[0])
    out = [[cyc(0, g.conductor)] * n for _ in range(n)]
    for idx, v in enumerate(vec):
        if v:
            for i in range(n):
                for j in range(n):
                    if g.matrix_basis[idx][i][j]:
                        out[i][j] = out[i][j] + v * g.matrix_basis[idx][i][j]
    return out


def matrix_to_coords(g: LieAlgebra, mat):
    """Coordinates of a matrix in the defining basis, or None if outside."""
    if g.matrix_basis is None:
        raise ConstructionError("algebra has no matrix realization")
    solver = _solver_for(g)
    coords = solver.coords(mat)
    if coords is None:
        return None
    return [cyc(v, g.conductor) for v in coords]


@lru_cache(maxsize=None)
def _solver_cache(kind, size):
    return _BasisSolver(construct_classical(kind, size).matrix_basis)


def _solver_for(g: LieAlgebra) -> _BasisSolver:
    if g.kind in _RANKS and g.size is not None:
        return _solver_cache(g.kind, g.size)
    return _BasisSolver(g.matrix_basis)


# -- operations -----------------------------------------------------------------


def bracket(g: LieAlgebra, x, y):
    return g.bracket(x, y)


def direct_sum(parts) -> LieAlgebra:
    """Block-diagonal sum; layer_tags record the part index."""
    parts = list(parts)
    if not parts:
        raise ConstructionError("direct_sum of no parts")
    if len(parts) == 1:
        return parts[0]
    N = 1
    for p in parts:
        N = lcm(N, p.conductor)
    parts = [p.with_conductor(N) for p in parts]
    dim = sum(p.dim for p in parts)
    offs = []
    off = 0
    for p in parts:
        offs.append(off)
        off += p.dim
    brackets = {}
    labels = []
    tags = []
    for pi, p in enumerate(parts):
        for (i, j), terms in p.brackets.items():
            brackets[(offs[pi] + i, offs[pi] + j)] = tuple(
                (offs[pi] + k, c) for k, c in terms)
        labels.extend(f"p{pi}.{lab}" for lab in p.labels)
        tags.extend([pi] * p.dim)
    return LieAlgebra(dim, N, brackets, labels, layer_tags=tags)


def validate(g: LieAlgebra, max_failures: int = 1) -> ValidationReport:
    """Exhaustive antisymmetry-storage and Jacobi check.

    Only triples meeting a nonzero pairwise bracket are tested; all other
    triples satisfy the identity trivially.
    """
    report = ValidationReport(ok=True)
    for (i, j), terms in g.brackets.items():
        if not (0 <= i < j < g.dim):
            report.failures.append({"kind": "storage", "pair": (i, j)})
        for k, c in terms:
            if not 0 <= k < g.dim or not c or c.N != g.conductor:
                report.failures.append(
                    {"kind": "coefficient", "pair": (i, j), "target": k})
    if g.layer_tags is not None and len(g.layer_tags) != g.dim:
        report.failures.append({"kind": "tags"})
    if report.failures:
        report.ok = False
        return report

    rat = g.rational_table()
    table = rat if rat is not None else g.brackets

    def pb(a, b):
        if a == b:
            return ()
        if a < b:
            return table.get((a, b), ())
        return tuple((k, -c) for k, c in table.get((b, a), ()))

    triples = set()
    for (a, b) in g.brackets:
        for c in range(g.dim):
            if c != a and c != b:
                triples.add(tuple(sorted((a, b, c))))
    report.checked_pairs = len(g.brackets)
    report.checked_triples = len(triples)
    for (i, j, k) in triples:
        acc: dict[int, object] = {}
        for (a, bc) in ((i, (j, k)), (j, (k, i)), (k, (i, j))):
            for l, c1 in pb(*bc):
                for s, c2 in pb(a, l):
                    t = c1 * c2
                    acc[s] = acc[s] + t if s in acc else t
        if any(acc.values()):
            report.ok = False
            report.failures.append({"kind": "jacobi", "triple": (i, j, k)})
            if len(report.failures) >= max_failures:
                return report
    report.ok = not report.failures
    return report


def centralizer(g: LieAlgebra, x) -> Subspace:
    """Kernel of y -> [x, y], as a canonical Subspace."""
    vecs = linalg.nullspace(g.ad(x), g.dim)
    return Subspace.from_vectors(g.dim, vecs)


def _minimal_polynomial(mat):
    """Monic minimal polynomial of a square matrix, low degree first."""
    n = len(mat)
    one = Cyclotomic.one(mat[0][0].N) if isinstance(mat[0][0], Cyclotomic) \
        else mpq(1)
    zero = one - one
    power = linalg.identity_matrix(n, one)
    pivots: dict[int, int] = {}
    reduced_rows = []
    combos = []
    deg = 0
    while True:
        row = [power[i][j] for i in range(n) for j in range(n)]
        combo = [zero] * (n + 2)
        combo[deg] = one
        # reduce row against known pivots, tracking the combination
        for col, ridx in sorted(pivots.items()):
            if row[col]:
                f = row[col]
                prow = reduced_rows[ridx]
                pcombo = combos[ridx]
                row = [a - f * b for a, b in zip(row, prow)]
                combo = [a - f * b for a, b in zip(combo, pcombo)]
        lead = next((c for c in range(n * n) if row[c]), None)
        if lead is None:
            return combo[: deg + 1]
        inv = one / row[lead]
        row = [v * inv for v in row]
        combo = [v * inv for v in combo]
        pivots[lead] = len(reduced_rows)
        reduced_rows.append(row)
        combos.append(combo)
        power = linalg.mat_mul(power, mat)
        deg += 1


def _poly_gcd_is_const(p):
    """True iff gcd(p, p') is constant, i.e. p squarefree."""
    a = list(p)
    b = [c * i for i, c in enumerate(p)][1:]
    while True:
        while b and not b[-1]:
            b.pop()
        if not b:
            while a and not a[-1]:
                a.pop()
            return len(a) <= 1
        if len(b) == 1:
            return True
        a = list(a)
        inv = b[-1] ** 0 / b[-1]
        for i in range(len(a) - len(b), -1, -1):
            f = a[i + len(b) - 1] * inv
            if f:
                for j in range(len(b)):
                    a[i + j] = a[i + j] - f * b[j]
        a, b = b, a[: len(b) - 1]


def element_type(g: LieAlgebra, x) -> str:
    """nilpotent / semisimple / mixed, via the adjoint criterion."""
    p = _minimal_polynomial(g.ad(x))
    if all(not c for c in p[:-1]):
        return "nilpotent"
    if _poly_gcd_is_const(p):
        return "semisimple"
    return "mixed"


def is_regular(g: LieAlgebra, x, rank: int) -> bool:
    return centralizer(g, x).dim == rank


def invariant_form(g: LieAlgebra, source: str = "killing") -> BilinearForm:
    """Killing form, or the trace form of the defining representation."""
    if source == "trace_defining":
        if g.matrix_basis is None:
            raise ConstructionError("trace form needs a matrix realization")
        n = len(g.matrix_basis[0])
        mat = [[cyc(sum(g.matrix_basis[i][a][b] * g.matrix_basis[j][b][a]
                        for a in range(n) for b in range(n)), g.conductor)
                for j in range(g.dim)] for i in range(g.dim)]
        return BilinearForm(mat, "trace_defining")
    if source != "killing":
        raise ValueError(f"unknown form source {source!r}")
    ads = [g.ad(g.basis_vector(i)) for i in range(g.dim)]
    sparse = []
    for a in ads:
        entries = [(r, c, v) for r, row in enumerate(a)
                   for c, v in enumerate(row) if v]
        sparse.append(entries)
    zero = Cyclotomic.zero(g.conductor)
    mat = [[zero] * g.dim for _ in range(g.dim)]
    for i in range(g.dim):
        ai = {(r, c): v for r, c, v in sparse[i]}
        for j in range(i, g.dim):
            acc = None
            for r, c, v in sparse[j]:
                w = ai.get((c, r))
                if w:
                    t = v * w
                    acc = t if acc is None else acc + t
            if acc is not None:
                mat[i][j] = acc
                mat[j][i] = acc
    return BilinearForm(mat, "killing")


_COXETER = {
    "sl": lambda n: n,
    "sp": lambda n: n,
    "so": lambda n: n - 1 if n % 2 else n - 2,
}


def coxeter_number(kind: str, n: int) -> int:
    """Coxeter number of the simple classical algebra of defining size n."""
    simple = (kind == "sl" and n >= 2) or (kind == "sp" and n >= 2 and
                                           n % 2 == 0) or \
        (kind == "so" and (n == 3 or n >= 5))
    if not simple:
        raise ConstructionError(f"({kind}, {n}) is not simple")
    return _COXETER[kind](n)


def change_basis(g: LieAlgebra, columns, labels=None, tags=None) -> LieAlgebra:
    """Rewrite g in the basis given by the columns (old coordinates)."""
    n = g.dim
    P = [[columns[j][i] for j in range(n)] for i in range(n)]
    Pinv = linalg.inverse(P)
    brackets = {}
    cols = [list(c) for c in columns]
    for a in range(n):
        for b in range(a + 1, n):
            w = g.bracket(cols[a], cols[b])
            coords = linalg.mat_vec(Pinv, w)
            terms = tuple((k, v) for k, v in enumerate(coords) if v)
            if terms:
                brackets[(a, b)] = terms
    return LieAlgebra(n, g.conductor, brackets, labels, layer_tags=tags)


def restrict_to_indices(g: LieAlgebra, indices) -> LieAlgebra:
    """Subalgebra spanned by the given basis indices (must be closed)."""
    indices = list(indices)
    pos = {idx: p for p, idx in enumerate(indices)}
    keep = set(indices)
    brackets = {}
    for p, i in enumerate(indices):
        for q in range(p + 1, len(indices)):
            j = indices[q]
            terms = []
            for k, c in g.pair_bracket(i, j):
                if k not in keep:
                    raise ConstructionError(
                        f"indices do not span a subalgebra: [{i},{j}] -> {k}")
                terms.append((pos[k], c))
            if terms:
                key = (p, q) if p < q else (q, p)
                brackets[key] = tuple(sorted(terms))
    labels = [g.labels[i] for i in indices]
    tags = [g.layer_tags[i] for i in indices] if g.layer_tags else None
    return LieAlgebra(len(indices), g.conductor, brackets, labels,
                      layer_tags=tags)
