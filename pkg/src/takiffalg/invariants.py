"""Exact polynomial invariants of adjoint/coadjoint representations,
degree by degree, plus the graded-transfer toolkit (block degrees,
extreme components, transported families), Poisson brackets, the
coadjoint index and the free-generation criterion.

Invariant slices are joint kernels of the basis derivations acting on
the degree-m monomial space.  The kernel splits into independent column
components (monomials coupled through some constraint row); each
component is eliminated separately, fraction-free over the integers
whenever the structure constants are rational, and over the cyclotomic
field otherwise.  Pivoting order is fixed, so bases are canonical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import gcd as _gcd, mpq, mpz

from . import linalg
from .liealg import LieAlgebra, Subspace
from .scalars import Cyclotomic, cyc

__all__ = [
    "IndexReport",
    "InvariantBasis",
    "Polynomial",
    "act_derivation",
    "argument_shift",
    "block_degree",
    "coadjoint_index",
    "free_generation_check",
    "graded_part",
    "graded_span",
    "invariant_basis",
    "is_invariant",
    "jacobian_rank",
    "kostant_bound",
    "peak_summands",
    "poincare",
    "poisson",
    "restrict",
    "transfer_family",
    "transport",
]


# -- polynomials ---------------------------------------------------------------


class Polynomial:
    """Multivariate polynomial with cyclotomic coefficients.

    space is "fun" for functions on the algebra (adjoint side) and "sym"
    for elements of the symmetric algebra (coadjoint side); the two are
    kept apart because they transform differently.
    """

    __slots__ = ("space", "nvars", "conductor", "terms")

    def __init__(self, space: str, nvars: int, conductor: int, terms: dict):
        self.space = space
        self.nvars = nvars
        self.conductor = conductor
        self.terms = {e: c for e, c in terms.items() if c}

    @staticmethod
    def zero(space, nvars, conductor=1):
        return Polynomial(space, nvars, conductor, {})

    @staticmethod
    def constant(space, nvars, value, conductor=1):
        v = cyc(value, conductor)
        return Polynomial(space, nvars, conductor,
                          {(0,) * nvars: v} if v else {})

    @staticmethod
    def variable(space, nvars, i, conductor=1):
        e = [0] * nvars
        e[i] = 1
        return Polynomial(space, nvars, conductor,
                          {tuple(e): Cyclotomic.one(conductor)})

    def _check(self, other):
        if (self.space, self.nvars, self.conductor) != \
                (other.space, other.nvars, other.conductor):
            raise ValueError("polynomials live in different spaces")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            terms[e] = c if s is None else s + c
        return Polynomial(self.space, self.nvars, self.conductor, terms)

    def __sub__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            terms[e] = -c if s is None else s - c
        return Polynomial(self.space, self.nvars, self.conductor, terms)

    def __neg__(self):
        return Polynomial(self.space, self.nvars, self.conductor,
                          {e: -c for e, c in self.terms.items()})

    def scale(self, value):
        v = cyc(value, self.conductor)
        return Polynomial(self.space, self.nvars, self.conductor,
                          {e: v * c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t = c1 * c2
                s = terms.get(e)
                terms[e] = t if s is None else s + t
        return Polynomial(self.space, self.nvars, self.conductor, terms)

    __rmul__ = scale

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.space == other.space and self.nvars == other.nvars
                and self.terms == other.terms)

    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def derivative(self, i: int) -> "Polynomial":
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                terms[tuple(ne)] = e[i] * c
        return Polynomial(self.space, self.nvars, self.conductor, terms)

    def evaluate(self, point):
        acc = Cyclotomic.zero(self.conductor)
        for e, c in self.terms.items():
            v = c
            for i, p in enumerate(e):
                for _ in range(p):
                    v = v * point[i]
            acc = acc + v
        return acc

    def lift(self, M: int) -> "Polynomial":
        if M == self.conductor:
            return self
        from .scalars import lift_conductor
        return Polynomial(self.space, self.nvars, M,
                          {e: lift_conductor(c, M)
                           for e, c in self.terms.items()})

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def to_json(self):
        return {"space": self.space,
                "terms": [[list(e), c.to_json()]
                          for e, c in self.sorted_terms()]}

    @staticmethod
    def from_json(data, nvars=None, conductor=None):
        terms = {tuple(e): Cyclotomic.from_json(c) for e, c in data["terms"]}
        if nvars is None:
            nvars = len(next(iter(terms), ()))
        if conductor is None:
            conductor = next(iter(terms.values())).N if terms else 1
        return Polynomial(data["space"], nvars, conductor, terms)

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        bits = []
        for e, c in self.sorted_terms()[:6]:
            mono = "*".join(f"x{i}^{p}" if p > 1 else f"x{i}"
                            for i, p in enumerate(e) if p) or "1"
            bits.append(f"({c!r})*{mono}")
        more = "" if len(self.terms) <= 6 else f" +{len(self.terms) - 6} terms"
        return f"Polynomial({' + '.join(bits)}{more})"


@dataclass
class InvariantBasis:
    degree: int
    space: str                      # "fun" (adjoint) or "sym" (coadjoint)
    basis: tuple

    @property
    def dim(self):
        return len(self.basis)

    def to_json(self):
        return {"degree": self.degree, "space": self.space,
                "basis": [p.to_json() for p in self.basis]}


# -- derivation actions ---------------------------------------------------------


def _varmaps(g: LieAlgebra, rep: str):
    """For each basis index x, the sparse linear part of its derivation:
    varmap[x][j] = ((target, coeff), ...) describing x * var_j."""
    if rep not in ("adjoint", "coadjoint"):
        raise ValueError(f"unknown representation {rep!r}")
    rat = g.rational_table()
    table = rat if rat is not None else g.brackets
    rational = rat is not None
    maps = [[[] for _ in range(g.dim)] for _ in range(g.dim)]
    for (i, j), terms in table.items():
        for s, c in terms:
            if rep == "adjoint":
                # x * xi_s picks up -sum_l ad_x[s][l] xi_l
                maps[i][s].append((j, -c))
                maps[j][s].append((i, c))
            else:
                # x * y = [x, y]
                maps[i][j].append((s, c))
                maps[j][i].append((s, -c))
    return maps, rational


def act_derivation(g: LieAlgebra, rep: str, x: int, F: Polynomial) -> Polynomial:
    """Derivation action of basis element x on F (exact)."""
    expected = "fun" if rep == "adjoint" else "sym"
    if F.space != expected:
        raise ValueError(f"{rep} action needs a {expected!r} polynomial")
    if F.nvars != g.dim:
        raise ValueError("variable count does not match the algebra")
    maps, _ = _varmaps(g, rep)
    vm = maps[x]
    terms: dict = {}
    for e, c in F.terms.items():
        for j in range(g.dim):
            if e[j]:
                for s, m in vm[j]:
                    ne = list(e)
                    ne[j] -= 1
                    ne[s] += 1
                    key = tuple(ne)
                    t = (e[j] * c) * m if not isinstance(m, Cyclotomic) \
                        else m * (e[j] * c)
                    prev = terms.get(key)
                    terms[key] = t if prev is None else prev + t
    out = {}
    for e, c in terms.items():
        v = cyc(c, g.conductor) if not isinstance(c, Cyclotomic) else c
        if v:
            out[e] = v
    return Polynomial(F.space, F.nvars, g.conductor, out)


def is_invariant(g: LieAlgebra, rep: str, F: Polynomial, acting=None) -> bool:
    indices = range(g.dim) if acting is None else acting
    return all(act_derivation(g, rep, x, F).is_zero() for x in indices)


# -- the degree-slice kernel -----------------------------------------------------


def _monomials(nvars: int, degree: int):
    """All exponent tuples of the given total degree, descending order."""
    out = []

    def rec(prefix, remaining, pos):
        if pos == nvars - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, pos + 1)

    if nvars == 0:
        return [()] if degree == 0 else []
    rec([], degree, 0)
    return out


class _Components:
    """Union-find over column indices."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _int_nullspace(rows, cols):
    """Fraction-free kernel of the stacked constraint rows (mpz entries)
    on the given ordered columns; returns vectors over mpq."""
    pivrows: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row)
            piv = pivrows.get(lead)
            if piv is None:
                g = mpz(0)
                for v in row.values():
                    g = _gcd(g, v)
                if row[lead] < 0:
                    g = -g
                if g != 1:
                    row = {c: v // g for c, v in row.items()}
                pivrows[lead] = row
                break
            a, b = row[lead], piv[lead]
            new = {c: b * v for c, v in row.items()}
            for c, v in piv.items():
                w = new.get(c, mpz(0)) - a * v
                if w:
                    new[c] = w
                elif c in new:
                    del new[c]
            row = new
    pivot_cols = sorted(pivrows)
    free = [c for c in cols if c not in pivrows]
    vectors = []
    for f in free:
        x = {f: mpq(1)}
        for p in reversed(pivot_cols):
            row = pivrows[p]
            acc = mpq(0)
            for c, v in row.items():
                if c != p and c in x:
                    acc += v * x[c]
            if acc:
                x[p] = -acc / row[p]
        vectors.append(x)
    return vectors


def _field_nullspace(rows, cols, conductor):
    """Kernel over the cyclotomic field for non-rational constraint rows."""
    one = Cyclotomic.one(conductor)
    pivrows: dict[int, dict] = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row)
            piv = pivrows.get(lead)
            if piv is None:
                inv = one / row[lead]
                pivrows[lead] = {c: inv * v for c, v in row.items()}
                break
            a = row[lead]
            new = dict(row)
            for c, v in piv.items():
                w = new.get(c, Cyclotomic.zero(conductor)) - a * v
                if w:
                    new[c] = w
                elif c in new:
                    del new[c]
            row = new
    free = [c for c in cols if c not in pivrows]
    pivot_cols = sorted(pivrows)
    vectors = []
    for f in free:
        x = {f: one}
        for p in reversed(pivot_cols):
            row = pivrows[p]
            acc = Cyclotomic.zero(conductor)
            for c, v in row.items():
                if c != p and c in x:
                    acc = acc + v * x[c]
            if acc:
                x[p] = -acc
        vectors.append(x)
    return vectors


def _echelonize_sparse(vectors, conductor):
    """Reduced echelon form of sparse mpq/cyc vectors (cols ascending)."""
    pivots: dict[int, dict] = {}
    for vec in vectors:
        vec = dict(vec)
        for lead in sorted(pivots):
            if lead in vec and vec[lead]:
                f = vec[lead]
                for c, v in pivots[lead].items():
                    w = vec.get(c, 0) - f * v
                    if w:
                        vec[c] = w
                    elif c in vec:
                        del vec[c]
        vec = {c: v for c, v in vec.items() if v}
        if not vec:
            continue
        lead = min(vec)
        inv = vec[lead]
        vec = {c: v / inv for c, v in vec.items()}
        for other_lead, other in list(pivots.items()):
            if lead in other and other[lead]:
                f = other[lead]
                for c, v in vec.items():
                    w = other.get(c, 0) - f * v
                    if w:
                        other[c] = w
                    elif c in other:
                        del other[c]
        pivots[lead] = vec
    return [pivots[lead] for lead in sorted(pivots)]


def invariant_basis(g: LieAlgebra, rep: str, m: int,
                    acting=None) -> InvariantBasis:
    """Echelon basis of the degree-m invariants of the chosen action,
    optionally under the sub-action of a subset of basis indices."""
    space = "fun" if rep == "adjoint" else "sym"
    if m < 0:
        raise ValueError("degree must be >= 0")
    maps, rational = _varmaps(g, rep)
    indices = list(range(g.dim)) if acting is None else sorted(acting)
    monos = _monomials(g.dim, m)
    mono_index = {mono: i for i, mono in enumerate(monos)}
    ncols = len(monos)
    comp = _Components(ncols)
    all_rows = []
    for x in indices:
        vm = maps[x]
        rows: dict = {}
        for idx, e in enumerate(monos):
            for j in range(g.dim):
                ej = e[j]
                if ej:
                    for s, coeff in vm[j]:
                        ne = list(e)
                        ne[j] -= 1
                        ne[s] += 1
                        key = mono_index[tuple(ne)]
                        row = rows.setdefault(key, {})
                        prev = row.get(idx)
                        val = ej * coeff if prev is None else prev + ej * coeff
                        if val:
                            row[idx] = val
                        elif idx in row:
                            del row[idx]
        for row in rows.values():
            if row:
                all_rows.append(row)
                cols = list(row)
                for c in cols[1:]:
                    comp.union(cols[0], c)
    buckets: dict[int, list] = {}
    for row in all_rows:
        buckets.setdefault(comp.find(next(iter(row))), []).append(row)
    # component members
    members: dict[int, list] = {}
    for c in range(ncols):
        members.setdefault(comp.find(c), []).append(c)
    vectors = []
    for root in sorted(members):
        cols = sorted(members[root])
        rows = buckets.get(root, [])
        if not rows:
            vectors.extend({c: mpq(1)} for c in cols)
            continue
        if rational:
            int_rows = []
            for row in rows:
                den = mpz(1)
                for v in row.values():
                    den = den * v.denominator // _gcd(den, v.denominator)
                int_rows.append({c: mpz(v * den) for c, v in row.items()})
            vectors.extend(_int_nullspace(int_rows, cols))
        else:
            vectors.extend(_field_nullspace(rows, cols, g.conductor))
    vectors = _echelonize_sparse(vectors, g.conductor)
    basis = []
    for vec in vectors:
        terms = {monos[c]: cyc(v, g.conductor) for c, v in vec.items()}
        basis.append(Polynomial(space, g.dim, g.conductor, terms))
    return InvariantBasis(m, space, tuple(basis))


def poincare(g: LieAlgebra, rep: str, D: int, acting=None):
    """Dimensions of the invariant slices for degrees 0..D."""
    return [invariant_basis(g, rep, m, acting).dim for m in range(D + 1)]


# -- block degrees and transported families --------------------------------------


def _block_lookup(grading):
    out = {}
    for b, idxs in enumerate(grading.blocks):
        for i in idxs:
            out[i] = b
    return out


def block_degree(F: Polynomial, grading):
    """Split F into parts of homogeneous weighted block degree.

    Returns (min_degree, max_degree, {degree: part}); the weighting of a
    variable is the index of its grading block.
    """
    if not F.terms:
        raise ValueError("zero polynomial has no block degree")
    lookup = _block_lookup(grading)
    if F.nvars != grading.algebra.dim:
        raise ValueError("polynomial is not in the adapted basis")
    parts: dict[int, dict] = {}
    for e, c in F.terms.items():
        d = sum(p * lookup[i] for i, p in enumerate(e) if p)
        parts.setdefault(d, {})[e] = c
    polys = {d: Polynomial(F.space, F.nvars, F.conductor, t)
             for d, t in sorted(parts.items())}
    return min(polys), max(polys), polys


def graded_part(F: Polynomial, grading, which: str) -> Polynomial:
    """Bottom (minimal) or top (maximal) block-degree component of F."""
    lo, hi, parts = block_degree(F, grading)
    if which == "bottom":
        return parts[lo]
    if which == "top":
        return parts[hi]
    raise ValueError(f"which must be 'bottom' or 'top', got {which!r}")


def transport(F: Polynomial, grading):
    """Expansion of F(c_t x) as [(j, F_j), ...] with c_t = t^i on block i;
    the ends are the bottom/top graded parts."""
    lo, hi, parts = block_degree(F, grading)
    return [(d, parts[d]) for d in sorted(parts)]


def graded_span(basis, grading, which: str):
    """Span of the extreme graded parts over a slice of invariants.

    Row-reduces the slice with columns ordered by block degree (bottom
    first or top first) so each echelon row's extreme part is read off
    its leading block; the parts returned span {extreme(F) : F in slice}.
    """
    polys = [F for F in basis if F]
    if not polys:
        return []
    lookup = _block_lookup(grading)
    sign = 1 if which == "bottom" else -1
    monos = sorted({e for F in polys for e in F.terms},
                   key=lambda e: (sign * sum(p * lookup[i]
                                             for i, p in enumerate(e) if p),
                                  tuple(-x for x in e)))
    index = {e: i for i, e in enumerate(monos)}
    vectors = [{index[e]: c for e, c in F.terms.items()} for F in polys]
    rows = _echelonize_sparse(vectors, polys[0].conductor)
    out = []
    for row in rows:
        poly = Polynomial(polys[0].space, polys[0].nvars, polys[0].conductor,
                          {monos[c]: cyc(v, polys[0].conductor)
                           for c, v in row.items()})
        out.append(graded_part(poly, grading, which))
    return out


@dataclass
class TransferReport:
    members: list
    jacobian_rank: int
    independent: bool


def transfer_family(gens, grading, which: str, source: LieAlgebra,
                    target: LieAlgebra, seed: int = 11) -> TransferReport:
    """Extreme graded parts of source invariants, checked to be invariant
    in the contraction and tested for algebraic independence."""
    rep = "adjoint" if (gens and gens[0].space == "fun") else "coadjoint"
    members = []
    for F in gens:
        if not is_invariant(source, rep, F):
            raise ValueError("input polynomial is not invariant in the source")
        part = graded_part(F, grading, which)
        if not is_invariant(target, rep, part):
            raise AssertionError(
                "graded part fails invariance in the contraction")
        members.append(part)
    rk = jacobian_rank(members, seed=seed) if members else 0
    return TransferReport(members, rk, rk == len(members))


def jacobian_rank(polys, seed: int = 11, retries: int = 3) -> int:
    """Rank of the Jacobian at random integer points (max over retries)."""
    if not polys:
        return 0
    n = polys[0].nvars
    N = polys[0].conductor
    rng = random.Random(seed)
    best = 0
    for _ in range(retries):
        point = [cyc(rng.randint(-9, 9), N) for _ in range(n)]
        J = [[F.derivative(j).evaluate(point) for j in range(n)]
             for F in polys]
        best = max(best, linalg.rank(J))
        if best == len(polys):
            return best
    return best


# -- Poisson structure ------------------------------------------------------------


def poisson(g: LieAlgebra, F: Polynomial, G: Polynomial) -> Polynomial:
    """Poisson bracket on the symmetric algebra; on generators it is the
    Lie bracket."""
    if F.space != "sym" or G.space != "sym":
        raise ValueError("Poisson bracket lives on 'sym' polynomials")
    if F.nvars != g.dim or G.nvars != g.dim:
        raise ValueError("variable count does not match the algebra")
    out = Polynomial.zero("sym", g.dim, g.conductor)
    dF = {}
    dG = {}
    for (i, j), terms in g.brackets.items():
        if i not in dF:
            dF[i] = F.derivative(i)
            dG[i] = G.derivative(i)
        if j not in dF:
            dF[j] = F.derivative(j)
            dG[j] = G.derivative(j)
        factor = dF[i] * dG[j] - dF[j] * dG[i]
        if factor.is_zero():
            continue
        lin = Polynomial("sym", g.dim, g.conductor,
                         {tuple(1 if t == k else 0 for t in range(g.dim)): c
                          for k, c in terms})
        out = out + factor * lin
    return out


# -- index and the free-generation criterion --------------------------------------


@dataclass
class IndexReport:
    value: int
    trials: int
    seed: int
    witness: list
    upper_bound_only: bool = True

    def to_json(self):
        return {"value": self.value, "trials": self.trials, "seed": self.seed,
                "witness": [c.to_json() for c in self.witness],
                "upper_bound_only": self.upper_bound_only}


def kirillov_matrix(g: LieAlgebra, xi):
    """B(xi)[i][j] = xi([e_i, e_j]) for a dual vector given by coordinates."""
    zero = Cyclotomic.zero(g.conductor)
    mat = [[zero] * g.dim for _ in range(g.dim)]
    for (i, j), terms in g.brackets.items():
        acc = zero
        for k, c in terms:
            if xi[k]:
                acc = acc + c * xi[k]
        if acc:
            mat[i][j] = acc
            mat[j][i] = -acc
    return mat


def coadjoint_index(g: LieAlgebra, trials: int = 5, seed: int = 1,
                    coord_bound: int = 10) -> IndexReport:
    """Minimal coadjoint stabilizer dimension over seeded integer samples;
    always an upper bound for the true index, with generic equality."""
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = random.Random(seed)
    best = None
    witness = None
    for _ in range(trials):
        xi = [cyc(rng.randint(-coord_bound, coord_bound), g.conductor)
              for _ in range(g.dim)]
        r = linalg.rank(kirillov_matrix(g, xi))
        val = g.dim - r
        if best is None or val < best:
            best, witness = val, xi
    return IndexReport(best, trials, seed, witness)


def kostant_bound(dim: int, index_value: int):
    """(dim + ind)/2, the degree-sum threshold; flags odd sums."""
    total = dim + index_value
    return mpq(total, 2), total % 2 == 0


@dataclass
class FreeGenerationReport:
    verdict: str                   # certified / sum-exceeds-b / failed-precondition
    degree_sum: int
    bound: mpq
    index_value: int
    details: list = field(default_factory=list)


def free_generation_check(g: LieAlgebra, candidates,
                          index_value: int | None = None,
                          trials: int = 5, seed: int = 1,
                          coord_bound: int = 10) -> FreeGenerationReport:
    """Degree-sum criterion for free generation of the coadjoint invariants.

    Requires homogeneous, algebraically independent coadjoint invariants,
    as many as the index; equality of the degree sum with (dim+ind)/2
    certifies free generation and the differential regularity criterion.
    """
    problems = []
    for F in candidates:
        if F.space != "sym":
            problems.append("candidate not in the symmetric algebra")
        elif not F.is_homogeneous():
            problems.append("candidate not homogeneous")
        elif not is_invariant(g, "coadjoint", F):
            problems.append("candidate not a coadjoint invariant")
    report_index = index_value
    if report_index is None:
        report_index = coadjoint_index(g, trials, seed, coord_bound).value
    if len(candidates) != report_index:
        problems.append(
            f"need {report_index} candidates (= index), got {len(candidates)}")
    if not problems and jacobian_rank(list(candidates), seed=seed) != \
            len(candidates):
        problems.append("candidates are algebraically dependent")
    bound, well_posed = kostant_bound(g.dim, report_index)
    degsum = sum(F.degree() for F in candidates)
    if not well_posed:
        problems.append("dim + index is odd; criterion ill-posed")
    if problems:
        return FreeGenerationReport("failed-precondition", degsum, bound,
                                    report_index, problems)
    if degsum == bound:
        return FreeGenerationReport(
            "free-generation-certified", degsum, bound, report_index,
            ["regular dual vectors are exactly those where the candidate "
             "differentials stay independent"])
    if degsum > bound:
        return FreeGenerationReport("sum-exceeds-b", degsum, bound,
                                    report_index)
    return FreeGenerationReport(
        "failed-precondition", degsum, bound, report_index,
        ["degree sum below the bound contradicts the criterion "
         "hypotheses; inputs are not what they claim"])


# -- restriction, argument shift, eigensummand patterns ----------------------------


def restrict(F: Polynomial, V: Subspace) -> Polynomial:
    """Pullback of a function on g along the inclusion of V (coordinates
    = the echelon basis of V)."""
    if F.space != "fun":
        raise ValueError("restriction acts on functions")
    r = V.dim
    conductor = F.conductor
    lin = []
    for l in range(F.nvars):
        terms = {}
        for a in range(r):
            v = V.vectors[a][l]
            if v:
                e = [0] * r
                e[a] = 1
                terms[tuple(e)] = cyc(v, conductor)
        lin.append(Polynomial("fun", r, conductor, terms))
    out = Polynomial.zero("fun", r, conductor)
    for e, c in F.terms.items():
        prod = Polynomial.constant("fun", r, c, conductor)
        for i, p in enumerate(e):
            for _ in range(p):
                prod = prod * lin[i]
            if prod.is_zero():
                break
        out = out + prod
    return out


def argument_shift(F: Polynomial, xi) -> list:
    """Coefficients of F(x + s*xi) in the shift parameter, highest first
    dropped when zero; xi is a dual vector given by scalar coordinates."""
    if F.space != "sym":
        raise ValueError("argument shift acts on the symmetric algebra")
    out = [F]
    current = F
    d = 1
    while True:
        nxt = Polynomial.zero("sym", F.nvars, F.conductor)
        for i in range(F.nvars):
            if xi[i]:
                nxt = nxt + current.derivative(i).scale(xi[i])
        if nxt.is_zero():
            break
        current = nxt.scale(mpq(1, d))
        out.append(current)
        d += 1
    return out


@dataclass
class PeakSummandReport:
    eigen_exponent: int
    matches: list
    at_most_one: bool
    contained_in_top: bool | None


def peak_summands(F: Polynomial, grading) -> PeakSummandReport:
    """Locate summands whose block polydegree is concentrated in the last
    block: (0,...,0,d) or one stray variable and d-1 in the last block.
    For an eigenvector there is at most one, and it sits in the top
    graded part.  Raises if F is not an eigenvector of the grading
    automorphism (mixed block weights mod k)."""
    lookup = _block_lookup(grading)
    k = len(grading.blocks)
    groups: dict[tuple, dict] = {}
    weights = set()
    for e, c in F.terms.items():
        poly = [0] * k
        for i, p in enumerate(e):
            if p:
                poly[lookup[i]] += p
        groups.setdefault(tuple(poly), {})[e] = c
        weights.add(sum(i * d for i, d in enumerate(poly)) % k)
    if len(weights) > 1:
        raise ValueError("polynomial is not an eigenvector of the grading")
    matches = []
    for poly in groups:
        d = sum(poly)
        if poly[k - 1] == d and d > 0:
            matches.append(poly)
        elif poly[k - 1] == d - 1 and d >= 1:
            rest = [p for b, p in enumerate(poly[:-1])]
            if sum(rest) == 1:
                matches.append(poly)
    top = None
    if matches:
        _, hi, _ = block_degree(F, grading)
        top = all(sum(i * p for i, p in enumerate(poly)) == hi
                  for poly in matches)
    return PeakSummandReport(next(iter(weights), 0) if weights else 0,
                             sorted(matches), len(matches) <= 1, top)
