"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) of
Q[x]/Phi_N(x), with gmpy2 rationals as coordinates.  Every value is kept
in canonical reduced form, so equality is plain coefficient comparison.
A session usually fixes one conductor N (the lcm of all automorphism
orders in play) and embeds everything there via :func:`lift_conductor`.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from gmpy2 import mpq, mpz

__all__ = [
    "Cyclotomic",
    "ConductorMismatch",
    "InvalidConductor",
    "InvalidEmbedding",
    "cyc",
    "cyc_arith",
    "cyclotomic_polynomial",
    "euler_phi",
    "lift_conductor",
    "lower_conductor",
    "primitive_root",
    "rational_from_string",
    "rational_to_string",
    "zeta_pow",
]


class InvalidConductor(ValueError):
    """Conductor must be a positive integer."""


class ConductorMismatch(ValueError):
    """Operands live at different conductors; lift first."""


class InvalidEmbedding(ValueError):
    """Requested conductor change is not an embedding/restriction."""


def euler_phi(n: int) -> int:
    if n < 1:
        raise InvalidConductor(f"conductor must be >= 1, got {n}")
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            result *= (p - 1) * p ** (e - 1)
        p += 1
    if m > 1:
        result *= m - 1
    return result


def _poly_div_exact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, leading coefficients of den = +-1
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // lead
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    if n < 1:
        raise InvalidConductor(f"conductor must be >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _field(n: int):
    """(phi, reduction rows, zeta power table) for conductor n.

    Reduction row j (0-indexed from phi) expresses x^(phi+j) in the power
    basis; the power table caches zeta^e for e in 0..n-1.
    """
    phi = euler_phi(n)
    cp = cyclotomic_polynomial(n)
    rows: list[tuple[mpq, ...]] = []
    # x^phi = -(c_0 + ... + c_{phi-1} x^{phi-1}); Phi_n is monic
    cur = [mpq(-c) for c in cp[:phi]]
    rows.append(tuple(cur))
    for _ in range(phi - 2):
        top = cur[-1]
        cur = [mpq(0)] + cur[:-1]
        if top:
            cur = [a + top * b for a, b in zip(cur, rows[0])]
        rows.append(tuple(cur))
    return phi, tuple(rows)


_MPQ_ZERO = mpq(0)
_MPQ_ONE = mpq(1)


class Cyclotomic:
    """An element of Q(zeta_N) in canonical power-basis form."""

    __slots__ = ("N", "c")

    def __init__(self, N: int, coeffs):
        self.N = N
        self.c = tuple(coeffs)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(value, N: int = 1) -> "Cyclotomic":
        phi = _field(N)[0]
        coeffs = [_MPQ_ZERO] * phi
        coeffs[0] = mpq(value)
        return Cyclotomic(N, coeffs)

    @staticmethod
    def zero(N: int = 1) -> "Cyclotomic":
        return Cyclotomic(N, (_MPQ_ZERO,) * _field(N)[0])

    @staticmethod
    def one(N: int = 1) -> "Cyclotomic":
        return Cyclotomic.from_rational(1, N)

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rational_value(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.N != self.N:
                raise ConductorMismatch(
                    f"conductors differ: {self.N} vs {other.N}")
            return other
        if isinstance(other, (int, type(_MPQ_ZERO), type(mpz(0)))):
            return Cyclotomic.from_rational(other, self.N)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.N, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Cyclotomic(self.N, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return Cyclotomic(self.N, tuple(-a for a in self.c))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.c, o.c
        phi = len(a)
        if phi == 1:
            return Cyclotomic(self.N, (a[0] * b[0],))
        conv = [_MPQ_ZERO] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = conv[:phi]
        rows = _field(self.N)[1]
        for j in range(phi, 2 * phi - 1):
            cj = conv[j]
            if cj:
                row = rows[j - phi]
                for i in range(phi):
                    if row[i]:
                        out[i] += cj * row[i]
        return Cyclotomic(self.N, out)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        phi = len(self.c)
        if phi == 1:
            return Cyclotomic(self.N, (_MPQ_ONE / self.c[0],))
        # extended Euclid in Q[x] against Phi_N (irreducible over Q)
        r0 = [mpq(v) for v in cyclotomic_polynomial(self.N)]
        r1 = list(self.c)
        t0: list[mpq] = [_MPQ_ZERO]
        t1: list[mpq] = [_MPQ_ONE]
        while True:
            while r1 and not r1[-1]:
                r1.pop()
            if len(r1) == 1:
                inv = _MPQ_ONE / r1[0]
                out = [v * inv for v in t1] + [_MPQ_ZERO] * phi
                return Cyclotomic(self.N, out[:phi])
            q, rem = _poly_divmod_q(r0, r1)
            r0, r1 = r1, rem
            t0, t1 = t1, _poly_sub_q(t0, _poly_mul_q(q, t1))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise ZeroDivisionError("cyclotomic division by zero")
        if len(self.c) == 1:
            return Cyclotomic(self.N, (self.c[0] / o.c[0],))
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.one(self.N)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, type(_MPQ_ZERO))):
            return self.is_rational() and self.c[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.N == other.N and self.c == other.c

    def __hash__(self):
        return hash((self.N, self.c))

    def __repr__(self):
        if self.is_rational():
            return f"cyc({self.c[0]}, N={self.N})"
        terms = [f"{v}*z^{i}" for i, v in enumerate(self.c) if v]
        return f"cyc({' + '.join(terms)}, N={self.N})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"N": self.N, "c": [rational_to_string(v) for v in self.c]}

    @staticmethod
    def from_json(data: dict) -> "Cyclotomic":
        n = int(data["N"])
        phi = _field(n)[0]
        coeffs = [rational_from_string(s) for s in data["c"]]
        if len(coeffs) != phi:
            raise ValueError(
                f"expected {phi} coefficients at conductor {n}, got {len(coeffs)}")
        return Cyclotomic(n, coeffs)


# -- helper polynomials over mpq (used by inverse) ---------------------------

def _poly_divmod_q(num: list[mpq], den: list[mpq]):
    num = list(num)
    dn = len(den)
    q = [_MPQ_ZERO] * max(len(num) - dn + 1, 1)
    inv_lead = _MPQ_ONE / den[-1]
    for i in range(len(num) - dn, -1, -1):
        c = num[i + dn - 1] * inv_lead
        q[i] = c
        if c:
            for j in range(dn):
                num[i + j] -= c * den[j]
    return q, num[: dn - 1] or [_MPQ_ZERO]


def _poly_mul_q(a: list[mpq], b: list[mpq]) -> list[mpq]:
    out = [_MPQ_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_sub_q(a: list[mpq], b: list[mpq]) -> list[mpq]:
    n = max(len(a), len(b))
    a = a + [_MPQ_ZERO] * (n - len(a))
    b = b + [_MPQ_ZERO] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


# -- public operations --------------------------------------------------------

def cyc(value, N: int = 1) -> Cyclotomic:
    """Embed an int/rational (or re-tag a Cyclotomic) at conductor N."""
    if isinstance(value, Cyclotomic):
        return lift_conductor(value, N) if value.N != N else value
    return Cyclotomic.from_rational(value, N)


def primitive_root(N: int) -> Cyclotomic:
    """The class of zeta_N = exp(2*pi*i/N) in the power basis."""
    if N < 1:
        raise InvalidConductor(f"conductor must be >= 1, got {N}")
    phi = _field(N)[0]
    if N == 1:
        return Cyclotomic.one(1)
    if N == 2:
        return Cyclotomic.from_rational(-1, 2)
    coeffs = [_MPQ_ZERO] * phi
    coeffs[1] = _MPQ_ONE
    return Cyclotomic(N, coeffs)


@lru_cache(maxsize=None)
def _zeta_table(N: int) -> tuple[Cyclotomic, ...]:
    z = primitive_root(N)
    powers = [Cyclotomic.one(N)]
    for _ in range(N - 1):
        powers.append(powers[-1] * z)
    return tuple(powers)


def zeta_pow(N: int, e: int) -> Cyclotomic:
    """zeta_N^e, exponent taken mod N."""
    return _zeta_table(N)[e % N]


def cyc_arith(op: str, a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    """Exact field arithmetic; operands must share a conductor."""
    if a.N != b.N:
        raise ConductorMismatch(f"conductors differ: {a.N} vs {b.N}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


@lru_cache(maxsize=None)
def _embedding_columns(N: int, M: int) -> tuple[tuple[mpq, ...], ...]:
    # column i = zeta_M^(i*M/N) in the power basis at conductor M
    step = M // N
    phi_n = _field(N)[0]
    return tuple(_zeta_table(M)[(i * step) % M].c for i in range(phi_n))


def lift_conductor(a: Cyclotomic, M: int) -> Cyclotomic:
    """Rewrite a at conductor M, where N | M (zeta_N = zeta_M^(M/N))."""
    if M < 1:
        raise InvalidConductor(f"conductor must be >= 1, got {M}")
    if a.N == M:
        return a
    if M % a.N != 0:
        raise InvalidEmbedding(f"{a.N} does not divide {M}")
    cols = _embedding_columns(a.N, M)
    phi_m = _field(M)[0]
    out = [_MPQ_ZERO] * phi_m
    for ai, col in zip(a.c, cols):
        if ai:
            for i in range(phi_m):
                if col[i]:
                    out[i] += ai * col[i]
    return Cyclotomic(M, out)


def lower_conductor(a: Cyclotomic, M: int) -> Cyclotomic:
    """Express a at the smaller conductor M | N, if the element lies there."""
    if M < 1:
        raise InvalidConductor(f"conductor must be >= 1, got {M}")
    if a.N == M:
        return a
    if a.N % M != 0:
        raise InvalidEmbedding(f"{M} does not divide {a.N}")
    cols = _embedding_columns(M, a.N)
    phi_m = _field(M)[0]
    phi_n = _field(a.N)[0]
    # solve cols * x = a.c by Gaussian elimination on the phi_n x phi_m system
    mat = [[cols[j][i] for j in range(phi_m)] + [a.c[i]] for i in range(phi_n)]
    piv = 0
    for col in range(phi_m):
        row = next((r for r in range(piv, phi_n) if mat[r][col]), None)
        if row is None:
            continue
        mat[piv], mat[row] = mat[row], mat[piv]
        inv = _MPQ_ONE / mat[piv][col]
        mat[piv] = [v * inv for v in mat[piv]]
        for r in range(phi_n):
            if r != piv and mat[r][col]:
                f = mat[r][col]
                mat[r] = [v - f * w for v, w in zip(mat[r], mat[piv])]
        piv += 1
    sol = [_MPQ_ZERO] * phi_m
    seen = 0
    for col in range(phi_m):
        row = next((r for r in range(phi_n)
                    if mat[r][col] == 1 and not any(mat[r][:col])), None)
        if row is not None:
            sol[col] = mat[row][-1]
            seen += 1
    # consistency: residual rows with zero lhs must have zero rhs
    for r in range(phi_n):
        if not any(mat[r][:phi_m]) and mat[r][-1]:
            raise InvalidEmbedding(
                f"element does not lie in Q(zeta_{M})")
    return Cyclotomic(M, sol)


def rational_to_string(q) -> str:
    return str(mpq(q))


def rational_from_string(s: str) -> mpq:
    return mpq(s)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
