"""Exact linear algebra over the rationals.

Dense matrices with ``fractions.Fraction`` entries.  Rank is computed by
fraction-free (Bareiss) elimination on an integerized copy, kernels by
reduced row echelon form, and spectra by exact characteristic polynomials
with rational-root extraction.  Everything is exact; there is no floating
point anywhere in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

from .errors import NonSquareError

try:  # big-integer cores run several times faster on GMP limbs
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int


def qq(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"``, and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def qq_str(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` or plain ``"p"``."""
    x = qq(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


Vector = list  # vectors are plain lists of Fraction


def vec_is_zero(v) -> bool:
    return all(x == 0 for x in v)


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, v):
    return [c * x for x in v]


def vec_rank_le_1(vectors) -> bool:
    """Whether the span of the given vectors has dimension at most 1."""
    ref = None
    for v in vectors:
        if vec_is_zero(v):
            continue
        if ref is None:
            ref = v
            continue
        # 2x2 minors of the pair must all vanish
        for i, j in itertools.combinations(range(len(v)), 2):
            if ref[i] * v[j] - ref[j] * v[i] != 0:
                return False
    return True


class Matrix:
    """Immutable-by-convention dense rational matrix."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data, rows=None, cols=None):
        if rows is not None:
            self.rows = rows
            self.cols = cols
            self.data = data
            return
        self.data = [[qq(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        if any(len(row) != self.cols for row in self.data):
            raise ValueError("ragged rows")

    @staticmethod
    def zeros(rows: int, cols: int) -> "Matrix":
        z = Fraction(0)
        return Matrix([[z] * cols for _ in range(rows)], rows, cols)

    @staticmethod
    def identity(n: int) -> "Matrix":
        m = Matrix.zeros(n, n)
        for i in range(n):
            m.data[i][i] = Fraction(1)
        return m

    @staticmethod
    def from_columns(columns, rows: int) -> "Matrix":
        m = Matrix.zeros(rows, len(columns))
        for j, col in enumerate(columns):
            for i in range(rows):
                m.data[i][j] = qq(col[i])
        return m

    def copy(self) -> "Matrix":
        return Matrix([row[:] for row in self.data], self.rows, self.cols)

    def row(self, i):
        return self.data[i][:]

    def column(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            self.cols,
            self.rows,
        )

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = Matrix.zeros(self.rows, other.cols)
        for i in range(self.rows):
            srow = self.data[i]
            orow = out.data[i]
            for k in range(self.cols):
                s = srow[k]
                if s == 0:
                    continue
                brow = other.data[k]
                for j in range(other.cols):
                    if brow[j] != 0:
                        orow[j] += s * brow[j]
        return out

    def mul_vec(self, v):
        if self.cols != len(v):
            raise ValueError("vector length mismatch")
        return [sum(self.data[i][j] * v[j] for j in range(self.cols)) for i in range(self.rows)]

    def add(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def sub(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            self.rows,
            self.cols,
        )

    def scale(self, c) -> "Matrix":
        c = qq(c)
        return Matrix([[c * x for x in row] for row in self.data], self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.data for x in row)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.shape == other.shape
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def __repr__(self):
        body = "; ".join(" ".join(qq_str(x) for x in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

    def to_json(self):
        return [[qq_str(x) for x in row] for row in self.data]


def matrix_from_json(rows) -> Matrix:
    return Matrix([[qq(x) for x in row] for row in rows])


def _integer_rows(m: Matrix):
    """Clear denominators row by row; row scaling preserves rank and kernel."""
    out = []
    for row in m.data:
        mult = 1
        for x in row:
            mult = lcm(mult, x.denominator)
        out.append([_mpz(x.numerator * (mult // x.denominator)) for x in row])
    return out


def rank(m: Matrix) -> int:
    """Rank over the rationals via fraction-free (Bareiss) elimination."""
    if m.rows == 0 or m.cols == 0:
        return 0
    a = _integer_rows(m)
    rows, cols = m.rows, m.cols
    prev = _mpz(1)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        pivot = a[r][c]
        for i in range(r + 1, rows):
            ai, ar = a[i], a[r]
            aic = ai[c]
            if aic:
                for j in range(c + 1, cols):
                    ai[j] = (pivot * ai[j] - aic * ar[j]) // prev
                ai[c] = _mpz(0)
            else:
                for j in range(c + 1, cols):
                    ai[j] = (pivot * ai[j]) // prev
        prev = pivot
        r += 1
    return r


def rref(m: Matrix):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    a = [row[:] for row in m.data]
    rows, cols = m.rows, m.cols
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return Matrix(a, rows, cols), pivots


def kernel_basis(m: Matrix):
    """Basis of the right kernel; size is cols - rank, solutions are exact."""
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [
            [Fraction(1) if i == j else Fraction(0) for i in range(m.cols)]
            for j in range(m.cols)
        ]
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red.data[r][fc]
        basis.append(v)
    return basis


def solve(m: Matrix, b):
    """One exact solution of m x = b, or None if inconsistent."""
    if m.rows != len(b):
        raise ValueError("right-hand side length mismatch")
    aug = Matrix([row + [qq(x)] for row, x in zip(m.data, b)], m.rows, m.cols + 1)
    red, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for r, pc in enumerate(pivots):
        x[pc] = red.data[r][m.cols]
    return x


def column_space_contains(m: Matrix, b) -> bool:
    return solve(m, b) is not None


def det(m: Matrix) -> Fraction:
    """Determinant via fraction-free elimination with denominator tracking."""
    if m.rows != m.cols:
        raise NonSquareError(f"determinant of {m.shape} matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    denom = 1
    for row in m.data:
        mult = 1
        for x in row:
            mult = lcm(mult, x.denominator)
        denom *= mult
    a = _integer_rows(m)
    prev = _mpz(1)
    sign = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        pivot = a[c][c]
        for i in range(c + 1, n):
            ai, ar = a[i], a[c]
            aic = ai[c]
            for j in range(c + 1, n):
                ai[j] = (pivot * ai[j] - aic * ar[j]) // prev
        prev = pivot
    return Fraction(sign * int(a[n - 1][n - 1]), denom)


def char_poly(m: Matrix):
    """Monic characteristic polynomial, low-degree first, via Faddeev-LeVerrier."""
    if m.rows != m.cols:
        raise NonSquareError(f"characteristic polynomial of {m.shape} matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = Matrix.identity(n)
    for k in range(1, n + 1):
        mk = m.mul(mk)
        trace = sum(mk.data[i][i] for i in range(n))
        c = -trace / k
        coeffs[n - k] = c
        for i in range(n):
            mk.data[i][i] += c
    return coeffs


@dataclass(frozen=True)
class SpectrumReport:
    """Rational eigenvalues with algebraic multiplicities.

    ``complete`` is True exactly when the multiplicities sum to the matrix
    dimension, i.e. when the characteristic polynomial splits over Q.
    """

    rational_eigenvalues: tuple
    complete: bool

    def eigenvalue_set(self):
        return {lam for lam, _ in self.rational_eigenvalues}


def _factorize(n: int) -> dict:
    """Prime factorization by trial division plus Pollard rho for large cofactors."""
    n = abs(int(n))
    factors: dict = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    f = 7
    increments = itertools.cycle((4, 2, 4, 2, 4, 6, 2, 6))
    while f * f <= n and f < 1_000_000:
        while n % f == 0:
            factors[f] = factors.get(f, 0) + 1
            n //= f
        f += next(increments)
    if n > 1:
        for p in _pollard_factor(n):
            factors[p] = factors.get(p, 0) + 1
    return factors


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_factor(n: int):
    """All prime factors of n (with multiplicity), n > 1 with no factor < 1e6."""
    if _is_probable_prime(n):
        return [n]
    if isqrt(n) ** 2 == n:
        root = isqrt(n)
        return _pollard_factor(root) * 2
    for c in itertools.count(1):
        x, y, d = 2, 2, 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return _pollard_factor(d) + _pollard_factor(n // d)


def _divisors(n: int):
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def rational_spectrum(m: Matrix) -> SpectrumReport:
    """All rational eigenvalues with multiplicity, plus a completeness flag."""
    if m.rows != m.cols:
        raise NonSquareError(f"spectrum of {m.shape} matrix")
    n = m.rows
    if n == 0:
        return SpectrumReport((), True)
    coeffs = char_poly(m)
    denom = 1
    for c in coeffs:
        denom = lcm(denom, c.denominator)
    ipoly = [int(c * denom) for c in coeffs]
    content = 0
    for c in ipoly:
        content = gcd(content, c)
    ipoly = [c // content for c in ipoly]

    found = {}
    zero_mult = 0
    while len(ipoly) > 1 and ipoly[0] == 0:
        zero_mult += 1
        ipoly = ipoly[1:]
    if zero_mult:
        found[Fraction(0)] = zero_mult

    if len(ipoly) > 1:
        lead, trail = ipoly[-1], ipoly[0]
        candidates = set()
        for p in _divisors(trail):
            for q in _divisors(lead):
                candidates.add(Fraction(p, q))
                candidates.add(Fraction(-p, q))
        for cand in sorted(candidates):
            mult = 0
            while len(ipoly) > 1:
                quot, rem = _deflate(ipoly, cand)
                if rem != 0:
                    break
                ipoly = quot
                mult += 1
            if mult:
                found[cand] = found.get(cand, 0) + mult
    total = sum(found.values())
    eigenvalues = tuple(sorted(found.items()))
    return SpectrumReport(eigenvalues, total == n)


def _deflate(ipoly, root: Fraction):
    """Synthetic division of an integer polynomial by (x - root); exact quotient."""
    out = [Fraction(c) for c in ipoly]
    n = len(out) - 1
    quot = [Fraction(0)] * n
    carry = Fraction(0)
    for k in range(n - 1, -1, -1):
        carry = out[k + 1] + root * carry
        quot[k] = carry
    rem = out[0] + root * carry
    if rem != 0:
        return None, rem
    denom = 1
    for c in quot:
        denom = lcm(denom, c.denominator)
    iq = [int(c * denom) for c in quot]
    content = 0
    for c in iq:
        content = gcd(content, c)
    if content:
        iq = [c // content for c in iq]
    return iq, Fraction(0)
