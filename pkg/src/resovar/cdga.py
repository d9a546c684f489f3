"""Finite-dimensional connected graded-commutative differential algebras.

An algebra is stored up to a degree cap: everything above ``top_degree`` is
treated as zero.  The differential is a matrix per degree, the product a
sparse triple list per degree pair (j, k) with j <= k; the (k, j) block is
derived from graded commutativity rather than stored.  Degree 0 is always
the span of the unit, and multiplication by the unit is implicit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DependentBasisError
from .exactla import Matrix, kernel_basis, qq, qq_str, rank, rref, solve, vec_is_zero


@dataclass
class ValidationReport:
    ok: bool
    failures: list

    def __bool__(self):
        return self.ok


class FiniteCdga:
    """A connected cdga, finite-dimensional in each degree up to a cap.

    Parameters
    ----------
    top_degree:
        Degree cap N; degrees above N are treated as zero.
    dims:
        Basis dimensions indexed 0..N, with dims[0] == 1.
    diff:
        Map degree k -> Matrix of shape dims[k+1] x dims[k] for d: A^k -> A^{k+1}.
        Missing degrees mean the zero map.
    mult:
        Map (j, k) with 1 <= j <= k -> list of (a, b, c, coeff) meaning
        basis_a * basis_b = sum coeff * basis_c in degree j+k.  For j == k only
        pairs with a <= b are stored; the rest follows from graded commutativity.
    truncated:
        True when the algebra is a degree truncation of something larger, in
        which case top-degree cohomology is sensitive to the missing data.
    """

    def __init__(self, top_degree, dims, diff=None, mult=None, basis_names=None,
                 truncated=False):
        if top_degree < 0 or len(dims) != top_degree + 1:
            raise ValueError("dims must cover degrees 0..top_degree")
        if dims[0] != 1:
            raise ValueError("connected algebra requires dims[0] == 1")
        if any(d < 0 for d in dims):
            raise ValueError("negative dimension")
        self.top_degree = top_degree
        self.dims = list(dims)
        self.truncated = truncated
        self.basis_names = dict(basis_names) if basis_names else {}

        self.diff = {}
        for k, m in (diff or {}).items():
            k = int(k)
            if not 0 <= k < top_degree and not (k == top_degree):
                raise ValueError(f"differential from degree {k} out of range")
            target = dims[k + 1] if k + 1 <= top_degree else 0
            if m.shape != (target, dims[k]):
                raise ValueError(
                    f"d in degree {k} must be {target}x{dims[k]}, got {m.shape}"
                )
            if not m.is_zero():
                self.diff[k] = m

        self.mult = {}
        for (j, k), triples in (mult or {}).items():
            j, k = int(j), int(k)
            if not (1 <= j <= k):
                raise ValueError(f"mult block ({j},{k}) must have 1 <= j <= k")
            if j + k > top_degree:
                continue  # products landing above the cap are zero
            cleaned = []
            for a, b, c, coeff in triples:
                coeff = qq(coeff)
                if coeff == 0:
                    continue
                if not (0 <= a < dims[j] and 0 <= b < dims[k] and 0 <= c < dims[j + k]):
                    raise ValueError(f"mult index out of range in block ({j},{k})")
                if j == k and a > b:
                    raise ValueError(
                        f"diagonal mult block ({j},{j}) must store pairs with a <= b"
                    )
                cleaned.append((a, b, c, coeff))
            if cleaned:
                self.mult[(j, k)] = cleaned
        self._pair_cache = {}

    # -- basic accessors -------------------------------------------------

    def name(self, k, i):
        names = self.basis_names.get(k)
        return names[i] if names else f"a{k}_{i}"

    def diff_matrix(self, k) -> Matrix:
        """Matrix of d: A^k -> A^{k+1} (zero above the cap)."""
        if k in self.diff:
            return self.diff[k]
        target = self.dims[k + 1] if k + 1 <= self.top_degree else 0
        source = self.dims[k] if k <= self.top_degree else 0
        return Matrix.zeros(target, source)

    def basis_products(self, j, k):
        """dict (a, b) -> list of (c, coeff) for the full (j, k) block."""
        key = (j, k)
        if key in self._pair_cache:
            return self._pair_cache[key]
        table = {}
        if j + k <= self.top_degree and j >= 1 and k >= 1:
            sign = Fraction(-1) if (j * k) % 2 else Fraction(1)
            if j < k:
                for a, b, c, coeff in self.mult.get((j, k), ()):
                    table.setdefault((a, b), []).append((c, coeff))
            elif j > k:
                for a, b, c, coeff in self.mult.get((k, j), ()):
                    table.setdefault((b, a), []).append((c, sign * coeff))
            else:
                for a, b, c, coeff in self.mult.get((j, j), ()):
                    table.setdefault((a, b), []).append((c, coeff))
                    if a != b:
                        table.setdefault((b, a), []).append((c, sign * coeff))
        self._pair_cache[key] = table
        return table

    def product_vec(self, j, vj, k, vk):
        """Product of an element of A^j and one of A^k, as a vector in A^{j+k}."""
        if j == 0:
            return [vj[0] * x for x in vk]
        if k == 0:
            return [vk[0] * x for x in vj]
        size = self.dims[j + k] if j + k <= self.top_degree else 0
        out = [Fraction(0)] * size
        if size == 0:
            return out
        table = self.basis_products(j, k)
        for (a, b), terms in table.items():
            f = vj[a] * vk[b]
            if f == 0:
                continue
            for c, coeff in terms:
                out[c] += f * coeff
        return out

    def d_vec(self, k, v):
        if k >= self.top_degree:
            return []
        return self.diff_matrix(k).mul_vec(v)

    def euler_characteristic(self):
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def basis_vector(self, k, i):
        v = [Fraction(0)] * self.dims[k]
        v[i] = Fraction(1)
        return v

    # -- serialization ---------------------------------------------------

    def to_json(self):
        doc = {
            "top_degree": self.top_degree,
            "dims": list(self.dims),
            "diff": {str(k): m.to_json() for k, m in sorted(self.diff.items())},
            "mult": {
                f"{j},{k}": [[a, b, c, qq_str(coeff)] for a, b, c, coeff in triples]
                for (j, k), triples in sorted(self.mult.items())
            },
        }
        if self.basis_names:
            doc["names"] = {str(k): list(v) for k, v in sorted(self.basis_names.items())}
        if self.truncated:
            doc["truncated"] = True
        return doc


def cdga_from_json(doc) -> FiniteCdga:
    diff = {int(k): Matrix([[qq(x) for x in row] for row in m])
            for k, m in doc.get("diff", {}).items()}
    mult = {}
    for key, triples in doc.get("mult", {}).items():
        j, k = (int(t) for t in key.split(","))
        mult[(j, k)] = [(int(a), int(b), int(c), qq(co)) for a, b, c, co in triples]
    names = {int(k): list(v) for k, v in doc.get("names", {}).items()} or None
    return FiniteCdga(
        int(doc["top_degree"]),
        [int(d) for d in doc["dims"]],
        diff=diff,
        mult=mult,
        basis_names=names,
        truncated=bool(doc.get("truncated", False)),
    )


# -- validation ----------------------------------------------------------


def validate_cdga(a: FiniteCdga) -> ValidationReport:
    """Check d*d = 0, graded commutativity, Leibniz, and associativity.

    Axiom failures are collected and reported, never raised; structural
    shape violations are already rejected by the constructor.
    """
    failures = []
    n = a.top_degree

    for k in range(n + 1):
        dd = _compose_diff(a, k)
        if dd is not None and not dd.is_zero():
            failures.append(f"d o d != 0 on degree {k}")

    for j in range(1, n + 1):
        for k in range(j, n - j + 1):
            sign = Fraction(-1) if (j * k) % 2 else Fraction(1)
            for x in range(a.dims[j]):
                for y in range(a.dims[k]):
                    ab = a.product_vec(j, a.basis_vector(j, x), k, a.basis_vector(k, y))
                    ba = a.product_vec(k, a.basis_vector(k, y), j, a.basis_vector(j, x))
                    if ab != [sign * t for t in ba]:
                        failures.append(
                            f"graded commutativity fails on ({a.name(j, x)}, {a.name(k, y)})"
                        )

    for j in range(1, n + 1):
        for k in range(1, n - j + 1):
            sign = Fraction(-1) if j % 2 else Fraction(1)
            for x in range(a.dims[j]):
                bx = a.basis_vector(j, x)
                dx = a.d_vec(j, bx)
                for y in range(a.dims[k]):
                    by = a.basis_vector(k, y)
                    dy = a.d_vec(k, by)
                    lhs = a.d_vec(j + k, a.product_vec(j, bx, k, by))
                    rhs = _vec_sum(
                        a.product_vec(j + 1, dx, k, by) if j + 1 + k <= n else [],
                        [sign * t for t in a.product_vec(j, bx, k + 1, dy)]
                        if j + k + 1 <= n
                        else [],
                        a.dims[j + k + 1] if j + k + 1 <= n else 0,
                    )
                    if lhs != rhs:
                        failures.append(
                            f"Leibniz fails on ({a.name(j, x)}, {a.name(k, y)})"
                        )

    for i in range(1, n + 1):
        for j in range(1, n + 1 - i):
            for k in range(1, n + 1 - i - j):
                for x, y, z in itertools.product(
                    range(a.dims[i]), range(a.dims[j]), range(a.dims[k])
                ):
                    xy = a.product_vec(i, a.basis_vector(i, x), j, a.basis_vector(j, y))
                    left = a.product_vec(i + j, xy, k, a.basis_vector(k, z))
                    yz = a.product_vec(j, a.basis_vector(j, y), k, a.basis_vector(k, z))
                    right = a.product_vec(i, a.basis_vector(i, x), j + k, yz)
                    if left != right:
                        failures.append(
                            "associativity fails on "
                            f"({a.name(i, x)}, {a.name(j, y)}, {a.name(k, z)})"
                        )

    return ValidationReport(not failures, failures)


def _compose_diff(a, k):
    if k + 2 > a.top_degree:
        return None
    return a.diff_matrix(k + 1).mul(a.diff_matrix(k))


def _vec_sum(u, v, size):
    out = [Fraction(0)] * size
    for vec in (u, v):
        for i, x in enumerate(vec):
            out[i] += x
    return out


# -- cohomology ----------------------------------------------------------


def cohomology_dims(a: FiniteCdga):
    """Betti numbers dim ker(d^k) / im(d^{k-1}) for k = 0..top_degree.

    The top-degree value counts d into degree N+1 as zero, so it is only
    meaningful for honestly finite algebras; ``a.truncated`` tells callers
    when to distrust it.
    """
    out = []
    prev_rank = 0
    for k in range(a.top_degree + 1):
        rk = rank(a.diff_matrix(k)) if k < a.top_degree else 0
        out.append(a.dims[k] - rk - prev_rank)
        prev_rank = rk
    return out


def truncate(a: FiniteCdga, q: int) -> FiniteCdga:
    """The quotient A / A^{>q}: degrees above q are dropped."""
    if q > a.top_degree:
        raise ValueError("cannot truncate above the existing cap")
    if q == a.top_degree:
        return a
    dims = a.dims[: q + 1]
    diff = {k: m for k, m in a.diff.items() if k + 1 <= q}
    mult = {
        (j, k): triples for (j, k), triples in a.mult.items() if j + k <= q
    }
    names = {k: v for k, v in a.basis_names.items() if k <= q}
    dropped = any(d for d in a.dims[q + 1:]) or a.truncated
    return FiniteCdga(q, dims, diff=diff, mult=mult, basis_names=names,
                      truncated=dropped)


def restrict_degree_one(a: FiniteCdga, c_basis) -> FiniteCdga:
    """The sub-cdga with degree 1 restricted to the span of ``c_basis``.

    The result lives in degrees <= 2 with the full A^2 as its degree-2 part,
    and d, product restricted along the inclusion.
    """
    if a.top_degree < 2:
        raise ValueError("need degrees up to 2 to restrict")
    cols = [list(map(qq, v)) for v in c_basis]
    for v in cols:
        if len(v) != a.dims[1]:
            raise ValueError("c_basis vectors must live in degree 1")
    if cols:
        cmat = Matrix.from_columns(cols, a.dims[1])
        if rank(cmat) != len(cols):
            raise DependentBasisError("c_basis is linearly dependent")
    dims = [1, len(cols), a.dims[2]]
    d1 = a.diff_matrix(1)
    diff = {1: Matrix([[sum(d1.data[r][i] * col[i] for i in range(a.dims[1]))
                        for col in cols] for r in range(a.dims[2])]
                      or [[]] * a.dims[2])} if cols and a.dims[2] else {}
    triples = []
    for x in range(len(cols)):
        for y in range(x, len(cols)):
            prod = a.product_vec(1, cols[x], 1, cols[y])
            for c, coeff in enumerate(prod):
                if coeff != 0:
                    triples.append((x, y, c, coeff))
    mult = {(1, 1): triples} if triples else {}
    names = {2: a.basis_names[2]} if 2 in a.basis_names else {}
    return FiniteCdga(2, dims, diff=diff, mult=mult, basis_names=names,
                      truncated=True)


class CohomologyRing:
    """Cohomology of a cdga with chosen closed representatives.

    ``ring`` is the induced zero-differential cdga; ``representatives[k]``
    lists the chosen closed vectors in A^k; ``project`` sends a closed
    element of A^k to its class coordinates.
    """

    def __init__(self, source, ring, representatives):
        self.source = source
        self.ring = ring
        self.representatives = representatives

    def project(self, k, v):
        src = self.source
        boundary_cols = []
        if k > 0:
            dprev = src.diff_matrix(k - 1)
            boundary_cols = [dprev.column(j) for j in range(dprev.cols)]
        reps = self.representatives[k]
        cols = [list(r) for r in reps] + boundary_cols
        if not cols:
            if not vec_is_zero(v):
                raise ValueError("element is not closed-with-known-class")
            return []
        m = Matrix.from_columns(cols, src.dims[k])
        x = solve(m, list(v))
        if x is None:
            raise ValueError("element is not in the span of cocycles")
        return x[: len(reps)]


def cohomology_ring(a: FiniteCdga) -> FiniteCdga:
    return cohomology_ring_with_maps(a).ring


def cohomology_ring_with_maps(a: FiniteCdga) -> CohomologyRing:
    """Choose basis representatives for H^* and induce the ring structure.

    Representatives are the kernel-basis vectors that complete the boundary
    space, taken in deterministic elimination order, so identical inputs
    give identical outputs.
    """
    reps = []
    for k in range(a.top_degree + 1):
        if k == 0:
            reps.append([a.basis_vector(0, 0)])
            continue
        zk = (
            kernel_basis(a.diff_matrix(k))
            if k < a.top_degree
            else [a.basis_vector(k, i) for i in range(a.dims[k])]
        )
        dprev = a.diff_matrix(k - 1)
        chosen = []
        span = [dprev.column(j) for j in range(dprev.cols)]
        span_rank = rank(Matrix.from_columns(span, a.dims[k])) if span else 0
        for v in zk:
            trial = span + [list(v)]
            new_rank = rank(Matrix.from_columns(trial, a.dims[k]))
            if new_rank > span_rank:
                chosen.append(list(v))
                span = trial
                span_rank = new_rank
        reps.append(chosen)

    dims = [len(r) for r in reps]
    holder = CohomologyRing(a, None, reps)
    mult = {}
    for j in range(1, a.top_degree + 1):
        for k in range(j, a.top_degree + 1 - j):
            triples = []
            for x, vx in enumerate(reps[j]):
                ys = enumerate(reps[k])
                for y, vy in ys:
                    if j == k and y < x:
                        continue
                    prod = a.product_vec(j, vx, k, vy)
                    coords = holder.project(j + k, prod)
                    for c, coeff in enumerate(coords):
                        if coeff != 0:
                            triples.append((x, y, c, coeff))
            if triples:
                mult[(j, k)] = triples
    names = {}
    for k, chosen in enumerate(reps):
        if a.basis_names.get(k) and dims[k] == a.dims[k]:
            names[k] = a.basis_names[k]
        else:
            names[k] = [f"h{k}_{i}" for i in range(dims[k])]
    ring = FiniteCdga(a.top_degree, dims, diff={}, mult=mult, basis_names=names,
                      truncated=a.truncated)
    holder.ring = ring
    return holder


# -- weights -------------------------------------------------------------


@dataclass
class WeightAssignment:
    """Integer weight per basis element, stored per degree."""

    weights: dict = field(default_factory=dict)  # degree -> list of ints

    def weight(self, k, i):
        return self.weights[k][i]

    def covers(self, a: FiniteCdga) -> bool:
        return all(
            k in self.weights and len(self.weights[k]) == a.dims[k]
            for k in range(a.top_degree + 1)
            if a.dims[k]
        )


def check_weights(a: FiniteCdga, w: WeightAssignment) -> bool:
    """True iff d preserves weight, products add weights, and A^1 weights >= 1."""
    if not w.covers(a):
        raise ValueError("every basis element needs a weight")
    if any(wt < 1 for wt in w.weights.get(1, [])):
        return False
    for k in range(a.top_degree):
        m = a.diff_matrix(k)
        for i in range(a.dims[k]):
            for r in range(a.dims[k + 1]):
                if m.data[r][i] != 0 and w.weight(k + 1, r) != w.weight(k, i):
                    return False
    for (j, k), triples in a.mult.items():
        for x, y, c, coeff in triples:
            if coeff != 0 and w.weight(j + k, c) != w.weight(j, x) + w.weight(k, y):
                return False
    return True


def weight_components(a: FiniteCdga, w: WeightAssignment, k, v):
    """Split a degree-k vector into its weight-homogeneous pieces."""
    pieces = {}
    for i, x in enumerate(v):
        if x != 0:
            wt = w.weight(k, i)
            pieces.setdefault(wt, [Fraction(0)] * a.dims[k])[i] = x
    return pieces


# -- constructors shared by other modules --------------------------------


def exterior_algebra(n, names=None, diff_on_generators=None, top_degree=None):
    """Exterior algebra on n degree-1 generators, optionally with a differential.

    ``diff_on_generators`` maps generator index -> list of ((i, j), coeff)
    giving d(x_i) as a combination of basis 2-forms x_i ^ x_j with i < j.
    The differential is extended to all degrees by the graded Leibniz rule,
    and the wedge pairing is (s ^ t)(u ^ v) = s(u) t(v) - s(v) t(u).
    """
    cap = n if top_degree is None else min(top_degree, n)
    gen_names = names or [f"x{i}" for i in range(n)]
    basis = {k: list(itertools.combinations(range(n), k)) for k in range(cap + 1)}
    index = {k: {t: i for i, t in enumerate(basis[k])} for k in range(cap + 1)}
    dims = [len(basis[k]) for k in range(cap + 1)]

    def wedge_monomials(t1, t2):
        """Sign-ordered wedge of two strictly increasing index tuples."""
        merged = list(t1)
        sign = 1
        for g in t2:
            if g in merged:
                return None, 0
            pos = 0
            while pos < len(merged) and merged[pos] < g:
                pos += 1
            sign *= (-1) ** (len(merged) - pos)
            merged.insert(pos, g)
        return tuple(merged), sign

    mult = {}
    for j in range(1, cap + 1):
        for k in range(j, cap + 1 - j):
            triples = []
            for x, t1 in enumerate(basis[j]):
                for y, t2 in enumerate(basis[k]):
                    if j == k and y < x:
                        continue
                    merged, sign = wedge_monomials(t1, t2)
                    if merged is not None:
                        triples.append((x, y, index[j + k][merged], Fraction(sign)))
            if triples:
                mult[(j, k)] = triples

    diff = {}
    if diff_on_generators:
        d_gen = {g: list(terms) for g, terms in diff_on_generators.items()}
        for k in range(1, cap):
            m = Matrix.zeros(dims[k + 1], dims[k])
            for col, mono in enumerate(basis[k]):
                # d(x_{s1} ^ ... ^ x_{sk}) = sum_t (-1)^{t} x_{s1} ^ .. d(x_{st}) .. ^ x_{sk}
                for pos, g in enumerate(mono):
                    rest = mono[:pos] + mono[pos + 1:]
                    sign0 = (-1) ** pos
                    for (i, j2), coeff in d_gen.get(g, ()):  # d(x_g) = coeff * x_i ^ x_j2
                        merged, sign = wedge_monomials((i, j2), rest)
                        if merged is None:
                            continue
                        m.data[index[k + 1][merged]][col] += Fraction(sign0 * sign) * qq(coeff)
            if not m.is_zero():
                diff[k] = m

    basis_names = {
        k: [
            "1" if k == 0 else "^".join(gen_names[g] for g in mono)
            for mono in basis[k]
        ]
        for k in range(cap + 1)
    }
    return FiniteCdga(cap, dims, diff=diff, mult=mult, basis_names=basis_names,
                      truncated=cap < n)
