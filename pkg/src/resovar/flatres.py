"""Flat connections, Aomoto complexes, resonance membership, and holonomy.

A connection is an element of A^1 tensor g, stored as a coefficient matrix
with one row per degree-1 basis element and one column per Lie algebra
basis element.  Everything downstream of the Maurer-Cartan equation lives
here: covariant-derivative matrices, resonance tests, essentially-rank-one
loci, the eigenvalue reduction, holonomy presentations, and the two
semi-decision detectors.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .cdga import FiniteCdga, cohomology_ring_with_maps
from .errors import (
    IncompleteSpectrumError,
    NotFlatError,
    NotNilpotentError,
    ShapeMismatchError,
)
from .exactla import (
    Matrix,
    det,
    kernel_basis,
    matrix_from_json,
    qq,
    rank,
    rational_spectrum,
    solve,
    vec_is_zero,
    vec_rank_le_1,
)
from .liealg import LieAlgebra, Representation, is_nilpotent, scalar_rep


@dataclass
class Connection:
    """omega = sum_i eta_i (x) g_i with eta_i the degree-1 basis.

    ``coeffs`` has shape dims[1] x dim(lie); row i holds the coordinates of
    g_i, so reading rows as images of dual generators is exactly the psi
    identification with linear maps A_1 -> g.
    """

    cdga: FiniteCdga
    lie: LieAlgebra
    coeffs: Matrix

    def __post_init__(self):
        if self.coeffs.shape != (self.cdga.dims[1], self.lie.dim):
            raise ShapeMismatchError(
                f"coefficient matrix must be {self.cdga.dims[1]}x{self.lie.dim}, "
                f"got {self.coeffs.shape}"
            )
        if self.cdga.top_degree < 2:
            raise ShapeMismatchError("connections need degrees up to 2")

    def lie_rows(self):
        return [self.coeffs.row(i) for i in range(self.coeffs.rows)]

    def form_columns(self):
        """The degree-1 slices alpha_s, one per Lie basis element."""
        return [self.coeffs.column(s) for s in range(self.coeffs.cols)]

    def to_json(self):
        return {"coeffs": self.coeffs.to_json()}


def connection_from_json(a: FiniteCdga, lie: LieAlgebra, doc) -> Connection:
    return Connection(a, lie, matrix_from_json(doc["coeffs"]))


def zero_connection(a: FiniteCdga, lie: LieAlgebra) -> Connection:
    return Connection(a, lie, Matrix.zeros(a.dims[1], lie.dim))


def rank_one_connection(a: FiniteCdga, eta, gvec, lie: LieAlgebra) -> Connection:
    return Connection(a, lie, Matrix([[qq(e) * qq(g) for g in gvec] for e in eta]))


def scalar_connection(a: FiniteCdga, eta) -> Connection:
    """eta as a connection valued in the abelian line (theta = id_C)."""
    one = scalar_rep()
    return Connection(a, one.lie, Matrix([[qq(x)] for x in eta]))


# -- flatness --------------------------------------------------------------


def mc_defect(omega: Connection) -> Matrix:
    """The Maurer-Cartan expression in A^2 tensor g; flat iff zero.

    Computes sum_i d(eta_i) (x) g_i + sum_{i<j} eta_i eta_j (x) [g_i, g_j]
    as a dims[2] x dim(lie) matrix.
    """
    a, g = omega.cdga, omega.lie
    n1, dim2 = a.dims[1], a.dims[2]
    out = Matrix.zeros(dim2, g.dim)
    d1 = a.diff_matrix(1)
    rows = omega.lie_rows()
    for i in range(n1):
        gi = rows[i]
        if vec_is_zero(gi):
            continue
        for r in range(dim2):
            c = d1.data[r][i]
            if c != 0:
                for s in range(g.dim):
                    if gi[s] != 0:
                        out.data[r][s] += c * gi[s]
    prods = a.basis_products(1, 1)
    for i in range(n1):
        gi = rows[i]
        if vec_is_zero(gi):
            continue
        for j in range(i + 1, n1):
            gj = rows[j]
            if vec_is_zero(gj):
                continue
            terms = prods.get((i, j))
            if not terms:
                continue
            br = g.bracket_vec(gi, gj)
            if vec_is_zero(br):
                continue
            for r, c in terms:
                for s in range(g.dim):
                    if br[s] != 0:
                        out.data[r][s] += c * br[s]
    return out


def is_flat(omega: Connection) -> bool:
    return mc_defect(omega).is_zero()


# -- the Aomoto complex ----------------------------------------------------


def aomoto_matrix(omega: Connection, theta: Representation, k: int) -> Matrix:
    """Matrix of the covariant derivative A^k (x) V -> A^{k+1} (x) V.

    Tensor bases are ordered basis-element-major: index = a * v_dim + v.
    The map is d (x) id plus left multiplication by eta_i twisted by
    theta(g_i), per the coordinate form of the covariant derivative.
    """
    a = omega.cdga
    if theta.lie.to_json() != omega.lie.to_json():
        raise ShapeMismatchError("representation and connection disagree on the Lie algebra")
    if k > a.top_degree:
        raise ShapeMismatchError(f"degree {k} exceeds the cap {a.top_degree}")
    v = theta.v_dim
    src = a.dims[k] * v
    tgt = (a.dims[k + 1] * v) if k + 1 <= a.top_degree else 0
    m = Matrix.zeros(tgt, src)
    if tgt == 0 or src == 0:
        return m
    dk = a.diff_matrix(k)
    for col_a in range(a.dims[k]):
        for row_a in range(a.dims[k + 1]):
            c = dk.data[row_a][col_a]
            if c != 0:
                for t in range(v):
                    m.data[row_a * v + t][col_a * v + t] += c
    ops = [theta.apply(row) for row in omega.lie_rows()]
    if k == 0:
        # eta_i * 1 = eta_i
        for i in range(a.dims[1]):
            op = ops[i]
            for t1 in range(v):
                for t2 in range(v):
                    if op.data[t1][t2] != 0:
                        m.data[i * v + t1][t2] += op.data[t1][t2]
        return m
    prods = a.basis_products(1, k)
    for (i, b), terms in prods.items():
        op = ops[i]
        for c_idx, coeff in terms:
            for t1 in range(v):
                for t2 in range(v):
                    if op.data[t1][t2] != 0:
                        m.data[c_idx * v + t1][b * v + t2] += coeff * op.data[t1][t2]
    return m


@dataclass
class AomotoReport:
    flat: bool
    dims_h: list
    euler_check: bool
    h0_formula_check: bool
    top_degree_truncation_sensitive: bool

    @property
    def dims_H(self):
        return self.dims_h


def aomoto_cohomology(omega: Connection, theta: Representation) -> AomotoReport:
    """Cohomology of (A (x) V, d_omega) with the two built-in cross-checks.

    Raises NotFlatError when omega fails the Maurer-Cartan equation; for
    flat omega the covariant derivative squares to zero, which the matrix
    assembly reverifies implicitly via the rank bookkeeping.
    """
    if not is_flat(omega):
        raise NotFlatError("the connection is not flat")
    a = omega.cdga
    v = theta.v_dim
    dims_h = []
    prev_rank = 0
    for k in range(a.top_degree + 1):
        if k < a.top_degree:
            rk = rank(aomoto_matrix(omega, theta, k))
        else:
            rk = 0
        dims_h.append(a.dims[k] * v - rk - prev_rank)
        prev_rank = rk
    euler = sum((-1) ** k * h for k, h in enumerate(dims_h))
    euler_check = euler == a.euler_characteristic() * v
    stacked_rows = []
    for gi in omega.lie_rows():
        op = theta.apply(gi)
        stacked_rows.extend(op.data)
    common_kernel = (
        v - rank(Matrix(stacked_rows, len(stacked_rows), v)) if stacked_rows else v
    )
    h0_check = dims_h[0] == common_kernel
    return AomotoReport(True, dims_h, euler_check, h0_check, a.truncated)


def in_resonance(omega: Connection, theta: Representation, i: int, r: int) -> bool:
    """Whether dim H^i of the Aomoto complex is at least r.

    Degrees beyond the cap are honestly zero only for non-truncated
    algebras; the report's truncation flag is the caller's warning.
    """
    if i > omega.cdga.top_degree:
        return r == 0
    report = aomoto_cohomology(omega, theta)
    return report.dims_h[i] >= r


def resonance_dims(omega: Connection, theta: Representation):
    return aomoto_cohomology(omega, theta).dims_h


# -- essentially rank one --------------------------------------------------


@dataclass
class RankOneFactor:
    eta: list
    gvec: list
    eta_closed: bool


def rank_one_factor(omega: Connection):
    """A factorization coeffs = eta * g^T when the coefficient rank is <= 1.

    Returns None when the rank exceeds 1.  Membership in the essentially
    rank-one locus additionally needs d(eta) = 0, reported separately since
    the factor of a rank-one matrix is unique up to scalar.
    """
    m = omega.coeffs
    a = omega.cdga
    eta = None
    first_col = None
    for s in range(m.cols):
        col = m.column(s)
        if not vec_is_zero(col):
            eta = col
            first_col = s
            break
    if eta is None:
        return RankOneFactor([Fraction(0)] * m.rows, [Fraction(0)] * m.cols, True)
    r0 = next(i for i, x in enumerate(eta) if x != 0)
    gvec = []
    for s in range(m.cols):
        scale = m.data[r0][s] / eta[r0]
        gvec.append(scale)
        for i in range(m.rows):
            if m.data[i][s] != eta[i] * scale:
                return None
    assert gvec[first_col] == 1
    closed = vec_is_zero(a.d_vec(1, eta)) if a.dims[1] else True
    return RankOneFactor(eta, gvec, closed)


def in_essentially_rank_one(omega: Connection) -> bool:
    f = rank_one_factor(omega)
    return f is not None and f.eta_closed


def in_pi(omega: Connection, theta: Representation) -> bool:
    """Rank-one with closed form and singular theta value."""
    f = rank_one_factor(omega)
    if f is None or not f.eta_closed:
        return False
    return det(theta.apply(f.gvec)) == 0


# -- eigenvalue reduction ----------------------------------------------------


@dataclass
class EigenReductionReport:
    direct: bool
    via_eigenvalues: bool
    eigenvalues: tuple
    agree: bool


def eigen_reduction_check(a: FiniteCdga, eta, gvec, theta: Representation,
                          k: int) -> EigenReductionReport:
    """Compare direct resonance of eta (x) g with the eigenvalue criterion.

    The direct side runs the full Aomoto complex for the twisted module;
    the other side asks whether lambda * eta is rank-one resonant for some
    rational eigenvalue lambda of theta(g).  Requires a complete rational
    spectrum, otherwise the comparison would be vacuous.
    """
    eta = [qq(x) for x in eta]
    if not vec_is_zero(a.d_vec(1, eta)):
        raise NotFlatError("eta must be closed")
    op = theta.apply([qq(x) for x in gvec])
    spec = rational_spectrum(op)
    if not spec.complete:
        raise IncompleteSpectrumError(
            "theta(g) has irrational eigenvalues; the reduction is untestable here"
        )
    omega = rank_one_connection(a, eta, gvec, theta.lie)
    direct = in_resonance(omega, theta, k, 1)
    one = scalar_rep()
    via = False
    for lam, _mult in spec.rational_eigenvalues:
        scaled = scalar_connection(a, [lam * x for x in eta])
        if in_resonance(scaled, one, k, 1):
            via = True
            break
    return EigenReductionReport(direct, via, spec.rational_eigenvalues,
                                direct == via)


# -- holonomy presentations --------------------------------------------------


@dataclass
class Relation:
    """linear + sum_{i<j} bilinear[i][j] [u_i, u_j] = 0 among the generators."""

    linear: list
    bilinear: Matrix


@dataclass
class LiePresentation:
    generator_count: int
    relations: list


def holonomy_presentation(a: FiniteCdga) -> LiePresentation:
    """Generators dual to A^1, one relation per A^2 basis element.

    The relation attached to e is d*(e) + cup*(e), pairing e against the
    differential and the products of degree-1 basis elements under the
    identification of wedges with brackets.
    """
    if a.top_degree < 2:
        raise ShapeMismatchError("holonomy presentations need degrees up to 2")
    n1, n2 = a.dims[1], a.dims[2]
    d1 = a.diff_matrix(1)
    prods = a.basis_products(1, 1)
    relations = []
    for e in range(n2):
        linear = [d1.data[e][i] for i in range(n1)]
        bil = Matrix.zeros(n1, n1)
        for i in range(n1):
            for j in range(i + 1, n1):
                terms = prods.get((i, j))
                if not terms:
                    continue
                coeff = Fraction(0)
                for c_idx, c in terms:
                    if c_idx == e:
                        coeff += c
                if coeff != 0:
                    bil.data[i][j] = coeff
                    bil.data[j][i] = -coeff
        relations.append(Relation(linear, bil))
    return LiePresentation(n1, relations)


def is_lie_morphism(p: LiePresentation, g: LieAlgebra, rho: Matrix) -> bool:
    """Whether the generator assignment kills every relation in g."""
    if rho.shape != (p.generator_count, g.dim):
        raise ShapeMismatchError(
            f"assignment must be {p.generator_count}x{g.dim}, got {rho.shape}"
        )
    images = [rho.row(i) for i in range(p.generator_count)]
    for rel in p.relations:
        acc = [Fraction(0)] * g.dim
        for i, c in enumerate(rel.linear):
            if c != 0:
                for s in range(g.dim):
                    acc[s] += c * images[i][s]
        for i in range(p.generator_count):
            for j in range(i + 1, p.generator_count):
                c = rel.bilinear.data[i][j]
                if c != 0:
                    br = g.bracket_vec(images[i], images[j])
                    for s in range(g.dim):
                        acc[s] += c * br[s]
        if not vec_is_zero(acc):
            return False
    return True


def psi(omega: Connection) -> Matrix:
    """Read the coefficient matrix as a generator assignment A_1 -> g."""
    return omega.coeffs


def presentation_cohomology_dims(p: LiePresentation, rho_ops):
    """H^0 and H^1 of the three-term complex V -> Hom(A_1,V) -> Hom(A_2,V).

    ``rho_ops`` assigns an operator on V to each generator.  This is the
    independent route to low-degree Aomoto cohomology used by the tests.
    """
    v = rho_ops[0].rows if rho_ops else 0
    gens = p.generator_count
    d0 = Matrix.zeros(gens * v, v)
    for i, op in enumerate(rho_ops):
        for t1 in range(v):
            for t2 in range(v):
                d0.data[i * v + t1][t2] = op.data[t1][t2]
    d1 = Matrix.zeros(len(p.relations) * v, gens * v)
    for e, rel in enumerate(p.relations):
        for i, c in enumerate(rel.linear):
            if c != 0:
                for t in range(v):
                    d1.data[e * v + t][i * v + t] += c
        # delta extends to brackets by delta([u,w]) = rho(u) delta(w) - rho(w) delta(u)
        for i in range(gens):
            for j in range(i + 1, gens):
                c = rel.bilinear.data[i][j]
                if c == 0:
                    continue
                for t1 in range(v):
                    for t2 in range(v):
                        if rho_ops[i].data[t1][t2] != 0:
                            d1.data[e * v + t1][j * v + t2] += c * rho_ops[i].data[t1][t2]
                        if rho_ops[j].data[t1][t2] != 0:
                            d1.data[e * v + t1][i * v + t2] -= c * rho_ops[j].data[t1][t2]
    r0, r1 = rank(d0), rank(d1)
    h0 = v - r0
    h1 = gens * v - r1 - r0
    return h0, h1


# -- semi-decision detectors -------------------------------------------------


@dataclass
class Witness:
    mode: str
    alpha: list
    beta: list
    gamma: list | None
    verified: bool


SOL2_TARGET = "sol2_target"
HEIS3_TARGET = "heis3_target"


def detect_nonzero_resonance(a: FiniteCdga, mode: str, budget: int = 200,
                             seed: int = 0):
    """Search for a witness that rank-one resonance is not just the origin.

    sol2_target looks for (alpha, beta) with d(alpha) = 0,
    d(beta) + alpha beta = 0 and rank {alpha, beta} = 2; heis3_target looks
    for closed alpha, beta of rank 2 whose product is a boundary.  Seeded
    draws of alpha from the cocycle space, exact linear solves for the rest,
    and exact reverification of any witness.  Returning None means only "no
    witness within budget", never emptiness.
    """
    if mode not in (SOL2_TARGET, HEIS3_TARGET):
        raise ValueError(f"unknown detection mode {mode!r}")
    n1 = a.dims[1]
    if n1 < 2:
        return None
    d1 = a.diff_matrix(1)
    cocycles = kernel_basis(d1)
    if not cocycles:
        return None
    rng = random.Random(seed)

    def draw_cocycle():
        while True:
            coeffs = [Fraction(rng.randint(-3, 3)) for _ in cocycles]
            v = [Fraction(0)] * n1
            for c, basis_vec in zip(coeffs, cocycles):
                if c != 0:
                    for t, x in enumerate(basis_vec):
                        v[t] += c * x
            if not vec_is_zero(v):
                return v

    if mode == SOL2_TARGET:
        for _ in range(budget):
            alpha = draw_cocycle()
            left = _left_mult_matrix(a, alpha)
            m = Matrix(
                [
                    [d1.data[r][c] + left.data[r][c] for c in range(n1)]
                    for r in range(a.dims[2])
                ],
                a.dims[2],
                n1,
            ) if a.dims[2] else Matrix.zeros(0, n1)
            for beta in kernel_basis(m):
                if not vec_rank_le_1([alpha, beta]):
                    ok = _verify_sol2_witness(a, alpha, beta)
                    return Witness(mode, alpha, beta, None, ok)
        return None

    for _ in range(budget):
        alpha = draw_cocycle()
        beta = draw_cocycle()
        if vec_rank_le_1([alpha, beta]):
            continue
        prod = a.product_vec(1, alpha, 1, beta)
        gamma = solve(d1, prod)
        if gamma is not None:
            ok = _verify_heis3_witness(a, alpha, beta, gamma)
            return Witness(mode, alpha, beta, gamma, ok)
    return None


def _left_mult_matrix(a: FiniteCdga, alpha) -> Matrix:
    """Matrix of beta -> alpha * beta from degree 1 to degree 2."""
    m = Matrix.zeros(a.dims[2], a.dims[1])
    prods = a.basis_products(1, 1)
    for (i, j), terms in prods.items():
        if alpha[i] == 0:
            continue
        for c_idx, coeff in terms:
            m.data[c_idx][j] += alpha[i] * coeff
    return m


def _verify_sol2_witness(a, alpha, beta) -> bool:
    from .liealg import sol2

    if vec_rank_le_1([alpha, beta]):
        return False
    if not vec_is_zero(a.d_vec(1, alpha)):
        return False
    defect = [x + y for x, y in zip(a.d_vec(1, beta), a.product_vec(1, alpha, 1, beta))]
    if not vec_is_zero(defect):
        return False
    # cross-check: alpha (x) h + beta (x) x must be flat into sol2
    g = sol2()
    coeffs = Matrix([[alpha[i], beta[i]] for i in range(len(alpha))],
                    len(alpha), 2)
    return is_flat(Connection(a, g, coeffs))


def _verify_heis3_witness(a, alpha, beta, gamma) -> bool:
    from .liealg import heis3

    if vec_rank_le_1([alpha, beta]):
        return False
    if not vec_is_zero(a.d_vec(1, alpha)) or not vec_is_zero(a.d_vec(1, beta)):
        return False
    defect = [x - y for x, y in zip(a.product_vec(1, alpha, 1, beta), a.d_vec(1, gamma))]
    if not vec_is_zero(defect):
        return False
    # cross-check: alpha (x) x + beta (x) y - gamma (x) z is flat into heis3
    g = heis3()
    coeffs = Matrix(
        [[alpha[i], beta[i], -gamma[i]] for i in range(len(alpha))],
        len(alpha), 3,
    )
    return is_flat(Connection(a, g, coeffs))


# -- pointwise theorem checks -------------------------------------------------


def tangent_inclusion_check(a: FiniteCdga, eta, i: int, r: int) -> bool:
    """Pointwise check that scalar resonance descends to the cohomology ring.

    ``eta`` is a closed degree-1 vector or an equivalent scalar connection.
    True unless eta is resonant for A while its class fails to be resonant
    for H(A); vacuously true at non-resonant points.
    """
    if isinstance(eta, Connection):
        eta = eta.coeffs.column(0)
    eta = [qq(x) for x in eta]
    one = scalar_rep()
    if not in_resonance(scalar_connection(a, eta), one, i, r):
        return True
    hmaps = cohomology_ring_with_maps(a)
    cls = hmaps.project(1, eta)
    return in_resonance(scalar_connection(hmaps.ring, cls), one, i, r)


@dataclass
class NilpotentResonanceReport:
    samples: int
    pi_mismatches: list
    non_rank_one_flat: list

    @property
    def ok(self):
        return not self.pi_mismatches and not self.non_rank_one_flat


def nilpotent_resonance_check(n: LieAlgebra, theta: Representation,
                              samples: int = 50, seed: int = 0,
                              flat_grid=(-1, 0, 1),
                              flat_budget: int = 100_000) -> NilpotentResonanceReport:
    """Sampled verification of the nilpotent rank-one resonance theorem.

    For seeded rank-one connections eta (x) g on the cochain algebra of a
    nilpotent Lie algebra, membership in every depth-1 resonance degree up
    to dim n must coincide with membership in the singular locus Pi; and
    every flat point found by a small grid sweep must factor rank one.
    """
    from .liealg import chevalley_eilenberg

    if not is_nilpotent(n):
        raise NotNilpotentError(f"{n.name or 'algebra'} is not nilpotent")
    a = chevalley_eilenberg(n)
    rng = random.Random(seed)
    d1 = a.diff_matrix(1)
    cocycles = kernel_basis(d1)
    g = theta.lie

    pi_mismatches = []
    for idx in range(samples):
        coeffs = [Fraction(rng.randint(-2, 2)) for _ in cocycles]
        eta = [Fraction(0)] * a.dims[1]
        for c, basis_vec in zip(coeffs, cocycles):
            for t, x in enumerate(basis_vec):
                eta[t] += c * x
        gvec = [Fraction(rng.randint(-2, 2)) for _ in range(g.dim)]
        omega = rank_one_connection(a, eta, gvec, g)
        expected = in_pi(omega, theta)
        dims_h = resonance_dims(omega, theta)  # all degrees up to dim n at once
        for k in range(n.dim + 1):
            got = dims_h[k] >= 1
            if got != expected:
                pi_mismatches.append((idx, k, expected, got))

    non_rank_one = []
    total = len(flat_grid) ** (a.dims[1] * g.dim)
    if total <= flat_budget:
        for values in itertools.product(flat_grid, repeat=a.dims[1] * g.dim):
            m = Matrix(
                [
                    [Fraction(values[i * g.dim + s]) for s in range(g.dim)]
                    for i in range(a.dims[1])
                ],
                a.dims[1],
                g.dim,
            )
            omega = Connection(a, g, m)
            if is_flat(omega) and rank_one_factor(omega) is None:
                non_rank_one.append(values)
    return NilpotentResonanceReport(samples, pi_mismatches, non_rank_one)
