"""Cohomology algebras of curves and the quasi-projective assembler.

A compact genus-g curve contributes a symplectic pairing on 2g degree-one
classes; a punctured curve contributes a product-free degree-one space.
Flatness over these zero-differential algebras is isotropy of the span of
the value slices, which drives both the per-fibration components and the
positive-weight rank-one argument.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .cdga import (
    FiniteCdga,
    WeightAssignment,
    check_weights,
    cohomology_ring_with_maps,
    weight_components,
)
from .errors import (
    BudgetExceededError,
    InvalidFibrationError,
    NonNegativeEulerError,
    PreconditionUncertifiedError,
    ShapeMismatchError,
)
from .exactla import Matrix, kernel_basis, qq, rank, solve, vec_is_zero, vec_rank_le_1
from .flatres import (
    Connection,
    in_pi,
    is_flat,
    rank_one_factor,
)
from .liealg import LieAlgebra, Representation, sl2, sol2


@dataclass
class CurveAlgebra:
    kind: str  # "compact" or "noncompact"
    parameter: int  # genus, resp. first Betti number
    underlying: FiniteCdga

    def to_json(self):
        return {"kind": self.kind, "parameter": self.parameter}


def curve_algebra(kind: str, parameter: int) -> CurveAlgebra:
    """Degree-two cohomology model of a curve with negative Euler characteristic.

    Compact of genus g >= 2: symplectic basis u_1, v_1, ..., u_g, v_g with
    u_i v_i the top class.  Non-compact with b_1 >= 2: no degree-two part.
    """
    if kind == "compact":
        g = parameter
        if g < 2:
            raise NonNegativeEulerError("compact curves need genus >= 2")
        dims = [1, 2 * g, 1]
        triples = [(i, g + i, 0, Fraction(1)) for i in range(g)]
        names = {
            0: ["1"],
            1: [f"u{i + 1}" for i in range(g)] + [f"v{i + 1}" for i in range(g)],
            2: ["top"],
        }
        a = FiniteCdga(2, dims, mult={(1, 1): triples}, basis_names=names)
        return CurveAlgebra("compact", g, a)
    if kind == "noncompact":
        n = parameter
        if n < 2:
            raise NonNegativeEulerError("non-compact curves need b1 >= 2")
        names = {0: ["1"], 1: [f"e{i + 1}" for i in range(n)]}
        a = FiniteCdga(2, [1, n, 0], basis_names=names)
        return CurveAlgebra("noncompact", n, a)
    raise ValueError(f"unknown curve kind {kind!r}")


def is_isotropic_flat(c: CurveAlgebra, omega: Connection) -> bool:
    """Isotropy of the span of the value slices for the cup pairing.

    With zero differential this is the Maurer-Cartan condition for sl2 and
    sol2 values: the equation reduces to the pairwise cup products of the
    slices, and commutation in those algebras is rank-one degeneracy.
    """
    a = c.underlying
    if omega.cdga is not a and omega.cdga.to_json() != a.to_json():
        raise ShapeMismatchError("connection does not live over this curve algebra")
    cols = omega.form_columns()
    for s in range(len(cols)):
        for t in range(s, len(cols)):
            if not vec_is_zero(a.product_vec(1, cols[s], 1, cols[t])):
                return False
    return True


def regular_flat_witness(c: CurveAlgebra, lie: LieAlgebra) -> Connection:
    """A flat connection of coefficient rank two, verified on return.

    Supported on two isotropic basis directions (u_1, u_2 for compact
    curves), with two independent Lie values.
    """
    if lie.dim < 2:
        raise ShapeMismatchError("need a Lie algebra of dimension at least 2")
    a = c.underlying
    coeffs = Matrix.zeros(a.dims[1], lie.dim)
    coeffs.data[0][0] = Fraction(1)
    coeffs.data[1][1] = Fraction(1)
    omega = Connection(a, lie, coeffs)
    assert is_flat(omega)
    assert rank(omega.coeffs) == 2
    return omega


# -- fibration data ---------------------------------------------------------


@dataclass
class FibrationDatum:
    """A curve algebra embedded into degrees <= 2 of the ambient algebra."""

    curve: CurveAlgebra
    embedding_deg1: Matrix
    embedding_deg2: Matrix | None = None
    subspace_basis: list | None = None

    def subspace_columns(self):
        return [self.embedding_deg1.column(j) for j in range(self.embedding_deg1.cols)]

    def to_json(self):
        doc = {
            "curve": self.curve.to_json(),
            "embedding_deg1": self.embedding_deg1.to_json(),
        }
        if self.embedding_deg2 is not None:
            doc["embedding_deg2"] = self.embedding_deg2.to_json()
        if self.subspace_basis is not None:
            doc["subspace"] = [[str(x) for x in v] for v in self.subspace_basis]
        return doc


def fibration_from_json(doc) -> FibrationDatum:
    from .exactla import matrix_from_json

    curve = curve_algebra(doc["curve"]["kind"], int(doc["curve"].get("parameter")
                          or doc["curve"].get("genus") or doc["curve"].get("b1")))
    e1 = matrix_from_json(doc["embedding_deg1"])
    e2 = matrix_from_json(doc["embedding_deg2"]) if "embedding_deg2" in doc else None
    sub = [[qq(x) for x in v] for v in doc["subspace"]] if "subspace" in doc else None
    return FibrationDatum(curve, e1, e2, sub)


def validate_fibration(a: FiniteCdga, f: FibrationDatum) -> None:
    """Raise InvalidFibration unless the embedding is an injective cdga map."""
    s = f.curve.underlying
    e1 = f.embedding_deg1
    if e1.shape != (a.dims[1], s.dims[1]):
        raise InvalidFibrationError(
            f"degree-1 embedding must be {a.dims[1]}x{s.dims[1]}, got {e1.shape}"
        )
    if rank(e1) != s.dims[1]:
        raise InvalidFibrationError("degree-1 embedding is not injective")
    e2 = f.embedding_deg2
    if s.dims[2]:
        if e2 is None:
            raise InvalidFibrationError("compact curves need a degree-2 embedding")
        if e2.shape != (a.dims[2], s.dims[2]):
            raise InvalidFibrationError(
                f"degree-2 embedding must be {a.dims[2]}x{s.dims[2]}, got {e2.shape}"
            )
    cols = f.subspace_columns()
    for p in range(s.dims[1]):
        for q in range(s.dims[1]):
            inner = s.product_vec(1, s.basis_vector(1, p), 1, s.basis_vector(1, q))
            pushed = e2.mul_vec(inner) if e2 is not None else [Fraction(0)] * a.dims[2]
            outer = a.product_vec(1, cols[p], 1, cols[q])
            if outer != pushed:
                raise InvalidFibrationError(
                    f"embedding is not multiplicative on basis pair ({p}, {q})"
                )
    if f.subspace_basis is not None:
        span = Matrix.from_columns(
            [list(v) for v in f.subspace_basis] + cols, a.dims[1]
        )
        if rank(span) != s.dims[1] or rank(e1) != s.dims[1]:
            raise InvalidFibrationError(
                "declared subspace disagrees with the embedding image"
            )


# -- the decomposition assembler ---------------------------------------------


RANK_ONE_CONE = "rank_one_cone"
SINGULAR_CONE = "singular_cone"
FIBRATION = "fibration"

CASE_ORIGIN_ONLY = "origin_only"
CASE_FULL_DEGREE_ONE = "full_degree_one"
CASE_GENERAL = "general"


@dataclass
class QpComponent:
    kind: str
    label: str
    predicate: object
    fibration_index: int | None = None

    def contains(self, omega: Connection) -> bool:
        return self.predicate(omega)


@dataclass
class QpDecomposition:
    case: str
    flat_components: list
    resonance_components: list

    def in_flat_union(self, omega):
        return any(c.contains(omega) for c in self.flat_components)

    def in_resonance_union(self, omega):
        return any(c.contains(omega) for c in self.resonance_components)


def _pullback_predicate(a, f: FibrationDatum):
    e1 = f.embedding_deg1

    def predicate(omega: Connection) -> bool:
        betas = []
        for col in omega.form_columns():
            beta = solve(e1, col)
            if beta is None:
                return False
            betas.append(beta)
        pulled = Connection(
            f.curve.underlying,
            omega.lie,
            Matrix.from_columns(betas, f.curve.underlying.dims[1]),
        )
        return is_isotropic_flat(f.curve, pulled)

    return predicate


def _rank_one_predicate(omega: Connection) -> bool:
    fac = rank_one_factor(omega)
    return fac is not None and fac.eta_closed


def qp_decomposition(a: FiniteCdga, fibrations, theta: Representation) -> QpDecomposition:
    """Irreducible components of the flat and resonance loci from pencil data.

    The supplied fibrations are the admissible-map images; the rank-one
    resonance variety of the ambient algebra is the origin (no fibrations),
    everything (one fibration spanning degree one), or the union of the
    fibration subspaces.  Each case emits the matching closed-form
    components, with membership predicates rather than parametrizations.
    """
    if a.dims[1] == 0:
        raise ShapeMismatchError("the assembler needs b1 > 0")
    if a.diff:
        raise ShapeMismatchError("the closed-form decomposition needs d = 0")
    fibrations = list(fibrations)
    for f in fibrations:
        validate_fibration(a, f)

    rank_one = QpComponent(RANK_ONE_CONE, "rank-one cone", _rank_one_predicate)
    singular = QpComponent(
        SINGULAR_CONE, "singular rank-one cone", lambda om: in_pi(om, theta)
    )
    pullbacks = [
        QpComponent(FIBRATION, f"pullback #{idx}", _pullback_predicate(a, f), idx)
        for idx, f in enumerate(fibrations)
    ]

    if not fibrations:
        return QpDecomposition(CASE_ORIGIN_ONLY, [rank_one], [singular])
    if len(fibrations) == 1 and rank(fibrations[0].embedding_deg1) == a.dims[1]:
        return QpDecomposition(CASE_FULL_DEGREE_ONE, pullbacks, list(pullbacks))
    return QpDecomposition(
        CASE_GENERAL, [rank_one] + pullbacks, [singular] + pullbacks
    )


# -- positive weights ---------------------------------------------------------


@dataclass
class PositiveWeightReport:
    precondition_certified: bool
    precondition_witness: tuple | None
    flat_points: int
    non_rank_one: list
    weight_equation_failures: list
    samples_checked: int

    @property
    def ok(self):
        return (
            self.precondition_certified
            and self.precondition_witness is None
            and not self.non_rank_one
            and not self.weight_equation_failures
        )


def _mc_weight_defects(a, w: WeightAssignment, omega: Connection):
    """The Maurer-Cartan expression split by weight; flat points must kill
    every piece separately since d preserves and products add weights."""
    g = omega.lie
    cols = omega.form_columns()
    pieces = {}

    def add(weight, vec_a2, gvec):
        if vec_is_zero(vec_a2):
            return
        tgt = pieces.setdefault(weight, Matrix.zeros(a.dims[2], g.dim))
        for r, x in enumerate(vec_a2):
            if x != 0:
                for s2, y in enumerate(gvec):
                    if y != 0:
                        tgt.data[r][s2] += x * y

    for s in range(g.dim):
        for wt, part in weight_components(a, w, 1, cols[s]).items():
            add(wt, a.d_vec(1, part), g.basis_vector(s))
    for s in range(g.dim):
        ws = weight_components(a, w, 1, cols[s])
        for t in range(s + 1, g.dim):
            br = g.bracket_vec(g.basis_vector(s), g.basis_vector(t))
            if vec_is_zero(br):
                continue
            wt_ = weight_components(a, w, 1, cols[t])
            for w1, p1 in ws.items():
                for w2, p2 in wt_.items():
                    add(w1 + w2, a.product_vec(1, p1, 1, p2), br)
    return pieces


def positive_weight_mc_check(a: FiniteCdga, w: WeightAssignment, lie_name: str,
                             grid=(-1, 0, 1), budget: int = 2_000_000,
                             seed: int = 0, samples: int = 0) -> PositiveWeightReport:
    """Grid verification that weights 1 and 2 in degree one force rank one.

    First certifies (by exact exhaustion over a grid of cohomology pairs)
    that the rank-one resonance of the cohomology ring does not leave the
    origin; an exact witness to the contrary is reported and nothing else
    runs.  Then every flat grid point must admit a rank-one factorization,
    and the weight-graded pieces of its Maurer-Cartan expression must
    vanish one by one.
    """
    if not check_weights(a, w):
        raise PreconditionUncertifiedError("the weight assignment is not compatible")
    if any(wt not in (1, 2) for wt in w.weights.get(1, [])):
        raise PreconditionUncertifiedError("degree-one weights must be 1 or 2")

    hmaps = cohomology_ring_with_maps(a)
    h = hmaps.ring
    h1 = h.dims[1]
    witness = None
    pair_count = (len(grid) ** h1) ** 2
    if pair_count > budget:
        raise PreconditionUncertifiedError(
            f"{pair_count} cohomology pairs exceed the certification budget"
        )
    for avec in itertools.product(grid, repeat=h1):
        av = [qq(x) for x in avec]
        for bvec in itertools.product(grid, repeat=h1):
            bv = [qq(x) for x in bvec]
            if vec_rank_le_1([av, bv]):
                continue
            if vec_is_zero(h.product_vec(1, av, 1, bv)):
                witness = (av, bv)
                break
        if witness:
            break
    if witness is not None:
        return PositiveWeightReport(True, witness, 0, [], [], 0)

    lie = sl2() if lie_name == "sl2" else sol2()
    total = len(grid) ** (a.dims[1] * lie.dim)
    if total > budget:
        raise BudgetExceededError(f"{total} grid points exceed the budget {budget}")
    non_rank_one = []
    weight_failures = []
    flat_found = []
    flat_points = 0
    checked = 0

    def examine(omega, tag):
        nonlocal flat_points
        flat_points += 1
        if rank_one_factor(omega) is None:
            non_rank_one.append(tag)
        for wt, defect in _mc_weight_defects(a, w, omega).items():
            if not defect.is_zero():
                weight_failures.append((tag, wt))

    for values in itertools.product(grid, repeat=a.dims[1] * lie.dim):
        checked += 1
        m = Matrix.zeros(a.dims[1], lie.dim)
        for i in range(a.dims[1]):
            for s in range(lie.dim):
                m.data[i][s] = qq(values[i * lie.dim + s])
        omega = Connection(a, lie, m)
        if is_flat(omega):
            flat_found.append(m)
            examine(omega, values)

    # revisit rescalings of found flat points; rescaling preserves flatness
    # only when d = 0, so non-flat rescalings are skipped, not failures
    rng = random.Random(seed)
    for _ in range(samples):
        if not flat_found:
            break
        base = rng.choice(flat_found)
        scale = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        omega = Connection(a, lie, base.scale(scale))
        if is_flat(omega):
            checked += 1
            examine(omega, ("rescaled", scale))
    return PositiveWeightReport(True, None, flat_points, non_rank_one,
                                weight_failures, checked)
