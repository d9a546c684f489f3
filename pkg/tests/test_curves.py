import itertools
import random
from fractions import Fraction

import pytest

from resovar.cdga import (
    FiniteCdga,
    WeightAssignment,
    cohomology_dims,
    exterior_algebra,
    validate_cdga,
)
from resovar.curves import (
    CASE_FULL_DEGREE_ONE,
    CASE_GENERAL,
    CASE_ORIGIN_ONLY,
    CurveAlgebra,
    FibrationDatum,
    curve_algebra,
    fibration_from_json,
    is_isotropic_flat,
    positive_weight_mc_check,
    qp_decomposition,
    regular_flat_witness,
    validate_fibration,
)
from resovar.errors import InvalidFibrationError, NonNegativeEulerError
from resovar.exactla import Matrix, rank
from resovar.flatres import Connection, aomoto_cohomology, in_resonance, is_flat
from resovar.liealg import sl2, sl2_irrep, sol2

F = Fraction


def test_curve_algebra_compact():
    c = curve_algebra("compact", 2)
    a = c.underlying
    assert a.dims == [1, 4, 1]
    assert validate_cdga(a).ok
    # u_i v_i = top, all other degree-1 products vanish
    for i in range(4):
        for j in range(4):
            prod = a.product_vec(1, a.basis_vector(1, i), 1, a.basis_vector(1, j))
            if (i, j) == (0, 2) or (i, j) == (1, 3):
                assert prod == [F(1)]
            elif (i, j) == (2, 0) or (i, j) == (3, 1):
                assert prod == [F(-1)]
            else:
                assert prod == [F(0)]


def test_curve_algebra_noncompact():
    c = curve_algebra("noncompact", 2)
    assert c.underlying.dims == [1, 2, 0]
    assert validate_cdga(c.underlying).ok
    assert not c.underlying.mult


def test_curve_algebra_rejects_nonnegative_euler():
    with pytest.raises(NonNegativeEulerError):
        curve_algebra("compact", 1)
    with pytest.raises(NonNegativeEulerError):
        curve_algebra("noncompact", 1)


def test_isotropic_flat_lagrangian():
    c = curve_algebra("compact", 2)
    lie = sl2()
    # u1 (x) X + u2 (x) Y spans a Lagrangian
    coeffs = Matrix.zeros(4, 3)
    coeffs.data[0][1] = F(1)
    coeffs.data[1][2] = F(1)
    omega = Connection(c.underlying, lie, coeffs)
    assert is_isotropic_flat(c, omega)
    assert is_flat(omega)


def test_isotropic_flat_rejects_pairing():
    c = curve_algebra("compact", 2)
    lie = sl2()
    # u1 (x) X + v1 (x) Y pairs to the top class
    coeffs = Matrix.zeros(4, 3)
    coeffs.data[0][1] = F(1)
    coeffs.data[2][2] = F(1)
    omega = Connection(c.underlying, lie, coeffs)
    assert not is_isotropic_flat(c, omega)
    assert not is_flat(omega)


def test_noncompact_everything_flat():
    c = curve_algebra("noncompact", 3)
    lie = sol2()
    rng = random.Random(2)
    for _ in range(20):
        m = Matrix([[F(rng.randint(-3, 3)) for _ in range(2)] for _ in range(3)])
        omega = Connection(c.underlying, lie, m)
        assert is_isotropic_flat(c, omega)
        assert is_flat(omega)


def test_isotropy_equals_flatness_on_grid():
    for kind, par, lie in (
        ("compact", 2, sol2()),
        ("noncompact", 2, sl2()),
        ("noncompact", 3, sol2()),
    ):
        c = curve_algebra(kind, par)
        n1 = c.underlying.dims[1]
        for values in itertools.product((-1, 0, 1), repeat=n1 * lie.dim):
            m = Matrix(
                [[F(values[i * lie.dim + s]) for s in range(lie.dim)] for i in range(n1)]
            )
            omega = Connection(c.underlying, lie, m)
            assert is_isotropic_flat(c, omega) == is_flat(omega)


def test_regular_flat_witnesses():
    for kind, par in (("compact", 2), ("compact", 3), ("noncompact", 2)):
        c = curve_algebra(kind, par)
        for lie in (sl2(), sol2()):
            omega = regular_flat_witness(c, lie)
            assert is_flat(omega)
            assert rank(omega.coeffs) == 2


def test_chi_identity_on_curves():
    # every flat point is resonant in degree one and satisfies the Euler identity
    theta = sl2_irrep(1)
    rng = random.Random(4)
    for kind, par in (("compact", 2), ("noncompact", 2), ("noncompact", 3)):
        c = curve_algebra(kind, par)
        a = c.underlying
        chi = a.euler_characteristic()
        assert chi < 0
        for _ in range(15):
            # sample inside the standard isotropic subspace, always flat
            m = Matrix.zeros(a.dims[1], 3)
            iso = range(par) if kind == "compact" else range(a.dims[1])
            for i in iso:
                for s in range(3):
                    m.data[i][s] = F(rng.randint(-2, 2))
            omega = Connection(a, sl2(), m)
            assert is_flat(omega)
            rep = aomoto_cohomology(omega, theta)
            assert rep.dims_h[1] >= 1
            assert sum((-1) ** k * h for k, h in enumerate(rep.dims_h)) == chi * 2
            assert rep.euler_check


# -- fibration data and the assembler ---------------------------------------


def two_curve_surrogate():
    """Degree-two model of a product of two punctured curves.

    Degree one is C1 + C2 with both halves square-zero and a perfect
    pairing across the two halves (the Kunneth piece).
    """
    dims = [1, 4, 4]
    triples = []
    for i in range(2):
        for j in range(2):
            triples.append((i, 2 + j, 2 * i + j, F(1)))
    names = {
        0: ["1"],
        1: ["s1_1", "s1_2", "s2_1", "s2_2"],
        2: ["m11", "m12", "m21", "m22"],
    }
    return FiniteCdga(2, dims, mult={(1, 1): triples}, basis_names=names,
                      truncated=True)


def surrogate_fibrations(a):
    e1_first = Matrix([[1, 0], [0, 1], [0, 0], [0, 0]])
    e1_second = Matrix([[0, 0], [0, 0], [1, 0], [0, 1]])
    c1 = curve_algebra("noncompact", 2)
    c2 = curve_algebra("noncompact", 2)
    return [FibrationDatum(c1, e1_first), FibrationDatum(c2, e1_second)]


def test_surrogate_validates():
    a = two_curve_surrogate()
    assert validate_cdga(a).ok
    for f in surrogate_fibrations(a):
        validate_fibration(a, f)


def test_fibration_rejects_non_multiplicative():
    a = two_curve_surrogate()
    bad = FibrationDatum(curve_algebra("noncompact", 2),
                         Matrix([[1, 0], [0, 0], [0, 1], [0, 0]]))
    # s1_1 and s2_1 pair nontrivially, but the curve model has zero products
    with pytest.raises(InvalidFibrationError):
        validate_fibration(a, bad)


def test_fibration_rejects_dependent_embedding():
    a = two_curve_surrogate()
    bad = FibrationDatum(curve_algebra("noncompact", 2),
                         Matrix([[1, 2], [0, 0], [0, 0], [0, 0]]))
    with pytest.raises(InvalidFibrationError):
        validate_fibration(a, bad)


def test_compact_fibration_needs_degree_two():
    g2 = curve_algebra("compact", 2)
    amb = g2.underlying
    f = FibrationDatum(g2, Matrix.identity(4))
    with pytest.raises(InvalidFibrationError):
        validate_fibration(amb, f)
    ok = FibrationDatum(g2, Matrix.identity(4), Matrix.identity(1))
    validate_fibration(amb, ok)


def test_qp_cases():
    theta = sl2_irrep(1)
    a0 = exterior_algebra(2)  # perfect pairing: resonance is the origin
    d0 = qp_decomposition(a0, [], theta)
    assert d0.case == CASE_ORIGIN_ONLY
    assert [c.kind for c in d0.flat_components] == ["rank_one_cone"]
    assert [c.kind for c in d0.resonance_components] == ["singular_cone"]

    g2 = curve_algebra("compact", 2)
    full = FibrationDatum(g2, Matrix.identity(4), Matrix.identity(1))
    d1 = qp_decomposition(g2.underlying, [full], theta)
    assert d1.case == CASE_FULL_DEGREE_ONE
    assert [c.kind for c in d1.flat_components] == ["fibration"]

    a = two_curve_surrogate()
    d2 = qp_decomposition(a, surrogate_fibrations(a), theta)
    assert d2.case == CASE_GENERAL
    assert [c.kind for c in d2.flat_components] == [
        "rank_one_cone", "fibration", "fibration",
    ]
    assert [c.kind for c in d2.resonance_components] == [
        "singular_cone", "fibration", "fibration",
    ]


def surrogate_sample_points(a, lie, seed, count):
    """Random points plus constructed points on each component's support."""
    rng = random.Random(seed)
    points = []
    for _ in range(count):
        points.append(
            Matrix([[F(rng.randint(-2, 2)) for _ in range(lie.dim)] for _ in range(4)])
        )
    for pencil in (range(2), range(2, 4)):
        for _ in range(count // 4):
            m = Matrix.zeros(4, lie.dim)
            for i in pencil:
                for s in range(lie.dim):
                    m.data[i][s] = F(rng.randint(-2, 2))
            points.append(m)
    for _ in range(count // 4):
        eta = [F(rng.randint(-2, 2)) for _ in range(4)]
        gv = [F(rng.randint(-2, 2)) for _ in range(lie.dim)]
        points.append(Matrix([[e * g for g in gv] for e in eta]))
    return points


def test_qp_surrogate_flat_union_matches_direct_flatness():
    a = two_curve_surrogate()
    theta = sl2_irrep(1)
    decomp = qp_decomposition(a, surrogate_fibrations(a), theta)
    lie = sl2()
    inside = outside = 0
    for m in surrogate_sample_points(a, lie, 9, 200):
        omega = Connection(a, lie, m)
        member = decomp.in_flat_union(omega)
        assert member == is_flat(omega)
        inside += member
        outside += not member
    assert inside > 0 and outside > 0


def test_qp_surrogate_resonance_union_matches_direct():
    a = two_curve_surrogate()
    theta = sl2_irrep(1)
    decomp = qp_decomposition(a, surrogate_fibrations(a), theta)
    lie = sl2()
    checked = 0
    for m in surrogate_sample_points(a, lie, 10, 120):
        omega = Connection(a, lie, m)
        if not is_flat(omega):
            continue
        direct = in_resonance(omega, theta, 1, 1)
        assert decomp.in_resonance_union(omega) == direct
        checked += 1
    assert checked > 30


def test_fibration_json_roundtrip():
    a = two_curve_surrogate()
    f = surrogate_fibrations(a)[0]
    doc = f.to_json()
    f2 = fibration_from_json(doc)
    validate_fibration(a, f2)
    assert f2.embedding_deg1 == f.embedding_deg1


# -- the positive-weight rank-one argument -------------------------------------


def test_positive_weight_check_symplectic_block():
    a = exterior_algebra(2)
    w = WeightAssignment({0: [0], 1: [1, 1], 2: [2]})
    for lie_name in ("sl2", "sol2"):
        rep = positive_weight_mc_check(a, w, lie_name, samples=20, seed=1)
        assert rep.precondition_certified
        assert rep.precondition_witness is None
        assert rep.ok
        assert rep.flat_points > 0


def test_positive_weight_check_reports_heis3_failure():
    from resovar.liealg import chevalley_eilenberg, heis3

    a = chevalley_eilenberg(heis3())
    w = WeightAssignment({0: [0], 1: [1, 1, 2], 2: [2, 3, 3], 3: [4]})
    rep = positive_weight_mc_check(a, w, "sol2", samples=5, seed=1)
    # the cohomology ring has rank-two pairs with zero product, so the
    # precondition is refuted by an exact witness and nothing else runs
    assert rep.precondition_witness is not None
    assert rep.flat_points == 0
    assert not rep.ok


def test_positive_weight_check_vacuous_without_degree_one():
    a = FiniteCdga(2, [1, 0, 1])
    w = WeightAssignment({0: [0], 1: [], 2: [2]})
    rep = positive_weight_mc_check(a, w, "sl2", samples=3, seed=0)
    assert rep.ok and rep.flat_points > 0  # only the zero point


def test_positive_weight_check_rejects_bad_weights():
    from resovar.errors import PreconditionUncertifiedError

    a = exterior_algebra(2)
    w = WeightAssignment({0: [0], 1: [1, 3], 2: [4]})
    with pytest.raises(PreconditionUncertifiedError):
        positive_weight_mc_check(a, w, "sl2")


def test_qp_inclusion_only_for_nonzero_differential():
    # a Gysin-like model with d != 0: the pullback components still sit
    # inside the flat locus even though the closed form is not asserted
    from resovar.liealg import chevalley_eilenberg, sol2 as sol2_alg

    a = chevalley_eilenberg(sol2_alg())
    lie = sl2()
    # closed rank-one points always flat
    from resovar.flatres import rank_one_connection

    omega = rank_one_connection(a, [1, 0], [0, 1, 0], lie)
    assert is_flat(omega)
