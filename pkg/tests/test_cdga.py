from fractions import Fraction

import pytest

from resovar.cdga import (
    FiniteCdga,
    WeightAssignment,
    cdga_from_json,
    check_weights,
    cohomology_dims,
    cohomology_ring,
    cohomology_ring_with_maps,
    exterior_algebra,
    restrict_degree_one,
    truncate,
    validate_cdga,
)
from resovar.errors import DependentBasisError
from resovar.exactla import Matrix
from resovar.liealg import chevalley_eilenberg, heis3, sol2

F = Fraction


def binomial(n, k):
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def test_exterior_algebra_dims_and_validation():
    a = exterior_algebra(3)
    assert a.dims == [binomial(3, k) for k in range(4)]
    assert validate_cdga(a).ok


def test_exterior_product_signs():
    a = exterior_algebra(2)
    x0x1 = a.product_vec(1, a.basis_vector(1, 0), 1, a.basis_vector(1, 1))
    x1x0 = a.product_vec(1, a.basis_vector(1, 1), 1, a.basis_vector(1, 0))
    assert x0x1 == [F(1)]
    assert x1x0 == [F(-1)]
    sq = a.product_vec(1, a.basis_vector(1, 0), 1, a.basis_vector(1, 0))
    assert sq == [F(0)]


def test_ce_algebras_validate():
    assert validate_cdga(chevalley_eilenberg(sol2())).ok
    assert validate_cdga(chevalley_eilenberg(heis3())).ok


def test_ce_sol2_differential():
    # d h* = 0 and d x* = x* ^ h* = -(h* ^ x*)
    a = chevalley_eilenberg(sol2())
    d1 = a.diff_matrix(1)
    assert d1.column(0) == [F(0)]
    assert d1.column(1) == [F(-1)]


def test_bad_differential_shape_rejected():
    with pytest.raises(ValueError):
        FiniteCdga(1, [1, 2], diff={1: Matrix([[1, 0], [0, 1]])})


def test_cohomology_dims_sol2():
    assert cohomology_dims(chevalley_eilenberg(sol2())) == [1, 1, 0]


def test_cohomology_dims_heis3():
    assert cohomology_dims(chevalley_eilenberg(heis3())) == [1, 2, 2, 1]


def test_cohomology_dims_exterior():
    n = 4
    a = exterior_algebra(n)
    assert cohomology_dims(a) == [binomial(n, k) for k in range(n + 1)]


def test_euler_characteristic_matches_cohomology():
    for a in (chevalley_eilenberg(sol2()), chevalley_eilenberg(heis3()), exterior_algebra(3)):
        dims_h = cohomology_dims(a)
        assert sum((-1) ** k * h for k, h in enumerate(dims_h)) == a.euler_characteristic()


def test_truncate_heis3():
    a = truncate(chevalley_eilenberg(heis3()), 2)
    assert a.dims == [1, 3, 3]
    assert a.truncated
    assert validate_cdga(a).ok


def test_truncate_identity():
    a = chevalley_eilenberg(sol2())
    assert truncate(a, a.top_degree) is a


def test_truncate_curve_to_degree_one():
    from resovar.curves import curve_algebra

    a = curve_algebra("compact", 2).underlying
    t = truncate(a, 1)
    assert t.dims == [1, 4]
    assert not t.mult


def test_restrict_full_basis_matches_truncation():
    a = chevalley_eilenberg(heis3())
    c = restrict_degree_one(a, [a.basis_vector(1, i) for i in range(3)])
    t = truncate(a, 2)
    assert c.dims == t.dims
    assert validate_cdga(c).ok
    assert cohomology_dims(c)[:2] == cohomology_dims(t)[:2]


def test_restrict_empty_basis():
    a = chevalley_eilenberg(heis3())
    c = restrict_degree_one(a, [])
    assert c.dims == [1, 0, 3]


def test_restrict_p3_endpoints_kill_product():
    from resovar.raag import path_graph, stanley_reisner

    a = stanley_reisner(path_graph(3))
    c = restrict_degree_one(a, [a.basis_vector(1, 0), a.basis_vector(1, 2)])
    assert c.dims == [1, 2, 2]
    assert validate_cdga(c).ok
    prod = c.product_vec(1, c.basis_vector(1, 0), 1, c.basis_vector(1, 1))
    assert all(x == 0 for x in prod)


def test_restrict_rejects_dependent_basis():
    a = chevalley_eilenberg(heis3())
    v = a.basis_vector(1, 0)
    with pytest.raises(DependentBasisError):
        restrict_degree_one(a, [v, [2 * x for x in v]])


def test_cohomology_ring_of_zero_differential_is_identity():
    a = exterior_algebra(3)
    h = cohomology_ring(a)
    assert h.dims == a.dims
    assert h.mult == a.mult


def test_cohomology_ring_heis3():
    h = cohomology_ring(chevalley_eilenberg(heis3()))
    assert h.dims == [1, 2, 2, 1]
    assert validate_cdga(h).ok
    # degree-1 classes multiply to zero: [x*][y*] is the boundary of -z*
    for i in range(2):
        for j in range(2):
            prod = h.product_vec(1, h.basis_vector(1, i), 1, h.basis_vector(1, j))
            assert all(x == 0 for x in prod)


def test_cohomology_ring_sol2():
    h = cohomology_ring(chevalley_eilenberg(sol2()))
    assert h.dims == [1, 1, 0]
    assert not h.mult


def test_cohomology_ring_idempotent_on_rings():
    h = cohomology_ring(chevalley_eilenberg(heis3()))
    h2 = cohomology_ring(h)
    assert h2.dims == h.dims
    assert h2.mult == h.mult


def test_cohomology_projection():
    a = chevalley_eilenberg(heis3())
    maps = cohomology_ring_with_maps(a)
    # x* + y* is closed; its class has coordinates (1, 1)
    v = [F(1), F(1), F(0)]
    assert maps.project(1, v) == [F(1), F(1)]
    # a boundary in degree 2 projects to zero
    boundary = a.d_vec(1, a.basis_vector(1, 2))
    assert maps.project(2, boundary) == [F(0), F(0)]


def test_check_weights_heis3():
    a = chevalley_eilenberg(heis3())
    good = WeightAssignment({0: [0], 1: [1, 1, 2], 2: [2, 3, 3], 3: [4]})
    assert check_weights(a, good)


def test_check_weights_sol2_fails():
    a = chevalley_eilenberg(sol2())
    w = WeightAssignment({0: [0], 1: [1, 1], 2: [2]})
    # d x* = x* ^ h* has weight 2 on the target but weight 1 on the source
    assert not check_weights(a, w)


def test_check_weights_degree_as_weight():
    a = exterior_algebra(3)
    w = WeightAssignment({k: [k] * a.dims[k] for k in range(4)})
    assert check_weights(a, w)


def test_weights_require_positivity_in_degree_one():
    a = exterior_algebra(2)
    w = WeightAssignment({0: [0], 1: [0, 1], 2: [1]})
    assert not check_weights(a, w)


def test_json_roundtrip():
    a = chevalley_eilenberg(heis3())
    doc = a.to_json()
    b = cdga_from_json(doc)
    assert b.dims == a.dims
    assert b.to_json() == doc
    assert validate_cdga(b).ok
