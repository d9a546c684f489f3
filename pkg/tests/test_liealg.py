import itertools
import random
from fractions import Fraction

import pytest

from resovar.exactla import Matrix, det, rank
from resovar.liealg import (
    DET_HYPERSURFACE,
    WHOLE_ALGEBRA,
    IrrepDecomposition,
    LieAlgebra,
    Representation,
    abelian,
    assemble,
    chevalley_eilenberg,
    det_locus_classify,
    det_locus_classify_rep,
    direct_sum,
    filiform4,
    gl,
    gl_identity_rep,
    heis3,
    is_nilpotent,
    lie_from_json,
    product,
    sl,
    sl2,
    sl2_irrep,
    sol2,
    standard_algebra,
    validate_lie,
    validate_representation,
)

F = Fraction


def test_standard_algebras_validate():
    for g in (sl2(), sol2(), heis3(), abelian(4), filiform4(), gl(3), sl(3),
              product(sl2(), sl2())):
        assert validate_lie(g).ok, g.name


def test_sl2_brackets():
    g = sl2()
    h, x, y = (g.basis_vector(i) for i in range(3))
    assert g.bracket_vec(h, x) == [F(0), F(2), F(0)]
    assert g.bracket_vec(h, y) == [F(0), F(0), F(-2)]
    assert g.bracket_vec(x, y) == [F(1), F(0), F(0)]


def test_sol2_bracket():
    g = sol2()
    assert g.bracket_vec(g.basis_vector(0), g.basis_vector(1)) == [F(0), F(1)]


def test_antisymmetry_from_storage():
    g = heis3()
    x, y = g.basis_vector(0), g.basis_vector(1)
    assert g.bracket_vec(y, x) == [F(0), F(0), F(-1)]
    assert g.bracket_vec(x, x) == [F(0), F(0), F(0)]


def test_bad_jacobi_reported():
    # [e0,e1]=e2, [e0,e2]=e0 breaks Jacobi on (e0,e1,e2)
    g = LieAlgebra(3, [(0, 1, 2, 1), (0, 2, 0, 1)])
    rep = validate_lie(g)
    assert not rep.ok and "Jacobi" in rep.failures[0]


def test_sl_gl_structure_matches_matrices():
    for g in (gl(2), sl(3)):
        mats = g.matrix_basis
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                comm = mats[i].mul(mats[j]).sub(mats[j].mul(mats[i]))
                expanded = g.bracket_vec(g.basis_vector(i), g.basis_vector(j))
                rebuilt = Matrix.zeros(g.matrix_size, g.matrix_size)
                for k, c in enumerate(expanded):
                    if c:
                        rebuilt = rebuilt.add(mats[k].scale(c))
                assert rebuilt == comm


def test_standard_algebra_dispatcher():
    assert standard_algebra("sl2").dim == 3
    assert standard_algebra("abelian4").dim == 4
    assert standard_algebra("gl3").dim == 9
    assert standard_algebra("sl3").dim == 8
    assert standard_algebra("sl2xsl2").dim == 6
    with pytest.raises(ValueError):
        standard_algebra("so3")


def test_sl2_irrep_defining():
    rep = sl2_irrep(1)
    assert rep.operators[0] == Matrix([[1, 0], [0, -1]])
    assert validate_representation(rep).ok


def test_sl2_irrep_trivial_and_adjointlike():
    rep0 = sl2_irrep(0)
    assert all(op.is_zero() for op in rep0.operators)
    rep2 = sl2_irrep(2)
    assert rep2.operators[0] == Matrix([[2, 0, 0], [0, 0, 0], [0, 0, -2]])
    assert det(rep2.operators[0]) == 0
    assert validate_representation(rep2).ok


def test_sl2_irrep_homomorphism_range():
    for n in range(5):
        assert validate_representation(sl2_irrep(n)).ok


def test_direct_sum_is_representation():
    rep = direct_sum(sl2_irrep(1), sl2_irrep(3))
    assert rep.v_dim == 6
    assert validate_representation(rep).ok


def test_det_locus_classification():
    assert det_locus_classify(IrrepDecomposition((1,))) == DET_HYPERSURFACE
    assert det_locus_classify(IrrepDecomposition((2,))) == WHOLE_ALGEBRA
    assert det_locus_classify(IrrepDecomposition((1, 3))) == DET_HYPERSURFACE
    assert det_locus_classify(IrrepDecomposition((1, 2))) == WHOLE_ALGEBRA


def test_det_locus_rep_classifier_agrees():
    for summands in [(1,), (2,), (1, 3), (1, 2), (3,), (0, 1)]:
        d = IrrepDecomposition(summands)
        assert det_locus_classify_rep(assemble(d)) == det_locus_classify(d)


def test_det_theta3_is_multiple_of_det_squared():
    # on H: det(theta_3(H)) = 9 while det(H) = -1
    rep = sl2_irrep(3)
    assert det(rep.operators[0]) == 9
    assert det(Matrix([[1, 0], [0, -1]])) == -1


def test_det_locus_brute_force():
    # sampled determinant vanishing agrees with the classification
    rng = random.Random(7)
    for n in range(5):
        d = IrrepDecomposition((n,))
        rep = assemble(d)
        always_zero = True
        for _ in range(50):
            gvec = [F(rng.randint(-5, 5)) for _ in range(3)]
            if det(rep.apply(gvec)) != 0:
                always_zero = False
                break
        assert always_zero == (det_locus_classify(d) == WHOLE_ALGEBRA)


def test_nonzero_odd_constant_up_to_five():
    # for odd n <= 5, det(theta_n) is a nonzero multiple of det^((n+1)/2):
    # checked pointwise on a sample grid with a fixed ratio
    for n in (1, 3, 5):
        rep = sl2_irrep(n)
        base = Matrix([[1, 0], [0, -1]])
        lam = det(rep.operators[0]) / det(base) ** ((n + 1) // 2)
        assert lam != 0
        rng = random.Random(n)
        for _ in range(20):
            gvec = [F(rng.randint(-3, 3)) for _ in range(3)]
            g_mat = Matrix(
                [[gvec[0], gvec[1]], [gvec[2], -gvec[0]]]
            )
            assert det(rep.apply(gvec)) == lam * det(g_mat) ** ((n + 1) // 2)


def test_ce_sol2_structure():
    a = chevalley_eilenberg(sol2())
    assert a.dims == [1, 2, 1]
    assert a.basis_names[1] == ["h*", "x*"]


def test_ce_abelian_has_zero_differential():
    a = chevalley_eilenberg(abelian(4))
    assert not a.diff
    assert a.dims == [1, 4, 6, 4, 1]


def test_ce_degree_one_cohomology_is_abelianization():
    from resovar.cdga import cohomology_dims

    for g in (sl2(), sol2(), heis3(), filiform4(), abelian(3), gl(2)):
        dims_h = cohomology_dims(chevalley_eilenberg(g))
        bracket_span = []
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                v = g.bracket_vec(g.basis_vector(i), g.basis_vector(j))
                if any(x != 0 for x in v):
                    bracket_span.append(v)
        derived_rank = rank(Matrix(bracket_span)) if bracket_span else 0
        assert dims_h[1] == g.dim - derived_rank


def test_is_nilpotent():
    assert is_nilpotent(heis3())
    assert is_nilpotent(abelian(5))
    assert is_nilpotent(filiform4())
    assert not is_nilpotent(sol2())
    assert not is_nilpotent(sl2())
    assert not is_nilpotent(gl(2))


def test_nilpotent_excludes_rational_ad_eigenvalues():
    # a nonzero rational eigenvalue of some ad(e_i) forces non-nilpotency
    from resovar.exactla import rational_spectrum

    for g in (sol2(), sl2(), heis3(), filiform4()):
        has_nonzero = False
        for i in range(g.dim):
            ad = Matrix(
                [g.bracket_vec(g.basis_vector(i), g.basis_vector(j)) for j in range(g.dim)]
            ).transpose()
            spec = rational_spectrum(ad)
            if any(lam != 0 for lam, _ in spec.rational_eigenvalues):
                has_nonzero = True
        if has_nonzero:
            assert not is_nilpotent(g)


def test_gl_identity_rep():
    rep = gl_identity_rep(2)
    assert validate_representation(rep).ok
    gvec = [F(1), F(2), F(3), F(4)]
    assert rep.apply(gvec) == Matrix([[1, 2], [3, 4]])


def test_lie_json_roundtrip():
    g = sl2()
    doc = g.to_json()
    g2 = lie_from_json(doc)
    assert g2.to_json() == doc
    assert validate_lie(g2).ok


def test_product_basis_order():
    g = product(sl2(), sol2())
    assert g.dim == 5
    hx = g.bracket_vec(g.basis_vector(3), g.basis_vector(4))
    assert hx == [F(0)] * 4 + [F(1)]
    cross = g.bracket_vec(g.basis_vector(0), g.basis_vector(3))
    assert all(x == 0 for x in cross)


def test_jacobi_brute_force_product():
    g = product(sl2(), sl2())
    for i, j, k in itertools.combinations(range(g.dim), 3):
        ei, ej, ek = (g.basis_vector(t) for t in (i, j, k))
        acc = [F(0)] * g.dim
        for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
            w = g.bracket_vec(a, g.bracket_vec(b, c))
            acc = [p + q for p, q in zip(acc, w)]
        assert all(x == 0 for x in acc)
