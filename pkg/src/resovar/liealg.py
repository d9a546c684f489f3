"""Finite-dimensional Lie algebras via structure constants.

Brackets are stored sparsely as (i, j, k, coeff) with i < j, meaning
[e_i, e_j] = sum coeff * e_k; antisymmetry supplies the other order.  The
module also provides the standard small algebras, sl2 irreducibles on a
weight basis, the cochain functor into cdgas, and determinant-locus
classification for sl2 modules.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .cdga import FiniteCdga, ValidationReport, exterior_algebra
from .exactla import Matrix, det, qq, qq_str, rank


class LieAlgebra:
    def __init__(self, dim, brackets=(), basis_names=None, name=""):
        self.dim = dim
        self.name = name
        self.basis_names = list(basis_names) if basis_names else [f"e{i}" for i in range(dim)]
        table = {}
        for i, j, k, coeff in brackets:
            coeff = qq(coeff)
            if coeff == 0:
                continue
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise ValueError("bracket index out of range")
            if i >= j:
                raise ValueError("brackets must be stored with i < j")
            table.setdefault((i, j), {})
            table[(i, j)][k] = table[(i, j)].get(k, Fraction(0)) + coeff
        self.table = {
            ij: {k: c for k, c in terms.items() if c != 0} for ij, terms in table.items()
        }
        self.table = {ij: terms for ij, terms in self.table.items() if terms}

    @property
    def brackets(self):
        out = []
        for (i, j), terms in sorted(self.table.items()):
            for k, c in sorted(terms.items()):
                out.append((i, j, k, c))
        return out

    def bracket_basis(self, i, j):
        """[e_i, e_j] as a coefficient dict."""
        if i == j:
            return {}
        if i < j:
            return self.table.get((i, j), {})
        return {k: -c for k, c in self.table.get((j, i), {}).items()}

    def bracket_vec(self, x, y):
        """[x, y] for coefficient vectors x, y."""
        out = [Fraction(0)] * self.dim
        for i in range(self.dim):
            if x[i] == 0:
                continue
            for j in range(self.dim):
                if y[j] == 0 or i == j:
                    continue
                f = x[i] * y[j]
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += f * c
        return out

    def basis_vector(self, i):
        v = [Fraction(0)] * self.dim
        v[i] = Fraction(1)
        return v

    def to_json(self):
        doc = {
            "dim": self.dim,
            "brackets": [[i, j, k, qq_str(c)] for i, j, k, c in self.brackets],
            "names": list(self.basis_names),
        }
        if self.name:
            doc["name"] = self.name
        return doc


def lie_from_json(doc) -> LieAlgebra:
    return LieAlgebra(
        int(doc["dim"]),
        [(int(i), int(j), int(k), qq(c)) for i, j, k, c in doc.get("brackets", [])],
        basis_names=doc.get("names"),
        name=doc.get("name", ""),
    )


def validate_lie(g: LieAlgebra) -> ValidationReport:
    """Report Jacobi failures by basis triple (antisymmetry holds by storage)."""
    failures = []
    for i, j, k in itertools.combinations(range(g.dim), 3):
        acc = [Fraction(0)] * g.dim
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = g.bracket_basis(b, c)
            for m, coeff in inner.items():
                for t, coeff2 in g.bracket_basis(a, m).items():
                    acc[t] += coeff * coeff2
        if any(x != 0 for x in acc):
            names = ", ".join(g.basis_names[t] for t in (i, j, k))
            failures.append(f"Jacobi fails on ({names})")
    return ValidationReport(not failures, failures)


# -- standard algebras ----------------------------------------------------


def sl2() -> LieAlgebra:
    """Basis (H, X, Y) with [H,X] = 2X, [H,Y] = -2Y, [X,Y] = H."""
    return LieAlgebra(
        3,
        [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)],
        basis_names=["H", "X", "Y"],
        name="sl2",
    )


def sol2() -> LieAlgebra:
    """Basis (h, x) with [h, x] = x; the Borel subalgebra of sl2."""
    return LieAlgebra(2, [(0, 1, 1, 1)], basis_names=["h", "x"], name="sol2")


def heis3() -> LieAlgebra:
    """Basis (x, y, z) with [x, y] = z; two-step nilpotent."""
    return LieAlgebra(3, [(0, 1, 2, 1)], basis_names=["x", "y", "z"], name="heis3")


def abelian(n) -> LieAlgebra:
    return LieAlgebra(n, [], name=f"abelian{n}")


def filiform4() -> LieAlgebra:
    """Basis (e1..e4) with [e1,e2] = e3, [e1,e3] = e4; three-step nilpotent."""
    return LieAlgebra(
        4,
        [(0, 1, 2, 1), (0, 2, 3, 1)],
        basis_names=["e1", "e2", "e3", "e4"],
        name="filiform4",
    )


def _matrix_basis_algebra(basis_mats, expand, names, name):
    dim = len(basis_mats)
    n = basis_mats[0].rows
    brackets = []
    for i in range(dim):
        for j in range(i + 1, dim):
            comm = basis_mats[i].mul(basis_mats[j]).sub(basis_mats[j].mul(basis_mats[i]))
            for k, c in expand(comm).items():
                brackets.append((i, j, k, c))
    g = LieAlgebra(dim, brackets, basis_names=names, name=name)
    g.matrix_basis = basis_mats
    g.matrix_size = n
    return g


def gl(n) -> LieAlgebra:
    """gl(n) on the basis E_ab ordered row-major."""
    mats, names = [], []
    for a in range(n):
        for b in range(n):
            m = Matrix.zeros(n, n)
            m.data[a][b] = Fraction(1)
            mats.append(m)
            names.append(f"E{a + 1}{b + 1}")

    def expand(mat):
        return {
            a * n + b: mat.data[a][b]
            for a in range(n)
            for b in range(n)
            if mat.data[a][b] != 0
        }

    return _matrix_basis_algebra(mats, expand, names, f"gl{n}")


def sl(n) -> LieAlgebra:
    """sl(n) on off-diagonal E_ab followed by H_i = E_ii - E_{i+1,i+1}."""
    mats, names = [], []
    offdiag = [(a, b) for a in range(n) for b in range(n) if a != b]
    for a, b in offdiag:
        m = Matrix.zeros(n, n)
        m.data[a][b] = Fraction(1)
        mats.append(m)
        names.append(f"E{a + 1}{b + 1}")
    for i in range(n - 1):
        m = Matrix.zeros(n, n)
        m.data[i][i] = Fraction(1)
        m.data[i + 1][i + 1] = Fraction(-1)
        mats.append(m)
        names.append(f"H{i + 1}")
    pos = {ab: idx for idx, ab in enumerate(offdiag)}

    def expand(mat):
        out = {}
        for a, b in offdiag:
            if mat.data[a][b] != 0:
                out[pos[(a, b)]] = mat.data[a][b]
        partial = Fraction(0)
        for i in range(n - 1):
            partial += mat.data[i][i]
            if partial != 0:
                out[len(offdiag) + i] = partial
        return out

    return _matrix_basis_algebra(mats, expand, names, f"sl{n}")


def product(g1: LieAlgebra, g2: LieAlgebra) -> LieAlgebra:
    """Direct product; the first factor's basis comes first."""
    brackets = list(g1.brackets)
    off = g1.dim
    brackets += [(i + off, j + off, k + off, c) for i, j, k, c in g2.brackets]
    names = [f"{n}'" for n in g1.basis_names] + [f"{n}''" for n in g2.basis_names]
    return LieAlgebra(g1.dim + g2.dim, brackets, basis_names=names,
                      name=f"{g1.name}x{g2.name}")


def standard_algebra(spec: str) -> LieAlgebra:
    """Resolve names like 'sl2', 'sol2', 'heis3', 'gl3', 'abelian4', 'sl2xsl2'."""
    spec = spec.strip()
    if "x" in spec and not spec.startswith("x"):
        left, _, right = spec.partition("x")
        return product(standard_algebra(left), standard_algebra(right))
    if spec == "sl2":
        return sl2()
    if spec == "sol2":
        return sol2()
    if spec == "heis3":
        return heis3()
    if spec == "filiform4":
        return filiform4()
    for prefix, builder in (("abelian", abelian), ("gl", gl), ("sl", sl)):
        if spec.startswith(prefix) and spec[len(prefix):].isdigit():
            return builder(int(spec[len(prefix):]))
    raise ValueError(f"unknown Lie algebra {spec!r}")


# -- representations ------------------------------------------------------


class Representation:
    """Operators theta(e_i) on V, one square matrix per basis element."""

    def __init__(self, lie: LieAlgebra, v_dim: int, operators):
        if len(operators) != lie.dim:
            raise ValueError("one operator per basis element required")
        for op in operators:
            if op.shape != (v_dim, v_dim):
                raise ValueError("operator shape mismatch")
        self.lie = lie
        self.v_dim = v_dim
        self.operators = list(operators)

    def apply(self, gvec) -> Matrix:
        """theta(g) for a coefficient vector g."""
        out = Matrix.zeros(self.v_dim, self.v_dim)
        for s, c in enumerate(gvec):
            if c == 0:
                continue
            op = self.operators[s]
            for i in range(self.v_dim):
                for j in range(self.v_dim):
                    if op.data[i][j] != 0:
                        out.data[i][j] += c * op.data[i][j]
        return out

    def to_json(self):
        return {
            "lie": self.lie.to_json(),
            "v_dim": self.v_dim,
            "operators": [op.to_json() for op in self.operators],
        }


def representation_from_json(doc) -> Representation:
    lie = lie_from_json(doc["lie"])
    ops = [Matrix([[qq(x) for x in row] for row in op]) for op in doc["operators"]]
    return Representation(lie, int(doc["v_dim"]), ops)


def validate_representation(rep: Representation) -> ValidationReport:
    failures = []
    g = rep.lie
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = rep.apply(g.bracket_vec(g.basis_vector(i), g.basis_vector(j)))
            comm = rep.operators[i].mul(rep.operators[j]).sub(
                rep.operators[j].mul(rep.operators[i])
            )
            if lhs != comm:
                failures.append(
                    f"homomorphism fails on ({g.basis_names[i]}, {g.basis_names[j]})"
                )
    return ValidationReport(not failures, failures)


def scalar_rep() -> Representation:
    """The identity representation of the abelian line; theta = id_C."""
    one = LieAlgebra(1, [], basis_names=["t"], name="gl1")
    return Representation(one, 1, [Matrix([[1]])])


def gl_identity_rep(n) -> Representation:
    """id on gl(n): the operator of E_ab is E_ab itself."""
    g = gl(n)
    return Representation(g, n, g.matrix_basis)


def direct_sum(r1: Representation, r2: Representation) -> Representation:
    if r1.lie is not r2.lie and r1.lie.to_json() != r2.lie.to_json():
        raise ValueError("summands must represent the same Lie algebra")
    v = r1.v_dim + r2.v_dim
    ops = []
    for a, b in zip(r1.operators, r2.operators):
        m = Matrix.zeros(v, v)
        for i in range(r1.v_dim):
            for j in range(r1.v_dim):
                m.data[i][j] = a.data[i][j]
        for i in range(r2.v_dim):
            for j in range(r2.v_dim):
                m.data[r1.v_dim + i][r1.v_dim + j] = b.data[i][j]
        ops.append(m)
    return Representation(r1.lie, v, ops)


def sl2_irrep(n) -> Representation:
    """The (n+1)-dimensional irreducible sl2 module on a weight basis.

    theta(H) = diag(n, n-2, ..., -n), theta(X) e_k = (n-k+1) e_{k-1},
    theta(Y) e_k = (k+1) e_{k+1}.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    dim = n + 1
    h = Matrix.zeros(dim, dim)
    x = Matrix.zeros(dim, dim)
    y = Matrix.zeros(dim, dim)
    for k in range(dim):
        h.data[k][k] = Fraction(n - 2 * k)
        if k > 0:
            x.data[k - 1][k] = Fraction(n - k + 1)
        if k < n:
            y.data[k + 1][k] = Fraction(k + 1)
    return Representation(sl2(), dim, [h, x, y])


@dataclass(frozen=True)
class IrrepDecomposition:
    """Multiset of highest weights; each n contributes one copy of V(n)."""

    summands: tuple

    def total_dim(self):
        return sum(n + 1 for n in self.summands)


def assemble(d: IrrepDecomposition) -> Representation:
    reps = [sl2_irrep(n) for n in d.summands]
    out = reps[0]
    for r in reps[1:]:
        out = direct_sum(out, r)
    return out


WHOLE_ALGEBRA = "WholeAlgebra"
DET_HYPERSURFACE = "DetHypersurface"


def det_locus_classify(d: IrrepDecomposition) -> str:
    """Where det(theta(g)) vanishes: everywhere iff some summand is even."""
    return WHOLE_ALGEBRA if any(n % 2 == 0 for n in d.summands) else DET_HYPERSURFACE


def det_locus_classify_rep(rep: Representation) -> str:
    """Classify an sl2 module from its operators alone.

    det(theta(H)) vanishes exactly when some irreducible summand has even
    highest weight, since the H-eigenvalues on V(n) are n, n-2, ..., -n.
    """
    if rep.lie.dim != 3 or rep.lie.table != sl2().table:
        raise ValueError("classification needs a representation of sl2 "
                         "on the standard basis")
    return WHOLE_ALGEBRA if det(rep.operators[0]) == 0 else DET_HYPERSURFACE


# -- the cochain functor ---------------------------------------------------


def chevalley_eilenberg(g: LieAlgebra) -> FiniteCdga:
    """The cochain cdga of g: the exterior algebra on g* with d = -(bracket dual).

    With the wedge pairing (s ^ t)(u ^ v) = s(u) t(v) - s(v) t(u), the dual
    basis element of e_k picks up d(e_k*) = - sum_{i<j} c^k_{ij} e_i* ^ e_j*,
    extended to all degrees by the graded Leibniz rule.
    """
    d_gen = {}
    for (i, j), terms in g.table.items():
        for k, c in terms.items():
            d_gen.setdefault(k, []).append(((i, j), -c))
    names = [nm + "*" for nm in g.basis_names]
    return exterior_algebra(g.dim, names=names, diff_on_generators=d_gen)


def ce_coefficient_matrix(g: LieAlgebra, rho_ops, k) -> Matrix:
    """The degree-k cochain differential of g with coefficients in a module.

    ``rho_ops`` gives the action of each basis element on V.  Built directly
    from the alternating-sum formula, independently of any cdga machinery:
    (d s)(x_0..x_k) = sum_i (-1)^i rho(x_i) s(..^x_i..)
                    + sum_{i<j} (-1)^{i+j} s([x_i,x_j], ..^x_i..^x_j..).
    Cochains C^k(g; V) are identified with Lambda^k(g*) tensor V via the
    same wedge pairing used everywhere else; basis order is (monomial, V).
    """
    v_dim = rho_ops[0].rows if rho_ops else 0
    basis_k = list(itertools.combinations(range(g.dim), k))
    basis_k1 = list(itertools.combinations(range(g.dim), k + 1))
    idx_k = {t: i for i, t in enumerate(basis_k)}
    m = Matrix.zeros(len(basis_k1) * v_dim, len(basis_k) * v_dim)
    for row_mono, xs in enumerate(basis_k1):
        for i in range(k + 1):
            rest = xs[:i] + xs[i + 1:]
            op = rho_ops[xs[i]]
            sign = (-1) ** i
            col_mono = idx_k[rest]
            for a in range(v_dim):
                for b in range(v_dim):
                    if op.data[a][b] != 0:
                        m.data[row_mono * v_dim + a][col_mono * v_dim + b] += (
                            Fraction(sign) * op.data[a][b]
                        )
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = tuple(x for t, x in enumerate(xs) if t not in (i, j))
                sign = (-1) ** (i + j)
                for t, c in g.bracket_basis(xs[i], xs[j]).items():
                    if t in rest:
                        continue
                    # sort (t, rest) into a monomial, tracking the wedge sign
                    pos = sum(1 for r in rest if r < t)
                    mono = tuple(sorted(rest + (t,)))
                    wsign = (-1) ** pos
                    col_mono = idx_k[mono]
                    for a in range(v_dim):
                        m.data[row_mono * v_dim + a][col_mono * v_dim + a] += (
                            Fraction(sign * wsign) * c
                        )
    return m


# -- nilpotency ------------------------------------------------------------


def is_nilpotent(g: LieAlgebra) -> bool:
    """Lower central series by exact span ranks; terminates within dim g steps."""
    current = [g.basis_vector(i) for i in range(g.dim)]
    current_rank = g.dim
    for _ in range(g.dim + 1):
        nxt = []
        for i in range(g.dim):
            ei = g.basis_vector(i)
            for v in current:
                w = g.bracket_vec(ei, v)
                if any(x != 0 for x in w):
                    nxt.append(w)
        if not nxt:
            return True
        nxt_rank = rank(Matrix(nxt))
        if nxt_rank == current_rank:
            return False
        current, current_rank = nxt, nxt_rank
    return False
