"""Graph machinery for right-angled Artin group jump loci.

Vertex subsets are bitmasks.  The flat locus of an exterior Stanley-Reisner
algebra with values in sl2 or sol2 decomposes into the per-component
rank-one pieces S_W; the depth-one resonance variety adds the singular
pieces P_W.  The grid verifier exhausts small coefficient grids against
those closed forms with a table-driven integer fast path.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .cdga import FiniteCdga
from .errors import BudgetExceededError, ShapeMismatchError, TooLargeError
from .exactla import Matrix, qq, rank, vec_is_zero, vec_rank_le_1
from .flatres import Connection, is_flat
from .liealg import (
    DET_HYPERSURFACE,
    Representation,
    det_locus_classify_rep,
    product,
    sl,
    sl2,
)

SUBSET_CAP = 20


class SimpleGraph:
    def __init__(self, n_vertices, edges, vertex_names=None):
        self.n = n_vertices
        self.vertex_names = (
            list(vertex_names) if vertex_names else [f"v{i}" for i in range(n_vertices)]
        )
        self.edges = []
        seen = set()
        self.adj = [0] * n_vertices
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError("edge endpoint out of range")
            u, v = min(u, v), max(u, v)
            if (u, v) in seen:
                continue
            seen.add((u, v))
            self.edges.append((u, v))
            self.adj[u] |= 1 << v
            self.adj[v] |= 1 << u
        self.edges.sort()

    def full_mask(self):
        return (1 << self.n) - 1

    def subset_name(self, mask):
        return "{" + ",".join(self.vertex_names[v] for v in mask_vertices(mask)) + "}"

    def to_json(self):
        return {
            "vertices": list(self.vertex_names),
            "edges": [[self.vertex_names[u], self.vertex_names[v]] for u, v in self.edges],
        }


@dataclass
class LabeledGraph:
    graph: SimpleGraph
    labels: dict  # (u, v) with u < v -> label >= 2

    def __post_init__(self):
        for (u, v), lab in self.labels.items():
            if lab < 2:
                raise ValueError("labels must be at least 2")
        for e in self.graph.edges:
            if e not in self.labels:
                raise ValueError(f"edge {e} has no label")

    def to_json(self):
        doc = self.graph.to_json()
        names = self.graph.vertex_names
        doc["labels"] = {f"{names[u]},{names[v]}": lab for (u, v), lab in sorted(self.labels.items())}
        return doc


def graph_from_json(doc):
    names = list(doc["vertices"])
    index = {nm: i for i, nm in enumerate(names)}
    edges = [(index[u], index[v]) for u, v in doc.get("edges", [])]
    g = SimpleGraph(len(names), edges, vertex_names=names)
    if "labels" in doc:
        labels = {}
        for key, lab in doc["labels"].items():
            u, v = key.split(",")
            a, b = sorted((index[u], index[v]))
            labels[(a, b)] = int(lab)
        return LabeledGraph(g, labels)
    return g


def path_graph(n):
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)],
                       vertex_names=[f"v{i}" for i in range(n)])


def cycle_graph(n):
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return SimpleGraph(n, list(itertools.combinations(range(n), 2)))


def edgeless_graph(n):
    return SimpleGraph(n, [])


def mask_vertices(mask):
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def components(g: SimpleGraph, w_mask: int):
    """Connected components of the induced subgraph, lowest vertex first."""
    comps = []
    remaining = w_mask
    while remaining:
        seed = remaining & -remaining
        comp = seed
        frontier = seed
        while frontier:
            v = frontier.bit_length() - 1  # grab one frontier vertex
            frontier &= ~(1 << v)
            grow = g.adj[v] & remaining & ~comp
            comp |= grow
            frontier |= grow
        comps.append(comp)
        remaining &= ~comp
    return comps


class _ComponentCache:
    """Components of every induced subgraph, filled on demand."""

    def __init__(self, g):
        self.g = g
        self.cache = {0: []}

    def get(self, mask):
        if mask not in self.cache:
            self.cache[mask] = components(self.g, mask)
        return self.cache[mask]

    def count(self, mask):
        return len(self.get(mask))


def _check_cap(g, cap=SUBSET_CAP):
    if g.n > cap:
        raise TooLargeError(f"subset enumeration over {g.n} vertices exceeds the cap {cap}")


def stanley_reisner(g: SimpleGraph) -> FiniteCdga:
    """Exterior Stanley-Reisner algebra of the graph, cut at degree 2.

    Degree-1 generators per vertex, d = 0, and v* w* nonzero exactly on
    edges; the degree-2 basis is indexed by the (sorted) edge list.
    """
    dims = [1, g.n, len(g.edges)]
    edge_index = {e: i for i, e in enumerate(g.edges)}
    triples = [(u, v, edge_index[(u, v)], Fraction(1)) for u, v in g.edges]
    names = {
        0: ["1"],
        1: [f"{nm}*" for nm in g.vertex_names],
        2: [f"{g.vertex_names[u]}*^{g.vertex_names[v]}*" for u, v in g.edges],
    }
    has_triangle = any(
        g.adj[u] & g.adj[v] & ~((1 << u) | (1 << v)) for u, v in g.edges
    )
    return FiniteCdga(
        2,
        dims,
        mult={(1, 1): triples} if triples else {},
        basis_names=names,
        truncated=has_triangle,
    )


def rank1_components(g: SimpleGraph, cap=SUBSET_CAP):
    """Inclusion-maximal vertex subsets inducing a disconnected subgraph.

    The rank-one resonance variety of the Stanley-Reisner algebra is the
    union of the coordinate subspaces on these subsets; maximal subsets
    suffice because the subspaces are nested along inclusion.
    """
    _check_cap(g, cap)
    cache = _ComponentCache(g)
    disconnected = sorted(
        (w for w in range(1, 1 << g.n) if cache.count(w) > 1),
        key=lambda w: -bin(w).count("1"),
    )
    maximal = []
    for w in disconnected:
        if not any(w | m == m for m in maximal):
            maximal.append(w)
    return sorted(maximal)


def in_rank1_locus(g: SimpleGraph, eta, maximal=None) -> bool:
    """Membership of a degree-1 vector in the rank-one resonance union."""
    supp = 0
    for i, x in enumerate(eta):
        if x != 0:
            supp |= 1 << i
    if supp == 0:
        return True  # the origin lies in every coordinate subspace
    if maximal is None:
        maximal = rank1_components(g)
    return any(supp | w == w for w in maximal)


def preceq(g: SimpleGraph, w: int, w2: int) -> bool:
    """Subset order: containment plus injectivity of the component map."""
    if w | w2 != w2:
        return False
    targets = components(g, w2)
    seen = set()
    for comp in components(g, w):
        target = next(i for i, t in enumerate(targets) if comp & t)
        if target in seen:
            return False
        seen.add(target)
    return True


def support_mask(omega: Connection) -> int:
    supp = 0
    for i in range(omega.coeffs.rows):
        if not vec_is_zero(omega.coeffs.row(i)):
            supp |= 1 << i
    return supp


def in_S_W(g: SimpleGraph, omega: Connection, w: int) -> bool:
    """Zero off W, and rank at most one on each component of the induced graph."""
    if omega.coeffs.rows != g.n:
        raise ShapeMismatchError("connection does not live over this graph")
    supp = support_mask(omega)
    if supp & ~w:
        return False
    for comp in components(g, w):
        vecs = [omega.coeffs.row(v) for v in mask_vertices(comp)]
        if not vec_rank_le_1(vecs):
            return False
    return True


def in_P_W(g: SimpleGraph, theta: Representation, omega: Connection, w: int) -> bool:
    """Zero off W and scalar multiples of one determinant-singular element."""
    from .exactla import det

    if omega.coeffs.rows != g.n:
        raise ShapeMismatchError("connection does not live over this graph")
    supp = support_mask(omega)
    if supp & ~w:
        return False
    vecs = [omega.coeffs.row(v) for v in mask_vertices(w)]
    if not vec_rank_le_1(vecs):
        return False
    common = next((v for v in vecs if not vec_is_zero(v)), None)
    if common is None:
        return True
    return det(theta.apply(common)) == 0


def in_flat_union(g: SimpleGraph, omega: Connection, cache=None) -> bool:
    """Membership in the union of all S_W; equals membership in S_{supp}."""
    supp = support_mask(omega)
    comps = cache.get(supp) if cache else components(g, supp)
    for comp in comps:
        vecs = [omega.coeffs.row(v) for v in mask_vertices(comp)]
        if not vec_rank_le_1(vecs):
            return False
    return True


@dataclass
class ComponentDescriptor:
    kind: str  # "S" or "P"
    subset: int
    parts: list  # component masks of the induced subgraph
    dim: int
    label: str

    def to_json(self):
        return {
            "kind": self.kind,
            "subset": self.subset,
            "parts": list(self.parts),
            "dim": self.dim,
            "label": self.label,
        }


def _s_descriptor(g, w, cache, lie_dim):
    parts = cache.get(w)
    dim = sum(bin(p).count("1") + lie_dim - 1 for p in parts)
    return ComponentDescriptor("S", w, parts, dim, f"S{g.subset_name(w)}")


def _p_descriptor(g, w, cache, lie_dim):
    parts = cache.get(w)
    # cone over P(C^W) x (det hypersurface of dimension lie_dim - 1)
    dim = bin(w).count("1") + lie_dim - 2
    return ComponentDescriptor("P", w, parts, dim, f"P{g.subset_name(w)}")


def _order_maximal(g: SimpleGraph, w: int) -> bool:
    """No proper extension above w in the subset order.

    One-vertex extensions suffice: if w extends to w', it extends to
    w + {v} for any v in w' - w, because components merged by adding a
    single vertex stay merged in any larger induced subgraph.
    """
    return not any(
        preceq(g, w, w | (1 << v)) for v in range(g.n) if not w & (1 << v)
    )


def flat_decomposition_sl2(g: SimpleGraph, cap=SUBSET_CAP):
    """Irreducible components of the sl2 flat locus: maximal-order S_W."""
    _check_cap(g, cap)
    cache = _ComponentCache(g)
    return [
        _s_descriptor(g, w, cache, 3)
        for w in range(1, 1 << g.n)
        if _order_maximal(g, w)
    ]


def resonance_decomposition(g: SimpleGraph, theta: Representation, cap=SUBSET_CAP):
    """Irreducible components of the depth-one sl2 resonance variety.

    The singular cone on the full vertex set survives only when the graph
    is connected (every smaller connected-support cone is swallowed by it
    or by a disconnected S_W); an S_W with disconnected support survives
    unless it properly extends in the subset order, the extension then
    being automatically disconnected.  When the module has an even-weight
    summand the singular locus is the whole algebra and the surviving P
    piece collapses to the corresponding S piece.
    """
    _check_cap(g, cap)
    cache = _ComponentCache(g)
    whole = det_locus_classify_rep(theta) != DET_HYPERSURFACE
    out = []
    if g.n >= 1 and cache.count(g.full_mask()) == 1:
        w = g.full_mask()
        out.append(
            _s_descriptor(g, w, cache, 3) if whole else _p_descriptor(g, w, cache, 3)
        )
    for w in range(1, 1 << g.n):
        if cache.count(w) > 1 and _order_maximal(g, w):
            out.append(_s_descriptor(g, w, cache, 3))
    return out


def in_resonance_formula(g: SimpleGraph, theta: Representation, omega: Connection,
                         decomposition=None) -> bool:
    """Membership in the closed-form resonance decomposition."""
    if decomposition is None:
        decomposition = resonance_decomposition(g, theta)
    for comp in decomposition:
        if comp.kind == "S":
            if in_S_W(g, omega, comp.subset):
                return True
        else:
            if in_P_W(g, theta, omega, comp.subset):
                return True
    return False


def odd_contraction(lg: LabeledGraph) -> SimpleGraph:
    """Contract the components of the odd-labeled subgraph.

    Vertices of the result are the components of the graph restricted to
    odd-labeled edges; two components are adjacent when any original edge
    joins them.
    """
    g = lg.graph
    odd = SimpleGraph(g.n, [e for e in g.edges if lg.labels[e] % 2 == 1])
    comps = components(odd, odd.full_mask()) if g.n else []
    comp_of = {}
    for idx, comp in enumerate(comps):
        for v in mask_vertices(comp):
            comp_of[v] = idx
    edges = set()
    for u, v in g.edges:
        cu, cv = comp_of[u], comp_of[v]
        if cu != cv:
            edges.add((min(cu, cv), max(cu, cv)))
    names = [
        "+".join(g.vertex_names[v] for v in mask_vertices(comp)) for comp in comps
    ]
    return SimpleGraph(len(comps), sorted(edges), vertex_names=names)


@dataclass
class GridReport:
    points: int
    flat_points: int
    union_points: int
    mismatches: list

    @property
    def ok(self):
        return not self.mismatches


def grid_verify(g: SimpleGraph, lie, grid=(-1, 0, 1), budget: int = 10_000_000,
                collect: int = 10) -> GridReport:
    """Exhaust the coefficient grid and compare flatness with the S_W union.

    Each vertex value ranges over grid^dim(lie); flatness over the
    Stanley-Reisner algebra reduces to commuting values along edges, and
    union membership to per-component pairwise proportionality, so both
    sides run on precomputed integer tables.
    """
    dim = lie.dim
    total = len(grid) ** (g.n * dim)
    if total > budget:
        raise BudgetExceededError(f"{total} grid points exceed the budget {budget}")
    values = [tuple(qq(x) for x in v) for v in itertools.product(grid, repeat=dim)]
    nvals = len(values)
    zero_idx = next(i for i, v in enumerate(values) if all(x == 0 for x in v))

    commute = [[False] * nvals for _ in range(nvals)]
    proportional = [[False] * nvals for _ in range(nvals)]
    for i in range(nvals):
        vi = list(values[i])
        for j in range(i, nvals):
            vj = list(values[j])
            c = vec_is_zero(lie.bracket_vec(vi, vj))
            commute[i][j] = commute[j][i] = c
            p = vec_rank_le_1([vi, vj])
            proportional[i][j] = proportional[j][i] = p

    comp_lists = {}
    for mask in range(1 << g.n):
        comp_lists[mask] = [mask_vertices(c) for c in components(g, mask)]

    edges = g.edges
    mismatches = []
    flat_count = 0
    union_count = 0
    points = 0
    for assign in itertools.product(range(nvals), repeat=g.n):
        points += 1
        flat = all(commute[assign[u]][assign[v]] for u, v in edges)
        supp = 0
        for v in range(g.n):
            if assign[v] != zero_idx:
                supp |= 1 << v
        member = True
        for comp in comp_lists[supp]:
            first = assign[comp[0]]
            for v in comp[1:]:
                if not proportional[first][assign[v]]:
                    member = False
                    break
            if not member:
                break
        flat_count += flat
        union_count += member
        if flat != member and len(mismatches) < collect:
            mismatches.append((assign, flat, member))
    return GridReport(points, flat_count, union_count, mismatches)


@dataclass
class CrosscheckReport:
    points: int
    flat_points: int
    resonant_points: int
    mismatches: list

    @property
    def ok(self):
        return not self.mismatches


def resonance_grid_crosscheck(g: SimpleGraph, theta: Representation,
                              grid=(-1, 0, 1), budget: int = 10_000_000,
                              collect: int = 10) -> CrosscheckReport:
    """Compare the closed-form resonance membership with direct ranks.

    At every grid point: non-flat points must be outside the closed form
    (its pieces consist of flat points), and at flat points the closed form
    must agree with the depth-one jump of the twisted cohomology.  The
    flatness screen runs on integer tables; the twisted ranks run exactly
    on the flat survivors only.
    """
    from .exactla import det
    from .flatres import in_resonance

    lie = sl2()
    dim = lie.dim
    total = len(grid) ** (g.n * dim)
    if total > budget:
        raise BudgetExceededError(f"{total} grid points exceed the budget {budget}")
    decomposition = resonance_decomposition(g, theta)
    a = stanley_reisner(g)

    values = [tuple(qq(x) for x in v) for v in itertools.product(grid, repeat=dim)]
    nvals = len(values)
    zero_idx = next(i for i, v in enumerate(values) if all(x == 0 for x in v))
    commute = [[False] * nvals for _ in range(nvals)]
    proportional = [[False] * nvals for _ in range(nvals)]
    for i in range(nvals):
        vi = list(values[i])
        for j in range(i, nvals):
            vj = list(values[j])
            c = vec_is_zero(lie.bracket_vec(vi, vj))
            commute[i][j] = commute[j][i] = c
            p = vec_rank_le_1([vi, vj])
            proportional[i][j] = proportional[j][i] = p
    singular = [det(theta.apply(list(v))) == 0 for v in values]

    comp_parts = {}
    for comp in decomposition:
        comp_parts[comp.label] = (
            comp.kind,
            comp.subset,
            [mask_vertices(p) for p in comp.parts],
        )

    def formula_member(assign, supp):
        for kind, subset, parts in comp_parts.values():
            if supp & ~subset:
                continue
            if kind == "P":
                ref = next((assign[v] for v in mask_vertices(subset)
                            if assign[v] != zero_idx), None)
                if ref is None:
                    return True
                if not singular[ref]:
                    continue
                if all(
                    proportional[ref][assign[v]] for v in mask_vertices(subset)
                ):
                    return True
            else:
                good = True
                for part in parts:
                    ref = next((assign[v] for v in part if assign[v] != zero_idx), None)
                    if ref is None:
                        continue
                    if not all(proportional[ref][assign[v]] for v in part):
                        good = False
                        break
                if good:
                    return True
        return False

    edges = g.edges
    mismatches = []
    flat_count = 0
    resonant_count = 0
    points = 0
    for assign in itertools.product(range(nvals), repeat=g.n):
        points += 1
        flat = all(commute[assign[u]][assign[v]] for u, v in edges)
        supp = 0
        for v in range(g.n):
            if assign[v] != zero_idx:
                supp |= 1 << v
        member = formula_member(assign, supp)
        if not flat:
            if member and len(mismatches) < collect:
                mismatches.append((assign, "formula point is not flat"))
            continue
        flat_count += 1
        omega = Connection(
            a, lie, Matrix([list(values[assign[v]]) for v in range(g.n)], g.n, dim)
        )
        direct = in_resonance(omega, theta, 1, 1)
        resonant_count += direct
        if member != direct and len(mismatches) < collect:
            mismatches.append((assign, f"formula {member} vs direct {direct}"))
    return CrosscheckReport(points, flat_count, resonant_count, mismatches)


def semisimple_counterexample(which: str):
    """The regular flat witnesses outside every S_W, for rank-two algebras.

    ``sl2_x_sl2`` puts per-factor raising/lowering values on a 4-cycle;
    ``sl3`` puts the six root-vector elementary matrices on the 6-vertex
    root graph.  Both are reverified on return: connected graph, flat,
    full support, coefficient rank at least 2, and membership in no S_W.
    """
    if which == "sl2_x_sl2":
        names = ["a1", "a2", "-a1", "-a2"]
        # edges {a_i, -a_j} for i != j and {e a_1, e a_2}
        graph = SimpleGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)], vertex_names=names)
        lie = product(sl2(), sl2())
        x1 = [0, 1, 0, 0, 0, 0]
        y1 = [0, 0, 1, 0, 0, 0]
        x2 = [0, 0, 0, 0, 1, 0]
        y2 = [0, 0, 0, 0, 0, 1]
        rows = [x1, x2, y1, y2]  # a1 -> (X,0), a2 -> (0,X), -a1 -> (Y,0), -a2 -> (0,Y)
    elif which == "sl3":
        names = ["a1", "a2", "-a1", "-a2", "g", "-g"]
        lie = sl(3)
        edges = [(0, 3), (1, 2), (0, 4), (1, 4), (2, 5), (3, 5)]
        graph = SimpleGraph(6, edges, vertex_names=names)
        idx = {nm: i for i, nm in enumerate(lie.basis_names)}
        def unit(nm):
            v = [Fraction(0)] * lie.dim
            v[idx[nm]] = Fraction(1)
            return v
        rows = [unit("E12"), unit("E23"), unit("E21"), unit("E32"),
                unit("E13"), unit("E31")]
    else:
        raise ValueError(f"unknown witness {which!r}")

    a = stanley_reisner(graph)
    omega = Connection(a, lie, Matrix(rows))
    assert len(components(graph, graph.full_mask())) == 1
    assert is_flat(omega)
    assert support_mask(omega) == graph.full_mask()
    assert rank(omega.coeffs) >= 2
    assert all(
        not in_S_W(graph, omega, w) for w in range(1 << graph.n)
    )
    return graph, omega
