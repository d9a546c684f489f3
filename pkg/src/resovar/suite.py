"""The acceptance suite: every closed form against its oracle, timed.

Each criterion is a standalone function returning a CriterionResult; the
runner threads one master seed through a per-criterion stream splitter so
criteria can run in any order or in isolation with identical results.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .cdga import cohomology_ring_with_maps, validate_cdga
from .curves import curve_algebra, fibration_from_json, qp_decomposition
from .exactla import Matrix, kernel_basis, qq_str, rank
from .fixtures import builtin
from .flatres import (
    Connection,
    aomoto_cohomology,
    eigen_reduction_check,
    holonomy_presentation,
    in_resonance,
    is_flat,
    is_lie_morphism,
    nilpotent_resonance_check,
    psi,
    rank_one_connection,
    scalar_connection,
)
from .liealg import (
    abelian,
    chevalley_eilenberg,
    direct_sum,
    filiform4,
    gl,
    gl_identity_rep,
    heis3,
    scalar_rep,
    sl2,
    sl2_irrep,
    sol2,
)
from .raag import (
    SimpleGraph,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    grid_verify,
    in_S_W,
    path_graph,
    resonance_decomposition,
    resonance_grid_crosscheck,
    semisimple_counterexample,
    stanley_reisner,
)

F = Fraction


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    elapsed: float
    details: dict = field(default_factory=dict)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} criterion {self.index:2d} {self.name} ({self.elapsed:.2f}s)"


def stream_seed(master: int, name: str) -> int:
    digest = hashlib.sha256(f"{master}:{name}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _random_rational(rng, span=3, dens=(1, 2)):
    return F(rng.randint(-span, span), rng.choice(dens))


# -- criterion 1: the solvable-pair resonance scan -----------------------------


def criterion_01_sol2_scan(seed=0):
    a = chevalley_eilenberg(sol2())
    one = scalar_rep()
    points = [F(t) for t in range(-3, 4)] + [F(1, 2), F(1, 3)]
    resonant = []
    for t in points:
        omega = scalar_connection(a, [t, F(0)])
        if in_resonance(omega, one, 1, 1):
            resonant.append(t)
    passed = resonant == [F(0), F(1)]
    return {
        "scanned": [qq_str(t) for t in points],
        "resonant_at": [qq_str(t) for t in resonant],
        "expected": ["0", "1"],
    }, passed


# -- criterion 2: the nilpotent contrast ---------------------------------------


def criterion_02_heis3_contrast(seed=0, count=100):
    a = chevalley_eilenberg(heis3())
    one = scalar_rep()
    maps = cohomology_ring_with_maps(a)
    rng = random.Random(seed)
    good = 0
    for _ in range(count):
        while True:
            coords = [_random_rational(rng), _random_rational(rng)]
            if any(x != 0 for x in coords):
                break
        eta = [coords[0], coords[1], F(0)]
        on_algebra = in_resonance(scalar_connection(a, eta), one, 1, 1)
        cls = maps.project(1, eta)
        on_ring = in_resonance(scalar_connection(maps.ring, cls), one, 1, 1)
        if (not on_algebra) and on_ring:
            good += 1
    return {"agreeing": good, "total": count}, good == count


# -- criterion 3: holonomy round trip ------------------------------------------


def criterion_03_holonomy_round_trip(seed=0):
    failures = []
    for g in (sol2(), heis3(), sl2(), abelian(3)):
        a = chevalley_eilenberg(g)
        p = holonomy_presentation(a)
        pairs = [(i, j) for i in range(g.dim) for j in range(i + 1, g.dim)]
        if p.generator_count != g.dim or len(p.relations) != len(pairs):
            failures.append(f"{g.name}: shape mismatch")
            continue
        for rel, (i, j) in zip(p.relations, pairs):
            bracket = g.bracket_vec(g.basis_vector(i), g.basis_vector(j))
            if rel.linear != [-c for c in bracket]:
                failures.append(f"{g.name}: linear part at ({i},{j})")
            expected_bil = Matrix.zeros(g.dim, g.dim)
            expected_bil.data[i][j] = F(1)
            expected_bil.data[j][i] = F(-1)
            if rel.bilinear != expected_bil:
                failures.append(f"{g.name}: bilinear part at ({i},{j})")
    return {"algebras": ["sol2", "heis3", "sl2", "abelian3"],
            "failures": failures}, not failures


# -- criterion 4: flatness equals morphism --------------------------------------


def criterion_04_psi_correspondence(seed=0, per_fixture=500):
    rng = random.Random(seed)
    fixtures = [
        ("ce_sol2/sol2", chevalley_eilenberg(sol2()), sol2()),
        ("ce_sol2/sl2", chevalley_eilenberg(sol2()), sl2()),
        ("ce_heis3/sl2", chevalley_eilenberg(heis3()), sl2()),
        ("sr_p3/sl2", stanley_reisner(path_graph(3)), sl2()),
    ]
    agreement = {}
    for label, a, g in fixtures:
        p = holonomy_presentation(a)
        agree = 0
        for _ in range(per_fixture):
            m = Matrix(
                [[_random_rational(rng) for _ in range(g.dim)] for _ in range(a.dims[1])]
            )
            omega = Connection(a, g, m)
            if is_flat(omega) == is_lie_morphism(p, g, psi(omega)):
                agree += 1
        agreement[label] = agree
    passed = all(v == per_fixture for v in agreement.values())
    return {"per_fixture": per_fixture, "agreement": agreement}, passed


# -- criterion 5: the eigenvalue reduction ---------------------------------------


def _jordan(size, eigenvalue):
    m = Matrix.zeros(size, size)
    for i in range(size):
        m.data[i][i] = F(eigenvalue)
        if i + 1 < size:
            m.data[i][i + 1] = F(1)
    return m


def _block_diag(blocks):
    n = sum(b.rows for b in blocks)
    m = Matrix.zeros(n, n)
    off = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.rows):
                m.data[off + i][off + j] = b.data[i][j]
        off += b.rows
    return m


def criterion_05_eigenvalue_reduction(seed=0, cases=200):
    rng = random.Random(seed)
    algebras = [
        chevalley_eilenberg(sol2()),
        chevalley_eilenberg(heis3()),
        stanley_reisner(path_graph(3)),
        stanley_reisner(complete_graph(3)),
    ]
    reps = {n: gl_identity_rep(n) for n in (2, 3, 4)}
    closed = {id(a): kernel_basis(a.diff_matrix(1)) for a in algebras}

    def draw_matrix():
        size = rng.randint(2, 4)
        shape = rng.choice(["diagonal", "jordan", "mixed"])
        if shape == "diagonal":
            b = Matrix.zeros(size, size)
            for i in range(size):
                b.data[i][i] = _random_rational(rng)
        elif shape == "jordan":
            b = _jordan(size, 0)
        else:
            blocks = []
            left = size
            while left:
                k = rng.randint(1, left)
                blocks.append(_jordan(k, rng.randint(-2, 2)))
                left -= k
            b = _block_diag(blocks)
        return size, b

    disagreements = []
    # the fixed nilpotent-block case over the Heisenberg algebra
    fixed_theta = reps[3]
    fixed = eigen_reduction_check(
        algebras[1], [F(0), F(1), F(0)],
        [_jordan(3, 0).data[i][j] for i in range(3) for j in range(3)],
        fixed_theta, 1,
    )
    if not fixed.agree:
        disagreements.append("fixed heis3 block case")
    ran = 1
    while ran < cases:
        a = rng.choice(algebras)
        basis_vectors = closed[id(a)]
        eta = [F(0)] * a.dims[1]
        for v in basis_vectors:
            c = F(rng.randint(-2, 2))
            for t, x in enumerate(v):
                eta[t] += c * x
        size, b = draw_matrix()
        coords = [b.data[i][j] for i in range(size) for j in range(size)]
        k = rng.randint(0, 3)
        rep = eigen_reduction_check(a, eta, coords, reps[size], k)
        ran += 1
        if not rep.agree:
            disagreements.append((a.dims, qq_str(sum(eta, F(0))), k))
    return {"cases": ran, "disagreements": disagreements}, not disagreements


# -- criterion 6: flat locus by exhaustion ----------------------------------------


def _graphs_up_to_four():
    out = [
        ("K1", SimpleGraph(1, [])),
        ("2K1", edgeless_graph(2)),
        ("K2", SimpleGraph(2, [(0, 1)])),
        ("3K1", edgeless_graph(3)),
        ("K2+K1", SimpleGraph(3, [(0, 1)])),
        ("P3", path_graph(3)),
        ("K3", complete_graph(3)),
        ("4K1", edgeless_graph(4)),
        ("K2+2K1", SimpleGraph(4, [(0, 1)])),
        ("2K2", SimpleGraph(4, [(0, 1), (2, 3)])),
        ("P3+K1", SimpleGraph(4, [(0, 1), (1, 2)])),
        ("K3+K1", SimpleGraph(4, [(0, 1), (0, 2), (1, 2)])),
        ("star", SimpleGraph(4, [(0, 1), (0, 2), (0, 3)])),
        ("P4", path_graph(4)),
        ("C4", cycle_graph(4)),
        ("paw", SimpleGraph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])),
        ("diamond", SimpleGraph(4, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)])),
        ("K4", complete_graph(4)),
    ]
    return out


def criterion_06_raag_exhaustion(seed=0):
    lies = [("sl2", sl2()), ("sol2", sol2())]
    per_graph = {}
    failures = []
    for name, g in _graphs_up_to_four():
        for lie_name, lie in lies:
            rep = grid_verify(g, lie)
            per_graph[f"{name}/{lie_name}"] = {
                "points": rep.points,
                "flat": rep.flat_points,
            }
            if not rep.ok:
                failures.append((name, lie_name, rep.mismatches[:3]))
    return {"graphs": len(per_graph), "scans": per_graph,
            "failures": failures}, not failures


# -- criterion 7: resonance decomposition vs direct ranks --------------------------


def criterion_07_resonance_decomposition(seed=0):
    theta = sl2_irrep(1)
    expected_labels = {
        "P3": ["P{v0,v1,v2}", "S{v0,v2}"],
        "K3": ["P{v0,v1,v2}"],
        "C4": ["P{v0,v1,v2,v3}", "S{v0,v2}", "S{v1,v3}"],
        "2K2": ["S{v0,v1,v2,v3}"],
    }
    graphs = {
        "P3": path_graph(3),
        "K3": complete_graph(3),
        "C4": cycle_graph(4),
        "2K2": SimpleGraph(4, [(0, 1), (2, 3)]),
    }
    failures = []
    scans = {}
    for name, g in graphs.items():
        decomposition = resonance_decomposition(g, theta)
        got = sorted(c.label for c in decomposition)
        if got != expected_labels[name]:
            failures.append((name, "components", got))
            continue
        rep = resonance_grid_crosscheck(g, theta)
        scans[name] = {
            "points": rep.points,
            "flat": rep.flat_points,
            "resonant": rep.resonant_points,
        }
        if not rep.ok:
            failures.append((name, "grid", rep.mismatches[:3]))
    return {"scans": scans, "failures": failures}, not failures


# -- criterion 8: the semisimple witnesses ------------------------------------------


def criterion_08_semisimple_witnesses(seed=0):
    details = {}
    passed = True
    for which in ("sl2_x_sl2", "sl3"):
        graph, omega = semisimple_counterexample(which)
        outside = not any(in_S_W(graph, omega, w) for w in range(1 << graph.n))
        details[which] = {
            "vertices": graph.n,
            "flat": is_flat(omega),
            "coefficient_rank": rank(omega.coeffs),
            "outside_every_S_W": outside,
        }
        passed = passed and is_flat(omega) and outside and rank(omega.coeffs) >= 2
    return details, passed


# -- criterion 9: nilpotent resonance ------------------------------------------------


def criterion_09_nilpotent(seed=0, samples=100):
    theta1 = sl2_irrep(1)
    theta11 = direct_sum(sl2_irrep(1), sl2_irrep(1))
    configs = [
        ("heis3/theta1", heis3(), theta1, (-1, 0, 1)),
        ("heis3/theta1+theta1", heis3(), theta11, (-1, 0, 1)),
        ("filiform4/theta1", filiform4(), theta1, (0, 1)),
        ("filiform4/theta1+theta1", filiform4(), theta11, (0, 1)),
    ]
    details = {}
    passed = True
    for label, n, theta, grid in configs:
        rep = nilpotent_resonance_check(
            n, theta, samples=samples, seed=stream_seed(seed, label),
            flat_grid=grid, flat_budget=600_000,
        )
        details[label] = {
            "samples": rep.samples,
            "pi_mismatches": len(rep.pi_mismatches),
            "non_rank_one_flat": len(rep.non_rank_one_flat),
        }
        passed = passed and rep.ok
    return details, passed


# -- criterion 10: curves and the Euler identity --------------------------------------


def criterion_10_curves(seed=0, sampled=120):
    theta = sl2_irrep(1)
    lie = sl2()
    rng = random.Random(seed)
    details = {}
    failures = []

    def check_point(c, m, bucket):
        omega = Connection(c.underlying, lie, m)
        if not is_flat(omega):
            return
        bucket["flat"] += 1
        rep = aomoto_cohomology(omega, theta)
        chi = c.underlying.euler_characteristic()
        euler = sum((-1) ** k * h for k, h in enumerate(rep.dims_h))
        if rep.dims_h[1] < 1:
            failures.append((bucket["name"], "flat point escapes degree-one resonance"))
        if euler != chi * theta.v_dim or not rep.euler_check:
            failures.append((bucket["name"], "Euler identity"))

    # exhaustive grids where the grid is small; an integer screen on the
    # symplectic pairing keeps the full verification to the flat survivors
    for kind, par in (("noncompact", 2), ("compact", 2)):
        c = curve_algebra(kind, par)
        n1 = c.underlying.dims[1]
        bucket = {"name": f"{kind}{par}", "flat": 0}

        def pairing_zero(values, s, t):
            total = 0
            for i in range(par):
                total += (
                    values[i * 3 + s] * values[(par + i) * 3 + t]
                    - values[(par + i) * 3 + s] * values[i * 3 + t]
                )
            return total == 0

        screened = 0
        for values in itertools.product((-1, 0, 1), repeat=n1 * 3):
            if kind == "compact" and not all(
                pairing_zero(values, s, t) for s in range(3) for t in range(s + 1, 3)
            ):
                continue
            screened += 1
            m = Matrix.zeros(n1, 3)
            for i in range(n1):
                for s in range(3):
                    if values[i * 3 + s]:
                        m.data[i][s] = F(values[i * 3 + s])
            check_point(c, m, bucket)
        details[bucket["name"]] = {
            "mode": "grid",
            "screened": screened,
            "flat_points": bucket["flat"],
        }

    # sampled flat points where the grid would be too large
    for kind, par in (("compact", 3), ("noncompact", 3), ("noncompact", 4)):
        c = curve_algebra(kind, par)
        n1 = c.underlying.dims[1]
        iso = list(range(par)) if kind == "compact" else list(range(n1))
        bucket = {"name": f"{kind}{par}", "flat": 0}
        for _ in range(sampled):
            m = Matrix.zeros(n1, 3)
            if rng.random() < F(1, 2):
                for i in iso:  # inside the standard isotropic span
                    for s in range(3):
                        m.data[i][s] = F(rng.randint(-2, 2))
            else:
                eta = [_random_rational(rng) for _ in range(n1)]
                gv = [_random_rational(rng) for _ in range(3)]
                for i in range(n1):
                    for s in range(3):
                        m.data[i][s] = eta[i] * gv[s]
            check_point(c, m, bucket)
        details[bucket["name"]] = {"mode": "sampled", "flat_points": bucket["flat"]}

    return {"curves": details, "failures": failures}, not failures


# -- criterion 11: the quasi-projective assembler ---------------------------------------


def criterion_11_qp_assembler(seed=0, samples=10_000):
    from .cdga import cdga_from_json

    a = cdga_from_json(builtin("two_curve_surrogate"))
    fibs = [fibration_from_json(doc) for doc in builtin("surrogate_fibrations")]
    theta = sl2_irrep(1)
    lie = sl2()
    decomp = qp_decomposition(a, fibs, theta)
    mismatches = []
    flat_seen = 0

    def check(m):
        nonlocal flat_seen
        omega = Connection(a, lie, m)
        flat = is_flat(omega)
        if decomp.in_flat_union(omega) != flat:
            mismatches.append(("flat union", m.to_json()))
            return
        if flat:
            flat_seen += 1
            direct = in_resonance(omega, theta, 1, 1)
            if decomp.in_resonance_union(omega) != direct:
                mismatches.append(("resonance union", m.to_json()))

    rng = random.Random(seed)
    for _ in range(samples):
        check(Matrix([[F(rng.randint(-3, 3)) for _ in range(3)] for _ in range(4)]))

    # the {-1,0,1} grid on each component's support
    for pencil in (range(2), range(2, 4)):
        for values in itertools.product((-1, 0, 1), repeat=6):
            m = Matrix.zeros(4, 3)
            for pos, i in enumerate(pencil):
                for s in range(3):
                    m.data[i][s] = F(values[pos * 3 + s])
            check(m)
    for eta_vals in itertools.product((-1, 0, 1), repeat=4):
        for g_vals in itertools.product((-1, 0, 1), repeat=3):
            m = Matrix([[F(e * gval) for gval in g_vals] for e in eta_vals])
            check(m)

    details = {
        "components": [c.label for c in decomp.resonance_components],
        "case": decomp.case,
        "random_samples": samples,
        "flat_points_checked": flat_seen,
        "mismatches": mismatches[:5],
    }
    return details, len(decomp.resonance_components) == 3 and not mismatches


# -- criterion 12: the performance envelope -----------------------------------------


def criterion_12_performance(seed=0, size=200, limit_seconds=2.0):
    rng = random.Random(seed)
    m = Matrix(
        [[F(rng.randint(-255, 255)) for _ in range(size)] for _ in range(size)],
    )
    start = time.perf_counter()
    r = rank(m)
    elapsed = time.perf_counter() - start
    return {
        "size": size,
        "rank": r,
        "seconds": round(elapsed, 3),
        "limit": limit_seconds,
    }, elapsed < limit_seconds


CRITERIA = [
    (1, "sol2-resonance-scan", criterion_01_sol2_scan),
    (2, "heis3-contrast", criterion_02_heis3_contrast),
    (3, "holonomy-round-trip", criterion_03_holonomy_round_trip),
    (4, "psi-correspondence", criterion_04_psi_correspondence),
    (5, "eigenvalue-reduction", criterion_05_eigenvalue_reduction),
    (6, "raag-flat-exhaustion", criterion_06_raag_exhaustion),
    (7, "raag-resonance-decomposition", criterion_07_resonance_decomposition),
    (8, "semisimple-witnesses", criterion_08_semisimple_witnesses),
    (9, "nilpotent-resonance", criterion_09_nilpotent),
    (10, "curve-euler-identity", criterion_10_curves),
    (11, "quasi-projective-assembler", criterion_11_qp_assembler),
    (12, "performance-envelope", criterion_12_performance),
]


def run_criterion(index: int, seed: int = 42) -> CriterionResult:
    for idx, name, fn in CRITERIA:
        if idx == index:
            start = time.perf_counter()
            details, passed = fn(seed=stream_seed(seed, name))
            elapsed = time.perf_counter() - start
            return CriterionResult(idx, name, passed, elapsed, details)
    raise ValueError(f"no criterion {index}")


def run_suite(seed: int = 42, indices=None, progress=None):
    results = []
    for idx, name, _fn in CRITERIA:
        if indices and idx not in indices:
            continue
        result = run_criterion(idx, seed)
        results.append(result)
        if progress:
            progress(result)
    total = sum(r.elapsed for r in results)
    all_ran = len(results) == len(CRITERIA)
    budget_ok = total < 900 or not all_ran
    # timings live in their own section: the rest of the report is
    # byte-identical across runs with the same inputs and seed
    report = {
        "kind": "suite",
        "seed": seed,
        "passed": all(r.passed for r in results) and budget_ok,
        "criteria": [
            {
                "index": r.index,
                "name": r.name,
                "passed": r.passed,
                "details": r.details,
            }
            for r in results
        ],
        "timings": {
            "per_criterion": {str(r.index): round(r.elapsed, 2) for r in results},
            "total_seconds": round(total, 2),
            "within_budget": budget_ok,
        },
    }
    return report
