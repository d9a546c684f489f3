"""Built-in input documents: the worked examples as ready-to-use JSON."""

from __future__ import annotations

from fractions import Fraction

from .cdga import FiniteCdga
from .curves import curve_algebra
from .errors import UnknownFixtureError
from .exactla import Matrix
from .liealg import (
    abelian,
    chevalley_eilenberg,
    direct_sum,
    filiform4,
    heis3,
    scalar_rep,
    sl2,
    sl2_irrep,
    sol2,
)
from .raag import (
    LabeledGraph,
    SimpleGraph,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    path_graph,
    stanley_reisner,
)

F = Fraction


def _two_curve_surrogate() -> FiniteCdga:
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


def _surrogate_fibrations():
    return [
        {
            "curve": {"kind": "noncompact", "parameter": 2},
            "embedding_deg1": Matrix([[1, 0], [0, 1], [0, 0], [0, 0]]).to_json(),
        },
        {
            "curve": {"kind": "noncompact", "parameter": 2},
            "embedding_deg1": Matrix([[0, 0], [0, 0], [1, 0], [0, 1]]).to_json(),
        },
    ]


def _p3():
    return path_graph(3)


_BUILDERS = {
    # cochain algebras
    "sol2_ce": lambda: chevalley_eilenberg(sol2()).to_json(),
    "heis3_ce": lambda: chevalley_eilenberg(heis3()).to_json(),
    "sl2_ce": lambda: chevalley_eilenberg(sl2()).to_json(),
    "abelian3_ce": lambda: chevalley_eilenberg(abelian(3)).to_json(),
    "filiform4_ce": lambda: chevalley_eilenberg(filiform4()).to_json(),
    # Lie algebras
    "sl2": lambda: sl2().to_json(),
    "sol2": lambda: sol2().to_json(),
    "heis3": lambda: heis3().to_json(),
    "filiform4": lambda: filiform4().to_json(),
    # representations
    "theta1": lambda: sl2_irrep(1).to_json(),
    "theta2": lambda: sl2_irrep(2).to_json(),
    "theta3": lambda: sl2_irrep(3).to_json(),
    "theta1_plus_theta1": lambda: direct_sum(sl2_irrep(1), sl2_irrep(1)).to_json(),
    "scalar_rep": lambda: scalar_rep().to_json(),
    # graphs
    "p3": lambda: _p3().to_json(),
    "p4": lambda: path_graph(4).to_json(),
    "k3": lambda: complete_graph(3).to_json(),
    "k4": lambda: complete_graph(4).to_json(),
    "c4": lambda: cycle_graph(4).to_json(),
    "edgeless2": lambda: edgeless_graph(2).to_json(),
    "disjoint_edges": lambda: SimpleGraph(
        4, [(0, 1), (2, 3)], vertex_names=["a", "b", "c", "d"]
    ).to_json(),
    "triangle_labeled": lambda: LabeledGraph(
        complete_graph(3), {(0, 1): 3, (0, 2): 2, (1, 2): 2}
    ).to_json(),
    # Stanley-Reisner algebras
    "p3_sr": lambda: stanley_reisner(_p3()).to_json(),
    # curve algebras (as cdgas) and curve descriptors
    "curve_g2": lambda: curve_algebra("compact", 2).underlying.to_json(),
    "curve_g3": lambda: curve_algebra("compact", 3).underlying.to_json(),
    "curve_nc2": lambda: curve_algebra("noncompact", 2).underlying.to_json(),
    "curve_nc3": lambda: curve_algebra("noncompact", 3).underlying.to_json(),
    # the quasi-projective surrogate and its pencils
    "two_curve_surrogate": lambda: _two_curve_surrogate().to_json(),
    "surrogate_fibrations": _surrogate_fibrations,
    # sample connections over CE(sol2)
    "omega_sol2_resonant": lambda: {"coeffs": [["1"], ["0"]]},
    "omega_sol2_trivial": lambda: {"coeffs": [["0"], ["0"]]},
}


def fixture_names():
    return sorted(_BUILDERS)


def builtin(name: str):
    """The named built-in document; raises UnknownFixture for anything else."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownFixtureError(
            f"unknown fixture {name!r}; available: {', '.join(fixture_names())}"
        ) from None
    return builder()
