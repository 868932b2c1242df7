"""Shared fixtures: the frozen manifest, reference instances, and one
session-scoped run of each expensive pipeline stage.

Everything here is deterministic; the seeds and sizes come from the package's
acceptance manifest so tests and library ship the same frozen values.
"""

import json
from importlib import resources

import pytest

from evencover import (
    ExperimentConfig,
    Hypergraph,
    KikuchiGraph,
    RngStream,
    WalkSearchConfig,
    harvest_distinct_covers,
    run_experiment,
    sample_uniform_hypergraph,
)


@pytest.fixture(scope="session")
def manifest() -> dict:
    path = resources.files("evencover.data").joinpath("acceptance_manifest.json")
    return json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def frozen(manifest) -> dict:
    return manifest["frozen_point"]


@pytest.fixture(scope="session")
def frozen_hypergraph(frozen) -> Hypergraph:
    stream = RngStream(frozen["hypergraph_seed"]).child(*frozen["hypergraph_stream"])
    return sample_uniform_hypergraph(frozen["n"], frozen["k"], frozen["m"], stream)


@pytest.fixture(scope="session")
def frozen_graph(frozen, frozen_hypergraph) -> KikuchiGraph:
    return KikuchiGraph(frozen_hypergraph, frozen["ell"])


@pytest.fixture(scope="session")
def frozen_harvest(frozen, frozen_graph):
    walk = frozen["walk"]
    cfg = WalkSearchConfig(
        T=walk["T"], beta=walk["beta"], c1=walk["c1"], R=walk["R"],
        target_covers=walk["target_covers"], profile="desk",
    )
    stream = RngStream(frozen["hypergraph_seed"]).child(*frozen["harvest_stream"])
    return harvest_distinct_covers(frozen_graph, cfg, stream)


@pytest.fixture(scope="session")
def frozen_experiment_config(manifest, frozen) -> ExperimentConfig:
    walk, decision = frozen["walk"], frozen["decision"]
    return ExperimentConfig(
        n=frozen["n"], k=frozen["k"], ell=frozen["ell"], rho=frozen["rho"],
        seed=manifest["accuracy_gate"]["experiment_seed"],
        trials=manifest["accuracy_gate"]["trials"],
        m=frozen["m"], profile="desk",
        T=walk["T"], beta=walk["beta"], c1=walk["c1"], R=walk["R"],
        target_covers=walk["target_covers"],
        parts=decision["parts"], shatter_floor=decision["shatter_floor"],
        threshold=decision["threshold"], repeats=decision["repeats"],
    )


@pytest.fixture(scope="session")
def frozen_report(frozen_experiment_config) -> dict:
    return run_experiment(frozen_experiment_config)


@pytest.fixture(scope="session")
def manifest_materializations(manifest):
    """(spec, hypergraph, implicit graph, materialized graph) per manifest entry."""
    out = []
    for spec in manifest["kikuchi_instances"]:
        stream = RngStream(spec["seed"]).child("hypergraph")
        h = sample_uniform_hypergraph(spec["n"], spec["k"], spec["m"], stream)
        graph = KikuchiGraph(h, spec["ell"])
        out.append((spec, h, graph, graph.materialize()))
    return out


@pytest.fixture(scope="session")
def small_instance() -> Hypergraph:
    """Dense little instance where walks collide fast; used by pipeline tests."""
    return sample_uniform_hypergraph(14, 4, 250, RngStream(5).child("hypergraph"))


@pytest.fixture(scope="session")
def small_harvest(small_instance):
    graph = KikuchiGraph(small_instance, 2)
    cfg = WalkSearchConfig(
        T=3, beta=0.05, c1=3.0, R=20000, target_covers=200, profile="desk"
    )
    return harvest_distinct_covers(graph, cfg, RngStream(5).child("harvest"))


@pytest.fixture()
def gadget3() -> Hypergraph:
    """Three edges covering each of six vertices exactly twice: one size-3 cover."""
    return Hypergraph(6, 4, [(0, 1, 2, 3), (0, 1, 4, 5), (2, 3, 4, 5)])


@pytest.fixture()
def gadget4() -> Hypergraph:
    """Four edges on eight vertices forming a single size-4 even cover."""
    return Hypergraph(8, 4, [(0, 1, 2, 3), (0, 1, 4, 5), (2, 3, 6, 7), (4, 5, 6, 7)])


@pytest.fixture()
def coverless() -> Hypergraph:
    """Disjoint edges: incidence matrix has full column rank, so no even cover."""
    return Hypergraph(12, 4, [(0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11)])
