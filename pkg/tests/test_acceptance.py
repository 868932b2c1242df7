"""Acceptance suite: ten frozen criteria, one test and one printed line each.

Seeds, sizes, and gates come from the bundled manifest
(``evencover/data/acceptance_manifest.json``); the calibration values
recorded there were measured once and pinned, and these tests re-run the
gates, not the calibration.  Expected values are computed independently in
each test (closed forms, exact Fractions, or frozen literals), never read
back from the code under test.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy import stats

from evencover import (
    KikuchiGraph,
    RngStream,
    WalkSearchConfig,
    run_experiment,
    sample_uniform_hypergraph,
)
from evencover.distinguish import (
    derive_theorem_params,
    is_shattered,
    planted_mean,
    evaluate_noised_polynomial,
    sample_equipartition,
    suggest_level,
)
from evencover.hypergraph import (
    Hypergraph,
    in_nullspace_span,
    nullspace_echelon,
    verify_even_cover,
)
from evencover.instances import planted_sign_matrix
from evencover.oracles import (
    kikuchi_equivalence_suite,
    low_degree_stationary_mass,
    mean_test,
)
from evencover.utils import canonical_json, strip_volatile
from evencover.walks import find_good_closed_walk, odd_colors

EXPECTED_CHECK_NAMES = [
    "degrees agree",
    "neighbor sets agree",
    "average degree matches closed form",
    "stationary sampler matches pi",
]


def _line(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")


def _single_shot_config(manifest) -> WalkSearchConfig:
    walk = manifest["frozen_point"]["walk"]
    # R and target_covers are irrelevant for a single find call
    return WalkSearchConfig(
        T=walk["T"], beta=walk["beta"], c1=walk["c1"],
        R=1, target_covers=1, profile="desk",
    )


def test_criterion_01_closed_walks_yield_even_covers(manifest):
    """Every harvested closed walk's odd-color profile is a genuine even cover."""
    sound = manifest["soundness"]
    cfg = WalkSearchConfig(
        T=sound["walk"]["T"], beta=sound["walk"]["beta"], c1=sound["walk"]["c1"],
        R=1, target_covers=1, profile="desk",
    )
    closed_total = 0
    covers_checked = 0
    for n in sound["n_values"]:
        m = round(math.comb(n, sound["k"]) / 4)
        for seed in sound["seeds"]:
            h = sample_uniform_hypergraph(
                n, sound["k"], m, RngStream(seed).child("hypergraph")
            )
            graph = KikuchiGraph(h, sound["ell"])
            echelon = nullspace_echelon(h)
            gen = RngStream(seed).child("soundness", n).generator()
            for _ in range(sound["starts_per_instance"]):
                v0 = graph.sample_stationary_vertex(gen)
                found = find_good_closed_walk(graph, v0, cfg, gen)
                if found is None:
                    continue
                closed_total += 1
                odd = odd_colors(found.closed)
                if not odd:
                    continue
                assert verify_even_cover(h, odd), (n, seed, odd)
                assert in_nullspace_span(echelon, odd), (n, seed, odd)
                covers_checked += 1
    ok = closed_total >= sound["min_closed_walks"]
    _line(1, ok, f"{closed_total} closed walks (gate {sound['min_closed_walks']}), "
                 f"{covers_checked} nontrivial covers all verified")
    assert ok


def test_criterion_02_implicit_graph_matches_materialized(manifest, manifest_materializations):
    """The implicit Kikuchi queries agree with materialized ground truth."""
    gate = manifest["kikuchi_gate"]
    failed = []
    for spec, h, _graph, _mat in manifest_materializations:
        results = kikuchi_equivalence_suite(
            h, spec["ell"], RngStream(spec["seed"]).child("oracle"),
            stationary_samples=gate["stationary_samples"],
        )
        assert [r.name for r in results] == EXPECTED_CHECK_NAMES
        failed.extend(f"{spec}: {r.describe()}" for r in results if not r.passed)
    ok = not failed
    _line(2, ok, f"{len(manifest_materializations)} instances x 4 checks at "
                 f"{gate['stationary_samples']} samples" if ok else "; ".join(failed))
    assert ok, failed


def test_criterion_03_sign_product_statistics(manifest, gadget3, gadget4):
    """Cover sign products average 0 under null and rho^|F| under planting."""
    cfg = manifest["sign_stats"]
    resamples = cfg["resamples"]
    root = RngStream(cfg["seed"])
    gates = []
    for h, cover in ((gadget3, (0, 1, 2)), (gadget4, (0, 1, 2, 3))):
        assert verify_even_cover(h, cover)
        assert len(cover) in cfg["cover_sizes"]
        z = (root.child("z", h.n).generator().integers(0, 2, size=h.n) * 2 - 1).astype(np.int8)
        idx = np.asarray(cover)
        # rho = 0 planting draws each sign uniform +-1: exactly the null law
        null_products = planted_sign_matrix(
            h, z, 0.0, root.child("null", h.n), resamples
        )[:, idx].prod(axis=1)
        gates.append(mean_test(f"null product, |F|={len(cover)}", null_products, 0.0))
        for rho in cfg["rhos"]:
            products = planted_sign_matrix(
                h, z, rho, root.child("planted", h.n, str(rho)), resamples
            )[:, idx].prod(axis=1)
            gates.append(mean_test(
                f"planted product, rho={rho}, |F|={len(cover)}",
                products, rho ** len(cover),
            ))
    ok = all(g.passed for g in gates)
    detail = (f"{len(gates)} mean gates at 3 sigma, {resamples} resamples each"
              if ok else "; ".join(g.describe() for g in gates if not g.passed))
    _line(3, ok, detail)
    assert ok, [g.describe() for g in gates if not g.passed]


def test_criterion_04_noised_polynomial_means(manifest, frozen_hypergraph, frozen_harvest):
    """The noised statistic averages 0 under null, sum (rho/2)^|C| planted."""
    cfg = manifest["noised_means"]
    covers = list(frozen_harvest.covers[: cfg["covers_used"]])
    assert len(covers) == cfg["covers_used"]
    rho = cfg["rho"]
    root = RngStream(cfg["seed"])
    h = frozen_hypergraph
    z = (root.child("z").generator().integers(0, 2, size=h.n) * 2 - 1).astype(np.int8)
    evaluations = cfg["evaluations"]
    null_rows = planted_sign_matrix(h, z, 0.0, root.child("null-signs"), evaluations)
    planted_rows = planted_sign_matrix(h, z, rho, root.child("planted-signs"), evaluations)
    gen = root.child("xi").generator()
    null_values = [evaluate_noised_polynomial(covers, row, gen) for row in null_rows]
    planted_values = [evaluate_noised_polynomial(covers, row, gen) for row in planted_rows]
    gates = [
        mean_test("null noised statistic", null_values, 0.0),
        mean_test("planted noised statistic", planted_values, planted_mean(covers, rho)),
    ]
    ok = all(g.passed for g in gates)
    detail = ("; ".join(g.describe() for g in gates) if not ok else
              f"both means within 3 sigma over {evaluations} evaluations, "
              f"planted target {planted_mean(covers, rho):.3f}")
    _line(4, ok, detail)
    assert ok, [g.describe() for g in gates if not g.passed]


def test_criterion_05_collision_rate_at_frozen_point(manifest, frozen_graph):
    """Fresh stationary starts collide often enough to harvest covers."""
    recheck = manifest["collision_recheck"]
    cfg = _single_shot_config(manifest)
    gen = RngStream(recheck["seed"]).child(*recheck["stream"]).generator()
    starts = recheck["starts"]
    hits = 0
    for _ in range(starts):
        v0 = frozen_graph.sample_stationary_vertex(gen)
        if find_good_closed_walk(frozen_graph, v0, cfg, gen) is not None:
            hits += 1
    # one-sided Clopper-Pearson lower bound at the recorded confidence
    alpha = 1.0 - recheck["confidence"]
    lower = float(stats.beta.ppf(alpha, hits, starts - hits + 1)) if hits else 0.0
    ok = lower >= recheck["min_rate"]
    _line(5, ok, f"{hits}/{starts} starts collided; {recheck['confidence']:.0%} "
                 f"lower bound {lower:.3f} vs gate {recheck['min_rate']}")
    assert ok


def test_criterion_06_end_to_end_accuracy(manifest, frozen_report):
    """Paired trials at the frozen point decide well above chance."""
    gate = manifest["accuracy_gate"]
    assert frozen_report["status"] == "ok"
    agg = frozen_report["aggregate"]
    assert agg["decisions"] == 2 * gate["trials"]
    ok = agg["correct"] >= gate["min_correct"]
    _line(6, ok, f"{agg['correct']}/{agg['decisions']} correct decisions "
                 f"(gate {gate['min_correct']}; rejects accuracy <= 0.8 at 95%)")
    assert ok


def test_criterion_07_shattering_rate(manifest):
    """Equipartitions shatter a size-T cover at least as often as 2 e^-T."""
    cfg = manifest["shattering"]
    samples = cfg["samples"]
    lines = []
    ok = True
    for T in cfg["T_values"]:
        n_items = cfg["edges_per_part"] * T
        cover = tuple(range(T))
        gen = RngStream(cfg["seed"]).child("shatter", T).generator()
        hits = 0
        for _ in range(samples):
            if is_shattered(cover, sample_equipartition(n_items, T, gen)):
                hits += 1
        rate = hits / samples
        # exact rate: sequentially place cover items into unused parts
        exact = Fraction(1)
        for i in range(1, T):
            exact *= Fraction(n_items - cfg["edges_per_part"] * i, n_items - i)
        sigma_exact = math.sqrt(float(exact) * (1 - float(exact)) / samples)
        assert abs(rate - float(exact)) <= 3 * sigma_exact, (T, rate, float(exact))
        bound = 2.0 * math.exp(-T)
        sigma_bound = math.sqrt(bound * (1 - bound) / samples)
        ok = ok and rate >= bound - 3 * sigma_bound
        lines.append(f"T={T}: {rate:.4f} >= {bound:.4f}")
    _line(7, ok, "; ".join(lines))
    assert ok


def test_criterion_08_deterministic_replay(frozen_experiment_config, frozen_report):
    """Re-running the frozen experiment reproduces the report bit for bit."""
    again = run_experiment(frozen_experiment_config)
    same_digest = again["digest"] == frozen_report["digest"]
    same_bytes = (
        canonical_json(strip_volatile(again)) == canonical_json(strip_volatile(frozen_report))
    )
    ok = same_digest and same_bytes
    _line(8, ok, f"digest {frozen_report['digest'][:12]} reproduced; "
                 f"canonical JSON {'identical' if same_bytes else 'DIFFERS'}")
    assert ok


def test_criterion_09_low_degree_mass_below_beta(manifest, manifest_materializations):
    """Stationary mass on low-degree vertices stays strictly below beta."""
    betas = [Fraction(text) for text in manifest["min_degree_betas"]]
    worst = Fraction(0)
    for spec, _h, _graph, mat in manifest_materializations:
        for beta in betas:
            mass = low_degree_stationary_mass(mat, beta)
            assert mass < beta, (spec, str(beta), str(mass))
            worst = max(worst, mass / beta)
    ok = True
    _line(9, ok, f"{len(manifest_materializations)} instances x {len(betas)} betas, "
                 f"worst mass/beta = {float(worst):.3f}")
    assert ok


def test_criterion_10_parameter_wiring(manifest, frozen):
    """The recorded wiring formulas reproduce their frozen check values."""
    checks = manifest["feasibility_checks"]
    eps_case = checks["epsilon_case"]
    derived = derive_theorem_params(100, eps_case["k"], 1000, eps_case["k"] // 2, eps_case["rho"])
    eps_ok = abs(derived.epsilon - eps_case["expected"]) <= eps_case["tolerance"]

    clamp = checks["clamp_case"]
    level = suggest_level(clamp["n"], clamp["k"], clamp["m"], clamp["rho"])
    clamp_ok = level == clamp["k"]

    gap_case = checks["gap_case"]
    gap = derive_theorem_params(
        gap_case["n"], gap_case["k"], gap_case["m"], gap_case["ell"], gap_case["rho"]
    )
    gap_ok = (
        0.0 <= gap.degree_gap < 1.0
        and not gap.paper_feasible
        and gap.desk_feasible
        and gap.T == 0
    )

    degenerate = derive_theorem_params(frozen["n"], frozen["k"], frozen["m"], frozen["ell"], 1.0)
    degen_ok = (
        degenerate.epsilon == 0.0
        and not degenerate.paper_feasible
        and any("epsilon = 0" in note for note in degenerate.notes)
    )

    ok = eps_ok and clamp_ok and gap_ok and degen_ok
    _line(10, ok, f"epsilon={derived.epsilon!r} (want {eps_case['expected']}), "
                  f"suggest_level={level} (want {clamp['k']}), "
                  f"frozen-point degree_gap={gap.degree_gap:.2e} with paper infeasible, "
                  f"rho=1 degenerates")
    assert ok, (eps_ok, clamp_ok, gap_ok, degen_ok)
