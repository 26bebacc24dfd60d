"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``. Random inputs are drawn
from the package's own counter-based generator with fixed seeds, so every
run checks the same frozen instances.
"""

import itertools
import json
import math
import time
from fractions import Fraction
from pathlib import Path

import pytest

from radolab import norms
from radolab.back_and_forth import init_session, step, verify
from radolab.balls import l1_four_ball_probe, l1_two_ball_witness, two_unit_decomposition
from radolab.balls import StepFn
from radolab.cli import comparable_report, main as cli_main
from radolab.dense_sets import build_rado
from radolab.graphs import dichotomy_report, sample_graph
from radolab.norms import L2, LINF, lp, lp_power_distance, sup_distance
from radolab.renorm import (
    RenormModel,
    gauge,
    gauge_lower_bound,
    nearest_extreme_distances,
    sandwich_check,
)
from radolab.rng import CounterStream
from radolab.step_isometry import (
    StepIsoMap1D,
    c0_counterexample,
    check_step_isometry,
    enumerate_step_isometric_bijections,
    forced_coordinate_witness,
)
from radolab.vectors import FiniteSupportVector, basis, fsv, from_coords, zero_vector

F = Fraction


def _record(name: str, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, detail


def _budget(name: str, started: float, limit: float) -> str:
    elapsed = time.monotonic() - started
    assert elapsed < limit, f"{name} took {elapsed:.1f}s, budget {limit}s"
    return f"{elapsed:.1f}s < {limit:.0f}s"


def _random_c00_subset(stream: CounterStream) -> list[FiniteSupportVector]:
    points: list[FiniteSupportVector] = []
    seen = set()
    for _ in range(stream.randint(2, 6)):
        support = {stream.randint(1, 10) for _ in range(stream.randint(1, 4))}
        v = fsv({i: F(stream.randint(-30, 30), stream.randint(1, 12)) for i in support})
        if v not in seen:
            seen.add(v)
            points.append(v)
    return points


def test_criterion_01_c0_counterexample_exactness():
    started = time.monotonic()
    for n in range(1, 51):
        img = c0_counterexample(basis(n).scale(F(1, n + 1)))
        assert sup_distance(img, zero_vector()) == 1 - F(1, n + 1), f"norm identity at n={n}"
    stream = CounterStream(101)
    checked = 0
    for _ in range(500):
        pts = _random_c00_subset(stream)
        imgs = [c0_counterexample(v) for v in pts]
        violation = check_step_isometry(pts, imgs, LINF)
        assert violation is None, f"floor violation on subset {checked}: {violation}"
        checked += 1
    _record(
        "1 c0-counterexample exactness",
        True,
        f"50 exact norms, {checked} subsets clean, {_budget('c1', started, 10.0)}",
    )


def test_criterion_02_forced_coordinate_witness():
    started = time.monotonic()
    for n in range(1, 51):
        grid = [F(1, 10 * (n + 1)), F(1, 100 * (n + 1))]
        got = forced_coordinate_witness(n, grid)
        assert got == 1 - F(1, n + 1), f"n={n}: got {got}"
    _record(
        "2 forced-coordinate witness",
        True,
        f"exact for n <= 50, {_budget('c2', started, 5.0)}",
    )


def test_criterion_03_step_isometry_oracle_equivalence():
    started = time.monotonic()
    stream = CounterStream(303)
    cases = 0
    for space_dim in (1, 2):
        norm = norms.L1 if space_dim == 1 else LINF
        for _ in range(100):
            n_pts = stream.randint(2, 6)
            pts = []
            seen = set()
            while len(pts) < n_pts:
                v = fsv(
                    {
                        k: F(stream.randint(-20, 20), stream.randint(1, 6))
                        for k in range(1, space_dim + 1)
                    }
                )
                if v not in seen:
                    seen.add(v)
                    pts.append(v)
            fast = enumerate_step_isometric_bijections(pts, norm)
            direct = [
                perm
                for perm in itertools.permutations(range(len(pts)))
                if check_step_isometry(pts, [pts[i] for i in perm], norm) is None
            ]
            assert set(fast) == set(direct), f"case {cases}: {fast} vs {direct}"
            cases += 1
    _record(
        "3 rigidity oracle equivalence",
        True,
        f"{cases} point sets agree, {_budget('c3', started, 30.0)}",
    )


def _random_step_map(stream: CounterStream) -> StepIsoMap1D:
    pts = [(F(0), F(0))]
    for t, g in zip(
        sorted({F(stream.randint(1, 23), 24) for _ in range(stream.randint(0, 4))}),
        sorted({F(stream.randint(1, 23), 24) for _ in range(5)}),
    ):
        if t > pts[-1][0] and g > pts[-1][1] and g < 1:
            pts.append((t, g))
    pts.append((F(1), F(1)))
    sign = 1 if stream.randint(0, 1) else -1
    offset = F(stream.randint(-12, 12), stream.randint(1, 4))
    return StepIsoMap1D(tuple(pts), sign=sign, offset=offset)


def test_criterion_04_integer_distance_preservation():
    started = time.monotonic()
    stream = CounterStream(404)
    for trial in range(1000):
        h = _random_step_map(stream)
        x = F(stream.randint(-120, 120), stream.randint(1, 24))
        k = stream.randint(0, 10)
        assert abs(h.evaluate(x + k) - h.evaluate(x)) == k, f"trial {trial}: gap {k} at {x}"
    _record(
        "4 integer-distance preservation",
        True,
        f"1000 maps exact, {_budget('c4', started, 30.0)}",
    )


def test_criterion_05_back_and_forth_soundness():
    started = time.monotonic()
    rado = build_rado(2)
    pts = [pt.point for pt in rado.points]
    ids = [pt.index for pt in rado.points]
    g1 = sample_graph(pts, L2, F(1, 2), 1, ids=ids)
    g2 = sample_graph(pts, L2, F(1, 2), 2, ids=ids)
    session = init_session(rado, g1, g2)
    accepted = 0
    stall = None
    for _ in range(10):
        rec = step(session)
        if rec.stall_reason is not None:
            stall = rec
            break
        report = verify(session)
        assert report.all_passed, f"verify failed after step {accepted + 1}: {report}"
        accepted += 1
    if accepted < 3:
        assert stall is not None and stall.failed_point_mismatch >= 1, (
            "fewer than 3 steps must be explained by candidate exhaustion"
        )
    stall_note = "no stall" if stall is None else (
        f"stall after {accepted}: {stall.failed_point_mismatch} point mismatches, "
        f"{stall.failed_adjacency} adjacency rejections"
    )
    _record(
        "5 back-and-forth soundness",
        True,
        f"{accepted} accepted steps all verified; {stall_note}; "
        f"{_budget('c5', started, 20.0)}",
    )


def test_criterion_06_l1_ball_lemmas():
    started = time.monotonic()
    stream = CounterStream(606)
    for trial in range(50):
        lam = F(stream.randint(1, 15), 32)
        mu = lam + F(stream.randint(1, 16), 32)  # lam < mu <= 31/32 < 1
        f = StepFn.constant(64, 2 * lam)
        g1, g2 = l1_two_ball_witness(f, mu)  # all five identities asserted exactly inside
        assert (g1 - g2).l1_norm() == 2 * mu, f"trial {trial}"
    probes = []
    for delta in (F(1, 2), F(1, 4)):
        res = l1_four_ball_probe(delta, 64, 100_000, seed=9)
        assert res.members_found > 0
        assert res.max_norm is not None and res.max_norm < delta, (
            f"member of norm {res.max_norm} breaches the bound {delta}"
        )
        probes.append(f"delta={delta}: max {float(res.max_norm):.4f} over {res.members_found}")
    _record(
        "6 L1 two-ball and four-ball",
        True,
        f"50 exact witnesses; {'; '.join(probes)}; {_budget('c6', started, 60.0)}",
    )


def test_criterion_07_two_unit_decomposition():
    started = time.monotonic()
    tol = F(1, 10**9)
    y = two_unit_decomposition(from_coords(["1/2", 0]), L2, tol)
    assert abs(float(y.get(1)) - 0.25) <= 1e-9
    assert abs(float(y.get(2)) - math.sqrt(15) / 4) <= 1e-9
    stream = CounterStream(707)
    done = 0
    while done < 100:
        p = (2, 3, 4)[stream.randint(0, 2)]
        d = stream.randint(2, 10)
        x = fsv({k: F(stream.randint(-4, 4), 6 * d) for k in range(1, d + 1)})
        if x.is_zero() or not 0 < lp_power_distance(x, zero_vector(), p) < 1:
            continue
        yv = two_unit_decomposition(x, lp(p), tol, dim=d)
        ny = lp_power_distance(yv, zero_vector(), p)
        nd = lp_power_distance(x - yv, zero_vector(), p)
        assert (1 - tol) ** p <= ny <= (1 + tol) ** p, f"|‖y‖-1| > tol at case {done}"
        assert (1 - tol) ** p <= nd <= (1 + tol) ** p, f"|‖x-y‖-1| > tol at case {done}"
        done += 1
    _record(
        "7 two-unit decomposition",
        True,
        f"frozen case + {done} random cases within 1e-9, {_budget('c7', started, 10.0)}",
    )


def test_criterion_08_renormed_gauge():
    started = time.monotonic()
    tol = F(1, 10**4)
    model = RenormModel(10)
    opts = dict(restarts=8, iterations=1200)
    for atom in model.atoms():
        res = gauge(atom, model, tol, **opts)
        assert abs(res.value - 1.0) <= float(tol), f"gauge({atom}) = {res.value}"
    # independent lower-bound oracle at small truncation
    small = RenormModel(3)
    for atom in small.atoms():
        lb = gauge_lower_bound(atom, small)
        assert lb >= 1.0 - 1e-9, f"oracle bound {lb} below 1"
    stream = CounterStream(808)
    for _ in range(100):
        x = fsv({k: F(stream.randint(-12, 12), 5) for k in range(0, 11)})
        rep = sandwich_check(x, model, tol, restarts=6, iterations=600)
        assert rep.passed, rep.witness
    table = nearest_extreme_distances(model, tol, net_size=64, seed=0, restarts=6, iterations=900)
    rows = {r.label: r for r in table}
    for k in range(2, 11):
        expected = float(F(1, 2 * k) + F(1, 2 * k + 1))
        for label in (f"plus{k}", f"minus{k}", f"neg-plus{k}", f"neg-minus{k}"):
            got = rows[label].partner_gauge_distance
            assert abs(got - expected) <= float(tol), f"{label}: partner {got} vs {expected}"
    isolated = sorted(r.label for r in table if r.isolated_at_half)
    assert isolated == ["neg-plus1", "plus1"], f"isolated set is {isolated}"
    _record(
        "8 renormed gauge",
        True,
        "20 atom gauges = 1, oracle bounds at n=3, 100 sandwiches, "
        f"partner distances matched, isolated = +/-(e0 + e1/2), {_budget('c8', started, 120.0)}",
    )


CLI_CONFIGS: list[tuple[str, list[str]]] = [
    ("rado-build", ["--stages", "2"]),
    ("sample-graph", ["--norm", "l2", "--p", "1/2", "--seed", "7", "--format", "json"]),
    ("back-and-forth", ["--stages", "2", "--p", "1/2", "--seeds", "1,2", "--max-steps", "6"]),
    ("dichotomy", ["--stop", "2", "--spacing", "1/4", "--p", "1/2", "--seed", "3", "--k-max", "3"]),
    ("check-step-iso", ["--norm", "l1"]),
    ("enumerate-step-iso", ["--norm", "l1"]),
    ("c0-counterexample", ["--max-n", "8"]),
    ("forced-coordinate", ["--n", "2", "--eps-grid", "1/100,1/1000"]),
    ("l1-balls", ["--mode", "four", "--delta", "1/2", "--grid-size", "16", "--samples", "1000", "--seed", "2"]),
    ("two-unit", ["--coords", "1/2,0", "--p", "2"]),
    ("strongly-extreme", ["--dim", "2", "--delta", "1/4", "--samples", "200", "--seed", "4"]),
    ("davis-gauge", ["--n", "2", "--coords", "0,1,0", "--tol", "1/1000", "--restarts", "4", "--iterations", "300"]),
    ("davis-table", ["--n", "2", "--tol", "1/1000", "--net", "8", "--seed", "0", "--restarts", "4", "--iterations", "300"]),
    ("no-repeat-gen", ["--dim", "2", "--count", "3", "--norm", "l2", "--seed", "5", "--denom-bound", "4"]),
    ("suite", ["--filter", "floor-distance-consistency", "--seed", "1"]),
]


def test_criterion_09_cli_determinism(tmp_path: Path):
    started = time.monotonic()
    points = tmp_path / "points.jsonl"
    points.write_text(
        "\n".join(
            json.dumps(v.to_json_obj())
            for v in (from_coords([0]), from_coords(["1/3"]), from_coords([1]))
        )
        + "\n"
    )
    file_args = {
        "sample-graph": ["--points-file", str(points)],
        "check-step-iso": ["--points-file", str(points), "--images-file", str(points)],
        "enumerate-step-iso": ["--points-file", str(points)],
    }
    for command, args in CLI_CONFIGS:
        full = [command, *args, *file_args.get(command, [])]
        reports = []
        for run_tag in ("a", "b"):
            out = tmp_path / f"{command}-{run_tag}"
            code = cli_main([*full, "--out", str(out)])
            assert code == 0, f"{command} exited {code}"
            reports.append((out / "report.json").read_text())
        assert comparable_report(reports[0]) == comparable_report(reports[1]), (
            f"{command}: reports differ between identical runs"
        )
    _record(
        "9 CLI determinism",
        True,
        f"{len(CLI_CONFIGS)} commands byte-stable, {_budget('c9', started, 30.0)}",
    )


def _line_grid(spacing: Fraction, stop: Fraction) -> list[FiniteSupportVector]:
    pts = []
    t = F(0)
    while t <= stop:
        pts.append(fsv({1: t}))
        t += spacing
    return pts


def test_criterion_10_dichotomy_diagnostic():
    started = time.monotonic()
    # statistical part: p = 1/2 violation rate at k = 2 under refinement
    trend_hits = 0
    rates_by_seed = {}
    for seed in range(1, 6):
        rates = []
        for spacing in (F(1, 5), F(1, 10), F(1, 20)):
            pts = _line_grid(spacing, F(3))
            g = sample_graph(pts, L2, F(1, 2), seed)
            row = dichotomy_report(g, dict(zip(g.point_ids, pts)), 2)[0]
            rates.append(row.norm_close_graph_far / row.pairs_tested)
        rates_by_seed[seed] = [round(r, 4) for r in rates]
        if rates[0] >= rates[1] >= rates[2]:
            trend_hits += 1
    print(f"\np=1/2 refinement rates by seed: {rates_by_seed}; monotone in {trend_hits}/5 seeds")

    # hard part: p = 1 on the 0.05 grid of [0,3] must show zero violations
    pts = _line_grid(F(1, 20), F(3))
    g = sample_graph(pts, L2, F(1), seed=0)
    rows = dichotomy_report(g, dict(zip(g.point_ids, pts)), 3)
    violations = {r.k: r.violations for r in rows}
    elapsed = _budget("c10", started, 60.0)
    ok = violations[2] == 0 and violations[3] == 0
    _record(
        "10 dichotomy diagnostic",
        ok,
        f"p=1 violations at k=2: {violations[2]}, k=3: {violations[3]} "
        f"(knife-edge pairs at distance k - 1/20 have no 2-hop path on an even grid); "
        f"trend {trend_hits}/5; {elapsed}",
    )
