"""Cross-module invariant harness.

Each construction in scope is bound to at least one executable check; the
registry refuses to report success when a required topic has no registered
check (the coverage law is self-auditing, not convention). Hard checks are
exact-arithmetic assertions and fail the suite; statistical checks report
rates and fail only when a hard bound inside them is crossed.

Checks deliberately call library functions through their modules (for
example ``norms.floor_distance``) so that mutation tests can monkeypatch a
single operation and watch the right checks go red.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable
from xml.sax.saxutils import escape

from radolab import back_and_forth, balls, dense_sets, graphs, norms, renorm, step_isometry
from radolab.rng import CounterStream
from radolab.vectors import FiniteSupportVector, basis, fsv, from_coords

__all__ = ["InvariantCheck", "CheckResult", "SuiteReport", "REQUIRED_TOPICS", "run_suite"]


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    kind: str  # "hard" | "statistical"
    passed: bool
    trials: int
    detail: str

    def to_json_obj(self) -> dict:
        return {
            "check_id": self.check_id,
            "kind": self.kind,
            "passed": self.passed,
            "trials": self.trials,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class InvariantCheck:
    check_id: str
    kind: str
    description: str
    run: Callable[[int], tuple[bool, int, str]]  # seed -> (passed, trials, detail)


def _random_vector(stream: CounterStream, dim: int, denom: int = 6) -> FiniteSupportVector:
    return fsv(
        {
            k: Fraction(stream.randint(-3 * denom, 3 * denom), stream.randint(1, denom))
            for k in range(1, dim + 1)
        }
    )


# -- core numerics -------------------------------------------------------------


def _check_floor_consistency(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=101)
    trials = 0
    for norm in (norms.L1, norms.L2, norms.lp(3), norms.LINF):
        for _ in range(40):
            trials += 1
            x = _random_vector(stream, 3)
            y = _random_vector(stream, 3)
            k = norms.floor_distance(x, y, norm)
            ok = norms.distance_lt(x, y, Fraction(k + 1), norm) and not norms.distance_lt(
                x, y, Fraction(k), norm
            )
            if not ok or k < 0:
                return False, trials, f"floor law fails at k={k} under {norm.label()}"
    return True, trials, "floor(k) <=> lt(k+1) and not lt(k)"


def _check_triangle(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=102)
    trials = 0
    for norm in (norms.L1, norms.L2, norms.LINF):
        for _ in range(40):
            trials += 1
            x, y, z = (_random_vector(stream, 3) for _ in range(3))
            r1 = Fraction(stream.randint(0, 40), stream.randint(1, 5))
            r2 = Fraction(stream.randint(0, 40), stream.randint(1, 5))
            if norms.distance_lt(x, z, r1, norm) and norms.distance_lt(z, y, r2, norm):
                if not norms.distance_lt(x, y, r1 + r2, norm):
                    return False, trials, f"triangle breach under {norm.label()}"
    return True, trials, "lt(x,z,r1) and lt(z,y,r2) imply lt(x,y,r1+r2)"


def _check_symmetry_translation(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=103)
    trials = 0
    for norm in (norms.L2, norms.LINF):
        for _ in range(40):
            trials += 1
            x = _random_vector(stream, 3)
            y = _random_vector(stream, 3)
            z = _random_vector(stream, 3)
            k = norms.floor_distance(x, y, norm)
            if norms.floor_distance(y, x, norm) != k:
                return False, trials, "floor not symmetric"
            if norms.floor_distance(x + z, y + z, norm) != k:
                return False, trials, "floor not translation invariant"
    return True, trials, "floor symmetric and translation invariant"


def _check_permutation_invariance(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=104)
    trials = 0
    for norm in (norms.L1, norms.L2, norms.LINF):
        for _ in range(40):
            trials += 1
            x = _random_vector(stream, 4)
            y = _random_vector(stream, 4)
            perm = {1: 3, 3: 1, 2: 4, 4: 2}
            xp, yp = x.relabel(perm), y.relabel(perm)
            if norms.floor_distance(x, y, norm) != norms.floor_distance(xp, yp, norm):
                return False, trials, f"permutation changes floors under {norm.label()}"
            r = Fraction(stream.randint(0, 30), stream.randint(1, 4))
            if norms.distance_lt(x, y, r, norm) != norms.distance_lt(xp, yp, r, norm):
                return False, trials, "permutation changes strict comparison"
    return True, trials, "coordinate permutations preserve floors and comparisons"


# -- graph model ----------------------------------------------------------------


def _grid_points(spacing: Fraction, stop: Fraction) -> list[FiniteSupportVector]:
    pts = []
    t = Fraction(0)
    while t <= stop:
        pts.append(fsv({1: t}) if t != 0 else FiniteSupportVector())
        t += spacing
    return pts


def _check_edges_eligible(seed: int) -> tuple[bool, int, str]:
    pts = _grid_points(Fraction(1, 4), Fraction(3))
    g = graphs.sample_graph(pts, norms.L2, Fraction(3, 4), seed)
    table = dict(zip(g.point_ids, pts))
    for a, b in g.edges:
        if not norms.distance_lt(table[a], table[b], Fraction(1), norms.L2):
            return False, len(g.edges), f"ineligible edge ({a},{b})"
    g1 = graphs.sample_graph(pts, norms.L2, Fraction(1, 3), seed)
    g2 = graphs.sample_graph(pts, norms.L2, Fraction(2, 3), seed)
    if not g1.edges <= g2.edges:
        return False, len(g.edges), "edge set not monotone in p at fixed seed"
    g_again = graphs.sample_graph(pts, norms.L2, Fraction(3, 4), seed)
    if g_again.edges != g.edges:
        return False, len(g.edges), "resampling with identical inputs changed the edges"
    return True, len(g.edges), "edges eligible, monotone in p, reproducible"


def _check_dichotomy_trend(seed: int) -> tuple[bool, int, str]:
    rates = []
    for spacing in (Fraction(1, 5), Fraction(1, 10)):
        pts = _grid_points(spacing, Fraction(3))
        g = graphs.sample_graph(pts, norms.L2, Fraction(1, 2), seed)
        rows = graphs.dichotomy_report(g, dict(zip(g.point_ids, pts)), 2)
        row = rows[0]
        if row.graph_close_norm_far != 0:
            return False, row.pairs_tested, "graph-close/norm-far direction must be empty"
        rates.append(row.norm_close_graph_far / row.pairs_tested)
    detail = f"norm-close/graph-far rate at k=2: {rates[0]:.4f} -> {rates[1]:.4f} under refinement"
    return True, 2, detail


# -- step isometries ------------------------------------------------------------


def _random_1d_map(stream: CounterStream) -> step_isometry.StepIsoMap1D:
    cuts = sorted({Fraction(stream.randint(1, 11), 12) for _ in range(stream.randint(0, 3))})
    vals = sorted({Fraction(stream.randint(1, 11), 12) for _ in range(len(cuts))})
    pts = [(Fraction(0), Fraction(0))]
    for t, g in zip(cuts, vals):
        if t > pts[-1][0] and g > pts[-1][1]:
            pts.append((t, g))
    pts.append((Fraction(1), Fraction(1)))
    sign = 1 if stream.randint(0, 1) else -1
    offset = Fraction(stream.randint(-6, 6), stream.randint(1, 3))
    return step_isometry.StepIsoMap1D(tuple(pts), sign=sign, offset=offset)


def _check_integer_distances(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=105)
    trials = 0
    for _ in range(120):
        trials += 1
        h = _random_1d_map(stream)
        x = Fraction(stream.randint(-60, 60), stream.randint(1, 12))
        k = stream.randint(0, 10)
        if abs(h.evaluate(x + k) - h.evaluate(x)) != k:
            return False, trials, f"integer gap {k} not preserved at x={x}"
    return True, trials, "integer gaps map to the same integer gaps, exactly"


def _check_large_distance_promotion(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=106)
    trials = 0
    for _ in range(25):
        trials += 1
        h = _random_1d_map(stream)
        xs = sorted({Fraction(stream.randint(-30, 30), stream.randint(1, 6)) for _ in range(5)})
        pts = [fsv({1: x}) for x in xs]
        imgs = [fsv({1: h.evaluate(x)}) for x in xs]
        if step_isometry.check_step_isometry(pts, imgs, norms.L1) is not None:
            return False, trials, "1d map is not a step-isometry"
        for m0 in (1, 2, 3):
            if step_isometry.check_step_isometry_large(pts, imgs, norms.L1, m0) is not None:
                return False, trials, f"step-isometry fails the threshold form at m0={m0}"
    # converse direction: the stored example passes thresholds >= 2 but not floors
    pts = [FiniteSupportVector(), fsv({1: Fraction(1, 2)})]
    imgs = [FiniteSupportVector(), fsv({1: Fraction(3, 2)})]
    if step_isometry.check_step_isometry_large(pts, imgs, norms.L1, 2) is not None:
        return False, trials, "threshold-only example unexpectedly fails at m0=2"
    if step_isometry.check_step_isometry(pts, imgs, norms.L1) is None:
        return False, trials, "threshold-only example should not be a full step-isometry"
    return True, trials, "floors imply thresholds; the converse has a stored counterexample"


def _random_c00(stream: CounterStream) -> FiniteSupportVector:
    support = {stream.randint(1, 9) for _ in range(stream.randint(1, 4))}
    return fsv(
        {i: Fraction(stream.randint(-24, 24), stream.randint(1, 8)) for i in support}
    )


def _check_sup_norm_map(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=107)
    trials = 0
    for _ in range(60):
        trials += 1
        pts = []
        seen = set()
        for _ in range(stream.randint(2, 5)):
            v = _random_c00(stream)
            if v not in seen:
                seen.add(v)
                pts.append(v)
        imgs = [step_isometry.c0_counterexample(v) for v in pts]
        if step_isometry.check_step_isometry(pts, imgs, norms.LINF) is not None:
            return False, trials, "coordinate-wise sup-norm map broke a floor"
        for v in pts:
            if step_isometry.c0_counterexample_inverse(imgs[pts.index(v)]) != v:
                return False, trials, "inverse does not round-trip"
    for n in (1, 2, 5, 9):
        v = basis(n).scale(Fraction(1, n + 1))
        img = step_isometry.c0_counterexample(v)
        if norms.sup_distance(img, FiniteSupportVector()) != 1 - Fraction(1, n + 1):
            return False, trials, f"discontinuity witness norm wrong at n={n}"
        w = step_isometry.forced_coordinate_witness(n, [Fraction(1, 100), Fraction(1, 1000)])
        if w != 1 - Fraction(1, n + 1):
            return False, trials, f"forced coordinate at n={n} is {w}"
    return True, trials, "sup-norm map is floor-preserving; pinch values match the closed form"


def _check_decomposition(seed: int) -> tuple[bool, int, str]:
    probes = [Fraction(j, 60) for j in range(0, 61)] + [Fraction(3, 2), Fraction(-7, 3)]
    model = step_isometry.decompose_coordinatewise(step_isometry.c0_counterexample, 5, probes)
    if not isinstance(model, step_isometry.CoordinateStepIso):
        return False, 1, f"decomposition rejected the coordinate-wise map: {model}"
    table = model.map_table()
    for k in range(1, 6):
        if table.get(k, step_isometry.identity_map()).canonical() != step_isometry.pinch_unit_map(k).canonical():
            return False, 1, f"recovered 1d map at coordinate {k} differs"
    swapped = step_isometry.CoordinateStepIso(
        permutation=((1, 2), (2, 1)),
        maps=((1, step_isometry.pinch_unit_map(2)),),
    )
    recovered = step_isometry.decompose_coordinatewise(
        lambda v: step_isometry.apply_coordinatewise(swapped, v), 3, probes
    )
    if not isinstance(recovered, step_isometry.CoordinateStepIso):
        return False, 2, "swap-and-pinch map not recovered"
    if dict(recovered.permutation).get(1) != 2:
        return False, 2, "permutation not detected"
    return True, 2, "probe decomposition recovers constructed coordinate-wise maps"


def _check_rigidity_oracle(seed: int) -> tuple[bool, int, str]:
    import itertools

    stream = CounterStream(seed, stream=108)
    trials = 0
    for _ in range(10):
        trials += 1
        xs = sorted({Fraction(stream.randint(0, 24), stream.randint(1, 4)) for _ in range(4)})
        pts = [fsv({1: x}) for x in xs]
        found = step_isometry.enumerate_step_isometric_bijections(pts, norms.L1)
        direct = [
            perm
            for perm in itertools.permutations(range(len(pts)))
            if step_isometry.check_step_isometry(pts, [pts[i] for i in perm], norms.L1) is None
        ]
        if set(found) != set(direct):
            return False, trials, "backtracking oracle disagrees with direct filtering"
        if tuple(range(len(pts))) not in found:
            return False, trials, "identity missing from the oracle output"
    return True, trials, "oracle equals brute-force filtering on sampled sets"


# -- dense sets -----------------------------------------------------------------


def _check_staged_set(seed: int) -> tuple[bool, int, str]:
    rado = dense_sets.build_rado(2)
    again = dense_sets.build_rado(2)
    if rado.to_jsonl() != again.to_jsonl():
        return False, len(rado), "construction is not deterministic"
    q2 = set(dense_sets.gen_Q(2))
    for pt in rado.points:
        sup = pt.point.support
        if sup[-1] != pt.index or pt.point.get(pt.index) == 0:
            return False, len(rado), f"index-support law fails at {pt.index}"
        if pt.stage == 2:
            if any(i >= pt.index for i in sup[:-1]) or any(i > 1 for i in sup[:-1]):
                return False, len(rado), f"stage support discipline fails at {pt.index}"
            if any(pt.point.get(i) not in q2 for i in sup):
                return False, len(rado), f"coordinate outside the stage pool at {pt.index}"
    return True, len(rado), f"{len(rado)} points pass the staged-structure laws"


def _check_no_repeat(seed: int) -> tuple[bool, int, str]:
    pts = dense_sets.gen_no_repeated_distance(2, 5, norms.L2, seed=seed, denom_bound=6)
    if dense_sets.has_repeated_distance(pts, norms.L2) is not None:
        return False, 5, "generator output has a repeated distance"
    square = [from_coords([0, 0]), from_coords([1, 0]), from_coords([0, 1]), from_coords([1, 1])]
    if dense_sets.has_repeated_distance(square, norms.L2) is None:
        return False, 5, "unit square should witness a repeated distance"
    return True, 5, "generator passes the exact checker; the unit square fails it"


# -- back and forth --------------------------------------------------------------


def _check_back_and_forth(seed: int) -> tuple[bool, int, str]:
    rado = dense_sets.build_rado(2)
    pts = [pt.point for pt in rado.points]
    ids = [pt.index for pt in rado.points]
    g1 = graphs.sample_graph(pts, norms.L2, Fraction(1, 2), seed, ids=ids)
    g2 = graphs.sample_graph(pts, norms.L2, Fraction(1, 2), seed + 1, ids=ids)
    session = back_and_forth.init_session(rado, g1, g2)
    accepted = 0
    for _ in range(8):
        rec = back_and_forth.step(session)
        if rec.stall_reason is not None:
            if rec.failed_point_mismatch < 1:
                return False, accepted, "stall without point-mismatch forensic counts"
            break
        accepted += 1
        report = back_and_forth.verify(session)
        if not report.all_passed:
            return False, accepted, f"verification failed after step {accepted}"
    return True, accepted, f"{accepted} accepted steps, all verified from scratch"


# -- ball geometry ----------------------------------------------------------------


def _check_two_ball(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=109)
    d, delta = 3, Fraction(1, 4)
    ones = from_coords([1] * d)
    b1, b2 = balls.small_intersection_balls(ones, delta)
    center = ones.scale(Fraction(1) / (1 + delta))
    if not (balls.ball_membership(b1, center, norms.LINF) and balls.ball_membership(b2, center, norms.LINF)):
        return False, 0, "scaled point missing from its own intersection"
    trials = members = 0
    for _ in range(120):
        trials += 1
        z = center + fsv(
            {k: Fraction(stream.randint(-8, 8), 40) for k in range(1, d + 1)}
        )
        if balls.ball_membership(b1, z, norms.LINF) and balls.ball_membership(b2, z, norms.LINF):
            members += 1
            y = z.scale(1 + delta) - ones
            if not norms.distance_lt(y, FiniteSupportVector(), delta, norms.LINF):
                return False, trials, "member outside the strongly-extreme bound"
    return True, trials, f"{members} sampled members all satisfy the shrinking bound"


def _check_l1_two_ball(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=110)
    trials = 0
    for _ in range(20):
        trials += 1
        lam = Fraction(stream.randint(1, 8), 20)
        mu = lam + Fraction(stream.randint(1, 10), 20)  # lam < mu <= 18/20 < 1
        f = balls.StepFn.constant(8, 2 * lam)
        g1, g2 = balls.l1_two_ball_witness(f, mu)  # identities asserted inside
        if (g1 - g2).l1_norm() != 2 * mu:
            return False, trials, "distance identity lost"
    return True, trials, "two-ball witnesses satisfy all five identities exactly"


def _check_l1_four_ball(seed: int) -> tuple[bool, int, str]:
    delta = Fraction(1, 2)
    res = balls.l1_four_ball_probe(delta, 16, 4000, seed)
    if res.max_norm is not None and not res.max_norm < delta:
        return False, res.samples, f"member of norm {res.max_norm} >= delta found"
    violator = balls.StepFn.two_level(16, delta, delta)
    centers = balls.four_ball_centers(delta, 16)
    if all((violator - c).l1_norm() < 1 for c in centers):
        return False, res.samples, "norm-delta function passed all four balls"
    return True, res.samples, f"{res.members_found} members, max norm {res.max_norm} < {delta}"


def _check_two_unit(seed: int) -> tuple[bool, int, str]:
    stream = CounterStream(seed, stream=111)
    tol = Fraction(1, 10**9)
    trials = 0
    for p in (2, 3):
        for _ in range(6):
            trials += 1
            x = fsv({k: Fraction(stream.randint(-4, 4), 12) for k in (1, 2, 3)})
            if x.is_zero() or not norms.lp_power_distance(x, FiniteSupportVector(), p) < 1:
                continue
            y = balls.two_unit_decomposition(x, norms.lp(p), tol)
            ny = norms.norm_approx(y, norms.lp(p), Fraction(1, 10**12))
            nd = norms.norm_approx(x - y, norms.lp(p), Fraction(1, 10**12))
            if abs(ny - 1) > float(tol) or abs(nd - 1) > float(tol):
                return False, trials, f"residuals {ny - 1}, {nd - 1} above tol"
    return True, trials, "decomposition residuals within tolerance"


# -- renormed gauge ----------------------------------------------------------------


def _check_renorm(seed: int) -> tuple[bool, int, str]:
    model = renorm.RenormModel(3)
    tol = Fraction(1, 200)
    opts = dict(restarts=6, iterations=1200, seed=seed)
    for atom in model.atoms():
        val = renorm.gauge(atom, model, tol, **opts).value
        if abs(val - 1.0) > float(tol):
            return False, 0, f"atom gauge {val} is not 1"
        lb = renorm.gauge_lower_bound(atom, model)
        if lb < 1.0 - 1e-9 or lb > val + 1e-9:
            return False, 0, f"dual oracle bound {lb} inconsistent with value {val}"
    stream = CounterStream(seed, stream=112)
    trials = 0
    for _ in range(8):
        trials += 1
        x = fsv({k: Fraction(stream.randint(-6, 6), 4) for k in range(0, 4)})
        rep = renorm.sandwich_check(x, model, tol, seed=seed)
        if not rep.passed:
            return False, trials, rep.witness or "sandwich failed"
        if x.is_zero():
            continue
        v = renorm.gauge(x, model, tol, **opts).value
        v_neg = renorm.gauge(-x, model, tol, **opts).value
        v_twice = renorm.gauge(x.scale(2), model, tol, **opts).value
        if abs(v_neg - v) > 2 * float(tol) or abs(v_twice - 2 * v) > 4 * float(tol):
            return False, trials, "gauge symmetry/homogeneity drift beyond tolerance"
    return True, trials, "atom gauges, dual bounds, sandwich and symmetry all hold"


REQUIRED_TOPICS: tuple[str, ...] = (
    "floor-distance-consistency",
    "triangle-inequality",
    "distance-symmetry-translation",
    "permutation-invariance",
    "edge-eligibility",
    "graph-distance-dichotomy",
    "integer-distance-preservation",
    "large-distance-promotion",
    "sup-norm-map-step-isometry",
    "coordinatewise-decomposition",
    "rigidity-oracle",
    "staged-dense-set",
    "no-repeated-distance",
    "back-and-forth-soundness",
    "two-ball-shrinking",
    "l1-two-ball-diameter",
    "l1-four-ball-bound",
    "two-unit-sum",
    "renorm-gauge-sandwich",
)

REGISTRY: tuple[InvariantCheck, ...] = (
    InvariantCheck("floor-distance-consistency", "hard", "floor law against strict comparisons", _check_floor_consistency),
    InvariantCheck("triangle-inequality", "hard", "exact triangle predicate on random triples", _check_triangle),
    InvariantCheck("distance-symmetry-translation", "hard", "floor symmetry and translation invariance", _check_symmetry_translation),
    InvariantCheck("permutation-invariance", "hard", "coordinate permutations preserve comparisons", _check_permutation_invariance),
    InvariantCheck("edge-eligibility", "hard", "edges eligible, monotone in p, reproducible", _check_edges_eligible),
    InvariantCheck("graph-distance-dichotomy", "statistical", "graph vs norm closeness rates under refinement", _check_dichotomy_trend),
    InvariantCheck("integer-distance-preservation", "hard", "integer gaps survive 1d step-isometries", _check_integer_distances),
    InvariantCheck("large-distance-promotion", "hard", "floors imply thresholds; converse counterexample", _check_large_distance_promotion),
    InvariantCheck("sup-norm-map-step-isometry", "hard", "coordinate-wise sup-norm map and its pinch", _check_sup_norm_map),
    InvariantCheck("coordinatewise-decomposition", "hard", "probe recovery of coordinate-wise maps", _check_decomposition),
    InvariantCheck("rigidity-oracle", "hard", "brute-force bijection oracle cross-check", _check_rigidity_oracle),
    InvariantCheck("staged-dense-set", "hard", "staged construction structure laws", _check_staged_set),
    InvariantCheck("no-repeated-distance", "hard", "distinct-distance generator and checker", _check_no_repeat),
    InvariantCheck("back-and-forth-soundness", "hard", "verification after every accepted step", _check_back_and_forth),
    InvariantCheck("two-ball-shrinking", "hard", "strongly-extreme two-ball certificate", _check_two_ball),
    InvariantCheck("l1-two-ball-diameter", "hard", "L1 two-ball equalities", _check_l1_two_ball),
    InvariantCheck("l1-four-ball-bound", "hard", "L1 four-ball norm bound", _check_l1_four_ball),
    InvariantCheck("two-unit-sum", "hard", "sum-of-two-unit-vectors residuals", _check_two_unit),
    InvariantCheck("renorm-gauge-sandwich", "hard", "gauge bounds, dual oracle, sandwich", _check_renorm),
)


@dataclass(frozen=True)
class SuiteReport:
    results: tuple[CheckResult, ...]
    coverage_ok: bool
    missing_topics: tuple[str, ...]

    @property
    def all_passed(self) -> bool:
        return self.coverage_ok and all(r.passed for r in self.results)

    def to_json(self) -> str:
        return json.dumps(
            {
                "coverage_ok": self.coverage_ok,
                "missing_topics": list(self.missing_topics),
                "all_passed": self.all_passed,
                "results": [r.to_json_obj() for r in sorted(self.results, key=lambda r: r.check_id)],
            },
            indent=1,
            sort_keys=True,
        )

    def to_junit_xml(self) -> str:
        cases = []
        for r in sorted(self.results, key=lambda c: c.check_id):
            body = "" if r.passed else f'<failure message="{escape(r.detail)}"/>'
            cases.append(f'<testcase classname="radolab.suite" name="{escape(r.check_id)}">{body}</testcase>')
        if not self.coverage_ok:
            missing = escape(", ".join(self.missing_topics))
            cases.append(
                f'<testcase classname="radolab.suite" name="coverage"><failure message="missing topics: {missing}"/></testcase>'
            )
        failures = sum(1 for r in self.results if not r.passed) + (0 if self.coverage_ok else 1)
        return (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<testsuite name="radolab" tests="{len(cases)}" failures="{failures}">'
            + "".join(cases)
            + "</testsuite>\n"
        )


def run_suite(filter_ids: list[str] | None = None, seed: int = 0) -> SuiteReport:
    """Run every registered check (or the selected ones).

    On a full run the coverage law is enforced: success is refused when a
    required topic lacks a registered check.
    """
    selected = REGISTRY
    if filter_ids is not None:
        wanted = set(filter_ids)
        unknown = wanted - {c.check_id for c in REGISTRY}
        if unknown:
            raise ValueError(f"unknown check ids: {sorted(unknown)}")
        selected = tuple(c for c in REGISTRY if c.check_id in wanted)
    results = []
    for check in selected:
        try:
            passed, trials, detail = check.run(seed)
        except Exception as exc:  # a crashing check is a failing check
            passed, trials, detail = False, 0, f"exception: {exc!r}"
        results.append(CheckResult(check.check_id, check.kind, passed, trials, detail))
    registered = {c.check_id for c in REGISTRY}
    missing = tuple(t for t in REQUIRED_TOPICS if t not in registered)
    coverage_ok = not missing if filter_ids is None else True
    return SuiteReport(results=tuple(results), coverage_ok=coverage_ok, missing_topics=missing)
