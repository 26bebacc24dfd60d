"""Experiment runner: every construction exposed as a subcommand.

Config comes from an optional TOML file plus flags (flags win); rationals on
the command line are ``num/den`` strings (decimals rejected to protect
exactness). Each run writes ``report.json`` into the output directory plus
any side outputs (JSONL, CSV, DOT/GraphML). Identical config gives
byte-identical reports apart from the wall-time field, which is excluded
from the comparison surface. Exit codes: 0 all asserted invariants passed,
1 an invariant failed (report still written), 2 malformed config (nothing
written).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from radolab import back_and_forth, balls, dense_sets, graphs, norms, renorm, step_isometry, suite
from radolab.rationals import format_rational, parse_rational
from radolab.rng import CounterStream
from radolab.vectors import FiniteSupportVector, from_coords, fsv

SCHEMA_VERSION = "1"


class ConfigError(ValueError):
    pass


def _parse_coords(text: str) -> FiniteSupportVector:
    return from_coords([parse_rational(t) for t in text.split(",")])


def _parse_rational_list(text: str) -> list[Fraction]:
    return [parse_rational(t) for t in text.split(",")]


def _load_points_jsonl(path: str) -> tuple[list[int], list[FiniteSupportVector]]:
    ids, vecs = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            if "vector" in obj:
                ids.append(int(obj["index"]))
                vecs.append(FiniteSupportVector.from_json_obj(obj["vector"]))
            else:
                ids.append(len(ids))
                vecs.append(FiniteSupportVector.from_json_obj(obj))
    if not vecs:
        raise ConfigError(f"no points found in {path}")
    return ids, vecs


def comparable_report(text: str) -> dict:
    """The determinism comparison surface: everything but timing."""
    obj = json.loads(text)
    obj.pop("wall_time_s", None)
    return obj


# -- runners -------------------------------------------------------------------
# each returns (results payload, passed, side outputs {filename: bytes})


def _run_rado_build(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    rado = dense_sets.build_rado(cfg["stages"], cap=cfg["cap"])
    payload = {
        "points": len(rado),
        "stages": rado.stages_completed,
        "per_stage": dense_sets.stage_sizes(cfg["stages"]),
    }
    return payload, True, {"rado.jsonl": rado.to_jsonl().encode()}


def _run_sample_graph(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    ids, vecs = _load_points_jsonl(cfg["points_file"])
    g = graphs.sample_graph(vecs, cfg["norm"], cfg["p"], cfg["seed"], ids=ids)
    fmt = cfg["format"]
    blob = graphs.export_graph(g, fmt)
    ext = {"dot": "dot", "graphml": "graphml", "json": "json"}[fmt]
    payload = {
        "nodes": len(g.point_ids),
        "edges": len(g.edges),
        "norm": g.norm.label(),
        "p": format_rational(g.p),
        "seed": g.seed,
    }
    return payload, True, {f"graph.{ext}": blob}


def _one_back_and_forth(stages: int, cap: int, norm, p, seeds, max_steps: int):
    rado = dense_sets.build_rado(stages, cap=cap)
    pts = [pt.point for pt in rado.points]
    ids = [pt.index for pt in rado.points]
    g1 = graphs.sample_graph(pts, norm, p, seeds[0], ids=ids)
    g2 = graphs.sample_graph(pts, norm, p, seeds[1], ids=ids)
    session = back_and_forth.init_session(rado, g1, g2)
    verifies = []
    stall = None
    for _ in range(max_steps):
        rec = back_and_forth.step(session)
        if rec.stall_reason is not None:
            stall = rec
            break
        verifies.append(back_and_forth.verify(session).all_passed)
    return rado, session, verifies, stall


def _run_back_and_forth(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    rado, session, verifies, stall = _one_back_and_forth(
        cfg["stages"], cfg["cap"], cfg["norm"], cfg["p"], cfg["seeds"], cfg["max_steps"]
    )
    transcript = back_and_forth.Transcript(
        accepted=tuple(
            (r.direction, r.source_index, r.accepted)
            for r in session.steps
            if r.accepted is not None
        ),
        stalled=stall,
        records=tuple(session.steps),
    )
    final = back_and_forth.verify(session)
    payload = {
        "accepted_steps": len(verifies),
        "sigma": {str(i): j for i, j in sorted(session.sigma.items())},
        "per_step_verified": verifies,
        "stall": None if stall is None else stall.to_json_obj(),
        "final_verify": final.to_json_obj(),
    }
    passed = all(verifies) and final.all_passed
    side = {"transcript.jsonl": transcript.to_jsonl().encode()}
    if cfg.get("sweep_stages"):
        # one run per truncation size; rows merge in stage order
        lines = ["points,steps_accepted,stall_reason"]
        sweep_rows = []
        for stages in cfg["sweep_stages"]:
            s_rado, s_session, s_verifies, s_stall = _one_back_and_forth(
                stages, cfg["cap"], cfg["norm"], cfg["p"], cfg["seeds"], cfg["max_steps"]
            )
            reason = "" if s_stall is None else s_stall.stall_reason
            lines.append(f"{len(s_rado)},{len(s_verifies)},{reason}")
            sweep_rows.append(
                {"points": len(s_rado), "steps_accepted": len(s_verifies), "stall": reason}
            )
            passed = passed and all(s_verifies)
        payload["sweep"] = sweep_rows
        side["sweep.csv"] = ("\n".join(lines) + "\n").encode()
    return payload, passed, side


def _run_dichotomy(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    spacing, stop = cfg["spacing"], cfg["stop"]
    pts = []
    t = Fraction(0)
    while t <= stop:
        pts.append(fsv({1: t}))
        t += spacing
    g = graphs.sample_graph(pts, cfg["norm"], cfg["p"], cfg["seed"])
    rows = graphs.dichotomy_report(g, dict(zip(g.point_ids, pts)), cfg["k_max"])
    csv_lines = ["k,pairs_tested,norm_close_graph_far,graph_close_norm_far"]
    csv_lines += [
        f"{r.k},{r.pairs_tested},{r.norm_close_graph_far},{r.graph_close_norm_far}"
        for r in rows
    ]
    payload = {
        "points": len(pts),
        "rows": [
            {
                "k": r.k,
                "pairs_tested": r.pairs_tested,
                "norm_close_graph_far": r.norm_close_graph_far,
                "graph_close_norm_far": r.graph_close_norm_far,
            }
            for r in rows
        ],
    }
    return payload, True, {"dichotomy.csv": ("\n".join(csv_lines) + "\n").encode()}


def _apply_1d_map(h: step_isometry.StepIsoMap1D, pts):
    if h.evaluate(Fraction(0)) != 0:
        raise ConfigError("coordinate-wise application needs a map fixing zero")
    return [fsv({i: h.evaluate(val) for i, val in v.entries}) for v in pts]


def _run_check_step_iso(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    _, pts = _load_points_jsonl(cfg["points_file"])
    if cfg.get("map_file"):
        with open(cfg["map_file"], encoding="utf-8") as fh:
            h = step_isometry.StepIsoMap1D.from_json_obj(json.load(fh))
        imgs = _apply_1d_map(h, pts)
    elif cfg.get("map_inline"):
        h = step_isometry.StepIsoMap1D.from_json_obj(json.loads(cfg["map_inline"]))
        imgs = _apply_1d_map(h, pts)
    else:
        _, imgs = _load_points_jsonl(cfg["images_file"])
    violation = step_isometry.check_step_isometry(pts, imgs, cfg["norm"])
    payload: dict = {"ok": violation is None}
    if violation is not None:
        payload["violation"] = {
            "pair": list(violation.pair),
            "source_floor": violation.source_floor,
            "image_floor": violation.image_floor,
        }
    if cfg.get("m0") is not None:
        large = step_isometry.check_step_isometry_large(pts, imgs, cfg["norm"], cfg["m0"])
        payload["large_ok"] = large is None
        if large is not None:
            payload["large_violation"] = {
                "pair": list(large.pair),
                "threshold": large.threshold,
            }
    return payload, violation is None, {}


def _run_enumerate_step_iso(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    _, pts = _load_points_jsonl(cfg["points_file"])
    perms = step_isometry.enumerate_step_isometric_bijections(pts, cfg["norm"])
    return {"count": len(perms), "permutations": [list(p) for p in perms]}, True, {}


def _run_c0_counterexample(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    rows = []
    ok = True
    for n in range(1, cfg["max_n"] + 1):
        v = fsv({n: Fraction(1, n + 1)})
        img = step_isometry.c0_counterexample(v)
        value = norms.sup_distance(img, FiniteSupportVector())
        expected = 1 - Fraction(1, n + 1)
        ok = ok and value == expected
        rows.append({"n": n, "image_sup_norm": format_rational(value)})
    side = {}
    if cfg.get("points_file"):
        _, pts = _load_points_jsonl(cfg["points_file"])
        imgs = [step_isometry.c0_counterexample(v) for v in pts]
        violation = step_isometry.check_step_isometry(pts, imgs, norms.LINF)
        ok = ok and violation is None
        lines = [json.dumps(v.to_json_obj(), sort_keys=True) for v in imgs]
        side["images.jsonl"] = ("\n".join(lines) + "\n").encode()
    return {"rows": rows, "exact": ok}, ok, side


def _run_forced_coordinate(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    result = step_isometry.forced_coordinate_witness(cfg["n"], cfg["eps_grid"])
    expected = 1 - Fraction(1, cfg["n"] + 1)
    if isinstance(result, tuple):
        payload = {
            "pinned": False,
            "interval": [format_rational(result[0]), format_rational(result[1])],
        }
        passed = False
    else:
        payload = {"pinned": True, "value": format_rational(result)}
        passed = result == expected
    payload["expected"] = format_rational(expected)
    return payload, passed, {}


def _run_l1_balls(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    if cfg["mode"] == "two":
        f = balls.StepFn.constant(cfg["grid_size"], 2 * cfg["lam"])
        g1, g2 = balls.l1_two_ball_witness(f, cfg["mu"])
        payload = {
            "mode": "two",
            "g1": g1.to_json_obj(),
            "g2": g2.to_json_obj(),
            "distance": format_rational((g1 - g2).l1_norm()),
            "identities_exact": True,
        }
        return payload, True, {}
    res = balls.l1_four_ball_probe(cfg["delta"], cfg["grid_size"], cfg["samples"], cfg["seed"])
    passed = res.max_norm is None or res.max_norm < cfg["delta"]
    payload = {
        "mode": "four",
        "members_found": res.members_found,
        "max_norm": None if res.max_norm is None else format_rational(res.max_norm),
        "bound": format_rational(cfg["delta"]),
    }
    csv = "delta,grid_size,samples,members_found,max_norm\n" + res.to_csv_row() + "\n"
    return payload, passed, {"four_ball.csv": csv.encode()}


def _run_two_unit(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    x = cfg["coords"]
    norm = norms.lp(cfg["p"])
    y = balls.two_unit_decomposition(x, norm, cfg["tol"])
    fine = Fraction(1, 10**12)
    ny = norms.norm_approx(y, norm, fine)
    nd = norms.norm_approx(x - y, norm, fine)
    tol_f = float(cfg["tol"])
    payload = {
        "y": {str(i): float(v) for i, v in y.entries},
        "unit_residual": abs(ny - 1.0),
        "distance_residual": abs(nd - 1.0),
        "tol": tol_f,
    }
    return payload, abs(ny - 1.0) <= tol_f and abs(nd - 1.0) <= tol_f, {}


def _run_strongly_extreme(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    d, delta, seed = cfg["dim"], cfg["delta"], cfg["seed"]
    ones = from_coords([1] * d)
    stream = CounterStream(seed, stream=21)
    members = 0
    violations = 0
    denom = 8 * delta.denominator
    spread = int(2 * delta * denom)
    for _ in range(cfg["samples"]):
        y = fsv({k: Fraction(stream.randint(-spread, spread), denom) for k in range(1, d + 1)})
        close_sum = norms.distance_lt(ones + y, FiniteSupportVector(), 1 + delta, norms.LINF)
        close_diff = norms.distance_lt(ones - y, FiniteSupportVector(), 1 + delta, norms.LINF)
        if close_sum and close_diff:
            members += 1
            if not norms.distance_lt(y, FiniteSupportVector(), delta, norms.LINF):
                violations += 1
    payload = {
        "samples": cfg["samples"],
        "members": members,
        "violations": violations,
        "delta": format_rational(delta),
    }
    return payload, violations == 0, {}


def _run_davis_gauge(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    model = renorm.RenormModel(cfg["n"])
    result = renorm.gauge(
        cfg["coords"], model, cfg["tol"], restarts=cfg["restarts"], iterations=cfg["iterations"]
    )
    payload = {
        "value": result.value,
        "converged": result.converged,
        "truncation": cfg["n"],
    }
    if cfg["n"] <= 3:
        payload["dual_lower_bound"] = renorm.gauge_lower_bound(cfg["coords"], model)
    return payload, True, {"certificate.json": (result.certificate_json(model) + "\n").encode()}


def _run_davis_table(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    model = renorm.RenormModel(cfg["n"])
    table = renorm.nearest_extreme_distances(
        model,
        cfg["tol"],
        net_size=cfg["net"],
        seed=cfg["seed"],
        restarts=cfg["restarts"],
        iterations=cfg["iterations"],
    )
    header = (
        "label,nearest,gauge_distance,partner_gauge_distance,"
        "l2_distance,min_l2_distance,isolated_at_half"
    )
    csv = "\n".join([header] + [row.to_csv_row() for row in table]) + "\n"
    payload = {
        "rows": [
            {
                "label": r.label,
                "nearest": r.nearest_label,
                "gauge_distance": r.gauge_distance,
                "isolated_at_half": r.isolated_at_half,
            }
            for r in table
        ],
        "isolated": sorted(r.label for r in table if r.isolated_at_half),
    }
    return payload, True, {"extreme_distances.csv": csv.encode()}


def _run_no_repeat_gen(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    pts = dense_sets.gen_no_repeated_distance(
        cfg["dim"], cfg["count"], cfg["norm"], cfg["seed"], cfg["denom_bound"]
    )
    witness = dense_sets.has_repeated_distance(pts, cfg["norm"])
    lines = [json.dumps(p.to_json_obj(), sort_keys=True) for p in pts]
    payload = {"count": len(pts), "checker": "none" if witness is None else witness.describe()}
    return payload, witness is None, {"points.jsonl": ("\n".join(lines) + "\n").encode()}


def _run_suite(cfg: dict) -> tuple[dict, bool, dict[str, bytes]]:
    report = suite.run_suite(cfg.get("filter"), seed=cfg["seed"])
    payload = json.loads(report.to_json())
    side = {
        "suite.json": (report.to_json() + "\n").encode(),
        "suite.xml": report.to_junit_xml().encode(),
    }
    return payload, report.all_passed, side


# -- argument wiring -------------------------------------------------------------

_RUNNERS = {
    "rado-build": _run_rado_build,
    "sample-graph": _run_sample_graph,
    "back-and-forth": _run_back_and_forth,
    "dichotomy": _run_dichotomy,
    "check-step-iso": _run_check_step_iso,
    "enumerate-step-iso": _run_enumerate_step_iso,
    "c0-counterexample": _run_c0_counterexample,
    "forced-coordinate": _run_forced_coordinate,
    "l1-balls": _run_l1_balls,
    "two-unit": _run_two_unit,
    "strongly-extreme": _run_strongly_extreme,
    "davis-gauge": _run_davis_gauge,
    "davis-table": _run_davis_table,
    "no-repeat-gen": _run_no_repeat_gen,
    "suite": _run_suite,
}


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="radolab",
        description="Exact-arithmetic experiments on random geometric graphs over dense point families",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="TOML file with parameter defaults")
        p.add_argument("--out", help="output directory (default: <command>-out under the output root)")
        return p

    p = add("rado-build", "build stages of the staged dense point set")
    p.add_argument("--stages", type=int)
    p.add_argument("--cap", type=int)

    p = add("sample-graph", "sample the distance<1 random graph over a point file")
    p.add_argument("--points-file")
    p.add_argument("--norm")
    p.add_argument("--p")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=["dot", "graphml", "json"])

    p = add("back-and-forth", "grow a partial isomorphism between two graph samples")
    p.add_argument("--stages", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--p")
    p.add_argument("--seeds", help="two seeds, comma separated")
    p.add_argument("--norm")
    p.add_argument("--max-steps", type=int, dest="max_steps")
    p.add_argument(
        "--sweep-stages",
        dest="sweep_stages",
        help="comma-separated stage counts; emits sweep.csv of (points, steps, stall)",
    )

    p = add("dichotomy", "graph-distance vs norm-distance agreement on a line grid")
    p.add_argument("--stop")
    p.add_argument("--spacing")
    p.add_argument("--p")
    p.add_argument("--seed", type=int)
    p.add_argument("--k-max", type=int, dest="k_max")
    p.add_argument("--norm")

    p = add("check-step-iso", "exact floor comparison between a point file and an image file")
    p.add_argument("--points-file")
    p.add_argument("--images-file")
    p.add_argument("--map-file", dest="map_file", help="JSON 1D map applied coordinate-wise instead of an image file")
    p.add_argument("--map-inline", dest="map_inline", help="the same 1D map given inline as JSON")
    p.add_argument("--norm")
    p.add_argument("--m0", type=int)

    p = add("enumerate-step-iso", "brute-force all floor-preserving self-bijections")
    p.add_argument("--points-file")
    p.add_argument("--norm")

    p = add("c0-counterexample", "coordinate-wise sup-norm map: norms of the pinch images")
    p.add_argument("--max-n", type=int, dest="max_n")
    p.add_argument("--points-file")

    p = add("forced-coordinate", "pin the image coordinate via two-sided ball constraints")
    p.add_argument("--n", type=int)
    p.add_argument("--eps-grid", dest="eps_grid", help="comma-separated rationals")

    p = add("l1-balls", "L1 step-function ball intersections (two-ball witness / four-ball probe)")
    p.add_argument("--mode", choices=["two", "four"])
    p.add_argument("--lam")
    p.add_argument("--mu")
    p.add_argument("--delta")
    p.add_argument("--grid-size", type=int, dest="grid_size")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)

    p = add("two-unit", "write a small vector as a sum of two unit vectors")
    p.add_argument("--coords", help="comma-separated rationals")
    p.add_argument("--p", type=int)
    p.add_argument("--tol")

    p = add("strongly-extreme", "certificate sampling at the all-ones sup-norm corner")
    p.add_argument("--dim", type=int)
    p.add_argument("--delta")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)

    p = add("davis-gauge", "gauge of a vector under the renormed unit ball")
    p.add_argument("--n", type=int)
    p.add_argument("--coords", help="comma-separated rationals for coordinates 0..n")
    p.add_argument("--tol")
    p.add_argument("--restarts", type=int)
    p.add_argument("--iterations", type=int)

    p = add("davis-table", "nearest-extreme-point distances under the renormed gauge")
    p.add_argument("--n", type=int)
    p.add_argument("--tol")
    p.add_argument("--net", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--iterations", type=int)

    p = add("no-repeat-gen", "random rational points with all pairwise distances distinct")
    p.add_argument("--dim", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--norm")
    p.add_argument("--seed", type=int)
    p.add_argument("--denom-bound", type=int, dest="denom_bound")

    p = add("suite", "run the cross-module invariant checks")
    p.add_argument("--filter", help="comma-separated check ids")
    p.add_argument("--seed", type=int)

    return top


def _merged_config(args: argparse.Namespace) -> dict:
    file_cfg: dict = {}
    if args.config:
        with open(args.config, "rb") as fh:
            file_cfg = tomllib.load(fh)
    merged = dict(file_cfg)
    for key, value in vars(args).items():
        if key in ("command", "config", "out") or value is None:
            continue
        merged[key] = value
    return merged


def _require(cfg: dict, *names: str) -> None:
    missing = [n for n in names if cfg.get(n) is None]
    if missing:
        raise ConfigError(f"missing parameters: {', '.join(missing)}")


def _validate(command: str, cfg: dict) -> dict:
    """Normalize the merged config; raises ConfigError on any violation."""
    out = dict(cfg)

    def rational(name: str, default: str | None = None) -> None:
        if out.get(name) is None:
            if default is None:
                return
            out[name] = default
        if not isinstance(out[name], Fraction):
            out[name] = parse_rational(str(out[name]))

    def norm(default: str = "l2") -> None:
        out["norm"] = norms.parse_norm(str(out.get("norm") or default))

    if command == "rado-build":
        _require(out, "stages")
        out.setdefault("cap", dense_sets.DEFAULT_POINT_CAP)
        if out["stages"] < 1:
            raise ConfigError("stages must be >= 1")
    elif command == "sample-graph":
        _require(out, "points_file", "p", "seed")
        rational("p")
        norm()
        out.setdefault("format", "json")
        if not (0 <= out["p"] <= 1):
            raise ConfigError("p must lie in [0, 1]")
    elif command == "back-and-forth":
        _require(out, "stages", "p", "seeds", "max_steps")
        rational("p")
        norm()
        out.setdefault("cap", dense_sets.DEFAULT_POINT_CAP)
        if isinstance(out["seeds"], str):
            out["seeds"] = [int(s) for s in out["seeds"].split(",")]
        if len(out["seeds"]) != 2:
            raise ConfigError("seeds must be exactly two integers")
        if out["max_steps"] < 1:
            raise ConfigError("max_steps must be >= 1")
        if isinstance(out.get("sweep_stages"), str):
            out["sweep_stages"] = [int(s) for s in out["sweep_stages"].split(",")]
    elif command == "dichotomy":
        _require(out, "stop", "spacing", "p", "seed")
        rational("stop")
        rational("spacing")
        rational("p")
        norm()
        out.setdefault("k_max", 3)
        if out["spacing"] <= 0:
            raise ConfigError("spacing must be > 0")
    elif command == "check-step-iso":
        _require(out, "points_file")
        if not (out.get("images_file") or out.get("map_file") or out.get("map_inline")):
            raise ConfigError("need one of images_file, map_file, map_inline")
        norm()
    elif command == "enumerate-step-iso":
        _require(out, "points_file")
        norm()
    elif command == "c0-counterexample":
        out.setdefault("max_n", 20)
        if out["max_n"] < 1:
            raise ConfigError("max_n must be >= 1")
    elif command == "forced-coordinate":
        _require(out, "n", "eps_grid")
        if isinstance(out["eps_grid"], str):
            out["eps_grid"] = _parse_rational_list(out["eps_grid"])
        else:
            out["eps_grid"] = [parse_rational(str(e)) for e in out["eps_grid"]]
    elif command == "l1-balls":
        _require(out, "mode")
        if out["mode"] == "two":
            _require(out, "lam", "mu")
            rational("lam")
            rational("mu")
            out.setdefault("grid_size", 8)
        else:
            _require(out, "delta", "samples", "seed")
            rational("delta")
            out.setdefault("grid_size", 64)
    elif command == "two-unit":
        _require(out, "coords", "p")
        rational("tol", default="1/1000000000")
        if isinstance(out["coords"], str):
            out["coords"] = _parse_coords(out["coords"])
    elif command == "strongly-extreme":
        _require(out, "dim", "delta", "samples", "seed")
        rational("delta")
        if out["dim"] < 1:
            raise ConfigError("dim must be >= 1")
    elif command == "davis-gauge":
        _require(out, "n", "coords")
        rational("tol", default="1/10000")
        out.setdefault("restarts", 20)
        out.setdefault("iterations", 10000)
        if isinstance(out["coords"], str):
            vals = [parse_rational(t) for t in out["coords"].split(",")]
            out["coords"] = fsv({i: v for i, v in enumerate(vals)})
    elif command == "davis-table":
        _require(out, "n")
        rational("tol", default="1/10000")
        out.setdefault("net", 64)
        out.setdefault("seed", 0)
        out.setdefault("restarts", 8)
        out.setdefault("iterations", 1500)
    elif command == "no-repeat-gen":
        _require(out, "dim", "count", "seed", "denom_bound")
        norm()
    elif command == "suite":
        out.setdefault("seed", 0)
        if isinstance(out.get("filter"), str):
            out["filter"] = out["filter"].split(",")
    return out


def _config_echo(cfg: dict) -> dict:
    echo = {}
    for k, v in sorted(cfg.items()):
        if isinstance(v, Fraction):
            echo[k] = format_rational(v)
        elif isinstance(v, FiniteSupportVector):
            echo[k] = v.to_json_obj()
        elif isinstance(v, norms.NormSpec):
            echo[k] = v.label()
        elif isinstance(v, list) and v and isinstance(v[0], Fraction):
            echo[k] = [format_rational(x) for x in v]
        else:
            echo[k] = v
    return echo


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        cfg = _validate(command, _merged_config(args))
    except (ConfigError, ValueError, OSError) as exc:
        print(f"radolab: config error: {exc}", file=sys.stderr)
        return 2

    root = Path(os.environ.get("RADOLAB_OUT_ROOT", "."))
    outdir = Path(args.out) if args.out else root / f"{command}-out"

    started = time.monotonic()
    try:
        payload, passed, side = _RUNNERS[command](cfg)
    except (ConfigError, OSError, json.JSONDecodeError, ValueError) as exc:
        # bad inputs discovered while loading: config class, nothing written
        print(f"radolab: config error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        # operational failure (budget exhausted, empty intersection, ...):
        # first-class result, report written
        payload, passed, side = {"error": f"{type(exc).__name__}: {exc}"}, False, {}
    wall = time.monotonic() - started

    outdir.mkdir(parents=True, exist_ok=True)
    for name, blob in side.items():
        (outdir / name).write_bytes(blob)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": _config_echo(cfg),
        "results": payload,
        "passed": passed,
        "wall_time_s": round(wall, 6),
    }
    (outdir / "report.json").write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
    print(json.dumps({"command": command, "passed": passed, "out": str(outdir)}))
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
