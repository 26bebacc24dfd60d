"""Back-and-forth construction of a partial isomorphism between two graph
samples over the same staged dense set.

The state is a partial permutation sigma: I -> J over point indices,
maintained so that after every accepted step

  1. S_I = {s in S : supp(s) subset of I} is exactly {s^(k) : k in I} (each
     point's top coordinate is its index, so these are triangular and span);
  2. the induced coordinate relabeling takes S_I into S_J pointwise;
  3. the relabeling is a graph isomorphism between the induced subgraphs.

The engine additionally keeps the support-closure invariant (supp(s^(k))
subset of I for every k in I, same on the J side); under it, adding the
minimal missing index i extends S_I by exactly {s^(i)}, which is what makes
the step verifiable from scratch. Candidate images are scanned in increasing
index order; a finite truncation can run out of candidates, and that stall
is a first-class outcome carrying per-filter counters. The engine itself
uses no randomness: all randomness lives in the two graph samples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from radolab.dense_sets import RadoSet
from radolab.graphs import GraphSample
from radolab.norms import floor_distance, lp_power_distance, sup_distance
from radolab.vectors import FiniteSupportVector

__all__ = [
    "Session",
    "StepRecord",
    "Transcript",
    "VerifyReport",
    "init_session",
    "step",
    "run",
    "verify",
]

STALL_NO_CANDIDATE = "no_candidate_in_truncation"
STALL_EXHAUSTED = "source_indices_exhausted"


@dataclass(frozen=True)
class StepRecord:
    direction: Literal["forward", "backward"]
    source_index: int
    accepted: int | None
    candidates_scanned: int
    failed_in_range: int  # candidate already used on the target side
    failed_support_closure: int
    failed_point_mismatch: int  # the indexed point is not the required image
    failed_adjacency: int
    stall_reason: str | None = None

    def to_json_obj(self) -> dict:
        return {
            "direction": self.direction,
            "source_index": self.source_index,
            "accepted": self.accepted,
            "candidates_scanned": self.candidates_scanned,
            "failed_in_range": self.failed_in_range,
            "failed_support_closure": self.failed_support_closure,
            "failed_point_mismatch": self.failed_point_mismatch,
            "failed_adjacency": self.failed_adjacency,
            "stall_reason": self.stall_reason,
        }


@dataclass
class Session:
    rado: RadoSet
    g1: GraphSample
    g2: GraphSample
    sigma: dict[int, int] = field(default_factory=dict)
    direction: Literal["forward", "backward"] = "forward"
    steps: list[StepRecord] = field(default_factory=list)

    @property
    def domain(self) -> set[int]:
        return set(self.sigma)

    @property
    def range(self) -> set[int]:
        return set(self.sigma.values())

    def point(self, index: int) -> FiniteSupportVector:
        return self.rado.points[index - 1].point

    @property
    def size(self) -> int:
        return len(self.rado.points)


def init_session(rado: RadoSet, g1: GraphSample, g2: GraphSample) -> Session:
    """Fresh session with empty sigma (all invariants hold vacuously)."""
    expected = tuple(pt.index for pt in rado.points)
    if g1.point_ids != expected or g2.point_ids != expected:
        raise ValueError("graphs must be sampled over exactly the point set's indices")
    if g1.norm != g2.norm:
        raise ValueError("graphs must share a norm")
    if not g1.norm.is_one_symmetric:
        raise ValueError("the relabeling argument needs a permutation-invariant norm")
    return Session(rado=rado, g1=g1, g2=g2)


def _min_missing(used: set[int]) -> int:
    i = 1
    while i in used:
        i += 1
    return i


def _required_image(
    s: Session, source: int, mapping: dict[int, int]
) -> tuple[FiniteSupportVector, Fraction]:
    """Relabel the source point's lower support through ``mapping``; return
    (relabeled lower part, top coefficient)."""
    v = s.point(source)
    lower = {}
    top = Fraction(0)
    for idx, val in v.entries:
        if idx == source:
            top = val
        else:
            lower[mapping[idx]] = val
    return FiniteSupportVector(tuple(sorted(lower.items()))), top


def step(s: Session) -> StepRecord:
    """One extension attempt in the session's current direction.

    Forward: pick i = min of the missing domain indices, scan candidate
    images j in increasing order, filtered by (a) j not already in the
    range, (b) j absent from the supports of mapped range points (support
    closure), (c) the indexed point s^(j) equals the required image exactly,
    (d) exact adjacency match against every mapped pair. Backward swaps the
    roles. The direction alternates only after an accepted step.
    """
    forward = s.direction == "forward"
    domain, rng = s.domain, s.range
    used_src, used_dst = (domain, rng) if forward else (rng, domain)
    mapping = dict(s.sigma) if forward else {j: i for i, j in s.sigma.items()}
    graph_src, graph_dst = (s.g1, s.g2) if forward else (s.g2, s.g1)

    source = _min_missing(used_src)
    if source > s.size:
        # the whole truncation is mapped on this side; nothing left to extend
        rec = StepRecord(
            direction="forward" if forward else "backward",
            source_index=source,
            accepted=None,
            candidates_scanned=0,
            failed_in_range=0,
            failed_support_closure=0,
            failed_point_mismatch=0,
            failed_adjacency=0,
            stall_reason=STALL_EXHAUSTED,
        )
        s.steps.append(rec)
        return rec
    required_lower, top = _required_image(s, source, mapping)

    closure_blocked = set()
    for m in used_dst:
        closure_blocked.update(s.point(m).support)

    fail_a = fail_b = fail_c = fail_d = scanned = 0
    for j in range(1, s.size + 1):
        scanned += 1
        if j in used_dst:
            fail_a += 1
            continue
        if j in closure_blocked:
            fail_b += 1
            continue
        candidate = s.point(j)
        expected = required_lower + FiniteSupportVector(((j, top),))
        if candidate != expected:
            fail_c += 1
            continue
        ok = True
        for k in used_src:
            if graph_src.has_edge(source, k) != graph_dst.has_edge(j, mapping[k]):
                ok = False
                break
        if not ok:
            fail_d += 1
            continue
        if forward:
            s.sigma[source] = j
        else:
            s.sigma[j] = source
        s.direction = "backward" if forward else "forward"
        rec = StepRecord(
            direction="forward" if forward else "backward",
            source_index=source,
            accepted=j,
            candidates_scanned=scanned,
            failed_in_range=fail_a,
            failed_support_closure=fail_b,
            failed_point_mismatch=fail_c,
            failed_adjacency=fail_d,
        )
        s.steps.append(rec)
        return rec

    rec = StepRecord(
        direction="forward" if forward else "backward",
        source_index=source,
        accepted=None,
        candidates_scanned=scanned,
        failed_in_range=fail_a,
        failed_support_closure=fail_b,
        failed_point_mismatch=fail_c,
        failed_adjacency=fail_d,
        stall_reason=STALL_NO_CANDIDATE,
    )
    s.steps.append(rec)
    return rec


@dataclass(frozen=True)
class Transcript:
    accepted: tuple[tuple[str, int, int], ...]  # (direction, source, image)
    stalled: StepRecord | None
    records: tuple[StepRecord, ...]

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(r.to_json_obj(), sort_keys=True) for r in self.records) + "\n"


def run(s: Session, max_steps: int) -> Transcript:
    """Alternate extension steps until max_steps or a stall."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    start = len(s.steps)
    stalled = None
    for _ in range(max_steps):
        rec = step(s)
        if rec.stall_reason is not None:
            stalled = rec
            break
    records = tuple(s.steps[start:])
    accepted = tuple(
        (r.direction, r.source_index, r.accepted)
        for r in records
        if r.accepted is not None
    )
    return Transcript(accepted=accepted, stalled=stalled, records=records)


@dataclass(frozen=True)
class PropertyResult:
    passed: bool
    witness: str | None = None


@dataclass(frozen=True)
class VerifyReport:
    property1_spanning_support: PropertyResult
    property2_maps_points: PropertyResult
    property3_graph_isomorphism: PropertyResult
    isometry_check: PropertyResult

    @property
    def all_passed(self) -> bool:
        return all(
            r.passed
            for r in (
                self.property1_spanning_support,
                self.property2_maps_points,
                self.property3_graph_isomorphism,
                self.isometry_check,
            )
        )

    def to_json_obj(self) -> dict:
        def enc(r: PropertyResult) -> dict:
            return {"passed": r.passed, "witness": r.witness}

        return {
            "property1_spanning_support": enc(self.property1_spanning_support),
            "property2_maps_points": enc(self.property2_maps_points),
            "property3_graph_isomorphism": enc(self.property3_graph_isomorphism),
            "isometry_check": enc(self.isometry_check),
        }


def _closure_and_exactness(s: Session, index_set: set[int]) -> str | None:
    for k in index_set:
        if not set(s.point(k).support) <= index_set:
            return f"support of point {k} leaves the index set"
    # S_indexset computed from scratch over the whole truncation
    members = {
        pt.index for pt in s.rado.points if set(pt.point.support) <= index_set
    }
    if members != index_set:
        return f"S restricted to the index set is {sorted(members)}, not the set itself"
    return None


def verify(s: Session) -> VerifyReport:
    """Recompute the three invariants plus exact distance preservation from
    scratch (nothing is trusted from the step bookkeeping)."""
    I, J = s.domain, s.range

    w = _closure_and_exactness(s, I) or _closure_and_exactness(s, J)
    prop1 = PropertyResult(w is None, w)

    # property 2: every mapped point relabels to a point of S_J, bijectively
    prop2 = PropertyResult(True)
    if len(set(s.sigma.values())) != len(s.sigma):
        prop2 = PropertyResult(False, "sigma is not injective")
    images: dict[int, int] = {}
    for k in sorted(I):
        if not prop2.passed:
            break
        try:
            image = s.point(k).relabel(s.sigma)
        except KeyError:
            prop2 = PropertyResult(False, f"sigma undefined on the support of point {k}")
            break
        top = image.max_index
        if top is None or top not in J or s.point(top) != image:
            prop2 = PropertyResult(False, f"image of point {k} is not a mapped point")
            break
        images[k] = top
    if prop2.passed and set(images.values()) != J:
        prop2 = PropertyResult(False, "relabeled images do not cover the range side")

    prop3 = PropertyResult(True)
    pairs = sorted(I)
    for a_pos, a in enumerate(pairs):
        for b in pairs[a_pos + 1 :]:
            if s.g1.has_edge(a, b) != s.g2.has_edge(s.sigma[a], s.sigma[b]):
                prop3 = PropertyResult(False, f"adjacency differs on pair ({a}, {b})")
                break
        if not prop3.passed:
            break

    iso = PropertyResult(True)
    norm = s.g1.norm
    for a_pos, a in enumerate(pairs):
        for b in pairs[a_pos + 1 :]:
            x, y = s.point(a), s.point(b)
            try:
                xi, yi = x.relabel(s.sigma), y.relabel(s.sigma)
            except KeyError:
                iso = PropertyResult(False, f"sigma undefined on the supports of ({a}, {b})")
                break
            if norm.kind == "linf":
                same = sup_distance(x, y) == sup_distance(xi, yi)
            else:
                same = lp_power_distance(x, y, norm.p) == lp_power_distance(xi, yi, norm.p)
            same = same and floor_distance(x, y, norm) == floor_distance(xi, yi, norm)
            if not same:
                iso = PropertyResult(False, f"distance not preserved on pair ({a}, {b})")
                break
        if not iso.passed:
            break

    return VerifyReport(
        property1_spanning_support=prop1,
        property2_maps_points=prop2,
        property3_graph_isomorphism=prop3,
        isometry_check=iso,
    )
