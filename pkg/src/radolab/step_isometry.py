"""Step-isometry predicates and explicit step-isometry families.

A bijection between finite point sets is a step-isometry when it preserves
the integer part of every pairwise distance; the threshold form (preserve
``distance < m`` only for m above a cutoff) is the weaker notion checked by
:func:`check_step_isometry_large`. On the real line every increasing
piecewise-linear bijection g of [0,1] induces the step-isometry
``h(x) = floor(x) + g(x - floor(x))``; applying an h per coordinate under the
sup norm gives the classical map on rational finitely supported sequences
that is a step-isometry yet discontinuous (``c0_counterexample``), together
with the two-sided ball squeeze that pins where any extension of it must
send the n-th coordinate (``forced_coordinate_witness``).

Everything here is exact rational arithmetic; there are no tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from radolab.norms import NormSpec, distance_lt, floor_distance
from radolab.vectors import FiniteSupportVector, basis, fsv, zero_vector

__all__ = [
    "StepIsoMap1D",
    "CoordinateStepIso",
    "FloorViolation",
    "ThresholdViolation",
    "NotCoordinatewise",
    "AmbiguousProbeError",
    "EmptyIntersectionError",
    "SizeCapError",
    "identity_map",
    "pinch_unit_map",
    "eval_1d",
    "check_step_isometry",
    "check_step_isometry_large",
    "apply_coordinatewise",
    "c0_counterexample",
    "c0_counterexample_inverse",
    "forced_coordinate_witness",
    "enumerate_step_isometric_bijections",
    "decompose_coordinatewise",
]


class EmptyIntersectionError(RuntimeError):
    """The ball-constraint intersection came out empty (an implementation bug)."""


class AmbiguousProbeError(ValueError):
    """The probe grid cannot determine the permutation or the 1D maps."""


class SizeCapError(ValueError):
    """Brute-force enumeration asked for more points than the cap allows."""


@dataclass(frozen=True)
class StepIsoMap1D:
    """``h(x) = sign * (floor(x) + g(x - floor(x))) + offset`` for an
    increasing piecewise-linear bijection g of [0, 1].

    ``breakpoints`` are (t, g(t)) pairs; (0,0) and (1,1) must be present and
    both coordinates strictly increase. Evaluation and inversion are exact.
    """

    breakpoints: tuple[tuple[Fraction, Fraction], ...]
    sign: int = 1
    offset: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        bps = self.breakpoints
        if len(bps) < 2 or bps[0] != (0, 0) or bps[-1] != (1, 1):
            raise ValueError("breakpoints must run from (0,0) to (1,1)")
        for (t0, g0), (t1, g1) in zip(bps, bps[1:]):
            if not (t0 < t1 and g0 < g1):
                raise ValueError("breakpoints must strictly increase in both coordinates")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    # fractional-part map g and its inverse ------------------------------

    def _g(self, t: Fraction) -> Fraction:
        bps = self.breakpoints
        for (t0, g0), (t1, g1) in zip(bps, bps[1:]):
            if t0 <= t <= t1:
                return g0 + (t - t0) * (g1 - g0) / (t1 - t0)
        raise ValueError(f"fractional argument {t} outside [0,1]")

    def _g_inv(self, u: Fraction) -> Fraction:
        bps = self.breakpoints
        for (t0, g0), (t1, g1) in zip(bps, bps[1:]):
            if g0 <= u <= g1:
                return t0 + (u - g0) * (t1 - t0) / (g1 - g0)
        raise ValueError(f"fractional value {u} outside [0,1]")

    def evaluate(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        fl = math.floor(x)
        return self.sign * (fl + self._g(x - fl)) + self.offset

    def invert(self, y: Fraction) -> Fraction:
        z = (Fraction(y) - self.offset) * self.sign
        fl = math.floor(z)
        return fl + self._g_inv(z - fl)

    def canonical(self) -> "StepIsoMap1D":
        """Drop interior breakpoints that lie on the segment through their
        neighbours; two maps agree as functions iff canonical forms match."""
        pts = list(self.breakpoints)
        keep = [pts[0]]
        for k in range(1, len(pts) - 1):
            (t0, g0), (t, g), (t1, g1) = keep[-1], pts[k], pts[k + 1]
            if (g - g0) * (t1 - t0) != (g1 - g0) * (t - t0):
                keep.append(pts[k])
        keep.append(pts[-1])
        return StepIsoMap1D(tuple(keep), sign=self.sign, offset=self.offset)

    def to_json_obj(self) -> dict:
        from radolab.rationals import format_rational

        return {
            "breakpoints": [[format_rational(t), format_rational(g)] for t, g in self.breakpoints],
            "sign": self.sign,
            "offset": format_rational(self.offset),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "StepIsoMap1D":
        from radolab.rationals import parse_rational

        return cls(
            breakpoints=tuple(
                (parse_rational(t), parse_rational(g)) for t, g in obj["breakpoints"]
            ),
            sign=int(obj.get("sign", 1)),
            offset=parse_rational(obj.get("offset", "0/1")),
        )


def identity_map() -> StepIsoMap1D:
    return StepIsoMap1D(((Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))))


@lru_cache(maxsize=None)
def pinch_unit_map(n: int) -> StepIsoMap1D:
    """The piecewise-linear bijection of [0,1] sending 1/(n+1) to 1-1/(n+1).

    At n = 1 the middle breakpoint is collinear and the map is the identity.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    t = Fraction(1, n + 1)
    return StepIsoMap1D(((Fraction(0), Fraction(0)), (t, 1 - t), (Fraction(1), Fraction(1))))


def eval_1d(h: StepIsoMap1D, x: Fraction) -> Fraction:
    return h.evaluate(x)


# -- finite-set step-isometry checks ----------------------------------------


@dataclass(frozen=True)
class FloorViolation:
    pair: tuple[int, int]
    source_floor: int
    image_floor: int


@dataclass(frozen=True)
class ThresholdViolation:
    pair: tuple[int, int]
    threshold: int
    source_lt: bool
    image_lt: bool


def _check_pair_lists(
    points: Sequence[FiniteSupportVector], images: Sequence[FiniteSupportVector]
) -> None:
    if len(points) != len(images):
        raise ValueError("points and images must have the same length")
    if len(set(images)) != len(images):
        raise ValueError("images must be pairwise distinct")


def check_step_isometry(
    points: Sequence[FiniteSupportVector],
    images: Sequence[FiniteSupportVector],
    norm: NormSpec,
) -> FloorViolation | None:
    """Exact floor comparison over all pairs; first violation in pair order."""
    _check_pair_lists(points, images)
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            fs = floor_distance(points[i], points[j], norm)
            fi = floor_distance(images[i], images[j], norm)
            if fs != fi:
                return FloorViolation((i, j), fs, fi)
    return None


def check_step_isometry_large(
    points: Sequence[FiniteSupportVector],
    images: Sequence[FiniteSupportVector],
    norm: NormSpec,
    m0: int,
) -> ThresholdViolation | None:
    """Threshold form: ||x-y|| < m iff ||Tx-Ty|| < m, checked only for
    integer thresholds m >= m0 up to the pair diameter. Weaker than the full
    floor condition (m0 = 1 recovers it)."""
    if m0 < 1:
        raise ValueError("m0 must be >= 1")
    _check_pair_lists(points, images)
    n = len(points)
    for i in range(n):
        for j in range(i + 1, n):
            top = max(
                floor_distance(points[i], points[j], norm),
                floor_distance(images[i], images[j], norm),
            )
            for m in range(m0, top + 2):
                mf = Fraction(m)
                src = distance_lt(points[i], points[j], mf, norm)
                img = distance_lt(images[i], images[j], mf, norm)
                if src != img:
                    return ThresholdViolation((i, j), m, src, img)
    return None


# -- coordinate-wise maps ----------------------------------------------------


@dataclass(frozen=True)
class CoordinateStepIso:
    """Coordinate permutation plus a 1D step-isometry per output coordinate.

    ``permutation`` lists (output_index, input_index) pairs for the moved
    coordinates (identity elsewhere); output coordinate i takes the value
    ``f_i(x_(sigma(i)))``. ``maps`` lists (output_index, map) pairs, identity
    where absent. The finite tables are what keeps finite support finite.
    """

    permutation: tuple[tuple[int, int], ...] = ()
    maps: tuple[tuple[int, StepIsoMap1D], ...] = ()

    def __post_init__(self) -> None:
        outs = [o for o, _ in self.permutation]
        ins = [i for _, i in self.permutation]
        if len(set(outs)) != len(outs) or len(set(ins)) != len(ins):
            raise ValueError("permutation table must be injective")
        if set(outs) != set(ins):
            raise ValueError("permutation must be a bijection of a finite index set")
        map_outs = [o for o, _ in self.maps]
        if len(set(map_outs)) != len(map_outs):
            raise ValueError("duplicate map entries")

    def sigma(self) -> dict[int, int]:
        return dict(self.permutation)

    def map_table(self) -> dict[int, StepIsoMap1D]:
        return dict(self.maps)


def apply_coordinatewise(
    m: CoordinateStepIso, v: FiniteSupportVector
) -> FiniteSupportVector:
    sigma = m.sigma()
    table = m.map_table()
    relevant = set(sigma) | set(table) | set(v.support)
    out: dict[int, Fraction] = {}
    ident = identity_map()
    for i in relevant:
        src = sigma.get(i, i)
        f = table.get(i, ident)
        val = f.evaluate(v.get(src))
        if val != 0:
            out[i] = val
    return fsv(out)


# -- the coordinate-wise sup-norm map on rational c00 ------------------------


def c0_counterexample(v: FiniteSupportVector) -> FiniteSupportVector:
    """Apply the n-th pinch map to the n-th coordinate, exactly.

    A step-isometry of the rational finitely supported sequences under the
    sup norm (floors pass through coordinate maxima), but discontinuous:
    e_n/(n+1) -> (1 - 1/(n+1)) e_n.
    """
    if v.support and v.support[0] < 1:
        raise ValueError("coordinate-wise map is indexed from coordinate 1")
    return fsv({i: pinch_unit_map(i).evaluate(val) for i, val in v.entries})


def c0_counterexample_inverse(v: FiniteSupportVector) -> FiniteSupportVector:
    if v.support and v.support[0] < 1:
        raise ValueError("coordinate-wise map is indexed from coordinate 1")
    return fsv({i: pinch_unit_map(i).invert(val) for i, val in v.entries})


def forced_coordinate_witness(
    n: int, eps_grid: Iterable[Fraction]
) -> Fraction | tuple[Fraction, Fraction]:
    """Pin the n-th coordinate of any extension of the sup-norm map at the
    point with n-th coordinate 1/(n+1).

    For each eps in the grid the points ``(1 + 1/(n+1) - eps) e_n`` and
    ``(-1 + 1/(n+1) + eps) e_n`` are within distance 1 of the target, so the
    image must lie in both open unit balls around their images; intersecting
    the resulting constraints on the n-th coordinate gives an interval per
    eps, and both interval endpoints are affine in eps, so the eps -> 0 limit
    is computed by exact linear extrapolation. Returns the single limiting
    value (1 - 1/(n+1)); with a grid too small to extrapolate, returns the
    current interval endpoints instead.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    bound = Fraction(1, n + 1)
    eps_list = sorted({Fraction(e) for e in eps_grid})
    if not eps_list:
        raise ValueError("eps grid must be nonempty")
    for e in eps_list:
        if not (0 < e < bound):
            raise ValueError(f"eps {e} outside (0, 1/{n + 1})")

    lowers: list[tuple[Fraction, Fraction]] = []
    uppers: list[tuple[Fraction, Fraction]] = []
    for e in eps_list:
        y = basis(n).scale(1 + bound - e)
        z = basis(n).scale(-1 + bound + e)
        ty = c0_counterexample(y).get(n)
        tz = c0_counterexample(z).get(n)
        lowers.append((e, max(ty - 1, tz - 1)))
        uppers.append((e, min(ty + 1, tz + 1)))

    lo_star = max(v for _, v in lowers)
    hi_star = min(v for _, v in uppers)
    if lo_star >= hi_star:
        raise EmptyIntersectionError(
            f"constraint intersection empty at n={n}: [{lo_star}, {hi_star}]"
        )
    if len(eps_list) < 2:
        return (lo_star, hi_star)

    lo_limit = _affine_value_at_zero(lowers)
    hi_limit = _affine_value_at_zero(uppers)
    if lo_limit is None or hi_limit is None or lo_limit != hi_limit:
        return (lo_star, hi_star)
    return lo_limit


def _affine_value_at_zero(samples: list[tuple[Fraction, Fraction]]) -> Fraction | None:
    (e1, v1), (e2, v2) = samples[0], samples[1]
    slope = (v2 - v1) / (e2 - e1)
    for e, v in samples:
        if v1 + slope * (e - e1) != v:
            return None
    return v1 - slope * e1


# -- rigidity oracle ---------------------------------------------------------


def enumerate_step_isometric_bijections(
    points: Sequence[FiniteSupportVector],
    norm: NormSpec,
    max_points: int = 8,
) -> list[tuple[int, ...]]:
    """All self-bijections of the point list preserving the floor matrix.

    Backtracking over partial assignments with early pruning; results come
    out in lexicographic order of the image tuple. Capped at ``max_points``
    (8 keeps the worst case at 8! partial checks).
    """
    n = len(points)
    if n > max_points:
        raise SizeCapError(f"{n} points exceeds the enumeration cap {max_points}")
    floors = [
        [floor_distance(points[i], points[j], norm) for j in range(n)] for i in range(n)
    ]
    results: list[tuple[int, ...]] = []
    perm: list[int] = [0] * n
    used = [False] * n

    def extend(i: int) -> None:
        if i == n:
            results.append(tuple(perm))
            return
        for c in range(n):
            if used[c]:
                continue
            if all(floors[i][k] == floors[c][perm[k]] for k in range(i)):
                perm[i] = c
                used[c] = True
                extend(i + 1)
                used[c] = False
        return

    extend(0)
    return results


# -- decomposition of an opaque map ------------------------------------------


@dataclass(frozen=True)
class NotCoordinatewise:
    witness: FiniteSupportVector
    detail: str


def decompose_coordinatewise(
    T: Callable[[FiniteSupportVector], FiniteSupportVector],
    d: int,
    probes: Iterable[Fraction],
) -> CoordinateStepIso | NotCoordinatewise:
    """Recover (permutation, per-coordinate maps) from an opaque map on a
    dimension-d truncation, or produce a witness vector where no
    coordinate-wise model reproduces T.

    Candidate 1D maps are read off the images of single-coordinate probes
    ``lambda e_k``; the permutation comes from where those images land. The
    candidate is then validated against T on every probe (including values
    outside [0,1]) and on a deterministic grid of mixed vectors. Validation
    failure is a first-class result, not an error; an unusable probe grid
    (missing 1, or a probe with zero image) raises AmbiguousProbeError.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    probe_list = sorted({Fraction(p) for p in probes} - {Fraction(0)})
    unit_probes = [p for p in probe_list if 0 < p <= 1]
    if Fraction(1) not in unit_probes:
        raise AmbiguousProbeError("probe grid must contain 1 to fix the unit value")
    if not T(zero_vector()).is_zero():
        raise ValueError("T must fix the zero vector")

    out_of: dict[int, int] = {}
    samples: dict[int, dict[Fraction, Fraction]] = {}
    for k in range(1, d + 1):
        seen: dict[Fraction, Fraction] = {}
        out_idx: int | None = None
        for lam in probe_list:
            w = T(basis(k).scale(lam))
            sup = w.support
            if len(sup) == 0:
                raise AmbiguousProbeError(f"probe {lam}*e_{k} has zero image")
            if len(sup) > 1:
                return NotCoordinatewise(basis(k).scale(lam), "image has support size > 1")
            if out_idx is None:
                out_idx = sup[0]
            elif out_idx != sup[0]:
                return NotCoordinatewise(
                    basis(k).scale(lam), "output coordinate varies with the probe value"
                )
            seen[lam] = w.get(sup[0])
        assert out_idx is not None
        if out_idx in out_of.values() or out_idx > d:
            return NotCoordinatewise(basis(k), "output coordinates collide or leave range")
        out_of[k] = out_idx
        samples[k] = seen

    maps: dict[int, StepIsoMap1D] = {}
    for k in range(1, d + 1):
        i = out_of[k]
        unit_value = samples[k][Fraction(1)]
        if abs(unit_value) != 1:
            return NotCoordinatewise(basis(k), "unit probe does not map to a unit")
        sign = 1 if unit_value == 1 else -1
        pts = [(Fraction(0), Fraction(0))]
        pts += [(lam, sign * samples[k][lam]) for lam in unit_probes]
        for (t0, g0), (t1, g1) in zip(pts, pts[1:]):
            if not (t0 < t1 and g0 < g1 and 0 <= g1 <= 1):
                return NotCoordinatewise(
                    basis(k), "probe values are not an increasing bijection of [0,1]"
                )
        candidate = StepIsoMap1D(tuple(pts), sign=sign).canonical()
        for lam, value in samples[k].items():
            if candidate.evaluate(lam) != value:
                return NotCoordinatewise(
                    basis(k).scale(lam), "1D model disagrees outside the unit interval"
                )
        if candidate != identity_map():
            maps[i] = candidate

    # canonical minimal tables: fixed points and identity maps stay implicit
    model = CoordinateStepIso(
        permutation=tuple(sorted((i, k) for k, i in out_of.items() if i != k)),
        maps=tuple(sorted(maps.items())),
    )

    picks = _spread(unit_probes, 3)
    mixed: list[FiniteSupportVector] = []
    for k in range(1, d):
        for a in picks:
            for b in picks:
                mixed.append(basis(k).scale(a) + basis(k + 1).scale(b))
    if d >= 3:
        mixed.append(basis(1).scale(picks[0]) + basis(2).scale(picks[-1]) + basis(3).scale(picks[0]))
    for v in mixed:
        if T(v) != apply_coordinatewise(model, v):
            return NotCoordinatewise(v, "disagrees with T on a mixed probe vector")
    return model


def _spread(values: Sequence[Fraction], k: int) -> list[Fraction]:
    if len(values) <= k:
        return list(values)
    return [values[0], values[len(values) // 2], values[-1]]
