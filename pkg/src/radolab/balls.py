"""Ball-intersection constructions: shrinking two-ball intersections at a
strongly extreme point, the L1 step-function two-ball and four-ball
witnesses, and the sum-of-two-unit-vectors decomposition.

L1(0,1) is discretized to functions constant on the cells [k/m, (k+1)/m) of
an even uniform grid; every function used by the constructions (two-level
step functions and indicator truncations) is exactly representable there, so
all the L1 identities are checked in rational arithmetic with no tolerance.
The two-unit-vector decomposition is the one intrinsically numeric routine
(the distance-1 point is generically irrational) and uses float bisection
against a caller tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from radolab.norms import NormSpec, distance_le, distance_lt, lp_power_distance
from radolab.rationals import format_rational
from radolab.rng import bits64_array
from radolab.vectors import FiniteSupportVector, basis, fsv

__all__ = [
    "BallSpec",
    "StepFn",
    "SplitBoundaryError",
    "BisectionBudgetError",
    "ball_membership",
    "small_intersection_balls",
    "l1_two_ball_witness",
    "four_ball_centers",
    "l1_four_ball_probe",
    "FourBallProbeResult",
    "two_unit_decomposition",
]


@dataclass(frozen=True)
class BallSpec:
    center: FiniteSupportVector
    radius: Fraction
    open: bool = True

    def __post_init__(self) -> None:
        if Fraction(self.radius) <= 0:
            raise ValueError("radius must be > 0")


def ball_membership(b: BallSpec, v: FiniteSupportVector, norm: NormSpec) -> bool:
    """Exact membership; strict inequality for open balls."""
    if b.open:
        return distance_lt(v, b.center, b.radius, norm)
    return distance_le(v, b.center, b.radius, norm)


def small_intersection_balls(
    x: FiniteSupportVector, delta: Fraction
) -> tuple[BallSpec, BallSpec]:
    """The two open unit balls whose intersection squeezes around x/(1+delta).

    For x a strongly extreme point of the relevant unit ball (the caller
    supplies that; the all-ones vector under the sup norm is the stock
    example), any member z of both balls has z = (x+y)/(1+delta) with
    ||x+y|| and ||x-y|| below 1+delta, hence ||y|| below the epsilon that
    delta certifies, and the intersection sits inside B(x/(1+delta), eps).
    Only that direction is claimed.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be > 0")
    scale = Fraction(2) / (1 + delta)
    return (
        BallSpec(center=FiniteSupportVector(), radius=Fraction(1), open=True),
        BallSpec(center=x.scale(scale), radius=Fraction(1), open=True),
    )


# -- L1 step functions -------------------------------------------------------


class SplitBoundaryError(ValueError):
    """No grid-cell boundary splits the mass of f into two equal halves."""


@dataclass(frozen=True)
class StepFn:
    """Function constant on each cell [k/m, (k+1)/m); exact L1 arithmetic."""

    grid_size: int
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.grid_size < 2 or self.grid_size % 2 != 0:
            raise ValueError("grid_size must be a positive even integer")
        if len(self.values) != self.grid_size:
            raise ValueError("values must have grid_size entries")
        for v in self.values:
            if not isinstance(v, Fraction):
                raise TypeError("values must be Fractions")

    def l1_norm(self) -> Fraction:
        return sum((abs(v) for v in self.values), Fraction(0)) / self.grid_size

    def __add__(self, other: "StepFn") -> "StepFn":
        self._check_grid(other)
        return StepFn(self.grid_size, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "StepFn") -> "StepFn":
        self._check_grid(other)
        return StepFn(self.grid_size, tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c: Fraction) -> "StepFn":
        c = Fraction(c)
        return StepFn(self.grid_size, tuple(c * v for v in self.values))

    def _check_grid(self, other: "StepFn") -> None:
        if self.grid_size != other.grid_size:
            raise ValueError("grid sizes differ")

    def to_json_obj(self) -> dict:
        return {
            "grid_size": self.grid_size,
            "values": [format_rational(v) for v in self.values],
        }

    @classmethod
    def constant(cls, grid_size: int, value: Fraction) -> "StepFn":
        return cls(grid_size, (Fraction(value),) * grid_size)

    @classmethod
    def two_level(cls, grid_size: int, left: Fraction, right: Fraction) -> "StepFn":
        """left on [0, 1/2], right on (1/2, 1]."""
        half = grid_size // 2
        return cls(
            grid_size, (Fraction(left),) * half + (Fraction(right),) * (grid_size - half)
        )


def l1_two_ball_witness(f: StepFn, mu: Fraction) -> tuple[StepFn, StepFn]:
    """Two points of B(0,1) cap B(f,1) at L1 distance exactly 2*mu.

    Requires ||f|| = 2*lambda with 0 < lambda < mu < 1 and a cell boundary
    alpha splitting the mass of f evenly (constant f has alpha = 1/2). The
    returned pair is ((mu/lambda) f restricted to [0,alpha], the complementary
    restriction); all five identities ||g1|| = ||g2|| = mu,
    ||g1 - f|| = ||g2 - f|| = mu, ||g1 - g2|| = 2*mu are asserted exactly
    before returning.
    """
    mu = Fraction(mu)
    lam = f.l1_norm() / 2
    if not (0 < lam < mu < 1):
        raise ValueError(f"need 0 < lambda < mu < 1, got lambda={lam}, mu={mu}")
    m = f.grid_size
    prefix = Fraction(0)
    boundary = None
    for c in range(1, m):
        prefix += abs(f.values[c - 1])
        if prefix == lam * m:
            boundary = c
            break
        if prefix > lam * m:
            break
    if boundary is None:
        raise SplitBoundaryError("no cell boundary splits the mass of f evenly")

    ratio = mu / lam
    g1 = StepFn(
        m,
        tuple(ratio * v if c < boundary else Fraction(0) for c, v in enumerate(f.values)),
    )
    g2 = StepFn(
        m,
        tuple(ratio * v if c >= boundary else Fraction(0) for c, v in enumerate(f.values)),
    )
    checks = (
        g1.l1_norm() == mu,
        g2.l1_norm() == mu,
        (g1 - f).l1_norm() == mu,
        (g2 - f).l1_norm() == mu,
        (g1 - g2).l1_norm() == 2 * mu,
    )
    if not all(checks):
        raise AssertionError(f"witness identities failed: {checks}")
    return g1, g2


def four_ball_centers(delta: Fraction, grid_size: int) -> tuple[StepFn, StepFn, StepFn, StepFn]:
    """Centers of the four unit balls whose intersection pinches the origin."""
    delta = Fraction(delta)
    hi = 2 - delta
    return (
        StepFn.two_level(grid_size, hi, Fraction(0)),
        StepFn.two_level(grid_size, -hi, Fraction(0)),
        StepFn.two_level(grid_size, Fraction(0), hi),
        StepFn.two_level(grid_size, Fraction(0), -hi),
    )


@dataclass(frozen=True)
class FourBallProbeResult:
    delta: Fraction
    grid_size: int
    samples: int
    members_found: int
    max_norm: Fraction | None  # None when no sample landed in the intersection
    examples: tuple[StepFn, ...] = ()  # first few members, for dual-route checks

    def to_csv_row(self) -> str:
        mx = "" if self.max_norm is None else format_rational(self.max_norm)
        return f"{format_rational(self.delta)},{self.grid_size},{self.samples},{self.members_found},{mx}"


def l1_four_ball_probe(
    delta: Fraction, grid_size: int, samples: int, seed: int, keep_examples: int = 0
) -> FourBallProbeResult:
    """Rejection-sample step functions inside the four-ball intersection and
    report the largest L1 norm observed (the construction bounds it by delta).

    Membership is exact: cell values are dyadic rationals and the four L1
    tests run in integer arithmetic over a common denominator, vectorized.
    Sample amplitudes follow an 8-level ladder up to ~delta so the probe
    explores the intersection rather than clustering near zero. Finding no
    member is a valid (empty) report.
    """
    delta = Fraction(delta)
    if not (0 < delta < 1):
        raise ValueError("need 0 < delta < 1")
    if grid_size < 2 or grid_size % 2:
        raise ValueError("grid_size must be even and >= 2")
    if samples < 0:
        raise ValueError("samples must be >= 0")

    m = grid_size
    half = m // 2
    scale_denom = 1 << 12  # dyadic resolution of sampled cell values
    dn, dd = delta.numerator, delta.denominator
    c_scaled = (2 * dd - dn) * scale_denom  # (2 - delta) over denominator dd*scale_denom
    rhs = m * dd * scale_denom

    ladder = [
        max(1, (level * dn * scale_denom) // (4 * dd)) for level in range(1, 9)
    ]  # amplitude bounds, roughly delta/4 .. 2*delta (high rungs probe past the bound)

    members = 0
    best_sum = -1
    best_row: np.ndarray | None = None
    kept: list[StepFn] = []
    batch = 4096
    drawn = 0
    stream = 0
    while drawn < samples:
        take = min(batch, samples - drawn)
        words = bits64_array(seed, stream, 0, take * m).reshape(take, m)
        stream += 1
        bounds = np.array(
            [ladder[(drawn + r) % len(ladder)] for r in range(take)], dtype=np.int64
        )
        spans = 2 * bounds + 1
        vals = (words % spans.astype(np.uint64)[:, None]).astype(np.int64) - bounds[:, None]
        drawn += take

        first = vals[:, :half]
        second = vals[:, half:]
        abs_first = np.abs(first).sum(axis=1)
        abs_second = np.abs(second).sum(axis=1)
        ok = (
            (np.abs(first * dd - c_scaled).sum(axis=1) + abs_second * dd < rhs)
            & (np.abs(first * dd + c_scaled).sum(axis=1) + abs_second * dd < rhs)
            & (np.abs(second * dd - c_scaled).sum(axis=1) + abs_first * dd < rhs)
            & (np.abs(second * dd + c_scaled).sum(axis=1) + abs_first * dd < rhs)
        )
        members += int(ok.sum())
        if ok.any():
            sums = np.abs(vals[ok]).sum(axis=1)
            top = int(sums.max())
            if top > best_sum:
                best_sum = top
                best_row = vals[ok][int(sums.argmax())].copy()
            for row in vals[ok][: max(0, keep_examples - len(kept))]:
                kept.append(StepFn(m, tuple(Fraction(int(a), scale_denom) for a in row)))

    max_norm = None
    if best_row is not None:
        max_norm = Fraction(best_sum, m * scale_denom)
        # cross-check the winning sample against the exact membership path
        step_fn = StepFn(m, tuple(Fraction(int(a), scale_denom) for a in best_row))
        for center in four_ball_centers(delta, m):
            if not (step_fn - center).l1_norm() < 1:
                raise AssertionError("vectorized membership disagrees with exact arithmetic")
        if step_fn.l1_norm() != max_norm:
            raise AssertionError("norm bookkeeping mismatch")
    return FourBallProbeResult(
        delta=delta,
        grid_size=m,
        samples=samples,
        members_found=members,
        max_norm=max_norm,
        examples=tuple(kept),
    )


# -- sum of two unit vectors --------------------------------------------------


class BisectionBudgetError(RuntimeError):
    """Bisection failed to meet the tolerance within the iteration budget."""


def two_unit_decomposition(
    x: FiniteSupportVector,
    norm: NormSpec,
    tol: Fraction,
    dim: int | None = None,
    max_iter: int = 200,
) -> FiniteSupportVector:
    """A point y with ||y|| = 1 and ||x - y|| = 1 (within tol), so that
    x = y + (x - y) is a sum of two unit vectors.

    Walks the unit-sphere path from x/||x|| toward -x/||x|| inside the
    2-plane spanned by x and an independent coordinate direction,
    renormalizing; the endpoints bracket distance 1 (distances 1 - ||x|| and
    1 + ||x||, validated exactly via the p-th power precondition), and float
    bisection pins the crossing. Needs dimension >= 2 and an lp norm; the
    zero vector gets the trivial answer e_1.
    """
    if norm.kind != "lp":
        raise ValueError("decomposition is implemented for lp norms")
    tol_f = float(tol)
    if tol_f <= 0:
        raise ValueError("tol must be > 0")
    if dim is None:
        dim = max(2, x.max_index or 0)
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    if x.support and x.support[-1] > dim:
        raise ValueError("x does not fit in the requested dimension")
    if x.is_zero():
        return basis(1)

    p = norm.p
    power = lp_power_distance(x, FiniteSupportVector(), p)
    if not power < 1:
        raise ValueError("need ||x|| < 1 (checked exactly on p-th powers)")

    xv = np.zeros(dim)
    for i, v in x.entries:
        xv[i - 1] = float(v)
    xnorm = float(np.sum(np.abs(xv) ** p) ** (1.0 / p))
    xhat = xv / xnorm
    w = np.zeros(dim)
    w[int(np.argmin(np.abs(xhat)))] = 1.0

    def point_on_path(theta: float) -> np.ndarray:
        v = np.cos(theta) * xhat + np.sin(theta) * w
        return v / np.sum(np.abs(v) ** p) ** (1.0 / p)

    def dist_err(theta: float) -> float:
        return float(np.sum(np.abs(xv - point_on_path(theta)) ** p) ** (1.0 / p)) - 1.0

    lo, hi = 0.0, float(np.pi)
    # endpoints: distance 1 - ||x|| < 1 and 1 + ||x|| > 1
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        err = dist_err(mid)
        if abs(err) <= 0.1 * tol_f:  # margin keeps coordinates within tol too
            y = point_on_path(mid)
            return fsv({i + 1: Fraction(float(c)) for i, c in enumerate(y) if c != 0.0})
        if err < 0:
            lo = mid
        else:
            hi = mid
    raise BisectionBudgetError(f"no distance-1 point within tol after {max_iter} bisections")
