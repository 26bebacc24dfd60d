"""Deterministic truncations of countable dense point families.

Two families live here: the staged construction whose points are
``s^(N+i) = u_i + q_i * e_(N+i)`` (each new point is an already-representable
low-coordinate vector plus a fresh top coordinate), and rejection-sampled
sets with no repeated pairwise distance. Both are reproducible: identical
parameters give byte-identical serializations.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from radolab.norms import NormSpec, lp_power_distance, sup_distance
from radolab.rationals import format_rational
from radolab.rng import CounterStream
from radolab.vectors import FiniteSupportVector, basis, fsv

__all__ = [
    "IndexedPoint",
    "RadoSet",
    "StageSizeError",
    "NoRepeatBudgetError",
    "RepeatedDistanceWitness",
    "gen_Q",
    "stage_sizes",
    "build_rado",
    "has_repeated_distance",
    "gen_no_repeated_distance",
]

DEFAULT_POINT_CAP = 100_000


class StageSizeError(ValueError):
    """Requested stage count would exceed the configured point cap."""

    def __init__(self, stages: int, projected: int, cap: int) -> None:
        super().__init__(
            f"{stages} stages would generate {projected} points, above the cap {cap}"
        )
        self.stages = stages
        self.projected = projected
        self.cap = cap


@dataclass(frozen=True)
class IndexedPoint:
    """A point together with its index and the stage that created it.

    The support sits inside {1..index} and the coordinate at ``index`` is
    nonzero, so the index is always the top of the support.
    """

    index: int
    point: FiniteSupportVector
    stage: int

    def __post_init__(self) -> None:
        if self.index < 1 or self.stage < 1:
            raise ValueError("index and stage must be >= 1")
        support = self.point.support
        if not support or support[-1] != self.index:
            raise ValueError(f"point {self.index}: index must be the top of the support")
        if support[0] < 1:
            raise ValueError("indexed points use coordinates >= 1")

    def to_json_obj(self) -> dict:
        return {
            "index": self.index,
            "stage": self.stage,
            "vector": self.point.to_json_obj(),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "IndexedPoint":
        return cls(
            index=int(obj["index"]),
            point=FiniteSupportVector.from_json_obj(obj["vector"]),
            stage=int(obj["stage"]),
        )


@dataclass(frozen=True)
class RadoSet:
    points: tuple[IndexedPoint, ...]
    stages_completed: int

    def __post_init__(self) -> None:
        for pos, pt in enumerate(self.points, start=1):
            if pt.index != pos:
                raise ValueError("points must carry consecutive indices 1..N")

    def __len__(self) -> int:
        return len(self.points)

    def point_map(self) -> dict[int, FiniteSupportVector]:
        return {pt.index: pt.point for pt in self.points}

    def to_jsonl(self) -> str:
        lines = [json.dumps(pt.to_json_obj(), sort_keys=True) for pt in self.points]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "RadoSet":
        pts = tuple(
            IndexedPoint.from_json_obj(json.loads(line))
            for line in text.splitlines()
            if line.strip()
        )
        stages = max((pt.stage for pt in pts), default=0)
        return cls(points=pts, stages_completed=stages)


def gen_Q(n: int) -> list[Fraction]:
    """All rationals x with |x| <= n and denominator <= n, ascending."""
    if n < 1:
        raise ValueError("n must be >= 1")
    vals = {Fraction(a, b) for b in range(1, n + 1) for a in range(-n * b, n * b + 1)}
    return sorted(vals)


def stage_sizes(stages: int) -> list[int]:
    """Number of points each stage appends (stage 1 contributes one point)."""
    if stages < 1:
        raise ValueError("stages must be >= 1")
    sizes = [1]
    for n in range(2, stages + 1):
        q = len(gen_Q(n))
        sizes.append(q ** (n - 1) * (q - 1))
    return sizes


def build_rado(stages: int, cap: int = DEFAULT_POINT_CAP) -> RadoSet:
    """Stages 1..``stages`` of the staged dense-set construction.

    Stage 1 is {e_1}. At stage n, with N points already built, every vector
    u with coordinates 1..n-1 drawn from gen_Q(n) is paired with every
    nonzero q in gen_Q(n), in u-lexicographic-then-q order, and the pair
    contributes the point u + q * e_(N+i). The enumeration order is fixed so
    runs are reproducible and comparable.
    """
    projected = sum(stage_sizes(stages))
    if projected > cap:
        raise StageSizeError(stages, projected, cap)

    points: list[IndexedPoint] = [IndexedPoint(1, basis(1), 1)]
    for n in range(2, stages + 1):
        q_all = gen_Q(n)
        q_nonzero = [q for q in q_all if q != 0]
        for u_coords in itertools.product(q_all, repeat=n - 1):
            u = fsv({k + 1: c for k, c in enumerate(u_coords)})
            for q in q_nonzero:
                index = len(points) + 1
                points.append(IndexedPoint(index, u + basis(index).scale(q), n))
    return RadoSet(points=tuple(points), stages_completed=stages)


@dataclass(frozen=True)
class RepeatedDistanceWitness:
    pair_a: tuple[int, int]
    pair_b: tuple[int, int]
    power_distance: Fraction

    def describe(self) -> str:
        return (
            f"pairs {self.pair_a} and {self.pair_b} share distance key "
            f"{format_rational(self.power_distance)}"
        )


def _distance_key(
    x: FiniteSupportVector, y: FiniteSupportVector, norm: NormSpec
) -> Fraction:
    # comparing p-th powers (or the sup itself) compares distances exactly
    if norm.kind == "linf":
        return sup_distance(x, y)
    return lp_power_distance(x, y, norm.p)


def has_repeated_distance(
    points: list[FiniteSupportVector], norm: NormSpec
) -> RepeatedDistanceWitness | None:
    """First pair of pairs with equal distance, in canonical pair order."""
    if not norm.is_exact:
        raise ValueError("repeated-distance checking needs an exact norm")
    seen: dict[Fraction, tuple[int, int]] = {}
    for i, j in itertools.combinations(range(len(points)), 2):
        key = _distance_key(points[i], points[j], norm)
        if key in seen:
            return RepeatedDistanceWitness(seen[key], (i, j), key)
        seen[key] = (i, j)
    return None


class NoRepeatBudgetError(RuntimeError):
    """Resample budget exhausted; carries the last collision witness."""

    def __init__(self, attempts: int, witness: RepeatedDistanceWitness | None) -> None:
        detail = witness.describe() if witness else "no witness recorded"
        super().__init__(f"gave up after {attempts} draws; last collision: {detail}")
        self.attempts = attempts
        self.witness = witness


def gen_no_repeated_distance(
    dim: int,
    count: int,
    norm: NormSpec,
    seed: int,
    denom_bound: int,
    max_attempts_per_point: int = 200,
) -> list[FiniteSupportVector]:
    """``count`` random rational points in dimension ``dim`` with all pairwise
    distances distinct, decided exactly.

    Coordinates are a/b with b <= denom_bound; colliding points are
    rejection-resampled. Deterministic given the seed.
    """
    if count < 1 or dim < 1:
        raise ValueError("dim and count must be >= 1")
    if not norm.is_exact:
        raise ValueError("generation needs an exact norm")
    stream = CounterStream(seed, stream=1)
    accepted: list[FiniteSupportVector] = []
    key_owner: dict[Fraction, tuple[int, int]] = {}
    attempts = 0
    budget = max_attempts_per_point * count
    last_witness: RepeatedDistanceWitness | None = None
    while len(accepted) < count:
        if attempts >= budget:
            raise NoRepeatBudgetError(attempts, last_witness)
        attempts += 1
        candidate = fsv(
            {k: stream.fraction(denom_bound, scale=max(1, count)) for k in range(1, dim + 1)}
        )
        new_pos = len(accepted)
        new_keys: dict[Fraction, tuple[int, int]] = {}
        ok = True
        for idx, prev in enumerate(accepted):
            key = _distance_key(prev, candidate, norm)
            owner = key_owner.get(key) or new_keys.get(key)
            if key == 0 or owner is not None:
                last_witness = RepeatedDistanceWitness(
                    owner or (idx, new_pos), (idx, new_pos), key
                )
                ok = False
                break
            new_keys[key] = (idx, new_pos)
        if not ok:
            continue
        accepted.append(candidate)
        key_owner.update(new_keys)
    return accepted
