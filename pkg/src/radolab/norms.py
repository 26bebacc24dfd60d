"""Norm specifications and exact distance predicates.

Distances under an integer-p l_p norm or the sup norm are compared against
rationals without ever extracting a root: the l_p comparison ``|x-y| < r``
is decided as ``sum |x_i - y_i|^p < r^p`` in rational arithmetic, and floors
of distances are found by exact integer search. The knife edge between
``|x-y| < k`` and ``|x-y| = k`` is exactly where these graphs live, so no
floating point is allowed near a predicate.

The ``hull_gauge`` kind (the renormed-l2 gauge at a finite truncation) is
intrinsically numeric; it is accepted only by the approximation entry point
and rejected by every exact predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from radolab.rationals import format_rational, parse_rational
from radolab.vectors import FiniteSupportVector

__all__ = [
    "NormSpec",
    "UnsupportedNormError",
    "lp",
    "linf",
    "hull_gauge",
    "L1",
    "L2",
    "LINF",
    "parse_norm",
    "lp_power_distance",
    "sup_distance",
    "distance_lt",
    "distance_le",
    "floor_distance",
    "norm_approx",
]


class UnsupportedNormError(ValueError):
    """Raised when an exact predicate is asked to use an inexact norm."""


@dataclass(frozen=True)
class NormSpec:
    """Which norm governs distances.

    kind "lp" with integer p >= 1, "linf", or "hull_gauge" (renormed l2 at a
    truncation dimension, approximate to ``tolerance``). Only the first two
    support exact comparison.
    """

    kind: str
    p: int | None = None
    truncation: int | None = None
    tolerance: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind == "lp":
            if not isinstance(self.p, int) or self.p < 1:
                raise ValueError(f"lp norm requires integer p >= 1, got {self.p!r}")
        elif self.kind == "linf":
            if self.p is not None:
                raise ValueError("linf norm takes no p")
        elif self.kind == "hull_gauge":
            if not isinstance(self.truncation, int) or self.truncation < 1:
                raise ValueError("hull_gauge requires integer truncation >= 1")
            if self.tolerance is None or Fraction(self.tolerance) <= 0:
                raise ValueError("hull_gauge requires tolerance > 0")
        else:
            raise ValueError(f"unknown norm kind {self.kind!r}")

    @property
    def is_exact(self) -> bool:
        return self.kind in ("lp", "linf")

    @property
    def is_one_symmetric(self) -> bool:
        # permutation invariance of the coordinate norms; the gauge kind is
        # anchored to coordinate 0 and is not.
        return self.kind in ("lp", "linf")

    def label(self) -> str:
        if self.kind == "lp":
            return f"l{self.p}"
        if self.kind == "linf":
            return "linf"
        return f"hull-gauge:{self.truncation}:{format_rational(self.tolerance)}"

    def to_json_obj(self) -> dict:
        obj: dict = {"kind": self.kind}
        if self.kind == "lp":
            obj["p"] = self.p
        elif self.kind == "hull_gauge":
            obj["truncation"] = self.truncation
            obj["tolerance"] = format_rational(self.tolerance)
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "NormSpec":
        kind = obj["kind"]
        if kind == "lp":
            return lp(int(obj["p"]))
        if kind == "linf":
            return linf()
        return hull_gauge(int(obj["truncation"]), parse_rational(obj["tolerance"]))


def lp(p: int) -> NormSpec:
    return NormSpec(kind="lp", p=p)


def linf() -> NormSpec:
    return NormSpec(kind="linf")


def hull_gauge(truncation: int, tolerance: Fraction | str) -> NormSpec:
    if isinstance(tolerance, str):
        tolerance = parse_rational(tolerance)
    return NormSpec(kind="hull_gauge", truncation=truncation, tolerance=Fraction(tolerance))


L1 = lp(1)
L2 = lp(2)
LINF = linf()


def parse_norm(text: str) -> NormSpec:
    """Parse ``l1``/``l2``/``l<p>``/``linf``/``hull-gauge:<n>:<tol>``."""
    s = text.strip().lower()
    if s == "linf":
        return linf()
    if s.startswith("hull-gauge:"):
        _, n, tol = s.split(":")
        return hull_gauge(int(n), parse_rational(tol))
    if s.startswith("l"):
        return lp(int(s[1:]))
    raise ValueError(f"unknown norm {text!r}")


def _require_exact(norm: NormSpec) -> None:
    if not norm.is_exact:
        raise UnsupportedNormError(
            "exact predicate needs an lp/linf norm; the hull gauge is approximate"
        )


def lp_power_distance(x: FiniteSupportVector, y: FiniteSupportVector, p: int) -> Fraction:
    """sum over the union support of |x_i - y_i|^p, exactly."""
    diff = x - y
    total = Fraction(0)
    for _, v in diff.entries:
        total += abs(v) ** p
    return total


def sup_distance(x: FiniteSupportVector, y: FiniteSupportVector) -> Fraction:
    diff = x - y
    best = Fraction(0)
    for _, v in diff.entries:
        a = abs(v)
        if a > best:
            best = a
    return best


def distance_lt(
    x: FiniteSupportVector, y: FiniteSupportVector, r: Fraction, norm: NormSpec
) -> bool:
    """Exactly decide ||x - y|| < r (strict)."""
    _require_exact(norm)
    r = Fraction(r)
    if r < 0:
        raise ValueError("radius must be >= 0")
    if norm.kind == "linf":
        return sup_distance(x, y) < r
    return lp_power_distance(x, y, norm.p) < r**norm.p


def distance_le(
    x: FiniteSupportVector, y: FiniteSupportVector, r: Fraction, norm: NormSpec
) -> bool:
    """Exactly decide ||x - y|| <= r."""
    _require_exact(norm)
    r = Fraction(r)
    if r < 0:
        raise ValueError("radius must be >= 0")
    if norm.kind == "linf":
        return sup_distance(x, y) <= r
    return lp_power_distance(x, y, norm.p) <= r**norm.p


def floor_distance(x: FiniteSupportVector, y: FiniteSupportVector, norm: NormSpec) -> int:
    """The unique k in N with k <= ||x - y|| < k + 1, found exactly.

    For l1 and linf the distance itself is rational and the floor is direct;
    for general integer p the search walks k upward comparing k^p against
    the exact p-th power of the distance (desk-scale distances are small, so
    no integer root routine is needed).
    """
    _require_exact(norm)
    if norm.kind == "linf":
        d = sup_distance(x, y)
        return d.numerator // d.denominator
    if norm.p == 1:
        d = lp_power_distance(x, y, 1)
        return d.numerator // d.denominator
    power = lp_power_distance(x, y, norm.p)
    k = 0
    while Fraction(k + 1) ** norm.p <= power:
        k += 1
    return k


def norm_approx(x: FiniteSupportVector, norm: NormSpec, tol: Fraction) -> float:
    """Decimal approximation of ||x|| within tol. Reporting only.

    Never used inside a predicate. For the hull gauge this delegates to the
    renorm solver.
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if norm.kind == "hull_gauge":
        from radolab import renorm  # local import; renorm depends on this module

        model = renorm.RenormModel(norm.truncation)
        return renorm.gauge(x, model, min(tol, norm.tolerance)).value
    if x.is_zero():
        return 0.0
    if norm.kind == "linf":
        return float(sup_distance(x, FiniteSupportVector()))
    if norm.p == 1:
        return float(lp_power_distance(x, FiniteSupportVector(), 1))
    power = lp_power_distance(x, FiniteSupportVector(), norm.p)
    # bisect t with t^p = power; exact comparisons keep the bracket true
    lo, hi = Fraction(0), Fraction(1) + power
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid**norm.p <= power:
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)
