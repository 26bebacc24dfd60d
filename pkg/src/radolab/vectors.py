"""Finitely supported vectors with exact rational coordinates.

A ``FiniteSupportVector`` is an immutable map from coordinate index to a
nonzero ``Fraction``; the support is exactly the key set. Coordinates are
indexed from 0 upwards (0 is used by the renormed-gauge model, everything
else starts at 1). All arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from radolab.rationals import format_rational, parse_rational

__all__ = ["FiniteSupportVector", "fsv", "basis", "zero_vector", "from_coords"]

RationalLike = Fraction | int | str


def _coerce(value: RationalLike) -> Fraction:
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


@dataclass(frozen=True)
class FiniteSupportVector:
    """Eventually-zero coordinate sequence, stored sparsely.

    ``entries`` is a tuple of ``(index, value)`` pairs with strictly
    ascending indices and nonzero values; use :func:`fsv` to build one from
    a mapping.
    """

    entries: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        last = -1
        for index, value in self.entries:
            if not isinstance(index, int) or index < 0:
                raise ValueError(f"coordinate index must be an int >= 0, got {index!r}")
            if index <= last:
                raise ValueError("entries must have strictly ascending indices")
            if not isinstance(value, Fraction):
                raise TypeError(f"coordinate value must be a Fraction, got {type(value)}")
            if value == 0:
                raise ValueError(f"zero stored at index {index}; support must be exact")
            last = index

    # -- access ----------------------------------------------------------

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    @property
    def max_index(self) -> int | None:
        return self.entries[-1][0] if self.entries else None

    def get(self, index: int) -> Fraction:
        for i, v in self.entries:
            if i == index:
                return v
            if i > index:
                break
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.entries

    def __iter__(self):
        return iter(self.entries)

    # -- arithmetic (exact) ----------------------------------------------

    def __add__(self, other: "FiniteSupportVector") -> "FiniteSupportVector":
        acc: dict[int, Fraction] = dict(self.entries)
        for i, v in other.entries:
            s = acc.get(i, Fraction(0)) + v
            if s == 0:
                acc.pop(i, None)
            else:
                acc[i] = s
        return FiniteSupportVector(tuple(sorted(acc.items())))

    def __neg__(self) -> "FiniteSupportVector":
        return FiniteSupportVector(tuple((i, -v) for i, v in self.entries))

    def __sub__(self, other: "FiniteSupportVector") -> "FiniteSupportVector":
        return self + (-other)

    def scale(self, c: RationalLike) -> "FiniteSupportVector":
        c = _coerce(c)
        if c == 0:
            return FiniteSupportVector()
        return FiniteSupportVector(tuple((i, c * v) for i, v in self.entries))

    def restrict(self, indices: Iterable[int]) -> "FiniteSupportVector":
        keep = set(indices)
        return FiniteSupportVector(tuple((i, v) for i, v in self.entries if i in keep))

    def relabel(self, mapping: Mapping[int, int]) -> "FiniteSupportVector":
        """Move each coordinate ``i`` to ``mapping[i]`` (must be injective)."""
        moved = sorted((mapping[i], v) for i, v in self.entries)
        for (a, _), (b, _) in zip(moved, moved[1:]):
            if a == b:
                raise ValueError("relabeling map is not injective on the support")
        return FiniteSupportVector(tuple(moved))

    # -- serialization ----------------------------------------------------

    def to_json_obj(self) -> dict[str, str]:
        """Canonical JSON form: ``{"index": "num/den"}`` with ascending indices."""
        return {str(i): format_rational(v) for i, v in self.entries}

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, str]) -> "FiniteSupportVector":
        return fsv({int(k): parse_rational(v) for k, v in obj.items()})


def fsv(mapping: Mapping[int, RationalLike]) -> FiniteSupportVector:
    """Build a vector from an index->value mapping, dropping zeros."""
    items = []
    for i, raw in mapping.items():
        v = _coerce(raw)
        if v != 0:
            items.append((int(i), v))
    return FiniteSupportVector(tuple(sorted(items)))


def basis(index: int) -> FiniteSupportVector:
    return fsv({index: 1})


def zero_vector() -> FiniteSupportVector:
    return FiniteSupportVector()


def from_coords(coords: Iterable[RationalLike], start: int = 1) -> FiniteSupportVector:
    """Dense coordinate list -> sparse vector, first coordinate at ``start``."""
    return fsv({start + k: c for k, c in enumerate(coords)})
