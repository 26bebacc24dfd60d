from fractions import Fraction

import pytest

from radolab.vectors import from_coords


def q(text) -> Fraction:
    return Fraction(text)


def vec(*coords):
    """Dense coordinates starting at index 1."""
    return from_coords([Fraction(c) for c in coords])


@pytest.fixture
def line():
    """Points on the real line as 1-coordinate vectors."""

    def build(*xs):
        return [vec(x) for x in xs]

    return build
