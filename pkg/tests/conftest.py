"""Shared fixture algebras, loaded from the shipped fixture files."""

from __future__ import annotations

import pytest

from deloop.formats import fixture_path, load_algebra


@pytest.fixture(scope="session")
def mono5():
    """5-vertex monomial algebra with a 2-cycle, a loop, and a tail (dim 16)."""
    return load_algebra(fixture_path("mono5.alg"))


@pytest.fixture(scope="session")
def cycle3():
    """3-cycle Nakayama-like quiver with projectives of dims 3, 2, 3."""
    return load_algebra(fixture_path("cycle3.alg"))


@pytest.fixture(scope="session")
def local3():
    """Local 6-dimensional algebra with three loops x, y, z and yx = -2xy."""
    return load_algebra(fixture_path("local3.alg"))


@pytest.fixture(scope="session")
def local3ext():
    """One-point extension of local3 by the twist module with parameter 2."""
    return load_algebra(fixture_path("local3ext.alg"))


@pytest.fixture(scope="session")
def cyl9():
    """Special biserial algebra on a 9-vertex cylinder; commuting squares, rad^3 = 0."""
    return load_algebra(fixture_path("cyl9.alg"))
