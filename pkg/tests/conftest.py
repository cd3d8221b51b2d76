import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))

from src.spectral.algebra import roots
from src.spectral.forward import Potential, jost_function


@pytest.fixture
def random_potential():
    """Draw a potential of support b with a fixed seed; V_b is kept away from zero."""

    def draw(b: int, seed: int, scale: float = 1.0) -> Potential:
        rng = np.random.default_rng(seed)
        values = rng.uniform(-scale, scale, size=b)
        values[-1] = np.copysign(max(abs(values[-1]), 0.25 * scale), values[-1])
        return Potential(tuple(values))

    return draw


@pytest.fixture
def potential_sample():
    """count potentials with b in 1..max_b, entries uniform in [-2, 2] and |V_b| >= 0.1."""

    def draw(count: int, seed: int, max_b: int = 8, min_b: int = 1) -> list:
        rng = np.random.default_rng(seed)
        out = []
        while len(out) < count:
            b = int(rng.integers(min_b, max_b + 1))
            values = rng.uniform(-2.0, 2.0, size=b)
            if abs(values[-1]) < 0.1:
                continue
            out.append(Potential(tuple(values)))
        return out

    return draw


@pytest.fixture
def separated_potentials():
    """Potentials whose Jost zeros stay at least `gap` away from |z| = 1."""

    def draw(count: int, seed: int, max_b: int = 4, gap: float = 0.05) -> list:
        rng = np.random.default_rng(seed)
        out = []
        while len(out) < count:
            b = int(rng.integers(1, max_b + 1))
            values = rng.uniform(-1.5, 1.5, size=b)
            if abs(values[-1]) < 0.25:
                continue
            V = Potential(tuple(values))
            zeros = [loc for loc, _ in roots(jost_function(V))]
            if all(abs(abs(w) - 1.0) >= gap for w in zeros):
                out.append(V)
        return out

    return draw


@pytest.fixture
def bound_state_potential():
    # f0 = 1 + 3.5z + 1.5z^2 + 0.5z^3, one zero near z = -0.326
    return Potential((3.0, 0.5))
