"""Shared pytest fixtures for the phaseamb test suite."""

from pathlib import Path

import numpy as np
import pytest

from lib.config import DEFAULT_TOLERANCES
from lib.signals import Signal

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.fixture
def tol():
    return DEFAULT_TOLERANCES


@pytest.fixture
def samples_dir():
    return SAMPLES


@pytest.fixture
def example_fixed():
    """Fixed zeros {-3/2, -1 +- i} of the worked six-sample example."""
    return [-1.5 + 0j, -1 + 1j, -1 - 1j]


@pytest.fixture
def example_zeros(example_fixed):
    """Full zero set: the fixed zeros plus the free pair 3/4 +- i."""
    return [*example_fixed, 0.75 + 1j, 0.75 - 1j]


@pytest.fixture
def example_signal():
    """32 times the monic expansion over ``example_zeros``, ascending."""
    return Signal(0, (150, 106, 31, 42, 64, 32))


def _draw_zero(rng, pair, half_plane):
    radius = rng.uniform(1.25, 3.0)
    if rng.random() < 0.4:
        radius = 1 / radius
    if not pair:
        sign = -1.0 if half_plane or rng.random() < 0.5 else 1.0
        return complex(sign * radius, 0.0)
    low = 0.55 * np.pi if half_plane else 0.0
    angle = rng.uniform(low, np.pi)
    return complex(radius * np.cos(angle), radius * np.sin(angle))


@pytest.fixture
def random_zero_set():
    """Factory for conjugate-closed zero sets kept away from |z| = 1.

    Every zero, conjugate and reflection 1/conj(z) is at least ``gap`` from
    every other one, so associated-polynomial roots are well separated.
    ``half_plane`` keeps every real part at or below -0.2.
    """

    def draw(rng, count, half_plane=False, gap=0.2):
        zeros = []
        while len(zeros) < count:
            pair = count - len(zeros) >= 2 and rng.random() < 0.5
            z = _draw_zero(rng, pair, half_plane)
            if half_plane and z.real > -0.2:
                continue
            if pair and 2 * abs(z.imag) < gap:
                continue
            group = [z, z.conjugate()] if pair else [z]
            taken = [p for w in zeros for p in (w, 1 / w.conjugate())]
            new = [p for g in group for p in (g, 1 / g.conjugate())]
            if any(abs(p - q) < gap for p in new for q in taken):
                continue
            zeros.extend(group)
        return zeros

    return draw
