"""Finite-support real signals, trivial ambiguities and autocorrelation."""

import dataclasses
import math

import numpy as np

from lib.config import DEFAULT_TOLERANCES

DEFAULT_SAMPLES = 512


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


def _trim(values, rel_tol):
    """Strip leading/trailing entries that are negligible against the peak."""
    peak = max((abs(v) for v in values), default=0.0)
    if peak == 0.0:
        raise ValueError("Signal must have at least one nonzero value")
    cutoff = rel_tol * peak
    first = 0
    while abs(values[first]) <= cutoff:
        first += 1
    last = len(values) - 1
    while abs(values[last]) <= cutoff:
        last -= 1
    return first, values[first : last + 1]


@dataclasses.dataclass(frozen=True)
class Signal:
    """Real sequence x[offset + k] = values[k] with nonzero endpoints.

    Leading and trailing zeros are trimmed on construction (the offset moves
    with the first kept sample), so ``len(values)`` is the support length N.
    """

    offset: int
    values: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("Signal values must be non-empty")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("Signal values must be finite")
        skipped, values = _trim(values, DEFAULT_TOLERANCES.trim)
        object.__setattr__(self, "offset", int(self.offset) + skipped)
        object.__setattr__(self, "values", values)

    @property
    def support_length(self):
        return len(self.values)

    @property
    def array(self):
        return np.asarray(self.values, dtype=float)

    @property
    def indices(self):
        return np.arange(self.offset, self.offset + len(self.values))

    def scaled(self, factor):
        """Multiply every component by ``factor`` (nonzero)."""
        if factor == 0:
            raise ValueError("Scale factor must be nonzero")
        return Signal(self.offset, tuple(factor * v for v in self.values))

    def negated(self):
        """The sign-flipped signal -x."""
        return self.scaled(-1.0)


@dataclasses.dataclass(frozen=True)
class Autocorrelation:
    """Coefficients a[0..N-1] of a symmetric autocorrelation (a[-n] = a[n])."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("Autocorrelation coefficients must be non-empty")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValueError("Autocorrelation coefficients must be finite")
        if coeffs[-1] == 0.0:
            raise ValueError("Autocorrelation must satisfy a[N-1] != 0")
        if coeffs[0] <= 0.0:
            raise ValueError(f"Autocorrelation needs a[0] > 0, got {coeffs[0]:g}")
        object.__setattr__(self, "coeffs", coeffs)
        floor = float(np.min(self.evaluate(_psd_grid(len(coeffs)))))
        if floor < -DEFAULT_TOLERANCES.eval * (1.0 + coeffs[0]):
            raise ValueError(
                f"Not an autocorrelation: a(w) reaches {floor:.6g} < 0 "
                f"(tol.eval={DEFAULT_TOLERANCES.eval:g})"
            )

    @property
    def support_length(self):
        return len(self.coeffs)

    @property
    def array(self):
        return np.asarray(self.coeffs, dtype=float)

    def full(self):
        """Return a[-(N-1)..N-1] as an array of length 2N-1."""
        a = self.array
        return np.concatenate([a[:0:-1], a])

    def evaluate(self, omega):
        """Evaluate a(w) = a[0] + 2 sum a[n] cos(n w); vectorized over ``omega``."""
        omega = np.asarray(omega, dtype=float)
        a = self.array
        n = np.arange(1, len(a))
        tail = np.cos(np.multiply.outer(omega, n)) @ a[1:] if len(a) > 1 else 0.0
        return a[0] + 2.0 * tail

    @classmethod
    def from_intensity_samples(cls, samples, tol=None):
        """Recover a[0..N-1] from K equispaced samples of a(w) on [0, 2pi).

        Exact when K >= 2N - 1; trailing coefficients below ``tol.eval`` times
        a[0] are dropped to find N.
        """
        tol = tol or DEFAULT_TOLERANCES
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1 or len(samples) == 0:
            raise ValueError("Intensity samples must be a non-empty 1-D sequence")
        k = len(samples)
        spectrum = np.fft.rfft(samples).real / k
        coeffs = spectrum[: (k - 1) // 2 + 1]
        cutoff = tol.eval * max(abs(coeffs[0]), 1.0)
        last = len(coeffs) - 1
        while last > 0 and abs(coeffs[last]) <= cutoff:
            last -= 1
        return cls(tuple(coeffs[: last + 1]))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def _psd_grid(n):
    return sample_frequencies(max(DEFAULT_SAMPLES, 8 * n))


def autocorrelation(x):
    """Return a[n] = sum_k x[k] x[k+n] for n = 0..N-1."""
    v = x.array
    full = np.convolve(v, v[::-1])
    return Autocorrelation(tuple(full[len(v) - 1 :]))


def fourier_intensity(x, omega):
    """Return |sum_n x[n] exp(-i w n)|^2; vectorized over ``omega``."""
    omega = np.asarray(omega, dtype=float)
    phases = np.exp(-1j * np.multiply.outer(omega, x.indices))
    return np.abs(phases @ x.array) ** 2


def sample_frequencies(samples=DEFAULT_SAMPLES):
    """Return ``samples`` equispaced frequencies in [0, 2pi)."""
    return 2.0 * np.pi * np.arange(samples) / samples


def intensity_samples(x, samples=DEFAULT_SAMPLES):
    """|X(w)|^2 at ``samples`` equispaced frequencies in [0, 2pi)."""
    return fourier_intensity(x, sample_frequencies(samples))


def shift(x, n0):
    """Time shift: the same values starting at offset + n0."""
    return Signal(x.offset + int(n0), x.values)


def reflect(x):
    """Reflection x[-n]."""
    return Signal(-(x.offset + len(x.values) - 1), x.values[::-1])


def lex_compare(u, v, rel_tol=0.0):
    """Compare two equal-length sequences elementwise with a relative tolerance.

    The first position whose difference exceeds ``rel_tol`` times the largest
    magnitude decides. Returns -1, 0 or 1.
    """
    scale = max((abs(c) for c in (*u, *v)), default=0.0)
    cutoff = rel_tol * scale
    for a, b in zip(u, v):
        if abs(a - b) > cutoff:
            return -1 if a < b else 1
    return 0


def is_reflection_smaller(values, tol=None):
    """True when the reversed sequence is lexicographically smaller."""
    tol = tol or DEFAULT_TOLERANCES
    return lex_compare(values[::-1], values, tol.dedup) < 0


def canonicalize(x, tol=None):
    """Representative of the shift/reflection orbit: offset 0, smaller orientation.

    The sign is never changed.
    """
    values = x.values
    if is_reflection_smaller(values, tol):
        values = values[::-1]
    return Signal(0, values)


def is_canonical(x, tol=None):
    """True for offset 0 with the reflection not lexicographically smaller."""
    return x.offset == 0 and not is_reflection_smaller(x.values, tol)
