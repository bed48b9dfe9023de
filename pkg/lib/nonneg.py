"""Non-negativity conditions on zero sets.

For a fixed zero set and one free conjugate pair (beta, conj(beta)), the
monic polynomial over all zeros has non-negative coefficients iff a short
system of quadratic inequalities in beta holds. When every fixed zero lies in
the open left half plane that system is a half plane minus finitely many
open discs.
"""

import dataclasses
import math

import numpy as np

from lib.config import DEFAULT_TOLERANCES
from lib.errors import HypothesisViolation, RealnessViolation
from lib.roots import expand_zeros


@dataclasses.dataclass(frozen=True)
class SymmetricSeq:
    """sigma[n] = (-1)^n S_n over the fixed zeros; sigma[0] = 1."""

    sigma: tuple

    def __getitem__(self, n):
        if 0 <= n < len(self.sigma):
            return self.sigma[n]
        return 0.0

    def __len__(self):
        return len(self.sigma)


@dataclasses.dataclass(frozen=True)
class Disc:
    """Open disc excluded from the feasible region."""

    center: float
    radius: float
    radius_sq: float

    def excludes(self, beta, slack=0.0):
        beta = complex(beta)
        dist_sq = (beta.real - self.center) ** 2 + beta.imag**2
        return dist_sq < self.radius_sq - slack


@dataclasses.dataclass(frozen=True)
class FeasibleRegion:
    """Half plane Re(beta) <= halfplane_bound minus the open ``discs``."""

    halfplane_bound: float
    discs: tuple

    def contains(self, beta, tol=None):
        tol = tol or DEFAULT_TOLERANCES
        beta = complex(beta)
        slack = tol.nn * max(1.0, abs(self.halfplane_bound))
        if beta.real > self.halfplane_bound + slack:
            return False
        return not any(
            d.excludes(beta, tol.nn * max(1.0, d.radius_sq)) for d in self.discs
        )

    def raster(self, re_min, re_max, im_min, im_max, step, tol=None):
        """Rows (re, im, feasible) over an inclusive grid."""
        if step <= 0:
            raise ValueError("Raster step must be positive")
        res = np.arange(re_min, re_max + 0.5 * step, step)
        ims = np.arange(im_min, im_max + 0.5 * step, step)
        return [
            (float(re), float(im), self.contains(complex(re, im), tol))
            for im in ims
            for re in res
        ]


def _real_coefficients(coeffs, tol):
    peak = np.max(np.abs(coeffs))
    residue = np.max(np.abs(coeffs.imag))
    if residue > tol.real * peak:
        raise RealnessViolation(
            f"Imaginary residue {residue:.3g} exceeds tol.real={tol.real:g}; "
            "zeros are not conjugate-closed"
        )
    return coeffs.real


def elementary_symmetric(zeros, tol=None):
    """Signed elementary symmetric polynomials via Vieta.

    The descending coefficients of the monic product over ``zeros`` are
    exactly (-1)^n S_n.
    """
    tol = tol or DEFAULT_TOLERANCES
    ascending = _real_coefficients(expand_zeros(zeros), tol)
    return SymmetricSeq(tuple(float(c) for c in ascending[::-1]))


def last_pair_coefficients(fixed, beta, tol=None):
    """Left-hand sides sigma_{n-2}|b|^2 - 2 sigma_{n-1} Re b + sigma_n, n = 0..N-1.

    These are the descending coefficients of the monic polynomial over the
    fixed zeros and the pair (b, conj(b)).
    """
    s = elementary_symmetric(fixed, tol)
    beta = complex(beta)
    mod_sq = abs(beta) ** 2
    return np.array(
        [
            s[n - 2] * mod_sq - 2.0 * s[n - 1] * beta.real + s[n]
            for n in range(len(s) + 2)
        ]
    )


def last_pair_nonneg(fixed, beta, tol=None):
    """True iff every inequality of the last-pair system holds."""
    tol = tol or DEFAULT_TOLERANCES
    s = elementary_symmetric(fixed, tol)
    beta = complex(beta)
    mod_sq = abs(beta) ** 2
    for n in range(len(s) + 2):
        terms = (s[n - 2] * mod_sq, -2.0 * s[n - 1] * beta.real, s[n])
        scale = sum(abs(t) for t in terms)
        if sum(terms) < -tol.nn * scale:
            return False
    return True


def pair_verdicts(fixed, beta, tol=None):
    """Verdicts for beta and for its reflection 1/conj(beta)."""
    beta = complex(beta)
    return {
        "beta": last_pair_nonneg(fixed, beta, tol),
        "reflected": last_pair_nonneg(fixed, 1.0 / beta.conjugate(), tol),
    }


def half_plane_bound(zeros):
    """-1/2 sum Re(b): sigma_1 / 2 for a conjugate-closed zero set."""
    return -0.5 * math.fsum(complex(z).real for z in zeros)


def feasible_region(fixed, tol=None):
    """Half plane and excluded discs for the free pair over left-half-plane zeros."""
    fixed = [complex(z) for z in fixed]
    offending = [z for z in fixed if z.real >= 0]
    if offending:
        raise HypothesisViolation(
            "feasible_region needs Re < 0 for every fixed zero; "
            f"got {offending[0]:.6g}"
        )
    s = elementary_symmetric(fixed, tol)
    discs = []
    # n = 2..N-2 where N - 1 = len(fixed) + 2
    for n in range(2, len(fixed) + 2):
        radicand = s[n - 1] ** 2 - s[n] * s[n - 2]
        if radicand < 0:
            continue
        radius = math.sqrt(radicand) / s[n - 2]
        discs.append(
            Disc(
                center=s[n - 1] / s[n - 2],
                radius=radius,
                radius_sq=radicand / s[n - 2] ** 2,
            )
        )
    return FeasibleRegion(halfplane_bound=s[1] / 2.0, discs=tuple(discs))


def left_halfplane_sufficient(zeros):
    """True iff every zero has negative real part."""
    return all(complex(z).real < 0 for z in zeros)
