"""Enumeration of all real solutions sharing one Fourier intensity.

Every solution is fixed by choosing one zero from each reflection pair of the
associated polynomial. Flip units enumerate those choices; each candidate is
rebuilt from its zeros, brought to canonical form and deduplicated, which
also quotients out the reflection ambiguity.
"""

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from lib.config import DEFAULT_TOLERANCES
from lib.errors import RealnessViolation
from lib.nonneg import left_halfplane_sufficient
from lib.roots import (
    associated_polynomial,
    expand_zeros,
    find_roots,
    flippable_units,
    pair_roots,
    residual_ratio,
    zeros_of_signal,
)
from lib.signals import (
    DEFAULT_SAMPLES,
    Signal,
    autocorrelation,
    canonicalize,
    fourier_intensity,
    is_canonical,
    is_reflection_smaller,
    lex_compare,
    reflect,
    sample_frequencies,
    shift,
)


@dataclasses.dataclass(frozen=True)
class SolutionClass:
    """One solution modulo shift and reflection, in canonical form."""

    signal: Signal
    chosen_zeros: tuple
    flip_mask: int
    nonnegative: bool
    min_component: float
    sign_ambiguous: bool = False


@dataclasses.dataclass(frozen=True)
class AmbiguityReport:
    total_classes: int
    nonnegative_classes: int
    solutions: tuple
    upper_bound: int
    warnings: tuple = ()
    units: tuple = ()

    @property
    def flippable(self):
        """Number of flip units that carry a choice (m)."""
        return len(flippable_units(self.units))

    def nonnegative_solutions(self):
        return tuple(s for s in self.solutions if s.nonnegative)


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------


def reconstruct_from_zeros(zeros, a_last, tol=None):
    """Signal with zero set ``zeros`` and |a[N-1]| = |a_last|, at offset 0.

    The scale is sqrt(|a_last| prod |b|^-1) applied to the monic expansion.
    """
    tol = tol or DEFAULT_TOLERANCES
    zeros = np.asarray(zeros, dtype=complex)
    if a_last == 0:
        raise ValueError("a[N-1] must be nonzero")
    if np.any(zeros == 0):
        raise ValueError("Zero sets must not contain 0")
    coeffs = expand_zeros(zeros)
    peak = np.max(np.abs(coeffs))
    residue = np.max(np.abs(coeffs.imag))
    if residue > tol.real * peak:
        raise RealnessViolation(
            f"Imaginary residue {residue:.3g} exceeds tol.real={tol.real:g} relative; "
            "zero set is not conjugate-closed"
        )
    log_scale = 0.5 * (math.log(abs(a_last)) - np.sum(np.log(np.abs(zeros))))
    return Signal(0, tuple(math.exp(log_scale) * coeffs.real))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def is_nonnegative(values, tol=None):
    """True when no component falls below ``-tol.nn`` times the largest magnitude."""
    tol = tol or DEFAULT_TOLERANCES
    peak = max(abs(v) for v in values)
    return min(values) >= -tol.nn * peak


def _orient(signal, zeros, tol):
    """Fix the global sign and the canonical orientation of a candidate.

    Returns (canonical signal, zeros of that signal, sign_ambiguous).
    """
    values = signal.values
    peak = max(abs(v) for v in values)
    total = math.fsum(values)
    sign_ambiguous = abs(total) <= tol.dedup * peak
    if sign_ambiguous:
        forward = canonicalize(signal, tol).values
        negated = canonicalize(signal.negated(), tol).values
        if lex_compare(negated, forward, tol.dedup) > 0:
            signal = signal.negated()
    elif total < 0:
        signal = signal.negated()

    zeros = tuple(complex(z) for z in zeros)
    if is_reflection_smaller(signal.values, tol):
        signal = Signal(0, signal.values[::-1])
        zeros = tuple(1.0 / z.conjugate() for z in zeros)
    return signal, zeros, sign_ambiguous


def _candidate(mask, fixed, units, a_last, tol):
    zeros = list(fixed)
    for bit, unit in enumerate(units):
        zeros.extend(unit.zeros(flipped=bool(mask >> bit & 1)))
    signal = reconstruct_from_zeros(zeros, a_last, tol)
    signal, zeros, sign_ambiguous = _orient(signal, zeros, tol)
    return SolutionClass(
        signal=signal,
        chosen_zeros=zeros,
        flip_mask=mask,
        nonnegative=is_nonnegative(signal.values, tol),
        min_component=min(signal.values),
        sign_ambiguous=sign_ambiguous,
    )


def _same_class(a, b, tol):
    return len(a.signal.values) == len(b.signal.values) and (
        lex_compare(a.signal.values, b.signal.values, tol.dedup) == 0
    )


def _unit_warnings(units, tol):
    circle = [u for u in units if not u.flippable]
    if not circle:
        return []
    offset = max(u.pairs[0].circle_offset for u in circle)
    return [
        f"{len(circle)} unit-circle root pair(s) snapped to |z| = 1 "
        f"(max offset {offset:.3g}, tol.circle={tol.circle:g}); they admit no flip"
    ]


def enumerate_solutions(a, tol=None, workers=None):
    """All real solutions of |X|^2 = a modulo trivial ambiguities."""
    tol = tol or DEFAULT_TOLERANCES
    n = a.support_length
    a_last = a.coeffs[-1]
    if n == 1:
        signal = Signal(0, (math.sqrt(a.coeffs[0]),))
        only = SolutionClass(signal, (), 0, True, signal.values[0])
        return AmbiguityReport(1, 1, (only,), 1)

    units = pair_roots(find_roots(associated_polynomial(a), tol), tol)
    fixed = [z for u in units if not u.flippable for z in u.zeros()]
    choices = flippable_units(units)

    def build(mask):
        return _candidate(mask, fixed, choices, a_last, tol)

    masks = range(2 ** len(choices))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            candidates = list(pool.map(build, masks))
    else:
        candidates = [build(mask) for mask in masks]

    classes = []
    for candidate in candidates:
        if not any(_same_class(candidate, kept, tol) for kept in classes):
            classes.append(candidate)
    classes.sort(key=lambda s: s.signal.values)

    warnings = _unit_warnings(units, tol)
    ambiguous = sum(1 for s in classes if s.sign_ambiguous)
    if ambiguous:
        warnings.append(
            f"{ambiguous} solution(s) have component sum 0; their negation is an "
            "equally valid representative"
        )
    return AmbiguityReport(
        total_classes=len(classes),
        nonnegative_classes=sum(1 for s in classes if s.nonnegative),
        solutions=tuple(classes),
        upper_bound=2 ** (n - 2),
        warnings=tuple(warnings),
        units=tuple(units),
    )


def intensity_gap(x, a, samples=DEFAULT_SAMPLES):
    """Largest |X(w)|^2 - a(w) over ``samples`` frequencies, relative to max a(w)."""
    omega = sample_frequencies(samples)
    target = a.evaluate(omega)
    gap = np.max(np.abs(fourier_intensity(x, omega) - target))
    return float(gap / np.max(np.abs(target)))


def verify_solution(x, a, tol=None):
    """True iff x's autocorrelation matches ``a`` within tol.eval relative."""
    tol = tol or DEFAULT_TOLERANCES
    own = autocorrelation(x).array
    target = a.array
    if len(own) != len(target):
        return False
    return bool(np.max(np.abs(own - target)) <= tol.eval * np.max(np.abs(target)))


# ---------------------------------------------------------------------------
# Invariant suite
# ---------------------------------------------------------------------------


def _closure_gap(roots, transform):
    """Largest distance from transform(root) to the nearest returned root."""
    worst = 0.0
    for z in roots:
        target = transform(z)
        gap = np.min(np.abs(roots - target)) / max(1.0, abs(target))
        worst = max(worst, float(gap))
    return worst


def check_invariants(x, tol=None, samples=DEFAULT_SAMPLES):
    """Evaluate the library's invariants on one signal.

    Returns a list of (name, passed, detail) tuples.
    """
    tol = tol or DEFAULT_TOLERANCES
    a = autocorrelation(x)
    results = []

    gap = intensity_gap(x, a, samples)
    results.append(("intensity-identity", gap <= tol.eval, f"relative gap {gap:.3g}"))

    moved = autocorrelation(shift(reflect(x), 3)).array
    gap = float(np.max(np.abs(moved - a.array)))
    results.append(
        ("trivial-invariance", gap <= tol.eval * a.coeffs[0], f"max gap {gap:.3g}")
    )

    canon = canonicalize(x, tol)
    again = canonicalize(shift(reflect(canon), 5), tol)
    stable = lex_compare(again.values, canon.values, tol.dedup) == 0
    results.append(("canonical-idempotent", is_canonical(canon, tol) and stable, ""))

    if x.support_length < 2:
        return results

    p = associated_polynomial(a)
    roots = find_roots(p, tol)
    worst = float(np.max(residual_ratio(p.coeffs, roots)))
    results.append(("root-residual", worst <= tol.root, f"max ratio {worst:.3g}"))
    gap = _closure_gap(roots, lambda z: 1.0 / np.conj(z))
    results.append(("reflection-closure", gap <= tol.pair, f"max gap {gap:.3g}"))
    gap = _closure_gap(roots, np.conj)
    results.append(("conjugation-closure", gap <= tol.pair, f"max gap {gap:.3g}"))

    report = enumerate_solutions(a, tol)
    results.append(
        (
            "solutions-verify",
            all(verify_solution(s.signal, a, tol) for s in report.solutions),
            f"{report.total_classes} class(es)",
        )
    )
    results.append(
        (
            "class-count-bound",
            report.nonnegative_classes <= report.total_classes <= report.upper_bound,
            f"{report.nonnegative_classes} <= {report.total_classes} "
            f"<= {report.upper_bound}",
        )
    )
    results.append(
        (
            "descartes-real-zeros",
            all(
                z.real <= tol.pair
                for s in report.nonnegative_solutions()
                for z in s.chosen_zeros
                if abs(z.imag) <= tol.real
            ),
            "",
        )
    )
    own_zeros = zeros_of_signal(x, tol)
    if left_halfplane_sufficient(own_zeros):
        passed = report.nonnegative_classes == report.total_classes
        results.append(("left-halfplane-nonnegative", passed, ""))
    return results
