"""Constructive instance generators and the perturbation harness."""

import dataclasses
import itertools
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import linear_sum_assignment

from lib.ambiguity import enumerate_solutions, reconstruct_from_zeros
from lib.config import DEFAULT_TOLERANCES
from lib.errors import GenerationFailure, PhaseRetrievalError
from lib.nonneg import feasible_region, half_plane_bound
from lib.roots import zeros_of_signal
from lib.signals import Signal, autocorrelation

MAX_AMBIGUOUS = "max-ambiguous"
UNIQUE = "unique"
MODES = (MAX_AMBIGUOUS, UNIQUE)

RETRY_CAP = 256
IMAG_WINDOW = (0.1, 3.0)
# |beta| in this open interval counts as "on the unit circle"
CIRCLE_BAND = (0.95, 1.05)
DISC_MARGIN = 1.05


@dataclasses.dataclass(frozen=True)
class GenSpec:
    support_length: int
    mode: str = MAX_AMBIGUOUS
    seed: int = 0
    zero_window: tuple = (-4.0, -1.1)
    min_separation: float = 0.05
    min_band: float = 0.25
    retries: int = RETRY_CAP

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"Unknown mode {self.mode!r}; expected one of {MODES}")
        if self.support_length < 2:
            raise ValueError("support_length must be at least 2")
        if self.mode == UNIQUE and self.support_length < 4:
            raise ValueError("mode 'unique' needs support_length >= 4")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        low, high = self.zero_window
        if not low < high < -1.0:
            raise ValueError(
                f"zero_window {self.zero_window} must satisfy low < high < -1"
            )
        if not 0 <= self.min_separation < 1:
            raise ValueError("min_separation must lie in [0, 1)")
        if self.mode == MAX_AMBIGUOUS:
            count = self.support_length - 1
            gap = self.min_separation * self.width
            if (count - 1) * gap >= self.width:
                raise ValueError(
                    f"Cannot place {count} zeros {gap:.3g} apart in "
                    f"[{low:g}, {high:g}]; lower min_separation or widen zero_window"
                )

    @property
    def width(self):
        return self.zero_window[1] - self.zero_window[0]


@dataclasses.dataclass(frozen=True)
class TrialResult:
    index: int
    max_root_displacement: float | None
    total_classes: int | None
    nonnegative_classes: int | None
    error: str | None = None


@dataclasses.dataclass(frozen=True)
class PerturbStudy:
    base: Signal
    delta: float
    seed: int
    results: tuple
    scale_invariant: bool

    @property
    def trials(self):
        return len(self.results)

    def preserved(self, nonnegative_classes):
        """Number of trials whose non-negative class count equals the given one."""
        return sum(
            1 for r in self.results if r.nonnegative_classes == nonnegative_classes
        )


# ---------------------------------------------------------------------------
# Maximally ambiguous instances
# ---------------------------------------------------------------------------


def _separated_reals(rng, count, low, high, gap):
    """Uniform draw of ``count`` sorted reals in [low, high] spaced by >= gap.

    Equivalent to rejection sampling: sorted uniforms on the shortened interval
    with i * gap added back are uniform over the separated configurations.
    """
    slack = (high - low) - (count - 1) * gap
    if slack <= 0:
        raise ValueError(
            f"Cannot place {count} zeros {gap:.3g} apart in [{low:g}, {high:g}]"
        )
    base = np.sort(rng.uniform(0.0, slack, count))
    return low + base + gap * np.arange(count)


def gen_max_ambiguous(spec):
    """Signal with N-1 distinct real zeros below -1: every flip stays non-negative."""
    if spec.mode != MAX_AMBIGUOUS:
        raise ValueError(f"gen_max_ambiguous needs mode {MAX_AMBIGUOUS!r}")
    rng = np.random.default_rng(spec.seed)
    low, high = spec.zero_window
    zeros = _separated_reals(
        rng, spec.support_length - 1, low, high, spec.min_separation * spec.width
    )
    return reconstruct_from_zeros(zeros, 1.0)


# ---------------------------------------------------------------------------
# Uniquely solvable instances
# ---------------------------------------------------------------------------


def _off_circle(z):
    return not CIRCLE_BAND[0] < abs(z) < CIRCLE_BAND[1]


def _draw_fixed_groups(rng, spec):
    """N-3 zeros in flip groups: lone reals and conjugate pairs, Re < -1."""
    low, high = spec.zero_window
    count = spec.support_length - 3
    gap = spec.min_separation * spec.width
    groups = []
    placed = []
    while len(placed) < count:
        if count - len(placed) >= 2 and rng.random() < 0.5:
            z = complex(rng.uniform(low, high), rng.uniform(0.2, 2.0))
            group = (z, z.conjugate())
        else:
            group = (complex(rng.uniform(low, high), 0.0),)
        if not all(_off_circle(z) for z in group):
            continue
        if any(abs(z - w) < gap for z in group for w in placed):
            continue
        groups.append(group)
        placed.extend(group)
    return groups


def flip_band(groups):
    """(t*, t): t bounds Re(beta) for the fixed set, t* the best flipped bound.

    ``groups`` are the fixed zeros bundled as they flip together. t* is the
    largest half-plane bound over every non-identity flip pattern.
    """
    fixed = [z for g in groups for z in g]
    upper = half_plane_bound(fixed)
    lower = -math.inf
    for mask in itertools.product((False, True), repeat=len(groups)):
        if not any(mask):
            continue
        flipped = [
            1.0 / complex(z).conjugate() if flip else complex(z)
            for group, flip in zip(groups, mask)
            for z in group
        ]
        lower = max(lower, half_plane_bound(flipped))
    return lower, upper


def _disc_floor(region, re):
    """Smallest imaginary part clearing every disc at real part ``re``."""
    return max(
        (math.sqrt(max(0.0, d.radius_sq - (re - d.center) ** 2)) for d in region.discs),
        default=0.0,
    )


def _imag_window(floor):
    """Log-uniform sampling window for Im(beta), lifted above the disc floor."""
    low, high = IMAG_WINDOW
    lifted = DISC_MARGIN * floor
    if lifted <= low:
        return low, high
    return lifted, high * lifted


def gen_unique(spec, tol=None):
    """Signal whose only non-negative solution class is its own.

    N-3 fixed zeros sit left of -1; the free conjugate pair goes into the band
    (t*, t) outside every excluded disc, so only the identity flip pattern
    keeps all coefficients non-negative. Each candidate is verified by full
    enumeration.
    """
    if spec.mode != UNIQUE:
        raise ValueError(f"gen_unique needs mode {UNIQUE!r}")
    tol = tol or DEFAULT_TOLERANCES
    rng = np.random.default_rng(spec.seed)
    n = spec.support_length
    diagnostics = "no candidate drawn"

    for _ in range(spec.retries):
        groups = _draw_fixed_groups(rng, spec)
        fixed = [z for g in groups for z in g]
        lower, upper = flip_band(groups)
        if upper - lower < spec.min_band:
            diagnostics = f"band ({lower:.6g}, {upper:.6g}) narrower than min_band"
            continue

        region = feasible_region(fixed, tol)
        re = lower + (upper - lower) * rng.uniform(0.25, 0.75)
        im_low, im_high = _imag_window(_disc_floor(region, re))
        im = math.exp(rng.uniform(math.log(im_low), math.log(im_high)))
        beta = complex(re, im)
        discs = ", ".join(f"({d.center:.4g}, {d.radius:.4g})" for d in region.discs)
        diagnostics = (
            f"band ({lower:.6g}, {upper:.6g}), beta {beta:.6g}, discs [{discs}]"
        )
        if not _off_circle(beta) or not region.contains(beta, tol):
            continue

        x = reconstruct_from_zeros([*fixed, beta, beta.conjugate()], 1.0, tol)
        try:
            report = enumerate_solutions(autocorrelation(x), tol)
        except PhaseRetrievalError as exc:
            diagnostics += f"; enumeration failed: {exc}"
            continue
        distinct = report.total_classes == 2 ** (report.flippable - 1)
        if report.nonnegative_classes == 1 and distinct:
            return x
        diagnostics += (
            f"; {report.nonnegative_classes} non-negative of "
            f"{report.total_classes} classes"
        )

    raise GenerationFailure(
        f"No uniquely solvable instance for N={n} (seed {spec.seed}) after "
        f"{spec.retries} attempts; last: {diagnostics}"
    )


def generate(spec, tol=None):
    """Build an instance for ``spec.mode``."""
    if spec.mode == MAX_AMBIGUOUS:
        return gen_max_ambiguous(spec)
    return gen_unique(spec, tol)


# ---------------------------------------------------------------------------
# Perturbation harness
# ---------------------------------------------------------------------------


def matched_displacement(reference, moved):
    """Largest |moved - reference| under the optimal one-to-one matching."""
    reference = np.asarray(reference, dtype=complex)
    moved = np.asarray(moved, dtype=complex)
    cost = np.abs(reference[:, None] - moved[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def _run_trial(index, base, base_zeros, delta, stream, tol):
    rng = np.random.default_rng(stream)
    noise = delta * rng.uniform(-1.0, 1.0, base.support_length)
    try:
        x = Signal(0, tuple(base.array + noise))
        zeros = zeros_of_signal(x, tol)
        if len(zeros) != len(base_zeros):
            raise GenerationFailure(
                f"Trial {index}: support length changed to {x.support_length}"
            )
        displacement = matched_displacement(base_zeros, zeros)
        report = enumerate_solutions(autocorrelation(x), tol)
    except PhaseRetrievalError as exc:
        return TrialResult(index, None, None, None, str(exc))
    return TrialResult(
        index, displacement, report.total_classes, report.nonnegative_classes
    )


def perturb_study(base, delta, trials, seed=0, tol=None, workers=None):
    """Perturb ``base`` by uniform noise in [-delta, delta] and re-analyze.

    Trial i draws from child stream i of ``SeedSequence(seed)``, so a fixed
    seed gives the same noise shapes at every delta.
    """
    tol = tol or DEFAULT_TOLERANCES
    if delta < 0:
        raise ValueError("delta must be non-negative")
    endpoint = min(abs(base.values[0]), abs(base.values[-1]))
    if delta >= endpoint:
        raise ValueError(
            f"delta {delta:g} must stay below the smallest endpoint {endpoint:g}"
        )
    if trials < 0:
        raise ValueError("trials must be non-negative")

    base_zeros = zeros_of_signal(base, tol)
    streams = np.random.SeedSequence(seed).spawn(trials + 1)

    def run(index):
        return _run_trial(index, base, base_zeros, delta, streams[index], tol)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(i) for i in range(trials)]

    factor = np.random.default_rng(streams[trials]).uniform(0.1, 10.0)
    scaled_zeros = zeros_of_signal(base.scaled(factor), tol)
    shift = matched_displacement(base_zeros, scaled_zeros)
    peak = max(1.0, float(np.max(np.abs(base_zeros))))

    return PerturbStudy(
        base=base,
        delta=float(delta),
        seed=seed,
        results=tuple(results),
        scale_invariant=shift <= tol.pair * peak,
    )
