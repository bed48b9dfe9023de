"""Associated polynomial, root finding and reflection pairing.

Roots of the associated polynomial come in reflection pairs (g, 1/conj(g));
complex pairs additionally come with their conjugates. ``pair_roots`` groups
them into flip units: the choices that generate the real solutions.
"""

import dataclasses

import numpy as np
from numpy.polynomial import polynomial as npoly

from lib.config import DEFAULT_TOLERANCES
from lib.errors import NonConvergence, PairingFailure

REAL_PAIR = "real-pair"
CONJUGATE_QUAD = "conjugate-quad"
UNIT_CIRCLE = "unit-circle"

POLISH_STEPS = 2
# Extra Newton steps tried once before reporting NonConvergence.
RETRY_POLISH_STEPS = 8


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class AssociatedPolynomial:
    """P(z) = sum_{n=0}^{2N-2} a[n-N+1] z^n; coefficients ascending."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if len(coeffs) % 2 == 0:
            raise ValueError("Associated polynomial must have odd length 2N-1")
        if coeffs[-1] == 0.0:
            raise ValueError("Associated polynomial leading coefficient is zero")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def array(self):
        return np.asarray(self.coeffs, dtype=float)

    def __call__(self, z):
        return npoly.polyval(z, self.array)


@dataclasses.dataclass(frozen=True)
class ReflectionPair:
    """Root pair (gamma, 1/conj(gamma)) with |gamma| >= 1.

    ``circle_offset`` is how far the pair's centroid sat from the unit circle
    before being snapped onto it (zero for pairs off the circle).
    """

    gamma: complex
    mirror: complex
    on_unit_circle: bool = False
    circle_offset: float = 0.0

    @classmethod
    def from_gamma(cls, gamma):
        gamma = complex(gamma)
        return cls(gamma=gamma, mirror=1.0 / gamma.conjugate())

    @classmethod
    def on_circle(cls, point, offset=0.0):
        point = complex(point)
        return cls(point, point, on_unit_circle=True, circle_offset=float(offset))


@dataclasses.dataclass(frozen=True)
class FlipUnit:
    """One independent zero choice: keep every gamma or flip to every mirror.

    Real pairs and unit-circle roots hold one pair; conjugate quads hold the
    pair of gamma and the pair of conj(gamma) so flipping keeps signals real.
    """

    kind: str
    pairs: tuple

    @property
    def flippable(self):
        return self.kind != UNIT_CIRCLE

    def zeros(self, flipped=False):
        """The chosen zeros: every gamma, or every mirror when flipped."""
        if flipped and self.flippable:
            return tuple(p.mirror for p in self.pairs)
        return tuple(p.gamma for p in self.pairs)


# ---------------------------------------------------------------------------
# Polynomial construction and root finding
# ---------------------------------------------------------------------------


def associated_polynomial(a):
    """Re-index the autocorrelation as coefficients of P."""
    return AssociatedPolynomial(tuple(a.full()))


def companion_matrix(coeffs):
    """Companion matrix of ascending coefficients (eigenvalues = roots)."""
    c = np.asarray(coeffs, dtype=float)
    deg = len(c) - 1
    if deg < 1:
        raise ValueError("Polynomial must have degree of at least 1")
    matrix = np.eye(deg, k=-1)
    matrix[:, -1] -= c[:-1] / c[-1]
    return matrix


def newton_polish(coeffs, roots, steps):
    """Run guarded Newton steps: a step is kept only if it lowers |P|."""
    c = np.asarray(coeffs, dtype=float)
    dc = npoly.polyder(c)
    roots = np.asarray(roots, dtype=complex).copy()
    for _ in range(steps):
        value = npoly.polyval(roots, c)
        slope = npoly.polyval(roots, dc)
        usable = slope != 0
        step = np.zeros_like(roots)
        step[usable] = value[usable] / slope[usable]
        candidate = roots - step
        better = np.abs(npoly.polyval(candidate, c)) < np.abs(value)
        roots = np.where(better, candidate, roots)
    return roots


def residual_ratio(coeffs, roots):
    """|P(r)| relative to ||c||_1 max(1, |r|)^deg, per root."""
    c = np.asarray(coeffs, dtype=float)
    roots = np.asarray(roots, dtype=complex)
    deg = len(c) - 1
    with np.errstate(over="ignore"):
        scale = np.sum(np.abs(c)) * np.maximum(1.0, np.abs(roots)) ** deg
    return np.abs(npoly.polyval(roots, c)) / scale


def _sorted_roots(roots):
    return roots[np.lexsort((roots.imag, roots.real))]


def polynomial_roots(coeffs, tol=None):
    """Roots of an ascending real coefficient vector, Newton polished.

    Eigenvalues come from LAPACK's balanced nonsymmetric solver applied to the
    companion matrix.
    """
    tol = tol or DEFAULT_TOLERANCES
    c = np.asarray(coeffs, dtype=float)
    try:
        roots = np.linalg.eigvals(companion_matrix(c))
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"Eigenvalue stage failed: {exc}") from exc
    roots = newton_polish(c, roots, POLISH_STEPS)
    ratio = residual_ratio(c, roots)
    if np.any(ratio > tol.root):
        roots = newton_polish(c, roots, RETRY_POLISH_STEPS)
        ratio = residual_ratio(c, roots)
    if not np.all(np.isfinite(roots)) or np.any(ratio > tol.root):
        raise NonConvergence(
            f"Root residual {float(np.max(ratio)):.3g} exceeds tol.root={tol.root:g}"
            f" for degree {len(c) - 1}"
        )
    return _sorted_roots(roots)


def find_roots(p, tol=None):
    """All 2N-2 roots of the associated polynomial, with multiplicity."""
    return polynomial_roots(p.coeffs, tol)


def zeros_of_signal(x, tol=None):
    """Roots of sum_n x[n] z^n (the signal's own zero set, N-1 values)."""
    if x.support_length < 2:
        raise ValueError("A signal needs support length >= 2 to have zeros")
    return polynomial_roots(x.values, tol)


# ---------------------------------------------------------------------------
# Pairing
# ---------------------------------------------------------------------------


def _link_clusters(points, linked):
    """Single-linkage clusters; ``linked(i, j)`` decides whether i and j touch."""
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if linked(i, j):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _unit_circle_clusters(points, tol):
    """Split near-circle roots into accepted unit-circle clusters and leftovers.

    A k-member cluster is accepted when its centroid lies within ``tol.circle``
    of the circle and every member within ``tol.circle ** (2 / k)``. Rejected
    members go on to mirror matching; accepted clusters must have even size.
    """
    accepted = []
    leftover = []
    clusters = _link_clusters(
        points, lambda i, j: abs(points[i] - points[j]) <= tol.circle_window
    )
    for members in clusters:
        centroid = complex(np.mean(points[members]))
        spread = np.abs(np.abs(points[members]) - 1.0)
        offset = float(np.max(spread))
        member_bound = tol.circle ** (2.0 / max(2, len(members)))
        if abs(abs(centroid) - 1.0) > tol.circle or offset > member_bound:
            leftover.extend(points[members])
            continue
        if len(members) % 2:
            raise PairingFailure(
                f"Odd multiplicity {len(members)} at unit-circle root "
                f"{centroid:.6g} (tol.circle={tol.circle:g})"
            )
        point = centroid / abs(centroid)
        if abs(point.imag) <= tol.real:
            point = complex(point.real, 0.0)
        accepted.append((point, len(members), offset))

    # conjugate clusters share one exact representative
    uppers = [c for c, _, _ in accepted if c.imag > 0]
    for index, (point, size, offset) in enumerate(accepted):
        if point.imag < 0 and uppers:
            partner = min(uppers, key=lambda u: abs(u.conjugate() - point))
            if abs(partner.conjugate() - point) <= tol.circle_window:
                accepted[index] = (partner.conjugate(), size, offset)
    return accepted, leftover


def _off_circle_clusters(points, tol):
    """Group numerically coincident roots into (centroid, multiplicity)."""

    def linked(i, j):
        scale = max(1.0, abs(points[i]), abs(points[j]))
        return abs(points[i] - points[j]) <= tol.cluster * scale

    return [
        (complex(np.mean(points[members])), len(members))
        for members in _link_clusters(points, linked)
    ]


def _relative_gap(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _match_mirrors(clusters, tol):
    """Greedy nearest-mirror matching of clusters, verified afterwards."""
    candidates = []
    for i, (ci, ki) in enumerate(clusters):
        for j in range(i + 1, len(clusters)):
            cj, kj = clusters[j]
            if ki != kj:
                continue
            gap = max(
                _relative_gap(cj, 1.0 / ci.conjugate()),
                _relative_gap(ci, 1.0 / cj.conjugate()),
            )
            candidates.append((gap, i, j))
    candidates.sort()

    used = set()
    pairs = []
    for gap, i, j in candidates:
        if i in used or j in used:
            continue
        if gap > tol.pair:
            break
        used.update((i, j))
        inner, outer = clusters[i][0], clusters[j][0]
        if abs(inner) > abs(outer):
            inner, outer = outer, inner
        gamma = 0.5 * (outer + 1.0 / inner.conjugate())
        pairs.extend([gamma] * clusters[i][1])

    unmatched = [clusters[i][0] for i in range(len(clusters)) if i not in used]
    if unmatched:
        listed = ", ".join(f"{z:.6g}" for z in unmatched[:4])
        raise PairingFailure(
            f"{len(unmatched)} root(s) without a reflection partner within "
            f"tol.pair={tol.pair:g}: {listed}"
        )
    return pairs


def _group_units(gammas, tol):
    """Form real-pair units and conjugate quads from pair representatives."""
    units = []
    uppers = []
    lowers = []
    for gamma in gammas:
        if abs(gamma.imag) <= tol.real * max(1.0, abs(gamma)):
            pair = ReflectionPair.from_gamma(complex(gamma.real, 0.0))
            units.append(FlipUnit(REAL_PAIR, (pair,)))
        elif gamma.imag > 0:
            uppers.append(gamma)
        else:
            lowers.append(gamma)

    if len(uppers) != len(lowers):
        raise PairingFailure(
            f"{len(uppers)} upper vs {len(lowers)} lower complex pairs; roots are not "
            f"conjugate-closed (tol.real={tol.real:g})"
        )
    for gamma in sorted(uppers, key=lambda g: (g.real, g.imag)):
        best = min(lowers, key=lambda g: abs(g - gamma.conjugate()))
        if _relative_gap(best, gamma.conjugate()) > tol.pair:
            raise PairingFailure(
                f"No conjugate partner for pair {gamma:.6g} "
                f"within tol.pair={tol.pair:g}"
            )
        lowers.remove(best)
        quad = (
            ReflectionPair.from_gamma(gamma),
            ReflectionPair.from_gamma(gamma.conjugate()),
        )
        units.append(FlipUnit(CONJUGATE_QUAD, quad))
    return units


def _unit_key(unit):
    gamma = unit.pairs[0].gamma
    return (unit.kind == UNIT_CIRCLE, gamma.real, gamma.imag)


def pair_roots(roots, tol=None):
    """Group an even multiset of roots into flip units.

    Near-circle roots are tested for unit-circle multiplicity first (those
    become self-paired units with no flip choice); the rest are clustered,
    matched with their mirrors and grouped into real pairs and quads.
    """
    tol = tol or DEFAULT_TOLERANCES
    roots = np.asarray(roots, dtype=complex)
    if len(roots) % 2:
        raise PairingFailure(f"Odd number of roots ({len(roots)}) cannot be paired")
    if len(roots) == 0:
        return []

    near = np.abs(np.abs(roots) - 1.0) <= tol.circle_window
    circle, leftover = _unit_circle_clusters(roots[near], tol)

    units = []
    for point, size, offset in circle:
        pair = ReflectionPair.on_circle(point, offset)
        units.extend(FlipUnit(UNIT_CIRCLE, (pair,)) for _ in range(size // 2))

    clusters = _off_circle_clusters(roots[~near], tol)
    clusters.extend((complex(z), 1) for z in leftover)
    units.extend(_group_units(_match_mirrors(clusters, tol), tol))
    return sorted(units, key=_unit_key)


def flippable_units(units):
    """The units whose flip yields a new solution class."""
    return [u for u in units if u.flippable]


def unit_circle_points(count=256):
    """Equispaced points on the unit circle, for plot data."""
    theta = 2.0 * np.pi * np.arange(count) / count
    return np.exp(1j * theta)


def expand_zeros(zeros):
    """Ascending coefficients of prod (z - b) by incremental convolution."""
    coeffs = np.ones(1, dtype=complex)
    for b in zeros:
        coeffs = np.convolve(coeffs, np.array([-complex(b), 1.0]))
    return coeffs
