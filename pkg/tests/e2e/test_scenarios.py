"""Whole-pipeline scenarios over many random and constructed instances."""

import itertools
import math

import numpy as np
import pytest

from lib.ambiguity import enumerate_solutions, intensity_gap, reconstruct_from_zeros
from lib.instances import (
    MAX_AMBIGUOUS,
    UNIQUE,
    GenSpec,
    gen_max_ambiguous,
    gen_unique,
    generate,
    matched_displacement,
    perturb_study,
)
from lib.nonneg import feasible_region, last_pair_coefficients, last_pair_nonneg
from lib.roots import (
    UNIT_CIRCLE,
    associated_polynomial,
    expand_zeros,
    find_roots,
    pair_roots,
)
from lib.signals import Signal, autocorrelation, canonicalize


def _normalized(x):
    return x.scaled(1 / min(abs(v) for v in x.values))


def test_worked_example_from_zeros(example_zeros):
    x = reconstruct_from_zeros(example_zeros, 150 * 32)
    a = autocorrelation(x)
    report = enumerate_solutions(a)
    assert (report.total_classes, report.nonnegative_classes) == (4, 3)
    for solution in report.solutions:
        assert intensity_gap(solution.signal, a, 512) <= 1e-8


def test_worked_example_region_constants(example_fixed):
    region = feasible_region(example_fixed)
    assert region.halfplane_bound == pytest.approx(7 / 4, abs=1e-12)
    got = [(d.center, d.radius) for d in region.discs]
    want = [(7 / 2, math.sqrt(29) / 2), (10 / 7, math.sqrt(58) / 7), (3 / 5, 3 / 5)]
    for (center, radius), (c, r) in zip(got, want):
        assert center == pytest.approx(c, abs=1e-12)
        assert radius == pytest.approx(r, abs=1e-12)


def test_last_pair_criterion_matches_expansion(random_zero_set):
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 1000:
        fixed = random_zero_set(rng, int(rng.integers(0, 6)), half_plane=True)
        beta = complex(rng.uniform(-4, 4), rng.uniform(-3, 3))
        coeffs = expand_zeros([*fixed, beta, beta.conjugate()]).real
        if np.min(np.abs(coeffs)) <= 1e-6 * np.max(np.abs(coeffs)):
            continue
        assert last_pair_nonneg(fixed, beta) == bool(np.min(coeffs) >= 0)
        assert np.allclose(last_pair_coefficients(fixed, beta), coeffs[::-1])
        checked += 1


def test_left_half_plane_instances_are_all_nonnegative(random_zero_set):
    rng = np.random.default_rng(7)
    for _ in range(200):
        zeros = random_zero_set(rng, int(rng.integers(1, 8)), half_plane=True)
        x = reconstruct_from_zeros(zeros, 1.0)
        report = enumerate_solutions(autocorrelation(x))
        assert report.nonnegative_classes == report.total_classes, zeros


@pytest.mark.parametrize("n", range(3, 11))
def test_max_ambiguous_reaches_the_bound(n):
    for seed in range(10):
        x = gen_max_ambiguous(GenSpec(support_length=n, mode=MAX_AMBIGUOUS, seed=seed))
        report = enumerate_solutions(autocorrelation(x))
        assert report.total_classes == 2 ** (n - 2)
        assert report.nonnegative_classes == 2 ** (n - 2)


@pytest.mark.parametrize("n", range(4, 9))
def test_unique_instances_have_one_nonnegative_class(n):
    for seed in range(10):
        x = gen_unique(GenSpec(support_length=n, mode=UNIQUE, seed=seed))
        report = enumerate_solutions(autocorrelation(x))
        assert report.nonnegative_classes == 1
        assert report.total_classes == 2 ** (report.flippable - 1)
        assert any(
            np.allclose(s.signal.values, canonicalize(x).values, rtol=1e-6)
            for s in report.nonnegative_solutions()
        )


@pytest.mark.parametrize("n", [3, 4])
def test_enumeration_matches_brute_force_grid(n):
    groups = {}
    for values in itertools.product(range(1, 6), repeat=n):
        key = tuple(int(c) for c in np.correlate(values, values, "full")[n - 1 :])
        groups.setdefault(key, set()).add(min(values, values[::-1]))

    for key, brute in groups.items():
        x = Signal(0, next(iter(brute)))
        report = enumerate_solutions(autocorrelation(x))
        found = set()
        for solution in report.nonnegative_solutions():
            rounded = tuple(int(round(v)) for v in solution.signal.values)
            on_grid = all(1 <= v <= 5 for v in rounded)
            if on_grid and np.allclose(solution.signal.values, rounded, atol=1e-6):
                found.add(rounded)
        assert found == brute, key


@pytest.mark.parametrize("mode", [MAX_AMBIGUOUS, UNIQUE])
def test_small_perturbations_keep_class_counts(mode):
    spec = GenSpec(support_length=6, mode=mode, seed=5, min_separation=0.15)
    base = _normalized(generate(spec))
    expected = enumerate_solutions(autocorrelation(base)).nonnegative_classes

    small = perturb_study(base, 1e-4, trials=100, seed=1)
    large = perturb_study(base, 1e-2, trials=100, seed=1)
    assert small.preserved(expected) == 100
    closer = sum(
        1
        for s, g in zip(small.results, large.results)
        if g.error is None and s.max_root_displacement < g.max_root_displacement
    )
    assert closer >= 95


def test_zero_set_round_trip(random_zero_set):
    rng = np.random.default_rng(99)
    for _ in range(500):
        zeros = random_zero_set(rng, int(rng.integers(1, 10)))
        x = reconstruct_from_zeros(zeros, 1.0)
        roots = find_roots(associated_polynomial(autocorrelation(x)))
        units = pair_roots(roots)
        assert all(u.kind != UNIT_CIRCLE for u in units)
        gammas = [p.gamma for u in units for p in u.pairs]
        expected = [z if abs(z) >= 1 else 1 / z.conjugate() for z in zeros]
        assert len(gammas) == len(expected)
        scale = max(1.0, max(abs(z) for z in expected))
        assert matched_displacement(expected, gammas) <= 1e-6 * scale


def test_random_instances_class_structure(random_zero_set):
    rng = np.random.default_rng(31)
    for _ in range(100):
        zeros = random_zero_set(rng, int(rng.integers(1, 8)))
        x = reconstruct_from_zeros(zeros, 1.0)
        a = autocorrelation(x)
        report = enumerate_solutions(a)
        assert report.total_classes == 2 ** (report.flippable - 1), zeros

        for solution in report.nonnegative_solutions():
            real_zeros = [z for z in solution.chosen_zeros if abs(z.imag) <= 1e-9]
            assert all(z.real <= 0 for z in real_zeros), solution

        # every zero flipped: the reflected signal, hence the same classes
        flipped = reconstruct_from_zeros([1 / z.conjugate() for z in zeros], 1.0)
        again = enumerate_solutions(autocorrelation(flipped))
        assert again.total_classes == report.total_classes
        for solution in report.solutions:
            values = np.array(solution.signal.values)
            atol = 1e-6 * np.max(np.abs(values))
            assert any(
                np.allclose(values, other.signal.values, atol=atol)
                for other in again.solutions
            ), solution
