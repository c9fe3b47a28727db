"""Exit criteria, one test per criterion, each reporting a PASS/FAIL line."""

import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from unpol.analysis import (
    block_scalar_residuals,
    classical_unpolarized_test,
    commutant_dimension,
    commutator_norms,
    invariance_deviation,
    is_unpolarized,
    monte_carlo_invariance,
    rotation_eigenbasis,
    stokes_moment_tensor,
)
from unpol.io import dumps_state, load_state
from unpol.states import (
    DensityOperator,
    fock_vector,
    pure_density,
    thermal_deficit,
    thermal_state,
    unpolarized_state,
)
from unpol.su2 import casimir_block, commutator, levi_civita, schwinger_block
from unpol.transforms import geometric_rotation, random_lossless

from conftest import random_mixed_state, random_pure_vector, random_unpolarized_weights


def two_photon_state(n_max=2):
    return pure_density(fock_vector({(1, 1): 1}, n_max))


def test_1_algebra(criterion):
    start = time.perf_counter()
    worst = 0.0
    for n in range(11):
        gens = {k: schwinger_block(k, n) for k in (1, 2, 3)}
        for k, l in itertools.product((1, 2, 3), repeat=2):
            expected = sum(1j * levi_civita(k, l, m) * gens[m] for m in (1, 2, 3))
            worst = max(worst, np.linalg.norm(commutator(gens[k], gens[l]) - expected) / (n + 1))
        casimir = sum(g @ g for g in gens.values())
        worst = max(worst, np.linalg.norm(casimir - casimir_block(n)) / (n + 1))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 5
    criterion("1 algebra: commutators + Casimir, n <= 10", ok,
              f"max residual/(n+1) {worst:.1e}, {elapsed:.2f}s")
    assert ok


def test_2_schur_oracle(criterion):
    start = time.perf_counter()
    dims = [commutant_dimension(n) for n in range(11)]
    elapsed = time.perf_counter() - start
    ok = dims == [1] * 11 and elapsed < 30
    criterion("2 Schur oracle: commutant dimension 1 for n <= 10", ok, f"{dims}, {elapsed:.2f}s")
    assert ok


def build_corpus(rng):
    corpus = []
    for i in range(50):
        corpus.append(("unpolarized", unpolarized_state(random_unpolarized_weights(rng, i % 7))))
    for i, nbar in enumerate(np.linspace(0.05, 4, 30)):
        corpus.append(("thermal", thermal_state(nbar, i % 7)))
    for i in range(60):
        n_max = 1 + i % 6
        manifolds = None if i % 2 else [1 + i % n_max]
        corpus.append(("pure", pure_density(random_pure_vector(rng, n_max, manifolds))))
    for i in range(50):
        corpus.append(("mixed", random_mixed_state(rng, 1 + i % 6, rank=1 + i % 3)))
    for i in range(20):
        # unpolarized background with a small polarized admixture in one manifold
        n_max = 2 + i % 5
        base = unpolarized_state(random_unpolarized_weights(rng, n_max))
        spike = pure_density(random_pure_vector(rng, n_max, [n_max]))
        eps = 0.05
        corpus.append(("perturbed", DensityOperator(
            (1 - eps) * a + eps * b for a, b in zip(base.blocks, spike.blocks))))
    return corpus


def test_3_characterization_equivalence(criterion):
    tol = 1e-8
    corpus = build_corpus(np.random.default_rng(3))
    disagreements = []
    counts = {True: 0, False: 0}
    for i, (kind, rho) in enumerate(corpus):
        limits = tol * np.arange(1, rho.n_max + 2)
        scalar = bool(np.all(block_scalar_residuals(rho) <= limits))
        norms = commutator_norms(rho)
        # definition uses L2, L3; L1 follows from the algebra and must agree
        by_definition = bool(np.all(norms[1:] <= limits))
        with_l1 = bool(np.all(norms <= limits))
        invariant = monte_carlo_invariance(rho, 200, seed=i, family="linear") <= tol
        counts[scalar] += 1
        if not scalar == by_definition == with_l1 == invariant:
            disagreements.append((i, kind, scalar, by_definition, with_l1, invariant))
    ok = len(corpus) >= 200 and not disagreements
    criterion("3 equivalence: block-scalar == commutator == Monte Carlo invariance", ok,
              f"{len(corpus)} states, {counts[True]} unpolarized, "
              f"{len(disagreements)} disagreements")
    assert ok, disagreements[:5]


def test_4_trace_condition(criterion):
    rng = np.random.default_rng(4)
    worst = 0.0
    for n_max in range(13):
        for _ in range(20):
            rho = unpolarized_state(random_unpolarized_weights(rng, n_max))
            weights = [b[0, 0].real for b in rho.blocks]
            worst = max(worst, abs(sum((n + 1) * r for n, r in enumerate(weights)) - 1))
    thermal_ok = True
    details = []
    for nbar in (0.1, 0.5, 1.0, 1.5, 2.0):
        x = nbar / (1 + nbar)
        rho = thermal_state(nbar, 200)
        deficit = rho.truncation_deficit
        # closed form of sum_{n<=N} (n+1) x^n
        partial = (1 - 202 * x ** 201 + 201 * x ** 202) / (1 - x) ** 2
        closed = 1 - (1 - x) ** 2 * partial
        thermal_ok &= deficit < 1e-10
        thermal_ok &= abs(rho.trace().real + deficit - 1) <= 1e-10
        thermal_ok &= abs(deficit - thermal_deficit(nbar, 200)) <= 1e-15
        thermal_ok &= abs(closed - deficit) <= 1e-10
        details.append(f"{nbar}:{deficit:.1e}")
    ok = worst <= 1e-10 and thermal_ok
    criterion("4 trace condition sum (n+1) r_n = 1", ok,
              f"max residual {worst:.1e}; thermal deficits {' '.join(details)}")
    assert ok


def test_5_vacuum_uniqueness(criterion):
    rng = np.random.default_rng(5)
    n_max = 5
    corpus = [("vacuum", fock_vector({(0, 0): 1}, n_max))]
    for n in range(1, 6):
        corpus += [(f"n={n}", random_pure_vector(rng, n_max, [n])) for _ in range(50)]
    corpus += [("spread", random_pure_vector(rng, n_max)) for _ in range(50)]
    passing = [label for label, psi in corpus if is_unpolarized(pure_density(psi)).verdict]
    ok = len(corpus) >= 251 and passing == ["vacuum"]
    criterion("5 vacuum is the only unpolarized pure state", ok,
              f"{len(corpus)} states, passing: {passing}")
    assert ok


def test_6_nonlinear_lossless_invariance(criterion):
    rng = np.random.default_rng(6)
    n_max = 4
    states = [thermal_state(1.0, n_max), unpolarized_state([1, 0, 0, 0, 0])]
    states += [unpolarized_state(random_unpolarized_weights(rng, n_max)) for _ in range(5)]
    two = two_photon_state(n_max)
    worst = 0.0
    moved = 0
    for seed in range(50):
        u = random_lossless(seed, n_max)
        worst = max(worst, max(invariance_deviation(rho, u) for rho in states))
        moved += invariance_deviation(two, u) > 1e-3
    ok = worst <= 1e-10 and moved >= 49
    criterion("6 invariance under general lossless unitaries", ok,
              f"max deviation {worst:.1e}, |1,1> moved by {moved}/50")
    assert ok


def test_7_hidden_polarization(criterion):
    rho = two_photon_state()
    first = stokes_moment_tensor(rho, 1).entries
    second = np.diag(stokes_moment_tensor(rho, 2).entries)
    classical = classical_unpolarized_test(rho, tol=1e-12)
    quantum = is_unpolarized(rho).verdict
    moments_ok = np.max(np.abs(second - [1, 1, 0])) <= 1e-10
    ok = classical and not quantum and np.max(np.abs(first)) <= 1e-12 and moments_ok
    criterion("7 hidden polarization of |1,1>", ok,
              f"classical={classical}, quantum={quantum}, second-order diag={second.real.round(12)}")
    assert ok


def test_8_rotation_eigenbasis(criterion):
    rng = np.random.default_rng(8)
    thetas = rng.uniform(-2 * np.pi, 2 * np.pi, 10)
    worst_gram = worst_eig = worst_inv = 0.0
    counts_ok = True
    for n in range(9):
        w, v = rotation_eigenbasis(n)
        counts_ok &= v.shape == (n + 1, n + 1) and w.size == n + 1
        worst_gram = max(worst_gram, np.linalg.norm(v.conj().T @ v - np.eye(n + 1)))
        worst_eig = max(worst_eig, np.max(np.abs(w - (np.arange(n + 1) - n / 2))))
        for theta in thetas:
            u = geometric_rotation(theta, n).block(n)
            for col in v.T:
                p = np.outer(col, col.conj())
                worst_inv = max(worst_inv, np.linalg.norm(u @ p @ u.conj().T - p))
    ok = counts_ok and worst_gram <= 1e-10 and worst_eig <= 1e-10 and worst_inv <= 1e-10
    criterion("8 rotation eigenbasis: n+1 invariant orthonormal states", ok,
              f"gram {worst_gram:.1e}, spectrum {worst_eig:.1e}, invariance {worst_inv:.1e}")
    assert ok


def test_9_cli_end_to_end(criterion, tmp_path):
    def unpol(*args):
        return subprocess.run([sys.executable, "-m", "unpol", *map(str, args)],
                              capture_output=True, text=True)

    start = time.perf_counter()
    thermal, moved, two = tmp_path / "thermal.json", tmp_path / "moved.json", tmp_path / "two.json"
    steps = [
        unpol("make", "thermal", "--mean-photons", 1, "--n-max", 4, "--out", thermal).returncode == 0,
        unpol("transform", thermal, "--random-lossless", 11, "--out", moved).returncode == 0,
        unpol("check", moved, "--seed", 2, "--out", tmp_path / "r1.json").returncode == 0,
        unpol("make", "pure", "--amplitude", 1, 1, 1, "--out", two).returncode == 0,
        unpol("check", two, "--seed", 2, "--out", tmp_path / "r2.json").returncode == 1,
    ]
    round_trips = []
    for path in (thermal, moved, two):
        copy = tmp_path / ("copy_" + path.name)
        unpol("transform", path, "--angles", 0, 0, 0, "--out", copy)
        # a zero-angle transform is the exact identity, so the rewrite must match byte for byte
        round_trips.append(copy.read_bytes() == path.read_bytes())
        round_trips.append(dumps_state(load_state(path)).encode() == path.read_bytes())
    elapsed = time.perf_counter() - start
    ok = all(steps) and all(round_trips) and elapsed < 10
    criterion("9 CLI make -> transform -> check, byte-identical round trips", ok,
              f"steps {steps}, round trips {round_trips}, {elapsed:.2f}s")
    assert ok
