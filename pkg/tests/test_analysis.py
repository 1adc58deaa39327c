import math

import numpy as np
import pytest

from covphase import (
    ArcSet,
    IndexWindow,
    InputError,
    PhaseMatrix,
    ValidationError,
    check_commutative_criterion,
    check_equivalent,
    check_projection_valued,
    commutator_norm,
    cyclic_moment,
    first_phase_moment,
    normalize_arcs,
    parity_matrix,
    pv_diagonal_test,
    pv_from_first_moment,
    pv_matrix,
    random_gram_matrix,
    second_phase_moment,
    trivial_phase_matrix,
)
from covphase.analysis import (
    GaugePhases,
    commutativity_violations,
    moment_defect,
    projection_defect,
    reconstruct_from_first_moment,
)
from covphase.catalog import parity_vectors
from covphase.gram_factor import gram

import oracles

PI = math.pi
X_HALF = normalize_arcs([(0, PI)])
Y_QUARTER = normalize_arcs([(0, PI / 2)])


def ones(window):
    return PhaseMatrix(window, np.ones((window.size, window.size)))


def brute_commutator(C, X, Y, margin):
    """[E(X), E(Y)] by explicit triple loop over the window."""
    from covphase import kernel_integral

    N = C.size
    M = C.entries
    kx = {q: kernel_integral(X, q) for q in range(-N, N)}
    ky = {q: kernel_integral(Y, q) for q in range(-N, N)}
    K = np.zeros((N, N), dtype=complex)
    for a in range(N):
        for b in range(N):
            s = 0j
            for t in range(N):
                ex_at, ey_tb = M[a, t] * kx[t - a], M[t, b] * ky[b - t]
                ey_at, ex_tb = M[a, t] * ky[t - a], M[t, b] * kx[b - t]
                s += ex_at * ey_tb - ey_at * ex_tb
            K[a, b] = s
    return np.linalg.norm(K[margin:N - margin, margin:N - margin])


# -- commutativity -------------------------------------------------------------


@pytest.mark.parametrize("xi", [-1, -0.5, 0, 0.5, 1])
def test_parity_satisfies_criterion(xi):
    C = parity_matrix(xi, IndexWindow(-6, 6))
    r = check_commutative_criterion(C)
    assert r.passed and r.max_violation <= 1e-15
    # every in-window triple was visited: count by explicit enumeration
    N = 13
    expected = sum(
        1 for i in range(N) for j in range(N) for k in range(-N, N)
        if 0 <= i + k < N and 0 <= j - k < N
    )
    assert len(commutativity_violations(C)[0]) == expected


def test_identity_satisfies_criterion():
    assert check_commutative_criterion(trivial_phase_matrix(IndexWindow(-4, 4))).passed


def test_generic_gram_violates_criterion():
    C = random_gram_matrix(IndexWindow(-4, 4), 9, seed=0)
    r = check_commutative_criterion(C)
    assert not r.passed
    w = r.witnesses[0]
    n, m, k = w["n"], w["m"], w["k"]
    lhs = C[n, n + k] * C[n + k, m]
    rhs = C[n, m - k] * C[m - k, m]
    assert abs(lhs - rhs) == pytest.approx(r.max_violation)
    assert abs(lhs - rhs) > 1e-3


def test_commutator_identity_is_zero():
    assert commutator_norm(trivial_phase_matrix(IndexWindow(-5, 5)), X_HALF, Y_QUARTER) == 0


def test_commutator_matches_brute_force():
    C = random_gram_matrix(IndexWindow(-4, 4), 2, seed=5)
    assert commutator_norm(C, X_HALF, Y_QUARTER, margin=2) == pytest.approx(
        brute_commutator(C, X_HALF, Y_QUARTER, 2), rel=1e-12
    )


def test_commutator_parity_decreases_with_window():
    values = [commutator_norm(parity_matrix(0.5, IndexWindow(-L, L)), X_HALF, Y_QUARTER, margin=L // 2) for L in (8, 16, 32)]
    assert values[0] > values[1] > values[2]


def test_commutator_random_well_above_parity():
    parity = commutator_norm(parity_matrix(0.5, IndexWindow(-8, 8)), X_HALF, Y_QUARTER, margin=4)
    rand = commutator_norm(random_gram_matrix(IndexWindow(-8, 8), 2, seed=1), X_HALF, Y_QUARTER, margin=4)
    assert rand >= 10 * parity


def test_commutator_symmetric_in_arguments(corpus):
    C = corpus[5]
    X, Y = normalize_arcs([(1, 2.5)]), normalize_arcs([(2, 5)])
    assert commutator_norm(C, X, Y) == pytest.approx(commutator_norm(C, Y, X), rel=1e-13)


def test_commutator_margin_errors():
    C = parity_matrix(0.5, IndexWindow(-2, 2))
    with pytest.raises(InputError):
        commutator_norm(C, X_HALF, Y_QUARTER, margin=3)
    with pytest.raises(InputError):
        commutator_norm(C, X_HALF, Y_QUARTER, margin=-1)
    with pytest.raises(InputError):
        commutator_norm(C, X_HALF, Y_QUARTER, edges="lower")


# -- projection-valuedness -----------------------------------------------------


@pytest.mark.parametrize("xi,expected", [(-1, True), (-0.5, False), (0, False), (0.5, False), (1, True)])
def test_parity_pv_iff_unit(xi, expected):
    assert check_projection_valued(parity_matrix(xi, IndexWindow(-6, 6)), tol=1e-12) is expected


def test_unimodular_phases_are_pv(rng):
    u = rng.uniform(0, 2 * PI, 11)
    C = pv_matrix(u, IndexWindow(-5, 5))
    assert check_projection_valued(C)
    assert not check_projection_valued(trivial_phase_matrix(IndexWindow(0, 3)))


def test_constant_sequence_is_pv():
    C = gram(parity_vectors(1.0, IndexWindow(-3, 3)))
    assert check_projection_valued(C) == (projection_defect(C) <= 1e-12)
    assert check_projection_valued(C)


def test_pv_diagonal_identity():
    r = pv_diagonal_test(trivial_phase_matrix(IndexWindow(-8, 8)), 0.5, 0)
    assert r.lhs == pytest.approx(0.25, abs=1e-15)
    assert r.rhs == pytest.approx(0.5, abs=1e-15)


def test_pv_diagonal_all_ones():
    r = pv_diagonal_test(ones(IndexWindow(-32, 32)), 0.5, 0)
    assert abs(r.lhs - 0.5) <= 0.02
    # the missing mass is within the reported bound
    assert r.rhs - r.lhs <= r.tail_bound
    # reference partial sum of the series: x^2 + 2 sum_{k<=32} |e^{2 pi i k x} - 1|^2 / (4 pi^2 k^2)
    k = np.arange(1, 33)
    partial = 0.25 + 2 * np.sum(np.abs(np.exp(1j * PI * k) - 1) ** 2 / (4 * PI**2 * k**2))
    assert r.lhs == pytest.approx(partial, abs=1e-14)


def test_pv_diagonal_inequality(corpus):
    for C in corpus:
        for x in (0.1, 0.37, 0.5, 0.9):
            r = pv_diagonal_test(C, x, 0)
            assert r.lhs <= r.rhs + r.tail_bound


def test_pv_diagonal_edge_error():
    with pytest.raises(InputError):
        pv_diagonal_test(ones(IndexWindow(-8, 8)), 0.5, 6)


# -- equivalence ---------------------------------------------------------------


def test_gauge_transform_detected(corpus):
    C = corpus[6]
    z = 1j ** C.window.labels
    C2 = GaugePhases(C.window, z).apply(C)
    phases = check_equivalent(C, C2)
    assert phases is not None
    rebuilt = phases.phases.conj()[:, None] * C.entries * phases.phases[None, :]
    assert np.max(np.abs(rebuilt - C2.entries)) <= 1e-10
    # unique up to one constant on the (connected) component
    ratio = phases.phases / z
    assert np.allclose(ratio, ratio[0])


def test_equivalent_to_itself(corpus):
    phases = check_equivalent(corpus[0], corpus[0])
    assert np.allclose(phases.phases, 1)


def test_modulus_perturbation_rejected(corpus):
    C = corpus[8]
    M = np.array(C.entries)
    M[2, 5] *= 1 + 1e-3 / abs(M[2, 5])
    M[5, 2] = np.conj(M[2, 5])
    assert check_equivalent(C, PhaseMatrix(C.window, M)) is None


def test_inconsistent_cycle_rejected():
    W = IndexWindow(0, 2)
    C = parity_matrix(0.5, W)
    # same moduli but a phase pattern no diagonal gauge can produce
    M = np.array(C.entries)
    M[0, 2], M[2, 0] = -1, -1
    C2 = PhaseMatrix(W, M)
    assert check_equivalent(C, C2) is None


def test_zero_pattern_and_components():
    W = IndexWindow(0, 3)
    C = trivial_phase_matrix(W)
    z = np.exp(1j * np.array([0.1, 0.2, 0.3, 0.4]))
    # identity is gauge invariant; four singleton components each get z = 1
    assert np.allclose(check_equivalent(C, C).phases, 1)
    assert check_equivalent(C, ones(W)) is None
    blocks = parity_matrix(0.0, W)
    assert check_equivalent(blocks, GaugePhases(W, z).apply(blocks)) is not None


def test_equivalence_is_symmetric(corpus):
    C = corpus[10]
    z = np.exp(1j * np.linspace(0, 3, C.size))
    C2 = GaugePhases(C.window, z).apply(C)
    assert check_equivalent(C, C2) is not None
    assert check_equivalent(C2, C) is not None
    with pytest.raises(InputError):
        check_equivalent(C, trivial_phase_matrix(IndexWindow(0, 3)))


def test_pv_matrices_equivalent_to_all_ones(rng):
    W = IndexWindow(-4, 4)
    for _ in range(5):
        assert check_equivalent(ones(W), pv_matrix(rng.uniform(-10, 10, W.size), W)) is not None


# -- moments -------------------------------------------------------------------


def test_cyclic_moment_examples():
    W = IndexWindow(-5, 5)
    assert np.array_equal(cyclic_moment(ones(W), 0), np.eye(11))
    assert not np.any(cyclic_moment(trivial_phase_matrix(W), 2))
    s = np.linalg.svd(cyclic_moment(ones(W), 3), compute_uv=False)
    assert np.sum(np.isclose(s, 1)) == 8 and np.sum(np.isclose(s, 0)) == 3
    with pytest.raises(InputError):
        cyclic_moment(ones(W), 11)


@pytest.mark.parametrize("k", [-3, -1, 0, 1, 2])
def test_cyclic_moment_matches_quadrature(corpus, k):
    C = corpus[12]
    Q = oracles.moment_quadrature(C.entries, lambda t: np.exp(1j * k * t), points=4096)
    assert np.max(np.abs(cyclic_moment(C, k) - Q)) <= 1e-6


def test_cyclic_moment_adjoint_and_contraction(corpus):
    for C in corpus[:5]:
        for k in range(1, 5):
            assert np.allclose(cyclic_moment(C, k).conj().T, cyclic_moment(C, -k))
            assert np.linalg.norm(cyclic_moment(C, k), 2) <= 1 + 1e-12


def test_first_moment_examples(corpus):
    W = IndexWindow(-3, 3)
    assert np.allclose(first_phase_moment(trivial_phase_matrix(W)), PI * np.eye(7), atol=0)
    for C in corpus:
        E1 = first_phase_moment(C)
        assert np.max(np.abs(E1 - E1.conj().T)) <= 1e-14
        rebuilt = reconstruct_from_first_moment(E1, C.window).entries
        assert np.max(np.abs(rebuilt - C.entries)) <= 1e-10


def test_first_moment_matches_quadrature():
    C = ones(IndexWindow(-4, 4))
    Q = oracles.moment_quadrature(C.entries, lambda t: t)
    assert np.max(np.abs(first_phase_moment(C) - Q)) <= 1e-4


def test_second_moment_matches_quadrature(corpus):
    for C in (corpus[0], ones(IndexWindow(-4, 4))):
        Q = oracles.moment_quadrature(C.entries, lambda t: t**2)
        assert np.max(np.abs(second_phase_moment(C) - Q)) <= 1e-3


def test_trivial_variance():
    W = IndexWindow(-3, 3)
    E1 = first_phase_moment(trivial_phase_matrix(W))
    E2 = second_phase_moment(trivial_phase_matrix(W))
    assert np.allclose(np.diag(E2 - E1 @ E1), PI**2 / 3, atol=1e-12)


def test_moment_defect_pv_vs_parity():
    W = IndexWindow(-32, 32)
    assert 5 * moment_defect(ones(W)) <= moment_defect(parity_matrix(0.5, W))


def test_pv_from_first_moment(rng):
    W = IndexWindow(-6, 6)
    assert pv_from_first_moment(pv_matrix(rng.uniform(0, 6, W.size), W))
    assert not pv_from_first_moment(parity_matrix(0.5, W))
    assert not pv_from_first_moment(trivial_phase_matrix(W))


def test_pv_from_first_moment_rejects_inconsistent_matrix():
    W = IndexWindow(0, 2)
    M = np.ones((3, 3), dtype=complex)
    M[0, 2], M[2, 0] = -1, -1  # |c| = 1 everywhere but not PSD
    with pytest.raises(ValidationError):
        pv_from_first_moment(PhaseMatrix(W, M))


def test_report_json():
    r = check_commutative_criterion(random_gram_matrix(IndexWindow(-2, 2), 5, seed=1))
    doc = r.to_dict()
    assert set(doc) == {"test", "pass", "max_violation", "witnesses"}
    assert doc["pass"] is False and doc["witnesses"]
