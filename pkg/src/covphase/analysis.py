"""Classification tests and moment operators for phase matrices.

Every test here decides a statement about the finite window. Where the
infinite-matrix statement involves sums over all indices (commutators,
products of moments) the window answer is only asymptotic, and the functions
that compute such quantities look at a central block away from the
truncation edges.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .errors import InputError, ValidationError
from .observable import effect_matrix
from .phase_matrix import DEFAULT_TOL, IndexWindow, PhaseMatrix, Tolerances
from .torus_kernel import TWO_PI, ArcSet, normalize_arcs


@dataclass(frozen=True, eq=False)
class GaugePhases:
    """Unit-modulus ``z_n`` with ``c'[n, m] = conj(z_n) z_m c[n, m]``."""

    window: IndexWindow
    phases: np.ndarray

    def __post_init__(self):
        z = np.array(self.phases, dtype=complex).reshape(-1)
        if z.shape != (self.window.size,):
            raise InputError("one phase per window index is required")
        if np.max(np.abs(np.abs(z) - 1.0)) > 1e-12:
            raise InputError("gauge phases must have unit modulus")
        z.setflags(write=False)
        object.__setattr__(self, "phases", z)

    def apply(self, C: PhaseMatrix) -> PhaseMatrix:
        z = self.phases
        return PhaseMatrix(C.window, z.conj()[:, None] * C.entries * z[None, :])


@dataclass
class Report:
    """Outcome of one check, serializable as a JSON report."""

    test: str
    passed: bool
    max_violation: float
    witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "test": self.test,
            "pass": self.passed,
            "max_violation": self.max_violation,
            "witnesses": self.witnesses,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _cjson(z) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


# -- commutativity -------------------------------------------------------------


def commutativity_violations(C: PhaseMatrix) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All in-window ``(n, m, k)`` with ``lhs = c[n,n+k] c[n+k,m]`` and ``rhs = c[n,m-k] c[m-k,m]``.

    Triples that would reference a label outside the window are skipped.
    Returns ``(triples, lhs, rhs)`` with ``triples`` as window labels.
    """
    N = C.size
    M = C.entries
    i, j, k = np.meshgrid(np.arange(N), np.arange(N), np.arange(-(N - 1), N), indexing="ij")
    ok = (i + k >= 0) & (i + k < N) & (j - k >= 0) & (j - k < N)
    i, j, k = i[ok], j[ok], k[ok]
    lhs = M[i, i + k] * M[i + k, j]
    rhs = M[i, j - k] * M[j - k, j]
    lo = C.window.lo
    return np.stack([i + lo, j + lo, k], axis=1), lhs, rhs


def check_commutative_criterion(C: PhaseMatrix, tol: float = 1e-10, max_witnesses: int = 10) -> Report:
    """Product criterion for commutativity, checked exhaustively on the window."""
    triples, lhs, rhs = commutativity_violations(C)
    dev = np.abs(lhs - rhs)
    worst = float(dev.max()) if dev.size else 0.0
    order = np.argsort(-dev)[:max_witnesses]
    witnesses = [
        {"n": int(triples[t, 0]), "m": int(triples[t, 1]), "k": int(triples[t, 2]),
         "lhs": _cjson(lhs[t]), "rhs": _cjson(rhs[t])}
        for t in order if dev[t] > tol
    ]
    return Report("commute", worst <= tol, worst, witnesses)


def commutator_norm(
    C: PhaseMatrix,
    X: ArcSet,
    Y: ArcSet,
    margin: Optional[int] = None,
    edges: Literal["both", "upper"] = "both",
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Frobenius norm of the central block of ``[E(X), E(Y)]``.

    ``margin`` indices (default ``size // 4``) are trimmed from each truncated
    edge. ``edges="upper"`` treats the lower edge as a genuine boundary (the
    number basis starts at 0) and trims only the upper one.
    """
    N = C.size
    margin = N // 4 if margin is None else int(margin)
    if margin < 0:
        raise InputError("margin must be nonnegative")
    if edges not in ("both", "upper"):
        raise InputError(f"edges must be 'both' or 'upper', got {edges!r}")
    lower = margin if edges == "both" else 0
    if lower + margin >= N:
        raise InputError(f"margin {margin} leaves no central block in a window of size {N}")
    EX = effect_matrix(C, X, tol).entries
    EY = effect_matrix(C, Y, tol, check=False).entries
    K = EX @ EY - EY @ EX
    return float(np.linalg.norm(K[lower:N - margin, lower:N - margin]))


# -- projection-valuedness -----------------------------------------------------


def projection_defect(C: PhaseMatrix) -> float:
    """``max |1 - |c[n, m]||`` over the window."""
    return float(np.max(np.abs(1.0 - np.abs(C.entries))))


def check_projection_valued(C: PhaseMatrix, tol: float = 1e-12) -> bool:
    """Window test of the unimodularity criterion ``|c[n, m]| = 1``."""
    return projection_defect(C) <= tol


def _tail_inverse_squares(K: int) -> float:
    """``sum_{k >= K} 1/k**2`` for K >= 1."""
    return math.pi**2 / 6.0 - float(np.sum(1.0 / np.arange(1, K, dtype=float) ** 2))


@dataclass(frozen=True)
class DiagonalTest:
    lhs: float  # <n| E([0, 2 pi x))^2 |n> on the window
    rhs: float  # <n| E([0, 2 pi x)) |n> = x
    tail_bound: float  # most the omitted indices could add to lhs


def pv_diagonal_test(C: PhaseMatrix, x: float, n: int = 0, tol: Tolerances = DEFAULT_TOL) -> DiagonalTest:
    """Compare ``<n|E(A)^2|n>`` with ``<n|E(A)|n>`` for ``A = [0, 2 pi x)``.

    In general ``lhs <= rhs`` with equality iff the row ``c[n, .]`` is
    unimodular. Labels outside the window are missing from ``lhs``; each one at
    distance ``k`` from ``n`` could contribute at most ``1 / (pi k)^2``.
    """
    if not 0.0 < x < 1.0:
        raise InputError("x must lie in (0, 1)")
    w = C.window
    if min(n - w.lo, w.hi - n) < w.size / 4:
        raise InputError(f"index {n} is too close to the window edge")
    E = effect_matrix(C, normalize_arcs([(0.0, TWO_PI * x)]), tol).entries
    row = E[w.position(n)]
    lhs = float(np.sum(np.abs(row) ** 2))
    rhs = float(E[w.position(n), w.position(n)].real)
    tail = (_tail_inverse_squares(n - w.lo + 1) + _tail_inverse_squares(w.hi - n + 1)) / math.pi**2
    return DiagonalTest(lhs, rhs, tail)


# -- equivalence ---------------------------------------------------------------


def check_equivalent(
    C: PhaseMatrix,
    C2: PhaseMatrix,
    tol: float = 1e-8,
    tol_zero: float = DEFAULT_TOL.zero,
) -> Optional[GaugePhases]:
    """Phases ``z`` with ``C2 = conj(z_n) z_m C``, or ``None`` if there are none.

    Phases are fixed by breadth-first propagation along nonzero entries, one
    root per connected component with ``z_root = 1``; every nonzero entry is
    then checked, so inconsistent cycles are caught.
    """
    if C.window != C2.window:
        raise InputError("matrices live on different windows")
    A, B = C.entries, C2.entries
    absA, absB = np.abs(A), np.abs(B)
    nonzero = absA > tol_zero
    if np.any(nonzero != (absB > tol_zero)):
        return None
    if np.any(np.abs(absA - absB)[nonzero] > tol):
        return None

    N = C.size
    z = np.zeros(N, dtype=complex)
    seen = np.zeros(N, dtype=bool)
    for root in range(N):
        if seen[root]:
            continue
        z[root] = 1.0
        seen[root] = True
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b in np.flatnonzero(nonzero[a] & ~seen):
                ratio = B[a, b] / A[a, b]
                z[b] = z[a] * ratio / abs(ratio)
                seen[b] = True
                queue.append(b)

    predicted = z.conj()[:, None] * A * z[None, :]
    if np.max(np.abs(predicted - B)) > tol:
        return None
    return GaugePhases(C.window, z)


# -- moments -------------------------------------------------------------------


def cyclic_moment(C: PhaseMatrix, k: int) -> np.ndarray:
    """``V(k) = integral z^k dE``: the single diagonal ``c[n, n-k] |n><n-k|``."""
    N = C.size
    if abs(k) >= N:
        raise InputError(f"|k| = {abs(k)} must be below the window size {N}")
    mask = np.eye(N, k=-k, dtype=bool)
    return np.where(mask, C.entries, 0.0)


def pv_from_first_moment(C: PhaseMatrix, tol: float = 1e-10) -> bool:
    """Projection-valuedness decided from the first off-diagonal alone.

    If ``|c[n, n+1]| = 1`` throughout, positivity of the order-3 minors forces
    ``c[n, n+k] = c[n, n+k-1] c[n+k-1, n+k]``; the whole window must then be
    unimodular. A matrix that breaks this is not positive semidefinite and
    raises :class:`ValidationError`.
    """
    M = C.entries
    N = C.size
    first = np.diagonal(M, offset=1)
    if first.size == 0:
        return True
    if np.max(np.abs(np.abs(first) - 1.0)) > tol:
        return False
    # one minor step can move an entry by up to sqrt(tol); allow it to accumulate
    step = math.sqrt(tol)
    for k in range(2, N):
        predicted = np.diagonal(M, offset=k - 1)[:-1] * first[k - 1:]
        actual = np.diagonal(M, offset=k)
        dev = np.max(np.abs(actual - predicted))
        if dev > step * k or np.max(np.abs(np.abs(actual) - 1.0)) > step * k:
            raise ValidationError(
                f"first off-diagonal is unimodular but offset {k} is not (deviation {dev:.3e}); "
                "the matrix cannot be positive semidefinite"
            )
    return True


def _offsets(N: int) -> np.ndarray:
    idx = np.arange(N)
    return idx[None, :] - idx[:, None]  # q = m - n


def first_phase_moment(C: PhaseMatrix) -> np.ndarray:
    """``integral theta dE(theta)`` over ``[0, 2pi)``.

    Diagonal ``pi``; off-diagonal ``c[n, m] / (i q)`` with ``q = m - n``.
    """
    q = _offsets(C.size)
    with np.errstate(divide="ignore", invalid="ignore"):
        M = C.entries / (1j * q)
    M[q == 0] = math.pi
    return M


def second_phase_moment(C: PhaseMatrix) -> np.ndarray:
    """``integral theta^2 dE(theta)`` over ``[0, 2pi)``.

    Diagonal ``4 pi^2 / 3``; off-diagonal ``c[n, m] (2 pi / (i q) + 2 / q^2)``.
    """
    q = _offsets(C.size).astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        M = C.entries * (TWO_PI / (1j * q) + 2.0 / q**2)
    M[q == 0] = 4.0 * math.pi**2 / 3.0
    return M


def reconstruct_from_first_moment(E1: np.ndarray, window: IndexWindow) -> PhaseMatrix:
    """Invert :func:`first_phase_moment`: ``c[n, m] = i (m - n) E1[n, m]``, unit diagonal."""
    q = _offsets(window.size)
    C = 1j * q * np.asarray(E1, dtype=complex)
    np.fill_diagonal(C, 1.0)
    return PhaseMatrix(window, C)


def moment_defect(C: PhaseMatrix, margin: Optional[int] = None) -> float:
    """Frobenius norm of the central block of ``E2 - E1 @ E1``."""
    N = C.size
    margin = N // 4 if margin is None else int(margin)
    if 2 * margin >= N:
        raise InputError("margin leaves no central block")
    E1 = first_phase_moment(C)
    D = second_phase_moment(C) - E1 @ E1
    return float(np.linalg.norm(D[margin:N - margin, margin:N - margin]))
