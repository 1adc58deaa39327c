"""Effect operators, outcome probabilities, densities and Born-rule sampling.

For a phase matrix ``C`` and an arc set ``X`` the effect operator on the
window is the entrywise product

    E(X)[n, m] = c[n, m] * kappa(X, m - n),

i.e. the Schur product of ``C`` with the Toeplitz kernel matrix of ``X``.
Both factors are PSD, so every truncated effect is PSD exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError, ValidationError
from .phase_matrix import DEFAULT_TOL, IndexWindow, PhaseMatrix, Tolerances, validate
from .torus_kernel import TWO_PI, ArcSet, is_disjoint, kernel_integral, rotate, set_union

STATE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EffectMatrix:
    window: IndexWindow
    arc_set: ArcSet
    entries: np.ndarray

    def to_dict(self) -> dict:
        return {
            "window": [self.window.lo, self.window.hi],
            "arcs": self.arc_set.to_pairs(),
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.entries],
        }


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit vector of amplitudes ``psi_n`` over the window labels."""

    window: IndexWindow
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (self.window.size,):
            raise InputError(f"state has {amp.size} amplitudes, window needs {self.window.size}")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > STATE_TOL:
            raise InputError(f"state norm is {norm!r}, expected 1")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    def to_dict(self) -> dict:
        return {
            "window": [self.window.lo, self.window.hi],
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.amplitudes],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data, window: Optional[IndexWindow] = None) -> "StateVector":
        """Parse ``{"window": [lo, hi], "amplitudes": [[re, im], ...]}``.

        A bare list of ``[re, im]`` pairs is accepted when ``window`` is given.
        """
        try:
            if isinstance(data, dict):
                lo, hi = data["window"]
                window = IndexWindow(int(lo), int(hi))
                raw = np.asarray(data["amplitudes"], dtype=float)
            else:
                raw = np.asarray(data, dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed state document: {exc}") from exc
        if window is None:
            raise InputError("state document has no window")
        if raw.ndim != 2 or raw.shape[1] != 2:
            raise InputError("amplitudes must be [re, im] pairs")
        return cls(window, raw[:, 0] + 1j * raw[:, 1])

    @classmethod
    def from_json(cls, text: str, window: Optional[IndexWindow] = None) -> "StateVector":
        return cls.from_dict(json.loads(text), window)


def basis_state(window: IndexWindow, n: int) -> StateVector:
    amp = np.zeros(window.size, dtype=complex)
    amp[window.position(n)] = 1.0
    return StateVector(window, amp)


def superposition(window: IndexWindow, labels=None) -> StateVector:
    """Equal-weight superposition of the given labels (default: the whole window)."""
    amp = np.zeros(window.size, dtype=complex)
    labels = window.labels if labels is None else labels
    for n in labels:
        amp[window.position(int(n))] = 1.0
    return StateVector(window, amp / np.linalg.norm(amp))


def random_state(window: IndexWindow, seed: int) -> StateVector:
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=window.size) + 1j * rng.normal(size=window.size)
    return StateVector(window, amp / np.linalg.norm(amp))


def _check_phase_matrix(C: PhaseMatrix, tol: Tolerances) -> None:
    report = validate(C, tol)
    if not report.is_valid:
        raise ValidationError(f"not a valid phase matrix: {report}")


def kernel_matrix(X: ArcSet, size: int) -> np.ndarray:
    """Toeplitz matrix ``K[i, j] = kappa(X, j - i)``."""
    q = np.arange(-(size - 1), size)
    kq = kernel_integral(X, q)
    idx = np.arange(size)
    return kq[(idx[None, :] - idx[:, None]) + size - 1]


def effect_matrix(C: PhaseMatrix, X: ArcSet, tol: Tolerances = DEFAULT_TOL, check: bool = True) -> EffectMatrix:
    """Matrix of ``E(X)`` on the window of ``C``."""
    if check:
        _check_phase_matrix(C, tol)
    return EffectMatrix(C.window, X, C.entries * kernel_matrix(X, C.size))


def _same_window(C: PhaseMatrix, psi: StateVector) -> None:
    if C.window != psi.window:
        raise InputError(
            f"state window [{psi.window.lo}, {psi.window.hi}] differs from matrix window "
            f"[{C.window.lo}, {C.window.hi}]"
        )


def probability(C: PhaseMatrix, psi: StateVector, X: ArcSet, clip: bool = True, tol: Tolerances = DEFAULT_TOL) -> float:
    """``<psi | E(X) psi>``; clipped to ``[0, 1]`` unless ``clip=False``."""
    _same_window(C, psi)
    E = effect_matrix(C, X, tol).entries
    a = psi.amplitudes
    p = float(np.real(a.conj() @ E @ a))
    return min(max(p, 0.0), 1.0) if clip else p


def _diagonal_sums(C: PhaseMatrix, psi: StateVector) -> np.ndarray:
    """``g[q] = sum over m - n = q of conj(psi_n) c[n, m] psi_m`` for q = -(N-1)..N-1."""
    a = psi.amplitudes
    W = a.conj()[:, None] * C.entries * a[None, :]
    N = C.size
    # diagonal offset q of W collects pairs with m - n = q
    return np.array([np.trace(W, offset=q) for q in range(-(N - 1), N)])


def density(C: PhaseMatrix, psi: StateVector, theta) -> np.ndarray | float:
    """Outcome density w.r.t. ``d theta`` on ``[0, 2pi)``.

    ``p(theta) = v* C v / 2pi`` with ``v_n = psi_n exp(i n theta)``.
    """
    _same_window(C, psi)
    t = np.asarray(theta, dtype=float)
    v = psi.amplitudes[None, :] * np.exp(1j * np.multiply.outer(t.reshape(-1), C.window.labels))
    p = np.real(np.einsum("ti,ij,tj->t", v.conj(), C.entries, v)) / TWO_PI
    return float(p[0]) if t.ndim == 0 else p.reshape(t.shape)


def cdf(C: PhaseMatrix, psi: StateVector, theta) -> np.ndarray:
    """``P([0, theta))`` evaluated exactly via the kernel of ``[0, theta)``."""
    _same_window(C, psi)
    t = np.asarray(theta, dtype=float)
    g = _diagonal_sums(C, psi)
    N = C.size
    q = np.arange(-(N - 1), N)
    qt = np.multiply.outer(t.reshape(-1), q)
    with np.errstate(divide="ignore", invalid="ignore"):
        kern = np.where(q == 0, t.reshape(-1)[:, None] / TWO_PI, (np.exp(1j * qt) - 1.0) / (1j * TWO_PI * q))
    return np.real(kern @ g).reshape(t.shape)


def _diag_phase(window: IndexWindow, theta: float) -> np.ndarray:
    return np.exp(1j * window.labels * theta)


def covariance_check(C: PhaseMatrix, X: ArcSet, theta: float, tol: Tolerances = DEFAULT_TOL) -> float:
    """Frobenius deviation between ``U* E(X) U`` and ``E(X + theta)``.

    ``U = diag(exp(i n theta))``. With the kernel exponent ``m - n`` used here,
    rotating the set by ``+theta`` multiplies entry ``(n, m)`` by
    ``exp(i (m - n) theta)``, which is conjugation by ``U*`` on the left.
    """
    E = effect_matrix(C, X, tol).entries
    E_rot = effect_matrix(C, rotate(X, theta), tol, check=False).entries
    u = _diag_phase(C.window, theta)
    conj = u.conj()[:, None] * E * u[None, :]
    return float(np.linalg.norm(conj - E_rot))


def additivity_check(C: PhaseMatrix, X: ArcSet, Y: ArcSet, tol: Tolerances = DEFAULT_TOL) -> float:
    """Frobenius deviation ``||E(X u Y) - E(X) - E(Y)||`` for disjoint ``X``, ``Y``."""
    if not is_disjoint(X, Y):
        raise InputError("additivity_check needs disjoint arc sets")
    EX = effect_matrix(C, X, tol).entries
    EY = effect_matrix(C, Y, tol, check=False).entries
    EXY = effect_matrix(C, set_union(X, Y), tol, check=False).entries
    return float(np.linalg.norm(EXY - EX - EY))


def sample(
    C: PhaseMatrix,
    psi: StateVector,
    count: int,
    seed: int,
    grid: int = 2**14,
) -> np.ndarray:
    """Draw ``count`` outcome angles by inverse-CDF on a ``grid``-point mesh.

    The CDF is exact at the mesh nodes and linearly interpolated between them.
    """
    if count < 1:
        raise InputError("count must be positive")
    if grid < 2:
        raise InputError("grid must have at least two points")
    _same_window(C, psi)
    nodes = np.linspace(0.0, TWO_PI, grid + 1)
    F = cdf(C, psi, nodes)
    # exact F is nondecreasing; rounding can break that by ~1e-16
    F = np.maximum.accumulate(np.clip(F, 0.0, None))
    F /= F[-1]
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    return np.interp(u, F, nodes)


def outcome_probability_from_density(C: PhaseMatrix, psi: StateVector, X: ArcSet, points: int = 100_000) -> float:
    """Trapezoid quadrature of the density over ``X``; slow reference path."""
    total = 0.0
    for a, b in X.intervals():
        t = np.linspace(a, b, max(2, int(math.ceil(points * (b - a) / TWO_PI))) + 1)
        total += float(np.trapezoid(density(C, psi, t), t))
    return total

