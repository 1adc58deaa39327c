"""Named phase-matrix families and random corpora."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InputError
from .gram_factor import VectorSequence, gram
from .phase_matrix import IndexWindow, PhaseMatrix

FAMILIES = ("parity", "pv", "trivial", "random_gram")


def parity_matrix(xi: float, window: IndexWindow) -> PhaseMatrix:
    """``c[n, m] = 1`` when ``n - m`` is even, ``xi`` otherwise.

    This is the Gram matrix of the sequence alternating between two unit
    vectors with real overlap ``xi``.
    """
    xi = float(xi)
    if not -1.0 <= xi <= 1.0:
        raise InputError(f"xi = {xi} must lie in [-1, 1]")
    n = window.labels
    even = (n[:, None] - n[None, :]) % 2 == 0
    return PhaseMatrix(window, np.where(even, 1.0, xi))


def parity_vectors(xi: float, window: IndexWindow) -> VectorSequence:
    """The alternating sequence ``psi, phi, psi, ...`` (``psi`` at even labels) in C^2."""
    if not -1.0 <= xi <= 1.0:
        raise InputError(f"xi = {xi} must lie in [-1, 1]")
    psi = np.array([1.0, 0.0])
    phi = np.array([xi, np.sqrt(1.0 - xi * xi)])
    H = np.array([psi if n % 2 == 0 else phi for n in window.labels])
    return VectorSequence(window, H)


def pv_matrix(phases: Sequence[float], window: IndexWindow) -> PhaseMatrix:
    """Rank-one unimodular matrix ``c[n, m] = exp(i (u_n - u_m))``."""
    u = np.asarray(phases, dtype=float).reshape(-1)
    if u.shape != (window.size,):
        raise InputError(f"{u.size} phases given for a window of size {window.size}")
    if not np.all(np.isfinite(u)):
        raise InputError("phases must be finite")
    z = np.exp(1j * u)
    return PhaseMatrix(window, z[:, None] * z.conj()[None, :])


def trivial_phase_matrix(window: IndexWindow) -> PhaseMatrix:
    """Identity matrix: the observable ``X -> mu(X) I``."""
    return PhaseMatrix(window, np.eye(window.size))


def random_unit_vectors(window: IndexWindow, d: int, seed: int) -> VectorSequence:
    if d < 1:
        raise InputError("dimension d must be at least 1")
    rng = np.random.default_rng(seed)
    H = rng.normal(size=(window.size, d)) + 1j * rng.normal(size=(window.size, d))
    H /= np.linalg.norm(H, axis=1, keepdims=True)
    return VectorSequence(window, H)


def random_gram_matrix(window: IndexWindow, d: int, seed: int) -> PhaseMatrix:
    """Gram matrix of uniformly random unit vectors in C^d."""
    C = gram(random_unit_vectors(window, d, seed)).entries
    # round-off leaves the diagonal a few ulps from 1 and Hermiticity similar
    C = 0.5 * (C + C.conj().T)
    np.fill_diagonal(C, 1.0)
    return PhaseMatrix(window, C)


@dataclass(frozen=True)
class CatalogSpec:
    family: str
    window: IndexWindow
    xi: Optional[float] = None
    phases: Optional[tuple[float, ...]] = None
    dimension: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "parity":
            if self.xi is None or not -1.0 <= self.xi <= 1.0:
                raise InputError("parity family needs xi in [-1, 1]")
        elif self.family == "pv":
            if self.phases is None and self.seed is None:
                raise InputError("pv family needs either phases or a seed")
            if self.phases is not None and len(self.phases) != self.window.size:
                raise InputError("pv family needs one phase per window index")
        elif self.family == "random_gram":
            if self.dimension is None or self.dimension < 1 or self.seed is None:
                raise InputError("random_gram family needs dimension >= 1 and a seed")

    @classmethod
    def from_dict(cls, data: dict, window: Optional[IndexWindow] = None) -> "CatalogSpec":
        """Parse e.g. ``{"family": "parity", "xi": 0.5, "window": [-6, 6]}``.

        ``window`` overrides the document's window when given.
        """
        if not isinstance(data, dict):
            raise InputError("catalog spec must be a JSON object")
        try:
            if window is None:
                lo, hi = data["window"]
                window = IndexWindow(int(lo), int(hi))
            phases = data.get("phases")
            return cls(
                family=data["family"],
                window=window,
                xi=None if data.get("xi") is None else float(data["xi"]),
                phases=None if phases is None else tuple(float(p) for p in phases),
                dimension=None if data.get("dimension") is None else int(data["dimension"]),
                seed=None if data.get("seed") is None else int(data["seed"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed catalog spec: {exc}") from exc

    @classmethod
    def from_json(cls, text: str, window: Optional[IndexWindow] = None) -> "CatalogSpec":
        return cls.from_dict(json.loads(text), window)

    def build(self) -> PhaseMatrix:
        if self.family == "parity":
            return parity_matrix(self.xi, self.window)
        if self.family == "pv":
            phases = self.phases
            if phases is None:
                phases = np.random.default_rng(self.seed).uniform(0.0, 2 * np.pi, self.window.size)
            return pv_matrix(phases, self.window)
        if self.family == "trivial":
            return trivial_phase_matrix(self.window)
        return random_gram_matrix(self.window, self.dimension, self.seed)
