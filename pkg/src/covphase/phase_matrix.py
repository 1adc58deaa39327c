"""Finite windows of the structure matrix ``c[n, m]`` and their validation.

Matrix index ``i`` corresponds to the integer label ``n = window.lo + i``.
The stored matrix follows the convention

    <e_n | E(X) | e_m> = c[n, m] * kappa(X, m - n),      c[n, m] = <h_n | h_m>

(kernel exponent ``m - n``). Formulas written with the opposite exponent
``n - m`` are the transpose of this one.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class IndexWindow:
    """Inclusive integer range ``lo..hi`` of basis labels.

    ``lo`` may be negative (localization on the circle, labels in Z) or zero
    (phase observables, labels in N).
    """

    lo: int
    hi: int

    def __post_init__(self):
        if int(self.lo) != self.lo or int(self.hi) != self.hi:
            raise InputError("window bounds must be integers")
        if self.lo > self.hi:
            raise InputError(f"empty window [{self.lo}, {self.hi}]")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    @property
    def labels(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def position(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise InputError(f"index {n} outside window [{self.lo}, {self.hi}]")
        return n - self.lo

    def contains(self, other: "IndexWindow") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @classmethod
    def parse(cls, text: str) -> "IndexWindow":
        """Parse ``"LO:HI"``."""
        try:
            lo, hi = text.split(":")
            return cls(int(lo), int(hi))
        except ValueError as exc:
            raise InputError(f"window must look like LO:HI, got {text!r}") from exc

    @classmethod
    def symmetric(cls, L: int) -> "IndexWindow":
        return cls(-L, L)


@dataclass(frozen=True)
class Tolerances:
    diag: float = 1e-12
    herm: float = 1e-12
    psd: float = 1e-10
    zero: float = 1e-9

    def __post_init__(self):
        for name in ("diag", "herm", "psd", "zero"):
            if not getattr(self, name) > 0:
                raise InputError(f"tolerance {name} must be positive")


DEFAULT_TOL = Tolerances()


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PhaseMatrix:
    """Dense window of ``c[n, m]``.

    Construction only checks the shape. Whether the entries satisfy the
    unit-diagonal and positivity conditions is answered by :func:`validate`,
    so invalid candidates can still be represented and reported on.
    """

    window: IndexWindow
    entries: np.ndarray

    def __post_init__(self):
        entries = _readonly(self.entries)
        n = self.window.size
        if entries.shape != (n, n):
            raise InputError(f"entries shape {entries.shape} does not match window size {n}")
        if not np.all(np.isfinite(entries)):
            raise InputError("matrix entries must be finite")
        object.__setattr__(self, "entries", entries)

    @property
    def size(self) -> int:
        return self.window.size

    def __getitem__(self, nm):
        """Entry ``c[n, m]`` by window labels."""
        n, m = nm
        return self.entries[self.window.position(n), self.window.position(m)]

    def to_dict(self) -> dict:
        return {
            "window": [self.window.lo, self.window.hi],
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "PhaseMatrix":
        try:
            lo, hi = data["window"]
            raw = np.asarray(data["entries"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed matrix document: {exc}") from exc
        window = IndexWindow(int(lo), int(hi))
        if raw.ndim != 3 or raw.shape[-1] != 2:
            raise InputError("entries must be a square array of [re, im] pairs")
        return cls(window, raw[..., 0] + 1j * raw[..., 1])

    @classmethod
    def from_json(cls, text: str) -> "PhaseMatrix":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ValidationReport:
    diag_deviation: float
    hermitian_deviation: float
    max_modulus: float
    min_eigenvalue: float
    is_valid: bool

    def to_dict(self) -> dict:
        return {
            "diag_deviation": self.diag_deviation,
            "hermitian_deviation": self.hermitian_deviation,
            "max_modulus": self.max_modulus,
            "min_eigenvalue": self.min_eigenvalue,
            "is_valid": self.is_valid,
        }


def validate(C: PhaseMatrix, tol: Tolerances = DEFAULT_TOL) -> ValidationReport:
    """Check unit diagonal, Hermiticity, ``|c| <= 1`` and positive semidefiniteness."""
    M = C.entries
    diag_dev = float(np.max(np.abs(np.diag(M) - 1.0)))
    herm_dev = float(np.max(np.abs(M - M.conj().T)))
    max_mod = float(np.max(np.abs(M)))
    min_eig = float(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0])
    ok = (
        diag_dev <= tol.diag
        and herm_dev <= tol.herm
        and max_mod <= 1.0 + tol.psd
        and min_eig >= -tol.psd
    )
    return ValidationReport(diag_dev, herm_dev, max_mod, min_eig, bool(ok))


@dataclass(frozen=True)
class MinorCheck:
    passed: bool
    violation: Optional[tuple[int, ...]] = None  # window labels of the offending subset
    determinant: Optional[float] = None


def principal_minor_check(C: PhaseMatrix, max_order: int = 3, tol: Tolerances = DEFAULT_TOL) -> MinorCheck:
    """Enumerate principal minors up to ``max_order``; report the first negative one.

    Subsets are visited by increasing order and lexicographically within an
    order. The count grows like ``size**max_order``.
    """
    if max_order < 1:
        raise InputError("max_order must be at least 1")
    M = C.entries
    labels = C.window.labels
    for order in range(1, min(max_order, C.size) + 1):
        subsets = np.array(list(itertools.combinations(range(C.size), order)), dtype=int)
        for chunk in np.array_split(subsets, max(1, len(subsets) // 20000)):
            blocks = M[chunk[:, :, None], chunk[:, None, :]]
            dets = np.linalg.det(blocks).real
            bad = np.flatnonzero(dets < -tol.psd)
            if bad.size:
                idx = chunk[bad[0]]
                return MinorCheck(False, tuple(int(labels[i]) for i in idx), float(dets[bad[0]]))
    return MinorCheck(True)


def hermitian_eigen(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns) of a Hermitian matrix."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"expected a square matrix, got shape {M.shape}")
    if M.size and np.max(np.abs(M - M.conj().T)) > tol.herm * max(1.0, np.max(np.abs(M))):
        raise InputError("matrix is not Hermitian within tolerance")
    return np.linalg.eigh(0.5 * (M + M.conj().T))


def psd_sqrt(M: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Hermitian square root; eigenvalues in ``[-tol.psd, 0)`` are clamped to zero."""
    w, V = hermitian_eigen(M, tol)
    if w.size and w[0] < -tol.psd:
        raise InputError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    root = np.sqrt(np.clip(w, 0.0, None))
    return (V * root) @ V.conj().T


def restrict(C: PhaseMatrix, sub: IndexWindow) -> PhaseMatrix:
    """Principal submatrix on ``sub``; ``sub=IndexWindow(0, K)`` gives the phase-observable block."""
    if not C.window.contains(sub):
        raise InputError(f"window [{sub.lo}, {sub.hi}] not contained in [{C.window.lo}, {C.window.hi}]")
    i0 = sub.lo - C.window.lo
    sl = slice(i0, i0 + sub.size)
    return PhaseMatrix(sub, C.entries[sl, sl])


def identity(window: IndexWindow) -> PhaseMatrix:
    return PhaseMatrix(window, np.eye(window.size))
