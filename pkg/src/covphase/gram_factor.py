"""Conversion between unit-vector sequences ``(h_n)`` and phase matrices.

An observable can be given either by the vectors ``h_n`` or by their Gram
matrix ``c[n, m] = <h_n | h_m>``; two sequences with the same Gram matrix give
the same observable. Two factorizations are offered: the plain Hermitian
square root, and the weighted construction that also handles rows with zero
diagonal.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ValidationError
from .phase_matrix import DEFAULT_TOL, IndexWindow, PhaseMatrix, Tolerances, psd_sqrt, validate

UNIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class VectorSequence:
    """Vectors ``h_n``, stored as rows: ``vectors[i]`` is ``h_{window.lo + i}``."""

    window: IndexWindow
    vectors: np.ndarray
    require_unit: bool = True

    def __post_init__(self):
        V = np.array(self.vectors, dtype=complex)
        if V.ndim != 2 or V.shape[0] != self.window.size or V.shape[1] < 1:
            raise InputError(f"vectors shape {V.shape} does not match window size {self.window.size}")
        if self.require_unit:
            norms = np.linalg.norm(V, axis=1)
            bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_TOL)
            if bad.size:
                n = self.window.lo + int(bad[0])
                raise InputError(f"vector h_{n} has norm {norms[bad[0]]!r}, expected 1")
        V.setflags(write=False)
        object.__setattr__(self, "vectors", V)

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def to_dict(self) -> dict:
        return {
            "window": [self.window.lo, self.window.hi],
            "dimension": self.dimension,
            "vectors": [[[float(z.real), float(z.imag)] for z in row] for row in self.vectors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict, require_unit: bool = True) -> "VectorSequence":
        try:
            lo, hi = data["window"]
            raw = np.asarray(data["vectors"], dtype=float)
            d = int(data.get("dimension", raw.shape[1]))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed vector-sequence document: {exc}") from exc
        if raw.ndim != 3 or raw.shape[-1] != 2 or raw.shape[1] != d:
            raise InputError("vectors must be an array of d-vectors of [re, im] pairs")
        return cls(IndexWindow(int(lo), int(hi)), raw[..., 0] + 1j * raw[..., 1], require_unit)

    @classmethod
    def from_json(cls, text: str, require_unit: bool = True) -> "VectorSequence":
        return cls.from_dict(json.loads(text), require_unit)


def gram(V: VectorSequence) -> PhaseMatrix:
    """Phase matrix ``c[n, m] = <h_n | h_m>`` (conjugate-linear in the first slot)."""
    H = V.vectors
    return PhaseMatrix(V.window, H.conj() @ H.T)


def gram_entries(V: VectorSequence) -> np.ndarray:
    """Gram matrix without the unit-diagonal packaging, for non-normalized sequences."""
    H = V.vectors
    return H.conj() @ H.T


def _require_valid(C: PhaseMatrix, tol: Tolerances) -> None:
    report = validate(C, tol)
    if not report.is_valid:
        raise ValidationError(f"not a valid phase matrix: {report}")


def factorize_spectral(C: PhaseMatrix, tol: Tolerances = DEFAULT_TOL) -> VectorSequence:
    """Columns of the Hermitian square root of ``C`` as the vectors ``h_n``."""
    _require_valid(C, tol)
    A = psd_sqrt(C.entries, tol)
    H = A.T.copy()
    # clamping tiny negative eigenvalues leaves norms off by ~tol; renormalize
    H /= np.linalg.norm(H, axis=1, keepdims=True)
    return VectorSequence(C.window, H)


def factorize_paper(
    B: np.ndarray,
    window: IndexWindow,
    tol: Tolerances = DEFAULT_TOL,
) -> VectorSequence:
    """Weighted square-root construction for a PSD matrix with arbitrary diagonal.

    With ``w_n = sqrt(b[n,n]) * (|n| + 1)`` the scaled matrix
    ``S[n, m] = b[n, m] / (w_n w_m)`` (over rows with ``b[n,n] != 0``) is PSD,
    and ``h_n = w_n * A e_n`` with ``A = sqrt(S)`` reproduces ``b``. Rows with a
    zero diagonal get ``h_n = 0``. The returned vectors live in l2 of the
    window and have norms ``sqrt(b[n,n])``.
    """
    B = np.asarray(B, dtype=complex)
    if B.shape != (window.size, window.size):
        raise InputError(f"matrix shape {B.shape} does not match window size {window.size}")
    if np.max(np.abs(B - B.conj().T)) > tol.herm * max(1.0, float(np.max(np.abs(B)))):
        raise ValidationError("matrix is not Hermitian")
    B = 0.5 * (B + B.conj().T)
    min_eig = float(np.linalg.eigvalsh(B)[0])
    if min_eig < -tol.psd:
        raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")

    diag = B.diagonal().real
    live = np.flatnonzero(diag > tol.psd)
    weights = np.sqrt(diag[live]) * (np.abs(window.labels[live]) + 1.0)
    S = B[np.ix_(live, live)] / np.outer(weights, weights)
    # S is a congruence of B, hence PSD up to rounding; clamp anything negative
    w, U = np.linalg.eigh(0.5 * (S + S.conj().T))
    A = (U * np.sqrt(np.clip(w, 0.0, None))) @ U.conj().T

    H = np.zeros((window.size, window.size), dtype=complex)
    # h_n = w_n * A chi_n, embedded at the live coordinates of l2(window)
    H[np.ix_(live, live)] = (A * weights[None, :]).T
    return VectorSequence(window, H, require_unit=False)


def factorize_paper_phase(C: PhaseMatrix, tol: Tolerances = DEFAULT_TOL) -> VectorSequence:
    """:func:`factorize_paper` for a unit-diagonal matrix, returning unit vectors."""
    _require_valid(C, tol)
    V = factorize_paper(C.entries, C.window, tol)
    H = np.array(V.vectors)
    H /= np.linalg.norm(H, axis=1, keepdims=True)
    return VectorSequence(C.window, H)


def same_observable(V1: VectorSequence, V2: VectorSequence, tol: float = 1e-8) -> bool:
    """True when both sequences have the same Gram matrix (up to ``tol`` entrywise)."""
    if V1.window != V2.window:
        raise InputError("vector sequences live on different windows")
    return bool(np.max(np.abs(gram_entries(V1) - gram_entries(V2))) <= tol)
