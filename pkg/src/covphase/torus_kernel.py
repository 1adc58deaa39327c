"""Arc sets on the circle and the Fourier kernel integrals over them.

Angles are radians. An arc ``Arc(start, length)`` is the half-open set
``[start, start + length)`` taken modulo 2*pi, so an arc may wrap through 0.
Only finite unions of such arcs are supported; that is enough to generate
every set the effect-operator formulas ever need.

The kernel

    kappa(X, q) = (1 / 2pi) * integral over X of exp(i q theta) d theta

is evaluated in closed form. For integer ``q`` the integrand is 2pi-periodic,
so a wrapping arc needs no special treatment.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

TWO_PI = 2.0 * math.pi

# arcs (and gaps between arcs) shorter than this are measure-zero noise
MIN_LENGTH = 1e-12


@dataclass(frozen=True)
class Arc:
    start: float
    length: float

    def __post_init__(self):
        if not (0.0 <= self.start < TWO_PI):
            raise InputError(f"arc start {self.start!r} not in [0, 2pi)")
        if not (0.0 < self.length <= TWO_PI):
            raise InputError(f"arc length {self.length!r} not in (0, 2pi]")

    @property
    def end(self) -> float:
        """Unreduced end point; exceeds 2pi for a wrapping arc."""
        return self.start + self.length

    def intervals(self) -> list[tuple[float, float]]:
        """Split into non-wrapping ``(a, b)`` pairs inside ``[0, 2pi]``."""
        if self.end <= TWO_PI:
            return [(self.start, self.end)]
        return [(self.start, TWO_PI), (0.0, self.end - TWO_PI)]


@dataclass(frozen=True)
class ArcSet:
    """Canonical finite union of disjoint half-open arcs.

    Build instances through :func:`normalize_arcs` or the set operations; the
    constructor trusts its input to already be canonical.
    """

    arcs: tuple[Arc, ...] = ()

    @classmethod
    def empty(cls) -> "ArcSet":
        return cls(())

    @classmethod
    def full(cls) -> "ArcSet":
        return cls((Arc(0.0, TWO_PI),))

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0].length == TWO_PI

    def intervals(self) -> list[tuple[float, float]]:
        out = []
        for arc in self.arcs:
            out.extend(arc.intervals())
        return sorted(out)

    def contains(self, theta) -> np.ndarray:
        """Vectorized membership test for angles (reduced mod 2pi)."""
        t = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        inside = np.zeros(t.shape, dtype=bool)
        for a, b in self.intervals():
            inside |= (t >= a) & (t < b)
        return inside

    def to_pairs(self) -> list[list[float]]:
        return [[arc.start, arc.end] for arc in self.arcs]

    def to_json(self) -> str:
        return json.dumps(self.to_pairs())

    @classmethod
    def from_json(cls, text: str) -> "ArcSet":
        data = json.loads(text)
        if not isinstance(data, list):
            raise InputError("arc set JSON must be an array of [start, end] pairs")
        return normalize_arcs(data)


def _reduce(angle: float) -> float:
    r = angle % TWO_PI
    # tiny negative inputs round up to exactly 2pi
    return 0.0 if r >= TWO_PI else r


def _canonical(intervals: Iterable[tuple[float, float]]) -> ArcSet:
    """Merge non-wrapping intervals in [0, 2pi] into a canonical ArcSet."""
    ivs = sorted((a, b) for a, b in intervals if b - a > 0.0)
    merged: list[list[float]] = []
    for a, b in ivs:
        if merged and a <= merged[-1][1] + MIN_LENGTH:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    merged = [iv for iv in merged if iv[1] - iv[0] >= MIN_LENGTH]
    if not merged:
        return ArcSet.empty()
    total = sum(b - a for a, b in merged)
    if total >= TWO_PI - MIN_LENGTH:
        return ArcSet.full()

    # glue [x, 2pi) and [0, y) into one wrapping arc
    if len(merged) > 1 and merged[0][0] <= MIN_LENGTH and merged[-1][1] >= TWO_PI - MIN_LENGTH:
        first = merged.pop(0)
        last = merged.pop()
        wrap = Arc(last[0], (TWO_PI - last[0]) + first[1])
        arcs = [Arc(a, b - a) for a, b in merged] + [wrap]
    else:
        arcs = [Arc(_reduce(a), b - a) for a, b in merged]
    return ArcSet(tuple(sorted(arcs, key=lambda arc: arc.start)))


def normalize_arcs(raw: Sequence[Sequence[float]]) -> ArcSet:
    """Canonical ArcSet from ``(start, end)`` pairs.

    Each pair is the half-open arc running counter-clockwise from ``start`` to
    ``end``; an ``end`` numerically below ``start`` wraps through zero. A pair
    spanning 2pi or more covers the whole circle.

    >>> normalize_arcs([(0.0, 1.0), (0.5, 1.5)]).to_pairs()
    [[0.0, 1.5]]
    """
    intervals = []
    for pair in raw:
        if len(pair) != 2:
            raise InputError(f"arc must be a (start, end) pair, got {pair!r}")
        start, end = float(pair[0]), float(pair[1])
        if not (math.isfinite(start) and math.isfinite(end)):
            raise InputError(f"non-finite arc endpoint in {pair!r}")
        span = end - start
        if span == 0.0:
            raise InputError(f"degenerate arc {pair!r}: start equals end")
        if abs(span) >= TWO_PI:
            return ArcSet.full()
        length = span % TWO_PI
        if length < MIN_LENGTH:
            continue
        intervals.extend(Arc(_reduce(start), length).intervals())
    return _canonical(intervals)


def haar_measure(X: ArcSet) -> float:
    """Normalized arc length of ``X``, in [0, 1]."""
    return sum(arc.length for arc in X.arcs) / TWO_PI


def kernel_integral(X: ArcSet, q):
    """``(1/2pi) * integral_X exp(i q theta) d theta`` for integer ``q``.

    ``q`` may be an integer or an integer array; the result has the same shape.
    """
    q_arr = np.asarray(q)
    if not np.issubdtype(q_arr.dtype, np.integer):
        raise InputError("kernel frequency q must be integer")
    scalar = q_arr.ndim == 0
    q_arr = np.atleast_1d(q_arr)

    if X.is_full:
        out = (q_arr == 0).astype(complex)
    else:
        out = np.zeros(q_arr.shape, dtype=complex)
        qf = q_arr.astype(float)
        for arc in X.arcs:
            mid = arc.start + 0.5 * arc.length
            # (e^{iqb} - e^{iqa}) / (2 pi i q) written via the arc midpoint
            out += (arc.length / TWO_PI) * np.exp(1j * qf * mid) * np.sinc(qf * arc.length / TWO_PI)
        out[q_arr == 0] = haar_measure(X)
    return out[0] if scalar else out


def rotate(X: ArcSet, theta: float) -> ArcSet:
    """The rotated set ``X + theta`` (mod 2pi)."""
    if not math.isfinite(theta):
        raise InputError("rotation angle must be finite")
    if X.is_empty or X.is_full:
        return X
    intervals = []
    for arc in X.arcs:
        intervals.extend(Arc(_reduce(arc.start + theta), arc.length).intervals())
    return _canonical(intervals)


def set_union(X: ArcSet, Y: ArcSet) -> ArcSet:
    return _canonical(X.intervals() + Y.intervals())


def set_complement(X: ArcSet) -> ArcSet:
    gaps = []
    cursor = 0.0
    for a, b in X.intervals():
        if a > cursor:
            gaps.append((cursor, a))
        cursor = max(cursor, b)
    if cursor < TWO_PI:
        gaps.append((cursor, TWO_PI))
    return _canonical(gaps)


def set_intersection(X: ArcSet, Y: ArcSet) -> ArcSet:
    out = []
    for a1, b1 in X.intervals():
        for a2, b2 in Y.intervals():
            lo, hi = max(a1, a2), min(b1, b2)
            if hi > lo:
                out.append((lo, hi))
    return _canonical(out)


def set_difference(X: ArcSet, Y: ArcSet) -> ArcSet:
    return set_intersection(X, set_complement(Y))


def is_disjoint(X: ArcSet, Y: ArcSet) -> bool:
    return set_intersection(X, Y).is_empty
