"""Empirical cylinder frequencies and partition-entropy curves.

Frequencies are normalised by the number of anchors actually available,
``(width - n + 1) * (height - k + 1)``, rather than by a centred square
count; both converge to the same cylinder measure.  Logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .core import Shape, Window, combine_codes, extract_pattern, rect_codes, strip_codes
from .errors import DomainError, SizeError
from .generators import TimesPQ, generate

HORIZONTAL = "horizontal"
VERTICAL = "vertical"
DIRECTIONS = (HORIZONTAL, VERTICAL)

DEFAULT_UNDERSAMPLING = 0.1
CONVERGENCE_CAVEAT = "fixed (n, m_max, window) estimate of a limit; no error bound is available"
_BINCOUNT_LIMIT = 1 << 24


@dataclass
class CylinderStats:
    shape: tuple
    freq: dict
    counts: dict
    total_anchors: int
    exact: bool = False

    def total(self):
        if self.exact:
            return sum(self.freq.values(), Fraction(0))
        return math.fsum(self.freq.values())


def _count_codes(codes: np.ndarray, card: int) -> np.ndarray:
    """Nonzero multiplicities of the codes, sorted ascending."""
    flat = codes.ravel()
    if card <= _BINCOUNT_LIMIT:
        c = np.bincount(flat, minlength=card)
        c = c[c > 0]
    else:
        c = kernels.label_counts(flat)
    return np.sort(c)


def empirical_measure(u: Window, n: int, k: int, exact: bool = False) -> CylinderStats:
    """Frequencies of every ``n x k`` block over all anchors of ``u``.

    ``exact=True`` stores :class:`fractions.Fraction` frequencies that sum to 1
    exactly.
    """
    if n < 1 or k < 1:
        raise SizeError(f"block dimensions must be positive, got {n}x{k}")
    if (n > 1 and u.width < 2 * n) or (k > 1 and u.height < 2 * k) or u.width < n or u.height < k:
        raise SizeError(f"window {u.width}x{u.height} is too small for {n}x{k} blocks; need {2 * n}x{2 * k}")
    codes, _ = rect_codes(u.cells, u.alphabet.size, n, k)
    flat = codes.ravel()
    uniq, first, cnt = np.unique(flat, return_index=True, return_counts=True)
    total = int(flat.size)
    cols = codes.shape[1]
    shape = Shape.rect(n, k)
    ox, oy = u.origin
    counts = {}
    for idx, c in zip(first.tolist(), cnt.tolist()):
        anchor = (ox + idx % cols, oy + idx // cols)
        counts[extract_pattern(u, anchor, shape).key()] = int(c)
    if exact:
        freq = {key: Fraction(c, total) for key, c in counts.items()}
    else:
        freq = {key: c / total for key, c in counts.items()}
    return CylinderStats((n, k), freq, counts, total, exact)


def _entropy_from_counts(counts: np.ndarray) -> float:
    """Plug-in Shannon entropy (nats) of a multiset of counts."""
    total = int(counts.sum())
    if total == 0:
        return 0.0
    c = counts.astype(np.float64)
    return math.log(total) - math.fsum((c * np.log(c)).tolist()) / total


def _cylinder_dims(m: int, n: int, direction: str):
    if direction == HORIZONTAL:
        return m, 2 * n - 1
    if direction == VERTICAL:
        return 2 * n - 1, m
    raise DomainError(f"direction must be one of {DIRECTIONS}, got {direction!r}")


def _check_anchors(u: Window, width: int, height: int, m: int):
    if u.width < width or u.height < height:
        raise SizeError(f"window {u.width}x{u.height} cannot hold a {width}x{height} cylinder")
    anchors = (u.width - width + 1) * (u.height - height + 1)
    if anchors < 100 * m:
        raise SizeError(
            f"window {u.width}x{u.height} gives {anchors} anchors for a {width}x{height} "
            f"cylinder; at least {100 * m} are required"
        )
    return anchors


def partition_entropy(u: Window, m: int, n: int, direction: str = HORIZONTAL) -> float:
    """``H_m = -(1/m) sum_w f(w) log f(w)`` over cylinders of the partition.

    Horizontal cylinders have width ``m`` and height ``2n - 1``; vertical ones
    are transposed.
    """
    if m < 1 or n < 1:
        raise DomainError(f"m and n must be positive, got m={m}, n={n}")
    width, height = _cylinder_dims(m, n, direction)
    _check_anchors(u, width, height, m)
    codes, card = rect_codes(u.cells, u.alphabet.size, width, height)
    return _entropy_from_counts(_count_codes(codes, card)) / m


@dataclass(frozen=True)
class CurvePoint:
    m: int
    H: float
    slope: float
    cylinders: int
    anchors: int
    undersampled: bool

    @property
    def block_entropy(self) -> float:
        return self.m * self.H


@dataclass
class EntropyEstimate:
    direction: str
    n: int
    curve: list
    estimate: float
    tail_H: float
    eps_stat: float
    unreliable: bool
    log_base_p: int | None = None
    warnings: list = field(default_factory=list)

    def conversions(self) -> dict:
        out = {"nats": self.estimate, "bits": self.estimate / math.log(2)}
        if self.log_base_p:
            out[f"log_{self.log_base_p}"] = self.estimate / math.log(self.log_base_p)
        return out

    def subadditivity_violations(self) -> list:
        """Pairs ``(m1, m2)`` where the block entropy exceeds ``B(m1) + B(m2)`` by more than ``eps_stat``."""
        B = {pt.m: pt.block_entropy for pt in self.curve}
        bad = []
        for m1 in B:
            for m2 in B:
                if m1 <= m2 and m1 + m2 in B and B[m1 + m2] > B[m1] + B[m2] + self.eps_stat:
                    bad.append((m1, m2))
        return bad

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "n": self.n,
            "estimate": self.estimate,
            "tail_H_m": self.tail_H,
            "conversions": self.conversions(),
            "eps_stat": self.eps_stat,
            "unreliable": self.unreliable,
            "warnings": list(self.warnings),
            "caveat": CONVERGENCE_CAVEAT,
            "curve": [
                {"m": pt.m, "H_m": pt.H, "slope": pt.slope, "cylinders": pt.cylinders,
                 "anchors": pt.anchors, "undersampled": pt.undersampled}
                for pt in self.curve
            ],
        }

    def csv_rows(self):
        for pt in self.curve:
            yield (pt.m, pt.H, pt.slope, pt.cylinders, pt.anchors, "undersampled" if pt.undersampled else "ok")


def entropy_curve(u: Window, n: int, m_max: int, direction: str = HORIZONTAL,
                  undersampling: float = DEFAULT_UNDERSAMPLING) -> list:
    """``H_m`` and the increments of ``m H_m`` for ``m = 1..m_max`` on one window."""
    if m_max < 1 or n < 1:
        raise DomainError(f"m_max and n must be positive, got m_max={m_max}, n={n}")
    width, height = _cylinder_dims(m_max, n, direction)
    _check_anchors(u, width, height, m_max)
    card = u.alphabet.size
    axis = 1 if direction == HORIZONTAL else 0
    transverse, c_t = strip_codes(u.cells, card, 2 * n - 1, axis=1 - axis)
    codes, c = transverse, c_t
    curve = []
    prev_block = 0.0
    for m in range(1, m_max + 1):
        if m > 1:
            if axis == 1:
                codes, c = combine_codes(codes[:, :-1], c, transverse[:, m - 1:], c_t)
            else:
                codes, c = combine_codes(codes[:-1, :], c, transverse[m - 1:, :], c_t)
        counts = _count_codes(codes, c)
        block = _entropy_from_counts(counts)
        anchors = int(codes.size)
        curve.append(CurvePoint(m, block / m, block - prev_block, int(counts.size), anchors,
                                counts.size > undersampling * anchors))
        prev_block = block
    return curve


def directional_entropy_estimate(source, n: int, m_max: int, width: int, height: int,
                                 direction: str = HORIZONTAL,
                                 undersampling: float = DEFAULT_UNDERSAMPLING) -> EntropyEstimate:
    """Entropy of the horizontal or vertical shift estimated from one sample window.

    ``source`` is a source spec or an already generated :class:`Window`.  The
    estimate is the last increment of ``m H_m``; ``H_m`` at ``m_max`` is kept
    as ``tail_H``.
    """
    u = source if isinstance(source, Window) else generate(source, width, height)
    curve = entropy_curve(u, n, m_max, direction, undersampling)
    last = curve[-1]
    eps = max(pt.cylinders / (2 * pt.anchors) for pt in curve)
    notes = []
    unreliable = last.undersampled or (len(curve) > 1 and curve[-2].undersampled)
    if unreliable:
        notes.append(
            f"undersampled: {last.cylinders} distinct cylinders over {last.anchors} anchors "
            f"exceeds {undersampling:.0%}; the estimate is biased low"
        )
    notes.append("fixed (n, m_max, window) estimator: no convergence rate is available")
    base = None
    if isinstance(source, TimesPQ):
        base = source.p if direction == HORIZONTAL else source.q
    return EntropyEstimate(direction, n, curve, last.slope, last.H, eps, unreliable, base, notes)
