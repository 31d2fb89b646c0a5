"""Orthogonal discrete wavelet transform (4-tap Daubechies, periodized).

Analysis convolves the periodically extended signal with the scaling and
wavelet filters and decimates by two; synthesis is the exact adjoint, so
reconstruction is perfect to rounding error. Signals whose length is not
a multiple of 2**levels are zero-padded for the transform and trimmed on
reconstruction, preserving the round trip exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooManyLevelsError
from .series import TimeSeries

_SQRT3 = math.sqrt(3.0)
_NORM = 4.0 * math.sqrt(2.0)

# Daubechies 4-tap scaling filter; the wavelet filter is its quadrature mirror.
DEC_LO = np.array([(1 + _SQRT3), (3 + _SQRT3), (3 - _SQRT3), (1 - _SQRT3)]) / _NORM
DEC_HI = np.array([DEC_LO[3], -DEC_LO[2], DEC_LO[1], -DEC_LO[0]])


@dataclass(frozen=True)
class WaveletCoeffs:
    """Multi-level decomposition: approximation plus details, finest first."""

    approx: np.ndarray
    details: list  # details[0] is level 1 (finest), details[-1] the coarsest
    original_length: int
    sample_rate_hz: float

    @property
    def levels(self) -> int:
        return len(self.details)


def _analysis_step(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One level of periodized convolution-decimation; x must have even length."""
    n = x.size
    taps = DEC_LO.size
    idx = (2 * np.arange(n // 2)[:, None] + np.arange(taps)[None, :]) % n
    windows = x[idx]
    return windows @ DEC_LO, windows @ DEC_HI


def _synthesis_step(approx: np.ndarray, detail: np.ndarray) -> np.ndarray:
    """Adjoint of the analysis step; inverts it exactly for these filters."""
    half = approx.size
    n = 2 * half
    taps = DEC_LO.size
    x = np.zeros(n)
    pos = (2 * np.arange(half)[:, None] + np.arange(taps)[None, :]) % n
    contrib = approx[:, None] * DEC_LO[None, :] + detail[:, None] * DEC_HI[None, :]
    np.add.at(x, pos, contrib)
    return x


def dwt(ts: TimeSeries, levels: int) -> WaveletCoeffs:
    """Decompose into ``levels`` detail bands and a coarse approximation."""
    n = len(ts)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if levels > int(math.floor(math.log2(n))) - 2:
        raise TooManyLevelsError(
            f"{levels} levels exceed what a length-{n} signal supports"
        )
    block = 1 << levels
    padded = ts.samples
    if n % block:
        padded = np.concatenate([padded, np.zeros(block - n % block)])
    details = []
    approx = padded
    for _ in range(levels):
        approx, detail = _analysis_step(approx)
        details.append(detail)
    return WaveletCoeffs(
        approx=approx,
        details=details,
        original_length=n,
        sample_rate_hz=ts.sample_rate_hz,
    )


def idwt(coeffs: WaveletCoeffs) -> TimeSeries:
    """Invert dwt; returns the original samples to rounding error."""
    x = coeffs.approx
    for detail in reversed(coeffs.details):
        x = _synthesis_step(x, detail)
    return TimeSeries(x[: coeffs.original_length], coeffs.sample_rate_hz)


def reconstruct_level(coeffs: WaveletCoeffs, level: int) -> TimeSeries:
    """Signal rebuilt from a single detail level, all else zeroed."""
    if not 1 <= level <= coeffs.levels:
        raise ValueError(f"level {level} outside 1..{coeffs.levels}")
    x = np.zeros_like(coeffs.approx)
    for lvl in range(coeffs.levels, 0, -1):
        detail = coeffs.details[lvl - 1]
        if lvl != level:
            detail = np.zeros_like(detail)
        x = _synthesis_step(x, detail)
    return TimeSeries(x[: coeffs.original_length], coeffs.sample_rate_hz)


def dyadic_level_for_band(fs: float, low_hz: float, high_hz: float, max_level: int) -> int:
    """Detail level whose dyadic band [fs/2^(l+1), fs/2^l) best overlaps the target."""
    best, best_overlap = 1, -1.0
    for lvl in range(1, max_level + 1):
        lo, hi = fs / 2 ** (lvl + 1), fs / 2**lvl
        overlap = max(0.0, min(hi, high_hz) - max(lo, low_hz))
        if overlap > best_overlap:
            best, best_overlap = lvl, overlap
    return best


def dyadic_subband(ts: TimeSeries, band) -> TimeSeries:
    """Approximate a band by its closest single dyadic wavelet subband."""
    n = len(ts)
    max_level = int(math.floor(math.log2(n))) - 2
    high = band.high_hz if band.high_hz is not None else ts.sample_rate_hz / 2.0
    level = dyadic_level_for_band(ts.sample_rate_hz, band.low_hz, high, max_level)
    return reconstruct_level(dwt(ts, level), level)
