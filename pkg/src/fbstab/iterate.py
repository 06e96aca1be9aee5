"""Iterated filters, the order-j analysis operator, and the low-pass
transfer operator with its contraction diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filters import FilterError, FilterPair, check_lowpass
from .seqcore import (
    FiniteSeq,
    convolve,
    downsample,
    involute,
    norm_sq,
    upsample,
    zero_seq,
)

J_MAX_DEFAULT = 20

INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class IteratedFilters:
    """Effective low/high-pass filters for levels 1..j of the cascade."""

    j: int
    h_list: list[FiniteSeq]
    g_list: list[FiniteSeq]


@dataclass(frozen=True)
class AnalysisOutput:
    """Channel outputs of the order-j analysis operator.

    channels[l-1] is the level-l high-pass output; lowpass_residual is the
    extra channel produced by the iterated low-pass filter.
    """

    order: int
    channels: list[FiniteSeq]
    lowpass_residual: FiniteSeq

    def energies(self) -> list[float]:
        return [norm_sq(c) for c in self.channels] + [norm_sq(self.lowpass_residual)]

    def to_json_obj(self) -> dict:
        e = self.energies()
        return {
            "order": self.order,
            "channels": [c.to_json_obj() for c in self.channels],
            "residual": self.lowpass_residual.to_json_obj(),
            "energies": e,
            "total_energy": float(sum(e)),
        }


def _check_order(j: int, j_max: int) -> None:
    if j < 1:
        raise ValueError(f"iteration order must be >= 1, got {j}")
    if j > j_max:
        raise ValueError(f"iteration order {j} exceeds the cap {j_max}")


def iterate_filters(pair: FilterPair, j: int, j_max: int = J_MAX_DEFAULT) -> IteratedFilters:
    """Build h_l = h * Uh * ... * U^(l-1)h and g_l = h_(l-1) * U^(l-1)g
    for l = 1..j by time-domain convolution."""
    _check_order(j, j_max)
    h_list = [pair.h]
    g_list = [pair.g]
    for l in range(2, j + 1):
        prev = h_list[-1]
        h_list.append(convolve(prev, upsample(pair.h, l - 1)))
        g_list.append(convolve(prev, upsample(pair.g, l - 1)))
    return IteratedFilters(j, h_list, g_list)


def analyze(pair: FilterPair, x: FiniteSeq, j: int, j_max: int = J_MAX_DEFAULT) -> AnalysisOutput:
    """Order-j analysis: channels[l] = D^l(x * involute(g_l)) plus the
    residual D^j(x * involute(h_j)).

    Computed as the two-channel cascade (filter then downsample at each
    level), which agrees with the iterated-filter formulas through the
    noble identity.
    """
    _check_order(j, j_max)
    hb = involute(pair.h)
    gb = involute(pair.g)
    channels = []
    low = x
    for _ in range(j):
        channels.append(downsample(convolve(low, gb), 1))
        low = downsample(convolve(low, hb), 1)
    return AnalysisOutput(j, channels, low)


def energy_profile(pair: FilterPair, x: FiniteSeq, j_max: int) -> list[float]:
    """Per-channel energies [||(Fx)_1||^2, ..., ||(Fx)_j_max||^2, residual]."""
    if j_max < 1:
        raise ValueError(f"iteration order must be >= 1, got {j_max}")
    hb = involute(pair.h)
    gb = involute(pair.g)
    out = []
    low = x
    for _ in range(j_max):
        out.append(norm_sq(downsample(convolve(low, gb), 1)))
        low = downsample(convolve(low, hb), 1)
    out.append(norm_sq(low))
    return out


def lowpass_residual_norms(pair: FilterPair, x: FiniteSeq, j_max: int) -> list[float]:
    """Norms ||(F_j x)_(j+1)|| for j = 1..j_max via repeated application of
    the transfer step y -> D(y * involute(h)).  Supports stay bounded, so
    large j is cheap."""
    hb = involute(pair.h)
    norms = []
    low = x
    for _ in range(j_max):
        low = downsample(convolve(low, hb), 1)
        norms.append(math.sqrt(norm_sq(low)))
    return norms


@dataclass(frozen=True)
class TransferMatrix:
    """Matrix of x -> D(x*h) on sequences supported in [-L, L].

    entries[k + L, m + L] = h(2k - m) for |k|, |m| <= L.
    """

    L: int
    entries: np.ndarray

    def apply(self, x: FiniteSeq) -> FiniteSeq:
        vec = np.array([x.at(n) for n in range(-self.L, self.L + 1)])
        return FiniteSeq(-self.L, self.entries @ vec)


def transfer_matrix(h: FiniteSeq, L: int) -> TransferMatrix:
    check_lowpass(h)
    if h.is_zero:
        raise FilterError("transfer matrix of the zero filter is undefined")
    lo, hi = h.support
    if lo < -L or hi > L:
        raise FilterError(
            f"filter support [{lo}, {hi}] exceeds [-{L}, {L}]")
    ks = np.arange(-L, L + 1)
    entries = np.zeros((2 * L + 1, 2 * L + 1), dtype=complex)
    for i, k in enumerate(ks):
        for m_idx, m in enumerate(ks):
            entries[i, m_idx] = h.at(2 * k - m)
    return TransferMatrix(L, entries)


def spectral_radius(mat: np.ndarray, tol: float = 1e-12, max_iter: int = 500,
                    restarts: int = 3, seed: int = 1) -> float:
    """Spectral radius of a small dense matrix.

    Power iteration on the matrix and its conjugate transpose, taking the
    largest modulus found; a stagnating or oscillating iteration (complex
    dominant pair) restarts from a fresh random vector and finally falls
    back to a dense eigenvalue solve.
    """
    rng = np.random.default_rng(seed)
    n = mat.shape[0]
    scale = max(1.0, float(np.linalg.norm(mat, ord="fro")))
    best = None
    for a in (mat, mat.conj().T):
        accepted = None
        for _ in range(restarts):
            v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            v /= np.linalg.norm(v)
            for _ in range(max_iter):
                w = a @ v
                nw = np.linalg.norm(w)
                if nw == 0.0:
                    accepted = 0.0
                    break
                mu = np.vdot(v, w)
                # accept only a genuine eigenpair, not a stagnating iterate
                if np.linalg.norm(w - mu * v) <= tol * scale:
                    accepted = abs(mu)
                    break
                v = w / nw
            if accepted is not None:
                break
        if accepted is not None:
            best = accepted if best is None else max(best, accepted)
    if best is None:
        best = float(np.max(np.abs(np.linalg.eigvals(mat))))
    return best


@dataclass(frozen=True)
class ContractionCertificate:
    """Gershgorin-style contraction diagnostic for the transfer operator."""

    L: int
    nonnegative: bool
    even_sum: float
    odd_sum: float
    spectral_radius: float
    verdict: bool

    def to_json_obj(self) -> dict:
        return {
            "L": self.L,
            "nonnegative": self.nonnegative,
            "even_sum": self.even_sum,
            "odd_sum": self.odd_sum,
            "spectral_radius": self.spectral_radius,
            "verdict": self.verdict,
        }


def contraction_certificate(h: FiniteSeq, L: int) -> ContractionCertificate:
    """Check the nonnegativity hypothesis and the spectral radius bound
    1/sqrt(2) for the transfer operator restricted to [-L, L].

    The even/odd coefficient sums are reported as a diagnostic; both equal
    1/sqrt(2) for any low-pass filter.  The spectral radius is reported
    whether or not the hypothesis holds.
    """
    tm = transfer_matrix(h, L)
    coeffs = h.coeffs
    nonneg = bool(np.all(coeffs.real >= -1e-12) and np.all(np.abs(coeffs.imag) <= 1e-12))
    idx = h.indices
    even_sum = float(np.sum(coeffs[idx % 2 == 0]).real)
    odd_sum = float(np.sum(coeffs[idx % 2 == 1]).real)
    rho = spectral_radius(tm.entries)
    verdict = nonneg and rho <= INV_SQRT2 + 1e-9
    return ContractionCertificate(L, nonneg, even_sum, odd_sum, rho, verdict)
