"""Closed-form achievable-rate machinery.

Per-pair rates replace the expectation of 1/2 log2(1 + SINR) by the rate
of the moment-substituted SINR (first moments for linear gain terms),
which collapses the ergodic rate to an algebraic expression in the
order-statistic moments.  The same denominator aggregates, with the SNR
factors cancelled, give the high-SNR per-pair asymptotes; slope and
power-offset diagnostics are estimated numerically from sampled
sum-rate curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import OrderStatMoments
from .errors import ConfigurationError
from .signal import ImpairmentProfile, NetworkConfig

__all__ = [
    "RateTerms",
    "AsrResult",
    "SLOPE_FLOOR",
    "rate_terms",
    "rate_pair_nonideal",
    "rate_pair_ideal",
    "asr",
    "asr_asymptotic",
    "high_snr_slope",
    "high_snr_offset",
    "pair_indices",
]

# below this many bits/s/Hz per 3 dB the numerical slope is treated as zero
SLOPE_FLOOR = 0.05


@dataclass(frozen=True)
class RateTerms:
    """Denominator aggregates for one (k, n) pair.

    xi1..xi5 build the finite-SNR denominator, delta1..delta4 the high-SNR
    one, and varpi is the distortion-free aggregate (interference plus
    relayed noise).
    """

    xi1: float
    xi2: float
    xi3: float
    xi4: float
    xi5: float
    delta1: float
    delta2: float
    delta3: float
    delta4: float
    varpi: float

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} must be >= 0")
        if self.xi5 < 1.0:
            raise ConfigurationError("xi5 must be >= 1")


@dataclass(frozen=True, eq=False)
class AsrResult:
    """Per-pair rate matrix and its sum.

    per_pair[k-1, n-1] holds the rate of decoder k for user n
    (zero whenever n >= k); total is the sum over all pairs.
    """

    per_pair: np.ndarray
    total: float
    provenance: str
    stderr: float | None = None
    per_pair_stderr: np.ndarray | None = None
    trials: int | None = None
    finite_total: float | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        per_pair = np.asarray(self.per_pair, dtype=np.float64)
        object.__setattr__(self, "per_pair", per_pair)
        if self.provenance not in ("analytical", "monte-carlo", "asymptotic"):
            raise ConfigurationError(f"unknown provenance {self.provenance!r}")
        if np.any(per_pair < 0):
            raise ConfigurationError("per-pair rates must be >= 0")
        s = float(per_pair.sum())
        if math.isinf(s) or math.isinf(self.total):
            if s != self.total:
                raise ConfigurationError("total does not match per-pair sum")
        elif abs(s - self.total) > 1e-9 * max(1.0, abs(s)):
            raise ConfigurationError(
                f"total {self.total!r} does not match per-pair sum {s!r}"
            )

    @property
    def n_users(self) -> int:
        return self.per_pair.shape[0]


def pair_indices(n_users: int) -> list[tuple[int, int]]:
    """Decodable (k, n) pairs, 1-based, in canonical (k, then n) order."""
    return [(k, n) for k in range(2, n_users + 1) for n in range(1, k)]


def _check_inputs(moments: OrderStatMoments, cfg: NetworkConfig) -> None:
    if moments.n_users != cfg.n_users:
        raise ConfigurationError(
            f"moments cover {moments.n_users} users, config expects {cfg.n_users}"
        )


def rate_terms(
    moments: OrderStatMoments,
    cfg: NetworkConfig,
    imp: ImpairmentProfile,
    k: int,
    n: int,
) -> RateTerms:
    """Denominator aggregates for pair (k, n), n < k."""
    _check_inputs(moments, cfg)
    if not (1 <= n < k <= cfg.n_users):
        raise ValueError(f"need 1 <= n < k <= {cfg.n_users}, got k={k}, n={n}")
    psi = moments.psi
    a = np.asarray(cfg.a)
    r1, r2 = cfg.r1, cfg.r2
    kut2, kur2 = imp.kappa_ut**2, imp.kappa_ur**2
    krt2, krr2 = imp.kappa_rt**2, imp.kappa_rr**2
    mac = imp.mac_distortion
    psi_k = float(psi[k - 1])

    weighted = float(np.dot(a, psi))
    residual = float(np.dot(a[n : cfg.n_users - 1], psi[n : cfg.n_users - 1]))

    xi1 = psi_k * residual * r1 * r2
    xi2 = psi_k * (kut2 + krr2) * weighted * r1 * r2
    xi3 = psi_k * krt2 * mac * weighted * r1 * r2
    xi4 = kur2 * psi_k * mac * weighted * r1 * r2 + r1 * mac * weighted
    xi5 = psi_k * r2 * (1.0 + krt2 + kur2) + 1.0

    delta1 = psi_k * residual
    delta2 = psi_k * (kut2 + krr2) * weighted
    delta3 = psi_k * krt2 * mac * weighted
    delta4 = kur2 * psi_k * mac * weighted

    varpi = psi_k * residual * r1 * r2 + r1 * weighted
    return RateTerms(xi1, xi2, xi3, xi4, xi5, delta1, delta2, delta3, delta4, varpi)


def rate_pair_nonideal(
    moments: OrderStatMoments,
    cfg: NetworkConfig,
    imp: ImpairmentProfile,
    k: int,
    n: int,
    prefactor: float = 0.5,
) -> float:
    """Closed-form rate of pair (k, n) with distortion; 0 when n >= k.

    The default 1/2 prefactor charges the two-slot exchange.
    """
    _check_inputs(moments, cfg)
    if n >= k:
        return 0.0
    t = rate_terms(moments, cfg, imp, k, n)
    num = float(moments.psi[k - 1]) * float(moments.psi[n - 1]) * cfg.a[n - 1] * cfg.r1 * cfg.r2
    den = t.xi1 + t.xi2 + t.xi3 + t.xi4 + t.xi5
    return prefactor * math.log2(1.0 + num / den)


def rate_pair_ideal(
    moments: OrderStatMoments,
    cfg: NetworkConfig,
    k: int,
    n: int,
    prefactor: float = 0.5,
) -> float:
    """Distortion-free closed-form rate of pair (k, n); 0 when n >= k."""
    _check_inputs(moments, cfg)
    if n >= k:
        return 0.0
    t = rate_terms(moments, cfg, ImpairmentProfile.ideal(), k, n)
    num = float(moments.psi[k - 1]) * float(moments.psi[n - 1]) * cfg.a[n - 1] * cfg.r1 * cfg.r2
    den = t.varpi + float(moments.psi[k - 1]) * cfg.r2 + 1.0
    return prefactor * math.log2(1.0 + num / den)


def asr(
    moments: OrderStatMoments,
    cfg: NetworkConfig,
    imp: ImpairmentProfile | None = None,
    condition: str = "nonideal",
    prefactor: float = 0.5,
) -> AsrResult:
    """Achievable sum rate: per-pair matrix plus the total."""
    _check_inputs(moments, cfg)
    if condition not in ("ideal", "nonideal"):
        raise ValueError(f"condition must be 'ideal' or 'nonideal', got {condition!r}")
    if condition == "nonideal" and imp is None:
        raise ValueError("nonideal condition requires an impairment profile")
    M = cfg.n_users
    per_pair = np.zeros((M, M - 1))
    for k, n in pair_indices(M):
        if condition == "ideal":
            per_pair[k - 1, n - 1] = rate_pair_ideal(moments, cfg, k, n, prefactor)
        else:
            per_pair[k - 1, n - 1] = rate_pair_nonideal(moments, cfg, imp, k, n, prefactor)
    return AsrResult(per_pair=per_pair, total=float(per_pair.sum()), provenance="analytical")


def asr_asymptotic(
    moments: OrderStatMoments,
    cfg: NetworkConfig,
    imp: ImpairmentProfile | None = None,
    condition: str = "nonideal",
    prefactor: float = 0.5,
) -> AsrResult:
    """High-SNR limit of the sum rate (r1 -> infinity with r2 = c r1).

    Pairs whose limiting denominator is empty have no ceiling: those
    per-pair entries are +inf, the total is flagged divergent, and
    ``finite_total`` carries the sum over the bounded pairs.
    """
    _check_inputs(moments, cfg)
    if condition not in ("ideal", "nonideal"):
        raise ValueError(f"condition must be 'ideal' or 'nonideal', got {condition!r}")
    if condition == "nonideal" and imp is None:
        raise ValueError("nonideal condition requires an impairment profile")
    M = cfg.n_users
    psi = moments.psi
    a = np.asarray(cfg.a)
    per_pair = np.zeros((M, M - 1))
    notes: list[str] = []
    for k, n in pair_indices(M):
        if condition == "ideal":
            den = float(np.dot(a[n : M - 1], psi[n : M - 1]))
            num = cfg.a[n - 1] * float(psi[n - 1])
        else:
            t = rate_terms(moments, cfg, imp, k, n)
            den = t.delta1 + t.delta2 + t.delta3 + t.delta4
            num = float(psi[k - 1]) * float(psi[n - 1]) * cfg.a[n - 1]
        if den == 0.0:
            per_pair[k - 1, n - 1] = math.inf
            notes.append(f"pair (k={k}, n={n}) has no interference ceiling: asymptote diverges")
        else:
            per_pair[k - 1, n - 1] = prefactor * math.log2(1.0 + num / den)
    total = float(per_pair.sum())
    finite = float(per_pair[np.isfinite(per_pair)].sum())
    return AsrResult(
        per_pair=per_pair,
        total=total,
        provenance="asymptotic",
        finite_total=finite,
        notes=tuple(notes),
    )


def _check_curve(r1_grid, asr_values) -> tuple[np.ndarray, np.ndarray]:
    r = np.asarray(r1_grid, dtype=np.float64)
    y = np.asarray(asr_values, dtype=np.float64)
    if r.shape != y.shape or r.ndim != 1:
        raise ValueError("r1 grid and rate samples must be 1-D and equally long")
    if r.size < 3:
        raise ValueError(f"need at least 3 samples, got {r.size}")
    if np.any(np.diff(r) <= 0):
        raise ValueError("r1 grid must be strictly increasing")
    span_db = 10.0 * math.log10(r[-1] / r[0])
    if span_db < 20.0:
        raise ValueError(f"samples must span >= 20 dB, got {span_db:.1f} dB")
    return r, y


def high_snr_slope(r1_grid, asr_values) -> float:
    """Secant estimate of lim rate / log2(r1) from the top of a sampled curve."""
    r, y = _check_curve(r1_grid, asr_values)
    return float((y[-1] - y[-2]) / (math.log2(r[-1]) - math.log2(r[-2])))


def high_snr_offset(r1_grid, asr_values, slope: float) -> float:
    """Power-offset estimate, in 3 dB units (log2 of SNR).

    When the slope estimate sits below ``SLOPE_FLOOR`` the offset diverges
    and +inf is returned.
    """
    r, y = _check_curve(r1_grid, asr_values)
    if abs(slope) < SLOPE_FLOOR:
        return math.inf
    return float(math.log2(r[-1]) - y[-1] / slope)
