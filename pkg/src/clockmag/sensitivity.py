"""
Projection-noise sensitivity of the geometric DC protocol.

All quantities are dimensionless with ``hbar = mu = 1`` and the clock
coherence time ``tau_clk`` as the unit of time:

* ``B = mu B_f tau_clk``, the final field,
* ``Omega_ratio``, the ellipse minor-to-major ratio,
* ``T = T_ramp / tau_clk``, the ramp time; the pi-pulse time takes the rest
  of the budget, ``T_pi = 1 - T`` and ``Omega_1 = 1 / T_pi``,
* ``N``, the number of repetitions.

The ideal Cramér-Rao sensitivity is ``B / (sqrt(N) Omega_ratio)``.  Leakage
out of the clock pair during the pulses (power broadening) and during the
ramp (diabatic transitions) degrades it as

    d = B / (sqrt(N) Omega_ratio) * sqrt((1 + e_D)/(1 - e_D)) * (1 + e_PB)/(1 - e_PB)

with ``e_PB = 1/(1 + (B (1 - T))^2/(1 + Omega_ratio^2))`` and the diabatic
bound ``e_D = (1/Omega_ratio^2) / (1 + (B T)^2/2)`` taken at the edge of the
measurement range ``delta_max = B_f / Omega_ratio``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dc import p2_exact
from .errors import ContractError, RegimeError, RegimeWarning

__all__ = [
    "DimensionlessPoint",
    "SensitivityResult",
    "OptimizationResult",
    "MLEResult",
    "fisher_information",
    "cramer_rao",
    "generic_leak_correction",
    "power_broadening_error",
    "diabatic_error",
    "delta_tilde",
    "full_sensitivity",
    "analytic_optimum",
    "numeric_optimize",
    "self_consistent_sensitivity",
    "fixed_point_sensitivity",
    "p2_sensitivity",
    "zeeman_ramsey_population",
    "zeeman_sensitivity",
    "mle_monte_carlo",
    "to_physical",
]

REGIME_LIMIT = 0.9
MASK_THRESHOLD = 0.5
GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)


@dataclass(frozen=True)
class DimensionlessPoint:
    """Operating point ``(B_tilde_f, Omega_ratio, T_tilde, N)``."""

    B_tilde_f: float
    Omega_ratio: float
    T_tilde: float = 0.0
    N: int = 1

    def __post_init__(self):
        if not self.B_tilde_f > 0:
            raise ContractError("B_tilde_f must be positive")
        if not self.Omega_ratio > 0:
            raise ContractError("Omega_ratio must be positive")
        if not 0.0 <= self.T_tilde < 1.0:
            raise ContractError("T_tilde must lie in [0, 1)")
        if int(self.N) != self.N or self.N < 1:
            raise ContractError("N must be a positive integer")

    @classmethod
    def from_physical(
        cls, mu: float, B_f: float, Omega_ratio: float, T: float, tau_clk: float, N: int = 1
    ) -> "DimensionlessPoint":
        """Build from dimensional quantities (``hbar = 1``)."""
        return cls(mu * B_f * tau_clk, Omega_ratio, T / tau_clk, N)


@dataclass(frozen=True)
class SensitivityResult:
    """Sensitivity with its error budget and drive settings.

    ``settings`` holds ``Omega1``, ``Omega2``, ``B_f`` and ``T`` in units of
    ``1/tau_clk`` and ``tau_clk``, plus ``Omega_ratio``.
    """

    delta_tilde: float
    eps_pb: float
    eps_d: float
    settings: dict = field(default_factory=dict)


def _settings(B, Om, T):
    O1 = 1.0 / (1.0 - T)
    return {"Omega1": O1, "Omega2": Om * O1, "B_f": B, "T": T, "Omega_ratio": Om}


def fisher_information(P_fn: Callable, delta: float, h: float) -> float:
    """Bernoulli Fisher information ``P'(delta)^2 / (P (1 - P))``.

    The derivative is a central difference with one Richardson step.

    Raises
    ------
    ValueError
        If ``P(delta)`` is 0 or 1, where the information diverges.
    """
    if not h > 0:
        raise ContractError("h must be positive")
    p = float(P_fn(delta))
    if not 0.0 < p < 1.0:
        raise ValueError(f"P = {p} on the boundary: Fisher information is infinite")

    def D(step):
        return (float(P_fn(delta + step)) - float(P_fn(delta - step))) / (2 * step)

    d = (4 * D(0.5 * h) - D(h)) / 3
    return d * d / (p * (1 - p))


def cramer_rao(F: float, N: int = 1) -> float:
    """``1/sqrt(N F)``; infinite (with a warning) when ``F = 0``."""
    if F <= 0:
        warnings.warn("zero Fisher information: the parameter is not identifiable", RegimeWarning, stacklevel=2)
        return float("inf")
    return float(1.0 / np.sqrt(N * F))


def generic_leak_correction(delta0, eps):
    """``delta0 sqrt((1 + eps)/(1 - eps))`` for a leak ``eps`` out of the clock pair."""
    eps = np.asarray(eps, dtype=float)
    if np.any(eps >= 1) or np.any(eps < 0):
        raise ContractError("eps must lie in [0, 1)")
    return delta0 * np.sqrt((1 + eps) / (1 - eps))


def _eps_pb(B, Om, T):
    return 1.0 / (1.0 + (B * (1.0 - T)) ** 2 / (1.0 + Om**2))


def _eps_d(B, Om, T):
    return (1.0 / Om**2) / (1.0 + 0.5 * (B * T) ** 2)


def power_broadening_error(point: DimensionlessPoint) -> float:
    """``1/(1 + (B (1 - T))^2 / (1 + Omega_ratio^2))``."""
    return float(_eps_pb(point.B_tilde_f, point.Omega_ratio, point.T_tilde))


def diabatic_error(point: DimensionlessPoint) -> float:
    """Diabatic bound at ``delta_max``: ``Omega_ratio^-2 / (1 + (B T)^2/2)``."""
    return float(_eps_d(point.B_tilde_f, point.Omega_ratio, point.T_tilde))


def delta_tilde(B, Om, T, N=1, limit: float = REGIME_LIMIT):
    """Vectorized corrected sensitivity; ``inf`` where an error reaches ``limit``."""
    B, Om, T = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (B, Om, T)))
    epb = _eps_pb(B, Om, T)
    ed = _eps_d(B, Om, T)
    ok = (epb < limit) & (ed < limit)
    epb_s = np.where(ok, epb, 0.0)
    ed_s = np.where(ok, ed, 0.0)
    val = B / (np.sqrt(N) * Om) * np.sqrt((1 + ed_s) / (1 - ed_s)) * (1 + epb_s) / (1 - epb_s)
    return np.where(ok, val, np.inf)


def full_sensitivity(point: DimensionlessPoint) -> SensitivityResult:
    """Sensitivity corrected for power broadening (two pulses) and diabatic leakage.

    Raises
    ------
    RegimeError
        If either error reaches 0.9, where the two cannot be treated
        independently.
    """
    B, Om, T = point.B_tilde_f, point.Omega_ratio, point.T_tilde
    epb = float(_eps_pb(B, Om, T))
    ed = float(_eps_d(B, Om, T))
    if epb >= REGIME_LIMIT or ed >= REGIME_LIMIT:
        raise RegimeError(f"errors too large to treat independently (eps_PB={epb:.3g}, eps_D={ed:.3g})")
    d = float(delta_tilde(B, Om, T, point.N))
    return SensitivityResult(d, epb, ed, _settings(B, Om, T))


def analytic_optimum(B_tilde_f: float, T_tilde: float = 0.0, N: int = 1) -> SensitivityResult:
    """Large-field expansion ``(2 sqrt(2)/sqrt(N)) (1 + T + (1 + 3T)/B^2)``.

    Settings follow ``B_f = sqrt(2) Omega_2`` and ``Omega_1 = 1/(1 - T)``.
    """
    B, T = float(B_tilde_f), float(T_tilde)
    Om = (1 - T) * B / np.sqrt(2)
    d = 2 * np.sqrt(2) / np.sqrt(N) * (1 + T + (1 + 3 * T) / B**2)
    return SensitivityResult(float(d), float(_eps_pb(B, Om, T)), float(_eps_d(B, Om, T)), _settings(B, Om, T))


@dataclass(frozen=True)
class OptimizationResult:
    """Per-point optimum of the ramp time over a ``(B, Omega_ratio)`` grid.

    Arrays are indexed ``[i_B, i_Omega]``.  ``mask`` marks points whose
    combined error at the optimum exceeds the threshold (or that have no
    valid ramp time); their ``delta_tilde`` is ``nan``.
    """

    B_grid: np.ndarray
    Omega_grid: np.ndarray
    delta_tilde: np.ndarray
    T_opt: np.ndarray
    eps_pb: np.ndarray
    eps_d: np.ndarray
    mask: np.ndarray

    def ridge(self) -> np.ndarray:
        """Index of the optimal ``Omega_ratio`` for every ``B`` (-1 if all masked)."""
        d = np.where(self.mask, np.inf, self.delta_tilde)
        idx = np.argmin(d, axis=1)
        return np.where(np.all(self.mask, axis=1), -1, idx)

    def column_minimum(self) -> np.ndarray:
        """Best sensitivity over ``Omega_ratio`` for every ``B``."""
        d = np.where(self.mask, np.inf, self.delta_tilde)
        return np.where(np.all(self.mask, axis=1), np.nan, np.min(d, axis=1))


def _golden_min(f, a, b, tol):
    """Vectorized golden-section minimization of ``f`` on ``[a, b]``."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while np.max(b - a) > tol:
        left = fc <= fd
        # left: [a, d] keeps c as its upper probe; right: [c, b] keeps d as its lower probe
        a, b = np.where(left, a, c), np.where(left, d, b)
        kept, fkept = np.where(left, c, d), np.where(left, fc, fd)
        probe = np.where(left, b - GOLDEN * (b - a), a + GOLDEN * (b - a))
        fprobe = f(probe)
        c, fc = np.where(left, probe, kept), np.where(left, fprobe, fkept)
        d, fd = np.where(left, kept, probe), np.where(left, fkept, fprobe)
    x = 0.5 * (a + b)
    return x, f(x)


def numeric_optimize(
    B_grid, Omega_grid, N: int = 1, T_max: float = 0.9, tol: float = 1e-6, threshold: float = MASK_THRESHOLD
) -> OptimizationResult:
    """Minimize :func:`full_sensitivity` over the ramp time at every grid point.

    Golden-section search on ``[0, T_max]``, followed by a comparison with
    the abrupt ramp ``T = 0`` since the optimum often sits on that edge.
    """
    Bg = np.asarray(B_grid, dtype=float)
    Og = np.asarray(Omega_grid, dtype=float)
    B, Om = np.meshgrid(Bg, Og, indexing="ij")

    def f(T):
        return delta_tilde(B, Om, T, N)

    T_opt, d_opt = _golden_min(f, np.zeros_like(B), np.full_like(B, T_max), tol)
    d0 = f(np.zeros_like(B))
    edge = d0 <= d_opt
    T_opt = np.where(edge, 0.0, T_opt)
    d_opt = np.where(edge, d0, d_opt)
    epb = _eps_pb(B, Om, T_opt)
    ed = _eps_d(B, Om, T_opt)
    mask = ~np.isfinite(d_opt) | (epb + ed > threshold)
    return OptimizationResult(Bg, Og, np.where(mask, np.nan, d_opt), T_opt, epb, ed, mask)


def _sc_inputs(B, T, N):
    Om = np.sqrt(1 + 0.5 * (1 - T) ** 2 * B**2)
    epb = _eps_pb(B, Om, T)
    A = B / (np.sqrt(N) * Om) * (1 + epb) / (1 - epb)
    c = 1.0 / (B**2 * (1 + 0.5 * (B * T) ** 2))
    return Om, epb, A, c


def self_consistent_sensitivity(B_tilde_f: float, T_tilde: float = 0.0, N: int = 1) -> SensitivityResult:
    """Sensitivity with the diabatic error evaluated at the sensitivity itself.

    With ``Omega_ratio = sqrt(1 + (1 - T)^2 B^2 / 2)`` and ``y = d^2`` the
    condition ``d = A sqrt((1 + c y)/(1 - c y))`` becomes
    ``c y^2 - (1 - A^2 c) y + A^2 = 0``; the physical root is the smaller
    one, evaluated in cancellation-free form.

    Raises
    ------
    RegimeError
        If the quadratic has no real root.
    """
    B, T = float(B_tilde_f), float(T_tilde)
    if not B > 0:
        raise ContractError("B_tilde_f must be positive")
    Om, epb, A, c = _sc_inputs(B, T, N)
    A2 = A * A
    p = 1 - A2 * c
    disc = p * p - 4 * c * A2
    if p <= 0 or disc < 0:
        raise RegimeError("no self-consistent solution (negative discriminant)")
    y = 2 * A2 / (p + np.sqrt(disc))
    d = float(np.sqrt(y))
    return SensitivityResult(d, float(epb), float(c * y), _settings(B, Om, T))


def fixed_point_sensitivity(
    B_tilde_f: float, T_tilde: float = 0.0, N: int = 1, tol: float = 1e-14, max_iter: int = 10000
) -> float:
    """Solve ``d = full-sensitivity(delta = d)`` by direct iteration."""
    B, T = float(B_tilde_f), float(T_tilde)
    Om, epb, A, c = _sc_inputs(B, T, N)
    d = A
    for _ in range(max_iter):
        e = c * d * d
        if e >= 1:
            raise RegimeError("fixed-point iteration left the regime")
        new = A * np.sqrt((1 + e) / (1 - e))
        if abs(new - d) < tol * new:
            return float(new)
        d = new
    raise RegimeError("fixed-point iteration did not converge")


def p2_sensitivity(delta, B_f: float, Omega_ratio: float):
    """``|2,0>`` population at ``theta = pi/2`` as a function of the signal.

    The signal rotates the field by ``phi = atan(delta / B_f)``.
    """
    return p2_exact(np.arctan2(delta, B_f), 0.5 * np.pi, Omega_ratio)


def zeeman_ramsey_population(delta, T, phase: float = 0.0):
    """Ramsey fringe ``1/2 + cos(delta T + phase)/2`` (``phase = pi/2`` is quadrature)."""
    T = np.asarray(T, dtype=float)
    if np.any(T < 0):
        raise ContractError("T must be non-negative")
    return 0.5 + 0.5 * np.cos(delta * T + phase)


def zeeman_sensitivity(tau_Z: float, N: int = 1, phase: float = 0.5 * np.pi) -> float:
    """Cramér-Rao sensitivity of the Zeeman-Ramsey fringe at working point ``phase``."""
    F = fisher_information(lambda d: zeeman_ramsey_population(d, tau_Z, phase), 0.0, 1e-6 / tau_Z)
    return cramer_rao(F, N)


@dataclass(frozen=True)
class MLEResult:
    """Spread of the maximum-likelihood estimate over repeated experiments."""

    estimates: np.ndarray
    std: float
    cramer_rao: float


def _branch_limit(Omega_ratio):
    """First maximum of ``p2_exact(phi, pi/2)`` for ``phi > 0``."""
    phi = np.linspace(0.0, np.pi, 20001)
    p = p2_exact(phi, 0.5 * np.pi, Omega_ratio)
    drop = np.nonzero(np.diff(p) < 0)[0]
    return float(phi[drop[0]]) if drop.size else float(np.pi)


def mle_monte_carlo(
    B_f: float,
    Omega_ratio: float,
    N: int = 10_000,
    trials: int = 400,
    delta_true: float = 0.0,
    seed: int | None = 0,
) -> MLEResult:
    """Maximum-likelihood estimates of ``delta`` from Bernoulli records.

    Each trial draws ``N`` outcomes with probability
    :func:`p2_sensitivity` and inverts the observed frequency on the
    monotone branch around ``delta = 0`` by bisection.
    """
    rng = np.random.default_rng(seed)
    p_true = float(p2_sensitivity(delta_true, B_f, Omega_ratio))
    freq = rng.binomial(N, p_true, size=int(trials)) / N
    lim = _branch_limit(Omega_ratio)
    lo = np.full(freq.shape, -lim)
    hi = np.full(freq.shape, lim)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        above = p2_exact(mid, 0.5 * np.pi, Omega_ratio) < freq
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    est = B_f * np.tan(0.5 * (lo + hi))
    F = fisher_information(lambda d: p2_sensitivity(d, B_f, Omega_ratio), delta_true, 1e-6 * B_f)
    return MLEResult(est, float(np.std(est, ddof=1)), cramer_rao(F, N))


def to_physical(delta_tilde_value: float, tau_clk: float, mu: float = 1.0) -> float:
    """Dimensional sensitivity ``delta_tilde / (mu tau_clk)`` (``hbar = 1``)."""
    return float(delta_tilde_value / (mu * tau_clk))
