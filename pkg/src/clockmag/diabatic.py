"""
Diabatic leakage while the quantization field is ramped down.

Near the clock state, the signal ``delta`` couples a clock state to a Zeeman
state split off by the field ``B``:

    H_D = (B/2)(sigma_z + 1) + delta sigma_x = [[B, delta], [delta, 0]]

in units ``hbar = mu = 1``.  Its instantaneous eigenbasis is rotated by
``gamma`` with ``tan(2 gamma) = 2 delta / B`` and split by
``dE = sqrt(B^2 + 4 delta^2) = 2 delta / sin(2 gamma)``.  The system starts
in the lower (clock) eigenstate at ``B_i`` and ``eps_D`` is the population
found in the upper eigenstate at ``B_f``.

In the adiabatic frame the leading Dyson term gives

    eps_D ~ | int gamma'(t) exp(i int_0^t dE) dt |^2 .

When ``gamma`` changes linearly between ``gamma_i`` and ``gamma_f`` and the
small-angle splitting ``dE ~ delta/gamma`` is used, the integral has the
closed form implemented in :func:`epsilon_d_linear_gamma`, together with the
bound ``(delta/B_f)^2 / (1 + (B_f T)^2 / 2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dynamics import HamiltonianSchedule, IntegratorConfig, propagator
from .errors import ContractError, ConvergenceError

__all__ = [
    "RampSpec",
    "InstantaneousFrame",
    "lzs_hamiltonian",
    "instantaneous_frame",
    "mixing_angle",
    "gamma_linear_schedule",
    "field_schedule",
    "epsilon_d_dyson",
    "epsilon_d_linear_gamma",
    "epsilon_d_bound",
    "simulate_ramp",
]

PROFILES = ("linear-gamma", "linear-B")


@dataclass(frozen=True)
class RampSpec:
    """Field ramp from ``B_i`` to ``B_f`` in time ``T``.

    Parameters
    ----------
    B_i, B_f : float
        Initial and final field, ``B_i > B_f > 0``.
    delta : float
        Signal coupling, ``delta > 0``.
    T : float
        Ramp duration, ``T >= 0``.
    profile : {"linear-gamma", "linear-B"} or callable
        Shape of the ramp.  A callable maps an array of times in ``[0, T]``
        to field values.
    """

    B_i: float
    B_f: float
    delta: float
    T: float
    profile: str | Callable = "linear-gamma"

    def __post_init__(self):
        if not self.B_i > self.B_f > 0:
            raise ContractError("need B_i > B_f > 0")
        if not self.delta > 0:
            raise ContractError("delta must be positive")
        if not self.T >= 0:
            raise ContractError("T must be non-negative")
        if isinstance(self.profile, str) and self.profile not in PROFILES:
            raise ContractError(f"unknown profile {self.profile!r}")

    @property
    def gamma_i(self) -> float:
        return mixing_angle(self.B_i, self.delta)

    @property
    def gamma_f(self) -> float:
        return mixing_angle(self.B_f, self.delta)


@dataclass(frozen=True)
class InstantaneousFrame:
    """Mixing angle and level splitting at one field value."""

    gamma: float
    deltaE: float


def mixing_angle(B, delta):
    """``gamma = atan2(2 delta, B) / 2``, equal to ``pi/4`` at ``B = 0``."""
    return 0.5 * np.arctan2(2 * np.asarray(delta, dtype=float), B)


def lzs_hamiltonian(B: float, delta: float) -> np.ndarray:
    """``[[B, delta], [delta, 0]]``."""
    if not (np.isfinite(B) and np.isfinite(delta)):
        raise ContractError("B and delta must be finite")
    return np.array([[B, delta], [delta, 0.0]], dtype=complex)


def instantaneous_frame(B: float, delta: float) -> InstantaneousFrame:
    """Eigenbasis angle and splitting of :func:`lzs_hamiltonian`."""
    return InstantaneousFrame(float(mixing_angle(B, delta)), float(np.hypot(B, 2 * delta)))


def _upper(gamma):
    return np.array([np.cos(gamma), np.sin(gamma)], dtype=complex)


def _lower(gamma):
    return np.array([-np.sin(gamma), np.cos(gamma)], dtype=complex)


def gamma_linear_schedule(ramp: RampSpec) -> Callable:
    """``B(t) = 2 delta / tan(2 gamma(t))`` with ``gamma`` linear in ``t``."""
    if not ramp.T > 0:
        raise ContractError("T must be positive")
    gi, gf = ramp.gamma_i, ramp.gamma_f

    def B_of_t(t):
        t = np.asarray(t, dtype=float)
        g = gi + (gf - gi) * t / ramp.T
        B = 2 * ramp.delta / np.tan(2 * g)
        # exact endpoints
        B = np.where(t == 0, ramp.B_i, B)
        return np.where(t == ramp.T, ramp.B_f, B)

    return B_of_t


def field_schedule(ramp: RampSpec) -> Callable:
    """Field ``B(t)`` of the ramp profile."""
    if callable(ramp.profile):
        return ramp.profile
    if ramp.profile == "linear-gamma":
        return gamma_linear_schedule(ramp)
    return lambda t: ramp.B_i + (ramp.B_f - ramp.B_i) * np.asarray(t, dtype=float) / ramp.T


def epsilon_d_bound(B_f, delta, T):
    """``(delta/B_f)^2 / (1 + (B_f T)^2 / 2)``."""
    return (delta / B_f) ** 2 / (1 + 0.5 * (B_f * T) ** 2)


def epsilon_d_linear_gamma(ramp: RampSpec) -> tuple:
    """Closed-form first-order ``eps_D`` for a linear-gamma ramp and its bound.

    The endpoints are ``gamma_i = atan(2 delta/B_i)/2`` and
    ``gamma_f = atan(2 delta/B_f)/2``.

    Returns
    -------
    closed, bound : float
    """
    gi, gf = ramp.gamma_i, ramp.gamma_f
    a = ramp.delta * ramp.T / (gf - gi)
    closed = (gf**2 + gi**2 - 2 * gf * gi * np.cos(a * np.log(gi / gf))) / (1 + a**2)
    return float(closed), float(epsilon_d_bound(ramp.B_f, ramp.delta, ramp.T))


def _antideriv_dE(B, delta):
    """``int sqrt(B^2 + 4 delta^2) dB``."""
    r = np.hypot(B, 2 * delta)
    return 0.5 * (B * r + 4 * delta**2 * np.arcsinh(B / (2 * delta)))


def _phase_of_gamma(ramp, gamma, phase):
    """Accumulated ``int_0^t dE`` as a function of the mixing angle."""
    d = ramp.delta
    gi, gf = ramp.gamma_i, ramp.gamma_f
    if ramp.profile == "linear-gamma":
        scale = d * ramp.T / (gf - gi)
        if phase == "small-angle":
            return scale * np.log(gamma / gi)
        return scale * np.log(np.tan(gamma) / np.tan(gi))
    if phase == "small-angle":
        raise ContractError("the small-angle phase is only defined for linear-gamma ramps")
    B = 2 * d / np.tan(2 * gamma)
    rate = ramp.T / (ramp.B_i - ramp.B_f)
    return rate * (_antideriv_dE(ramp.B_i, d) - _antideriv_dE(B, d))


def _dyson_custom(ramp, quad_points):
    B_of_t = ramp.profile
    n = max(20000, 200 * quad_points)
    t = np.linspace(0.0, ramp.T, n + 1)
    B = np.asarray(B_of_t(t), dtype=float)
    g = mixing_angle(B, ramp.delta)
    dg = np.diff(g)
    if not (np.all(dg >= 0) or np.all(dg <= 0)):
        raise ContractError("gamma is not monotone along the custom ramp")
    dE = np.hypot(B, 2 * ramp.delta)
    Phi = np.concatenate([[0.0], np.cumsum(0.5 * (dE[1:] + dE[:-1]) * np.diff(t))])
    # midpoint rule in gamma with the phase at the interval centre
    amp = np.sum(dg * np.exp(0.5j * (Phi[1:] + Phi[:-1])))
    return float(abs(amp) ** 2)


def epsilon_d_dyson(ramp: RampSpec, quad_points: int = 64, phase: str = "exact") -> float:
    """Leading-order Dyson estimate of ``eps_D``.

    The time integral is rewritten as ``int exp(i Phi(gamma)) d gamma`` and
    evaluated with composite Gauss-Legendre quadrature in ``log gamma``,
    where the phase advances almost uniformly.

    Parameters
    ----------
    ramp : RampSpec
    quad_points : int
        Nodes per panel, at least 64.  Panels are added until each spans at
        most half a phase revolution.
    phase : {"exact", "small-angle"}
        ``"small-angle"`` uses ``dE = delta/gamma`` and reproduces the
        closed form of :func:`epsilon_d_linear_gamma`.
    """
    if quad_points < 64:
        raise ContractError("quad_points must be at least 64")
    if phase not in ("exact", "small-angle"):
        raise ContractError("phase must be 'exact' or 'small-angle'")
    if callable(ramp.profile):
        return _dyson_custom(ramp, quad_points)
    gi, gf = ramp.gamma_i, ramp.gamma_f
    if ramp.T == 0:
        return float((gf - gi) ** 2)
    total = abs(_phase_of_gamma(ramp, np.array([gf]), phase)[0])
    panels = max(4, int(np.ceil(total / np.pi)) + 1)
    x, w = np.polynomial.legendre.leggauss(int(quad_points))
    edges = np.linspace(np.log(gi), np.log(gf), panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = (mid[:, None] + half[:, None] * x).ravel()
    wu = (half[:, None] * w).ravel()
    g = np.exp(u)
    amp = np.sum(wu * g * np.exp(1j * _phase_of_gamma(ramp, g, phase)))
    return float(abs(amp) ** 2)


def simulate_ramp(ramp: RampSpec, integrator: IntegratorConfig | None = None, steps_per_period: int = 50) -> float:
    """Direct integration of :func:`lzs_hamiltonian` along the ramp.

    Starts in the lower eigenstate at ``B_i`` and returns the population of
    the upper eigenstate at ``B_f``.

    Parameters
    ----------
    ramp : RampSpec
    integrator : IntegratorConfig, optional
        Explicit step count.  Must give ``steps_per_period`` steps per period
        of the largest splitting.
    steps_per_period : int
        Resolution used when ``integrator`` is omitted.

    Raises
    ------
    ConvergenceError
        If ``integrator`` under-resolves the largest splitting.
    """
    gi, gf = ramp.gamma_i, ramp.gamma_f
    psi0 = _lower(gi)
    if ramp.T == 0:
        return float(abs(np.vdot(_upper(gf), psi0)) ** 2)
    B_of_t = field_schedule(ramp)
    tt = np.linspace(0.0, ramp.T, 257)
    dEmax = float(np.max(np.hypot(np.asarray(B_of_t(tt), dtype=float), 2 * ramp.delta)))
    needed = int(np.ceil(ramp.T * dEmax / (2 * np.pi) * steps_per_period))
    if integrator is None:
        integrator = IntegratorConfig(max(needed, 16))
    elif integrator.step_count < needed:
        raise ConvergenceError(
            f"{integrator.step_count} steps under-resolve the splitting; need at least {needed}"
        )
    d = ramp.delta

    def coeffs(t):
        B = np.asarray(B_of_t(t), dtype=float)
        # [[B, d], [d, 0]] = B/2 + d sigma_x + B/2 sigma_z
        return 0.5 * B, d, 0.0, 0.5 * B

    U = propagator(HamiltonianSchedule.from_pauli(coeffs, 0.0, ramp.T), integrator)
    return float(abs(np.vdot(_upper(gf), U @ psi0)) ** 2)
