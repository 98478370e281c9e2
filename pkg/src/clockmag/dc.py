"""
DC magnetometry with two clock-state pulses and a field rotation.

The first pulse is a pi/2 pulse with the field along the major axis of the
RF polarization ellipse.  The signal rotates the field by ``phi`` inside the
ellipse plane and the second pulse, with RF phase ``theta``, sees the drive
``Omega_1 beta(phi)`` with ``beta = sqrt(cos^2 phi + Omega_ratio^2 sin^2
phi)``.  The ``|2,0>`` population after the sequence is

    P2 = 1/2 - (cos(theta) cos(phi) - Omega_ratio sin(theta) sin(phi))
               / (2 beta) * sin(pi beta / 2).

The bracket keeps its sign.  Its absolute value would make ``P2 <= 1/2``
everywhere, which contradicts direct integration of the pulse sequence and
the fringe phase below.

Scanning ``theta`` gives a fringe whose maximum sits at

    theta_f = pi - sgn(phi) arccos(cos(phi) / beta),   sgn(0) = +1,

evaluated here in the equivalent ``atan2`` form, which is exact at
``Omega_ratio = 1`` and stable near ``phi = 0``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import HamiltonianSchedule, IntegratorConfig, StateVector, evolve
from .errors import ContractError, RegimeWarning
from .hyperfine import PolarizationEllipse, beta, effective_clock_hamiltonian

__all__ = [
    "CLOCK_LABELS",
    "DCProtocolSpec",
    "FringeResult",
    "p2_linearized",
    "p2_exact",
    "fringe_phase",
    "fringe_phase_arccos",
    "extract_fringe_phase",
    "ramsey_scan",
    "simulate_dc_protocol",
]

CLOCK_LABELS = ("2,0", "1,0")
TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class DCProtocolSpec:
    """Two-pulse DC protocol.

    Parameters
    ----------
    ellipse : PolarizationEllipse
        RF drive.  The field starts along ``Omega_1`` and rotates towards
        ``Omega_2`` by ``phi``.
    phi : float
        Field rotation caused by the signal (rad).
    theta2 : float
        RF phase of the second pulse (rad).
    pulse1_area, pulse2_area : float
        ``Omega_1 T`` of each pulse (rad).  ``pi/2`` is the calibrated value.
    echo : bool
        Insert a pi pulse before the field rotation.
    echo_phase : float
        RF phase of the echo pulse.
    wait : float
        Free evolution time on either side of the echo pulse.
    detuning : float
        Clock-transition detuning ``eta`` during free evolution.
    B_i, B_f : float, optional
        Field magnitudes, only used for regime checks.
    """

    ellipse: PolarizationEllipse
    phi: float = 0.0
    theta2: float = np.pi / 2
    pulse1_area: float = np.pi / 2
    pulse2_area: float = np.pi / 2
    echo: bool = False
    echo_phase: float = np.pi / 2
    wait: float = 0.0
    detuning: float = 0.0
    B_i: float | None = None
    B_f: float | None = None

    def __post_init__(self):
        if self.pulse1_area < 0 or self.pulse2_area < 0:
            raise ContractError("pulse areas must be non-negative")
        if self.wait < 0:
            raise ContractError("wait must be non-negative")

    @property
    def Omega_ratio(self) -> float:
        return self.ellipse.Omega_ratio

    def with_theta(self, theta2: float) -> "DCProtocolSpec":
        kw = {k: getattr(self, k) for k in self.__dataclass_fields__}
        kw["theta2"] = theta2
        return DCProtocolSpec(**kw)


@dataclass(frozen=True)
class FringeResult:
    """Sampled Ramsey fringe and its extracted phase.

    Attributes
    ----------
    theta_grid, P2_values : ndarray
        Scan axis and ``|2,0>`` populations.
    theta_f : float
        Fringe phase in ``[0, 2 pi)``.
    visibility : float
        ``max(P2) - min(P2)``.
    """

    theta_grid: np.ndarray
    P2_values: np.ndarray
    theta_f: float
    visibility: float


def p2_linearized(delta, B_f: float, ellipse: PolarizationEllipse, T2: float) -> float:
    """Small-signal population ``1/2 + (1/2) sin(Omega_eff T2) Omega_ratio (delta . Omega_2_hat) / B_f``.

    Assumes the first pulse is a pi/2 pulse along the major axis and the
    second pulse has ``theta = pi/2``.  ``Omega_eff`` is ``|Omega_1|``.
    """
    d = np.asarray(delta, dtype=float)
    u2 = ellipse.direction(0.5 * np.pi)
    x = ellipse.Omega_ratio * np.linalg.norm(d) / B_f
    if x > 0.2:
        warnings.warn("Omega_ratio |delta| / B_f > 0.2: outside the linear regime", RegimeWarning, stacklevel=2)
    return float(
        0.5 + 0.5 * np.sin(ellipse.Omega1_mag * T2) * ellipse.Omega_ratio * (d @ u2) / B_f
    )


def p2_exact(phi, theta, Omega_ratio):
    """Exact ``|2,0>`` population of the calibrated two-pulse sequence.

    Vectorized over all arguments.
    """
    b = beta(phi, Omega_ratio)
    num = np.cos(theta) * np.cos(phi) - Omega_ratio * np.sin(theta) * np.sin(phi)
    return 0.5 - num / (2 * b) * np.sin(0.5 * np.pi * b)


def fringe_phase(phi, Omega_ratio):
    """Fringe phase ``pi - sgn(phi) arccos(cos(phi)/beta)`` with ``sgn(0) = +1``.

    Computed as ``pi - sgn(phi) atan2(Omega_ratio |sin phi|, cos phi)``.
    Returns values in ``[0, 2 pi)``.
    """
    phi = np.asarray(phi, dtype=float)
    if np.any(np.asarray(Omega_ratio) < 0):
        raise ContractError("Omega_ratio must be non-negative")
    sgn = np.where(phi >= 0, 1.0, -1.0)
    ang = np.arctan2(Omega_ratio * np.abs(np.sin(phi)), np.cos(phi))
    return np.mod(np.pi - sgn * ang, TWO_PI)


def fringe_phase_arccos(phi, Omega_ratio):
    """Literal ``arccos`` form of :func:`fringe_phase`.

    Raises
    ------
    ValueError
        If ``|cos(phi)| / beta > 1`` beyond rounding.
    """
    phi = np.asarray(phi, dtype=float)
    b = beta(phi, Omega_ratio)
    if np.any(b <= 0):
        raise ValueError("beta vanishes")
    arg = np.cos(phi) / b
    if np.any(np.abs(arg) > 1 + 1e-12):
        raise ValueError("arccos argument outside [-1, 1]")
    sgn = np.where(phi >= 0, 1.0, -1.0)
    return np.mod(np.pi - sgn * np.arccos(np.clip(arg, -1, 1)), TWO_PI)


def extract_fringe_phase(theta_grid, values) -> float:
    """Phase of the maximum of a sampled periodic fringe.

    Argmax over the samples followed by a three-point parabola.  The grid is
    taken as uniform and periodic in ``2 pi`` when it spans a full period.
    """
    th = np.asarray(theta_grid, dtype=float)
    y = np.asarray(values, dtype=float)
    k = int(np.argmax(y))
    n = th.size
    h = th[1] - th[0]
    periodic = abs(th[-1] + h - th[0] - TWO_PI) < 1e-9 * TWO_PI
    if periodic:
        ym, yp = y[(k - 1) % n], y[(k + 1) % n]
    elif 0 < k < n - 1:
        ym, yp = y[k - 1], y[k + 1]
    else:
        return float(np.mod(th[k], TWO_PI))
    den = ym - 2 * y[k] + yp
    shift = 0.5 * h * (ym - yp) / den if den < 0 else 0.0
    return float(np.mod(th[k] + shift, TWO_PI))


def _pulse(ellipse, b_hat, theta, area):
    """Hamiltonian and duration of a pulse of area ``area`` along the major axis."""
    p = effective_clock_hamiltonian(ellipse.with_theta(theta), b_hat)
    return p.matrix(), area / ellipse.Omega1_mag


def simulate_dc_protocol(spec: DCProtocolSpec, integrator: IntegratorConfig | None = None) -> float:
    """Integrate the pulse sequence and return ``|<2,0|psi>|^2``.

    Every pulse and wait is integrated with :func:`~clockmag.dynamics.evolve`
    starting from ``|2,0>``.  The field rotation itself is a change of the
    quantization direction and does not act on the clock pair.
    """
    integrator = integrator or IntegratorConfig(64)
    e = spec.ellipse
    b0 = e.direction(0.0)
    b1 = e.direction(spec.phi)
    segments = [_pulse(e, b0, 0.0, spec.pulse1_area)]
    if spec.echo:
        free = 0.5 * spec.detuning * np.diag([1.0, -1.0]).astype(complex)
        if spec.wait > 0:
            segments.append((free, spec.wait))
        segments.append(_pulse(e, b0, spec.echo_phase, np.pi))
        if spec.wait > 0:
            segments.append((free, spec.wait))
    segments.append(_pulse(e, b1, spec.theta2, spec.pulse2_area))

    psi = StateVector.basis(0, 2, CLOCK_LABELS)
    t = 0.0
    for H, dur in segments:
        sched = HamiltonianSchedule.constant(H, dur, t0=t)
        psi = evolve(psi, sched, integrator)
        t += dur
    return psi.population("2,0")


def ramsey_scan(spec: DCProtocolSpec, theta_grid, simulate: bool = False, integrator=None) -> FringeResult:
    """Scan the second-pulse phase and extract the fringe phase.

    Parameters
    ----------
    spec : DCProtocolSpec
        ``theta2`` is ignored.
    theta_grid : array_like
        At least 8 phases.
    simulate : bool
        Use :func:`simulate_dc_protocol` instead of :func:`p2_exact`.
        The closed form requires calibrated pi/2 pulses and is only exact
        without waits or detuning.
    """
    th = np.asarray(theta_grid, dtype=float)
    if th.size == 0:
        raise ContractError("empty theta grid")
    if th.size < 8:
        raise ContractError("theta grid needs at least 8 points")
    if simulate:
        vals = np.array([simulate_dc_protocol(spec.with_theta(x), integrator) for x in th])
    else:
        if not (np.isclose(spec.pulse1_area, np.pi / 2) and np.isclose(spec.pulse2_area, np.pi / 2)):
            raise ContractError("closed form needs pi/2 pulses; use simulate=True")
        # the ideal echo is a no-op on the state after the first pulse
        vals = p2_exact(spec.phi, th, spec.Omega_ratio)
    return FringeResult(th, vals, extract_fringe_phase(th, vals), float(vals.max() - vals.min()))
