"""
Two spin-1/2 toy model of geometric clock-state magnetometry.

Both spins see the quantization field ``B`` while the drive ``Omega`` acts on
spin 1 only,

    H = B . (sigma_1 + sigma_2) + Omega . sigma_1,

in natural units.  The singlet ``|S>`` and the ``m = 0`` triplet ``|T>`` form
a field-insensitive clock pair and the drive couples them through
``<S| sigma_1 . n |T(b)> = n . b``, so a pulse only acts through the
component of the drive along the field direction ``b``.

Conventions
-----------
Product basis order is ``|uu>, |ud>, |du>, |dd>`` with ``sigma_1 = sigma (x) 1``.
``|S> = (|ud> - |du>)/sqrt(2)`` and ``|T> = (|ud> + |du>)/sqrt(2)``.

A field direction in the x-z plane is labelled by its polar angle ``alpha``,
``b(alpha) = (sin alpha, 0, cos alpha)``, and the drive direction by ``chi``,
``n = (sin chi, 0, cos chi)``.  Field rotations act as ``exp(-i alpha J_y)``
with ``J_y = (sigma_1y + sigma_2y)/2``.

The pulse area ``Omega T`` is normalised so that a projected pulse with area
``a`` rotates the clock Bloch vector by ``a (n . b)``.  A pulse with
``a cos(chi) = pi/2`` is therefore a pi/2 pulse.  In terms of the Pauli-form
lab Hamiltonian above, a drive of amplitude ``Omega(t)`` has area
``2 int Omega dt``.

The field tilt ``phi`` produced by a signal ``delta`` is counted positive
when the field turns away from the drive, ``phi ~ -delta . n / B_f``.  This
is the orientation for which :func:`prob_S_closed` holds as written.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .dynamics import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    HamiltonianSchedule,
    IntegratorConfig,
    check_hermitian,
    propagator,
)
from .errors import ContractError, RegimeWarning, SingularConfigurationError

__all__ = [
    "PRODUCT_LABELS",
    "ST_LABELS",
    "SIGMA1",
    "SIGMA2",
    "J_Y",
    "TwoSpinConfig",
    "GaussianPulseReport",
    "singlet",
    "triplet",
    "singlet_triplet_basis",
    "field_rotation",
    "hamiltonian_lab",
    "adiabatic_pulse_unitary",
    "sequence_state_lab",
    "sequence_prob_S_lab",
    "static_prob_S_lab",
    "prob_S_closed",
    "prob_S_approx",
    "prob_S_static",
    "tilt_angle",
    "gaussian_pulse_check",
]

PRODUCT_LABELS = ("uu", "ud", "du", "dd")
ST_LABELS = ("uu", "S", "T", "dd")

_I2 = np.eye(2, dtype=complex)
SIGMA1 = tuple(np.kron(s, _I2) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
SIGMA2 = tuple(np.kron(_I2, s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))
J_Y = 0.5 * (SIGMA1[1] + SIGMA2[1])

_S = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
_T = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)


def _direction(angle):
    return np.array([np.sin(angle), 0.0, np.cos(angle)])


def _dot_sigma(vec, sigmas):
    return sum(float(v) * s for v, s in zip(vec, sigmas))


def field_rotation(alpha: float) -> np.ndarray:
    """Rotation ``exp(-i alpha J_y)`` taking the z axis to ``b(alpha)``."""
    w, V = np.linalg.eigh(J_Y)
    return (V * np.exp(-1j * alpha * w)) @ V.conj().T


def singlet() -> np.ndarray:
    """Singlet amplitudes in the product basis (rotation invariant)."""
    return _S.copy()


def triplet(alpha: float = 0.0) -> np.ndarray:
    """``m = 0`` triplet quantized along ``b(alpha)``."""
    return field_rotation(alpha) @ _T


def singlet_triplet_basis(alpha: float = 0.0) -> np.ndarray:
    """Unitary whose columns are ``|uu>, |S>, |T>, |dd>`` along ``b(alpha)``.

    Columns are expressed in the product basis.
    """
    R = field_rotation(alpha)
    up = np.zeros(4, dtype=complex)
    up[0] = 1.0
    dn = np.zeros(4, dtype=complex)
    dn[3] = 1.0
    return np.column_stack([R @ up, _S, R @ _T, R @ dn])


def hamiltonian_lab(B_vec, Omega_vec) -> np.ndarray:
    """Lab-frame Hamiltonian ``B . (sigma_1 + sigma_2) + Omega . sigma_1``.

    Parameters
    ----------
    B_vec, Omega_vec : array_like, shape (3,)
        Quantization field and drive in angular-frequency units.

    Returns
    -------
    ndarray, shape (4, 4)
    """
    B = np.asarray(B_vec, dtype=float)
    W = np.asarray(Omega_vec, dtype=float)
    if B.shape != (3,) or W.shape != (3,) or not (np.all(np.isfinite(B)) and np.all(np.isfinite(W))):
        raise ContractError("B_vec and Omega_vec must be finite 3-vectors")
    return _dot_sigma(B, SIGMA1) + _dot_sigma(B, SIGMA2) + _dot_sigma(W, SIGMA1)


def adiabatic_pulse_unitary(alpha: float, chi: float, pulse_area: float) -> np.ndarray:
    """Projected adiabatic pulse with the field along ``b(alpha)``.

    Returns ``exp(i (a/2) P V P)`` where ``V = cos(chi) sigma_1z + sin(chi)
    sigma_1x`` and ``P`` projects onto ``span{|S>, |T(alpha)>}``.  States
    orthogonal to the clock pair are left untouched.
    """
    if not np.isfinite(pulse_area):
        raise ContractError("pulse_area must be finite")
    s = _S
    t = triplet(alpha)
    P = np.outer(s, s.conj()) + np.outer(t, t.conj())
    V = np.cos(chi) * SIGMA1[2] + np.sin(chi) * SIGMA1[0]
    G = check_hermitian(P @ V @ P)
    w, U = np.linalg.eigh(G)
    return (U * np.exp(0.5j * pulse_area * w)) @ U.conj().T


def _pi2_area(chi):
    c = np.cos(chi)
    if abs(c) < 1e-12:
        raise SingularConfigurationError("chi = pi/2: the pi/2 pulse amplitude diverges")
    return 0.5 * np.pi / c


def sequence_state_lab(chi: float, phi: float, pulse_area: float | None = None) -> np.ndarray:
    """Final product-basis state of the lab-frame two-pulse sequence.

    Pulse at ``alpha = 0``, field rotation by ``chi + pi/2 + phi``, second
    identical pulse, starting from ``|S>``.
    """
    area = _pi2_area(chi) if pulse_area is None else float(pulse_area)
    if abs(area * np.cos(chi) - 0.5 * np.pi) > 1e-9:
        raise ContractError("pulse_area * cos(chi) must equal pi/2")
    a2 = chi + 0.5 * np.pi + phi
    psi = adiabatic_pulse_unitary(0.0, chi, area) @ _S
    psi = field_rotation(a2) @ psi
    return adiabatic_pulse_unitary(a2, chi, area) @ psi


def sequence_prob_S_lab(chi: float, phi: float, pulse_area: float | None = None) -> float:
    """Singlet probability after the lab-frame sequence (product of unitaries)."""
    psi = sequence_state_lab(chi, phi, pulse_area)
    return float(abs(np.vdot(_S, psi)) ** 2)


def static_prob_S_lab(chi: float, phi: float) -> float:
    """Lab-frame product for the static variant with pi/4 pulses.

    The field keeps its z orientation and the signal tilts it by ``phi``
    towards the drive before the second pulse.
    """
    area = 0.5 * _pi2_area(chi)
    psi = adiabatic_pulse_unitary(0.0, chi, area) @ _S
    psi = field_rotation(phi) @ psi
    psi = adiabatic_pulse_unitary(phi, chi, area) @ psi
    return float(abs(np.vdot(_S, psi)) ** 2)


def _check_chi(chi):
    c = np.cos(np.asarray(chi, dtype=float))
    if np.any(np.abs(c) < 1e-12):
        raise SingularConfigurationError("chi = pi/2: the pi/2 pulse amplitude diverges")
    return c


def prob_S_closed(chi, phi):
    """Closed-form singlet probability ``sin^2(pi/4 (1 + sin(phi)/cos(chi)))``.

    Vectorized over ``chi`` and ``phi``.
    """
    c = _check_chi(chi)
    return np.sin(0.25 * np.pi * (1.0 + np.sin(phi) / c)) ** 2


def prob_S_static(chi, phi):
    """Static-field variant ``cos^2((1 + cos(chi - phi)/cos(chi)) pi/8)``.

    Here ``phi`` is the tilt towards the drive.  The slope at ``phi = 0`` is
    ``-sin(chi)/2`` times the slope of :func:`prob_S_closed`.
    """
    c = _check_chi(chi)
    return np.cos((1.0 + np.cos(np.asarray(chi) - phi) / c) * np.pi / 8) ** 2


@dataclass(frozen=True)
class TwoSpinConfig:
    """Parameters of the two-spin protocol.

    Parameters
    ----------
    B_i, B_f : float
        Field magnitude before and after the ramp.
    delta : array_like, shape (3,)
        Signal field.
    b_hat_f : array_like, shape (3,)
        Final field direction, unit norm.
    chi : float
        Drive angle from z in the x-z plane, in ``[0, pi/2)``.
    pulse_area : float, optional
        ``Omega T``; defaults to the pi/2 calibration ``pi/(2 cos chi)``.
    """

    B_i: float
    B_f: float
    delta: tuple
    b_hat_f: tuple
    chi: float
    pulse_area: float | None = None

    def __post_init__(self):
        d = np.asarray(self.delta, dtype=float)
        b = np.asarray(self.b_hat_f, dtype=float)
        if d.shape != (3,) or b.shape != (3,):
            raise ContractError("delta and b_hat_f must be 3-vectors")
        if abs(np.linalg.norm(b) - 1.0) > 1e-12:
            raise ContractError("b_hat_f must have unit norm")
        if not 0.0 <= self.chi < 0.5 * np.pi:
            raise ContractError("chi must lie in [0, pi/2)")
        object.__setattr__(self, "delta", tuple(d))
        object.__setattr__(self, "b_hat_f", tuple(b))
        if self.pulse_area is None:
            object.__setattr__(self, "pulse_area", _pi2_area(self.chi))

    @property
    def drive_direction(self) -> np.ndarray:
        return _direction(self.chi)

    def regime_ok(self) -> bool:
        """Whether ``B_i > B_f > |delta| > 0`` holds."""
        dn = np.linalg.norm(self.delta)
        return bool(self.B_i > self.B_f > dn > 0)


def tilt_angle(config: TwoSpinConfig) -> float:
    """Exact field tilt ``phi`` produced by ``delta``, away from the drive.

    Only the components of ``delta`` in the plane of ``b_hat_f`` and the
    drive direction are used.
    """
    n = config.drive_direction
    b = np.asarray(config.b_hat_f)
    d = np.asarray(config.delta)
    if abs(n @ b) > 1e-9:
        raise ContractError("tilt_angle needs b_hat_f orthogonal to the drive")
    return float(-np.arctan2(d @ n, config.B_f + d @ b))


def prob_S_approx(config: TwoSpinConfig, expand: bool = True) -> float:
    """Singlet probability in the small-signal expansion.

    With the perpendicular part ``d = delta - (delta . b) b`` of the signal,

        Pr(S) = cos^2(z.W/2) - sin(z.W) (d . W) / (2 B_f)      (expand=True)
        Pr(S) = cos^2((z + b + d/B_f) . W / 2)                 (expand=False)

    where ``W = a n`` is the pulse-area vector.  A
    :class:`~clockmag.errors.RegimeWarning` is issued when
    ``|delta|/B_f >= 0.1``.
    """
    d = np.asarray(config.delta)
    b = np.asarray(config.b_hat_f)
    if np.linalg.norm(d) / config.B_f >= 0.1:
        warnings.warn("|delta|/B_f >= 0.1: expansion outside its regime", RegimeWarning, stacklevel=2)
    W = config.pulse_area * config.drive_direction
    d_perp = d - (d @ b) * b
    if expand:
        return float(np.cos(0.5 * W[2]) ** 2 - np.sin(W[2]) * (d_perp @ W) / (2 * config.B_f))
    axis = np.array([0.0, 0.0, 1.0]) + b + d_perp / config.B_f
    return float(np.cos(0.5 * axis @ W) ** 2)


@dataclass(frozen=True)
class GaussianPulseReport:
    """Outcome of :func:`gaussian_pulse_check`.

    Attributes
    ----------
    max_mixing : float
        Largest weight of the instantaneous clock eigenvectors outside
        ``span{|S>, |T>}`` during the pulse.
    max_leakage : float
        Largest population in ``|uu> + |dd>`` along the trajectory.
    final_leakage : float
        Population in ``|uu> + |dd>`` after the pulse.
    populations : ndarray
        Final ``(uu, S, T, dd)`` populations.
    projected_populations : ndarray
        Same populations predicted by :func:`adiabatic_pulse_unitary`.
    pulse_area : float
        Area ``2 int Omega dt`` fed to the projected model.
    """

    max_mixing: float
    max_leakage: float
    final_leakage: float
    populations: np.ndarray
    projected_populations: np.ndarray
    pulse_area: float


def gaussian_pulse_check(
    chi: float,
    B: float = 1.0,
    peak: float = 0.01,
    window: float = 6.0,
    steps_per_period: int = 40,
    samples: int = 801,
) -> GaussianPulseReport:
    """Integrate a slow Gaussian drive pulse and compare with the projector model.

    The drive is ``Omega(t) = peak B exp(-t^2 / 2 tau^2)`` along ``n(chi)``
    with ``tau = 25 sqrt(2 pi) / (B cos chi)``, truncated to ``|t| <= window
    tau``, while the field stays at ``B z``.  The system starts in ``|S>``.
    """
    c = np.cos(chi)
    if abs(c) < 1e-12:
        raise SingularConfigurationError("chi = pi/2 is singular")
    tau = 25.0 * np.sqrt(2 * np.pi) / (B * c)
    n = _direction(chi)
    HB = hamiltonian_lab([0.0, 0.0, B], [0.0, 0.0, 0.0])
    Hn = _dot_sigma(n, SIGMA1)

    def H_of(t):
        amp = peak * B * np.exp(-0.5 * (t / tau) ** 2)
        return HB[None] + amp[:, None, None] * Hn[None]

    t0, t1 = -window * tau, window * tau
    # resolve the fastest free precession, |uu> vs |dd> at 4B
    steps = int(np.ceil((t1 - t0) * 4 * abs(B) / (2 * np.pi) * steps_per_period))

    # state along the trajectory, sampled at `samples` checkpoints
    edges = np.linspace(t0, t1, samples)
    per = max(1, steps // (samples - 1))
    psi = _S.copy()
    leak = [0.0]
    for a, b in zip(edges[:-1], edges[1:]):
        U = propagator(HamiltonianSchedule(H_of, a, b, 4), IntegratorConfig(per))
        psi = U @ psi
        leak.append(abs(psi[0]) ** 2 + abs(psi[3]) ** 2)

    # eigenvector mixing: the two middle eigenvectors are the dressed clock states
    w, V = np.linalg.eigh(H_of(edges))
    clock = V[..., 1:3]
    outside = np.abs(clock[:, 0, :]) ** 2 + np.abs(clock[:, 3, :]) ** 2
    max_mixing = float(np.max(outside))

    basis = singlet_triplet_basis(0.0)
    pops = np.abs(basis.conj().T @ psi) ** 2

    area = 2.0 * peak * B * tau * np.sqrt(2 * np.pi) * erf(window / np.sqrt(2))
    ref = adiabatic_pulse_unitary(0.0, chi, area) @ _S
    ref_pops = np.abs(basis.conj().T @ ref) ** 2
    return GaussianPulseReport(
        max_mixing=max_mixing,
        max_leakage=float(max(leak)),
        final_leakage=float(leak[-1]),
        populations=pops,
        projected_populations=ref_pops,
        pulse_area=float(area),
    )
