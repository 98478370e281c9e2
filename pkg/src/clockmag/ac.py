"""
AC magnetometry with an amplitude-modulated clock drive.

A weak oscillating signal rotates the field by ``phi(t) = phi0 cos(omega0 t +
alpha)`` inside the polarization plane while the RF amplitude is modulated at
``omega_m``.  With the RF phase at pi/2 the clock Hamiltonian is

    H = (1/2) cos(omega_m t) (Omega_1 cos(phi) tau_y - Omega_2 sin(phi) tau_x)

(``model="geometric"``), or to linear order in ``phi``

    H = (Omega_1/2) cos(omega_m t) (tau_y - Omega_ratio phi tau_x)

(``model="linear"``).  The state starts on the ``-y`` axis, the eigenstate of
the large ``tau_y`` term, so at stroboscopic times ``t = 2 pi n / omega_m``
only the signal term survives.  To first order the result is a ``tau_x``
rotation by the filtered signal

    S_x = phi0 omega0 (sin(alpha + 2 pi n omega0/omega_m) - sin(alpha))
          / (omega0^2 - omega_m^2).

Normalization
-------------
Three prefactors ``k`` in ``P2 = 1/2 + k Omega_2 S_x`` are offered.

``"printed"`` (default)
    ``k = 2``, the commonly quoted filter with resonance value
    ``1/2 + 2 pi n phi0 Omega_2 / omega_m``.
``"consistent"``
    ``k = 1/2``, the first Dyson term of the Hamiltonian above.  It is four
    times smaller than ``"printed"``.
``"dressed"``
    ``k = 1/2`` with the window dressed by the ``tau_y`` drive,
    ``cos(omega_m t) cos(z sin(omega_m t))`` with ``z = Omega_1/omega_m``.
    This is the exact linear response of the model Hamiltonian and the one
    direct integration converges to as ``phi0 -> 0``.

``Omega_2`` is always ``Omega_ratio * Omega_1``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import jv

from .dynamics import HamiltonianSchedule, IntegratorConfig, SIGMA_X, propagator
from .errors import ContractError, ConvergenceError, RegimeWarning

__all__ = [
    "ACSignal",
    "ACDriveSpec",
    "NORMALIZATION",
    "filter_weight",
    "filter_response",
    "first_order_unitary",
    "rotation_angle",
    "unlocked_spectrometer",
    "simulate_ac",
    "ac_initial_state",
]

TWO_PI = 2 * np.pi
# prefactor k in P2 = 1/2 + k Omega_2 S_x
NORMALIZATION = {"printed": 2.0, "consistent": 0.5, "dressed": 0.5}
RESONANCE_EPS = 1e-6
LINEAR_LIMIT = np.pi / 6


@dataclass(frozen=True)
class ACSignal:
    """Oscillating field tilt ``phi0 cos(omega0 t + alpha)``.

    ``alpha`` may be ``"random"``, in which case samplers draw it uniformly
    from ``[0, 2 pi)`` with a seeded generator.
    """

    phi0: float
    omega0: float
    alpha: float | str = 0.0

    def __post_init__(self):
        if self.phi0 < 0:
            raise ContractError("phi0 must be non-negative")
        if isinstance(self.alpha, str) and self.alpha != "random":
            raise ContractError("alpha must be a number or 'random'")

    @property
    def is_random(self) -> bool:
        return isinstance(self.alpha, str)

    def with_alpha(self, alpha: float) -> "ACSignal":
        return ACSignal(self.phi0, self.omega0, alpha)


@dataclass(frozen=True)
class ACDriveSpec:
    """Modulated drive ``Omega(t) = Omega_1 cos(omega_m t)`` read out after ``n`` periods."""

    Omega1_mag: float
    Omega_ratio: float
    omega_m: float
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ContractError("n must be a positive integer")
        if not self.omega_m > 0:
            raise ContractError("omega_m must be positive")

    @property
    def Omega2_mag(self) -> float:
        return self.Omega_ratio * self.Omega1_mag

    @property
    def duration(self) -> float:
        return TWO_PI * self.n / self.omega_m

    @classmethod
    def fig7(cls, omega_m: float = 1.0, n: int = 20, Omega_ratio: float = 3.0, phi0: float = 0.005):
        """Drive with ``Omega_1 = (omega_m/n) / (3 phi0 Omega_ratio)``."""
        return cls((omega_m / n) / (3 * phi0 * Omega_ratio), Omega_ratio, omega_m, n)


def _alpha(signal):
    if signal.is_random:
        raise ContractError("a fixed alpha is required; sample it first")
    return float(signal.alpha)


def _dressing_coeffs(z: float):
    """Harmonic weights of ``cos(x) cos(z sin x) = sum_j c_j cos((2j+1) x)``."""
    if z == 0:
        return np.array([1.0])
    jmax = int(np.ceil(abs(z))) + 12
    j = np.arange(jmax + 1)
    return jv(2 * j, z) + jv(2 * j + 2, z)


def filter_weight(omega, omega_m: float, n: int, alpha=0.0, phi0: float = 1.0, dressing: float = 0.0):
    """Filtered signal ``S_x = int_0^{2 pi n/omega_m} w(t) phi(t) dt``.

    The window is ``w(t) = cos(omega_m t)`` or, with ``dressing = z``, the
    drive-dressed window ``cos(omega_m t) cos(z sin(omega_m t))`` that
    appears when the signal term is moved into the frame of the ``tau_y``
    drive (``z = Omega_1 / omega_m``).  Resonant terms use their limit when
    ``|omega - (2j+1) omega_m| < 1e-6 omega_m``.
    """
    w = np.asarray(omega, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    T = TWO_PI * n / omega_m
    g = np.sin(alpha + T * w) - np.sin(alpha)
    out = np.zeros(np.broadcast(w, alpha).shape)
    for j, c in enumerate(_dressing_coeffs(dressing)):
        Wj = (2 * j + 1) * omega_m
        near = np.abs(np.abs(w) - Wj) < RESONANCE_EPS * omega_m
        den = np.where(near, 1.0, w**2 - Wj**2)
        # L'Hopital at w = +-Wj
        out = out + c * np.where(near, 0.5 * T * np.cos(alpha), w * g / den)
    out = phi0 * out
    return out if out.ndim else float(out)


def _amplitude_weight(omega, omega_m, n, dressing=0.0):
    """``|sin(omega T/2) sum_j c_j omega/(omega^2 - W_j^2)|``, the alpha-free part of S_x."""
    w = float(omega)
    T = TWO_PI * n / omega_m
    total = 0.0
    for j, c in enumerate(_dressing_coeffs(dressing)):
        Wj = (2 * j + 1) * omega_m
        if abs(abs(w) - Wj) < RESONANCE_EPS * omega_m:
            return abs(0.25 * T * c)
        total += c * w / (w**2 - Wj**2)
    return abs(np.sin(0.5 * w * T) * total)


def _dressing_for(normalization, drive):
    return drive.Omega1_mag / drive.omega_m if normalization == "dressed" else 0.0


def _linearity_check(signal, drive, normalization):
    angle = abs(rotation_angle(signal, drive, normalization, peak=True))
    if angle > LINEAR_LIMIT * (1 + 1e-9):
        warnings.warn(
            f"maximal rotation {angle:.3f} rad exceeds pi/6: outside the linear regime",
            RegimeWarning,
            stacklevel=3,
        )


def rotation_angle(signal: ACSignal, drive: ACDriveSpec, normalization: str = "printed", peak: bool = False):
    """Angle ``a`` of the first-order unitary ``exp(i a tau_x)``.

    ``a = k Omega_2 S_x`` with ``k`` from :data:`NORMALIZATION`.  With
    ``peak=True`` the resonant value for ``alpha = 0`` is returned.
    """
    if normalization not in NORMALIZATION:
        raise ContractError(f"unknown normalization {normalization!r}")
    k = NORMALIZATION[normalization]
    z = _dressing_for(normalization, drive)
    if peak:
        S = signal.phi0 * np.pi * drive.n / drive.omega_m * _dressing_coeffs(z)[0]
    else:
        S = filter_weight(signal.omega0, drive.omega_m, drive.n, _alpha(signal), signal.phi0, z)
    return k * drive.Omega2_mag * S


def filter_response(signal: ACSignal, drive: ACDriveSpec, normalization: str = "printed", linear: bool = True):
    """Population ``1/2 + a`` after ``n`` periods, ``a`` from :func:`rotation_angle`.

    With the default ``normalization="printed"`` and ``alpha = 0`` this is
    ``1/2 + 2 phi0 Omega_2 omega0 sin(2 pi n omega0/omega_m)/(omega0^2 - omega_m^2)``
    with resonance value ``1/2 + 2 pi n phi0 Omega_2/omega_m``.  With
    ``linear=False`` the population of the first-order unitary,
    ``1/2 + sin(2a)/2``, is returned instead.  A
    :class:`~clockmag.errors.RegimeWarning` is issued when the peak rotation
    exceeds pi/6.
    """
    _linearity_check(signal, drive, normalization)
    a = rotation_angle(signal, drive, normalization)
    return 0.5 + a if linear else 0.5 + 0.5 * np.sin(2 * a)


def first_order_unitary(signal: ACSignal, drive: ACDriveSpec, normalization: str = "printed") -> np.ndarray:
    """Leading-order propagator ``exp(i a tau_x)`` at the readout time.

    Applied to :func:`ac_initial_state` it gives the ``|2,0>`` population
    ``1/2 + sin(2a)/2``, whose linearization is :func:`filter_response`.
    """
    a = rotation_angle(signal, drive, normalization)
    return np.cos(a) * np.eye(2) + 1j * np.sin(a) * SIGMA_X


def unlocked_spectrometer(
    drive: ACDriveSpec,
    signal: ACSignal,
    probabilities=None,
    samples: int | None = None,
    seed: int | None = None,
    normalization: str = "printed",
):
    """Phase-averaged filter ``sqrt(<(p - 1/2)^2>)`` over a uniform signal phase.

    Parameters
    ----------
    drive, signal : ACDriveSpec, ACSignal
        ``signal.alpha`` is ignored.
    probabilities : array_like, optional
        Measured populations, one per random phase.
    samples : int, optional
        Draw this many phases with ``numpy.random.default_rng(seed)`` and
        evaluate :func:`filter_response` at each.
    seed : int, optional
        Seed for ``samples``.

    Returns
    -------
    float
        Root-mean-square deviation.  Without data the analytic value
        ``sqrt(2) k phi0 Omega_2 |omega sin(pi n omega/omega_m) / (omega^2 - omega_m^2)|``
        is returned, which for ``k = 2`` peaks at
        ``sqrt(2) pi n Omega_2 phi0 / omega_m``.
    """
    if probabilities is not None:
        p = np.asarray(probabilities, dtype=float)
        if p.size < 2:
            raise ContractError("need at least two probabilities")
        return float(np.sqrt(np.mean((p - 0.5) ** 2)))
    if normalization not in NORMALIZATION:
        raise ContractError(f"unknown normalization {normalization!r}")
    k = NORMALIZATION[normalization]
    z = _dressing_for(normalization, drive)
    if samples is not None:
        if samples < 2:
            raise ContractError("need at least two samples")
        alphas = np.random.default_rng(seed).uniform(0.0, TWO_PI, int(samples))
        S = filter_weight(signal.omega0, drive.omega_m, drive.n, alphas, signal.phi0, z)
        p = 0.5 + k * drive.Omega2_mag * np.asarray(S)
        return float(np.sqrt(np.mean((p - 0.5) ** 2)))
    amp = _amplitude_weight(signal.omega0, drive.omega_m, drive.n, z)
    return float(np.sqrt(2) * k * signal.phi0 * drive.Omega2_mag * amp)


def ac_initial_state() -> np.ndarray:
    """``exp(-i pi/4 tau_x)|2,0>``, the state on the ``-y`` axis."""
    return np.array([1.0, -1.0j]) / np.sqrt(2)


def simulate_ac(
    signal: ACSignal,
    drive: ACDriveSpec,
    integrator: IntegratorConfig | None = None,
    model: str = "linear",
    samples_per_period: int = 1,
    theta: float = np.pi / 2,
) -> tuple:
    """Integrate the modulated-drive Hamiltonian.

    Parameters
    ----------
    signal, drive : ACSignal, ACDriveSpec
    integrator : IntegratorConfig, optional
        ``step_count`` is the total number of midpoint steps over the ``n``
        periods.  Defaults to 200 steps per period of the fastest frequency.
    model : {"linear", "geometric"}
        Hamiltonian linearized in ``phi`` or with exact ``cos``/``sin``.
    samples_per_period : int
        Readouts per modulation period.  1 gives the stroboscopic trace.
    theta : float
        RF phase of the drive.  pi/2 reproduces the expressions above.

    Returns
    -------
    times, P2 : ndarray
        Readout times ``2 pi k / (omega_m samples_per_period)`` for
        ``k = 1 .. n samples_per_period`` and the ``|2,0>`` populations.

    Raises
    ------
    ConvergenceError
        If the step size does not give 50 steps per period of
        ``max(omega0, omega_m, Omega_1)``.
    """
    if model not in ("linear", "geometric"):
        raise ContractError("model must be 'linear' or 'geometric'")
    alpha = _alpha(signal)
    wmax = max(abs(signal.omega0), drive.omega_m, drive.Omega1_mag)
    periods = drive.duration * wmax / TWO_PI
    if integrator is None:
        integrator = IntegratorConfig(int(np.ceil(200 * periods)))
    if integrator.step_count < 50 * periods:
        raise ConvergenceError(
            f"{integrator.step_count} steps give fewer than 50 per period; need {int(np.ceil(50 * periods))}"
        )
    O1, O2, wm = drive.Omega1_mag, drive.Omega2_mag, drive.omega_m
    e, s = np.cos(theta), np.sin(theta)

    def coeffs(t):
        phi = signal.phi0 * np.cos(signal.omega0 * t + alpha)
        if model == "linear":
            a1, a2 = O1 * np.ones_like(phi), O2 * phi
        else:
            a1, a2 = O1 * np.cos(phi), O2 * np.sin(phi)
        # Omega . b = e^{i theta} (a1 + i a2)
        re = e * a1 - s * a2
        im = s * a1 + e * a2
        m = 0.5 * np.cos(wm * t)
        return 0.0, m * re, m * im, 0.0

    segs = drive.n * int(samples_per_period)
    per_seg = max(1, int(np.ceil(integrator.step_count / segs)))
    edges = np.linspace(0.0, drive.duration, segs + 1)
    psi = ac_initial_state()
    out = np.empty(segs)
    for k in range(segs):
        U = propagator(HamiltonianSchedule.from_pauli(coeffs, edges[k], edges[k + 1]), IntegratorConfig(per_seg))
        psi = U @ psi
        out[k] = abs(psi[0]) ** 2
    return edges[1:], out
