"""
Hyperfine ground manifold (I = 3/2, J = 1/2) and its m_F = 0 clock pair.

The full lab Hamiltonian is

    H = (A/2)(I.J + 1/4) + B.(c_I I + c_J J) + Re(Omega e^{i w t}).(c_I I + c_J J)

with ``c_I = g_I mu_N`` and ``c_J = g_J mu_B``.  The hyperfine term is shifted
so that the F = 2 and F = 1 manifolds sit at ``+A/2`` and ``-A/2``.

Restricted to ``{|2,0>, |1,0>}`` (ordered so that ``tau_z = +1`` on
``|2,0>``) a field along the quantization axis only mixes the pair, with
coupling ``mu B / 2`` where ``mu = g_I mu_N - g_J mu_B``.  After the rotating
wave approximation an elliptical drive ``Omega = e^{i theta}(Omega_1 + i
Omega_2)`` acts through its projection on the field direction ``b``:

    H_clk = (eta/2) tau_z + (Omega_eff/2)(cos xi tau_x + sin xi tau_y),
    Omega_eff = |Omega . b|,   xi = theta + atan2(Omega_2 . b, Omega_1 . b).

Angular frequencies are in rad/s and fields in gauss when the ⁸⁷Rb constants
are used.  Natural-unit toy constants work equally well.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import constants as sc

from .dynamics import (
    IDENTITY2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    HamiltonianSchedule,
    IntegratorConfig,
    propagator,
)
from .errors import ContractError

__all__ = [
    "HyperfineConstants",
    "PolarizationEllipse",
    "ClockHamiltonianParams",
    "spin_matrices",
    "hf_basis",
    "HF_LABELS",
    "full_hamiltonian_lab",
    "eigenstates_by_label",
    "rwa_hamiltonian",
    "clock_hamiltonian_lab",
    "simulate_clock_lab",
    "effective_clock_hamiltonian",
    "beta",
    "rabi_probability",
    "rabi_population",
]

TWO_PI = 2 * np.pi
# ⁸⁷Rb ground state (Steck, "Rubidium 87 D Line Data")
RB87_HYPERFINE_HZ = 6.834682610904290e9
RB87_G_J = 2.00233113
RB87_G_I_BOHR = -0.0009951414

HF_LABELS = ((2, 2), (2, 1), (2, 0), (2, -1), (2, -2), (1, 1), (1, 0), (1, -1))


@dataclass(frozen=True)
class HyperfineConstants:
    """Hyperfine splitting and magnetic couplings.

    Parameters
    ----------
    A_HF : float
        Hyperfine splitting (angular frequency).
    g_I, g_J : float
        Nuclear and electronic g-factors, ``g_I`` in units of ``mu_N``.
    mu_N, mu_B : float
        Nuclear and Bohr magnetons as angular frequency per unit field.
    """

    A_HF: float
    g_I: float
    g_J: float
    mu_N: float
    mu_B: float

    def __post_init__(self):
        if not self.A_HF > 0:
            raise ContractError("A_HF must be positive")
        if self.mu_clock == 0:
            raise ContractError("clock coupling mu = g_I mu_N - g_J mu_B vanishes")

    @classmethod
    def rb87(cls) -> "HyperfineConstants":
        """⁸⁷Rb ground state, rad/s and gauss."""
        mu_B = TWO_PI * sc.physical_constants["Bohr magneton in Hz/T"][0] * 1e-4
        mu_N = TWO_PI * sc.physical_constants["nuclear magneton in MHz/T"][0] * 1e6 * 1e-4
        g_I = RB87_G_I_BOHR * mu_B / mu_N
        return cls(TWO_PI * RB87_HYPERFINE_HZ, g_I, RB87_G_J, mu_N, mu_B)

    @property
    def c_I(self) -> float:
        return self.g_I * self.mu_N

    @property
    def c_J(self) -> float:
        return self.g_J * self.mu_B

    @property
    def mu_clock(self) -> float:
        return self.g_I * self.mu_N - self.g_J * self.mu_B


@dataclass(frozen=True)
class PolarizationEllipse:
    """Elliptical RF drive ``Omega = e^{i theta}(Omega_1 + i Omega_2)``.

    ``Omega_1`` and ``Omega_2`` are the orthogonal major and minor axes.
    """

    Omega1: tuple
    Omega2: tuple
    theta: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.Omega1, dtype=float)
        b = np.asarray(self.Omega2, dtype=float)
        if a.shape != (3,) or b.shape != (3,):
            raise ContractError("ellipse axes must be 3-vectors")
        if abs(a @ b) > 1e-12 * max(1.0, np.linalg.norm(a) * np.linalg.norm(b)):
            raise ContractError("ellipse axes must be orthogonal")
        if not np.linalg.norm(a) > 0:
            raise ContractError("major axis must be nonzero")
        object.__setattr__(self, "Omega1", tuple(a))
        object.__setattr__(self, "Omega2", tuple(b))

    @classmethod
    def in_plane(
        cls, Omega1_mag: float, Omega_ratio: float, theta: float = 0.0, major=(0, 0, 1), minor=(1, 0, 0)
    ) -> "PolarizationEllipse":
        """Ellipse with axis lengths ``Omega1_mag`` and ``Omega_ratio * Omega1_mag``."""
        u = np.asarray(major, dtype=float)
        v = np.asarray(minor, dtype=float)
        u = u / np.linalg.norm(u)
        v = v / np.linalg.norm(v)
        return cls(tuple(Omega1_mag * u), tuple(Omega_ratio * Omega1_mag * v), theta)

    @property
    def Omega1_mag(self) -> float:
        return float(np.linalg.norm(self.Omega1))

    @property
    def Omega2_mag(self) -> float:
        return float(np.linalg.norm(self.Omega2))

    @property
    def Omega_ratio(self) -> float:
        return self.Omega2_mag / self.Omega1_mag

    @property
    def complex_vector(self) -> np.ndarray:
        return np.exp(1j * self.theta) * (np.asarray(self.Omega1) + 1j * np.asarray(self.Omega2))

    def direction(self, phi: float) -> np.ndarray:
        """Unit vector in the ellipse plane at angle ``phi`` from ``Omega_1``."""
        u = np.asarray(self.Omega1) / self.Omega1_mag
        if self.Omega2_mag > 0:
            v = np.asarray(self.Omega2) / self.Omega2_mag
        else:
            # any direction orthogonal to the major axis
            trial = np.eye(3)[np.argmin(np.abs(u))]
            v = trial - (trial @ u) * u
            v /= np.linalg.norm(v)
        return np.cos(phi) * u + np.sin(phi) * v

    def with_theta(self, theta: float) -> "PolarizationEllipse":
        return PolarizationEllipse(self.Omega1, self.Omega2, theta)


@dataclass(frozen=True)
class ClockHamiltonianParams:
    """Rotating-frame clock Hamiltonian parameters.

    ``degenerate`` is set when the drive has no component along the field, in
    which case ``xi`` falls back to the RF phase.
    """

    Omega_eff: float
    xi: float
    eta: float = 0.0
    degenerate: bool = False

    def __post_init__(self):
        if self.Omega_eff < 0:
            raise ContractError("Omega_eff must be non-negative")

    def matrix(self) -> np.ndarray:
        """``(eta/2) tau_z + (Omega_eff/2)(cos xi tau_x + sin xi tau_y)``."""
        return 0.5 * self.eta * SIGMA_Z + 0.5 * self.Omega_eff * (
            np.cos(self.xi) * SIGMA_X + np.sin(self.xi) * SIGMA_Y
        )


def spin_matrices(j: float) -> tuple:
    """``(jx, jy, jz)`` for spin ``j`` in the ``m = j, ..., -j`` basis."""
    m = np.arange(j, -j - 1, -1)
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(complex)
    jm = jp.conj().T
    return 0.5 * (jp + jm), -0.5j * (jp - jm), np.diag(m).astype(complex)


@lru_cache(maxsize=None)
def _operators():
    I = spin_matrices(1.5)
    J = spin_matrices(0.5)
    e4, e2 = np.eye(4), np.eye(2)
    Ik = tuple(np.kron(a, e2) for a in I)
    Jk = tuple(np.kron(e4, b) for b in J)
    return Ik, Jk


@lru_cache(maxsize=None)
def hf_basis() -> np.ndarray:
    """Columns ``|F, m_F>`` in the ``|m_I> (x) |m_J>`` product basis.

    Ordered as :data:`HF_LABELS`.  States are generated by lowering from the
    stretched states, which fixes Condon-Shortley phases.
    """
    Ik, Jk = _operators()
    Fm = (Ik[0] + Jk[0]) - 1j * (Ik[1] + Jk[1])
    cols = []
    top2 = np.zeros(8, dtype=complex)
    top2[0] = 1.0  # m_I = 3/2, m_J = 1/2
    v = top2
    for m in range(2, -3, -1):
        cols.append(v / np.linalg.norm(v))
        v = Fm @ cols[-1]
    # |1,1>: orthogonal to |2,1> in the m_F = 1 space, CS phase on |3/2,-1/2>
    a, b = 1, 2  # |3/2,-1/2>, |1/2,1/2>
    s21 = cols[1]
    v = np.zeros(8, dtype=complex)
    v[a], v[b] = -s21[b].conj(), s21[a].conj()
    if v[a].real < 0:
        v = -v
    for m in range(1, -2, -1):
        cols.append(v / np.linalg.norm(v))
        v = Fm @ cols[-1]
    out = np.column_stack(cols)
    out.setflags(write=False)
    return out


def _coupling_ops(constants):
    Ik, Jk = _operators()
    return tuple(constants.c_I * a + constants.c_J * b for a, b in zip(Ik, Jk))


def full_hamiltonian_lab(
    constants: HyperfineConstants,
    B_vec,
    rf: PolarizationEllipse | None = None,
    t: float = 0.0,
    omega_rf: float = 0.0,
) -> np.ndarray:
    """8x8 lab Hamiltonian in the ``|m_I> (x) |m_J>`` product basis.

    Parameters
    ----------
    constants : HyperfineConstants
    B_vec : array_like, shape (3,)
        Static field.
    rf : PolarizationEllipse, optional
        RF field amplitudes (same units as ``B_vec``); the field is
        ``Re(Omega e^{i omega_rf t})``.
    t, omega_rf : float
        Time and RF angular frequency.
    """
    Ik, Jk = _operators()
    IJ = sum(a @ b for a, b in zip(Ik, Jk))
    H = 0.5 * constants.A_HF * (IJ + 0.25 * np.eye(8))
    M = _coupling_ops(constants)
    B = np.asarray(B_vec, dtype=float)
    H = H + sum(b * m for b, m in zip(B, M))
    if rf is not None:
        field = np.real(rf.complex_vector * np.exp(1j * omega_rf * t))
        H = H + sum(f * m for f, m in zip(field, M))
    return H


def eigenstates_by_label(constants: HyperfineConstants, B: float) -> tuple:
    """Energies and eigenvectors at field ``B z`` labelled by adiabatic ``|F, m_F>``.

    Returns
    -------
    energies : ndarray, shape (8,)
    vectors : ndarray, shape (8, 8)
        Columns ordered as :data:`HF_LABELS`, phases aligned with
        :func:`hf_basis`.
    """
    H = full_hamiltonian_lab(constants, [0.0, 0.0, B])
    w, V = np.linalg.eigh(H)
    basis = hf_basis()
    ov = np.abs(basis.conj().T @ V) ** 2
    energies = np.empty(8)
    vecs = np.empty((8, 8), dtype=complex)
    for k in range(8):
        j = int(np.argmax(ov[k]))
        v = V[:, j]
        ph = np.vdot(basis[:, k], v)
        vecs[:, k] = v * np.conj(ph) / abs(ph)
        energies[k] = w[j]
        ov[:, j] = -1.0
    return energies, vecs


def rwa_hamiltonian(
    constants: HyperfineConstants, B: float, rf: PolarizationEllipse, omega_rf: float
) -> np.ndarray:
    """8x8 rotating-wave Hamiltonian in the field eigenbasis (``HF_LABELS`` order).

    The F = 2 states are moved into the frame rotating at ``omega_rf``.
    Terms oscillating at ``omega_rf`` or faster are dropped, which keeps every
    F = 1 to F = 2 coupling including the non-clock ones.
    """
    E, V = eigenstates_by_label(constants, B)
    M = _coupling_ops(constants)
    W = np.conj(rf.complex_vector)
    Mw = sum(w * (V.conj().T @ m @ V) for w, m in zip(W, M))
    upper = np.array([f == 2 for f, _ in HF_LABELS])
    H = np.diag(E - omega_rf * upper).astype(complex)
    cross = np.outer(upper, ~upper)
    H[cross] = 0.5 * Mw[cross]
    H = np.triu(H) + np.triu(H, 1).conj().T
    return H


def clock_hamiltonian_lab(
    constants: HyperfineConstants, B: float, Omega_z: complex, omega_rf: float, t: float
) -> np.ndarray:
    """Clock-pair lab Hamiltonian.

    ``(A/2) tau_z + (1/2)(mu B + Omega_z e^{i w t} + c.c.) tau_x`` with
    ``|2,0>`` first.
    """
    drive = 0.5 * (constants.mu_clock * B + 2.0 * np.real(Omega_z * np.exp(1j * omega_rf * t)))
    return 0.5 * constants.A_HF * SIGMA_Z + drive * SIGMA_X


def simulate_clock_lab(
    constants: HyperfineConstants,
    B: float,
    Omega_z: complex,
    omega_rf: float,
    duration: float,
    psi0,
    steps_per_period: int = 50,
) -> np.ndarray:
    """Integrate :func:`clock_hamiltonian_lab` and return the lab-frame state.

    The static ``(A/2) tau_z`` part is removed exactly by working in its
    interaction frame, so the step size only has to resolve the sum and
    difference frequencies of the drive.
    """
    A = constants.A_HF
    static = 0.5 * constants.mu_clock * B

    def coeffs(t):
        c = static + np.real(Omega_z * np.exp(1j * omega_rf * t))
        # e^{i A t tau_z/2} tau_x e^{-i A t tau_z/2} = cos(At) tau_x - sin(At) tau_y
        return 0.0, c * np.cos(A * t), -c * np.sin(A * t), 0.0

    fastest = A + abs(omega_rf)
    steps = max(1, int(np.ceil(duration * fastest / (2 * np.pi) * steps_per_period)))
    U = propagator(HamiltonianSchedule.from_pauli(coeffs, 0.0, duration), IntegratorConfig(steps))
    psi = U @ np.asarray(psi0, dtype=complex)
    frame = np.array([np.exp(-0.5j * A * duration), np.exp(0.5j * A * duration)])
    return frame * psi


def effective_clock_hamiltonian(
    ellipse: PolarizationEllipse, b_hat, eta: float = 0.0
) -> ClockHamiltonianParams:
    """Rotating-frame clock Hamiltonian for the drive projected on ``b_hat``."""
    b = np.asarray(b_hat, dtype=float)
    if abs(np.linalg.norm(b) - 1.0) > 1e-12:
        raise ContractError("b_hat must have unit norm")
    p1 = float(np.asarray(ellipse.Omega1) @ b)
    p2 = float(np.asarray(ellipse.Omega2) @ b)
    amp = float(np.hypot(p1, p2))
    if amp == 0.0:
        return ClockHamiltonianParams(0.0, ellipse.theta, eta, degenerate=True)
    return ClockHamiltonianParams(amp, ellipse.theta + np.arctan2(p2, p1), eta)


def beta(phi, Omega_ratio):
    """Drive reduction ``sqrt(cos^2 phi + Omega_ratio^2 sin^2 phi)``."""
    return np.sqrt(np.cos(phi) ** 2 + (Omega_ratio * np.sin(phi)) ** 2)


def rabi_probability(Omega1_mag, T, phi, Omega_ratio):
    """``sin^2(Omega_1 T beta / 2)``.

    This is the population transferred between the clock states by a single
    resonant pulse, i.e. the ``|2,0>`` population for a start in ``|1,0>``.
    See :func:`rabi_population` for an explicit accessor.
    """
    T = np.asarray(T, dtype=float)
    if np.any(T < 0):
        raise ContractError("T must be non-negative")
    return np.sin(0.5 * Omega1_mag * T * beta(phi, Omega_ratio)) ** 2


def rabi_population(Omega1_mag, T, phi, Omega_ratio, start: str = "1,0"):
    """Population of ``|2,0>`` after one resonant pulse from ``start``."""
    p = rabi_probability(Omega1_mag, T, phi, Omega_ratio)
    if start == "1,0":
        return p
    if start == "2,0":
        return 1.0 - p
    raise ContractError("start must be '1,0' or '2,0'")


# re-exported for the protocol modules
TAU_X, TAU_Y, TAU_Z, TAU_I = SIGMA_X, SIGMA_Y, SIGMA_Z, IDENTITY2
