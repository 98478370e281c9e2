"""
Time-step Schrödinger integration for small Hilbert spaces.

Natural units are used throughout (hbar = 1), so Hamiltonians carry angular
frequency units and ``exp(-1j * H * dt)`` is the step propagator.

The default scheme is the midpoint exponential: the Hamiltonian is sampled at
the centre of every step and exponentiated exactly.  Two-level blocks use the
closed-form Pauli exponential, larger blocks a Hermitian eigendecomposition.
Step propagators are multiplied in a fixed pairwise tree, which keeps runs
bit-reproducible and lets very long schedules run vectorized.

Functions
---------
:func:`unitary_of_step`
    Exact exponential ``exp(-i H dt)`` of one or many Hermitian matrices.
:func:`propagator`
    Full propagator of a :class:`HamiltonianSchedule`.
:func:`evolve`
    Evolve a :class:`StateVector` through a schedule.
:func:`dyson_first_order`
    Leading-order Dyson term ``1 - i int H dt``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ContractError, ConvergenceError

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "IDENTITY2",
    "StateVector",
    "HamiltonianSchedule",
    "IntegratorConfig",
    "check_hermitian",
    "unitary_of_step",
    "propagator",
    "evolve",
    "dyson_first_order",
    "pauli_decompose",
]

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10

# steps are multiplied in blocks of this many to bound memory
_CHUNK = 1 << 15


@dataclass(frozen=True)
class StateVector:
    """Normalized state over a labelled basis.

    Parameters
    ----------
    amplitudes : array_like of complex
        Amplitudes, length at least 2.
    labels : sequence, optional
        Opaque basis labels, defaults to ``0..N-1``.
    """

    amplitudes: np.ndarray
    labels: tuple = field(default=())

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if a.size < 2:
            raise ContractError("a state needs at least two amplitudes")
        if not np.all(np.isfinite(a)):
            raise ContractError("non-finite amplitude")
        norm = np.vdot(a, a).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractError(f"state is not normalized (norm^2 = {norm!r})")
        labels = tuple(self.labels) if len(self.labels) else tuple(range(a.size))
        if len(labels) != a.size:
            raise ContractError("label count does not match amplitude count")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def basis(cls, index: int, dim: int, labels: Sequence = ()) -> "StateVector":
        """Computational basis state ``|index>`` in ``dim`` dimensions."""
        a = np.zeros(dim, dtype=complex)
        a[index] = 1.0
        return cls(a, tuple(labels))

    @classmethod
    def normalized(cls, amplitudes, labels: Sequence = ()) -> "StateVector":
        """Build a state after dividing ``amplitudes`` by their norm."""
        a = np.asarray(amplitudes, dtype=complex)
        return cls(a / np.linalg.norm(a), tuple(labels))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def population(self, label) -> float:
        """Population of the basis state carrying ``label``."""
        return float(self.populations[self.labels.index(label)])

    def overlap(self, other) -> complex:
        """``<self|other>`` for another state or a raw amplitude array."""
        b = other.amplitudes if isinstance(other, StateVector) else np.asarray(other)
        return complex(np.vdot(self.amplitudes, b))


@dataclass(frozen=True)
class HamiltonianSchedule:
    """Time-dependent Hamiltonian on ``[t0, t1]``.

    Parameters
    ----------
    evaluator : callable
        Maps a 1-D array of times of length ``m`` to an array of shape
        ``(m, N, N)``.  It must be vectorized over time.
    t0, t1 : float
        Domain of the schedule.
    dim : int
        Hilbert-space dimension ``N``.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    t0: float
    t1: float
    dim: int

    def __post_init__(self):
        if not (np.isfinite(self.t0) and np.isfinite(self.t1)):
            raise ContractError("schedule bounds must be finite")
        if self.t1 < self.t0:
            raise ContractError("schedule must satisfy t0 <= t1")

    @classmethod
    def constant(cls, H, duration: float, t0: float = 0.0) -> "HamiltonianSchedule":
        """Time-independent schedule ``H`` lasting ``duration``."""
        H = np.array(H, dtype=complex)
        check_hermitian(H)
        n = H.shape[-1]
        return cls(lambda t: np.broadcast_to(H, (np.size(t), n, n)), t0, t0 + duration, n)

    @classmethod
    def from_pauli(cls, coeffs: Callable, t0: float, t1: float) -> "HamiltonianSchedule":
        """Two-level schedule from ``coeffs(t) -> (h0, hx, hy, hz)``."""

        def ev(t):
            h0, hx, hy, hz = (np.broadcast_to(c, np.shape(t)) for c in coeffs(t))
            H = np.empty(np.shape(t) + (2, 2), dtype=complex)
            H[..., 0, 0] = h0 + hz
            H[..., 1, 1] = h0 - hz
            H[..., 0, 1] = hx - 1j * hy
            H[..., 1, 0] = hx + 1j * hy
            return H

        return cls(ev, t0, t1, 2)

    @property
    def duration(self) -> float:
        return self.t1 - self.t0

    def __call__(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        H = np.asarray(self.evaluator(t), dtype=complex)
        if H.shape != t.shape + (self.dim, self.dim):
            raise ContractError(
                f"evaluator returned shape {H.shape}, expected {t.shape + (self.dim, self.dim)}"
            )
        return H


@dataclass(frozen=True)
class IntegratorConfig:
    """Settings for :func:`evolve` and :func:`propagator`.

    Parameters
    ----------
    step_count : int
        Number of equal time steps.
    scheme : {"midpoint", "rk4"}
        ``"midpoint"`` exponentiates ``H(t + dt/2)`` per step.  ``"rk4"`` is
        classic fixed-step Runge-Kutta on the amplitudes.
    norm_renormalize : bool
        Divide the final state by its norm.
    check_convergence : bool
        Repeat the run with twice the steps and raise
        :class:`~clockmag.errors.ConvergenceError` if any population moves by
        more than ``convergence_tol``.
    convergence_tol : float
        Tolerance for the refinement check.
    """

    step_count: int = 1000
    scheme: str = "midpoint"
    norm_renormalize: bool = False
    check_convergence: bool = False
    convergence_tol: float = 1e-6

    def __post_init__(self):
        if int(self.step_count) != self.step_count or self.step_count < 1:
            raise ContractError("step_count must be a positive integer")
        if self.scheme not in ("midpoint", "rk4"):
            raise ContractError(f"unknown scheme {self.scheme!r}")
        if not self.convergence_tol > 0:
            raise ContractError("convergence_tol must be positive")

    def doubled(self) -> "IntegratorConfig":
        return IntegratorConfig(
            2 * self.step_count, self.scheme, self.norm_renormalize, False, self.convergence_tol
        )


def check_hermitian(H, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``H`` as a complex array after checking it is finite and Hermitian.

    Works on a single matrix or a stack of matrices.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim < 2 or H.shape[-1] != H.shape[-2]:
        raise ContractError(f"expected square matrices, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise ContractError("Hamiltonian has non-finite entries")
    dev = np.max(np.abs(H - np.conj(np.swapaxes(H, -1, -2))), initial=0.0)
    scale = max(1.0, float(np.max(np.abs(H), initial=0.0)))
    if dev > tol * scale:
        raise ContractError(f"Hamiltonian is not Hermitian (deviation {dev:.3e})")
    return H


def pauli_decompose(H) -> tuple:
    """Coefficients ``(h0, hx, hy, hz)`` with ``H = h0 I + h . sigma``."""
    H = np.asarray(H, dtype=complex)
    h0 = 0.5 * (H[..., 0, 0] + H[..., 1, 1]).real
    hz = 0.5 * (H[..., 0, 0] - H[..., 1, 1]).real
    hx = 0.5 * (H[..., 1, 0] + H[..., 0, 1]).real
    hy = 0.5 * (H[..., 1, 0] - H[..., 0, 1]).imag
    return h0, hx, hy, hz


def _expm_pauli(H, dt):
    h0, hx, hy, hz = pauli_decompose(H)
    n = np.sqrt(hx**2 + hy**2 + hz**2)
    c = np.cos(n * dt)
    # sin(n dt)/n with the n -> 0 limit
    s = np.where(n > 0, np.sin(n * dt) / np.where(n > 0, n, 1.0), dt)
    ph = np.exp(-1j * h0 * dt)
    U = np.empty(np.shape(h0) + (2, 2), dtype=complex)
    U[..., 0, 0] = ph * (c - 1j * s * hz)
    U[..., 1, 1] = ph * (c + 1j * s * hz)
    U[..., 0, 1] = ph * (-1j * s * (hx - 1j * hy))
    U[..., 1, 0] = ph * (-1j * s * (hx + 1j * hy))
    return U


def _expm_eigh(H, dt):
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w * dt)[..., None, :]) @ np.conj(np.swapaxes(V, -1, -2))


def unitary_of_step(H, dt: float) -> np.ndarray:
    """Exact propagator ``exp(-i H dt)``.

    Parameters
    ----------
    H : array_like, shape (..., N, N)
        Hermitian matrix or stack of matrices.
    dt : float
        Time step.

    Returns
    -------
    ndarray, shape (..., N, N)
        Unitary propagator(s).
    """
    if not np.isfinite(dt):
        raise ContractError("dt must be finite")
    H = check_hermitian(H)
    if H.shape[-1] == 2:
        return _expm_pauli(H, dt)
    return _expm_eigh(H, dt)


def _tree_product(U):
    """Ordered product ``U[-1] @ ... @ U[0]`` by pairwise reduction."""
    n = U.shape[-1]
    eye = np.eye(n, dtype=complex)[None]
    while U.shape[0] > 1:
        if U.shape[0] % 2:
            U = np.concatenate([U, eye], axis=0)
        U = U[1::2] @ U[0::2]
    return U[0]


def _midpoint_propagator(schedule, steps):
    dt = schedule.duration / steps
    U = np.eye(schedule.dim, dtype=complex)
    for start in range(0, steps, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, steps))
        t = schedule.t0 + (k + 0.5) * dt
        U = _tree_product(unitary_of_step(schedule(t), dt)) @ U
    return U


def _rk4_state(psi, schedule, steps):
    dt = schedule.duration / steps
    t = schedule.t0 + dt * np.arange(steps)
    H0 = schedule(t)
    Hm = schedule(t + 0.5 * dt)
    H1 = schedule(t + dt)
    for H in (H0, Hm, H1):
        check_hermitian(H)
    for k in range(steps):
        k1 = -1j * (H0[k] @ psi)
        k2 = -1j * (Hm[k] @ (psi + 0.5 * dt * k1))
        k3 = -1j * (Hm[k] @ (psi + 0.5 * dt * k2))
        k4 = -1j * (H1[k] @ (psi + dt * k3))
        psi = psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def propagator(schedule: HamiltonianSchedule, config: IntegratorConfig | None = None) -> np.ndarray:
    """Propagator of ``schedule`` with the midpoint-exponential scheme.

    Only the midpoint scheme yields a unitary; asking for ``"rk4"`` raises.
    """
    config = config or IntegratorConfig()
    if config.scheme != "midpoint":
        raise ContractError("propagator() requires the midpoint scheme")
    if schedule.duration == 0:
        return np.eye(schedule.dim, dtype=complex)
    return _midpoint_propagator(schedule, int(config.step_count))


def _run(psi, schedule, config):
    if schedule.duration == 0:
        return psi.copy()
    if config.scheme == "midpoint":
        return _midpoint_propagator(schedule, int(config.step_count)) @ psi
    return _rk4_state(psi, schedule, int(config.step_count))


def evolve(
    state: StateVector, schedule: HamiltonianSchedule, config: IntegratorConfig | None = None
) -> StateVector:
    """Integrate the Schrödinger equation from ``schedule.t0`` to ``schedule.t1``.

    Parameters
    ----------
    state : StateVector
        Initial state.
    schedule : HamiltonianSchedule
        Hamiltonian of matching dimension.
    config : IntegratorConfig, optional
        Integrator settings.

    Returns
    -------
    StateVector
        Final state with the input labels.

    Raises
    ------
    ContractError
        On dimension mismatch or a non-Hermitian/non-finite Hamiltonian.
    ConvergenceError
        If ``config.check_convergence`` is set and the doubled run disagrees.
    """
    config = config or IntegratorConfig()
    if state.dim != schedule.dim:
        raise ContractError(f"state dimension {state.dim} != schedule dimension {schedule.dim}")
    psi = _run(state.amplitudes, schedule, config)
    if config.check_convergence:
        fine = _run(state.amplitudes, schedule, config.doubled())
        dev = float(np.max(np.abs(np.abs(fine) ** 2 - np.abs(psi) ** 2)))
        if dev > config.convergence_tol:
            raise ConvergenceError(
                f"populations moved by {dev:.3e} when doubling step_count={config.step_count}"
            )
    norm = np.linalg.norm(psi)
    if config.norm_renormalize:
        psi = psi / norm
    elif abs(norm**2 - 1) > 1e-8:
        raise ConvergenceError(f"norm drifted to {norm**2:.12f}; increase step_count")
    return StateVector(psi, state.labels)


def dyson_first_order(
    schedule: HamiltonianSchedule, t0: float, t1: float, quad_points: int = 64, panels: int = 1
) -> np.ndarray:
    """Leading-order Dyson term ``1 - i int_{t0}^{t1} H(t) dt``.

    The integral uses composite Gauss-Legendre quadrature with ``quad_points``
    nodes on each of ``panels`` equal sub-intervals.
    """
    if quad_points < 2:
        raise ContractError("quad_points must be at least 2")
    if t1 < t0:
        raise ContractError("dyson_first_order requires t0 <= t1")
    x, w = np.polynomial.legendre.leggauss(int(quad_points))
    edges = np.linspace(t0, t1, int(panels) + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    integral = np.tensordot(wt, schedule(t), axes=(0, 0))
    return np.eye(schedule.dim, dtype=complex) - 1j * integral
