"""Model-tier Hamiltonians, collective projectors and the instantaneous frame.

Three fidelities of the same physics, all in units of 1/T with hbar = 1:

* ``effective3`` -- the 3x3 block that discriminates marked from unmarked
  atoms.  Zero diagonal; couplings sqrt(1-f)*Omega' on (g'_m, e_perp) and
  -sqrt(f)*Omega on (g'_u, e_perp).  Eigenvalues are exactly
  {0, +Lambda, -Lambda} with Lambda = sqrt((1-f)*Omega'^2 + f*Omega^2).
* ``collective5`` -- marked/unmarked collective ground and excited states
  plus the one-photon state, with cavity edges sqrt(M)*G and sqrt(N-M)*G.
  The laser couplings are Sigma' = Omega' + e^{+i*delta*t}*Omega and
  Sigma  = Omega  + e^{-i*delta*t}*Omega'; the rotating-wave switch drops
  the oscillating terms (Sigma' -> Omega', Sigma -> Omega).
* ``full_register`` -- the star of N three-level atoms sharing one cavity
  photon, dimension 2N+1; stored sparsely (three couplings per atom).

The zero eigenvector of the effective tier is the dark state
|0> = cos(theta)|g'_m,0> - sin(theta)|g'_u,0> with
tan(theta) = -sqrt((1-f)/f) * Omega'/Omega confined to (-pi/2, 0].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .core import (
    DegenerateDenominator,
    DimensionMismatch,
    InvalidCounts,
    PulsePair,
    SearchProblem,
    UndefinedAngle,
)
from .pulses import CumulativeArea

__all__ = [
    "effective_matrix",
    "collective_matrix",
    "full_register_matrix",
    "CollectiveBasis",
    "collective_projectors",
    "mixing_angle",
    "gap",
    "AdiabaticFrame",
    "FrameSample",
    "adiabatic_frame",
    "partition_correction",
    "EffectiveProvider",
    "CollectiveProvider",
    "FullRegisterProvider",
    "ExplicitProvider",
]


# ---------------------------------------------------------------------------
# Matrix builders
# ---------------------------------------------------------------------------

def effective_matrix(t: float, fraction: float, pair: PulsePair) -> np.ndarray:
    """3x3 effective Hamiltonian in the (g'_m, g'_u, e_perp) basis."""
    omega = float(pair.pump(t))
    omega_p = float(pair.stokes(t))
    a = math.sqrt(1.0 - fraction) * omega_p
    b = -math.sqrt(fraction) * omega
    return np.array([[0.0, 0.0, a],
                     [0.0, 0.0, b],
                     [a, b, 0.0]])


def _laser_couplings(t, pair: PulsePair, detuning: float, rwa: bool, t_ref: float):
    """(Sigma, Sigma') at time(s) t; phases measured from t_ref."""
    omega = pair.pump_values(t)
    omega_p = pair.stokes_values(t)
    if rwa:
        return omega, omega_p
    phase = np.exp(-1j * detuning * (np.asarray(t, dtype=float) - t_ref))
    return omega + phase * omega_p, omega_p + np.conj(phase) * omega


def collective_matrix(t: float, problem: SearchProblem, pair: PulsePair,
                      rwa: bool = True) -> np.ndarray:
    """5x5 Hamiltonian in the (g'_m, g'_u, e_m, e_u, g1) basis."""
    n, m = problem.n_atoms, problem.n_marked
    sigma, sigma_p = _laser_couplings(t, pair, problem.detuning, rwa, pair.t_start)
    g_m = math.sqrt(m) * problem.cavity_coupling
    g_u = math.sqrt(n - m) * problem.cavity_coupling
    h = np.zeros((5, 5), dtype=float if rwa else complex)
    h[0, 2] = sigma_p
    h[2, 0] = np.conj(sigma_p)
    h[1, 3] = sigma
    h[3, 1] = np.conj(sigma)
    h[2, 4] = h[4, 2] = g_m
    h[3, 4] = h[4, 3] = g_u
    return h


def full_register_matrix(t: float, problem: SearchProblem, pair: PulsePair,
                         rwa: bool = True) -> sp.csr_matrix:
    """Sparse (2N+1)x(2N+1) Hamiltonian: |g'_j> -- |e_j> rungs on a cavity star.

    Basis ordering (g'_1..N, e_1..N, g1); marked atoms are j = 1..M.
    """
    n, m = problem.n_atoms, problem.n_marked
    sigma, sigma_p = _laser_couplings(t, pair, problem.detuning, rwa, pair.t_start)
    dim = 2 * n + 1
    rows, cols, vals = [], [], []
    for j in range(n):
        coupling = sigma_p if j < m else sigma
        rows += [j, n + j]
        cols += [n + j, j]
        vals += [coupling, np.conj(coupling)]
        rows += [n + j, 2 * n]
        cols += [2 * n, n + j]
        vals += [problem.cavity_coupling, problem.cavity_coupling]
    dtype = float if rwa else complex
    return sp.csr_matrix((np.asarray(vals, dtype=dtype), (rows, cols)), shape=(dim, dim))


# ---------------------------------------------------------------------------
# Collective projectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CollectiveBasis:
    """Orthonormal collective vectors embedded in the full-register basis.

    ``complete`` is False when M = N, where the unmarked vectors do not
    exist (``g_u`` and the e_perp direction are then None).
    """

    n_atoms: int
    n_marked: int
    g_m: np.ndarray
    g_u: Optional[np.ndarray]
    e: np.ndarray
    e_perp: Optional[np.ndarray]
    g1: np.ndarray

    @property
    def complete(self) -> bool:
        return self.g_u is not None

    def vectors(self) -> list[np.ndarray]:
        out = [self.g_m, self.g_u, self.e, self.e_perp, self.g1]
        return [v for v in out if v is not None]


def collective_projectors(n_atoms: int, n_marked: int) -> CollectiveBasis:
    """Unit vectors |g'_m,0>, |g'_u,0>, |e,0>, |e_perp,0>, |g,1>.

    |e,0> = sqrt(f)|e_m,0> + sqrt(1-f)|e_u,0> is the uniform excited
    superposition the cavity couples to (with strength sqrt(N)*G);
    |e_perp,0> = sqrt(1-f)|e_m,0> - sqrt(f)|e_u,0> is its orthogonal
    complement inside the excited manifold.
    """
    if not (1 <= n_marked <= n_atoms):
        raise InvalidCounts(f"need 1 <= M <= N, got M={n_marked}, N={n_atoms}")
    n, m = n_atoms, n_marked
    f = m / n
    dim = 2 * n + 1

    def unit(indices, weights):
        v = np.zeros(dim)
        v[indices] = weights
        return v

    g_m = unit(np.arange(m), 1.0 / math.sqrt(m))
    e_m = unit(n + np.arange(m), 1.0 / math.sqrt(m))
    e_full = unit(n + np.arange(n), 1.0 / math.sqrt(n))
    g1 = unit([2 * n], 1.0)
    if m == n:
        return CollectiveBasis(n, m, g_m=g_m, g_u=None, e=e_full, e_perp=None, g1=g1)
    g_u = unit(m + np.arange(n - m), 1.0 / math.sqrt(n - m))
    e_u = unit(n + m + np.arange(n - m), 1.0 / math.sqrt(n - m))
    e_perp = math.sqrt(1.0 - f) * e_m - math.sqrt(f) * e_u
    return CollectiveBasis(n, m, g_m=g_m, g_u=g_u, e=e_full, e_perp=e_perp, g1=g1)


# ---------------------------------------------------------------------------
# Instantaneous adiabatic frame
# ---------------------------------------------------------------------------

def mixing_angle(omega, omega_p, fraction: float):
    """theta with tan(theta) = -sqrt((1-f)/f)*Omega'/Omega, confined to (-pi/2, 0]."""
    omega = np.asarray(omega, dtype=float)
    omega_p = np.asarray(omega_p, dtype=float)
    bad = (omega == 0.0) & (omega_p != 0.0)
    if np.any(bad):
        raise UndefinedAngle("mixing angle undefined where Omega = 0 but Omega' != 0")
    with np.errstate(invalid="ignore"):
        ratio = np.where(omega > 0.0, omega_p / np.where(omega > 0.0, omega, 1.0), 0.0)
    theta = -np.arctan(math.sqrt((1.0 - fraction) / fraction) * ratio)
    return float(theta) if theta.ndim == 0 else theta


def gap(omega, omega_p, fraction: float):
    """Instantaneous nonzero eigenvalue Lambda = sqrt((1-f)Omega'^2 + f Omega^2)."""
    omega = np.asarray(omega, dtype=float)
    omega_p = np.asarray(omega_p, dtype=float)
    lam = np.sqrt((1.0 - fraction) * omega_p ** 2 + fraction * omega ** 2)
    return float(lam) if lam.ndim == 0 else lam


@dataclass(frozen=True)
class FrameSample:
    """One sample of the instantaneous frame along a pulse pair."""

    theta: float
    lambda_gap: float
    tau: float
    lambda_factor: float


class AdiabaticFrame:
    """Mixing angle, gap and reparametrised time tau(t) = int Lambda ds.

    Built once per pulse pair; evaluation is vectorised.  ``lambda_factor``
    is sqrt(1 + eps^2), the dressed oscillation factor of the closed-form
    passage populations.
    """

    def __init__(self, pair: PulsePair, fraction: float, epsilon: float,
                 *, nodes_per_width: int = 4096) -> None:
        self.pair = pair
        self.fraction = float(fraction)
        self.epsilon = float(epsilon)
        self.lambda_factor = math.sqrt(1.0 + epsilon ** 2)
        self._tau = CumulativeArea(
            lambda t: gap(pair.pump_values(t), pair.stokes_values(t), fraction),
            pair.t_start, pair.t_end, nodes_per_width=nodes_per_width,
            width=getattr(pair.pump, "width", 1.0))

    def theta(self, t):
        return mixing_angle(self.pair.pump_values(t), self.pair.stokes_values(t),
                            self.fraction)

    def lambda_gap(self, t):
        return gap(self.pair.pump_values(t), self.pair.stokes_values(t), self.fraction)

    def tau(self, t):
        return self._tau.value(t)

    @property
    def tau_end(self) -> float:
        return self._tau.total

    def sample(self, t: float) -> FrameSample:
        return FrameSample(theta=float(self.theta(t)),
                           lambda_gap=float(self.lambda_gap(t)),
                           tau=float(self.tau(t)),
                           lambda_factor=self.lambda_factor)


def adiabatic_frame(t: float, fraction: float, pair: PulsePair,
                    epsilon: float) -> FrameSample:
    """Convenience single-time sample; build AdiabaticFrame for many queries."""
    return AdiabaticFrame(pair, fraction, epsilon).sample(t)


# ---------------------------------------------------------------------------
# Partitioning correction
# ---------------------------------------------------------------------------

def partition_correction(t: float, problem: SearchProblem,
                         pair: PulsePair) -> tuple[np.ndarray, float]:
    """Leading coupling-induced correction to the effective 3x3 block.

    Returns (C + C^dagger, operator 2-norm) with

        C = Lambda*sqrt(1-f)*(Omega^2 - Omega'^2)*cos(theta)
            / ((N*G^2 - Lambda^2) * Omega)
            * (sqrt(f)*Omega' |g'_m> + sqrt(1-f)*Omega |g'_u>) <e_perp| .

    The magnitude decreases at least as 1/(N*G^2), which is what licenses
    dropping it from the effective model.
    """
    f = problem.fraction
    omega = float(pair.pump(t))
    omega_p = float(pair.stokes(t))
    if omega == 0.0:
        if omega_p != 0.0:
            raise UndefinedAngle("correction undefined where Omega = 0 but Omega' != 0")
        return np.zeros((3, 3)), 0.0
    lam2 = (1.0 - f) * omega_p ** 2 + f * omega ** 2
    denom = problem.n_atoms * problem.cavity_coupling ** 2 - lam2
    if abs(denom) < 1e-12:
        raise DegenerateDenominator(f"N*G^2 - Lambda^2 = {denom} too close to zero")
    theta = mixing_angle(omega, omega_p, f)
    prefactor = (math.sqrt(lam2) * math.sqrt(1.0 - f) * (omega ** 2 - omega_p ** 2)
                 * math.cos(theta)) / (denom * omega)
    vec = np.array([math.sqrt(f) * omega_p, math.sqrt(1.0 - f) * omega, 0.0])
    corr = np.zeros((3, 3))
    corr[:, 2] = prefactor * vec
    corr = corr + corr.T
    return corr, float(np.linalg.norm(corr, 2))


# ---------------------------------------------------------------------------
# Hamiltonian providers (uniform interface for the propagator)
# ---------------------------------------------------------------------------

class EffectiveProvider:
    """Effective 3x3 tier; depends on the problem only through f = M/N."""

    tier = "effective3"
    use_krylov = False

    def __init__(self, problem: SearchProblem | None, pair: PulsePair,
                 *, fraction: Optional[float] = None) -> None:
        if fraction is None:
            if problem is None:
                raise DimensionMismatch("EffectiveProvider needs a problem or a fraction")
            fraction = problem.fraction
        self.problem = problem
        self.fraction = float(fraction)
        self.pair = pair
        self.dim = 3

    def matrix(self, t: float) -> np.ndarray:
        return effective_matrix(t, self.fraction, self.pair)

    def matrix_batch(self, times: np.ndarray) -> np.ndarray:
        a = math.sqrt(1.0 - self.fraction) * self.pair.stokes_values(times)
        b = -math.sqrt(self.fraction) * self.pair.pump_values(times)
        h = np.zeros((times.size, 3, 3))
        h[:, 0, 2] = h[:, 2, 0] = a
        h[:, 1, 2] = h[:, 2, 1] = b
        return h

    def populations(self, states: np.ndarray) -> dict[str, np.ndarray]:
        p = np.abs(states) ** 2
        return {"P_m": p[:, 0], "P_u": p[:, 1], "P_eperp": p[:, 2]}


class CollectiveProvider:
    """Collective 5x5 tier, with or without the rotating-wave approximation."""

    tier = "collective5"
    use_krylov = False

    def __init__(self, problem: SearchProblem, pair: PulsePair, rwa: bool = True) -> None:
        self.problem = problem
        self.pair = pair
        self.rwa = bool(rwa)
        self.dim = 5

    def matrix(self, t: float) -> np.ndarray:
        return collective_matrix(t, self.problem, self.pair, self.rwa)

    def matrix_batch(self, times: np.ndarray) -> np.ndarray:
        n, m = self.problem.n_atoms, self.problem.n_marked
        sigma, sigma_p = _laser_couplings(times, self.pair, self.problem.detuning,
                                          self.rwa, self.pair.t_start)
        h = np.zeros((times.size, 5, 5), dtype=float if self.rwa else complex)
        h[:, 0, 2] = sigma_p
        h[:, 2, 0] = np.conj(sigma_p)
        h[:, 1, 3] = sigma
        h[:, 3, 1] = np.conj(sigma)
        h[:, 2, 4] = h[:, 4, 2] = math.sqrt(m) * self.problem.cavity_coupling
        h[:, 3, 4] = h[:, 4, 3] = math.sqrt(n - m) * self.problem.cavity_coupling
        return h

    def populations(self, states: np.ndarray) -> dict[str, np.ndarray]:
        f = self.problem.fraction
        p = np.abs(states) ** 2
        a_e = math.sqrt(f) * states[:, 2] + math.sqrt(1.0 - f) * states[:, 3]
        a_perp = math.sqrt(1.0 - f) * states[:, 2] - math.sqrt(f) * states[:, 3]
        return {"P_m": p[:, 0], "P_u": p[:, 1],
                "P_eperp": np.abs(a_perp) ** 2,
                "P_g1": p[:, 4], "P_e": np.abs(a_e) ** 2}


class FullRegisterProvider:
    """Full-register tier (dimension 2N+1), propagated by a Krylov step."""

    tier = "full_register"
    use_krylov = True

    def __init__(self, problem: SearchProblem, pair: PulsePair, rwa: bool = True) -> None:
        self.problem = problem
        self.pair = pair
        self.rwa = bool(rwa)
        self.dim = 2 * problem.n_atoms + 1
        self._basis = collective_projectors(problem.n_atoms, problem.n_marked)

    def matrix(self, t: float) -> sp.csr_matrix:
        return full_register_matrix(t, self.problem, self.pair, self.rwa)

    def apply(self, t: float, psi: np.ndarray) -> np.ndarray:
        """H(t) @ psi without materialising the matrix."""
        n, m = self.problem.n_atoms, self.problem.n_marked
        g = self.problem.cavity_coupling
        sigma, sigma_p = _laser_couplings(t, self.pair, self.problem.detuning,
                                          self.rwa, self.pair.t_start)
        out = np.zeros_like(psi)
        ground, excited, photon = psi[:n], psi[n:2 * n], psi[2 * n]
        out[:m] = sigma_p * excited[:m]
        out[m:n] = sigma * excited[m:]
        out[n:n + m] = np.conj(sigma_p) * ground[:m] + g * photon
        out[n + m:2 * n] = np.conj(sigma) * ground[m:] + g * photon
        out[2 * n] = g * excited.sum()
        return out

    def populations(self, states: np.ndarray) -> dict[str, np.ndarray]:
        basis = self._basis
        out: dict[str, np.ndarray] = {}
        keys = [("P_m", basis.g_m), ("P_u", basis.g_u),
                ("P_eperp", basis.e_perp), ("P_g1", basis.g1), ("P_e", basis.e)]
        total = np.zeros(states.shape[0])
        for name, vec in keys:
            if vec is None:
                out[name] = np.zeros(states.shape[0])
                continue
            out[name] = np.abs(states @ vec.conj()) ** 2
            total += out[name]
        out["leakage"] = 1.0 - total
        return out


class ExplicitProvider:
    """Wrap an arbitrary Hermitian matrix-valued function of time."""

    tier = "custom"
    use_krylov = False

    def __init__(self, matrix_fn, dim: int) -> None:
        self._fn = matrix_fn
        self.dim = int(dim)

    def matrix(self, t: float) -> np.ndarray:
        return np.asarray(self._fn(t))

    def matrix_batch(self, times: np.ndarray) -> np.ndarray:
        return np.stack([self.matrix(t) for t in times])

    def populations(self, states: np.ndarray) -> dict[str, np.ndarray]:
        return {}
