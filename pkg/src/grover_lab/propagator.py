"""Time integration of the Schroedinger equation and exact reference solutions.

Each step applies the exponential-midpoint rule

    psi <- exp(-i * H(t_mid) * dt) * psi ,

which is unitary to machine precision per step.  Small dense tiers
(3x3, 5x5) diagonalise all midpoint Hamiltonians in one batched eigh
call; the full-register tier applies the exponential through a short
Hermitian Lanczos recurrence so only matrix-vector products with the
sparse star Hamiltonian are needed.  Norms are recorded and never
renormalised: drift is a diagnostic, not something to hide.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import (
    DimensionMismatch,
    NormDriftExceeded,
    StateVector,
    TimeGrid,
)

__all__ = [
    "Trajectory",
    "propagate",
    "project_populations",
    "two_level_oracle",
    "two_level_generator",
    "adiabatic_generator",
    "lanczos_expm_apply",
    "write_trajectory_csv",
    "TRAJECTORY_COLUMNS",
]

#: trajectory CSV column order per tier (time first, norm last)
TRAJECTORY_COLUMNS = {
    "effective3": ("P_m", "P_u", "P_eperp"),
    "collective5": ("P_m", "P_u", "P_eperp", "P_g1", "P_e"),
    "full_register": ("P_m", "P_u", "P_eperp", "P_g1", "P_e", "leakage"),
    "custom": (),
}

_EIGH_CHUNK = 4096  # midpoint Hamiltonians diagonalised per batched call


@dataclass
class Trajectory:
    """Sampled propagation record: states, populations and norm diagnostics."""

    tier: str
    times: np.ndarray
    states: np.ndarray                      # (n_samples, dim), complex
    populations: dict[str, np.ndarray]
    norms: np.ndarray
    norm_drift: float
    grid: TimeGrid
    sample_stride: int

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def final(self, key: str) -> float:
        return float(self.populations[key][-1])


def _initial_amplitudes(provider, psi0) -> np.ndarray:
    if isinstance(psi0, StateVector):
        if psi0.tier != provider.tier and provider.tier != "custom":
            raise DimensionMismatch(
                f"initial state tier {psi0.tier!r} does not match provider {provider.tier!r}")
        amps = np.array(psi0.amplitudes, dtype=complex)
    else:
        amps = np.array(psi0, dtype=complex)
    if amps.ndim != 1 or amps.size != provider.dim:
        raise DimensionMismatch(
            f"initial state has dimension {amps.size}, provider needs {provider.dim}")
    return amps


def lanczos_expm_apply(apply_h, psi: np.ndarray, dt: float, *, m: int = 12) -> np.ndarray:
    """exp(-i*H*dt) @ psi through an m-step Hermitian Lanczos recurrence.

    Full reorthogonalisation keeps the Krylov basis orthonormal (m is
    small, so the cost is negligible); the recurrence stops early on
    breakdown, i.e. when psi spans an invariant subspace.
    """
    norm0 = float(np.linalg.norm(psi))
    if norm0 == 0.0:
        return psi.copy()
    m = min(m, psi.size)
    basis = np.empty((m, psi.size), dtype=complex)
    alphas = np.empty(m)
    betas = np.empty(max(m - 1, 0))
    basis[0] = psi / norm0
    w = apply_h(basis[0])
    alphas[0] = np.real(np.vdot(basis[0], w))
    w = w - alphas[0] * basis[0]
    k = 1
    scale = max(1.0, abs(alphas[0]))
    for j in range(1, m):
        # full reorthogonalisation of the residual against the basis so far
        w = w - basis[:j].T @ (basis[:j].conj() @ w)
        beta = float(np.linalg.norm(w))
        if beta <= 1e-14 * scale:
            break
        basis[j] = w / beta
        betas[j - 1] = beta
        w = apply_h(basis[j]) - beta * basis[j - 1]
        alphas[j] = np.real(np.vdot(basis[j], w))
        w = w - alphas[j] * basis[j]
        scale = max(scale, abs(alphas[j]), beta)
        k = j + 1
    if k == 1:
        coeffs = np.array([np.exp(-1j * dt * alphas[0])])
    else:
        evals, evecs = eigh_tridiagonal(alphas[:k], betas[:k - 1])
        coeffs = evecs @ (np.exp(-1j * dt * evals) * evecs[0])
    return norm0 * (basis[:k].T @ coeffs)


def _propagate_dense(provider, psi, grid: TimeGrid, sample_indices, states):
    dt = grid.dt
    midpoints = grid.midpoints()
    sample_set = {int(i) for i in sample_indices}
    pos = 0
    if 0 in sample_set:
        states[pos] = psi
        pos += 1
    step = 0
    for start in range(0, grid.n_steps, _EIGH_CHUNK):
        chunk = midpoints[start:start + _EIGH_CHUNK]
        h = provider.matrix_batch(chunk)
        evals, evecs = np.linalg.eigh(h)
        phases = np.exp(-1j * dt * evals)
        # U = V diag(phase) V^dagger for every midpoint in the chunk
        unitaries = (evecs * phases[:, None, :]) @ np.conj(np.swapaxes(evecs, -1, -2))
        for u in unitaries:
            psi = u @ psi
            step += 1
            if step in sample_set:
                states[pos] = psi
                pos += 1
    return psi


def _propagate_krylov(provider, psi, grid: TimeGrid, sample_indices, states,
                      krylov_dim: int):
    dt = grid.dt
    midpoints = grid.midpoints()
    sample_set = {int(i) for i in sample_indices}
    pos = 0
    if 0 in sample_set:
        states[pos] = psi
        pos += 1
    for step, t_mid in enumerate(midpoints, start=1):
        psi = lanczos_expm_apply(lambda v: provider.apply(t_mid, v), psi, dt,
                                 m=krylov_dim)
        if step in sample_set:
            states[pos] = psi
            pos += 1
    return psi


def propagate(provider, psi0, grid: TimeGrid, sample_stride: int = 1,
              *, krylov_dim: int = 12, max_norm_drift: float = 1e-6) -> Trajectory:
    """Integrate i d(psi)/dt = H(t) psi over the grid, sampling every stride steps.

    The final node is always sampled.  Raises NormDriftExceeded when
    max |norm - 1| passes ``max_norm_drift``.
    """
    if sample_stride < 1:
        raise DimensionMismatch("sample_stride must be >= 1")
    psi = _initial_amplitudes(provider, psi0)
    sample_indices = list(range(0, grid.n_steps + 1, sample_stride))
    if sample_indices[-1] != grid.n_steps:
        sample_indices.append(grid.n_steps)
    states = np.empty((len(sample_indices), provider.dim), dtype=complex)
    if getattr(provider, "use_krylov", False):
        _propagate_krylov(provider, psi, grid, sample_indices, states, krylov_dim)
    else:
        _propagate_dense(provider, psi, grid, sample_indices, states)
    times = grid.t_start + grid.dt * np.asarray(sample_indices, dtype=float)
    norms = np.linalg.norm(states, axis=1)
    drift = float(np.max(np.abs(norms - 1.0)))
    if drift > max_norm_drift:
        raise NormDriftExceeded(f"norm drift {drift:.3e} exceeds {max_norm_drift:.1e}")
    populations = provider.populations(states)
    return Trajectory(tier=provider.tier, times=times, states=states,
                      populations=populations, norms=norms, norm_drift=drift,
                      grid=grid, sample_stride=sample_stride)


def project_populations(trajectory: Trajectory, basis) -> dict[str, np.ndarray]:
    """Populations |<x|psi(t)>|^2 on a set of collective vectors.

    For full-register trajectories the out-of-span leakage
    1 - sum_x P_x is reported as well.
    """
    vectors = {"P_m": basis.g_m, "P_u": basis.g_u, "P_e": basis.e,
               "P_eperp": basis.e_perp, "P_g1": basis.g1}
    dim = trajectory.states.shape[1]
    out: dict[str, np.ndarray] = {}
    total = np.zeros(trajectory.states.shape[0])
    for name, vec in vectors.items():
        if vec is None:
            continue
        if vec.size != dim:
            raise DimensionMismatch(
                f"projector dimension {vec.size} does not match state dimension {dim}")
        out[name] = np.abs(trajectory.states @ vec.conj()) ** 2
        total += out[name]
    out["leakage"] = 1.0 - total
    return out


def two_level_oracle(epsilon: float, tau):
    """Dark-state survival of the two-level truncation of the frame generator.

    In the symmetric/antisymmetric bright-state basis the constant frame
    generator is a chain |0> -(i*eps)- |s> -(1)- |a| with zero diagonal;
    truncating to the {|0>, |s>} block gives the 2x2 matrix
    [[0, -i*eps], [i*eps, 1]] (in units of the gap) whose survival
    probability is exactly

        P0(tau) = 1 - (4 eps^2 / (1 + 4 eps^2)) * sin^2(sqrt(1+4 eps^2) tau / 2).

    The untruncated generator is solved exactly by the closed forms of
    :mod:`grover_lab.analytics`; the two differ at order eps^4 in their
    survival minima (quantified by the discrepancy report).
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    g = np.sqrt(1.0 + 4.0 * epsilon ** 2)
    vals = 1.0 - (4.0 * epsilon ** 2 / (1.0 + 4.0 * epsilon ** 2)) \
        * np.sin(g * np.asarray(tau, dtype=float) / 2.0) ** 2
    return float(vals) if np.isscalar(tau) else vals


def two_level_generator(epsilon: float) -> np.ndarray:
    """The 2x2 truncation {|0>, (|+>+|->)/sqrt(2)} solved by the oracle."""
    return np.array([[0.0, -1j * epsilon],
                     [1j * epsilon, 1.0]], dtype=complex)


def adiabatic_generator(epsilon: float) -> np.ndarray:
    """Constant frame generator in the (|0>, |+>, |->) basis, units of the gap.

    The bright states sit at +-1 (the signed instantaneous eigenvalues);
    its spectrum is {0, +-sqrt(1+eps^2)}.
    """
    c = 1j * epsilon / np.sqrt(2.0)
    return np.array([[0.0, -c, -c],
                     [c, 1.0, 0.0],
                     [c, 0.0, -1.0]], dtype=complex)


def write_trajectory_csv(trajectory: Trajectory, path: str | Path) -> None:
    """CSV export: ``t,P_m,P_u,P_eperp[,P_g1,P_e][,leakage],norm`` rows.

    15 significant digits, '.' decimal separator, one row per sample.
    """
    keys = TRAJECTORY_COLUMNS.get(trajectory.tier)
    if keys is None:
        keys = tuple(sorted(trajectory.populations))
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", *keys, "norm"])
        for i, t in enumerate(trajectory.times):
            row = [f"{t:.15g}"]
            row += [f"{trajectory.populations[k][i]:.15g}" for k in keys]
            row.append(f"{trajectory.norms[i]:.15g}")
            writer.writerow(row)
