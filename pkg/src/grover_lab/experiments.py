"""Scenario runner, fidelity calibration, scaling fits and consistency studies.

The tailored scheme has no closed-form amplitude requirement, so the
dimensionless peak Omega0*T reaching a target final transfer is found by
bisection (after an auto-expanded bracket and a coarse monotonicity
pre-scan).  Scaling sweeps fit ln(Omega0*T) against ln(1/f) by ordinary
least squares; the locally adiabatic design records the designed pump
area instead, which recovers the analytic f^(-1/2) law and validates the
harness end to end.

Sweep points are independent jobs; they may run on a thread pool capped
by the GROVER_LAB_THREADS environment variable, and results are merged
in deterministic input order.
"""

from __future__ import annotations

import json
import math
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .analytics import analytic_populations, discrepancy_report, final_bounds
from .core import (
    DuplicatePoints,
    GaussianPulse,
    GroverLabError,
    NoBracket,
    NonMonotoneWarning,
    NonPositiveInput,
    PulsePair,
    SearchProblem,
    TimeGrid,
    uniform_ground_state,
    validate_problem,
)
from .hamiltonians import (
    AdiabaticFrame,
    CollectiveProvider,
    EffectiveProvider,
    FullRegisterProvider,
    partition_correction,
)
from .propagator import (
    Trajectory,
    propagate,
    write_trajectory_csv,
)
from .pulses import (
    area_duration_relation,
    design_local_adiabatic_pair,
    design_tailored_pair,
    write_pulse_csv,
)

__all__ = [
    "ScenarioSpec",
    "ScenarioResult",
    "run_scenario",
    "CalibrationResult",
    "calibrate_amplitude",
    "ScalingFit",
    "fit_power_law",
    "scaling_sweep",
    "alpha_sweep",
    "ModelConsistencyRow",
    "model_consistency",
    "FeasibilityResult",
    "feasibility_check",
    "max_workers",
]

DEFAULT_TARGET = 0.99
DEFAULT_N_STEPS = 20000
DEFAULT_TRUNCATION = 4.0


def max_workers() -> int:
    """Sweep parallelism: GROVER_LAB_THREADS if set, else machine parallelism."""
    env = os.environ.get("GROVER_LAB_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise GroverLabError(f"GROVER_LAB_THREADS must be an integer, got {env!r}")
        if value < 1:
            raise GroverLabError("GROVER_LAB_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


def _map_jobs(fn: Callable, items: Sequence, workers: Optional[int]):
    workers = workers if workers is not None else max_workers()
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# Single-scenario runner
# ---------------------------------------------------------------------------

@dataclass
class ScenarioSpec:
    """Everything needed to run one dynamics scenario and write its artifacts."""

    name: str
    problem: SearchProblem
    scheme: str = "local_adiabatic"          # local_adiabatic | tailored
    epsilon: float = 0.05
    alpha: float = 1.5
    omega0_T: float | str = "area_matched"   # number | area_matched | calibrate
    width_T: float = 1.0
    truncation: float = DEFAULT_TRUNCATION
    tier: str = "effective3"
    rwa: bool = True
    n_steps: int = DEFAULT_N_STEPS
    sample_stride: int = 10
    target: float = DEFAULT_TARGET
    out_dir: Optional[Path] = None


@dataclass
class ScenarioResult:
    spec: ScenarioSpec
    pair: PulsePair
    trajectory: Trajectory
    summary: dict
    artifacts: dict[str, Path] = field(default_factory=dict)


def _resolve_amplitude(spec: ScenarioSpec) -> float:
    f = spec.problem.fraction
    if isinstance(spec.omega0_T, (int, float)):
        if not spec.omega0_T > 0:
            raise NonPositiveInput("omega0_T must be > 0")
        return float(spec.omega0_T)
    if spec.omega0_T == "area_matched":
        if spec.scheme != "local_adiabatic":
            raise GroverLabError("area_matched amplitude applies to the local adiabatic scheme")
        # peak for which the untruncated Gaussian area matches the requirement
        return area_duration_relation(spec.epsilon, f) / (math.sqrt(math.pi) * spec.width_T)
    if spec.omega0_T == "calibrate":
        if spec.scheme != "tailored":
            raise GroverLabError("calibrated amplitude applies to the tailored scheme")
        result = calibrate_amplitude(f, spec.alpha, spec.target,
                                     n_steps=spec.n_steps, truncation=spec.truncation)
        return result.omega0_T
    raise GroverLabError(f"unknown omega0_T specification {spec.omega0_T!r}")


def _build_pair(spec: ScenarioSpec, omega0: float) -> PulsePair:
    f = spec.problem.fraction
    if spec.scheme == "local_adiabatic":
        validate_problem(spec.problem, "local_adiabatic")
        base = GaussianPulse(omega0, spec.width_T)
        return design_local_adiabatic_pair(base, spec.epsilon, f,
                                           t_i=-spec.truncation * spec.width_T)
    if spec.scheme == "tailored":
        validate_problem(spec.problem, "tailored")
        end = _tailored_window_end(spec.alpha, f, spec.target, spec.truncation)
        return design_tailored_pair(omega0, spec.width_T, spec.alpha,
                                    truncation=spec.truncation, fraction=f,
                                    window_end=end * spec.width_T)
    raise GroverLabError(f"unknown pulse scheme {spec.scheme!r}")


def _make_provider(spec: ScenarioSpec, pair: PulsePair):
    if spec.tier == "effective3":
        return EffectiveProvider(spec.problem, pair)
    if spec.tier == "collective5":
        return CollectiveProvider(spec.problem, pair, rwa=spec.rwa)
    if spec.tier == "full_register":
        return FullRegisterProvider(spec.problem, pair, rwa=spec.rwa)
    raise GroverLabError(f"unknown tier {spec.tier!r}")


def run_scenario(spec: ScenarioSpec) -> ScenarioResult:
    """Propagate one scenario; write CSV/JSON artifacts when out_dir is set.

    Locally adiabatic runs additionally get the closed-form overlay and
    the quantified closed-form/oracle/numeric discrepancy report.
    """
    omega0 = _resolve_amplitude(spec) / spec.width_T
    pair = _build_pair(spec, omega0)
    provider = _make_provider(spec, pair)
    grid = TimeGrid(pair.t_start, pair.t_end, spec.n_steps)
    psi0 = uniform_ground_state(spec.tier, spec.problem)
    trajectory = propagate(provider, psi0, grid, spec.sample_stride)

    summary = {
        "name": spec.name,
        "scheme": spec.scheme,
        "tier": spec.tier,
        "rwa": spec.rwa,
        "n_atoms": spec.problem.n_atoms,
        "n_marked": spec.problem.n_marked,
        "fraction": spec.problem.fraction,
        "cavity_coupling": spec.problem.cavity_coupling,
        "detuning": spec.problem.detuning,
        "omega0_T": omega0 * spec.width_T,
        "window": list(pair.window),
        "n_steps": spec.n_steps,
        "sample_stride": spec.sample_stride,
        "norm_drift": trajectory.norm_drift,
        "final": {key: float(series[-1])
                  for key, series in trajectory.populations.items()},
    }
    if spec.scheme == "local_adiabatic":
        summary["epsilon"] = spec.epsilon
        summary["epsilon_effective"] = pair.info.epsilon_effective
    else:
        summary["alpha"] = spec.alpha
        summary["terminal_ratio"] = pair.terminal_ratio()

    report = None
    frame = None
    if spec.scheme == "local_adiabatic" and spec.tier == "effective3":
        frame = AdiabaticFrame(pair, spec.problem.fraction, spec.epsilon)
        theta = frame.theta(trajectory.times)
        tau = frame.tau(trajectory.times)
        p0_numeric = np.abs(np.cos(theta) * trajectory.states[:, 0]
                            - np.sin(theta) * trajectory.states[:, 1]) ** 2
        report = discrepancy_report(spec.epsilon, tau, theta_grid=theta,
                                    numeric_populations=trajectory.populations,
                                    numeric_p0=p0_numeric)
        summary["discrepancy"] = report.to_dict()

    result = ScenarioResult(spec=spec, pair=pair, trajectory=trajectory, summary=summary)
    if spec.out_dir is not None:
        _write_scenario_artifacts(result, frame)
    return result


def _write_scenario_artifacts(result: ScenarioResult, frame: Optional[AdiabaticFrame]) -> None:
    spec = result.spec
    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = spec.name
    paths = result.artifacts

    paths["trajectory"] = out / f"{name}_trajectory.csv"
    write_trajectory_csv(result.trajectory, paths["trajectory"])

    times = result.trajectory.times
    paths["pump"] = out / f"{name}_pump.csv"
    write_pulse_csv(paths["pump"], times, result.pair.pump_values(times))
    paths["stokes"] = out / f"{name}_stokes.csv"
    write_pulse_csv(paths["stokes"], times, result.pair.stokes_values(times))

    if frame is not None:
        theta = frame.theta(times)
        tau = frame.tau(times)
        pops = analytic_populations(theta, tau, spec.epsilon)
        paths["analytic"] = out / f"{name}_analytic.csv"
        with open(paths["analytic"], "w", newline="") as fh:
            fh.write("t,theta,tau,P0,P_m,P_u,P_eperp,P_eperp_printed\n")
            for row in zip(times, theta, tau, pops.p0, pops.pm, pops.pu,
                           pops.pe_exact, pops.pe):
                fh.write(",".join(f"{v:.15g}" for v in row) + "\n")
        paths["discrepancy"] = out / f"{name}_discrepancy.json"
        paths["discrepancy"].write_text(
            json.dumps(result.summary["discrepancy"], indent=2, sort_keys=True) + "\n")

    paths["summary"] = out / f"{name}_summary.json"
    paths["summary"].write_text(json.dumps(result.summary, indent=2, sort_keys=True) + "\n")

    paths["report"] = out / f"{name}_report.txt"
    final = result.summary["final"]
    lines = [
        f"scenario {name}: scheme={spec.scheme} tier={spec.tier} rwa={spec.rwa}",
        f"  N={spec.problem.n_atoms} M={spec.problem.n_marked} f={spec.problem.fraction:.6g}",
        f"  omega0_T={result.summary['omega0_T']:.6g} window=[{result.pair.t_start:.6g}, "
        f"{result.pair.t_end:.6g}]",
        f"  final populations: " + "  ".join(f"{k}={v:.6g}" for k, v in final.items()),
        f"  norm drift: {result.trajectory.norm_drift:.3e}",
    ]
    paths["report"].write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Fidelity calibration (tailored scheme)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CalibrationResult:
    """Amplitude reaching the target final transfer, with bisection diagnostics."""

    fraction: float
    alpha: float
    target: float
    omega0_T: float
    achieved_fidelity: float
    iterations: int
    bracket: tuple[float, float]
    monotone: bool


def _tailored_window_end(alpha: float, fraction: float, target: float,
                         truncation: float) -> float:
    """Tail length keeping the terminal dark-state misalignment negligible.

    The pulse ratio decays like exp(alpha^2 - 2*alpha*t/T) after the
    plateau, leaving a residual mixing angle that caps the reachable
    transfer at 1/(1 + (1-f)/f * ratio^2).  The window is extended until
    that cap infidelity is below a tenth of the infidelity budget, so the
    calibration target stays reachable even for short plateaus.
    """
    default_end = alpha + truncation
    if alpha <= 0.0:
        return default_end  # ratio never decays; no finite tail helps
    needed = (2.0 * alpha ** 2
              + math.log(10.0 * (1.0 - fraction) / ((1.0 - target) * fraction))) \
        / (4.0 * alpha)
    return max(default_end, needed)


def _tailored_final_pm(fraction: float, alpha: float, omega0_T: float,
                       n_steps: int, truncation: float,
                       target: float = DEFAULT_TARGET) -> float:
    end = _tailored_window_end(alpha, fraction, target, truncation)
    pair = design_tailored_pair(omega0_T, 1.0, alpha, truncation=truncation,
                                window_end=end)
    provider = EffectiveProvider(None, pair, fraction=fraction)
    grid = TimeGrid(pair.t_start, pair.t_end, n_steps)
    psi0 = uniform_ground_state("effective3", fraction=fraction)
    traj = propagate(provider, psi0, grid, sample_stride=n_steps)
    return traj.final("P_m")


def calibrate_amplitude(fraction: float, alpha: float, target: float = DEFAULT_TARGET,
                        *, fidelity_tol: float = 1e-4, bracket_tol: float = 1e-6,
                        max_bracket_exponent: int = 16,
                        n_steps: int = DEFAULT_N_STEPS,
                        truncation: float = DEFAULT_TRUNCATION) -> CalibrationResult:
    """Bisect Omega0*T until the tailored scheme's final P_m meets the target.

    The upper bracket edge doubles from 1 until the target is crossed (up
    to 2^max_bracket_exponent, else NoBracket).  An 8-point pre-scan of
    the bracket detects non-monotone crossings; if several are present
    the largest one is kept and a NonMonotoneWarning is issued.
    """
    if not 0.0 < fraction < 1.0:
        raise GroverLabError(f"fraction must be in (0, 1), got {fraction}")
    if not 0.0 < target < 1.0:
        raise GroverLabError(f"target fidelity must be in (0, 1), got {target}")

    def final_pm(amplitude: float) -> float:
        return _tailored_final_pm(fraction, alpha, amplitude, n_steps, truncation,
                                  target)

    evaluations = 0
    lo, hi = 1.0, 1.0
    pm_lo = final_pm(lo)
    evaluations += 1
    if pm_lo >= target:
        # already adiabatic at unit area: bracket downwards
        while pm_lo >= target and lo > 2.0 ** -max_bracket_exponent:
            hi, lo = lo, lo / 2.0
            pm_lo = final_pm(lo)
            evaluations += 1
        if pm_lo >= target:
            raise NoBracket(f"final transfer stays above {target} down to Omega0*T={lo}")
    else:
        pm_hi = pm_lo
        while pm_hi < target:
            if hi >= 2.0 ** max_bracket_exponent:
                raise NoBracket(
                    f"final transfer never crossed {target} up to Omega0*T={hi}")
            hi *= 2.0
            pm_hi = final_pm(hi)
            evaluations += 1
        lo = hi / 2.0

    # coarse pre-scan for crossing multiplicity inside the bracket
    scan = np.linspace(lo, hi, 8)
    scan_pm = [final_pm(s) for s in scan]
    evaluations += len(scan)
    above = (np.asarray(scan_pm) >= target).astype(int)
    crossings = np.nonzero(np.diff(above) != 0)[0]
    monotone = len(crossings) <= 1
    if not monotone:
        warnings.warn("fidelity crosses the target more than once; keeping the "
                      "largest crossing", NonMonotoneWarning)
    # bisect the last upward crossing (one exists: scan ends above, starts below)
    upward = np.nonzero((above[:-1] == 0) & (above[1:] == 1))[0]
    lo, hi = scan[upward[-1]], scan[upward[-1] + 1]

    achieved = None
    mid = 0.5 * (lo + hi)
    while True:
        mid = 0.5 * (lo + hi)
        achieved = final_pm(mid)
        evaluations += 1
        if abs(achieved - target) <= fidelity_tol or (hi - lo) < bracket_tol:
            break
        if achieved < target:
            lo = mid
        else:
            hi = mid
    if abs(achieved - target) > fidelity_tol:
        raise GroverLabError(
            f"bisection bracket collapsed to width {hi - lo:.2e} with "
            f"|P_m - target| = {abs(achieved - target):.2e} > {fidelity_tol}")
    return CalibrationResult(fraction=fraction, alpha=alpha, target=target,
                             omega0_T=mid, achieved_fidelity=achieved,
                             iterations=evaluations, bracket=(lo, hi),
                             monotone=monotone)


# ---------------------------------------------------------------------------
# Scaling sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingFit:
    """Log-log fit of the calibrated amplitude against the inverse fraction."""

    design: str
    alpha: Optional[float]
    epsilon: Optional[float]
    target: float
    points: tuple[tuple[float, float], ...]   # (ln(1/f), ln(Omega0*T))
    beta: float
    intercept: float
    residual_rms: float
    amplitudes: tuple[float, ...]
    monotone: bool
    calibrations: tuple = ()


def fit_power_law(points: Sequence[tuple[float, float]]) -> tuple[float, float, float]:
    """Unweighted OLS of y against x; returns (slope, intercept, residual rms)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise GroverLabError("power-law fit needs at least two (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    design_matrix = np.column_stack([x, np.ones_like(x)])
    coeffs, *_ = np.linalg.lstsq(design_matrix, y, rcond=None)
    slope, intercept = float(coeffs[0]), float(coeffs[1])
    residuals = y - (slope * x + intercept)
    return slope, intercept, float(np.sqrt(np.mean(residuals ** 2)))


def _sweep_amplitude_local_adiabatic(fraction: float, epsilon: float) -> float:
    """Designed pump area for one fraction (numerical root of the area law).

    The base Gaussian peak gets 25% headroom over the requirement so the
    exhaustion time lands strictly inside the support.
    """
    required = area_duration_relation(epsilon, fraction)
    peak = 1.25 * required / math.sqrt(math.pi)
    pair = design_local_adiabatic_pair(GaussianPulse(peak, 1.0), epsilon, fraction)
    return float(pair.info.area(pair.t_end))


def scaling_sweep(f_list: Sequence[float], *, design: str = "tailored",
                  alpha: float = 1.5, epsilon: float = 0.05,
                  target: float = DEFAULT_TARGET, n_steps: int = DEFAULT_N_STEPS,
                  truncation: float = DEFAULT_TRUNCATION,
                  workers: Optional[int] = None) -> ScalingFit:
    """Calibrate every fraction and fit beta in Omega0*T ~ f^(-beta).

    For the tailored scheme each point is a numerical calibration; the
    locally adiabatic design records the designed pump area instead
    (fidelity there is set by epsilon, not by the amplitude).
    """
    fractions = [float(f) for f in f_list]
    if len(fractions) < 3:
        raise GroverLabError("scaling sweep needs at least 3 fractions")
    if len(set(fractions)) != len(fractions):
        raise DuplicatePoints(f"repeated f values in sweep: {fractions}")
    for f in fractions:
        if not 0.0 < f < 1.0:
            raise GroverLabError(f"sweep fractions must be in (0, 1), got {f}")

    calibrations: tuple = ()
    if design == "tailored":
        results = _map_jobs(
            lambda f: calibrate_amplitude(f, alpha, target, n_steps=n_steps,
                                          truncation=truncation),
            fractions, workers)
        amplitudes = [r.omega0_T for r in results]
        calibrations = tuple(results)
        eps_out = None
        alpha_out = alpha
    elif design == "local_adiabatic":
        amplitudes = _map_jobs(
            lambda f: _sweep_amplitude_local_adiabatic(f, epsilon),
            fractions, workers)
        eps_out = epsilon
        alpha_out = None
    else:
        raise GroverLabError(f"unknown sweep design {design!r}")

    order = np.argsort(fractions)[::-1]  # decreasing f
    ordered_amp = np.asarray(amplitudes)[order]
    monotone = bool(np.all(np.diff(ordered_amp) > 0))
    if not monotone:
        warnings.warn("calibrated amplitude is not strictly increasing as f "
                      "decreases", NonMonotoneWarning)

    points = tuple((math.log(1.0 / f), math.log(a))
                   for f, a in zip(fractions, amplitudes))
    beta, intercept, residual = fit_power_law(points)
    return ScalingFit(design=design, alpha=alpha_out, epsilon=eps_out, target=target,
                      points=points, beta=beta, intercept=intercept,
                      residual_rms=residual, amplitudes=tuple(amplitudes),
                      monotone=monotone, calibrations=calibrations)


def alpha_sweep(alpha_list: Sequence[float], f_list: Sequence[float],
                target: float = DEFAULT_TARGET, *, n_steps: int = DEFAULT_N_STEPS,
                truncation: float = DEFAULT_TRUNCATION,
                workers: Optional[int] = None) -> list[tuple[float, ScalingFit]]:
    """Scaling exponent beta as a function of the plateau factor alpha."""
    for alpha in alpha_list:
        if alpha < 0:
            raise NonPositiveInput(f"alpha must be >= 0, got {alpha}")
    out = []
    for alpha in alpha_list:
        fit = scaling_sweep(f_list, design="tailored", alpha=alpha, target=target,
                            n_steps=n_steps, truncation=truncation, workers=workers)
        out.append((float(alpha), fit))
    return out


# ---------------------------------------------------------------------------
# Model hierarchy consistency
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModelConsistencyRow:
    n_atoms: int
    n_marked: int
    cavity_coupling: float
    delta_pm_effective_vs_collective: float
    delta_pm_collective_vs_full: Optional[float]
    max_correction_magnitude: float


def model_consistency(n_list: Sequence[int], *, fraction: float = 0.25,
                      cavity_coupling: float = 10.0, detuning: float = 50.0,
                      alpha: float = 1.5, omega0_T: float = 2.0,
                      n_steps: int = DEFAULT_N_STEPS,
                      full_register_max: int = 32,
                      workers: Optional[int] = None) -> list[ModelConsistencyRow]:
    """Per-N deviation between model tiers for one fixed tailored pair.

    Reports |P_m(t_f)| differences between the effective and collective
    tiers (and the collective/full-register series difference for
    N <= full_register_max) together with the largest partitioning
    correction magnitude along the run.  With the pulse scale fixed the
    deviations should fall off like 1/(N G^2).
    """
    pair = design_tailored_pair(omega0_T, 1.0, alpha)

    def one(n: int) -> ModelConsistencyRow:
        m = round(fraction * n)
        m = min(max(m, 1), n - 1)
        problem = SearchProblem(n, m, cavity_coupling=cavity_coupling, detuning=detuning)
        if math.sqrt(n) * cavity_coupling < 10.0 * omega0_T:
            warnings.warn(f"sqrt(N)*G = {math.sqrt(n) * cavity_coupling:.3g} is not "
                          f"large against the pulse peak {omega0_T:.3g}", UserWarning)
        grid = TimeGrid(pair.t_start, pair.t_end, n_steps)
        stride = max(1, n_steps // 2000)
        eff = propagate(EffectiveProvider(problem, pair),
                        uniform_ground_state("effective3", problem), grid, stride)
        coll = propagate(CollectiveProvider(problem, pair, rwa=True),
                         uniform_ground_state("collective5", problem), grid, stride)
        delta_ec = abs(eff.final("P_m") - coll.final("P_m"))
        delta_cf = None
        if n <= full_register_max:
            full = propagate(FullRegisterProvider(problem, pair, rwa=True),
                             uniform_ground_state("full_register", problem), grid, stride)
            delta_cf = float(np.max(np.abs(full.populations["P_m"]
                                           - coll.populations["P_m"])))
        sample_times = np.linspace(pair.t_start, pair.t_end, 201)
        max_corr = max(partition_correction(t, problem, pair)[1] for t in sample_times)
        return ModelConsistencyRow(
            n_atoms=n, n_marked=m, cavity_coupling=cavity_coupling,
            delta_pm_effective_vs_collective=float(delta_ec),
            delta_pm_collective_vs_full=delta_cf,
            max_correction_magnitude=float(max_corr))

    return _map_jobs(one, [int(n) for n in n_list], workers)


# ---------------------------------------------------------------------------
# Experimental feasibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FeasibilityResult:
    ratio: float
    threshold: float
    passed: bool


def feasibility_check(omega0: float, pulse_width: float, gamma: float,
                      *, threshold: float = 100.0) -> FeasibilityResult:
    """Spontaneous-emission feasibility ratio (Omega0*T)^2 / (Gamma*T).

    Inputs in SI units (1/s, s, 1/s).  Passing requires the ratio to be
    at least the threshold (inclusive).
    """
    for name, value in (("omega0", omega0), ("pulse_width", pulse_width),
                        ("gamma", gamma), ("threshold", threshold)):
        if not value > 0:
            raise NonPositiveInput(f"{name} must be > 0, got {value}")
    ratio = (omega0 * pulse_width) ** 2 / (gamma * pulse_width)
    return FeasibilityResult(ratio=float(ratio), threshold=float(threshold),
                             passed=bool(ratio >= threshold))
