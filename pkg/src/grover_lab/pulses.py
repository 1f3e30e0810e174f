"""Pulse evaluation, areas, and the two adiabatic pulse-pair designs.

The locally adiabatic design enforces a constant ratio eps between the
nonadiabatic coupling (the mixing-angle velocity) and the instantaneous
gap.  Given a pump envelope Omega with cumulative area
A(t) = int_{t_i}^t Omega(u) du, the Stokes envelope is

    Omega'(t) = rho(A(t)) * Omega(t),
    rho(A) = [1 - eps*A*sqrt(f/(1-f))]
             / sqrt(1 + eps*A*(2*sqrt((1-f)/f) - eps*A)),

which starts at rho = 1 (simultaneous switch-on) and is exhausted,
rho = 0, once eps * A = sqrt((1-f)/f).  The pump area consumed by the
whole passage is therefore Omega0 * Tproc = (1/eps) * sqrt((1-f)/f).

The tailored scheme uses a plain Gaussian Stokes pulse against a pump
with a flat top of duration alpha * T; both rise along the same Gaussian
so the switch-on condition holds exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from .core import (
    BackwardInterval,
    DegenerateFraction,
    Envelope,
    GaussianPulse,
    GroverLabError,
    InsufficientArea,
    NonPositiveInput,
    OutOfRange,
    PulsePair,
    PulseShape,
    SampledPulse,
    TailoredGaussianPulse,
)

__all__ = [
    "eval_pulse",
    "pulse_area",
    "CumulativeArea",
    "local_adiabatic_ratio",
    "ratio_from_mixing_angle",
    "area_duration_relation",
    "LocalAdiabaticDesign",
    "design_local_adiabatic_pair",
    "design_tailored_pair",
    "local_adiabatic_residual",
    "read_pulse_csv",
    "write_pulse_csv",
]

#: default Gaussian truncation, in pulse widths (envelope ~1.1e-7 of peak there)
DEFAULT_TRUNCATION = 4.0

#: cumulative-area cache density per pulse width; chosen so that linear
#: interpolation between nodes stays below 1e-10 * peak * width
DESIGN_NODES_PER_WIDTH = 32768


def eval_pulse(shape: PulseShape, t) -> float | np.ndarray:
    """Envelope value(s) of a pulse shape at time(s) t (total function)."""
    return shape(t)


def _segment_edges(shape, t_i: float, t: float) -> list[float]:
    edges = [t_i]
    breakpoints = shape.breakpoints() if hasattr(shape, "breakpoints") else ()
    edges.extend(b for b in breakpoints if t_i < b < t)
    edges.append(t)
    return sorted(set(edges))


def pulse_area(shape: PulseShape, t_i: float, t: float, *,
               nodes_per_width: int = 512) -> float:
    """Cumulative pulse area A(t) = int_{t_i}^t Omega(u) du.

    Composite Simpson on a uniform subgrid of each smooth segment
    (sampled envelopes are piecewise linear and integrate exactly via the
    trapezoid rule).  Accuracy improves as nodes_per_width^-4.
    """
    if t < t_i:
        raise BackwardInterval(f"area interval runs backwards: t={t} < t_i={t_i}")
    if t == t_i:
        return 0.0
    if isinstance(shape, SampledPulse):
        # envelope is defined as the linear interpolant: trapezoid is exact
        grid = np.unique(np.concatenate([[t_i, t], shape.times[(shape.times > t_i)
                                                               & (shape.times < t)]]))
        return float(np.trapezoid(shape(grid), grid))
    width = getattr(shape, "width", 1.0)
    total = 0.0
    edges = _segment_edges(shape, t_i, t)
    for a, b in zip(edges[:-1], edges[1:]):
        n = max(8, 2 * math.ceil((b - a) / width * nodes_per_width / 2))
        grid = np.linspace(a, b, n + 1)
        total += float(simpson(shape(grid), x=grid))
    return total


class CumulativeArea:
    """Dense cumulative-Simpson table of an envelope, linearly interpolated.

    Node spacing defaults to width / DESIGN_NODES_PER_WIDTH so the
    interpolation error stays below ~1e-10 * peak * width.
    """

    def __init__(self, envelope: Envelope, t_start: float, t_end: float,
                 *, nodes_per_width: int = DESIGN_NODES_PER_WIDTH,
                 width: float = 1.0) -> None:
        if not t_end > t_start:
            raise BackwardInterval("cumulative area needs t_end > t_start")
        n_cells = max(16, 2 * math.ceil((t_end - t_start) / width * nodes_per_width / 2))
        grid = np.linspace(t_start, t_end, n_cells + 1)
        vals = np.asarray(envelope(grid), dtype=float)
        h = (t_end - t_start) / n_cells
        # pairwise Simpson increments: full pair [2k, 2k+2] and the left
        # half-pair [2k, 2k+1] from the same interpolating parabola
        f0, f1, f2 = vals[0:-2:2], vals[1:-1:2], vals[2::2]
        pair_full = h / 3.0 * (f0 + 4.0 * f1 + f2)
        pair_half = h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2)
        table = np.zeros(n_cells + 1)
        table[2::2] = np.cumsum(pair_full)
        table[1::2] = table[0:-2:2] + pair_half
        self.grid = grid
        self.table = table
        self.t_start = float(t_start)
        self.t_end = float(t_end)

    @property
    def total(self) -> float:
        return float(self.table[-1])

    def value(self, t) -> float | np.ndarray:
        vals = np.interp(np.asarray(t, dtype=float), self.grid, self.table)
        return float(vals) if np.isscalar(t) else vals

    def invert(self, target: float, *, tol: float = 1e-13, max_iter: int = 100) -> float:
        """Bisection for the time where the cumulative area reaches target."""
        if target < 0 or target > self.total:
            raise OutOfRange(f"target area {target} outside [0, {self.total}]")
        lo, hi = self.t_start, self.t_end
        for _ in range(max_iter):
            mid = 0.5 * (lo + hi)
            if self.value(mid) < target:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-15 * max(1.0, abs(hi)) or abs(self.value(hi) - target) <= tol:
                break
        return hi


def _check_fraction(fraction: float) -> None:
    if not 0.0 < fraction < 1.0:
        if fraction == 1.0:
            raise DegenerateFraction("pulse-ratio law divides by sqrt(1-f); need f < 1")
        raise GroverLabError(f"fraction must be in (0, 1), got {fraction}")


def local_adiabatic_ratio(area, epsilon: float, fraction: float):
    """Pulse ratio Omega'/Omega as a function of consumed pump area.

    Strictly decreasing from 1 at area 0 to 0 at the exhaustion point
    eps*A = sqrt((1-f)/f); raises OutOfRange past it (1e-12 slack).
    """
    _check_fraction(fraction)
    limit = math.sqrt((1.0 - fraction) / fraction)
    s = epsilon * np.asarray(area, dtype=float)
    if np.any(s > limit + 1e-12 * max(1.0, limit)):
        raise OutOfRange(f"eps*A exceeds sqrt((1-f)/f) = {limit}")
    s = np.minimum(s, limit)
    num = 1.0 - s * math.sqrt(fraction / (1.0 - fraction))
    den = np.sqrt(1.0 + s * (2.0 * limit - s))
    ratio = np.maximum(num, 0.0) / den
    return float(ratio) if np.isscalar(area) else ratio


def ratio_from_mixing_angle(area, epsilon: float, fraction: float):
    """Equivalent ratio via sin(theta) = eps*sqrt(f)*A - sqrt(1-f).

    Algebraically identical to :func:`local_adiabatic_ratio`; kept as an
    independent formulation for cross-checks.
    """
    _check_fraction(fraction)
    sin_theta = epsilon * math.sqrt(fraction) * np.asarray(area, dtype=float) \
        - math.sqrt(1.0 - fraction)
    sin_theta = np.clip(sin_theta, -1.0, 0.0)
    cos_theta = np.sqrt(1.0 - sin_theta ** 2)
    ratio = -math.sqrt(fraction / (1.0 - fraction)) * sin_theta / cos_theta
    return float(ratio) if np.isscalar(area) else ratio


def area_duration_relation(epsilon: float, fraction: float) -> float:
    """Pump area Omega0 * Tproc consumed by the passage: (1/eps)*sqrt((1-f)/f)."""
    _check_fraction(fraction)
    if not epsilon > 0:
        raise NonPositiveInput("epsilon must be > 0")
    return math.sqrt((1.0 - fraction) / fraction) / epsilon


@dataclass(frozen=True)
class LocalAdiabaticDesign:
    """Record of a locally adiabatic design: areas, window and exhaustion point.

    ``epsilon_effective`` equals the requested epsilon unless the base
    pulse area fell short of the requirement by a relative amount within
    ``area_slack``; in that marginal case it is nudged up (by at most that
    slack) so the available area is exactly exhausted at t_f.
    """

    epsilon: float
    epsilon_effective: float
    fraction: float
    base: PulseShape
    areas: CumulativeArea
    t_start: float
    t_end: float
    area_target: float

    def area(self, t):
        return self.areas.value(t)

    def ratio(self, t):
        a = np.minimum(np.asarray(self.areas.value(t), dtype=float), self.area_target)
        vals = local_adiabatic_ratio(a, self.epsilon_effective, self.fraction)
        return float(vals) if np.isscalar(t) else vals

    def stokes(self, t):
        vals = self.ratio(t) * np.asarray(self.base(t), dtype=float)
        return float(vals) if np.isscalar(t) else vals


def design_local_adiabatic_pair(base: PulseShape, epsilon: float, fraction: float,
                                t_i: Optional[float] = None,
                                t_max: Optional[float] = None,
                                *, nodes_per_width: int = DESIGN_NODES_PER_WIDTH,
                                area_slack: float = 1e-6) -> PulsePair:
    """Derive the Stokes pulse enforcing theta_dot = eps * Lambda at all times.

    t_f is located by bisection on the cached cumulative area where
    eps * A(t_f) = sqrt((1-f)/f).  If the base pulse is marginally short
    of the required area (relative shortfall <= area_slack, as happens
    when the peak is chosen to match the requirement exactly against a
    truncated Gaussian), epsilon is nudged up by that same relative
    amount and the support end becomes t_f.
    """
    _check_fraction(fraction)
    if not 0.0 < epsilon < 1.0:
        raise GroverLabError(f"epsilon must be in (0, 1), got {epsilon}")
    width = getattr(base, "width", 1.0)
    if t_i is None:
        t_i = -DEFAULT_TRUNCATION * width
    if t_max is None:
        t_max = -t_i if t_i < 0 else t_i + 2 * DEFAULT_TRUNCATION * width
        if isinstance(base, TailoredGaussianPulse):
            t_max += base.plateau_factor * base.width
    areas = CumulativeArea(base, t_i, t_max, nodes_per_width=nodes_per_width, width=width)
    required = area_duration_relation(epsilon, fraction)
    if areas.total >= required:
        eps_eff = epsilon
        t_f = areas.invert(required, tol=1e-13)
    elif areas.total >= required * (1.0 - area_slack):
        eps_eff = epsilon * required / areas.total
        t_f = areas.t_end
    else:
        raise InsufficientArea(
            f"base pulse supplies area {areas.total:.6g} < required {required:.6g} "
            f"= (1/eps)*sqrt((1-f)/f)")
    design = LocalAdiabaticDesign(
        epsilon=epsilon, epsilon_effective=eps_eff, fraction=fraction, base=base,
        areas=areas, t_start=t_i, t_end=t_f,
        area_target=area_duration_relation(eps_eff, fraction))
    return PulsePair(pump=base, stokes=design.stokes, window=(t_i, t_f),
                     design="local_adiabatic", epsilon=epsilon, fraction=fraction,
                     info=design)


def design_tailored_pair(peak: float, width: float, alpha: float,
                         *, truncation: float = DEFAULT_TRUNCATION,
                         fraction: Optional[float] = None,
                         window_end: Optional[float] = None) -> PulsePair:
    """Tailored pair: flat-top pump against a plain Gaussian Stokes pulse.

    The default window is [-truncation*width, alpha*width +
    truncation*width]; both envelopes follow the same Gaussian rise, so
    the simultaneous switch-on condition is exact.  The terminal ratio
    exp(-(alpha^2 + 2*alpha*truncation)) is small but nonzero for short
    plateaus (PulsePair.terminal_ratio() reports it); pass ``window_end``
    to extend the tail when that residual misalignment matters, e.g. for
    high-fidelity calibration at small plateau factors.
    """
    pump = TailoredGaussianPulse(peak, width, alpha)
    stokes = GaussianPulse(peak, width)
    if window_end is None:
        window_end = alpha * width + truncation * width
    window = (-truncation * width, float(window_end))
    return PulsePair(pump=pump, stokes=stokes, window=window, design="tailored",
                     alpha=alpha, fraction=fraction)


def local_adiabatic_residual(pair: PulsePair, *, n_points: int = 4001,
                             fd_step: float = 5e-4) -> float:
    """Max |theta_dot/Lambda - eps| over interior times (central differences).

    Verifies the defining constraint of a designed pair against the
    requested epsilon.  Endpoint neighbourhoods (one fd_step) are skipped
    because the one-sided kink at t_f would corrupt the stencil.
    """
    if pair.design != "local_adiabatic" or pair.info is None:
        raise GroverLabError("residual check applies to locally adiabatic pairs")
    design: LocalAdiabaticDesign = pair.info
    f = design.fraction
    t = np.linspace(pair.t_start + 2 * fd_step, pair.t_end - 2 * fd_step, n_points)

    def theta(ts):
        return -np.arctan(math.sqrt((1.0 - f) / f) * design.ratio(ts))

    theta_dot = (theta(t + fd_step) - theta(t - fd_step)) / (2.0 * fd_step)
    lam = np.sqrt((1.0 - f) * design.stokes(t) ** 2 + f * np.asarray(pair.pump(t)) ** 2)
    return float(np.max(np.abs(theta_dot / lam - pair.epsilon)))


# ---------------------------------------------------------------------------
# Sampled-pulse CSV interface
# ---------------------------------------------------------------------------

def write_pulse_csv(path: str | Path, times: np.ndarray, values: np.ndarray) -> None:
    """Two-column ``time,envelope`` CSV, time in units of the pulse width."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "envelope"])
        for t, v in zip(times, values):
            writer.writerow([f"{t:.15g}", f"{v:.15g}"])


def read_pulse_csv(path: str | Path) -> SampledPulse:
    """Read a two-column ``time,envelope`` CSV into a SampledPulse."""
    times, values = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["time", "envelope"]:
            raise GroverLabError(f"{path}: expected header 'time,envelope'")
        for row in reader:
            if not row:
                continue
            times.append(float(row[0]))
            values.append(float(row[1]))
    return SampledPulse(np.asarray(times), np.asarray(values))
