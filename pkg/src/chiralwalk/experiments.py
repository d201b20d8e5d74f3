"""Sweep experiments: time traces, peak detection, phase optimization, scaling.

Everything here is deterministic: a given parameter set always produces the
same numbers, and parallel sweeps merge their results in canonical parameter
order so they match sequential runs exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import graphs, measures, states
from .dynamics import (
    SpectralDecomposition,
    evolve_density,
    site_amplitudes,
    spectral_decompose,
)

MAX_GRID_POINTS = 10**7
PEAK_NOISE_FLOOR = 0.01
LONG_TIME_DT = 0.02
THETA_CANDIDATES = (-np.pi / 2, np.pi / 2)


# ---------------------------------------------------------------------------
# parameter specs


@dataclass(frozen=True)
class GraphSpec:
    """Which graph to walk on: kind in {tri, cycle, pentagram}."""

    kind: str
    n: int
    theta: float = 0.0
    magnitude: float = 1.0

    def build(self) -> graphs.WeightedGraph:
        if self.kind == "tri":
            return graphs.triangular_chain(self.n, self.theta, self.magnitude)
        if self.kind == "cycle":
            return graphs.cycle_graph(self.n, self.theta)
        if self.kind in ("pentagram", "complete"):
            return graphs.complete_graph(self.n, self.theta)
        raise ValueError(f"unknown graph kind {self.kind!r}")

    def decompose(self) -> SpectralDecomposition:
        return spectral_decompose(graphs.hamiltonian(self.build()))


@dataclass(frozen=True)
class StateSpec:
    """Initial state: localized:site, pair:i,j:phi, or werner:b."""

    kind: str
    site: int = 1
    i: int = 1
    j: int = 2
    phi: float = math.pi
    b: float = 1.0

    def build_pure(self, n: int) -> np.ndarray | None:
        """Amplitude vector, or None when the state is mixed."""
        if self.kind == "localized":
            return states.localized(n, self.site)
        if self.kind == "pair":
            return states.spatial_pair(n, self.i, self.j, self.phi)
        if self.kind == "werner":
            return None
        raise ValueError(f"unknown state kind {self.kind!r}")

    def build_density(self, n: int) -> np.ndarray:
        psi = self.build_pure(n)
        if psi is not None:
            return states.density_from_pure(psi)
        return states.werner(n, self.b)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid on [t_start, t_end] with step dt."""

    t_start: float
    t_end: float
    dt: float

    def __post_init__(self):
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise ValueError("grid endpoints must be finite")
        if not self.t_start < self.t_end:
            raise ValueError(f"empty grid: t_start {self.t_start} >= t_end {self.t_end}")
        if not self.dt > 0:
            raise ValueError(f"grid step must be positive, got {self.dt}")
        if (self.t_end - self.t_start) / self.dt > MAX_GRID_POINTS:
            raise ValueError("grid would exceed the point-count guard")

    def times(self) -> np.ndarray:
        count = int(math.floor((self.t_end - self.t_start) / self.dt + 1e-9))
        return self.t_start + self.dt * np.arange(count + 1)


@dataclass(frozen=True)
class TraceSeries:
    """A scalar measure sampled over a time grid, with labeling metadata."""

    times: np.ndarray
    values: np.ndarray
    label: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if times.size >= 2 and not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class PeakResult:
    """A detected peak; found=False marks an explicit no-peak outcome."""

    t_peak: float
    value: float
    kind: str
    found: bool = True


@dataclass(frozen=True)
class SweepRecord:
    """One row of a phase-optimization table."""

    n: int
    phi: float
    theta: float
    t: float
    concurrence: float
    horizon: float
    top_peaks: tuple[PeakResult, ...] = ()


@dataclass(frozen=True)
class ScalingResult:
    """First-peak transfer times and values per chain size, with a linear fit."""

    entries: tuple[tuple[int, float, float], ...]  # (n, t_peak, concurrence)
    slope: float
    intercept: float
    r_squared: float


# ---------------------------------------------------------------------------
# traces


def concurrence_trace(
    graph_spec: GraphSpec,
    state_spec: StateSpec,
    grid: TimeGrid,
    pair: tuple[int, int] | None = None,
) -> TraceSeries:
    """Pairwise concurrence C_{i,j}(t) over the grid; default pair (n-1, n)."""
    n = graph_spec.n
    i, j = pair if pair is not None else (n - 1, n)
    d = graph_spec.decompose()
    times = grid.times()
    psi0 = state_spec.build_pure(n)
    if psi0 is not None:
        amp = site_amplitudes(d, psi0, times)
        values = 2.0 * np.abs(amp[i - 1] * np.conj(amp[j - 1]))
        values = np.clip(values, 0.0, 1.0)
    else:
        rho0 = state_spec.build_density(n)
        values = np.array(
            [measures.concurrence_pair_fast(evolve_density(d, rho0, t), i, j) for t in times]
        )
    return TraceSeries(
        times,
        values,
        label=f"concurrence:{i},{j}",
        params={"graph": graph_spec, "state": state_spec},
    )


def occupation_trace(
    graph_spec: GraphSpec, state_spec: StateSpec, grid: TimeGrid, site: int
) -> TraceSeries:
    """Occupation probability P_site(t) over the grid."""
    n = graph_spec.n
    if not 1 <= site <= n:
        raise IndexError(f"site index {site} out of range 1..{n}")
    d = graph_spec.decompose()
    times = grid.times()
    psi0 = state_spec.build_pure(n)
    if psi0 is not None:
        values = np.abs(site_amplitudes(d, psi0, times)[site - 1]) ** 2
    else:
        rho0 = state_spec.build_density(n)
        values = np.array(
            [np.real(evolve_density(d, rho0, t)[site - 1, site - 1]) for t in times]
        )
    return TraceSeries(
        times,
        np.clip(values, 0.0, 1.0),
        label=f"occupation:{site}",
        params={"graph": graph_spec, "state": state_spec},
    )


def transfer_fidelity_trace(
    graph_spec: GraphSpec, state_spec: StateSpec, grid: TimeGrid, target_phi: float | None = None
) -> TraceSeries:
    """Squared overlap with the right-end target state over the grid."""
    n = graph_spec.n
    psi0 = state_spec.build_pure(n)
    if psi0 is None:
        raise ValueError("transfer fidelity trace needs a pure initial state")
    phi = state_spec.phi if target_phi is None else float(target_phi)
    target = states.target_pure(n, phi)
    d = graph_spec.decompose()
    times = grid.times()
    amp = site_amplitudes(d, psi0, times)
    values = np.abs(target.conj() @ amp) ** 2
    return TraceSeries(
        times,
        np.clip(values, 0.0, 1.0),
        label="transfer-fidelity",
        params={"graph": graph_spec, "state": state_spec, "target_phi": phi},
    )


def bures_trace(graph_spec: GraphSpec, state_spec: StateSpec, grid: TimeGrid) -> TraceSeries:
    """Diagonal-only Bures distance between rho(t) and rho(-t) over the grid."""
    n = graph_spec.n
    d = graph_spec.decompose()
    times = grid.times()
    psi0 = state_spec.build_pure(n)
    if psi0 is not None:
        fwd = np.abs(site_amplitudes(d, psi0, times))
        bwd = np.abs(site_amplitudes(d, psi0, -times))
        values = np.linalg.norm(fwd - bwd, axis=0)
    else:
        rho0 = state_spec.build_density(n)
        values = np.array([measures.pts_bures(d, rho0, t) for t in times])
    return TraceSeries(
        times,
        values,
        label="pts-bures",
        params={"graph": graph_spec, "state": state_spec},
    )


def werner_trace(n: int, b: float, theta: float, grid: TimeGrid) -> TraceSeries:
    """Fidelity of an evolving Werner state against its transferred target."""
    spec = GraphSpec("tri", n, theta)
    d = spec.decompose()
    rho0 = states.werner(n, b)
    target = states.target_werner(n, b)
    times = grid.times()
    values = np.array([measures.fidelity(evolve_density(d, rho0, t), target) for t in times])
    return TraceSeries(
        times,
        values,
        label=f"werner-fidelity:b={b}",
        params={"graph": spec, "b": b},
    )


def concurrence_matrix_snapshots(
    graph_spec: GraphSpec, state_spec: StateSpec, times
) -> list[np.ndarray]:
    """Full pairwise-concurrence matrix at each requested time."""
    d = graph_spec.decompose()
    rho0 = state_spec.build_density(graph_spec.n)
    return [measures.concurrence_matrix(evolve_density(d, rho0, t)) for t in times]


# ---------------------------------------------------------------------------
# peak detection


def _refine(times: np.ndarray, values: np.ndarray, k: int) -> tuple[float, float]:
    # Parabola through the three samples around index k; falls back to the
    # grid point for boundary or degenerate (flat) neighborhoods.
    if k <= 0 or k >= len(values) - 1:
        return float(times[k]), float(values[k])
    y1, y2, y3 = values[k - 1], values[k], values[k + 1]
    denom = y1 - 2.0 * y2 + y3
    if abs(denom) < 1e-300:
        return float(times[k]), float(values[k])
    shift = 0.5 * (y1 - y3) / denom
    dt = times[k + 1] - times[k]
    return float(times[k] + shift * dt), float(y2 - 0.25 * (y1 - y3) * shift)


def first_peak(series: TraceSeries, noise_floor: float = PEAK_NOISE_FLOOR) -> PeakResult:
    """Earliest local maximum above the noise floor, parabolically refined."""
    v = series.values
    if len(v) < 3:
        raise ValueError(f"need at least 3 samples, got {len(v)}")
    for k in range(1, len(v) - 1):
        if v[k] >= v[k - 1] and v[k] >= v[k + 1] and v[k] > noise_floor:
            t, val = _refine(series.times, v, k)
            return PeakResult(t, val, "first-local-max")
    return PeakResult(math.nan, math.nan, "no-peak", found=False)


def global_max(series: TraceSeries) -> PeakResult:
    """Largest value over the grid (earliest wins ties), parabolically refined."""
    k = int(np.argmax(series.values))
    t, val = _refine(series.times, series.values, k)
    return PeakResult(t, val, "global-max")


def top_peaks(series: TraceSeries, count: int = 3) -> tuple[PeakResult, ...]:
    """The ``count`` highest interior local maxima, best first."""
    v = series.values
    found = []
    for k in range(1, len(v) - 1):
        if v[k] >= v[k - 1] and v[k] >= v[k + 1]:
            t, val = _refine(series.times, v, k)
            found.append(PeakResult(t, val, "local-max"))
    found.sort(key=lambda p: (-p.value, p.t_peak))
    return tuple(found[:count])


# ---------------------------------------------------------------------------
# long-time sweeps


def optimize_theta(
    n: int,
    phi: float,
    theta_candidates=THETA_CANDIDATES,
    horizon: float = 500.0,
    dt: float = LONG_TIME_DT,
) -> SweepRecord:
    """Best chiral phase for long-time transfer of the pair state (1, 2).

    Runs a global-max search over [0, horizon] for every candidate theta and
    keeps the winner; exact value ties break toward smaller |theta|, then
    toward the positive sign.
    """
    candidates = tuple(theta_candidates)
    if not candidates:
        raise ValueError("need at least one theta candidate")
    grid = TimeGrid(0.0, horizon, dt)
    state = StateSpec("pair", i=1, j=2, phi=phi)
    best: SweepRecord | None = None
    best_key = None
    for theta in candidates:
        series = concurrence_trace(GraphSpec("tri", n, theta), state, grid)
        peak = global_max(series)
        record = SweepRecord(
            n, phi, float(theta), peak.t_peak, peak.value, horizon, top_peaks(series)
        )
        key = (record.concurrence, -abs(record.theta), record.theta)
        if best is None or key > best_key:
            best, best_key = record, key
    return best


def ctqw_long_time(
    n: int, phi: float, horizon: float = 500.0, dt: float = LONG_TIME_DT
) -> SweepRecord:
    """Long-time global maximum for the plain walk (theta = 0)."""
    return optimize_theta(n, phi, (0.0,), horizon, dt)


def _table_task(args) -> SweepRecord:
    mode, n, phi, horizon, dt, candidates = args
    if mode == "cqw":
        return optimize_theta(n, phi, candidates, horizon, dt)
    if mode == "ctqw":
        return ctqw_long_time(n, phi, horizon, dt)
    raise ValueError(f"unknown table mode {mode!r}")


def sweep_table(
    mode: str,
    n_values,
    phi: float = math.pi,
    horizon: float = 500.0,
    dt: float = LONG_TIME_DT,
    theta_candidates=THETA_CANDIDATES,
    workers: int = 1,
) -> list[SweepRecord]:
    """One SweepRecord per chain size, in the order given."""
    tasks = [(mode, int(n), phi, horizon, dt, tuple(theta_candidates)) for n in n_values]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_table_task, tasks))
    return [_table_task(t) for t in tasks]


# ---------------------------------------------------------------------------
# chain-size scaling


def _scaling_task(args) -> tuple[int, float, float]:
    n, theta, state_spec, grid = args
    series = concurrence_trace(GraphSpec("tri", n, theta), state_spec, grid)
    peak = first_peak(series)
    if not peak.found:
        raise ArithmeticError(f"no transfer peak found for n = {n} within the grid")
    return (n, peak.t_peak, peak.value)


def scaling_sweep(
    n_values,
    theta: float,
    state_spec: StateSpec | None = None,
    grid: TimeGrid | None = None,
    workers: int = 1,
) -> ScalingResult:
    """First transfer peak per chain size plus a linear fit of time vs size."""
    if state_spec is None:
        state_spec = StateSpec("pair", i=1, j=2, phi=math.pi)
    if grid is None:
        grid = TimeGrid(0.0, 40.0, 0.005)
    tasks = [(int(n), theta, state_spec, grid) for n in n_values]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_scaling_task, tasks))
    else:
        entries = [_scaling_task(t) for t in tasks]
    ns = np.array([e[0] for e in entries], dtype=float)
    tmax = np.array([e[1] for e in entries])
    if len(entries) >= 2:
        slope, intercept = np.polyfit(ns, tmax, 1)
        resid = tmax - (slope * ns + intercept)
        total = tmax - tmax.mean()
        denom = float(total @ total)
        r2 = 1.0 - float(resid @ resid) / denom if denom > 0 else 1.0
    else:
        slope, intercept, r2 = math.nan, math.nan, math.nan
    return ScalingResult(tuple(entries), float(slope), float(intercept), float(r2))
