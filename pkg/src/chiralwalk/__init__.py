"""Entanglement transfer via chiral and continuous-time quantum walks."""

from .graphs import (
    ChiralPhase,
    WeightedGraph,
    adjacency_matrix,
    complete_graph,
    cycle_graph,
    degree_matrix,
    graph_json_dict,
    hamiltonian,
    laplacian,
    reduce_phase,
    triangular_chain,
)
from .dynamics import (
    SpectralDecomposition,
    evolve_density,
    evolve_pure,
    occupation,
    propagator,
    site_amplitudes,
    spectral_decompose,
)
from .states import (
    SpatialPairSpec,
    WernerSpec,
    density_from_pure,
    localized,
    spatial_pair,
    target_pure,
    target_werner,
    werner,
)
from .measures import (
    bures_distance,
    concurrence_matrix,
    concurrence_pair_fast,
    concurrence_wootters,
    diagonal_bures,
    fidelity,
    pts_bures,
    reduced_pair,
    transfer_fidelity_pure,
)
from .experiments import (
    GraphSpec,
    PeakResult,
    ScalingResult,
    StateSpec,
    SweepRecord,
    TimeGrid,
    TraceSeries,
    bures_trace,
    concurrence_matrix_snapshots,
    concurrence_trace,
    ctqw_long_time,
    first_peak,
    global_max,
    occupation_trace,
    optimize_theta,
    scaling_sweep,
    sweep_table,
    top_peaks,
    transfer_fidelity_trace,
    werner_trace,
)

try:
    from importlib.metadata import version as _version

    __version__ = _version("chiralwalk")
except Exception:  # pragma: no cover
    __version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
