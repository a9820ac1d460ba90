"""Solvers for the balanced two-period travelling salesman problem.

Fixed nodes (node 0 always among them) are visited in both tours, every
other node in exactly one, and the tour sizes may differ by at most ``p``.
"""

from .exact_dp import dp_boundary, solve_kalmanson_exact
from .instance import (
    InfeasibleError,
    Instance,
    InstanceError,
    ParseError,
    euclidean_matrix,
    from_coords,
    generate_instance,
    load_instance,
    make_rng,
    read_instance,
    save_instance,
    tour_size_bounds,
    write_instance,
)
from .kalmanson import KalmansonWitness, cyclic_shift, is_kalmanson, master_tour_length, permute_matrix
from .ks import ks_all, ks_multi, ks_solve
from .oracle import brute_force_2tsp, brute_force_vrp2
from .pipeline import PRESETS, Record, SolverConfig, preset, rp_initial, run_pipeline
from .report import bench_csv, gap_pct, gap_table, read_best_known, render_svg, run_bench
from .sliding import WindowConfig, disassemble, entity_count, h_improve, window_placements
from .tours import (
    Solution,
    TwoTourSequence,
    improve_tours,
    nearest_neighbour,
    sequence_length,
    swap_tours,
    tour_length,
    two_opt,
    validate_sequence,
)
from .vrp2 import (
    AggregatedCustomer,
    Vrp2Instance,
    Vrp2Solution,
    aggregate_path,
    expand_route,
    solve_vrp2_exact,
    to_vrp2,
)

__version__ = "0.1.0"
