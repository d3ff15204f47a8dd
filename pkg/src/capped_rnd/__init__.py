"""Robust network design for capped hose traffic models."""

from .topology import (
    Node,
    ShortestPathIndex,
    Topology,
    TopologyError,
    load_topology,
    load_topology_file,
    shortest_paths,
)
from .traffic import (
    CappedHoseModel,
    DemandSeries,
    StrengthVectors,
    SweepConfig,
    check_membership,
    gravity_peaks,
    ingest_time_series,
    load_demand_series,
    marginal_strength,
    peak_strength,
    sample_marginals,
    sigma_vectors,
    strength_vectors,
)
from .demand_oracle import (
    fundamental_cut_capacity,
    pair_set_capacity,
    sparsity,
    u_star,
)
from .hub_routing import HubTree, btsm, hh_cost, hh_template, place_hubs, populate_capacities
from .evaluation import (
    CostReport,
    best_single_hub,
    link_cost,
    node_costs,
    sp_template,
    template_capacities,
    theorem2_fixture,
    tree_template_in_graph,
)
from .harness import InstanceRecord, run_sweep, run_timeseries, summarize

__version__ = "0.1.0"
