"""Temporal graph expressiveness toolkit."""

from .baselines import caw_anonymize, caw_encode_event, caw_walk_set, time_encode
from .corpus import corpus_build, corpus_verify
from .expressiveness import distinguish_events, distinguish_nodes, static_properties
from .graph import (
    Event,
    Snapshot,
    SnapshotSequence,
    TemporalGraph,
    ctdg_to_dtdg,
    dtdg_to_ctdg,
    load_events,
    make_graph,
    snapshot_at,
    temporal_neighborhood,
)
from .injective import enumerate_pair, injective_multiset_sum, intern
from .pint import PintConfig, PintEngine, memory_step, pint_edge_embedding, pint_node_embedding
from .posfeat import apply_batch, brute_force_counts, init_store
from .tct import build_monotone_tct, build_tct, tct_canonical, tct_isomorphic, temporal_diameter
from .twl import twl_compare, twl_refine

__version__ = "0.1.0"
