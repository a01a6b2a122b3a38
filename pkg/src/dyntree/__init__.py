"""Dynamic probabilistic tree embeddings with distance-oracle and buy-at-bulk front ends."""

from dyntree.buyatbulk import Demand, PriceFn, bab_query, tree_opt
from dyntree.embed_decr import DecrEmbedding
from dyntree.embed_full import DynamicEmbedding, FullState
from dyntree.forest import EmbedForest
from dyntree.graph import DynGraph, ball, snapshot_induced, sssp_exact
from dyntree.ldd import Ldd
from dyntree.oracle import Oracle
from dyntree.sampling import RngStream

__all__ = [
    "DecrEmbedding", "Demand", "DynGraph", "DynamicEmbedding", "EmbedForest", "FullState", "Ldd",
    "Oracle", "PriceFn", "RngStream", "ball", "bab_query", "snapshot_induced", "sssp_exact",
    "tree_opt",
]
