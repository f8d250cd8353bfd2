"""Time-space tradeoff algorithms: collision finding, element distinctness and
sliding-window statistics, all with metered costs and brute-force oracles."""

from .collide import CollideResult, CollisionRecord, RedirectionTable, collide_k, split_cycle
from .element_distinctness import EDParams, EDVerdict, ed_decide, single_round
from .freq_moments import MomentOutputs, fk_first_window, fk_update, fk_window_all
from .functional_graph import CycleInfo, HashChain, TableFunction, floyd_find
from .meter import Meter
from .oracle import OracleSpec, brute_collisions, brute_ed, brute_window_stats
from .order_stats import ExtremaOutputs, max_window_all, min_window_all
from .sliding_ed import WindowOutputs, ed_window_all, ed_window_average

__version__ = "0.1.0"

__all__ = [
    "CollideResult", "CollisionRecord", "CycleInfo", "EDParams", "EDVerdict", "ExtremaOutputs",
    "HashChain", "Meter", "MomentOutputs", "OracleSpec", "RedirectionTable", "TableFunction",
    "WindowOutputs", "brute_collisions", "brute_ed", "brute_window_stats", "collide_k",
    "ed_decide", "ed_window_all", "ed_window_average", "fk_first_window", "fk_update",
    "fk_window_all", "floyd_find", "max_window_all", "min_window_all", "single_round", "split_cycle",
]
