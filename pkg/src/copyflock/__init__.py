"""copyflock: batch detection of coordinated content injection.

Finds groups of accounts that post near-duplicate content at nearly the
same time, builds the resulting copy graph, extracts botnet communities
and tracks them over time, and situates them against interaction layers,
trending topics and account feature distributions.
"""

__version__ = "0.1.0"

from .community import CommunityAssignment, greedy_modularity, modularity_score
from .copygraph import CopyGraph, FilterConfig, NodeStats, build_graph, filter_graph, graph_stats
from .corpus import Account, CorpusIndex, Period, Tweet, load_corpus, slice_period
from .detector import (
    Copy,
    CopyEvent,
    DetectorConfig,
    WindowTask,
    detect_all,
    detect_window,
    make_windows,
    sweep_jaccard,
    sweep_window,
)
from .tokens import TokenSet, jaccard, tokenize

__all__ = [
    "__version__",
    "Account",
    "CommunityAssignment",
    "Copy",
    "CopyEvent",
    "CopyGraph",
    "CorpusIndex",
    "DetectorConfig",
    "FilterConfig",
    "NodeStats",
    "Period",
    "TokenSet",
    "Tweet",
    "WindowTask",
    "build_graph",
    "detect_all",
    "detect_window",
    "filter_graph",
    "graph_stats",
    "greedy_modularity",
    "jaccard",
    "load_corpus",
    "make_windows",
    "modularity_score",
    "slice_period",
    "sweep_jaccard",
    "sweep_window",
    "tokenize",
]
