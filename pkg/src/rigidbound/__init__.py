"""Upper bounds on the number of planar embeddings of small Laman graphs."""
from .graph import Graph, canonical_form, from_graph6, to_graph6
from .mixed_volume import mixed_volume
from .pipeline import PipelineConfig, run_bounds, run_enumerate, run_mv
from .rigidity import classify, enumerate_laman, is_laman
from .subsystem import BoundReport, Budget, Subsystem, find_best_subsystem, graph_bound, uniquely_determining

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "Budget", "Graph", "PipelineConfig", "Subsystem", "canonical_form", "classify",
    "enumerate_laman", "find_best_subsystem", "from_graph6", "graph_bound", "is_laman", "mixed_volume",
    "run_bounds", "run_enumerate", "run_mv", "to_graph6", "uniquely_determining",
]
