"""Sequential shortest-path interdiction with a greedy interdictor and a strategic evader."""

from seqinterdict.graph import (
    UNREACHABLE,
    Arc,
    DirectedGraph,
    Path,
    shortest_path,
    restrict,
)
from seqinterdict.kernel import BACKEND

__version__ = "0.1.0"
