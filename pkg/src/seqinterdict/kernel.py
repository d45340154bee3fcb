"""Backend selection for the shortest-path / max-flow kernels.

The compiled extension is used when it imports; set
``SEQINTERDICT_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

from seqinterdict import _pykernel

PyTopology = _pykernel.Topology

try:
    from seqinterdict._ckernel import Topology as CTopology
except ImportError:  # extension not built
    CTopology = None

if CTopology is not None and os.environ.get("SEQINTERDICT_PURE_PYTHON", "") in ("", "0"):
    Topology = CTopology
else:
    Topology = PyTopology

BACKEND = Topology.backend

__all__ = ["Topology", "PyTopology", "CTopology", "BACKEND"]
