"""Prototypes, butterfly moves and cusps of genus-3 and genus-4 Prym eigenform loci.

Submodules:

* `exactnum`    exact arithmetic in Q(sqrt D) and 2x2 integer lattices
* `prototypes`  prototype families and their enumeration
* `butterfly`   butterfly moves on prototypes and reduced classes
* `components`  move graphs, components and classification checks
* `cusps`       cusp counts and the square-tiled degree
* `geometry`    polygon models, cylinder decompositions, saddle connections, origamis
* `cli`         command-line front end
"""

from .butterfly import INF, apply, apply_complete, is_admissible
from .components import build_graph, component_count, verify_classification
from .cusps import cusp_count, square_tiled_degree
from .exactnum import QuadNum
from .prototypes import (
    GENUS3,
    GENUS4,
    MODEL_A,
    MODEL_B,
    CompletePrototype,
    Prototype,
    ReducedClass,
    enumerate_complete,
    enumerate_prototypes,
    enumerate_reduced,
)

__version__ = "0.1.0"

__all__ = [
    "GENUS3", "GENUS4", "INF", "MODEL_A", "MODEL_B", "CompletePrototype", "Prototype", "QuadNum",
    "ReducedClass", "apply", "apply_complete", "build_graph", "component_count", "cusp_count",
    "enumerate_complete", "enumerate_prototypes", "enumerate_reduced", "is_admissible",
    "square_tiled_degree", "verify_classification",
]
