"""Flat-surface geometry of genus-3 Prym eigenforms.

Polygon models, exact cylinder decompositions, prototype identification,
saddle-connection and simple-cylinder search, and square-tiled surfaces.
"""

from .decompose import (
    DEFAULT_BUDGET,
    MODEL_C,
    MODEL_D,
    Cylinder,
    CylinderDecomposition,
    DecompositionError,
    IdentificationError,
    butterfly_direction,
    decompose,
    geometric_move,
    horizontal_decomposition,
    identify,
)
from .direction import DirectionSyntaxError, evaluate, parse_direction
from .origami import (
    Origami,
    OrigamiError,
    act_L,
    act_R,
    act_word,
    is_isomorphic,
    orbit,
    primitive_normalization,
    shear_surface,
    surface_to_origami,
    to_origami,
)
from .saddles import SimpleCylinder, find_simple_cylinders, saddle_connections
from .surface import (
    MODEL_AMINUS,
    MODEL_APLUS,
    MODEL_MODEL_B,
    SurfaceError,
    TranslationSurface,
    build_surface,
    model_area,
    normalize_model,
)

identify_prototype = identify

__all__ = [
    "DEFAULT_BUDGET", "MODEL_AMINUS", "MODEL_APLUS", "MODEL_C", "MODEL_D", "MODEL_MODEL_B",
    "Cylinder", "CylinderDecomposition", "DecompositionError", "DirectionSyntaxError",
    "IdentificationError", "Origami", "OrigamiError", "SimpleCylinder", "SurfaceError",
    "TranslationSurface", "act_L", "act_R", "act_word", "build_surface", "butterfly_direction",
    "decompose", "geometric_move",
    "evaluate", "find_simple_cylinders", "horizontal_decomposition", "identify",
    "identify_prototype", "is_isomorphic", "model_area", "normalize_model", "orbit",
    "parse_direction", "primitive_normalization", "saddle_connections", "shear_surface",
    "surface_to_origami", "to_origami",
]
