"""Critical-type invariants of Morse mappings on compact surfaces.

The package computes the complete path-component invariant of a Morse
mapping (homotopy vector, critical counts, boundary signs) from
triangulated input, builds and compares Kronrod-Reeb graphs and their
normal forms, and carries the exact integer symplectic machinery used to
factor homology actions that fix a fiber class.
"""

from .surface import (
    CriticalType,
    Surface,
    Target,
    critical_type_from_json,
    critical_type_to_json,
    euler_characteristic,
    flip_target_orientation,
    is_valid_critical_type,
    validate_critical_type,
)
from .krgraph import (
    CutDecomposition,
    KREdge,
    KRGraph,
    KRVertex,
    PieceClass,
    VertexKind,
    critical_type_of,
    cut_at_level,
    kr_isomorphic,
    piece_to_line_graph,
    regular_fiber_components,
    to_dot,
)
from .mesh import (
    HeightMesh,
    MeshFormatError,
    NotGenericError,
    NotMorseError,
    extract_kr_graph,
    format_hmesh,
    parse_hmesh,
    surface_of,
)
from .classify import (
    HalfPiece,
    equivalence_reason,
    equivalent_up_to_flip,
    is_minimal,
    is_minimal_composite,
    is_realizable,
    minimal_fiber_count,
    sigma_homotopy_equivalent,
)
from .canonical import InfeasibleTypeError, canonical_kr_graph
from .symplectic import (
    GenPower,
    SpMatrix,
    evaluate,
    format_matrix,
    format_word,
    gen,
    general_sp_factor,
    named_generator,
    omega_matrix,
    omega_product,
    parse_matrix,
    parse_word,
    stabilizer_decompose,
    symplectic_completion,
    transvection,
    word_inverse,
)
from .mcg import (
    Admissible,
    CurveClass,
    GeneratorKind,
    MCGGenerator,
    canonical_generator_set,
    degree_along,
    factor_stabilizer,
    level_set_class,
    twist_action,
    twist_admissible,
)

__version__ = "0.1.0"
