"""Exact per-vertex graphlet frequencies for large sparse graphs."""

from .conversion import (
    U16,
    ConversionMatrix,
    full_u16,
    inverse_pattern_check,
    net_from_raw,
    sub_matrix,
)
from .dictionary import (
    GRAPHLETS,
    Dictionary,
    GraphletDescriptor,
    family_closure,
    parse_dictionary,
    resolve_dependencies,
    warn_incomplete_family,
)
from .errors import (
    ConversionInconsistencyError,
    FrequencyOverflowError,
    GraphParseError,
    OracleCapError,
    StructuralError,
)
from .fields import FrequencyField, NetFrequencyField, RawFrequencyField
from .graph import (
    EdgeCollection,
    SanitizeOptions,
    SparseAdjacency,
    build_adjacency,
    degree_vector,
    parse_edge_list,
    parse_matrix_market,
    read_graph,
)
from .kernels import SparseRowAccumulator, TransformStats, raw_frequencies
from .transform import graphlet_transform

__version__ = "0.1.0"
