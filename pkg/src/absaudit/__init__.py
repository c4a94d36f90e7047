"""absaudit: audit and classify abstraction maps between causal models.

The package models finite structural causal models with explicit exogenous
distributions, builds the free category over their graphs, represents
two-layer abstraction maps (nodes/morphisms plus outcome matrices), audits
them against a catalog of structural and distributional properties, and
classifies them against a taxonomy of abstraction types whose canonical
witnesses reproduce the shipped admissibility tables.
"""

from .abstraction import (
    GLOBAL,
    Abstraction,
    Direction,
    OutcomeMap,
    StructuralMap,
    block_domain,
    compose_abstractions,
    preimage,
    pushforward,
    validate_abstraction,
)
from .audit import (
    PropertyProfile,
    audit_abstraction,
    audit_functor,
    audit_node_map,
    audit_outcome_map,
    tri_and,
)
from .errors import (
    AbsauditError,
    CapacityError,
    GranularityError,
    KernelUndefinedError,
    ModelError,
    ParseError,
    RenormalizationRequiredError,
    TOL,
)
from .freecat import Morphism, all_morphisms, compose, generators, hom_set, identity
from .scm import (
    Dag,
    Distribution,
    Exogenous,
    Kernel,
    Scm,
    ValidationReport,
    Variable,
    intervene,
    joint_distribution,
    marginal,
    mechanism_kernel,
    topological_order,
    underlying_graph,
    validate_scm,
)
from .taxonomy import (
    Admissibility,
    DistributionalType,
    PropertyMatrix,
    StructuralType,
    canonical_witness,
    detect_types,
    distributional_matrix,
    shipped_table,
    structural_matrix,
)
from .textfmt import Document, emit_document, parse_document, parse_path

__version__ = "1.0.0"

__all__ = [
    "TOL",
    "GLOBAL",
    "Abstraction",
    "AbsauditError",
    "Admissibility",
    "CapacityError",
    "Dag",
    "Direction",
    "Distribution",
    "DistributionalType",
    "Document",
    "Exogenous",
    "GranularityError",
    "Kernel",
    "KernelUndefinedError",
    "ModelError",
    "Morphism",
    "OutcomeMap",
    "ParseError",
    "PropertyMatrix",
    "PropertyProfile",
    "RenormalizationRequiredError",
    "Scm",
    "StructuralMap",
    "StructuralType",
    "ValidationReport",
    "Variable",
    "all_morphisms",
    "audit_abstraction",
    "audit_functor",
    "audit_node_map",
    "audit_outcome_map",
    "block_domain",
    "canonical_witness",
    "compose",
    "compose_abstractions",
    "detect_types",
    "distributional_matrix",
    "emit_document",
    "generators",
    "hom_set",
    "identity",
    "intervene",
    "joint_distribution",
    "marginal",
    "mechanism_kernel",
    "parse_document",
    "parse_path",
    "preimage",
    "pushforward",
    "shipped_table",
    "structural_matrix",
    "topological_order",
    "tri_and",
    "underlying_graph",
    "validate_abstraction",
    "validate_scm",
]
