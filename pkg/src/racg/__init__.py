"""Recognizing right-angled Coxeter groups among groups generated by involutions."""

from .abelian import AbelianModel, Presentation, abelianize, ab_image, smith_normal_form
from .cliques import (
    CliqueGraph,
    ConditionReport,
    StarPoset,
    check_conditions,
    clique_above,
    clique_graph,
    collapse,
    star_poset,
)
from .errors import (
    CollapseError,
    ConditionFailure,
    GraphError,
    HypothesisViolation,
    InsufficientRank,
    NotAnInvolution,
    PresentationError,
    RacgError,
    ResourceLimit,
    SizeLimitExceeded,
    SupportNotClique,
)
from .extensions import (
    Decomposition,
    PartialConjugation,
    PCFamily,
    SemidirectEvaluator,
    all_sils,
    decompose,
    extension_defining_graph,
    extension_presentation,
    has_sil,
)
from .graph import Graph, is_isomorphic, j_minimal_vertices, maximal_cliques
from .involution import (
    InvolutionGraph,
    bounded_involution_enumeration,
    hypothetical_edges,
    involution_graph_racg,
    validate_full_system,
)
from .recognize import RecognitionInput, Verdict, load_input, parse_input, recognize
from .verify import verify_certificate
from .words import RacgContext, involution_class_rep, is_involution, normal_form

__version__ = "0.1.0"
