"""modgraph: exact engine for connected undirected graphs with loose ends,
their graphical category, and finite coloured modular operads."""

from .errors import (
    BettiUndefined,
    CompositionIncompatible,
    Disconnected,
    FactorizationFailed,
    IncompatibleLevels,
    InvolutionFixedPoint,
    InvolutionNotPairing,
    LambdaEven,
    ModgraphError,
    NodelessLoopUnrepresentable,
    NotGenerated,
    NotSegal,
    ProfileMismatch,
    SearchBudgetExceeded,
    UnknownArcOrVertex,
    UnknownVertex,
    UnsupportedRelation,
)
from .graphs import (
    FeynmanGraph,
    GenusGraph,
    betti,
    boundary,
    canonical_key,
    canonicalize,
    degree,
    edge,
    edges,
    graph_from_json,
    graph_to_json,
    internal_edges,
    is_connected,
    is_isomorphic,
    is_stable,
    isomorphisms,
    neighbourhood,
    new_graph,
    star,
    star_of_graph,
    star_of_vertex,
    total_genus,
)
from .embeddings import (
    Embedding,
    canonical_star_embedding,
    edge_class_embedding,
    emb_classes,
    enumerate_embeddings,
    validate_embedding,
)
from .maps import (
    GraphicalMap,
    boundary_bijection,
    compose,
    compose_chain,
    hom_set,
    identity_map,
    substitute,
    validate_graphical_map,
)
from .elementary import (
    ElementaryKind,
    classify_elementary,
    codegeneracies_out_of,
    codegeneracy_at,
    contract_edge,
    elementary_cofaces_into,
    embedding_as_map,
    factorize,
    inner_coface_at,
    inner_cofaces_into,
    iso_as_map,
    outer_cofaces_into,
)
from .operads import (
    ColourSet,
    Decoration,
    GradedModularOperad,
    ModularOperad,
    bad_charge_operad,
    twisted_charge_operad,
    charge_operad,
    decorations,
    evaluate,
    graded_charge_operad,
    modular_operads_isomorphic,
    restrict,
    swap_terminal_operad,
    terminal_operad,
    truncate_arity,
    truncate_genus,
    underlying_cyclic,
    validate_decoration,
    validate_modular_operad,
)
from .presheaves import (
    FinPresheaf,
    Horn,
    OverlayPresheaf,
    extract_modular_operad,
    has_unique_filler,
    horn,
    is_strict_inner_kan,
    is_strict_segal,
    make_carrier,
    nerve_extract_correspondence,
    nerve_presheaf,
    representable,
    segal_limit,
    segal_map,
)
from .variants import (
    GenusMorphism,
    in_u0,
    in_ucyc,
    ust_has_no_codegeneracies,
    ust_morphisms,
    validate_genus_morphism,
    verify_sieve,
)
from .profinite import (
    FiniteGroup,
    FiniteGroupoid,
    GroupoidFunctor,
    InverseSystem,
    ProfiniteInt,
    completion_of_finite_group,
    cyclic_group,
    dihedral_group,
    group_as_groupoid,
    groupoid_equivalence,
    groupoid_product,
    limit,
    product_completion_check,
    product_group,
    symmetric_group,
    zhat_add,
    zhat_from_int,
    zhat_mul,
    zhat_tower,
)
from .words import (
    GtPair,
    check_relation,
    check_relation_i,
    check_relation_ii,
    induced_endo_on_quotient,
    reduce_word,
    substitute as substitute_word,
    word,
    word_str,
)

__version__ = "0.1.0"
