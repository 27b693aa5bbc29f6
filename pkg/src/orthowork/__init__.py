"""Finite lattices, ortholattices, their extensions and polynomial interpolation."""
from .constructions import (
    ConstructionResult,
    chain_union,
    dual_copy,
    glued_union,
    horizontal_sum,
    ortho_commutes_with_union,
    ortho_construction,
    ortho_tower,
    power,
    power_witness,
    product,
)
from .documents import Workspace, export_dot, lattice_from_doc, lattice_to_doc, parse_function
from .exceptions import *  # noqa: F401,F403
from .interpolation import (
    CloneTable,
    FunctionTable,
    Mode,
    PipelineTrace,
    antichain_lift,
    extend_pipeline,
    interpolate_unary,
    iterate_cover,
    monotone_check,
    nary_reduce,
    polynomial_clone,
)
from .lattice import (
    FiniteLattice,
    Poset,
    boolean_lattice,
    chain,
    diamond,
    dm_completion,
    dual,
    pentagon,
    subset_inf,
    subset_sup,
    validate_lattice,
)
from .morphisms import (
    Embedding,
    check_convex,
    check_sub01,
    check_subortholattice,
    check_triangle,
    check_triangle_dual,
    sup_agreement,
)
from .ortho import Ortholattice, check_de_morgan, validate_ortho, zoo
from .terms import Const, Join, Meet, Perp, Var, as_two_variable_lattice_term, evaluate, nnf, parse, to_text

__version__ = "0.1.0"
