"""Causal model construction from systems of structural equations.

Classify equation systems, derive causal orderings (including for
under-constrained systems), evaluate explicit equations forward, and
drive interactive model building against a mechanism knowledge base.
"""

from .core import (
    DEFAULT_ATTRIBUTES,
    Equation,
    EquationKind,
    ExplicitForm,
    Manipulativity,
    Observability,
    StructuralSystem,
    SubsetCounts,
    VariableAttributes,
    build_system,
    merge_variables,
    rename_variable,
    structure_matrix,
    subset_counts,
)
from .errors import (
    CausalLoomError,
    EvaluationError,
    KbError,
    KbPathError,
    ModelError,
    OverConstrainedError,
    ParseError,
    WorkspaceError,
)
from .dsl import evaluate_forward, parse_model, serialize_model
from .kb import (
    KnowledgeBase,
    Mechanism,
    empty_kb,
    kb_get,
    kb_list,
    kb_load,
    kb_put,
    kb_save,
    kb_search_by_variable,
)
from .ordering import (
    Arc,
    ArcKind,
    CausalGraph,
    CompleteSubset,
    OrderingResult,
    SystemClass,
    causal_ordering,
    classify,
    max_equation_matching,
    minimal_self_contained_subsets,
    over_constraint_witness,
    release_candidates,
)
from .oracle import brute_force_classify, brute_force_ordering
from .workspace import (
    ActionResult,
    ActionStatus,
    ReleaseCandidate,
    Workspace,
    ws_add_mechanism,
    ws_cancel_pending,
    ws_extract,
    ws_from_model,
    ws_merge_variables,
    ws_new,
    ws_release_equation,
    ws_save,
    ws_load,
    ws_set_exogenous,
)

__version__ = "0.1.0"
