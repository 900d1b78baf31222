"""Essential inputs and fictive-input reduction for deterministic finite tree automata."""
from ._kernel import BACKEND
from .automaton import (
    SearchBudget,
    TreeAutomaton,
    accepts,
    assignments_over,
    dump_fta,
    format_fta,
    load_fta,
    parse_fta,
    recognizable,
    run,
    sweep,
    validate,
)
from .equivalence import (
    CoverageVerdict,
    EquivalenceVerdict,
    a_equivalent,
    check_theorem2_replacement,
    is_f0_covered,
    ra_equivalent,
)
from .errors import (
    AutomatonError,
    EssentreeError,
    InvalidPosition,
    PreconditionViolation,
    SearchBudgetExceeded,
    SignatureError,
    TermSyntaxError,
    UnboundVariable,
)
from .essential import (
    EssentialityReport,
    Witness,
    ess_set,
    essential_chain,
    essentiality_report,
    is_essential,
    is_r_essential,
    r_ess_set,
)
from .language import (
    FinitenessResult,
    InfiniteLanguage,
    OptimalPair,
    UsefulnessReport,
    count_ground,
    enumerate_ground,
    is_finite_language,
    languages_equivalent,
    minimal_language,
    minimize_automaton,
    optimal_pair,
    usefulness,
)
from .reduction import (
    RewriteStep,
    afi_subterm_step,
    afi_variable_step,
    is_minimal_in,
    is_rfi_irreducible,
    reduce,
    reduces_to,
    rfi_subterm_step,
    rfi_variable_step,
)
from .terms import (
    App,
    Position,
    Signature,
    Term,
    Var,
    depth,
    format_position,
    format_term,
    head,
    is_proper_subterm,
    parse_position,
    parse_term,
    positions,
    replace_at,
    strong_chain_to_root,
    substitute,
    subterm_at,
    variables,
)

__version__ = "0.1.0"
