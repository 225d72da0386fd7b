"""Workbench for weighted clones and weighted relational clones on a finite domain.

Everything is exact: weights are arbitrary-precision rationals (plus a
positive infinity), cone and LP answers come with certificates that are
re-verified independently of the solver, and all enumeration orders are
canonical so runs are reproducible byte for byte.
"""

from .algebra import (
    Operation,
    OperationSet,
    TupleMatrix,
    apply,
    clone_closure,
    enumerate_ops,
    index_tuple,
    projection,
    projections,
    superpose,
    tuple_index,
)
from .counterexamples import (
    BracketedParam,
    OmegaFamily,
    family_inequality_holds,
    gamma_family_member,
    mu_minus,
    mu_plus,
    narrowing_check,
    omega_family,
    slope_condition_holds,
    sqrt2_bracket,
)
from .errors import CapExceededError, ImproperWeightingError, InternalCheckError, WcloneError
from .galois import (
    GaloisWorkspace,
    ImpMember,
    ImpSeparated,
    WCloneMember,
    WCloneSeparated,
    construct_iota,
    construct_mu,
    express_from_certificate,
    imp_membership,
    wclone_membership,
)
from .improve import (
    ImprovementRow,
    find_weighted_polymorphism,
    improvement_rows,
    improvement_value,
    is_polymorphism,
    is_weighted_polymorphism,
    pol,
)
from .lp import (
    ConeMember,
    ConeProblem,
    ConeSeparated,
    LinearConstraint,
    LpFeasible,
    LpInfeasible,
    LpOptimal,
    LpUnbounded,
    check_cone_decision,
    check_farkas,
    check_feasible_point,
    cone_membership,
    cone_problem,
    linear_constraint,
    lp_feasible,
)
from .rational import BACKEND, INF, Rat, is_inf, parse_rat, parse_value, rat
from .reductions import ReductionReport, normalize_nonnegative, reduce_opt, reduce_scale, verify_report
from .vcsp import VcspInstance, delta, evaluate, evaluate_scaled, gadget_project, instance, solve
from .wops import (
    ProperSumResult,
    Weighting,
    add_weightings,
    check_weighting,
    is_proper,
    proper_sum,
    scale_weighting,
    superpose_weighting,
    supp,
    supp_set,
    weighting_from_pairs,
    zero_weighting,
)
from .wrel import (
    Language,
    WeightedRelation,
    add,
    empty_relation,
    equality_relation,
    feas,
    minimise,
    normalize_relation,
    opt,
    scale,
    shift,
    tables_equal,
    wrel_from_values,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
