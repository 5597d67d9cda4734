"""Decision procedures and constructions for arithmetic with square-free predicates."""
from .core import (FALSE, TRUE, And, EqZero, Exists, Formula, GSystem, InP, InU, Interval,
                   LtZero, Not, Or, PCondition, SatResult, SpecialFormula, Term, Theory,
                   Truth, sqf)
from .decide import (DensityEstimate, check_formula, check_sat, constructive_witness,
                     count_solutions, decide_sentence, density_estimate, eliminate_exists,
                     enumerate_formula, enumerate_witnesses)
from .errors import (BudgetExhausted, DisjunctLimit, ExactnessExceeded,
                     LocallyUnsatisfiable, SqfreeError, TheoryViolation,
                     WitnessBoundExhausted)
from .localsolve import condense, eliminate_exists_local, p_satisfiable
from .normalize import boundary, conjugate, to_gsystems
from .numtheory import count_squarefree_upto, crt, is_in_Pm, is_in_U, vp
from .parser import ParseError, parse_formula, parse_term, print_formula

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
