"""Decision procedures for reachability problems over SL(2,Z) generated by S and R."""

from .automata import SignedNFA, Witness, decide_intersection, saturate
from .constraint import compile_constraint
from .integers import Congruence, ResidueClass, ext_gcd, solve_congruence, solve_congruence_system
from .mat2 import IDENTITY, R_MAT, S_MAT, T, Mat2, Vec2, smith_normal_form
from .oracle import SearchBudgetExceeded, SearchConfig, bfs_search
from .reach import (
    ANY_INTEGER,
    NONNEGATIVE,
    Verdict,
    decide_constrained,
    decide_flt,
    decide_power_equation,
    decide_scalar_special,
    decide_vector,
)
from .solve import (
    All,
    Empty,
    Line,
    LinePair,
    Rat,
    TwoParamLine,
    mobius,
    solve_flt_equation,
    solve_scalar_special,
    solve_vector_equation,
)
from .words import SignedWord, WordBudgetExceeded, eval_phi, reduce, synthesize

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
