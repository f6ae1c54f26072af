"""Direct access to the outputs of unambiguous functional vset automata over strings."""
from .access import DAIndex, constrained_count, count, direct_access, enumerate_outputs, preprocess
from .automaton import (
    Transition,
    VsetAutomaton,
    check_unambiguous,
    compute_var_sets,
    make_automaton,
    parse_automaton,
    trim,
    validate,
)
from .editing import EditProgram, StringsDB, apply_program, materialize, parse_program
from .errors import (
    AmbiguityError,
    AutomatonSyntaxError,
    EmptyAutomatonError,
    FunctionalityError,
    MsoAccessError,
    OutOfBounds,
    ProgramError,
    SearchBudgetExceeded,
)

__all__ = [
    "AmbiguityError", "AutomatonSyntaxError", "DAIndex", "EditProgram", "EmptyAutomatonError",
    "FunctionalityError", "MsoAccessError", "OutOfBounds", "ProgramError", "SearchBudgetExceeded",
    "StringsDB", "Transition", "VsetAutomaton", "apply_program", "check_unambiguous",
    "compute_var_sets", "constrained_count", "count", "direct_access", "enumerate_outputs",
    "make_automaton", "materialize", "parse_automaton", "parse_program", "preprocess", "trim",
    "validate",
]
