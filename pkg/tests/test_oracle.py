import random

import pytest

from mso_access.automaton import make_automaton
from mso_access.errors import AmbiguityError, SearchBudgetExceeded
from mso_access.fixtures import universal_automaton
from mso_access.oracle import (
    accepting_runs,
    enumerate_outputs,
    random_automaton,
    random_unambiguous_automaton,
    sorted_outputs,
)


def test_abbab_outputs(A0):
    got = sorted((m["x1"], m["x2"]) for m in enumerate_outputs(A0, "abbab"))
    assert got == [(1, 2), (4, 2), (4, 3), (4, 5)]


def test_abbbab_outputs(A0):
    assert len(enumerate_outputs(A0, "abbbab")) == 5


def test_runs_are_valid_and_accepting(A0):
    for run in accepting_runs(A0, "abbab"):
        assert run.end in A0.finals
        assert len(run.transitions) == 5


def test_duplicates_raise_ambiguity():
    a = make_automaton(["q0", "q1", "q2"], ["a"], ["x"],
                       [("q0", "a", {"x"}, "q1"), ("q0", "a", {"x"}, "q2")], "q0", ["q1", "q2"])
    assert len(enumerate_outputs(a, "a")) == 2
    with pytest.raises(AmbiguityError) as info:
        sorted_outputs(a, "a")
    assert info.value.witness == {"x": 1}


def test_guard_refuses_large_searches():
    big = universal_automaton(4)
    with pytest.raises(SearchBudgetExceeded):
        enumerate_outputs(big, "a" * 13)


def test_step_budget():
    u = universal_automaton(3)
    with pytest.raises(SearchBudgetExceeded):
        from mso_access.oracle import partial_runs
        partial_runs(u, "a" * 8, u.initial, max_steps=100)


@pytest.mark.parametrize("seed", range(30))
def test_random_automata_are_functional(seed):
    a = random_automaton(random.Random(seed))
    if a is None:
        return
    for run in accepting_runs(a, "abab"):
        assert run.is_valid(a.variables)


def test_random_unambiguous_is_deterministic():
    assert random_unambiguous_automaton(random.Random(3)) == random_unambiguous_automaton(random.Random(3))
