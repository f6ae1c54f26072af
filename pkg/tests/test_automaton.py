import pytest

from mso_access.automaton import (
    check_unambiguous,
    compute_var_sets,
    make_automaton,
    mapping_key,
    parse_automaton,
    parse_order,
    resolve_order,
    serialize,
)
from mso_access.errors import (
    AutomatonSyntaxError,
    EmptyAutomatonError,
    FunctionalityError,
    MsoAccessError,
)
from mso_access.fixtures import A0_TEXT, universal_automaton
from mso_access.oracle import enumerate_outputs


def test_a0_var_sets(A0):
    got = {A0.states[q]: set(vs) for q, vs in enumerate(A0.var_sets)}
    assert got == {"q0": set(), "q1": {"x1"}, "q2": {"x2"}, "q3": {"x1", "x2"}}


def test_a0_is_unambiguous(A0):
    assert check_unambiguous(A0) == (True, None)


def test_serialize_round_trip(A0):
    again = parse_automaton(serialize(A0))
    assert again == A0


def test_conflicting_var_sets_rejected():
    # q1 is reached with {x1} and with nothing
    with pytest.raises(FunctionalityError):
        make_automaton(["q0", "q1"], ["a", "b"], ["x1"],
                       [("q0", "a", {"x1"}, "q1"), ("q0", "b", set(), "q1"),
                        ("q1", "a", set(), "q1")], "q0", ["q1"])


def test_rebinding_a_variable_rejected():
    with pytest.raises(FunctionalityError):
        make_automaton(["q0", "q1"], ["a"], ["x1"],
                       [("q0", "a", {"x1"}, "q1"), ("q1", "a", {"x1"}, "q1")], "q0", ["q1"])


def test_final_state_missing_variable_rejected():
    with pytest.raises(FunctionalityError, match="misses"):
        make_automaton(["q0", "q1"], ["a"], ["x1", "x2"],
                       [("q0", "a", {"x1"}, "q1")], "q0", ["q1"])


def test_untrimmed_states_are_dropped():
    a = make_automaton(["q0", "q1", "dead", "lost"], ["a"], [],
                       [("q0", "a", set(), "q1"), ("q0", "a", set(), "dead"),
                        ("lost", "a", set(), "q1")], "q0", ["q1"])
    assert a.states == ("q0", "q1")
    assert set(a.removed_states) == {"dead", "lost"}


def test_var_sets_ignore_unreachable_conflicts():
    # the bad state is dead, so trimming removes the conflict
    a = make_automaton(["q0", "q1", "bad"], ["a"], ["x1"],
                       [("q0", "a", {"x1"}, "q1"), ("q0", "a", set(), "bad")], "q0", ["q1"])
    assert compute_var_sets(a) == (frozenset(), frozenset({"x1"}))


def test_empty_automaton():
    with pytest.raises(EmptyAutomatonError):
        make_automaton(["q0", "q1"], ["a"], [], [], "q0", ["q1"])


def test_ambiguity_witness():
    # two distinct runs over "a" with the same (empty) mapping
    a = make_automaton(["q0", "q1", "q2"], ["a"], [],
                       [("q0", "a", set(), "q1"), ("q0", "a", set(), "q2")], "q0", ["q1", "q2"])
    ok, witness = check_unambiguous(a)
    assert not ok
    assert len(enumerate_outputs(a, witness)) > len({tuple(sorted(m.items())) for m in enumerate_outputs(a, witness)})


def test_universal_automaton_shape():
    u = universal_automaton(3)
    assert u.num_states == 8
    assert check_unambiguous(u)[0]


@pytest.mark.parametrize("text, line", [
    ("alphabet a\nstate q0 initial final\ntrans q0 a - q9\n", 3),
    ("alphabet a\nbogus\n", 2),
    ("alphabet a\nstate q0 initial final\ntrans q0 a\n", 3),
])
def test_syntax_errors_carry_line(text, line):
    with pytest.raises(AutomatonSyntaxError) as info:
        parse_automaton(text)
    assert info.value.line == line


def test_comments_and_blank_lines():
    text = "# header\n\n" + A0_TEXT.replace("trans q0 a - q0", "trans q0 a - q0  # loop")
    assert parse_automaton(text) == parse_automaton(A0_TEXT)


def test_orders(A0):
    assert resolve_order(A0, None) == ("x1", "x2")
    assert resolve_order(A0, parse_order("x2, x1")) == ("x2", "x1")
    with pytest.raises(MsoAccessError):
        resolve_order(A0, ("x1",))
    with pytest.raises(MsoAccessError):
        resolve_order(A0, ("x1", "x1"))
    assert mapping_key({"x1": 4, "x2": 2}, ("x2", "x1")) == (2, 4)
