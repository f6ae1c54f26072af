import random

import pytest
from hypothesis import given, strategies as st

from mso_access.errors import MsoAccessError
from mso_access.fixtures import a0
from mso_access.matrices import (
    CountMatrix,
    constrained_matrix,
    count_from_product,
    letter_matrix,
    mat_mul,
    product,
)
from mso_access.oracle import count_partial_runs, random_automaton


def naive_mul(x, y):
    n = len(x)
    return [[sum(x[i][k] * y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def square(dim, values):
    return st.lists(st.lists(values, min_size=dim, max_size=dim), min_size=dim, max_size=dim)


@st.composite
def matrix_pair(draw, values=st.integers(0, 5)):
    dim = draw(st.integers(1, 6))
    return draw(square(dim, values)), draw(square(dim, values))


@given(matrix_pair())
def test_small_products_match_naive(pair):
    x, y = pair
    got = mat_mul(CountMatrix.from_rows(x), CountMatrix.from_rows(y))
    assert got.to_lists() == naive_mul(x, y)


@given(matrix_pair(values=st.one_of(st.just(0), st.integers(0, 2 ** 200))))
def test_wide_products_are_exact(pair):
    x, y = pair
    got = mat_mul(CountMatrix.from_rows(x), CountMatrix.from_rows(y))
    assert got.to_lists() == naive_mul(x, y)


def test_limb_carry_boundary():
    big = (1 << 32) - 1
    m = CountMatrix.from_rows([[big, big], [big, big]])
    assert (m @ m).to_lists() == [[2 * big * big] * 2] * 2
    assert (m @ m).limbs.shape[1] == 3  # about 2**65


def test_repeated_squaring_grows_exactly():
    m = CountMatrix.from_rows([[1, 1], [1, 0]])
    p = m
    for _ in range(8):
        p = p @ p
    # m^(2^8) holds Fibonacci numbers
    fib = [0, 1]
    while len(fib) < 260:
        fib.append(fib[-1] + fib[-2])
    assert p[0, 1] == fib[256]


def test_identity_and_zeros():
    m = CountMatrix.from_rows([[0, 2], [3, 0]])
    one = CountMatrix.identity(2)
    assert m @ one == m and one @ m == m
    assert (m @ CountMatrix.zeros(2)) == CountMatrix.zeros(2)
    assert product([], 2) == one


def test_equality_ignores_limb_width():
    narrow = CountMatrix.from_rows([[1]])
    wide = CountMatrix(1, narrow.indptr.copy(), narrow.indices.copy(),
                       narrow.limbs.repeat(3, axis=1) * [1, 0, 0])
    assert narrow == wide


def test_matrices_are_read_only():
    m = CountMatrix.from_rows([[1]])
    with pytest.raises(ValueError):
        m.limbs[0, 0] = 5


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        mat_mul(CountMatrix.identity(2), CountMatrix.identity(3))


def test_negative_entries_rejected():
    with pytest.raises(ValueError):
        CountMatrix.from_entries(2, {(0, 0): -1})


def test_letter_matrices_of_a0(A0):
    q = A0.state_id
    ma = letter_matrix(A0, "a")
    assert ma[q("q0"), q("q1")] == 1 and ma[q("q2"), q("q3")] == 1
    assert ma[q("q0"), q("q2")] == 0


def test_product_counts_runs_on_abbab(A0):
    m = product([letter_matrix(A0, c) for c in "abbab"], A0.num_states)
    assert count_from_product(A0, m) == 4


@pytest.mark.parametrize("seed", range(15))
def test_product_entries_count_partial_runs(seed):
    rng = random.Random(seed)
    a = None
    while a is None:
        a = random_automaton(rng, alphabet=("a", "b"), density=0.4)
    s = "".join(rng.choice("ab") for _ in range(rng.randint(0, 5)))
    m = product([letter_matrix(a, c) for c in s], a.num_states)
    for p in range(a.num_states):
        for q in range(a.num_states):
            assert m[p, q] == count_partial_runs(a, s, p, q)


# -- constrained matrices -----------------------------------------------------

def conditions_oracle(a, symbol, position, tau, current):
    out = [[0] * a.num_states for _ in range(a.num_states)]
    for t in a.transitions:
        if t.symbol != symbol:
            continue
        pinned = {v for v in tau if tau[v] == position and v != current}
        if not pinned.issubset(t.vars):
            continue
        if current is not None and tau[current] == position and current not in a.var_sets[t.target]:
            continue
        out[t.source][t.target] = 1
    return out


def test_spot_values_on_a(A0):
    q = A0.state_id
    m = constrained_matrix(A0, "a", 4, {"x1": 4, "x2": 4}, "x2")
    assert m[q("q0"), q("q1")] == 0
    assert m[q("q2"), q("q3")] == 1
    assert m[q("q3"), q("q3")] == 0


def test_prefix_pin_on_b(A0):
    # x1 pinned to position 2 with x1 current: arrive in a state binding x1
    q = A0.state_id
    m = constrained_matrix(A0, "b", 2, {"x1": 2}, "x1")
    assert {(p, r) for p, r, _ in m.entries()} == {(q("q1"), q("q3")), (q("q3"), q("q3"))}


def test_other_positions_are_unconstrained(A0):
    assert constrained_matrix(A0, "a", 3, {"x1": 4}, "x1") == letter_matrix(A0, "a")


@pytest.mark.parametrize("seed", range(20))
def test_constrained_matrix_matches_conditions(seed):
    rng = random.Random(seed)
    a = None
    while a is None or not a.variables:
        a = random_automaton(rng, density=0.5)
    for _ in range(10):
        tau = {v: rng.randint(1, 3) for v in a.variables if rng.random() < 0.8} or {a.variables[0]: 1}
        current = rng.choice(sorted(tau) + [None])
        position = rng.randint(1, 3)
        symbol = rng.choice(a.alphabet)
        got = constrained_matrix(a, symbol, position, tau, current)
        assert got.to_lists() == conditions_oracle(a, symbol, position, tau, current)


def test_constrained_matrix_rejects_bad_arguments(A0):
    with pytest.raises(MsoAccessError):
        constrained_matrix(A0, "a", 0, {"x1": 1}, "x1")
    with pytest.raises(MsoAccessError):
        constrained_matrix(A0, "a", 1, {"x1": 1}, "x2")
    with pytest.raises(MsoAccessError):
        constrained_matrix(A0, "z", 1, {"x1": 1}, "x1")
