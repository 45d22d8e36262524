"""Exact worst-case baseline solver."""

import pytest

from cclab import (
    FunctionSpec,
    INF,
    Measure,
    UsageError,
    all_bitstrings,
    computes_everywhere,
    dcc_exact,
    equality_fn,
    identity_fn,
    individual_cc,
    is_total,
    run,
)


def constant_zero(n):
    size = 1 << n
    return FunctionSpec("zero", n, True, tuple(tuple("0" for _ in range(size)) for _ in range(size)))


def test_constant_table_is_free():
    bits, tree = dcc_exact(constant_zero(2))
    assert bits == 0


def test_identity_needs_n_bits():
    for n in (1, 2):
        bits, tree = dcc_exact(identity_fn(n))
        assert bits == n
        assert computes_everywhere(tree, identity_fn(n))


def test_equality_small_values():
    # Bob's bit, then Alice answers down her own branch
    assert dcc_exact(equality_fn(1))[0] == 2
    assert dcc_exact(equality_fn(2))[0] == 3


def test_optimal_tree_realizes_the_bound():
    bits, tree = dcc_exact(equality_fn(2))
    assert is_total(tree)
    assert computes_everywhere(tree, equality_fn(2))
    worst = max(
        run(tree, x, y).cost for x in all_bitstrings(2) for y in all_bitstrings(2)
    )
    assert worst == bits


def test_size_cap():
    with pytest.raises(UsageError):
        dcc_exact(identity_fn(4))


def test_worst_case_dominates_individual_values():
    # finite budget-limited values never exceed the worst-case optimum;
    # at n = 2 the capped everywhere-correct family is empty, so the
    # non-vacuous comparisons live at n = 1
    for f in (identity_fn(1), equality_fn(1)):
        bits, _tree = dcc_exact(f)
        m = Measure(family="TCC", alpha=20)
        for x in all_bitstrings(1):
            for y in all_bitstrings(1):
                value = individual_cc(m, f, x, y)[0]
                assert value == INF or value <= bits
    f = identity_fn(2)
    bits, _tree = dcc_exact(f)
    m = Measure(family="TCC", alpha=20)
    for x in all_bitstrings(2):
        for y in all_bitstrings(2):
            value = individual_cc(m, f, x, y)[0]
            assert value == INF or value <= bits
