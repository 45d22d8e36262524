"""Individual measures, simulations, profiles, hard-column search."""

import math

import pytest

from cclab import (
    AuditFailure,
    ComplexityProfile,
    HelpSpec,
    INF,
    Measure,
    UsageError,
    all_bitstrings,
    enumerate_sets,
    find_hard_y,
    identity_fn,
    individual_cc,
    one_way_from_two_way,
    oneway_to_set,
    pdl_decode,
    set_to_oneway,
    structure_function_profile,
    tcc_identity_profile,
    transcript_decoder,
)
from cclab.protocol import bob_message, cc_on_input
from cclab.reference import alice_flag_identity, identity_protocols, literal_send_protocol


def test_measure_validation():
    with pytest.raises(UsageError):
        Measure(family="XCC")
    with pytest.raises(UsageError):
        Measure(alpha=-1)


def test_partial_measure_finds_constant_witness():
    f = identity_fn(2)
    value, witness = individual_cc(Measure(family="PCC", alpha=6), f, "01", "10")
    assert value == 0
    assert witness.bits == "100010"  # announce the constant 10


def test_total_measure_on_diagonal():
    f = identity_fn(2)
    value, witness = individual_cc(Measure(family="CC", alpha=4), f, "10", "10")
    assert value == 0
    assert witness.bits == "1001"  # echo Alice's input, total everywhere


def test_empty_family_is_infinite():
    f = identity_fn(2)
    value, witness = individual_cc(Measure(family="TCC", alpha=10), f, "00", "00")
    assert value == INF
    assert witness is None


def test_everywhere_family_at_n1():
    f = identity_fn(1)
    assert individual_cc(Measure(family="TCC", alpha=14), f, "0", "1")[0] == INF
    value, witness = individual_cc(Measure(family="TCC", alpha=15), f, "0", "1")
    assert value == 1
    assert len(witness.bits) == 15


def test_families_are_nested():
    f = identity_fn(2)
    for alpha in (0, 4, 6, 8, 10):
        for x in all_bitstrings(2):
            for y in all_bitstrings(2):
                pcc = individual_cc(Measure(family="PCC", alpha=alpha), f, x, y)[0]
                cc = individual_cc(Measure(family="CC", alpha=alpha), f, x, y)[0]
                tcc = individual_cc(Measure(family="TCC", alpha=alpha), f, x, y)[0]
                assert pcc <= cc <= tcc


def test_one_way_restriction_never_helps():
    f = identity_fn(1)
    m_free = Measure(family="CC", alpha=15)
    m_ow = Measure(family="CC", alpha=15, one_way=True)
    for x in "01":
        for y in "01":
            assert individual_cc(m_free, f, x, y)[0] <= individual_cc(m_ow, f, x, y)[0]


# ---------------------------------------------------------------------------
# one-way simulation


def test_simulation_of_constructed_protocols():
    f = identity_fn(2)
    for name, tree in identity_protocols(2).items():
        for y in all_bitstrings(2):
            sim = one_way_from_two_way(tree, y)
            for x in all_bitstrings(2):
                assert len(sim.message) <= cc_on_input(tree, f, x, y), (name, x, y)
            assert bob_message(sim.tree, y) == sim.message


def test_simulation_messages_are_distinct_and_prefix_free():
    tree = alice_flag_identity(2)
    sims = {y: one_way_from_two_way(tree, y) for y in all_bitstrings(2)}
    messages = [s.message for s in sims.values()]
    assert len(set(messages)) == len(messages)
    for a in messages:
        for b in messages:
            assert not (a != b and b.startswith(a))


def test_simulation_rejects_partial_protocols():
    from cclab import OutputFunction, OutputLeaf, ProtocolTree

    leaf = ProtocolTree(2, 2, 2, OutputLeaf(OutputFunction.copy_x()))
    with pytest.raises((AuditFailure, UsageError)):
        one_way_from_two_way(leaf, "00")


def test_transcript_decoder():
    tree = literal_send_protocol(identity_fn(2))
    assert transcript_decoder(tree, "00", "10") == "10"
    assert transcript_decoder(tree, "00", "1") is None  # stops mid-tree


# ---------------------------------------------------------------------------
# set exchange


def test_set_to_oneway_message_length():
    for _code, members in enumerate_sets(2, 20):
        tree = set_to_oneway(members, 2)
        want = 1 + math.ceil(math.log2(len(members))) if len(members) > 1 else 1
        for y in sorted(members):
            assert len(bob_message(tree, y)) == want


def test_oneway_to_set_contains_column():
    for _code, members in enumerate_sets(2, 20):
        tree = set_to_oneway(members, 2)
        for y in sorted(members):
            back = oneway_to_set(tree, y)
            assert y in back
            assert math.log2(len(back)) <= len(bob_message(tree, y))


# ---------------------------------------------------------------------------
# profiles


def test_profile_nonincreasing_audit():
    profile = ComplexityProfile("demo", {0: (INF, None), 1: (2, None), 2: (3, None)})
    with pytest.raises(AuditFailure):
        profile.assert_nonincreasing()


def test_profile_serialization():
    profile = ComplexityProfile("demo", {0: (INF, None), 1: (2.0, None)})
    csv = profile.to_csv()
    assert csv.splitlines()[0] == "alpha,value,witness_hex"
    assert "0,inf," in csv
    assert "1,2," in csv
    assert '"schema": "cclab-profile/1"' in profile.to_json()


def test_structure_function_profile_matches_naive_n1():
    for y in "01":
        profile = structure_function_profile(y, 12)
        # naive oracle over both subsets containing y
        from cclab import sdl_encode

        universe = ["0", "1"]
        best = {a: INF for a in range(13)}
        for members in (frozenset((y,)), frozenset(universe)):
            cost = len(sdl_encode(members, 1).bits)
            for a in range(cost, 13):
                best[a] = min(best[a], math.log2(len(members)))
        for a in range(13):
            assert profile.value(a) == best[a]


def test_structure_function_profile_caps():
    with pytest.raises(UsageError):
        structure_function_profile("00000", 10)
    with pytest.raises(UsageError):
        structure_function_profile("00", 99)


def test_identity_profile_n1_report():
    report = tcc_identity_profile("1", 20)
    assert all(r.equal for r in report.agreement)
    # hard-wired prefix senders: 1 + (n - a) bits spoken until a = n
    costs = {row.prefix_bits: row.cost for row in report.prefix_rows}
    assert costs == {0: 2, 1: 1}
    for row in report.equivalence:
        if row.set_code_length is not None:
            assert row.derived_message_length is not None


def test_identity_profile_caps():
    with pytest.raises(UsageError):
        tcc_identity_profile("0000", 10)


# ---------------------------------------------------------------------------
# hard columns


def test_find_hard_y_empty_budget():
    report = find_hard_y(2, 0, "00")
    assert report.value == INF
    assert report.count_below == 0
    assert report.threshold == 2
    assert report.y == "00"  # lexicographically first qualifier


def test_find_hard_y_vacuous_threshold():
    report = find_hard_y(2, 6, "00")
    assert report.threshold == -4
    assert "vacuous" in report.note
    assert report.count_below == 0


def test_find_hard_y_caps():
    with pytest.raises(UsageError):
        find_hard_y(4, 2, "0000")
