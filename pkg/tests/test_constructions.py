"""Protocol builders and the hard-instance engine."""

import dataclasses
import json
import random

import pytest

from cclab import (
    AuditFailure,
    HardInstance,
    NodeFunction,
    UsageError,
    all_bitstrings,
    bob_message,
    computes_everywhere,
    equality_fn,
    equality_shortcut_protocol,
    fit_node_function,
    helpbit_hard_instance,
    identity_fn,
    is_one_way,
    is_total,
    large_rectangle_shortcut,
    message_protocol,
    pdl_complexity,
    prefix_protocol,
    replay_hard_instance,
    run,
    separating_index_set,
    shortest_description_protocol,
    th7_hard_instance,
    th7_protocol,
    tree_has_stuck,
    verify_certificate,
)
from cclab.rectangles import Rectangle
from cclab.reference import off_diagonal_quadrant


# ---------------------------------------------------------------------------
# function fitting


def test_fit_prefers_cheap_kinds():
    assert fit_node_function({"00": 0, "11": 0}, 2).kind == "const0"
    assert fit_node_function({"00": 1, "11": 1}, 2).kind == "const1"
    fn = fit_node_function({"00": 0, "10": 1}, 2)
    assert fn.kind == "bit" and fn.index == 0
    fn = fit_node_function({"01": 0, "00": 1}, 2)
    assert fn.kind == "notbit" and fn.index == 1
    fn = fit_node_function({"00": 0, "01": 1, "10": 1, "11": 0}, 2)
    assert fn.kind == "table"


def test_fit_dont_cares_are_free():
    # one constrained point always fits a constant
    fn = fit_node_function({"10": 1}, 2)
    assert fn.kind == "const1"


# ---------------------------------------------------------------------------
# message tries


def test_message_protocol_builds_trie():
    messages = {"00": "0", "01": "10", "10": "110", "11": "111"}
    tree = message_protocol(messages, {y: y for y in messages}, 2, 2)
    assert is_one_way(tree)
    for y, msg in messages.items():
        assert bob_message(tree, y) == msg
        outcome = run(tree, "00", y)
        assert outcome.output == y
        assert outcome.cost == len(msg)


def test_message_protocol_rejects_prefix_collision():
    with pytest.raises(UsageError):
        message_protocol({"0": "1", "1": "10"}, {"0": "0", "1": "1"}, 1, 1)


def test_prefix_protocol_routing():
    # matching columns ride the short branch, everyone else resends fully
    sender = prefix_protocol("1010", 2)
    assert bob_message(sender, "1010") == "010"
    assert bob_message(sender, "1001") == "001"
    assert bob_message(sender, "0110") == "10110"


def test_shortest_description_sender():
    tree = shortest_description_protocol(2, 5)
    assert tree_has_stuck(tree.root)
    assert is_total(tree)  # every singleton code has exactly 5 bits
    assert computes_everywhere(tree, identity_fn(2))
    for y in all_bitstrings(2):
        assert run(tree, "00", y).cost == 5


def test_shortest_description_budget_mismatch_strands_everyone():
    # singleton codes all have length 5 at n = 2, so budget 4 matches none
    tree = shortest_description_protocol(2, 4)
    assert not is_total(tree)
    for x in all_bitstrings(2):
        for y in all_bitstrings(2):
            assert run(tree, x, y).is_stuck


# ---------------------------------------------------------------------------
# equality and rectangle shortcuts


def test_equality_shortcut_costs():
    for n in (2, 3):
        tree = equality_shortcut_protocol(n)
        assert computes_everywhere(tree, equality_fn(n))
        for x in all_bitstrings(n):
            for y in all_bitstrings(n):
                cost = run(tree, x, y).cost
                if x[0] == "0" and y[0] == "1":
                    assert cost == 2


def test_large_rectangle_shortcut():
    f = equality_fn(2)
    tree = large_rectangle_shortcut(f, [off_diagonal_quadrant(2)])
    assert computes_everywhere(tree, f)
    # hit pairs: rectangle index bit plus the membership answer
    assert run(tree, "00", "10").cost == 2


def test_large_rectangle_shortcut_validation():
    f = equality_fn(2)
    mixed = Rectangle(frozenset(("00",)), frozenset(("00", "01")))
    with pytest.raises(UsageError):
        large_rectangle_shortcut(f, [mixed])
    quadrant = off_diagonal_quadrant(2)
    with pytest.raises(UsageError):
        large_rectangle_shortcut(f, [quadrant, quadrant])


# ---------------------------------------------------------------------------
# separating indices and the exchange protocol


def test_separating_index_set_example():
    result = separating_index_set(["000", "011", "101"])
    assert result.indices == (0, 1)
    restricted = result.restrict("011")
    assert restricted == "01"


def test_separating_index_set_property():
    rng = random.Random(20240817)
    for _ in range(1000):
        k = rng.randint(2, 8)
        count = rng.randint(2, min(5, 1 << k))
        members = rng.sample([format(v, f"0{k}b") for v in range(1 << k)], count)
        result = separating_index_set(members)
        views = {result.restrict(z) for z in members}
        assert len(views) == len(members)
        # determinism: the same family yields the same indices
        assert separating_index_set(members).indices == result.indices


def test_separating_index_set_rejects_duplicates():
    with pytest.raises(UsageError):
        separating_index_set(["00", "00", "01"])


def test_th7_protocol_scales():
    for s, k, bound in ((1, 2, 4), (2, 4, 12), (2, 8, 16)):
        members = [format(v, f"0{k}b") for v in range((1 << s) + 1)]
        report = th7_protocol(members, k=k)
        assert report.cost <= bound
        assert report.closed_form_bound_bits == bound


def test_th7_protocol_validation():
    with pytest.raises(UsageError):
        th7_protocol(["00", "01", "10", "11"])  # 4 members is not 2^s + 1
    with pytest.raises(UsageError):
        th7_protocol(["00", "01", "10"], k=3)
    with pytest.raises(UsageError):
        th7_protocol(["00", "00", "01"])


# ---------------------------------------------------------------------------
# hard instances


def test_th7_hard_instance_pinned_shape():
    inst = th7_hard_instance(10, 1, 2, 6)
    assert inst.n == 30
    assert inst.blocks == 3
    assert len(inst.protocols) == 2
    assert inst.fiber_size == 1024
    assert inst.fiber_floor == 64
    assert inst.hard_index == 0
    assert inst.companion_kind == "plain"
    assert inst.companion_cost == inst.companion_bound_bits == 10
    assert verify_certificate(inst)


def test_helpbit_hard_instance_pinned_shape():
    inst = helpbit_hard_instance(11, 1, 2, 1, 1, 6)
    assert inst.n == 99
    assert inst.blocks == 9
    assert inst.fiber_size == 2048
    assert inst.fiber_floor == 128
    assert inst.companion_kind == "help-routed"
    assert inst.companion_cost == inst.companion_bound_bits == 41
    assert verify_certificate(inst)


def test_helpbit_precondition_guard():
    with pytest.raises(UsageError):
        helpbit_hard_instance(10, 1, 2, 1, 1, 6)


def test_helpbit_without_help_matches_plain_engine():
    assert helpbit_hard_instance(10, 1, 2, 0, 0, 6) == th7_hard_instance(10, 1, 2, 6)


def test_hard_instance_json_round_trip():
    inst = th7_hard_instance(10, 1, 2, 6)
    text = inst.to_json()
    assert json.loads(text)["schema"] == "cclab-hard-instance/1"
    assert HardInstance.from_json(text) == inst


def test_hard_instance_replay():
    inst = th7_hard_instance(10, 1, 2, 6)
    assert replay_hard_instance(inst).ok
    tampered = dataclasses.replace(inst, fiber_size=999)
    report = replay_hard_instance(tampered)
    assert not report.ok
    assert any("fiber_size" in d for d in report.discrepancies)


def test_hard_instance_tampered_certificate_fails():
    inst = th7_hard_instance(10, 1, 2, 6)
    # claim the stuck protocol serves member 0; the re-run disagrees
    forged = (0, "", "", 0)
    tampered = dataclasses.replace(inst, served=(forged,))
    with pytest.raises(AuditFailure):
        verify_certificate(tampered)


def test_seeded_instance_is_deterministic():
    a = th7_hard_instance(10, 1, 2, 6, seed=7)
    b = th7_hard_instance(10, 1, 2, 6, seed=7)
    assert a == b
    assert replay_hard_instance(a).ok
    assert verify_certificate(a)


def test_degenerate_budget_has_no_protocols():
    inst = th7_hard_instance(10, 1, 2, 1)
    assert inst.protocols == ()
    assert verify_certificate(inst)
    assert replay_hard_instance(inst).ok
