"""Hand-built protocols and pigeonhole hard instances, with exact bit counts.

Everything here is constructed directly rather than found by search: the
prefix-match sender, the all-or-nothing shortest-set sender, the equality
shortcut, rectangle-index shortcuts, the separating-index exchange, and
the fiber-certificate generator that produces input pairs on which every
small enumerated one-way protocol must talk a lot.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from random import Random

from .bits import all_bitstrings, bits_from_int, bits_to_hex, check_bits, embed_bit, log2ceil
from .codes import (
    PdlCode,
    budget_cap,
    enumerate_signature,
    pdl_encode,
    sdl_encode,
)
from .errors import AuditFailure, UsageError
from .functions import FunctionSpec, equality_fn
from .protocol import (
    ALICE,
    BOB,
    NodeFunction,
    OutputFunction,
    OutputLeaf,
    ProtocolTree,
    Speak,
    StuckLeaf,
    _literal_send_chain,
    run,
)
from .rectangles import Rectangle, rectangle_color


# ---------------------------------------------------------------------------
# node-function fitting and the one-way message builder


def fit_node_function(targets: dict, m: int) -> NodeFunction:
    """Cheapest speak function agreeing with targets; don't-cares are free.

    Preference order mirrors the encoding grammar: const0, const1, bit-i,
    negated bit-i (i ascending), then a table with don't-cares set to 0.
    """
    if not targets:
        return NodeFunction.const(0)
    if all(v == 0 for v in targets.values()):
        return NodeFunction.const(0)
    if all(v == 1 for v in targets.values()):
        return NodeFunction.const(1)
    for i in range(m):
        if all(int(u[i]) == v for u, v in targets.items()):
            return NodeFunction.input_bit(i)
    for i in range(m):
        if all(1 - int(u[i]) == v for u, v in targets.items()):
            return NodeFunction.negated_bit(i)
    cells = ["0"] * (1 << m)
    for u, v in targets.items():
        cells[int(u, 2)] = str(v)
    return NodeFunction.from_table("".join(cells))


def message_protocol(
    messages: dict,
    outputs: dict,
    n_bob: int,
    out_len: int,
    n_alice: int | None = None,
    stuck_filler: bool = False,
) -> ProtocolTree:
    """One-way protocol in which Bob speaks messages[y] and Alice answers.

    The message set must be prefix-free and injective; the trie of
    messages becomes the tree, with node functions fitted to the y's whose
    message passes through each node.  Branches no message reaches get a
    constant-zero leaf, or a stuck leaf when stuck_filler is set (inputs
    without a message then cost infinity instead of producing garbage).
    """
    if n_alice is None:
        n_alice = n_bob
    items = sorted(messages.items())
    for y, msg in items:
        check_bits(y, n_bob)
        if msg:
            check_bits(msg)
    sorted_msgs = sorted(m for _, m in items)
    for a, b in zip(sorted_msgs, sorted_msgs[1:]):
        if b.startswith(a):
            raise UsageError(f"messages are not prefix-free: {a!r} prefixes {b!r}")
    filler = StuckLeaf() if stuck_filler else OutputLeaf(OutputFunction.const("0" * out_len))

    def build(prefix: str, ys: list) -> object:
        exact = [y for y in ys if messages[y] == prefix]
        if exact:
            return OutputLeaf(OutputFunction.const(outputs[exact[0]]))
        if not ys:
            return filler
        targets = {y: int(messages[y][len(prefix)]) for y in ys}
        fn = fit_node_function(targets, n_bob)
        zeros = [y for y in ys if targets[y] == 0]
        ones = [y for y in ys if targets[y] == 1]
        return Speak(BOB, fn, build(prefix + "0", zeros), build(prefix + "1", ones))

    root = build("", [y for y, _ in items]) if items else filler
    return ProtocolTree(n_alice, n_bob, out_len, root)


# ---------------------------------------------------------------------------
# explicit protocols


def prefix_protocol(y_target: str, a: int) -> ProtocolTree:
    """Bob flags whether his prefix matches y_target and sends the rest.

    On match the message is 0 plus the remaining n - a bits (cost
    n - a + 1); on mismatch it is 1 plus all of y (cost n + 1).  Total and
    correct for the identity function, with the a matched bits effectively
    hard-wired into the tree.
    """
    n = len(check_bits(y_target))
    if not 0 <= a <= n:
        raise UsageError(f"prefix length {a} out of range for n={n}")
    messages = {}
    for y in all_bitstrings(n):
        if y[:a] == y_target[:a]:
            messages[y] = "0" + y[a:]
        else:
            messages[y] = "1" + y
    outputs = {y: y for y in messages}
    return message_protocol(messages, outputs, n, n)


def shortest_description_protocol(n: int, c_budget: int) -> ProtocolTree:
    """Bob sends the set code pinning down his input, gated on its length.

    Bob's message is the canonical singleton code for {y} exactly when
    that code has the hard-wired length c_budget; any other input is
    stuck.  Since every canonical singleton code has the same length
    1 + 2n, the gate is all-or-nothing: either every y gets through at
    uniform cost 1 + 2n or none does.  Unreached branches hold stuck
    leaves either way, so only the matching budget yields a protocol
    that never actually strands a pair.
    """
    if c_budget > budget_cap():
        raise UsageError(f"budget {c_budget} exceeds the enumeration cap")
    messages = {}
    for y in all_bitstrings(n):
        code = sdl_encode({y}, n)
        if len(code.bits) == c_budget:
            messages[y] = code.bits
    outputs = {y: y for y in messages}
    return message_protocol(messages, outputs, n, n, stuck_filler=True)


def _eq_tail(n: int, y_prefix: str, pos: int) -> object:
    if pos == n:
        return OutputLeaf(
            OutputFunction.from_map(n, n, lambda u: embed_bit(int(u == y_prefix), n))
        )
    return Speak(
        BOB,
        NodeFunction.input_bit(pos),
        _eq_tail(n, y_prefix + "0", pos + 1),
        _eq_tail(n, y_prefix + "1", pos + 1),
    )


def equality_shortcut_protocol(n: int) -> ProtocolTree:
    """Equality with a 2-bit fast path on the off-diagonal quadrant.

    Bob opens with his first bit.  On 1, Alice answers with her first bit;
    if hers is 0 the pair sits in the all-zero quadrant and she outputs 0
    after those 2 bits.  Every other branch falls back to Bob sending the
    rest of y literally: cost n + 1 when both first bits are 1, n when
    Bob's is 0.  Computes equality on every pair.
    """
    if n < 1:
        raise UsageError("need n >= 1")
    zero = OutputLeaf(OutputFunction.const(embed_bit(0, n)))
    slow1 = _eq_tail(n, "1", 1)
    root = Speak(
        BOB,
        NodeFunction.input_bit(0),
        _eq_tail(n, "0", 1),
        Speak(ALICE, NodeFunction.input_bit(0), zero, slow1),
    )
    return ProtocolTree.symmetric(n, root)


def large_rectangle_shortcut(f: FunctionSpec, rects: list) -> ProtocolTree:
    """Bob names the rectangle holding y; Alice answers its color if x fits.

    Bob sends a ceil(log2(len(rects)+1))-bit index, 0 meaning none.  On a
    hit Alice spends one bit saying whether her row is inside; if so she
    outputs the rectangle's color, otherwise (and on index 0) the literal
    default runs from scratch.  Rectangles must be pairwise disjoint and
    monochromatic.
    """
    if not f.boolean:
        raise UsageError("rectangle shortcut needs a truth-valued function")
    n = f.n
    colors = []
    for i, rect in enumerate(rects):
        color = rectangle_color(rect, f)
        if color is None:
            raise UsageError(f"rectangle {i} is not monochromatic")
        colors.append(color)
    for i in range(len(rects)):
        for j in range(i + 1, len(rects)):
            if rects[i].rows & rects[j].rows and rects[i].cols & rects[j].cols:
                raise UsageError(f"rectangles {i} and {j} overlap")
    width = log2ceil(len(rects) + 1)
    default = _literal_send_chain(f, "", 0)

    def index_of(y: str) -> int:
        for i, rect in enumerate(rects):
            if y in rect.cols:
                return i + 1
        return 0

    def subtree(idx: int) -> object:
        if idx == 0:
            return default
        if idx > len(rects):
            return OutputLeaf(OutputFunction.const("0" * n))
        rect = rects[idx - 1]
        member = fit_node_function({x: int(x in rect.rows) for x in all_bitstrings(n)}, n)
        hit = OutputLeaf(OutputFunction.const(embed_bit(colors[idx - 1], n)))
        return Speak(ALICE, member, default, hit)

    def build(depth: int, acc: int) -> object:
        if depth == width:
            return subtree(acc)
        targets = {
            y: (index_of(y) >> (width - 1 - depth)) & 1 for y in all_bitstrings(n)
        }
        fn = fit_node_function(targets, n)
        return Speak(BOB, fn, build(depth + 1, acc << 1), build(depth + 1, acc << 1 | 1))

    return ProtocolTree.symmetric(n, build(0, 0))


# ---------------------------------------------------------------------------
# separating index sets and the index-exchange protocol


@dataclass(frozen=True)
class SeparatingIndexSet:
    """Positions on which a family of strings is pairwise distinguished."""

    indices: tuple
    k: int

    def restrict(self, z: str) -> str:
        return "".join(z[i] for i in self.indices)


def separating_index_set(z_list) -> SeparatingIndexSet:
    """Greedy position set splitting every pair of the family.

    Strings are inserted one at a time; a new string can collide with at
    most one already-placed string (the placed ones are pairwise split),
    and one position where the two differ repairs the collision.  Hence
    at most len(z_list) - 1 positions overall.
    """
    z_list = list(z_list)
    if len(set(z_list)) != len(z_list):
        raise UsageError("family members must be pairwise distinct")
    k = len(check_bits(z_list[0])) if z_list else 0
    for z in z_list:
        check_bits(z, k)
    indices: list = []

    def restrict(z: str) -> str:
        return "".join(z[i] for i in indices)

    placed: list = []
    for z in z_list:
        clash = next((w for w in placed if restrict(w) == restrict(z)), None)
        if clash is not None:
            d = next(i for i in range(k) if z[i] != clash[i])
            indices.append(d)
        placed.append(z)
    return SeparatingIndexSet(tuple(sorted(indices)), k)


def _exchange_tree(
    z_list: list, slots: list, n_alice: int, n_bob: int, out_len: int
) -> object:
    """Alice announces the slot positions, Bob answers his bits there.

    Slot indices go out as hard-wired constant bits, ceil(log2 k) per
    slot; the branch not taken by a constant is a dead zero leaf.  Bob
    then answers one input bit per slot, and the leaf matching his
    restriction pattern announces the corresponding padded family member.
    """
    k = len(z_list[0])
    idx_width = log2ceil(k)
    slot_bits = "".join(bits_from_int(i, idx_width) for i in slots)
    dead = OutputLeaf(OutputFunction.const("0" * out_len))
    patterns = {
        "".join(z[i] for i in slots): z + "0" * (out_len - k) for z in z_list
    }

    def bob_chain(j: int, acc: str) -> object:
        if j == len(slots):
            if acc in patterns:
                return OutputLeaf(OutputFunction.const(patterns[acc]))
            return OutputLeaf(OutputFunction.const("0" * out_len))
        return Speak(
            BOB,
            NodeFunction.input_bit(slots[j]),
            bob_chain(j + 1, acc + "0"),
            bob_chain(j + 1, acc + "1"),
        )

    def alice_chain(d: int) -> object:
        if d == len(slot_bits):
            return bob_chain(0, "")
        b = int(slot_bits[d])
        rest = alice_chain(d + 1)
        child0 = rest if b == 0 else dead
        child1 = rest if b == 1 else dead
        return Speak(ALICE, NodeFunction.const(b), child0, child1)

    return alice_chain(0)


@dataclass
class IndexExchangeReport:
    tree: ProtocolTree
    x: str
    z_list: tuple
    separating: SeparatingIndexSet
    slots: tuple
    s: int
    k: int
    cost: int
    closed_form_bound_bits: int
    closed_form_bound: float


def th7_protocol(z_list, k: int | None = None) -> IndexExchangeReport:
    """Index-exchange protocol for x = concatenated family, y = a padded member.

    The family must have 2^s + 1 pairwise distinct members of length k.
    Alice sends 2^s slot positions (the greedy separating set, padded by
    repeating position 0), Bob replies with his bits there, and Alice
    names the matching member.  Cost is exactly 2^s * (ceil(log2 k) + 1)
    on every valid pair; the report carries the looser closed-form bound
    2^s * ceil(log2 (2k)) and its real-valued version side by side.
    """
    z_list = tuple(z_list)
    m = len(z_list)
    if m < 2 or (m - 1) & (m - 2):
        raise UsageError("family size must be 2^s + 1")
    s = log2ceil(m - 1)
    sep = separating_index_set(z_list)
    if k is not None and k != sep.k:
        raise UsageError(f"family members have {sep.k} bits, not {k}")
    k = sep.k
    slots = list(sep.indices) + [0] * ((1 << s) - len(sep.indices))
    n = m * k
    tree = ProtocolTree.symmetric(n, _exchange_tree(list(z_list), slots, n, n, n))
    x = "".join(z_list)
    cost = None
    for j, z in enumerate(z_list):
        y = z + "0" * (n - k)
        outcome = run(tree, x, y)
        if outcome.is_stuck or outcome.output != y:
            raise AuditFailure(f"index exchange failed to identify member {j}")
        cost = outcome.cost if cost is None else max(cost, outcome.cost)
    return IndexExchangeReport(
        tree,
        x,
        z_list,
        sep,
        tuple(slots),
        s,
        k,
        cost,
        (1 << s) * log2ceil(2 * k),
        (1 << s) * math.log2(2 * k),
    )


# ---------------------------------------------------------------------------
# hard instances by fiber pigeonhole

HARD_INSTANCE_SCHEMA = "cclab-hard-instance/1"


@dataclass
class HardInstance:
    """Inputs plus a replayable certificate that small protocols fail.

    The fiber label of a k-bit block z records, for every enumerated
    one-way protocol and every Bob help string, Bob's message on the
    padded input when shorter than l (an infinity marker otherwise).  A
    fiber with more members than served triples yields a family whose
    concatenation is x; the certificate stores, per (protocol, help)
    triple, which family member it serves, and the hard index is the
    first member no triple serves.
    """

    k: int
    s: int
    l: int
    a: int
    b: int
    budget: int
    n: int
    protocols: tuple
    fiber_label: tuple
    fiber_size: int
    fiber_floor: int
    z_blocks: tuple
    x: str
    y_family: tuple
    served: tuple  # (protocol index, h_a, h_b, served j or None)
    hard_index: int
    companion_kind: str
    companion_hex: str
    companion_signature: tuple
    companion_cost: int
    companion_bound_bits: int
    seed: int | None = None

    @property
    def blocks(self) -> int:
        return (1 << (self.a + self.b + self.s)) + 1

    @property
    def hard_y(self) -> str:
        return self.y_family[self.hard_index]

    def to_json(self) -> str:
        data = {
            "schema": HARD_INSTANCE_SCHEMA,
            "k": self.k,
            "s": self.s,
            "l": self.l,
            "a": self.a,
            "b": self.b,
            "budget": self.budget,
            "n": self.n,
            "protocols": list(self.protocols),
            "fiber_label": ["inf" if c is None else c for c in self.fiber_label],
            "fiber_size": self.fiber_size,
            "fiber_floor": self.fiber_floor,
            "z_blocks": list(self.z_blocks),
            "x": bits_to_hex(self.x),
            "y_family": [bits_to_hex(y) for y in self.y_family],
            "served": [list(row) for row in self.served],
            "hard_index": self.hard_index,
            "companion": {
                "kind": self.companion_kind,
                "code": self.companion_hex,
                "signature": list(self.companion_signature),
                "cost": self.companion_cost,
                "bound_bits": self.companion_bound_bits,
            },
            "seed": self.seed,
        }
        return json.dumps(data, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "HardInstance":
        from .bits import bits_from_hex

        data = json.loads(text)
        if data.get("schema") != HARD_INSTANCE_SCHEMA:
            raise UsageError(f"unknown instance schema {data.get('schema')!r}")
        comp = data["companion"]
        return cls(
            k=data["k"],
            s=data["s"],
            l=data["l"],
            a=data["a"],
            b=data["b"],
            budget=data["budget"],
            n=data["n"],
            protocols=tuple(data["protocols"]),
            fiber_label=tuple(None if c == "inf" else c for c in data["fiber_label"]),
            fiber_size=data["fiber_size"],
            fiber_floor=data["fiber_floor"],
            z_blocks=tuple(data["z_blocks"]),
            x=bits_from_hex(data["x"]),
            y_family=tuple(bits_from_hex(y) for y in data["y_family"]),
            served=tuple(tuple(row) for row in data["served"]),
            hard_index=data["hard_index"],
            companion_kind=comp["kind"],
            companion_hex=comp["code"],
            companion_signature=tuple(comp["signature"]),
            companion_cost=comp["cost"],
            companion_bound_bits=comp["bound_bits"],
            seed=data["seed"],
        )


def _enumerated_one_way(n_alice: int, n_bob: int, out_len: int, budget: int):
    return list(
        enumerate_signature(n_alice, n_bob, out_len, budget, require_one_way=True)
    )


def _fiber_message(tree: ProtocolTree, y_ext: str, l: int) -> str | None:
    # one-way walk; None is the infinity marker (stuck or too long)
    from .protocol import bob_message

    msg = bob_message(tree, y_ext)
    if msg is None or len(msg) >= l:
        return None
    return msg


def _build_hard_instance(
    k: int, s: int, l: int, a: int, b: int, budget: int, companion_kind: str,
    seed: int | None = None,
) -> HardInstance:
    blocks = (1 << (a + b + s)) + 1
    n = blocks * k
    if k < a + b + s + l * (1 << (s + b)):
        raise UsageError(
            f"need k >= a+b+s+l*2^(s+b) = {a + b + s + l * (1 << (s + b))}, got k={k}"
        )
    protos = _enumerated_one_way(n + a, n + b, n, budget)
    count = len(protos)
    # the serving argument needs strictly fewer (protocol, help) triples
    # than family members, and the fiber floor must clear the family size
    if count * (1 << (a + b)) >= blocks:
        raise UsageError(
            f"{count} protocols at budget {budget} give {count * (1 << (a + b))} "
            f"serving triples, too many for a family of {blocks}"
        )
    exponent = k - l * count * (1 << b)
    if exponent <= a + b + s:
        raise UsageError(
            f"fiber floor 2^{exponent} cannot exceed 2^{a + b + s}: "
            f"budget {budget} admits too many protocols for k={k}, l={l}"
        )
    help_bob = list(all_bitstrings(b))
    fibers: dict = {}
    for z in all_bitstrings(k):
        y = z + "0" * (n - k)
        label = tuple(
            _fiber_message(tree, y + hb, l)
            for _, tree in protos
            for hb in help_bob
        )
        fibers.setdefault(label, []).append(z)
    label, members = max(
        fibers.items(),
        key=lambda kv: (len(kv[1]), tuple("~" if c is None else c for c in kv[0])),
    )
    floor = 1 << exponent
    if len(members) < floor:
        raise AuditFailure(
            f"best fiber has {len(members)} members, below the pigeonhole "
            f"floor 2^{exponent}"
        )
    if len(members) <= blocks - 1:
        raise AuditFailure(
            f"pigeonhole failed: best fiber has {len(members)} members, "
            f"needs more than {blocks - 1}"
        )
    if seed is None:
        chosen = members[:blocks]
    else:
        chosen = sorted(Random(seed).sample(members, blocks))
    x = "".join(chosen)
    y_family = tuple(z + "0" * (n - k) for z in chosen)

    served_rows = []
    served_js = set()
    for idx, (_, tree) in enumerate(protos):
        for ha in all_bitstrings(a):
            for hb in all_bitstrings(b):
                hit = None
                for j, yj in enumerate(y_family):
                    outcome = run(tree, x + ha, yj + hb)
                    if (
                        not outcome.is_stuck
                        and outcome.output == yj
                        and outcome.cost < l
                    ):
                        if hit is not None:
                            raise AuditFailure(
                                f"protocol {idx} with help ({ha!r},{hb!r}) serves "
                                f"two members {hit} and {j} from one fiber"
                            )
                        hit = j
                if hit is not None:
                    served_js.add(hit)
                served_rows.append((idx, ha, hb, hit))
    hard_index = next(j for j in range(blocks) if j not in served_js)

    if companion_kind == "plain":
        report = th7_protocol(chosen)
        comp_tree, comp_cost = report.tree, report.cost
        comp_bound = report.closed_form_bound_bits
    else:
        comp_tree, comp_cost, comp_bound = _routed_companion(chosen, k, n, a + b + s)
    comp_code = pdl_encode(comp_tree)
    return HardInstance(
        k=k,
        s=s,
        l=l,
        a=a,
        b=b,
        budget=budget,
        n=n,
        protocols=tuple(code.hex() for code, _ in protos),
        fiber_label=label,
        fiber_size=len(members),
        fiber_floor=floor,
        z_blocks=tuple(chosen),
        x=x,
        y_family=y_family,
        served=tuple(served_rows),
        hard_index=hard_index,
        companion_kind=companion_kind,
        companion_hex=comp_code.hex(),
        companion_signature=(comp_tree.n_alice, comp_tree.n_bob, comp_tree.out_len),
        companion_cost=comp_cost,
        companion_bound_bits=comp_bound,
        seed=seed,
    )


def _routed_companion(z_list, k: int, n: int, s_eff: int):
    """Two-way companion with one Alice help bit routing to the exchange.

    Help bit 1 runs the index exchange for the hard family; help bit 0
    falls to a constant default (a genuine literal default would need
    2^n leaves at these input lengths, and the cost claim only concerns
    the well-formed pairs, where the help bit is 1).
    """
    sep = separating_index_set(z_list)
    slots = list(sep.indices) + [0] * ((1 << s_eff) - len(sep.indices))
    exchange = _exchange_tree(list(z_list), slots, n + 1, n, n)
    default = OutputLeaf(OutputFunction.const("0" * n))
    root = Speak(ALICE, NodeFunction.input_bit(n), default, exchange)
    tree = ProtocolTree(n + 1, n, n, root)
    x = "".join(z_list)
    cost = None
    for z in z_list:
        y = z + "0" * (n - k)
        outcome = run(tree, x + "1", y)
        if outcome.is_stuck or outcome.output != y:
            raise AuditFailure("routed companion failed to identify a member")
        cost = outcome.cost if cost is None else max(cost, outcome.cost)
    bound = (1 << s_eff) * log2ceil(2 * k) + 1
    return tree, cost, bound


def th7_hard_instance(k: int, s: int, l: int, budget: int, seed: int | None = None) -> HardInstance:
    """Hard pair for one-way protocols below a description budget."""
    return _build_hard_instance(k, s, l, 0, 0, budget, "plain", seed)


def helpbit_hard_instance(
    k: int, s: int, l: int, a: int, b: int, budget: int, seed: int | None = None
) -> HardInstance:
    """Hard pair that survives a help bits for Alice and b for Bob.

    With a = b = 0 there is nothing to route on, so the result is the
    plain instance, companion included, field for field.
    """
    kind = "plain" if a == 0 and b == 0 else "help-routed"
    return _build_hard_instance(k, s, l, a, b, budget, kind, seed)


@dataclass
class ReplayReport:
    ok: bool
    discrepancies: list = field(default_factory=list)


def replay_hard_instance(instance: HardInstance) -> ReplayReport:
    """Recompute the instance from its parameters and diff every field.

    The stored member choice is reproduced (including the seed, if any),
    so a clean replay means the certificate is byte-for-byte stable.
    """
    fresh = _build_hard_instance(
        instance.k,
        instance.s,
        instance.l,
        instance.a,
        instance.b,
        instance.budget,
        instance.companion_kind,
        instance.seed,
    )
    diffs = []
    for name in (
        "k", "s", "l", "a", "b", "budget", "n", "protocols", "fiber_label",
        "fiber_size", "fiber_floor", "z_blocks", "x", "y_family", "served",
        "hard_index", "companion_kind", "companion_hex", "companion_signature",
        "companion_cost", "companion_bound_bits",
    ):
        if getattr(fresh, name) != getattr(instance, name):
            diffs.append(name)
    report = ReplayReport(not diffs, diffs)
    return report


def verify_certificate(instance: HardInstance) -> bool:
    """Independent pass: the hard member defeats every enumerated protocol.

    Re-runs every (protocol, help) triple on the hard pair and confirms
    no correct conversation shorter than l exists; also re-checks the
    stored serving rows.  Raises AuditFailure on any discrepancy.
    """
    from .codes import decode_signature

    n, a, b, l = instance.n, instance.a, instance.b, instance.l
    trees = [
        decode_signature(PdlCode.from_hex(h), n + a, n + b, n)
        for h in instance.protocols
    ]
    yh = instance.hard_y
    for idx, tree in enumerate(trees):
        for ha in all_bitstrings(a):
            for hb in all_bitstrings(b):
                outcome = run(tree, instance.x + ha, yh + hb)
                if not outcome.is_stuck and outcome.output == yh and outcome.cost < l:
                    raise AuditFailure(
                        f"protocol {idx} defeats the hard member with help ({ha!r},{hb!r})"
                    )
    expect = {}
    for idx, tree in enumerate(trees):
        for ha in all_bitstrings(a):
            for hb in all_bitstrings(b):
                hit = None
                for j, yj in enumerate(instance.y_family):
                    outcome = run(tree, instance.x + ha, yj + hb)
                    if not outcome.is_stuck and outcome.output == yj and outcome.cost < l:
                        hit = j
                        break
                expect[(idx, ha, hb)] = hit
    for idx, ha, hb, stored in instance.served:
        if expect.get((idx, ha, hb), None) != stored:
            raise AuditFailure(
                f"serving row ({idx},{ha!r},{hb!r}) disagrees with the re-run"
            )
    return True
