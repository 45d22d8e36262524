"""Two-party protocols as finite binary trees.

A protocol is a tree of speak nodes, output leaves and stuck leaves.  At a
speak node the owning party applies its next-bit function to its own input
and the resulting bit both extends the transcript and selects the subtree.
At an output leaf Alice announces a value computed from her input alone;
the announcement is free, only speak bits count.  A stuck leaf models a
computation that never answers.

Inputs may have different lengths per party (used for help-extended runs);
the plain case is symmetric with output width equal to the input length.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Union

from .bits import bits_to_int, check_bits, embed_bit, xor_bits
from .errors import UsageError
from .functions import FunctionSpec

__all__ = [
    "ALICE",
    "BOB",
    "NodeFunction",
    "OutputFunction",
    "Speak",
    "OutputLeaf",
    "StuckLeaf",
    "Node",
    "ProtocolTree",
    "RunOutcome",
    "HelpSpec",
    "default_depth_cap",
    "run",
    "bob_message",
    "cc_on_input",
    "is_total",
    "is_one_way",
    "computes_on",
    "computes_everywhere",
    "cc_with_help",
    "help_bit_totalizer",
    "value_as_help_protocol",
    "tree_depth",
    "tree_has_stuck",
]

ALICE = "A"
BOB = "B"

# Exhaustive semantic checks walk the full input grid; beyond this many
# pairs they refuse rather than silently taking forever.
_EXHAUSTIVE_LIMIT = 1 << 16


@dataclass(frozen=True)
class NodeFunction:
    """Next-bit function of the owning party's input.

    kind is one of "const0", "const1", "bit", "notbit", "table"; "bit" and
    "notbit" read position `index`, "table" stores one output bit per input
    value in ascending lexicographic order.
    """

    kind: str
    index: int = 0
    table: str = ""

    @staticmethod
    def const(b: int) -> "NodeFunction":
        return NodeFunction("const1" if b else "const0")

    @staticmethod
    def input_bit(i: int) -> "NodeFunction":
        return NodeFunction("bit", index=i)

    @staticmethod
    def negated_bit(i: int) -> "NodeFunction":
        return NodeFunction("notbit", index=i)

    @staticmethod
    def from_table(bits: str) -> "NodeFunction":
        return NodeFunction("table", table=check_bits(bits))

    def validate(self, n_input: int) -> None:
        if self.kind in ("const0", "const1"):
            return
        if self.kind in ("bit", "notbit"):
            if not 0 <= self.index < n_input:
                raise UsageError(f"bit index {self.index} out of range for n={n_input}")
            return
        if self.kind == "table":
            if len(self.table) != 1 << n_input:
                raise UsageError(
                    f"table has {len(self.table)} entries, expected {1 << n_input}"
                )
            return
        raise UsageError(f"unknown node function kind {self.kind!r}")

    def evaluate(self, u: str) -> int:
        if self.kind == "const0":
            return 0
        if self.kind == "const1":
            return 1
        if self.kind == "bit":
            return int(u[self.index])
        if self.kind == "notbit":
            return 1 - int(u[self.index])
        return int(self.table[bits_to_int(u)])

    def value_vector(self, n_input: int) -> str:
        """The function written out over all 2^n inputs in order."""
        if self.kind == "table":
            return self.table
        out = []
        for v in range(1 << n_input):
            u = format(v, f"0{n_input}b") if n_input else ""
            out.append(str(self.evaluate(u)))
        return "".join(out)


@dataclass(frozen=True)
class OutputFunction:
    """Answer announced at a leaf, a pure function of Alice's input.

    kind is "const" (fixed string), "copy_x" (Alice's input verbatim),
    "xor_mask" (Alice's input xor a fixed mask) or "table" (one output
    string per input value, concatenated in order).
    """

    kind: str
    value: str = ""

    @staticmethod
    def const(s: str) -> "OutputFunction":
        return OutputFunction("const", check_bits(s))

    @staticmethod
    def copy_x() -> "OutputFunction":
        return OutputFunction("copy_x")

    @staticmethod
    def xor_mask(mask: str) -> "OutputFunction":
        return OutputFunction("xor_mask", check_bits(mask))

    @staticmethod
    def from_table(concat: str) -> "OutputFunction":
        return OutputFunction("table", check_bits(concat))

    @staticmethod
    def from_map(n_input: int, out_len: int, fn) -> "OutputFunction":
        """Tabulate fn over all inputs of length n_input."""
        parts = []
        for v in range(1 << n_input):
            u = format(v, f"0{n_input}b") if n_input else ""
            parts.append(check_bits(fn(u), out_len))
        return OutputFunction("table", "".join(parts))

    def validate(self, n_input: int, out_len: int) -> None:
        if self.kind == "const":
            if len(self.value) != out_len:
                raise UsageError(f"const output has {len(self.value)} bits, expected {out_len}")
            return
        if self.kind == "copy_x":
            if n_input != out_len:
                raise UsageError("copy_x needs output width equal to Alice's input length")
            return
        if self.kind == "xor_mask":
            if n_input != out_len:
                raise UsageError("xor_mask needs output width equal to Alice's input length")
            if len(self.value) != n_input:
                raise UsageError(f"mask has {len(self.value)} bits, expected {n_input}")
            return
        if self.kind == "table":
            if len(self.value) != out_len * (1 << n_input):
                raise UsageError(
                    f"output table has {len(self.value)} bits, expected {out_len << n_input}"
                )
            return
        raise UsageError(f"unknown output function kind {self.kind!r}")

    def evaluate(self, x: str, out_len: int) -> str:
        if self.kind == "const":
            return self.value
        if self.kind == "copy_x":
            return x
        if self.kind == "xor_mask":
            return xor_bits(x, self.value)
        i = bits_to_int(x)
        return self.value[i * out_len:(i + 1) * out_len]


@dataclass(frozen=True)
class Speak:
    owner: str
    fn: NodeFunction
    child0: "Node"
    child1: "Node"


@dataclass(frozen=True)
class OutputLeaf:
    fn: OutputFunction


@dataclass(frozen=True)
class StuckLeaf:
    pass


Node = Union[Speak, OutputLeaf, StuckLeaf]


def tree_depth(node: Node) -> int:
    if isinstance(node, Speak):
        return 1 + max(tree_depth(node.child0), tree_depth(node.child1))
    return 0


def tree_has_stuck(node: Node) -> bool:
    if isinstance(node, StuckLeaf):
        return True
    if isinstance(node, Speak):
        return tree_has_stuck(node.child0) or tree_has_stuck(node.child1)
    return False


def default_depth_cap(n_alice: int, n_bob: int) -> int:
    """Walks longer than this count as stuck; protocols must stay within it."""
    return 4 * max(n_alice, n_bob, 1)


@dataclass(frozen=True)
class ProtocolTree:
    """A protocol with declared input lengths and output width.

    The tree is validated on construction: node functions must match the
    owner's input length, output functions the output width, and every
    root-to-leaf path must stay within the depth cap.
    """

    n_alice: int
    n_bob: int
    out_len: int
    root: Node

    def __post_init__(self) -> None:
        if min(self.n_alice, self.n_bob, self.out_len) < 1:
            raise UsageError("input lengths and output width must be positive")
        cap = default_depth_cap(self.n_alice, self.n_bob)
        self._validate(self.root, 0, cap)

    def _validate(self, node: Node, depth: int, cap: int) -> None:
        if depth > cap:
            raise UsageError(f"tree exceeds depth cap {cap}")
        if isinstance(node, Speak):
            if node.owner not in (ALICE, BOB):
                raise UsageError(f"unknown owner {node.owner!r}")
            node.fn.validate(self.n_alice if node.owner == ALICE else self.n_bob)
            self._validate(node.child0, depth + 1, cap)
            self._validate(node.child1, depth + 1, cap)
        elif isinstance(node, OutputLeaf):
            node.fn.validate(self.n_alice, self.out_len)
        elif not isinstance(node, StuckLeaf):
            raise UsageError(f"unknown node {node!r}")

    @classmethod
    def symmetric(cls, n: int, root: Node) -> "ProtocolTree":
        return cls(n, n, n, root)

    @property
    def n(self) -> int:
        if self.n_alice != self.n_bob or self.out_len != self.n_alice:
            raise UsageError("protocol is not symmetric")
        return self.n_alice

    @property
    def is_symmetric(self) -> bool:
        return self.n_alice == self.n_bob == self.out_len

    @property
    def grid_size(self) -> int:
        return 1 << (self.n_alice + self.n_bob)


@dataclass(frozen=True)
class RunOutcome:
    """Transcript plus announced output; output None means the run stuck."""

    transcript: str
    output: str | None

    @property
    def is_stuck(self) -> bool:
        return self.output is None

    @property
    def cost(self) -> int:
        return len(self.transcript)


@dataclass(frozen=True)
class HelpSpec:
    """Counts of helper-provided bits appended to each party's input."""

    alice_bits: int = 0
    bob_bits: int = 0

    def __post_init__(self) -> None:
        if self.alice_bits < 0 or self.bob_bits < 0:
            raise UsageError("help bit counts must be nonnegative")


def run(tree: ProtocolTree, x: str, y: str, depth_cap: int | None = None) -> RunOutcome:
    """Walk the tree on (x, y) and report the transcript and answer."""
    check_bits(x, tree.n_alice)
    check_bits(y, tree.n_bob)
    cap = default_depth_cap(tree.n_alice, tree.n_bob) if depth_cap is None else depth_cap
    node = tree.root
    bits: list[str] = []
    while True:
        if isinstance(node, OutputLeaf):
            return RunOutcome("".join(bits), node.fn.evaluate(x, tree.out_len))
        if isinstance(node, StuckLeaf):
            return RunOutcome("".join(bits), None)
        if len(bits) >= cap:
            return RunOutcome("".join(bits), None)
        b = node.fn.evaluate(x if node.owner == ALICE else y)
        bits.append(str(b))
        node = node.child1 if b else node.child0


def bob_message(tree: ProtocolTree, y: str) -> str | None:
    """Transcript of a one-way protocol, which depends on y alone.

    Returns None when the walk ends at a stuck leaf.
    """
    if not is_one_way(tree):
        raise UsageError("bob_message requires a one-way protocol")
    check_bits(y, tree.n_bob)
    cap = default_depth_cap(tree.n_alice, tree.n_bob)
    node = tree.root
    bits: list[str] = []
    while True:
        if isinstance(node, OutputLeaf):
            return "".join(bits)
        if isinstance(node, StuckLeaf) or len(bits) >= cap:
            return None
        b = node.fn.evaluate(y)
        bits.append(str(b))
        node = node.child1 if b else node.child0


def cc_on_input(tree: ProtocolTree, f: FunctionSpec, x: str, y: str) -> int | float:
    """Bits spoken on (x, y) when the answer is right, else infinity."""
    if not tree.is_symmetric or tree.n_alice != f.n:
        raise UsageError("protocol shape does not match the function")
    outcome = run(tree, x, y)
    if outcome.is_stuck or outcome.output != f.value(x, y):
        return float("inf")
    return outcome.cost


def is_one_way(tree: ProtocolTree) -> bool:
    """True iff no speak node anywhere in the tree belongs to Alice."""

    def scan(node: Node) -> bool:
        if isinstance(node, Speak):
            if node.owner == ALICE:
                return False
            return scan(node.child0) and scan(node.child1)
        return True

    return scan(tree.root)


def _pairs(tree: ProtocolTree):
    if tree.grid_size > _EXHAUSTIVE_LIMIT:
        raise UsageError("input grid too large for an exhaustive check")
    return product(
        ("".join(t) for t in product("01", repeat=tree.n_alice)),
        ("".join(t) for t in product("01", repeat=tree.n_bob)),
    )


def is_total(tree: ProtocolTree) -> bool:
    """True iff no input pair gets stuck.

    Trees without stuck leaves are total by construction (the depth cap is
    enforced structurally), which also settles trees whose input grid is
    too large to walk exhaustively.
    """
    if not tree_has_stuck(tree.root):
        return True
    return all(not run(tree, x, y).is_stuck for x, y in _pairs(tree))


def computes_on(tree: ProtocolTree, f: FunctionSpec, x: str, y: str) -> bool:
    """True iff the run on (x, y) announces exactly f(x, y)."""
    if not tree.is_symmetric or tree.n_alice != f.n:
        raise UsageError("protocol shape does not match the function")
    outcome = run(tree, x, y)
    return not outcome.is_stuck and outcome.output == f.value(x, y)


def computes_everywhere(tree: ProtocolTree, f: FunctionSpec) -> bool:
    """True iff every input pair terminates with the right answer."""
    if not tree.is_symmetric or tree.n_alice != f.n:
        raise UsageError("protocol shape does not match the function")
    return all(computes_on(tree, f, x, y) for x, y in _pairs(tree))


def cc_with_help(
    tree: ProtocolTree, f: FunctionSpec, x: str, y: str, help_spec: HelpSpec
) -> int | float:
    """Cheapest correct run over all help strings appended to the inputs.

    The tree must be declared over the extended lengths (n + alice_bits,
    n + bob_bits) with output width n; the answer is compared against
    f on the base pair.  With no help bits this equals cc_on_input.
    """
    check_bits(x, f.n)
    check_bits(y, f.n)
    if tree.n_alice != f.n + help_spec.alice_bits or tree.n_bob != f.n + help_spec.bob_bits:
        raise UsageError("protocol shape does not match the help specification")
    if tree.out_len != f.n:
        raise UsageError("output width must match the base input length")
    want = f.value(x, y)
    best: int | float = float("inf")
    for ha in product("01", repeat=help_spec.alice_bits):
        for hb in product("01", repeat=help_spec.bob_bits):
            outcome = run(tree, x + "".join(ha), y + "".join(hb))
            if not outcome.is_stuck and outcome.output == want and outcome.cost < best:
                best = outcome.cost
    return best


def _lift_node_fn(fn: NodeFunction, n_base: int, extra: int) -> NodeFunction:
    """Reinterpret a base-input function over a help-extended input."""
    if extra == 0 or fn.kind != "table":
        return fn
    parts = []
    for v in range(1 << (n_base + extra)):
        u = format(v, f"0{n_base + extra}b")
        parts.append(fn.table[bits_to_int(u[:n_base])])
    return NodeFunction.from_table("".join(parts))


def _lift_output_fn(fn: OutputFunction, n_base: int, extra: int) -> OutputFunction:
    if extra == 0:
        return fn
    base_eval = lambda u: fn.evaluate(u, n_base)
    return OutputFunction.from_map(n_base + extra, n_base, lambda u: base_eval(u[:n_base]))


def _literal_send_chain(f: FunctionSpec, prefix: str, extra_alice: int) -> Node:
    """Bob sends the remaining bits of y; Alice answers from the table."""
    n = f.n
    if len(prefix) == n:
        y_fixed = prefix
        return OutputLeaf(
            OutputFunction.from_map(n + extra_alice, n, lambda u: f.value(u[:n], y_fixed))
        )
    i = len(prefix)
    return Speak(
        BOB,
        NodeFunction.input_bit(i),
        _literal_send_chain(f, prefix + "0", extra_alice),
        _literal_send_chain(f, prefix + "1", extra_alice),
    )


def _totalize(node: Node, filler: Node) -> Node:
    if isinstance(node, StuckLeaf):
        return filler
    if isinstance(node, Speak):
        return Speak(
            node.owner, node.fn, _totalize(node.child0, filler), _totalize(node.child1, filler)
        )
    return node


def help_bit_totalizer(
    tree: ProtocolTree, f: FunctionSpec, mode: str = "both"
) -> ProtocolTree:
    """Wrap a protocol so one help bit makes it total and correct everywhere.

    The helped party's extra bit is spoken first and routes the run: help
    bit 1 replays the wrapped protocol on the base inputs, help bit 0 runs
    a literal-send default that is correct on every pair.  On any pair the
    wrapped protocol answers correctly the wrapper therefore costs at most
    one bit more; elsewhere the default costs n + 1.

    mode selects who receives help: "both" (one bit each), "alice-only",
    or "bob-only".  The routing bit always belongs to a helped party; with
    "alice-only" Alice both holds and resends it, so the wrapper is never
    one-way even if the wrapped protocol was.
    """
    if not tree.is_symmetric or tree.n_alice != f.n:
        raise UsageError("protocol shape does not match the function")
    if mode not in ("both", "alice-only", "bob-only"):
        raise UsageError(f"unknown totalizer mode {mode!r}")
    n = f.n
    extra_alice = 1 if mode in ("both", "alice-only") else 0
    extra_bob = 1 if mode in ("both", "bob-only") else 0

    def lift(node: Node) -> Node:
        if isinstance(node, Speak):
            extra = extra_alice if node.owner == ALICE else extra_bob
            return Speak(
                node.owner,
                _lift_node_fn(node.fn, n, extra),
                lift(node.child0),
                lift(node.child1),
            )
        if isinstance(node, OutputLeaf):
            return OutputLeaf(_lift_output_fn(node.fn, n, extra_alice))
        return node

    filler = OutputLeaf(OutputFunction.const("0" * n))
    replay = _totalize(lift(tree.root), filler)
    default = _literal_send_chain(f, "", extra_alice)
    if extra_bob:
        root = Speak(BOB, NodeFunction.input_bit(n), default, replay)
    else:
        root = Speak(ALICE, NodeFunction.input_bit(n), default, replay)
    return ProtocolTree(n + extra_alice, n + extra_bob, n, root)


def value_as_help_protocol(f: FunctionSpec) -> ProtocolTree:
    """Zero-bit protocol for a truth-valued f: Alice announces her help bit.

    Declared over (n + 1, n) inputs; with the help bit set to the truth
    value of f the announcement is correct on every pair, at cost 0.
    """
    if not f.boolean:
        raise UsageError("value_as_help_protocol needs a truth-valued function")
    n = f.n
    leaf = OutputLeaf(OutputFunction.from_map(n + 1, n, lambda u: embed_bit(int(u[n]), n)))
    return ProtocolTree(n + 1, n, n, leaf)
