"""Per-input communication cost under a description-length budget.

A measure fixes a protocol family (total-and-correct-everywhere, total
partially correct, or partial), an interaction shape, help bits and a
code-length budget; its value on an input pair is the cheapest correct
conversation any admissible enumerated protocol has there.  On top of
the measures sit the one-way simulation of arbitrary total identity
protocols, the exchange between describable sets and one-way senders,
structure profiles over the budget axis, and the exhaustive search for
columns on which every cheap protocol must talk.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .bits import all_bitstrings, bits_from_int, check_bits, log2ceil
from .codes import (
    PdlCode,
    SdlCode,
    budget_cap,
    enumerate_sets,
    enumerate_signature,
    pdl_complexity,
    pdl_encode,
    sdl_decode,
    sdl_encode,
)
from .constructions import message_protocol, prefix_protocol
from .errors import AuditFailure, UsageError
from .functions import FunctionSpec, identity_fn
from .protocol import (
    HelpSpec,
    ProtocolTree,
    bob_message,
    cc_on_input,
    cc_with_help,
    computes_everywhere,
    is_one_way,
    is_total,
    run,
)

INF = float("inf")

FAMILIES = ("TCC", "CC", "PCC")

# Exhaustive measures re-test the same trees for totality across calls;
# the verdict only depends on the code and the signature.
_totality_cache: dict = {}


def _tree_is_total(code_bits: str, tree: ProtocolTree) -> bool:
    key = (code_bits, tree.n_alice, tree.n_bob, tree.out_len)
    hit = _totality_cache.get(key)
    if hit is None:
        hit = is_total(tree)
        _totality_cache[key] = hit
    return hit


@dataclass(frozen=True)
class Measure:
    """A protocol family plus the budget its members must fit in.

    family picks the correctness demand: TCC admits only protocols that
    never strand a pair and answer correctly on all of them, CC admits
    total protocols correct at least on the queried pair, PCC admits any
    protocol correct on the queried pair.  one_way restricts to trees in
    which only Bob speaks; help extends both inputs by trusted bits.
    """

    family: str = "TCC"
    one_way: bool = False
    help: HelpSpec = HelpSpec()
    alpha: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise UsageError(f"unknown measure family {self.family!r}")
        if self.alpha < 0:
            raise UsageError("budget must be nonnegative")


def _pair_cost(tree: ProtocolTree, f: FunctionSpec, x: str, y: str, help: HelpSpec):
    if help.alice_bits == 0 and help.bob_bits == 0:
        return cc_on_input(tree, f, x, y)
    return cc_with_help(tree, f, x, y, help)


def _everywhere(tree: ProtocolTree, f: FunctionSpec, help: HelpSpec) -> bool:
    if help.alice_bits == 0 and help.bob_bits == 0:
        return computes_everywhere(tree, f)
    return all(
        cc_with_help(tree, f, x, y, help) != INF
        for x in all_bitstrings(f.n)
        for y in all_bitstrings(f.n)
    )


def _admissible(code_bits: str, tree: ProtocolTree, m: Measure, f: FunctionSpec) -> bool:
    if m.family in ("TCC", "CC") and not _tree_is_total(code_bits, tree):
        return False
    if m.family == "TCC" and not _everywhere(tree, f, m.help):
        return False
    return True


def individual_cc(m: Measure, f: FunctionSpec, x: str, y: str):
    """Cheapest correct conversation on (x, y) within the measure's family.

    Returns (bits, witness code); the minimum of an empty family is
    infinity with no witness.  Ties go to the canonically first code.
    """
    n = f.n
    if n > 3:
        raise UsageError("exhaustive measures support n <= 3")
    if m.alpha > budget_cap():
        raise UsageError(f"budget {m.alpha} exceeds the enumeration cap")
    check_bits(x, n)
    check_bits(y, n)
    a, b = m.help.alice_bits, m.help.bob_bits
    best: tuple = (INF, None)
    for code, tree in enumerate_signature(
        n + a, n + b, n, m.alpha, require_one_way=m.one_way
    ):
        cost = _pair_cost(tree, f, x, y, m.help)
        if cost == INF or cost >= best[0]:
            continue
        if not _admissible(code.bits, tree, m, f):
            continue
        best = (cost, code)
    return best


# ---------------------------------------------------------------------------
# one-way simulation of total identity protocols


def transcript_decoder(tree: ProtocolTree, x: str, transcript: str) -> str | None:
    """Replay a transcript against Alice's input alone and read the answer.

    Walks the tree letting the transcript stand in for Bob; Alice's own
    bits must match the transcript or the replay is rejected (None), as
    is a transcript that ends early or runs long.  A successful replay
    shows the pair (code, transcript) determines the output given x.
    """
    from .protocol import OutputLeaf, Speak, StuckLeaf, ALICE

    check_bits(x, tree.n_alice)
    node = tree.root
    pos = 0
    while isinstance(node, Speak):
        if pos >= len(transcript):
            return None
        bit = int(transcript[pos])
        if node.owner == ALICE and node.fn.evaluate(x) != bit:
            return None
        pos += 1
        node = node.child1 if bit else node.child0
    if isinstance(node, StuckLeaf) or pos != len(transcript):
        return None
    return node.fn.evaluate(x, tree.out_len)


@dataclass
class OneWaySimulation:
    """One-way sender distilled from a total two-way identity protocol."""

    tree: ProtocolTree
    code: PdlCode
    y: str
    message: str
    messages: dict
    source_code_length: int

    @property
    def code_length(self) -> int:
        return len(self.code.bits)


def one_way_from_two_way(tree: ProtocolTree, y: str) -> OneWaySimulation:
    """Collapse a total identity protocol to its cheapest-per-column messages.

    For every column the sender transmits the (length, lex)-least
    transcript the original protocol produces on that column; since a
    total correct identity protocol pins each transcript to a single
    column, these messages are distinct and prefix-free, and the new
    cost on (x, y) never exceeds the old one for any x.
    """
    if not tree.is_symmetric:
        raise UsageError("expected a symmetric identity protocol")
    n = tree.n
    f = identity_fn(n)
    check_bits(y, n)
    if tree.grid_size > (1 << 16):
        raise UsageError("input grid too large to walk exhaustively")
    if not (is_total(tree) and computes_everywhere(tree, f)):
        raise UsageError("protocol is not total and correct for the identity")
    messages = {}
    for col in all_bitstrings(n):
        best = min(
            (run(tree, row, col).transcript for row in all_bitstrings(n)),
            key=lambda t: (len(t), t),
        )
        messages[col] = best
    if len(set(messages.values())) != 1 << n:
        raise AuditFailure("two columns share a transcript in a correct protocol")
    sim = message_protocol(messages, {col: col for col in messages}, n, n)
    for row in all_bitstrings(n):
        before = cc_on_input(tree, f, row, y)
        after = cc_on_input(sim, f, row, y)
        if after > before:
            raise AuditFailure(
                f"one-way cost {after} exceeds two-way cost {before} on row {row}"
            )
    return OneWaySimulation(
        sim, pdl_encode(sim), y, messages[y], messages, pdl_complexity(tree)
    )


# ---------------------------------------------------------------------------
# describable sets vs one-way senders


def set_to_oneway(members, n: int) -> ProtocolTree:
    """Sender announcing membership rank, or the column itself outside.

    Inside the set the message is a 1 flag plus the ceil(log2 |S|)-bit
    rank in sorted order; outside it is a 0 flag plus the column
    literally.  Total and correct for the identity on every pair.
    """
    ordered = sorted(members)
    if not ordered:
        raise UsageError("the set must be nonempty")
    for m in ordered:
        check_bits(m, n)
    width = log2ceil(len(ordered))
    rank = {m: i for i, m in enumerate(ordered)}
    messages = {}
    for col in all_bitstrings(n):
        if col in rank:
            messages[col] = "1" + bits_from_int(rank[col], width)
        else:
            messages[col] = "0" + col
    return message_protocol(messages, {col: col for col in messages}, n, n)


def oneway_to_set(tree: ProtocolTree, y: str) -> frozenset:
    """Columns whose message length matches y's; a set of size <= 2^length.

    The sender must be one-way, total and correct for the identity, so
    distinct columns carry distinct messages and the same-length class
    containing y has at most 2^length members.
    """
    if not tree.is_symmetric:
        raise UsageError("expected a symmetric identity protocol")
    n = tree.n
    check_bits(y, n)
    if not is_one_way(tree):
        raise UsageError("expected a one-way protocol")
    if not (is_total(tree) and computes_everywhere(tree, identity_fn(n))):
        raise UsageError("protocol is not total and correct for the identity")
    target = len(bob_message(tree, y))
    result = frozenset(
        col for col in all_bitstrings(n) if len(bob_message(tree, col)) == target
    )
    if y not in result:
        raise AuditFailure("the defining column fell out of its own class")
    if len(result) > (1 << target):
        raise AuditFailure(
            f"{len(result)} columns share a {target}-bit message length"
        )
    return result


# ---------------------------------------------------------------------------
# profiles over the budget axis


@dataclass
class ComplexityProfile:
    """Value and witness per budget; values never increase with budget."""

    label: str
    entries: dict  # alpha -> (value, witness code or None)

    SCHEMA = "cclab-profile/1"

    def value(self, alpha: int):
        return self.entries[alpha][0]

    def witness(self, alpha: int):
        return self.entries[alpha][1]

    def assert_nonincreasing(self) -> None:
        last = INF
        for alpha in sorted(self.entries):
            v = self.entries[alpha][0]
            if v > last:
                raise AuditFailure(
                    f"profile {self.label} rises at budget {alpha}: {last} -> {v}"
                )
            last = v

    @staticmethod
    def _format_value(v) -> str:
        if v == INF:
            return "inf"
        if isinstance(v, float) and not v.is_integer():
            return f"{v:.10g}"
        return str(int(v))

    def to_csv(self) -> str:
        lines = ["alpha,value,witness_hex"]
        for alpha in sorted(self.entries):
            v, w = self.entries[alpha]
            lines.append(f"{alpha},{self._format_value(v)},{w.hex() if w else ''}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        rows = []
        for alpha in sorted(self.entries):
            v, w = self.entries[alpha]
            rows.append(
                {
                    "alpha": alpha,
                    "value": None if v == INF else v,
                    "witness": w.hex() if w else None,
                }
            )
        return json.dumps(
            {"schema": self.SCHEMA, "label": self.label, "entries": rows},
            indent=2,
        )


def _fold_profile(label: str, alpha_max: int, candidates) -> ComplexityProfile:
    """Prefix-minimum over code length; candidates iterate in canonical order."""
    entries = {a: (INF, None) for a in range(alpha_max + 1)}
    for length, value, witness in candidates:
        for a in range(length, alpha_max + 1):
            if value < entries[a][0]:
                entries[a] = (value, witness)
    profile = ComplexityProfile(label, entries)
    profile.assert_nonincreasing()
    return profile


def structure_function_profile(y: str, alpha_max: int) -> ComplexityProfile:
    """Least log-size of a describable set containing y, per set-code budget."""
    n = len(check_bits(y))
    if n > 4:
        raise UsageError("set profiles support n <= 4")
    if alpha_max > budget_cap():
        raise UsageError(f"budget {alpha_max} exceeds the enumeration cap")

    def candidates():
        for code, members in enumerate_sets(n, alpha_max):
            if y in members:
                yield len(code.bits), math.log2(len(members)), code

    return _fold_profile(f"sets({y})", alpha_max, candidates())


@dataclass
class EquivalenceRow:
    """Measured exchange between a set witness and a protocol witness at one budget."""

    alpha: int
    h_value: float
    set_code_length: int | None
    derived_protocol_length: int | None
    derived_message_length: int | None
    protocol_value: float
    back_set_log: float | None
    back_set_code_length: int | None


@dataclass
class PrefixRow:
    """Hard-wired-prefix sender: budget spent vs bits still spoken."""

    prefix_bits: int
    code_length: int
    cost: int


@dataclass
class AgreementRow:
    alpha: int
    x: str
    two_way: float
    one_way: float

    @property
    def equal(self) -> bool:
        return self.two_way == self.one_way


@dataclass
class TccProfileReport:
    """Identity profiles of one column, with the x-freeness audit.

    one_way is the x-free profile (message length of the best admissible
    sender); two_way maps each row to its own profile.  agreement lists
    both values per (budget, row); equivalence and prefix_rows record
    the measured constants in the set exchange and the hard-wired-prefix
    upper bound.
    """

    y: str
    one_way: ComplexityProfile
    two_way: dict
    agreement: list
    equivalence: list
    prefix_rows: list


def tcc_identity_profile(y: str, alpha_max: int, x: str | None = None) -> TccProfileReport:
    n = len(check_bits(y))
    if n > 3:
        raise UsageError("identity profiles support n <= 3")
    if alpha_max > budget_cap():
        raise UsageError(f"budget {alpha_max} exceeds the enumeration cap")
    f = identity_fn(n)
    rows = [x] if x is not None else list(all_bitstrings(n))
    for row in rows:
        check_bits(row, n)

    def oneway_candidates():
        for code, tree in enumerate_signature(
            n, n, n, alpha_max, require_one_way=True
        ):
            if not _tree_is_total(code.bits, tree):
                continue
            if not computes_everywhere(tree, f):
                continue
            yield len(code.bits), len(bob_message(tree, y)), code

    one_way = _fold_profile(f"oneway({y})", alpha_max, oneway_candidates())

    admissible = []
    for code, tree in enumerate_signature(n, n, n, alpha_max):
        if _tree_is_total(code.bits, tree) and computes_everywhere(tree, f):
            admissible.append((code, tree))
    two_way = {}
    for row in rows:
        two_way[row] = _fold_profile(
            f"twoway({row},{y})",
            alpha_max,
            (
                (len(code.bits), cc_on_input(tree, f, row, y), code)
                for code, tree in admissible
            ),
        )

    agreement = [
        AgreementRow(a, row, two_way[row].value(a), one_way.value(a))
        for a in range(alpha_max + 1)
        for row in rows
    ]
    for r in agreement:
        if r.two_way > r.one_way:
            raise AuditFailure(
                "two-way minimum exceeds one-way minimum at equal budget"
            )

    sets = structure_function_profile(y, min(alpha_max, budget_cap()))
    equivalence = []
    for a in range(alpha_max + 1):
        h_val, set_wit = sets.entries.get(a, (INF, None))
        derived_len = derived_msg = None
        if set_wit is not None:
            members = sdl_decode(set_wit, n)
            derived = set_to_oneway(members, n)
            derived_len = pdl_complexity(derived)
            derived_msg = len(bob_message(derived, y))
        back_log = back_len = None
        proto_val, proto_wit = one_way.entries[a]
        if proto_wit is not None:
            from .codes import decode_signature

            back = oneway_to_set(decode_signature(proto_wit, n, n, n), y)
            back_log = math.log2(len(back))
            back_len = len(sdl_encode(back, n).bits)
        equivalence.append(
            EquivalenceRow(
                a, h_val, None if set_wit is None else len(set_wit.bits),
                derived_len, derived_msg, proto_val, back_log, back_len,
            )
        )

    prefix_rows = []
    for a in range(n + 1):
        sender = prefix_protocol(y, a)
        prefix_rows.append(
            PrefixRow(a, pdl_complexity(sender), len(bob_message(sender, y)))
        )

    return TccProfileReport(y, one_way, two_way, agreement, equivalence, prefix_rows)


# ---------------------------------------------------------------------------
# hard columns by counting


@dataclass
class HardYReport:
    """Exhaustive per-column cost map with the counting audit.

    threshold is n - alpha; qualifying columns reach it.  count_below
    must stay under 2^n for the hard column to exist by counting; when
    the threshold is nonpositive every column qualifies vacuously and
    the note says so.
    """

    n: int
    alpha: int
    x: str
    y: str
    value: float
    values: dict
    threshold: int
    count_below: int
    note: str = ""


def find_hard_y(n: int, alpha: int, x: str) -> HardYReport:
    """First column whose budget-limited cost reaches n - alpha.

    Scans all columns under the CC measure (total protocols, correct on
    the scanned pair) and returns the lexicographically first column at
    or above the threshold, falling back to the first maximizer if the
    counting guarantee has no bite in the enumerated family.
    """
    if n > 3:
        raise UsageError("exhaustive search supports n <= 3")
    check_bits(x, n)
    m = Measure(family="CC", alpha=alpha)
    f = identity_fn(n)
    values = {}
    for y in all_bitstrings(n):
        values[y] = individual_cc(m, f, x, y)[0]
    threshold = n - alpha
    count_below = sum(1 for v in values.values() if v < threshold)
    if count_below >= 1 << n:
        raise AuditFailure("counting bound violated: every column is cheap")
    note = ""
    if threshold <= 0:
        note = "threshold is nonpositive, every column qualifies vacuously"
    hard = next((y for y, v in values.items() if v >= threshold), None)
    if hard is None:
        top = max(values.values())
        hard = next(y for y, v in values.items() if v == top)
        note = "no column reaches the threshold; returning the first maximizer"
    return HardYReport(
        n, alpha, x, hard, values[hard], values, threshold, count_below, note
    )
