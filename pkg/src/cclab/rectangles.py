"""Transcript classes, rectangle audits, and GF(2) rank certificates.

A deterministic protocol partitions the non-stuck part of the input grid
into transcript classes, and every class is a combinatorial rectangle:
the set of pairs producing a given conversation is a product X x Y.  The
functions here extract that partition, check it, and run the audits that
hang off it (monochromaticity, the rank-based product bound for inner
product, the diagonal argument for equality).

All grids are tiny by construction, so rectangles are stored as explicit
sets of bit strings and every audit is exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bits import all_bitstrings, bits_to_int, embed_bit, xor_bits
from .errors import AuditFailure, RectangleViolation, UsageError
from .functions import FunctionSpec, FunctionTable, equality_fn, inner_product_fn
from .protocol import ProtocolTree, computes_everywhere, run

# Exhaustive audits refuse anything past this many grid cells.
GRID_CAP = 1 << 16


@dataclass(frozen=True)
class Rectangle:
    """A product set of inputs: rows are Alice's side, cols are Bob's."""

    rows: frozenset
    cols: frozenset

    @property
    def size(self) -> int:
        return len(self.rows) * len(self.cols)

    def contains(self, x: str, y: str) -> bool:
        return x in self.rows and y in self.cols

    def sorted_rows(self) -> list:
        return sorted(self.rows)

    def sorted_cols(self) -> list:
        return sorted(self.cols)


@dataclass
class TranscriptPartition:
    """Transcript -> rectangle map covering every non-stuck input pair."""

    classes: dict
    covered: set
    n_alice: int
    n_bob: int

    @property
    def is_total_cover(self) -> bool:
        return len(self.covered) == (1 << self.n_alice) * (1 << self.n_bob)

    def class_of(self, transcript: str) -> Rectangle:
        return self.classes[transcript]

    def sorted_transcripts(self) -> list:
        return sorted(self.classes, key=lambda t: (len(t), t))


def transcript_partition(tree: ProtocolTree) -> TranscriptPartition:
    """Group all pairs by conversation and verify each class is a rectangle.

    The rectangle property is a theorem for protocol trees, so a violation
    here means the execution engine itself is broken; it is reported as a
    RectangleViolation carrying the transcript and up to four witness
    pairs rather than silently producing a bad partition.
    """
    if tree.grid_size > GRID_CAP:
        raise UsageError(
            f"grid of {tree.grid_size} cells exceeds the exhaustive cap {GRID_CAP}"
        )
    groups: dict = {}
    covered = set()
    for x in all_bitstrings(tree.n_alice):
        for y in all_bitstrings(tree.n_bob):
            outcome = run(tree, x, y)
            if outcome.is_stuck:
                continue
            covered.add((x, y))
            rows, cols, pairs = groups.setdefault(outcome.transcript, (set(), set(), set()))
            rows.add(x)
            cols.add(y)
            pairs.add((x, y))
    classes = {}
    for transcript, (rows, cols, pairs) in groups.items():
        if len(pairs) != len(rows) * len(cols):
            missing = [
                (x, y) for x in sorted(rows) for y in sorted(cols) if (x, y) not in pairs
            ]
            raise RectangleViolation(transcript, missing[:4])
        classes[transcript] = Rectangle(frozenset(rows), frozenset(cols))
    return TranscriptPartition(classes, covered, tree.n_alice, tree.n_bob)


def rectangle_color(rect: Rectangle, f: FunctionSpec) -> int | None:
    """The constant truth value of f on the rectangle, or None if mixed."""
    if not f.boolean:
        raise UsageError("monochromaticity is defined for truth-valued functions")
    seen = {f.bit(x, y) for x in rect.rows for y in rect.cols}
    if len(seen) == 1:
        return seen.pop()
    return None


def is_monochromatic(rect: Rectangle, f: FunctionSpec) -> bool:
    if rect.size == 0:
        return True
    return rectangle_color(rect, f) is not None


def gf2_rank(vectors) -> int:
    """Rank over GF(2) of a collection of equal-length bit strings."""
    basis: dict = {}
    for v in vectors:
        cur = bits_to_int(v) if isinstance(v, str) else int(v)
        while cur:
            top = cur.bit_length() - 1
            if top in basis:
                cur ^= basis[top]
            else:
                basis[top] = cur
                break
    return len(basis)


@dataclass(frozen=True)
class IpClassRecord:
    transcript: str
    value: int
    rows: int
    cols: int
    product: int
    rank_rows: int
    rank_cols: int


@dataclass
class IpAuditReport:
    n: int
    records: list = field(default_factory=list)

    @property
    def max_product(self) -> int:
        return max((r.product for r in self.records), default=0)

    @property
    def bound(self) -> int:
        return 1 << self.n


def ip_rectangle_audit(tree: ProtocolTree) -> IpAuditReport:
    """Check |X|*|Y| <= 2^n for every output-refined transcript class.

    Classes are refined by Alice's announced value, then certified two
    ways: by direct counting, and through the rank argument (for value 1
    the class is first translated by one of its rows so that every row is
    orthogonal to every column).  Both checks are theorems for a protocol
    that computes inner product everywhere, so a failure is flagged as an
    engine bug, not as a property of the protocol.
    """
    if not tree.is_symmetric:
        raise UsageError("inner product audit needs equal input lengths")
    n = tree.n
    f = inner_product_fn(n)
    if not computes_everywhere(tree, f):
        raise UsageError("protocol does not compute inner product everywhere")
    partition = transcript_partition(tree)
    report = IpAuditReport(n)
    for transcript in partition.sorted_transcripts():
        rect = partition.class_of(transcript)
        any_y = min(rect.cols)
        outputs = {x: run(tree, x, any_y).output for x in rect.rows}
        for value in (0, 1):
            want = embed_bit(value, n)
            rows_v = frozenset(x for x in rect.rows if outputs[x] == want)
            if not rows_v:
                continue
            if value == 1:
                base = min(rows_v)
                cert_rows = [xor_bits(x, base) for x in sorted(rows_v)]
            else:
                cert_rows = sorted(rows_v)
            rank_rows = gf2_rank(cert_rows)
            rank_cols = gf2_rank(sorted(rect.cols))
            product = len(rows_v) * len(rect.cols)
            record = IpClassRecord(
                transcript, value, len(rows_v), len(rect.cols), product, rank_rows, rank_cols
            )
            if rank_rows + rank_cols > n:
                raise AuditFailure(
                    f"rank certificate failed on transcript {transcript!r}: "
                    f"{rank_rows}+{rank_cols} > {n}"
                )
            if product > (1 << n):
                raise AuditFailure(
                    f"class product {product} exceeds 2^{n} on transcript {transcript!r}"
                )
            report.records.append(record)
    return report


@dataclass(frozen=True)
class MonoRectResult:
    size: int
    rectangle: Rectangle
    color: int
    exact: bool


def max_monochromatic_rectangle(table: FunctionTable) -> MonoRectResult:
    """Largest monochromatic rectangle of a Boolean truth table.

    Exact for n <= 4 by enumerating row subsets and intersecting column
    masks (2^16 subsets at most); beyond that a greedy grower runs and the
    result is only a certified lower bound, marked exact=False.
    """
    if not table.boolean:
        raise UsageError("rectangle maximization needs a truth-valued table")
    n = table.n
    size = 1 << n
    if size * size > GRID_CAP:
        raise UsageError(f"table with {size * size} cells exceeds the cap {GRID_CAP}")
    labels = list(all_bitstrings(n))
    # column mask per row and color: bit j set iff f(row, labels[j]) == color
    masks = {
        c: [
            sum(1 << j for j in range(size) if table.cells[i][j] == str(c))
            for i in range(size)
        ]
        for c in (0, 1)
    }
    full = (1 << size) - 1

    def unpack(row_bits: int, col_bits: int, color: int) -> MonoRectResult:
        rows = frozenset(labels[i] for i in range(size) if row_bits >> i & 1)
        cols = frozenset(labels[j] for j in range(size) if col_bits >> j & 1)
        w = len(rows) * len(cols)
        return MonoRectResult(w, Rectangle(rows, cols), color, n <= 4)

    best = (0, 0, 0, 0)  # size, row subset, col mask, color
    if n <= 4:
        inter = [0] * (1 << size)
        for color in (0, 1):
            inter[0] = full
            row_masks = masks[color]
            for subset in range(1, 1 << size):
                low = subset & -subset
                m = inter[subset ^ low] & row_masks[low.bit_length() - 1]
                inter[subset] = m
                score = subset.bit_count() * m.bit_count()
                if score > best[0]:
                    best = (score, subset, m, color)
        return unpack(best[1], best[2], best[3])

    # greedy fallback: grow from each seed row, keeping the best product
    for color in (0, 1):
        row_masks = masks[color]
        for seed in range(size):
            if not row_masks[seed]:
                continue
            chosen = 1 << seed
            cols = row_masks[seed]
            score = cols.bit_count()
            if score > best[0]:
                best = (score, chosen, cols, color)
            while True:
                gain = None
                for r in range(size):
                    if chosen >> r & 1:
                        continue
                    cand = cols & row_masks[r]
                    cand_score = (chosen.bit_count() + 1) * cand.bit_count()
                    if cand_score > score and (gain is None or cand_score > gain[0]):
                        gain = (cand_score, r, cand)
                if gain is None:
                    break
                score, r, cols = gain
                chosen |= 1 << r
                if score > best[0]:
                    best = (score, chosen, cols, color)
    return unpack(best[1], best[2], best[3])


@dataclass
class DiagonalReport:
    n: int
    lengths: dict
    max_length: int
    distinct: int

    @property
    def min_required(self) -> int:
        return self.n


def equality_diagonal_bound(tree: ProtocolTree) -> DiagonalReport:
    """Distinct diagonal transcripts force a conversation of >= n bits.

    For a protocol computing equality everywhere, transcripts on (x, x)
    are pairwise distinct: sharing one would put some (x, x') with x != x'
    in the same rectangle, where Alice's answer depends on x alone and is
    already forced to 1 by the diagonal pair.  Distinctness plus the
    prefix-free property of conversations gives max length >= n.
    """
    if not tree.is_symmetric:
        raise UsageError("equality audit needs equal input lengths")
    n = tree.n
    if not computes_everywhere(tree, equality_fn(n)):
        raise UsageError("protocol does not compute equality everywhere")
    transcripts = {}
    for x in all_bitstrings(n):
        t = run(tree, x, x).transcript
        if t in transcripts:
            raise AuditFailure(
                f"diagonal transcripts collide on {transcripts[t]!r} and {x!r}"
            )
        transcripts[t] = x
    lengths: dict = {}
    for t in transcripts:
        lengths[len(t)] = lengths.get(len(t), 0) + 1
    max_length = max(lengths)
    if max_length < n:
        raise AuditFailure(
            f"prefix-free counting violated: {1 << n} transcripts, max {max_length} < {n}"
        )
    return DiagonalReport(n, dict(sorted(lengths.items())), max_length, len(transcripts))
