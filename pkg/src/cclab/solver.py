"""Exact worst-case deterministic cost by rectangle-partition search.

The classic baseline for contrast with per-input values: the cheapest
depth any tree needs on its worst pair, found by trying every way either
party can split the current sub-grid.  Announcing the answer at a leaf
is free, matching the cost convention everywhere else in the package, so
a sub-grid is finished exactly when the function is constant on it.
"""

from __future__ import annotations

from .bits import all_bitstrings
from .constructions import fit_node_function
from .errors import AuditFailure, UsageError
from .functions import FunctionSpec
from .protocol import (
    ALICE,
    BOB,
    OutputFunction,
    OutputLeaf,
    ProtocolTree,
    Speak,
    computes_everywhere,
    is_total,
    run,
)


def dcc_exact(f: FunctionSpec) -> tuple[int, ProtocolTree]:
    """Worst-case bits needed for f, with a tree achieving that depth.

    Memoized min-max over sub-grids: a constant sub-grid costs 0, and
    otherwise one bit plus the best achievable worst half over every
    proper bipartition of either side.  Deterministic tie-breaking
    (Alice's splits first, earlier bipartitions first) pins down the
    returned tree.  Exponential in 2^n, hence the n <= 3 cap.
    """
    n = f.n
    if n > 3:
        raise UsageError("exact search supports n <= 3")
    space = tuple(all_bitstrings(n))
    value = {(x, y): f.value(x, y) for x in space for y in space}
    memo: dict = {}

    def solve(rows: tuple, cols: tuple):
        key = (rows, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        first = value[rows[0], cols[0]]
        if all(value[x, y] == first for x in rows for y in cols):
            result = (0, OutputLeaf(OutputFunction.const(first)))
            memo[key] = result
            return result
        best = None
        for owner, side in ((ALICE, rows), (BOB, cols)):
            if len(side) < 2:
                continue
            head, rest = side[0], side[1:]
            for mask in range(1, 1 << len(rest)):
                ones = tuple(e for i, e in enumerate(rest) if mask >> i & 1)
                zeros = (head,) + tuple(
                    e for i, e in enumerate(rest) if not mask >> i & 1
                )
                if owner == ALICE:
                    c0, t0 = solve(zeros, cols)
                    c1, t1 = solve(ones, cols)
                else:
                    c0, t0 = solve(rows, zeros)
                    c1, t1 = solve(rows, ones)
                cost = 1 + max(c0, c1)
                if best is None or cost < best[0]:
                    fn = fit_node_function(
                        {e: 1 for e in ones} | {e: 0 for e in zeros}, n
                    )
                    best = (cost, Speak(owner, fn, t0, t1))
        memo[key] = best
        return best

    bits, root = solve(space, space)
    tree = ProtocolTree.symmetric(n, root)
    if not (is_total(tree) and computes_everywhere(tree, f)):
        raise AuditFailure("optimal tree fails its own correctness check")
    worst = max(
        run(tree, x, y).cost for x in space for y in space
    )
    if worst != bits:
        raise AuditFailure(f"tree depth {worst} disagrees with computed cost {bits}")
    return bits, tree
