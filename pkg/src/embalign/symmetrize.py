"""Symmetrization of forward/backward asymmetric alignments.

Both inputs must share the (source, target) orientation; file readers are
responsible for transposing backward alignments produced the other way
around.
"""
from __future__ import annotations

from .core import AlignmentSet

# neighbor offsets in row-major order; diagonals included
_NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


def _check_dims(fwd: AlignmentSet, bwd: AlignmentSet):
    if (fwd.src_len, fwd.tgt_len) != (bwd.src_len, bwd.tgt_len):
        raise ValueError(
            f"dimension mismatch: forward {fwd.src_len}x{fwd.tgt_len}, "
            f"backward {bwd.src_len}x{bwd.tgt_len}"
        )


def intersect(fwd: AlignmentSet, bwd: AlignmentSet) -> AlignmentSet:
    _check_dims(fwd, bwd)
    return AlignmentSet(fwd.edges & bwd.edges, fwd.src_len, fwd.tgt_len)


def grow_diag_final_and(fwd: AlignmentSet, bwd: AlignmentSet) -> AlignmentSet:
    """Grow-diag-final-and symmetrization.

    Starting from the intersection, the grow stage repeatedly sweeps the
    current edges in row-major order and adds union edges from the
    8-neighborhood whose source or target word is still unaligned, until a
    sweep adds nothing. The final-and stage then adds remaining union edges
    whose source and target are both unaligned, again row-major. Scan order
    is fixed, so the output is deterministic.
    """
    _check_dims(fwd, bwd)
    union = fwd.edges | bwd.edges
    current = set(fwd.edges & bwd.edges)
    src_aligned = {i for i, _ in current}
    tgt_aligned = {j for _, j in current}

    def add(edge):
        current.add(edge)
        src_aligned.add(edge[0])
        tgt_aligned.add(edge[1])

    grew = True
    while grew:
        grew = False
        for i, j in sorted(current):
            for di, dj in _NEIGHBORS:
                cand = (i + di, j + dj)
                if cand in union and cand not in current and (
                    cand[0] not in src_aligned or cand[1] not in tgt_aligned
                ):
                    add(cand)
                    grew = True

    for cand in sorted(union - current):
        if cand[0] not in src_aligned and cand[1] not in tgt_aligned:
            add(cand)

    return AlignmentSet(frozenset(current), fwd.src_len, fwd.tgt_len)
