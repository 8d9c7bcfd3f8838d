"""Sparse row echelon form over F_p with combination tracking.

Rows are dicts from a totally ordered key (here: words) to residues.
Each stored row remembers which input rows it is a combination of, so a
successful reduction yields an explicit linear combination.
"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, Iterable, Optional, Tuple

Row = Dict[Hashable, int]


def _axpy(dst: Row, a: int, src: Row, p: int) -> None:
    # dst += a * src, in place
    for k, c in src.items():
        s = (dst.get(k, 0) + a * c) % p
        if s:
            dst[k] = s
        else:
            dst.pop(k, None)


class EchelonBasis:
    """Incrementally built echelon basis; pivots are the least key of each row."""

    def __init__(self, p: int, key: Callable = None):
        self.p = p
        self.key = key or (lambda k: k)
        self.pivots: Dict[Hashable, Tuple[Row, Row]] = {}  # lead -> (row, combo)

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _lead(self, row: Row):
        return min(row, key=self.key)

    def reduce(self, row: Row, combo: Optional[Row] = None) -> Tuple[Row, Row]:
        """Eliminate pivot leads from ``row``.

        Every multiple of a pivot row added to ``row`` is added to ``combo``
        as the same multiple of that pivot's combination, so
        residual - row == sum((combo - initial combo)[i] * input_i).
        """
        p = self.p
        row = dict(row)
        combo = dict(combo or {})
        while row:
            lead = self._lead(row)
            hit = self.pivots.get(lead)
            if hit is None:
                break
            prow, pcombo = hit
            a = (-row[lead]) % p
            _axpy(row, a, prow, p)
            _axpy(combo, a, pcombo, p)
        return row, combo

    def add(self, row: Row, tag: Hashable) -> bool:
        """Insert input row ``tag``; returns False when it is dependent."""
        p = self.p
        residual, combo = self.reduce(row, {tag: 1})
        if not residual:
            return False
        lead = self._lead(residual)
        inv = pow(residual[lead], -1, p)
        residual = {k: c * inv % p for k, c in residual.items()}
        combo = {k: c * inv % p for k, c in combo.items()}
        self.pivots[lead] = (residual, combo)
        return True

    def express(self, row: Row) -> Optional[Row]:
        """Coefficients c_i with row == sum c_i * input_i, or None if outside the span."""
        residual, combo = self.reduce(row)
        if residual:
            return None
        p = self.p
        # reduce() subtracts; the combination expressing row is the negation
        return {k: (-c) % p for k, c in combo.items() if c % p}


def rank_mod_p(rows: Iterable[Row], p: int, key: Callable = None) -> int:
    basis = EchelonBasis(p, key)
    for i, r in enumerate(rows):
        basis.add(r, i)
    return basis.rank
