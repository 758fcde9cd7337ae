"""GF(2) linear algebra on integer bitsets.

Vectors are Python ints used as bit masks (bit i = coordinate i), so row
XOR is word-parallel. Matrices are lists of such ints plus a column count.
"""

from __future__ import annotations

from typing import List, Optional


class BinMatrix:
    """Row-echelon form over GF(2) with support for rank, solving and spans.

    Rows are appended and reduced eagerly, keeping the matrix in reduced
    row-echelon form. The original row index of each pivot row is tracked
    so solutions can be expressed as combinations of the input rows.
    """

    def __init__(self, ncols: int, rows: Optional[List[int]] = None):
        self.ncols = ncols
        self.rows: List[int] = []        # reduced rows, one pivot each
        self.pivots: List[int] = []      # pivot column of each reduced row
        self.combos: List[int] = []      # combo mask of input rows per reduced row
        self._n_input = 0
        for r in rows or []:
            self.add_row(r)

    def add_row(self, v: int) -> bool:
        """Reduce v against the matrix and add it if independent.

        Returns True if the row increased the rank.
        """
        combo = 1 << self._n_input
        self._n_input += 1
        v, combo = self._reduce(v, combo)
        if v == 0:
            return False
        p = v.bit_length() - 1
        # eliminate the new pivot from existing rows
        for i, row in enumerate(self.rows):
            if (row >> p) & 1:
                self.rows[i] ^= v
                self.combos[i] ^= combo
        self.rows.append(v)
        self.pivots.append(p)
        self.combos.append(combo)
        return True

    def _reduce(self, v: int, combo: int = 0):
        for row, p, c in zip(self.rows, self.pivots, self.combos):
            if (v >> p) & 1:
                v ^= row
                combo ^= c
        return v, combo

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, v: int) -> bool:
        """True iff v lies in the row span."""
        red, _ = self._reduce(v)
        return red == 0

    def solve(self, v: int) -> Optional[int]:
        """Return a mask over input rows whose XOR equals v, or None.

        The solution is canonical: it is determined by the reduced
        echelon pivots, not by search order.
        """
        red, combo = self._reduce(v)
        if red != 0:
            return None
        return combo


def rank(rows: List[int], ncols: int) -> int:
    """Rank of a list of bit-mask rows over GF(2)."""
    m = BinMatrix(ncols)
    for r in rows:
        m.add_row(r)
    return m.rank


def nullspace(rows: List[int], ncols: int) -> List[int]:
    """Basis of the kernel of the matrix, as masks over columns.

    Solves rows . x = 0, i.e. x such that every row has even overlap.
    """
    # Gaussian elimination tracking pivot columns, then back-substitute
    # free columns.
    work = list(rows)
    pivot_col_of_row: List[int] = []
    nrows = len(work)
    r = 0
    pivot_cols = set()
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if (work[i] >> col) & 1:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(nrows):
            if i != r and ((work[i] >> col) & 1):
                work[i] ^= work[r]
        pivot_col_of_row.append(col)
        pivot_cols.add(col)
        r += 1
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = 1 << free
        for i, pcol in enumerate(pivot_col_of_row):
            if (work[i] >> free) & 1:
                vec |= 1 << pcol
        basis.append(vec)
    return basis


def popcount(v: int) -> int:
    return v.bit_count()


def bits(v: int):
    """Iterate over set bit positions of v, lowest first."""
    while v:
        low = v & -v
        yield low.bit_length() - 1
        v ^= low
