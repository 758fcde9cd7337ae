"""Phase-free n-qubit Pauli operators in binary symplectic form.

A Pauli is a pair of bit masks (x, z); bit q of x set means the operator
acts with an X component on qubit q, similarly for z. Y is x and z both
set. Global phases are never represented: the product is component-wise
XOR and equality means equality up to phase.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .gf2 import BinMatrix


@dataclass(frozen=True)
class PauliOp:
    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("component bits outside qubit range")

    @staticmethod
    def identity(n: int) -> "PauliOp":
        return PauliOp(n, 0, 0)

    @staticmethod
    def single(n: int, q: int, kind: str) -> "PauliOp":
        """Single-qubit Pauli of the given kind ('X', 'Y' or 'Z') on qubit q."""
        if not 0 <= q < n:
            raise ValueError(f"qubit {q} out of range")
        bit = 1 << q
        if kind == "X":
            return PauliOp(n, bit, 0)
        if kind == "Z":
            return PauliOp(n, 0, bit)
        if kind == "Y":
            return PauliOp(n, bit, bit)
        raise ValueError(f"unknown Pauli kind {kind!r}")

    @staticmethod
    def from_terms(n: int, terms: Iterable[Tuple[int, str]]) -> "PauliOp":
        x = z = 0
        for q, kind in terms:
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} out of range")
            bit = 1 << q
            if kind in ("X", "Y"):
                x ^= bit
            if kind in ("Z", "Y"):
                z ^= bit
        return PauliOp(n, x, z)

    @staticmethod
    def from_string(s: str) -> "PauliOp":
        """Parse an IXYZ string, qubit 0 leftmost."""
        x = z = 0
        for q, ch in enumerate(s):
            if ch == "I":
                continue
            if ch in ("X", "Y"):
                x |= 1 << q
            if ch in ("Z", "Y"):
                z |= 1 << q
            if ch not in "IXYZ":
                raise ValueError(f"invalid Pauli character {ch!r}")
        return PauliOp(len(s), x, z)

    def to_string(self) -> str:
        """Render as an IXYZ string, qubit 0 leftmost. Round-trips exactly."""
        out = []
        for q in range(self.n):
            xb = (self.x >> q) & 1
            zb = (self.z >> q) & 1
            out.append("IXZY"[xb + 2 * zb])
        return "".join(out)

    def kind_at(self, q: int) -> str:
        xb = (self.x >> q) & 1
        zb = (self.z >> q) & 1
        return ("I", "X", "Z", "Y")[xb + 2 * zb]

    @property
    def support(self) -> int:
        return self.x | self.z

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return multiply(self, other)

    def __str__(self) -> str:
        return self.to_string()


def multiply(p: PauliOp, q: PauliOp) -> PauliOp:
    """Phase-free product: component-wise XOR. Self-inverse and commutative."""
    if p.n != q.n:
        raise ValueError("qubit count mismatch")
    return PauliOp(p.n, p.x ^ q.x, p.z ^ q.z)


def product(n: int, ops: Iterable[PauliOp]) -> PauliOp:
    x = z = 0
    for op in ops:
        if op.n != n:
            raise ValueError("qubit count mismatch")
        x ^= op.x
        z ^= op.z
    return PauliOp(n, x, z)


def commutes(p: PauliOp, q: PauliOp) -> int:
    """Symplectic form: 0 if p and q commute, 1 if they anticommute."""
    if p.n != q.n:
        raise ValueError("qubit count mismatch")
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1


def weight(p: PauliOp) -> int:
    """Number of qubits acted on non-trivially."""
    return (p.x | p.z).bit_count()


def to_symplectic(p: PauliOp) -> int:
    """Bit vector (x | z<<n) used for GF(2) span computations."""
    return p.x | (p.z << p.n)


def from_symplectic(n: int, v: int) -> PauliOp:
    mask = (1 << n) - 1
    return PauliOp(n, v & mask, (v >> n) & mask)


def span_matrix(gens: Sequence[PauliOp]) -> BinMatrix:
    """Echelon form of the symplectic images of gens; reusable for many solves."""
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].n
    m = BinMatrix(2 * n)
    for g in gens:
        if g.n != n:
            raise ValueError("mixed qubit counts")
        m.add_row(to_symplectic(g))
    return m


def in_span(v: int, m: BinMatrix) -> Optional[int]:
    """Coefficient mask c with XOR of selected rows equal to v, else None."""
    return m.solve(v)


def group_membership(p: PauliOp, gens: Sequence[PauliOp],
                     m: Optional[BinMatrix] = None) -> Optional[List[int]]:
    """Express p (up to phase) as a product of gens.

    Returns the list of generator indices whose product equals p bit-for-bit
    in the phase-free representation, or None if p is not in the group.
    Pass a prebuilt span matrix to amortize the elimination.
    """
    if m is None:
        m = span_matrix(gens)
    combo = m.solve(to_symplectic(p))
    if combo is None:
        return None
    idxs = [i for i in range(len(gens)) if (combo >> i) & 1]
    # safety: re-multiplied combination must reproduce p exactly
    acc = product(p.n, (gens[i] for i in idxs))
    assert acc.x == p.x and acc.z == p.z
    return idxs
