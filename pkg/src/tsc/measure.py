"""Two-qubit measurement schedules for stabilizer syndrome extraction.

A stabilizer can be measured through a sequence of two-qubit gauge
operators when it factors as an ordered product in which every factor
commutes with the product of all factors before it. `check_decomposition`
verifies that condition; `synthesize_schedule` constructs such a sequence
for a stabilizer loop operator: solid links of the cycle are measured
directly, each triangle is replaced by one of its dashed ZZ links, and
the leftover single-site Z's are completed out of dashed links, ZZ links
and whole-square side products.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, List, Optional, Sequence, Tuple

from . import gf2
from .gf2 import BinMatrix
from .codes import CodeInstance, GaugeGen, loop_operator
from .hypergraph import Cycle
from .pauli import PauliOp, commutes, product, weight


@dataclass
class DecompositionCheck:
    product_matches: bool
    first_violation: Optional[int]    # earliest index violating the prefix rule

    @property
    def ok(self) -> bool:
        return self.product_matches and self.first_violation is None


def check_decomposition(code: CodeInstance, stabilizer: PauliOp,
                        ordered: Sequence[PauliOp]) -> DecompositionCheck:
    """Verify product equality and the prefix-commutation condition."""
    n = code.n
    prod = product(n, ordered)
    matches = prod.x == stabilizer.x and prod.z == stabilizer.z
    violation = None
    px = pz = 0
    for j, op in enumerate(ordered):
        if j > 0:
            prefix = PauliOp(n, px, pz)
            if commutes(op, prefix):
                violation = j
                break
        px ^= op.x
        pz ^= op.z
    return DecompositionCheck(matches, violation)


@dataclass
class Schedule:
    stabilizer: PauliOp
    factors: List[PauliOp]
    levels: List[List[int]]      # indices into factors, level by level

    @property
    def n_measurements(self) -> int:
        return len(self.factors)

    @property
    def n_levels(self) -> int:
        return len(self.levels)

    def ordered(self) -> List[PauliOp]:
        return [self.factors[i] for lvl in self.levels for i in lvl]


class ScheduleError(RuntimeError):
    pass


def _op_key(op: PauliOp) -> Tuple[int, int]:
    return op.x, op.z


class _ZCompleter:
    """Express an even Z-site set as a product of Z-type gauge elements."""

    def __init__(self, code: CodeInstance):
        self.code = code
        gens: List[Tuple[int, List[PauliOp]]] = []   # (site-mask, factor ops)
        n = code.n
        h = code.h
        # dashed ZZ links of every triangle
        for g in code.universe:
            if g.is_dashed:
                u, v = g.dashed_pair
                gens.append(((1 << u) | (1 << v), [g.op]))
        # solid links that happen to be ZZ (inter-square links)
        for g in code.universe:
            if not g.is_dashed and g.op.x == 0:
                gens.append((g.op.z, [g.op]))
        # whole squares: D-class cycles whose loop operator is pure Z
        for mask in code.info.class_cycles.get("D", []):
            op = loop_operator(code.ops, mask)
            if op.x == 0:
                sides = [code.ops.ops[e] for e in gf2.bits(mask)]
                gens.append((op.z, sides))
        self.gens = gens
        orders = [range(len(gens)), reversed(range(len(gens)))]
        self.mats = []
        for order in orders:
            idxs = list(order)
            m = BinMatrix(n)
            kept = []
            for i in idxs:
                if m.add_row(gens[i][0]):
                    kept.append(i)
            self.mats.append((m, kept))

    def solve(self, target: int) -> Optional[List[PauliOp]]:
        best: Optional[List[PauliOp]] = None
        for m, kept in self.mats:
            combo = m.solve(target)
            if combo is None:
                continue
            opsl: List[PauliOp] = []
            for pos in gf2.bits(combo):
                opsl.extend(self.gens[kept[pos]][1])
            if best is None or len(opsl) < len(best):
                best = opsl
        return best


def _factor_pool(code: CodeInstance, cycle: Cycle,
                 completer: _ZCompleter) -> List[PauliOp]:
    """Canonical factor multiset for the loop operator of `cycle`."""
    h = code.h
    solids: List[PauliOp] = []
    tris: List[int] = []
    for e in gf2.bits(cycle.edges):
        if h.edges[e].is_triangle:
            tris.append(e)
        else:
            solids.append(code.ops.ops[e])
    if not tris:
        return solids

    # anchor search: each triangle contributes the dashed link avoiding its
    # anchor site; single-site Z leftovers at the anchors are completed.
    n = code.n
    best: Optional[List[PauliOp]] = None
    options = [h.edges[t].sites for t in tris]
    space = iproduct(*[range(3)] * len(tris)) if len(tris) <= 8 else [(0,) * len(tris)]
    for pick in space:
        target = 0
        dashed: List[PauliOp] = []
        for t, anchor_pos in zip(tris, pick):
            sites = h.edges[t].sites
            anchor = sites[anchor_pos]
            pair = tuple(s for s in sites if s != anchor)
            dashed.append(PauliOp.from_terms(n, [(pair[0], "Z"), (pair[1], "Z")]))
            target ^= 1 << anchor
        completion = completer.solve(target)
        if completion is None:
            continue
        pool: Dict[Tuple[int, int], int] = {}
        for op in solids + dashed + completion:
            k = _op_key(op)
            pool[k] = pool.get(k, 0) ^ 1
        factors = [PauliOp(n, x, z) for (x, z), keep in pool.items() if keep]
        if best is None or len(factors) < len(best):
            best = factors
    if best is None:
        raise ScheduleError("no gauge factorization found for stabilizer")
    return best


def _greedy_levels(n: int, factors: List[PauliOp]) -> List[List[int]]:
    remaining = list(range(len(factors)))
    levels: List[List[int]] = []
    px = pz = 0
    while remaining:
        prefix = PauliOp(n, px, pz)
        level: List[int] = []
        for i in remaining:
            op = factors[i]
            if commutes(op, prefix):
                continue
            if any(commutes(op, factors[j]) for j in level):
                continue
            level.append(i)
        if not level:
            raise ScheduleError(
                f"stuck prefix with {len(remaining)} factors left")
        for i in level:
            px ^= factors[i].x
            pz ^= factors[i].z
        remaining = [i for i in remaining if i not in level]
        levels.append(level)
    return levels


class Scheduler:
    """Schedule synthesis with a per-code cache of the Z completer."""

    def __init__(self, code: CodeInstance):
        self.code = code
        self._completer: Optional[_ZCompleter] = None

    def completer(self) -> _ZCompleter:
        if self._completer is None:
            self._completer = _ZCompleter(self.code)
        return self._completer

    def synthesize(self, cycle: Cycle) -> Schedule:
        stab = loop_operator(self.code.ops, cycle.edges)
        factors = _factor_pool(self.code, cycle, self.completer())
        factors.sort(key=lambda op: (weight(op), op.x, op.z))
        levels = _greedy_levels(self.code.n, factors)
        sched = Schedule(stab, factors, levels)
        chk = check_decomposition(self.code, stab, sched.ordered())
        if not chk.ok:
            raise ScheduleError("synthesized schedule failed verification")
        return sched


def synthesize_schedule(code: CodeInstance, cycle: Cycle) -> Schedule:
    return Scheduler(code).synthesize(cycle)


def measurement_counts(code: CodeInstance) -> Dict[str, int]:
    """Two-qubit measurement count per stabilizer class (first representative)."""
    sched = Scheduler(code)
    out: Dict[str, int] = {}
    for role, masks in sorted(code.info.class_cycles.items()):
        if not masks:
            continue
        cyc = code.h.make_cycle(masks[0], role)
        out[role] = sched.synthesize(cyc).n_measurements
    return out
