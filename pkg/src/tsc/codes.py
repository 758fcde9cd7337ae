"""Build subsystem codes from 3-valent hypergraphs.

Edge operators satisfying the anticommutation rule (edges sharing exactly
one site anticommute) are assigned per site, triangles are pinned to ZZZ,
the gauge group is generated by solid links plus two dashed ZZ links per
triangle, and the stabilizer/logical split of the loop-operator group is
computed from the triangle-overlap form on the cycle space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from . import gf2
from .gf2 import BinMatrix
from .hypergraph import Cycle, Hypergraph
from .lattices import LatticeInfo, make
from .pauli import PauliOp, commutes, from_symplectic, product, to_symplectic, weight


class AssignmentError(ValueError):
    pass


@dataclass
class EdgeOperatorSet:
    """Pauli kind of every edge at each of its sites, plus the operators."""

    h: Hypergraph
    kinds: List[Tuple[str, ...]]
    ops: List[PauliOp] = field(default_factory=list)

    def __post_init__(self):
        if not self.ops:
            n = self.h.n_sites
            for e, k in zip(self.h.edges, self.kinds):
                self.ops.append(PauliOp.from_terms(n, zip(e.sites, k)))

    def kind_at(self, edge: int, site: int) -> str:
        e = self.h.edges[edge]
        return self.kinds[edge][e.sites.index(site)]


def assign_edge_operators(h: Hypergraph,
                          pins: Optional[Dict[int, Tuple[str, ...]]] = None
                          ) -> EdgeOperatorSet:
    """Choose, at each site, a permutation of X/Y/Z across incident edges.

    Triangles are forced to Z on every site; pinned edges are honored.
    Any per-site bijection satisfies the pairwise commutation rule, since
    two edges sharing a site then act there by different Paulis.
    """
    pins = pins or {}
    site_taken: List[Dict[str, int]] = [dict() for _ in range(h.n_sites)]
    kinds: List[List[Optional[str]]] = []
    for i, e in enumerate(h.edges):
        kinds.append([None] * len(e.sites))
        want = pins.get(i)
        if e.is_triangle:
            want = ("Z",) * 3 if want is None else want
            if tuple(want) != ("Z", "Z", "Z"):
                raise AssignmentError(f"triangle {i} must be pinned to ZZZ")
        if want is not None:
            if len(want) != len(e.sites):
                raise AssignmentError(f"pin arity mismatch on edge {i}")
            for k, s in zip(want, e.sites):
                prev = site_taken[s].get(k)
                if prev is not None and prev != i:
                    raise AssignmentError(
                        f"conflicting pins at site {s}: edges {prev} and {i} both {k}")
                site_taken[s][k] = i
                kinds[i][e.sites.index(s)] = k
    # fill remaining incidences deterministically
    for i, e in enumerate(h.edges):
        for pos, s in enumerate(e.sites):
            if kinds[i][pos] is not None:
                continue
            for k in "XYZ":
                if k not in site_taken[s]:
                    site_taken[s][k] = i
                    kinds[i][pos] = k
                    break
            else:
                raise AssignmentError(f"no Pauli left for edge {i} at site {s}")
    return EdgeOperatorSet(h, [tuple(k) for k in kinds])


@dataclass
class GaugeGen:
    """A two-qubit gauge measurement operator."""

    op: PauliOp
    edge: int                 # owning hypergraph edge
    dashed_pair: Optional[Tuple[int, int]] = None   # sites, for dashed links

    @property
    def is_dashed(self) -> bool:
        return self.dashed_pair is not None


def gauge_generators(h: Hypergraph, ops: EdgeOperatorSet) -> List[GaugeGen]:
    """Solid link operators plus two independent dashed ZZ links per triangle."""
    n = h.n_sites
    gens: List[GaugeGen] = []
    for i, e in enumerate(h.edges):
        if e.is_triangle:
            u, v, w = e.sites
            for pair in ((u, v), (v, w)):
                gens.append(GaugeGen(
                    PauliOp.from_terms(n, [(pair[0], "Z"), (pair[1], "Z")]),
                    i, pair))
        else:
            gens.append(GaugeGen(ops.ops[i], i))
    return gens


def measurement_universe(h: Hypergraph, ops: EdgeOperatorSet) -> List[GaugeGen]:
    """All two-qubit gauge elements usable as measurements: links + all
    three dashed links of every triangle."""
    n = h.n_sites
    gens: List[GaugeGen] = []
    for i, e in enumerate(h.edges):
        if e.is_triangle:
            u, v, w = e.sites
            for pair in ((u, v), (v, w), (u, w)):
                gens.append(GaugeGen(
                    PauliOp.from_terms(n, [(pair[0], "Z"), (pair[1], "Z")]),
                    i, pair))
        else:
            gens.append(GaugeGen(ops.ops[i], i))
    return gens


def loop_operator(ops: EdgeOperatorSet, mask: int) -> PauliOp:
    """Product of edge operators over a cycle's edge set."""
    n = ops.h.n_sites
    x = z = 0
    for i in gf2.bits(mask):
        op = ops.ops[i]
        x ^= op.x
        z ^= op.z
    return PauliOp(n, x, z)


def classify_cycles(h: Hypergraph, basis: Sequence[Cycle]
                    ) -> Tuple[List[Cycle], List[Tuple[Cycle, Cycle]], int]:
    """Split a cycle basis into stabilizers and symplectic logical pairs.

    The triangle-overlap form is evaluated on the basis; its radical gives
    the stabilizer cycles and a symplectic Gram-Schmidt on the quotient
    gives the logical pairs. Stabilizer representatives are re-expressed
    so that a maximal subset is homologically trivial; logicals prefer
    homologically non-trivial representatives.
    """
    vecs = [c.edges for c in basis]
    m = len(vecs)
    gram = []
    for a in range(m):
        row = 0
        ca = Cycle(vecs[a])
        for b in range(m):
            if h.triangle_overlap(ca, Cycle(vecs[b])):
                row |= 1 << b
        gram.append(row)
    rad_combos = gf2.nullspace(gram, m)
    stab_masks = []
    for combo in rad_combos:
        v = 0
        for i in gf2.bits(combo):
            v ^= vecs[i]
        stab_masks.append(v)
    # symplectic quotient via Gram-Schmidt on the remaining basis vectors
    used_mat = BinMatrix(m)
    for combo in rad_combos:
        used_mat.add_row(combo)

    def overlap(ma, mb):
        return h.triangle_overlap(Cycle(ma), Cycle(mb))

    remaining = [[1 << i, vecs[i]] for i in range(m)
                 if not used_mat.contains(1 << i)]
    pair_masks: List[Tuple[int, int]] = []
    while True:
        found = None
        for ai in range(len(remaining)):
            for bi in range(ai + 1, len(remaining)):
                if overlap(remaining[ai][1], remaining[bi][1]):
                    found = (ai, bi)
                    break
            if found:
                break
        if not found:
            break
        ai, bi = found
        a = remaining.pop(bi)
        b = remaining.pop(ai)
        for c in remaining:
            if overlap(c[1], a[1]):
                c[0] ^= b[0]
                c[1] ^= b[1]
            if overlap(c[1], b[1]):
                c[0] ^= a[0]
                c[1] ^= a[1]
        pair_masks.append((b[1], a[1]))
    k = len(pair_masks)
    if 2 * k != m - len(stab_masks):
        raise RuntimeError("triangle-overlap form is not symplectic on the quotient")

    # winding post-processing on the stabilizer basis: echelonize the
    # winding map so at most two representatives carry nonzero winding
    stab_masks = _winding_reduce(h, stab_masks)
    stabs = [h.make_cycle(v) for v in stab_masks]
    pairs_out = [(h.make_cycle(x), h.make_cycle(z)) for x, z in pair_masks]
    return stabs, pairs_out, k


def _winding_reduce(h: Hypergraph, masks: List[int]) -> List[int]:
    out = list(masks)
    leader: Dict[int, int] = {}   # axis bit -> index of row owning it
    for idx in range(len(out)):
        while True:
            wx, wy = h.winding(out[idx])
            w = wx | (wy << 1)
            if w == 0:
                break
            low = w & -w
            if low not in leader:
                leader[low] = idx
                break
            out[idx] ^= out[leader[low]]
    return out


def find_logicals_windowed(h: Hypergraph, nx: int, ny: int,
                           cell_of_site) -> List[Tuple[Cycle, Cycle]]:
    """Find symplectic logical pairs from cycles confined to narrow windows.

    Solves for cycles supported on a couple of cell columns (vertical
    winding) and rows (horizontal winding); cheap even on large lattices.
    """
    def window_cycles(sel) -> List[int]:
        edge_ids = [i for i, e in enumerate(h.edges)
                    if all(sel(cell_of_site(s)) for s in e.sites)]
        index = {e: t for t, e in enumerate(edge_ids)}
        site_rows: Dict[int, int] = {}
        for e in edge_ids:
            for s in h.edges[e].sites:
                site_rows[s] = site_rows.get(s, 0) | (1 << index[e])
        kernel = gf2.nullspace(list(site_rows.values()), len(edge_ids))
        out = []
        for v in kernel:
            mask = 0
            for t in gf2.bits(v):
                mask |= 1 << edge_ids[t]
            out.append(mask)
        return out

    candidates: List[int] = []
    for width in (1, 2, 3):
        candidates = []
        for i0 in (0, nx // 2):
            cols = {(i0 + d) % nx for d in range(width)}
            for mask in window_cycles(lambda c, cols=cols: c[0] in cols):
                if h.winding(mask)[1]:
                    candidates.append(mask)
        for j0 in (0, ny // 2):
            rows = {(j0 + d) % ny for d in range(width)}
            for mask in window_cycles(lambda c, rows=rows: c[1] in rows):
                if h.winding(mask)[0]:
                    candidates.append(mask)
        if candidates:
            pairs = _symplectic_pairs(h, candidates)
            if pairs:
                return pairs
    raise RuntimeError("no windowed logical representatives found")


def _symplectic_pairs(h: Hypergraph, masks: List[int]) -> List[Tuple[Cycle, Cycle]]:
    work = list(masks)
    pairs = []
    while True:
        found = None
        for a in range(len(work)):
            for b in range(a + 1, len(work)):
                if h.triangle_overlap(Cycle(work[a]), Cycle(work[b])):
                    found = (a, b)
                    break
            if found:
                break
        if not found:
            break
        a, b = found
        ob = work.pop(b)
        oa = work.pop(a)
        for i in range(len(work)):
            if h.triangle_overlap(Cycle(work[i]), Cycle(oa)):
                work[i] ^= ob
            if h.triangle_overlap(Cycle(work[i]), Cycle(ob)):
                work[i] ^= oa
        # X-type = horizontal winding when available
        if h.winding(oa)[0] and not h.winding(ob)[0]:
            pairs.append((oa, ob))
        else:
            pairs.append((ob, oa))
    return [(h.make_cycle(x, "X"), h.make_cycle(z, "Z")) for x, z in pairs]


@dataclass
class CodeInstance:
    """A verified topological subsystem code ready for decoding."""

    h: Hypergraph
    info: LatticeInfo
    ops: EdgeOperatorSet
    gauge: List[GaugeGen]
    universe: List[GaugeGen]
    stabilizers: List[Cycle]            # basis cycles with role tags
    stab_ops: List[PauliOp]
    logical_pairs: List[Tuple[Cycle, Cycle]]
    logical_ops: List[PauliOp]          # X1, Z1, X2, Z2, ...
    k: int
    _sx: Optional[sparse.csr_matrix] = None
    _sz: Optional[sparse.csr_matrix] = None
    _gauge_span: Optional[BinMatrix] = None

    @property
    def n(self) -> int:
        return self.h.n_sites

    def stab_matrices(self) -> Tuple[sparse.csr_matrix, sparse.csr_matrix]:
        if self._sx is None:
            n = self.n
            rows_x, cols_x, rows_z, cols_z = [], [], [], []
            for r, op in enumerate(self.stab_ops):
                for q in gf2.bits(op.x):
                    rows_x.append(r)
                    cols_x.append(q)
                for q in gf2.bits(op.z):
                    rows_z.append(r)
                    cols_z.append(q)
            m = len(self.stab_ops)
            self._sx = sparse.csr_matrix(
                (np.ones(len(rows_x), dtype=np.uint8), (rows_x, cols_x)),
                shape=(m, n))
            self._sz = sparse.csr_matrix(
                (np.ones(len(rows_z), dtype=np.uint8), (rows_z, cols_z)),
                shape=(m, n))
        return self._sx, self._sz

    def gauge_span(self) -> BinMatrix:
        if self._gauge_span is None:
            m = BinMatrix(2 * self.n)
            for g in self.gauge:
                m.add_row(to_symplectic(g.op))
            self._gauge_span = m
        return self._gauge_span

    def syndrome(self, err: PauliOp) -> np.ndarray:
        """Anticommutation bit of the error with each stabilizer."""
        if err.n != self.n:
            raise ValueError("size mismatch")
        ex = _mask_to_vec(err.x, self.n)
        ez = _mask_to_vec(err.z, self.n)
        return self.syndrome_vec(ex, ez)

    def syndrome_vec(self, ex: np.ndarray, ez: np.ndarray) -> np.ndarray:
        sx, sz = self.stab_matrices()
        return ((sx @ ez) + (sz @ ex)) % 2


def _mask_to_vec(mask: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(np.uint8)


def _vec_to_mask(vec: np.ndarray) -> int:
    packed = np.packbits(vec.astype(np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def syndrome(code: CodeInstance, err: PauliOp) -> np.ndarray:
    return code.syndrome(err)


def build_code(family: str, use_nullspace: Optional[bool] = None, **kw) -> CodeInstance:
    """Generate a lattice and derive its code instance.

    For structured lattices the stabilizer basis comes from the per-cell
    class cycles; `use_nullspace=True` forces the generic kernel + radical
    computation instead (cross-checked in tests on small sizes).
    """
    h, info = make(family, **kw)
    problems = h.validate()
    if problems:
        raise ValueError("invalid lattice: " + "; ".join(problems[:5]))
    ops = assign_edge_operators(h, info.pins)
    gauge = gauge_generators(h, ops)
    universe = measurement_universe(h, ops)

    if use_nullspace is None:
        use_nullspace = family == "honeycomb"
    if use_nullspace:
        basis = h.cycle_space_basis()
        stabs, pairs, k = classify_cycles(h, basis)
        roles = _role_tags(h, info, stabs)
        stabs = [Cycle(c.edges, c.winding, roles[i]) for i, c in enumerate(stabs)]
    else:
        stabs = []
        for role in ("A", "B", "C", "D"):
            for mask in info.class_cycles.get(role, []):
                stabs.append(h.make_cycle(mask, role))
        nx, ny = info.shape
        if family == "five_squares":
            def cell_of_site(s):
                c = s // 20
                return c % nx, c // nx
        else:
            per = 12 + 4
            def cell_of_site(s):
                c = s // per
                return c % nx, c // nx
        pairs = find_logicals_windowed(h, nx, ny, cell_of_site)
        k = len(pairs)

    stab_ops = [loop_operator(ops, c.edges) for c in stabs]
    logical_ops = []
    for xc, zc in pairs:
        logical_ops.append(loop_operator(ops, xc.edges))
        logical_ops.append(loop_operator(ops, zc.edges))
    return CodeInstance(h, info, ops, gauge, universe, stabs, stab_ops,
                        pairs, logical_ops, k)


def _role_tags(h: Hypergraph, info: LatticeInfo, stabs: Sequence[Cycle]) -> List[str]:
    roles = []
    known: Dict[int, str] = {}
    for role, masks in info.class_cycles.items():
        for m in masks:
            known[m] = role
    for c in stabs:
        roles.append(known.get(c.edges, "other"))
    return roles


@dataclass
class VerifyResult:
    checks: List[Tuple[str, bool, str]]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def report(self) -> str:
        lines = []
        for name, passed, detail in self.checks:
            status = "ok  " if passed else "FAIL"
            lines.append(f"[{status}] {name}" + (f": {detail}" if detail else ""))
        return "\n".join(lines)


def verify_code(code: CodeInstance, check_counts: bool = True) -> VerifyResult:
    """Structural checks: commutation rules, stabilizer centrality,
    dimension counting, logical pairing, and the all-edge product identity."""
    h, ops = code.h, code.ops
    checks: List[Tuple[str, bool, str]] = []

    # (d3com) commutation vs eta on all distinct edge pairs, via site-local
    # reasoning: operators of edges sharing one site must differ there.
    bad = None
    site_edges: Dict[int, List[int]] = {}
    for i, e in enumerate(h.edges):
        for s in e.sites:
            site_edges.setdefault(s, []).append(i)
    for s, eids in site_edges.items():
        kinds = [ops.kind_at(e, s) for e in eids]
        if len(set(kinds)) != len(kinds):
            bad = f"site {s} repeats a Pauli kind across incident edges"
            break
    checks.append(("edge operators realize the commutation rule", bad is None, bad or ""))

    # every stabilizer commutes with every gauge generator
    witness = ""
    ok = True
    for si, sop in enumerate(code.stab_ops):
        for g in code.gauge:
            if sop.support & g.op.support == 0:
                continue
            if commutes(sop, g.op):
                ok = False
                witness = f"stabilizer {si} vs gauge edge {g.edge}"
                break
        if not ok:
            break
    checks.append(("stabilizers commute with the gauge group", ok, witness))

    # logical pairing: X_a anti-commutes with Z_b iff a == b; commutes with
    # all stabilizers
    ok = True
    witness = ""
    lo = code.logical_ops
    for a in range(code.k):
        for b in range(code.k):
            want = 1 if a == b else 0
            if commutes(lo[2 * a], lo[2 * b + 1]) != want:
                ok = False
                witness = f"pair ({a},{b})"
        if commutes(lo[2 * a], lo[2 * a]) != 0:
            ok = False
    for l in lo:
        for sop in code.stab_ops:
            if commutes(l, sop):
                ok = False
                witness = "logical anticommutes with stabilizer"
                break
    checks.append(("logical pairs are symplectic and central", ok, witness))

    # product of all edge operators is the identity
    total = loop_operator(ops, (1 << h.n_edges) - 1)
    checks.append(("product of all edge operators is the identity",
                   weight(total) == 0, "" if weight(total) == 0 else total.to_string()[:40]))

    if check_counts:
        # dimension count: rank of stabilizer images + 2k equals cycle-space dim
        dim = h.n_edges - gf2.rank(h.site_edge_masks(), h.n_edges)
        m = BinMatrix(h.n_edges)
        for c in code.stabilizers:
            m.add_row(c.edges)
        srank = m.rank
        for xc, zc in code.logical_pairs:
            m.add_row(xc.edges)
            m.add_row(zc.edges)
        ok = m.rank == dim and m.rank == srank + 2 * code.k
        checks.append(("cycle-space dimension matches stabilizers + logicals",
                       ok, f"dim={dim} stab_rank={srank} k={code.k}"))
    return VerifyResult(checks)
