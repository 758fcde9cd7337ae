"""Generators for the honeycomb, square-octagon and five-squares lattices.

All three live on a torus of unit cells. Site ids are cell-major; every
cross-cell edge records its wraparound displacement per incidence, which
is what the homology bookkeeping in `hypergraph` consumes.

The five-squares cell is reconstructed from its algebraic constraints:
five disjoint 4-cycles of solid links ("squares", drawn as diamonds), a
center square whose corners all sit on triangles, four edge squares with
two triangle corners and two corners carrying inter-cell links, and four
triangles wedged between the center and the edge squares. Octagonal holes
sit at the cell corners; around each hole the four nearest edge squares
are chained by inter-cell links into an eight-link ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .hypergraph import Hypergraph

# diamond corner order
N, E, S, W = 0, 1, 2, 3
CORNERS = (N, E, S, W)
# five-squares diamonds per cell
M, QNE, QSE, QNW, QSW = 0, 1, 2, 3, 4
DIAMONDS = (M, QNE, QSE, QNW, QSW)

# sides of a diamond as unordered corner pairs, with the CCW orientation
# (tail, head) used for the X/Y link-operator pins: K = X_tail Y_head
SIDES = ((E, N), (S, E), (W, S), (N, W))


@dataclass
class LatticeInfo:
    """Structured companion data for a generated lattice."""

    family: str
    shape: Tuple[int, int]                  # cells: (nx, ny)
    cells: int
    pins: Dict[int, Tuple[str, ...]] = field(default_factory=dict)
    # per-cell class cycles as edge masks, keyed by role tag
    class_cycles: Dict[str, List[int]] = field(default_factory=dict)
    # five-squares extras
    layout: Dict[Tuple[int, int], int] = field(default_factory=dict)
    squares: List[Tuple[int, ...]] = field(default_factory=list)
    square_kind: List[str] = field(default_factory=list)
    eff_qubits: List[Tuple[int, int, int]] = field(default_factory=list)
    # (canonical site, partner site, interlink edge id) per effective qubit
    x_corner: Dict[int, int] = field(default_factory=dict)
    # square index -> canonical correction corner (site id)
    z4_site: List[int] = field(default_factory=list)
    # per cell, the location-4 site carrying the B-sensitive Z


def _wrap(c: int, L: int) -> Tuple[int, int]:
    """Map a possibly out-of-range cell index to (canonical, displacement)."""
    m = c % L
    return m, (c - m) // L


def honeycomb(lx: int, ly: int) -> Tuple[Hypergraph, LatticeInfo]:
    """Bipartite 3-valent honeycomb (brick-wall coordinates), 2*lx*ly sites."""
    if lx < 2 or ly < 2:
        raise ValueError("honeycomb needs lx, ly >= 2")
    h = Hypergraph((lx, ly))
    for j in range(ly):
        for i in range(lx):
            h.add_site(Fraction(4 * i + 1, 4), Fraction(4 * j + 1, 4))   # A
            h.add_site(Fraction(4 * i + 1, 4), Fraction(4 * j + 3, 4))   # B

    def site(i, j, s):
        ii, di = _wrap(i, lx)
        jj, dj = _wrap(j, ly)
        return 2 * (jj * lx + ii) + s, (di, dj)

    pins: Dict[int, Tuple[str, ...]] = {}
    z_edges = {}
    x_edges = {}
    y_edges = {}
    for j in range(ly):
        for i in range(lx):
            a, _ = site(i, j, 0)
            b, _ = site(i, j, 1)
            e = h.add_link(a, b)
            pins[e] = ("Z", "Z")
            z_edges[i, j] = e
            a2, d2 = site(i + 1, j, 0)
            e = h.add_link(b, a2, (0, 0), d2)
            pins[e] = ("X", "X")
            x_edges[i, j] = e
            a3, d3 = site(i, j + 1, 0)
            e = h.add_link(b, a3, (0, 0), d3)
            pins[e] = ("Y", "Y")
            y_edges[i, j] = e

    hexes = []
    for j in range(ly):
        for i in range(lx):
            ids = [z_edges[i, j], x_edges[i, j],
                   y_edges[(i + 1) % lx, (j - 1) % ly],
                   z_edges[(i + 1) % lx, (j - 1) % ly],
                   x_edges[i, (j - 1) % ly],
                   y_edges[i, (j - 1) % ly]]
            mask = 0
            for e in ids:
                mask |= 1 << e
            hexes.append(mask)
    info = LatticeInfo("honeycomb", (lx, ly), lx * ly, pins=pins,
                       class_cycles={"hex": hexes})
    return h, info


def square_octagon(lx: int, ly: int) -> Tuple[Hypergraph, LatticeInfo]:
    """Flag lattice of the 4-8-8 tiling: 12 sites per cell.

    Base vertices sit on a tilted square per cell; every base vertex is
    inflated into a triangle of flag sites (one flag per face at the
    vertex), base face boundaries become link cycles.
    """
    if lx < 2 or ly < 2:
        raise ValueError("square_octagon needs lx, ly >= 2")
    h = Hypergraph((lx, ly))

    # flag local index: vertex (n,e,s,w) * 3 + slot; slot 0 is the square
    # flag, slots 1,2 the two octagon flags in the fixed order below.
    # octagon O(i,j) sits at the cell corner kappa_(i,j).
    vert_oct = {
        N: ((0, 1), (1, 1)),
        E: ((1, 0), (1, 1)),
        S: ((0, 0), (1, 0)),
        W: ((0, 0), (0, 1)),
    }
    vpos = {N: (Fraction(1, 2), Fraction(4, 5)),
            E: (Fraction(4, 5), Fraction(1, 2)),
            S: (Fraction(1, 2), Fraction(1, 5)),
            W: (Fraction(1, 5), Fraction(1, 2))}
    for j in range(ly):
        for i in range(lx):
            for v in CORNERS:
                vx, vy = vpos[v]
                # square flag pulled to the cell center, octagon flags
                # pulled towards the octagon corner
                pulls = [(Fraction(1, 2), Fraction(1, 2))]
                for (oi, oj) in vert_oct[v]:
                    pulls.append((Fraction(oi), Fraction(oj)))
                for slot, (px, py) in enumerate(pulls):
                    h.add_site(i + vx + (px - vx) / 4, j + vy + (py - vy) / 4)

    def flag(i, j, v, face) -> Tuple[int, Tuple[int, int]]:
        """face is 'S' or the octagon cell (oi, oj) in absolute cell coords."""
        ii, di = _wrap(i, lx)
        jj, dj = _wrap(j, ly)
        if face == "S":
            slot = 0
        else:
            oi, oj = face
            rel = (oi - i, oj - j)
            options = vert_oct[v]
            if rel not in options:
                raise ValueError("octagon not incident to vertex")
            slot = 1 + options.index(rel)
        return 12 * (jj * lx + ii) + 3 * v + slot, (di, dj)

    pins: Dict[int, Tuple[str, ...]] = {}
    edge_of = {}

    def add_link(key, a, b):
        sa, da = a
        sb, db = b
        e = h.add_link(sa, sb, da, db)
        edge_of[key] = e
        return e

    oct_walk = [(S, 0, 0), (W, 0, 0), (E, -1, 0), (S, -1, 0),
                (N, -1, -1), (E, -1, -1), (W, 0, -1), (N, 0, -1)]
    for j in range(ly):
        for i in range(lx):
            # square boundary links
            ring = [N, E, S, W]
            for a in range(4):
                v, w = ring[a], ring[(a + 1) % 4]
                add_link(("sq", i, j, a), flag(i, j, v, "S"), flag(i, j, w, "S"))
            # octagon boundary links for O(i,j)
            for a in range(8):
                v1, x1, y1 = oct_walk[a]
                v2, x2, y2 = oct_walk[(a + 1) % 8]
                add_link(("oc", i, j, a),
                         flag(i + x1, j + y1, v1, (i, j)),
                         flag(i + x2, j + y2, v2, (i, j)))
            # vertex triangles
            for v in CORNERS:
                (o1, o2) = vert_oct[v]
                s0, d0 = flag(i, j, v, "S")
                s1, d1 = flag(i, j, v, (i + o1[0], j + o1[1]))
                s2, d2 = flag(i, j, v, (i + o2[0], j + o2[1]))
                h.add_triangle(s0, s1, s2, d0, d1, d2)

    # per-site X/Y pins for the two links at each flag (triangles force Z);
    # first incident link by edge id gets X, the other Y.
    # assignment code fills unpinned sites the same way, so no pins needed.

    def mask(keys):
        m = 0
        for k in keys:
            m |= 1 << edge_of[k]
        return m

    a_cycles, b_cycles, c_cycles, d_cycles = [], [], [], []
    for j in range(ly):
        for i in range(lx):
            d_cycles.append(mask([("sq", i, j, a) for a in range(4)]))
            a_cycles.append(mask([("oc", i, j, a) for a in range(8)]))
    # B: triangles of a square's corners + cross links over each side +
    # one alternating pair of its own sides.
    # triangle edge ids are appended per cell in corner order after 12 links
    tri_base = {}
    per_cell = 12 + 4
    for j in range(ly):
        for i in range(lx):
            base = (j * lx + i) * per_cell
            for v in CORNERS:
                tri_base[(i, j, v)] = base + 12 + v

    def tmask(cells_verts):
        m = 0
        for (i, j, v) in cells_verts:
            ii, _ = _wrap(i, lx)
            jj, _ = _wrap(j, ly)
            m |= 1 << tri_base[(ii, jj, v)]
        return m

    for j in range(ly):
        for i in range(lx):
            b = tmask([(i, j, v) for v in CORNERS])
            # cross links: octagon links across the four square sides
            b |= mask([("oc", (i + 1) % lx, (j + 1) % ly, 4),   # over (n,e)
                       ("oc", (i + 1) % lx, j, 2),              # over (e,s)
                       ("oc", i, j, 0),                         # over (s,w)
                       ("oc", i, (j + 1) % ly, 6)])             # over (w,n)
            b |= mask([("sq", i, j, 0), ("sq", i, j, 2)])
            b_cycles.append(b)

            c = tmask([(i + x, j + y, v) for (v, x, y) in oct_walk])
            # cross links across the octagon walk edges
            c |= mask([("sq", i, j, 2),
                       ("oc", i, (j + 1) % ly, 5),
                       ("sq", (i - 1) % lx, j, 1),
                       ("oc", (i - 1) % lx, j, 7),
                       ("sq", (i - 1) % lx, (j - 1) % ly, 0),
                       ("oc", i, (j - 1) % ly, 1),
                       ("sq", i, (j - 1) % ly, 3),
                       ("oc", (i + 1) % lx, j, 3)])
            # alternating own octagon links (the even walk positions)
            c |= mask([("oc", i, j, a) for a in (1, 3, 5, 7)])
            c_cycles.append(c)

    info = LatticeInfo("square_octagon", (lx, ly), lx * ly, pins=pins,
                       class_cycles={"A": a_cycles, "B": b_cycles,
                                     "C": c_cycles, "D": d_cycles})
    return h, info


# five-squares local numbering: (diamond, corner) -> paper location 1..20
FS_LOCATION = {
    (QNE, N): 1, (QNE, E): 2, (QNE, S): 3, (QNE, W): 4,
    (QSE, S): 5, (QSE, N): 6, (QSE, W): 7, (QSE, E): 8,
    (M, N): 9, (M, E): 10, (M, S): 11, (M, W): 12,
    (QNW, E): 13, (QNW, N): 14, (QNW, W): 15, (QNW, S): 16,
    (QSW, N): 17, (QSW, E): 18, (QSW, W): 19, (QSW, S): 20,
}

_FS_CENTER = {
    M: (Fraction(3), Fraction(3)),
    QNE: (Fraction(19, 4), Fraction(19, 4)),
    QSE: (Fraction(19, 4), Fraction(5, 4)),
    QNW: (Fraction(5, 4), Fraction(19, 4)),
    QSW: (Fraction(5, 4), Fraction(5, 4)),
}
_FS_RADIUS = {M: Fraction(1), QNE: Fraction(3, 4), QSE: Fraction(3, 4),
              QNW: Fraction(3, 4), QSW: Fraction(3, 4)}
_OFFS = {N: (0, 1), E: (1, 0), S: (0, -1), W: (-1, 0)}


def five_squares(n: int) -> Tuple[Hypergraph, LatticeInfo]:
    """Five-squares hypergraph on n x 2n cells, 20 qubits per cell."""
    if n < 2:
        raise ValueError("five_squares needs n >= 2")
    nx, ny = n, 2 * n
    h = Hypergraph((6 * nx, 6 * ny))
    for j in range(ny):
        for i in range(nx):
            for d in DIAMONDS:
                cx, cy = _FS_CENTER[d]
                r = _FS_RADIUS[d]
                for c in CORNERS:
                    ox, oy = _OFFS[c]
                    h.add_site(6 * i + cx + r * ox, 6 * j + cy + r * oy)

    def site(i, j, d, c) -> Tuple[int, Tuple[int, int]]:
        ii, di = _wrap(i, nx)
        jj, dj = _wrap(j, ny)
        return 20 * (jj * nx + ii) + 4 * d + c, (di, dj)

    pins: Dict[int, Tuple[str, ...]] = {}
    side_edge: Dict[Tuple[int, int, int, int], int] = {}   # (i,j,d,side_idx)
    tri_edge: Dict[Tuple[int, int, int], int] = {}          # (i,j,corner)
    int_edge: Dict[Tuple[int, int, str], int] = {}          # (i,j,name)

    for j in range(ny):
        for i in range(nx):
            for d in DIAMONDS:
                for si, (tail, head) in enumerate(SIDES):
                    a, _ = site(i, j, d, tail)
                    b, _ = site(i, j, d, head)
                    e = h.add_link(a, b)
                    pins[e] = ("X", "Y")
                    side_edge[(i, j, d, si)] = e
            # triangles between the center and pairs of edge diamonds
            tris = {
                N: ((M, N), (QNW, E), (QNE, W)),
                E: ((M, E), (QNE, S), (QSE, N)),
                S: ((M, S), (QSE, W), (QSW, E)),
                W: ((M, W), (QSW, N), (QNW, S)),
            }
            for c, triple in tris.items():
                ids = [site(i, j, d, cc)[0] for d, cc in triple]
                e = h.add_triangle(*ids)
                pins[e] = ("Z", "Z", "Z")
                tri_edge[(i, j, c)] = e
            # inter-cell links (ZZ); each owns the ports listed here
            inter = [
                ("v1", (QSW, S, 0, 0), (QNW, N, 0, -1)),
                ("h1", (QSE, E, 0, 0), (QSW, W, 1, 0)),
                ("v2", (QNE, N, 0, 0), (QSE, S, 0, 1)),
                ("h2", (QNE, E, 0, 0), (QNW, W, 1, 0)),
            ]
            for name, (d1, c1, x1, y1), (d2, c2, x2, y2) in inter:
                s1, dd1 = site(i + x1, j + y1, d1, c1)
                s2, dd2 = site(i + x2, j + y2, d2, c2)
                e = h.add_link(s1, s2, dd1, dd2)
                pins[e] = ("Z", "Z")
                int_edge[(i, j, name)] = e

    def cw(i, j):
        return (i % nx, j % ny)

    def smask(items):
        m = 0
        for (i, j, d, si) in items:
            ii, jj = cw(i, j)
            m |= 1 << side_edge[(ii, jj, d, si)]
        return m

    def tmask(items):
        m = 0
        for (i, j, c) in items:
            ii, jj = cw(i, j)
            m |= 1 << tri_edge[(ii, jj, c)]
        return m

    def imask(items):
        m = 0
        for (i, j, name) in items:
            ii, jj = cw(i, j)
            m |= 1 << int_edge[(ii, jj, name)]
        return m

    # side indices: 0=(E,N) 1=(S,E) 2=(W,S) 3=(N,W)
    NE_, SE_, SW_, NW_ = 0, 1, 2, 3
    a_cycles, b_cycles, c_cycles, d_cycles = [], [], [], []
    squares: List[Tuple[int, ...]] = []
    square_kind: List[str] = []
    x_corner: Dict[int, int] = {}
    z4_site: List[int] = []
    layout: Dict[Tuple[int, int], int] = {}
    eff: List[Tuple[int, int, int]] = []

    for j in range(ny):
        for i in range(nx):
            cell = j * nx + i
            for d in DIAMONDS:
                corners = tuple(site(i, j, d, c)[0] for c in CORNERS)
                squares.append(corners)
                square_kind.append("M" if d == M else "Q")
                d_cycles.append(smask([(i, j, d, si) for si in range(4)]))
            for (dc, c), loc in FS_LOCATION.items():
                layout[(cell, loc)] = site(i, j, dc, c)[0]
            # canonical X-correction corners (the reduction targets)
            for d in DIAMONDS:
                sq_index = cell * 5 + d
                canon = {M: N, QNE: N, QSE: S, QNW: N, QSW: W}[d]
                x_corner[sq_index] = site(i, j, d, canon)[0]
            z4_site.append(site(i, j, QNE, W)[0])

            b = tmask([(i, j, c) for c in CORNERS])
            b |= smask([(i, j, QNE, SW_), (i, j, QSE, NW_),
                        (i, j, QNW, SE_), (i, j, QSW, NE_),
                        (i, j, M, NE_), (i, j, M, SW_)])
            b_cycles.append(b)

            # A ring around the cell corner kappa_(i,j)
            a = smask([(i, j, QSW, SW_), (i, j - 1, QNW, NW_),
                       (i - 1, j - 1, QNE, NE_), (i - 1, j, QSE, SE_)])
            a |= imask([(i, j, "v1"), (i - 1, j - 1, "h2"),
                        (i - 1, j - 1, "v2"), (i - 1, j, "h1")])
            a_cycles.append(a)

            # C necklace around the same corner, one layer out
            c = imask([(i - 1, j, "h2"), (i, j - 1, "v2"),
                       (i - 1, j - 1, "h1"), (i - 1, j, "v1")])
            c |= smask([(i, j, QNW, SW_), (i, j, M, SW_), (i, j, QSE, SW_)])
            c |= tmask([(i, j, W), (i, j, S)])
            c |= smask([(i, j - 1, QNE, NW_), (i, j - 1, M, NW_),
                        (i, j - 1, QSW, NW_)])
            c |= tmask([(i, j - 1, N), (i, j - 1, W)])
            c |= smask([(i - 1, j - 1, QSE, NE_), (i - 1, j - 1, M, NE_),
                        (i - 1, j - 1, QNW, NE_)])
            c |= tmask([(i - 1, j - 1, E), (i - 1, j - 1, N)])
            c |= smask([(i - 1, j, QSW, SE_), (i - 1, j, M, SE_),
                        (i - 1, j, QNE, SE_)])
            c |= tmask([(i - 1, j, S), (i - 1, j, E)])
            # inner sides of the four ring squares
            c |= smask([(i, j, QSW, NE_), (i, j - 1, QNW, SE_),
                        (i - 1, j - 1, QNE, SW_), (i - 1, j, QSE, NW_)])
            c_cycles.append(c)

            # effective qubits owned by this cell: canonical, partner, link
            for name, canon_ref, partner_ref in [
                ("v1", (i, j, QSW, S), (i, j - 1, QNW, N)),
                ("h1", (i + 1, j, QSW, W), (i, j, QSE, E)),
                ("v2", (i, j, QNE, N), (i, j + 1, QSE, S)),
                ("h2", (i, j, QNE, E), (i + 1, j, QNW, W)),
            ]:
                ci, cj, cd, cc = canon_ref
                pi, pj, pd, pc = partner_ref
                eff.append((site(ci, cj, cd, cc)[0],
                            site(pi, pj, pd, pc)[0],
                            int_edge[(i, j, name)]))

    info = LatticeInfo("five_squares", (nx, ny), nx * ny, pins=pins,
                       class_cycles={"A": a_cycles, "B": b_cycles,
                                     "C": c_cycles, "D": d_cycles},
                       layout=layout, squares=squares, square_kind=square_kind,
                       eff_qubits=eff, x_corner=x_corner, z4_site=z4_site)
    return h, info


def make(family: str, **kw) -> Tuple[Hypergraph, LatticeInfo]:
    if family == "honeycomb":
        return honeycomb(kw.get("lx", 2), kw.get("ly", 2))
    if family == "square_octagon":
        return square_octagon(kw.get("lx", 2), kw.get("ly", 2))
    if family == "five_squares":
        return five_squares(kw["n"])
    raise ValueError(f"unknown family {family!r}")
