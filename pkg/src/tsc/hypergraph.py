"""3-valent hypergraphs on the torus and their binary cycle space.

Sites carry rational coordinates inside a fundamental domain of size
(Lx, Ly). Edges are links (2 sites) or triangles (3 sites). Each incidence
stores a displacement in {-1,0,1}^2: the edge attaches to the copy of the
site shifted by that many periods, which is all the homology bookkeeping
needed on the torus.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import gf2

Coord = Tuple[Fraction, Fraction]
Disp = Tuple[int, int]

LINK = "link"
TRI = "tri"


@dataclass(frozen=True)
class Edge:
    kind: str                      # LINK or TRI
    sites: Tuple[int, ...]         # 2 or 3 site ids
    disps: Tuple[Disp, ...]        # one displacement per incidence

    def __post_init__(self):
        want = 2 if self.kind == LINK else 3
        if self.kind not in (LINK, TRI):
            raise ValueError(f"unknown edge kind {self.kind!r}")
        if len(self.sites) != want or len(self.disps) != want:
            raise ValueError("site/displacement arity mismatch")

    @property
    def is_triangle(self) -> bool:
        return self.kind == TRI


@dataclass(frozen=True)
class Cycle:
    """Edge subset (as a bit mask over edge ids) with even incidence everywhere."""

    edges: int
    winding: Tuple[int, int] = (0, 0)
    role: str = "other"            # A/B/C/D/Z1/Z2/X1/X2/other

    def edge_ids(self) -> List[int]:
        return list(gf2.bits(self.edges))


@dataclass
class Hypergraph:
    periods: Tuple[int, int]
    coords: List[Coord] = field(default_factory=list)
    edges: List[Edge] = field(default_factory=list)

    # -- construction -------------------------------------------------

    def add_site(self, x, y) -> int:
        self.coords.append((Fraction(x), Fraction(y)))
        return len(self.coords) - 1

    def add_link(self, u: int, v: int, du: Disp = (0, 0), dv: Disp = (0, 0)) -> int:
        self.edges.append(Edge(LINK, (u, v), (du, dv)))
        return len(self.edges) - 1

    def add_triangle(self, u: int, v: int, w: int,
                     du: Disp = (0, 0), dv: Disp = (0, 0), dw: Disp = (0, 0)) -> int:
        self.edges.append(Edge(TRI, (u, v, w), (du, dv, dw)))
        return len(self.edges) - 1

    # -- basic queries -------------------------------------------------

    @property
    def n_sites(self) -> int:
        return len(self.coords)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def links(self) -> List[int]:
        return [i for i, e in enumerate(self.edges) if e.kind == LINK]

    def triangles(self) -> List[int]:
        return [i for i, e in enumerate(self.edges) if e.kind == TRI]

    def incident_edges(self, site: int) -> List[int]:
        return [i for i, e in enumerate(self.edges) if site in e.sites]

    def site_edge_masks(self) -> List[int]:
        """Per-site bit mask over edge ids (the incidence matrix rows)."""
        masks = [0] * self.n_sites
        for i, e in enumerate(self.edges):
            for s in e.sites:
                masks[s] |= 1 << i
        return masks

    # -- validation ----------------------------------------------------

    def validate(self) -> List[str]:
        """Return the list of violations of the three hypergraph restrictions."""
        problems: List[str] = []
        degree = [0] * self.n_sites
        for e in self.edges:
            if len(set(e.sites)) != len(e.sites):
                problems.append(f"edge {e.sites} repeats a site")
            for s in e.sites:
                degree[s] += 1
        for s, d in enumerate(degree):
            if d != 3:
                problems.append(f"site {s} has {d} incident edges, expected 3")
        for i in range(self.n_edges):
            for j in range(i + 1, self.n_edges):
                shared = set(self.edges[i].sites) & set(self.edges[j].sites)
                if len(shared) > 1:
                    problems.append(f"edges {i} and {j} share sites {sorted(shared)}")
        tri_sites: set = set()
        for t in self.triangles():
            sites = set(self.edges[t].sites)
            overlap = tri_sites & sites
            if overlap:
                problems.append(f"triangle {t} shares sites {sorted(overlap)} with another triangle")
            tri_sites |= sites
        return problems

    # -- commutation structure -------------------------------------------

    def eta(self, e: int, f: int) -> int:
        """1 iff the edge operators on e and f must anticommute."""
        ee, ff = self.edges[e], self.edges[f]
        if e == f:
            return 1 if ee.is_triangle else 0
        return 1 if len(set(ee.sites) & set(ff.sites)) == 1 else 0

    # -- cycle space -----------------------------------------------------

    def is_cycle(self, mask: int) -> bool:
        deg = [0] * self.n_sites
        for i in gf2.bits(mask):
            for s in self.edges[i].sites:
                deg[s] += 1
        return all(d % 2 == 0 for d in deg)

    def cycle_space_basis(self) -> List[Cycle]:
        """Basis of the kernel of the incidence matrix over GF(2)."""
        basis = gf2.nullspace(self.site_edge_masks(), self.n_edges)
        return [self.make_cycle(v) for v in basis]

    def make_cycle(self, mask: int, role: str = "other") -> Cycle:
        return Cycle(mask, self.winding(mask), role)

    def triangle_overlap(self, m: Cycle, mp: Cycle) -> int:
        """Parity of the number of triangles shared by the two cycles."""
        shared = m.edges & mp.edges
        count = 0
        for i in gf2.bits(shared):
            if self.edges[i].is_triangle:
                count ^= 1
        return count

    def edge_winding(self, e: int) -> Tuple[int, int]:
        wx = wy = 0
        for dx, dy in self.edges[e].disps:
            wx ^= dx & 1
            wy ^= dy & 1
        return wx, wy

    def winding(self, mask: int) -> Tuple[int, int]:
        """Homology class mod 2 of an edge set, from incidence displacements."""
        wx = wy = 0
        for i in gf2.bits(mask):
            ex, ey = self.edge_winding(i)
            wx ^= ex
            wy ^= ey
        return wx, wy

    # -- file format -----------------------------------------------------

    def save(self) -> str:
        lines = [f"torus {self.periods[0]} {self.periods[1]}"]
        for i, (x, y) in enumerate(self.coords):
            lines.append(f"site {i} {x} {y}")
        for i, e in enumerate(self.edges):
            kind = "link" if e.kind == LINK else "tri"
            parts = [kind, str(i)] + [str(s) for s in e.sites]
            for dx, dy in e.disps:
                parts += [str(dx), str(dy)]
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def load(text: str) -> Hypergraph:
    """Parse the lattice definition format written by Hypergraph.save."""
    h: Optional[Hypergraph] = None
    sites: Dict[int, Coord] = {}
    edges: List[Tuple[int, Edge]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        try:
            if tag == "torus":
                if len(parts) != 3:
                    raise ValueError("expected: torus Lx Ly")
                h = Hypergraph((int(parts[1]), int(parts[2])))
            elif tag == "site":
                if len(parts) != 4:
                    raise ValueError("expected: site <id> <x> <y>")
                sites[int(parts[1])] = (Fraction(parts[2]), Fraction(parts[3]))
            elif tag in ("link", "tri"):
                arity = 2 if tag == "link" else 3
                want = 2 + arity + 2 * arity
                if len(parts) != want:
                    raise ValueError(f"expected {want} fields for {tag}")
                eid = int(parts[1])
                ss = tuple(int(p) for p in parts[2:2 + arity])
                rest = [int(p) for p in parts[2 + arity:]]
                disps = tuple((rest[2 * k], rest[2 * k + 1]) for k in range(arity))
                kind = LINK if tag == "link" else TRI
                edges.append((eid, Edge(kind, ss, disps)))
            else:
                raise ValueError(f"unknown record {tag!r}")
        except ValueError as err:
            raise ParseError(lineno, str(err)) from None
    if h is None:
        raise ParseError(0, "missing torus header")
    for i in range(len(sites)):
        if i not in sites:
            raise ParseError(0, f"missing site id {i}")
        h.coords.append(sites[i])
    edges.sort(key=lambda t: t[0])
    for expect, (eid, e) in enumerate(edges):
        if eid != expect:
            raise ParseError(0, f"edge ids not contiguous at {eid}")
        h.edges.append(e)
    return h
