"""Feynman graphs: arcs with a fixed-point-free involution, partially attached to vertices.

A graph holds a finite arc set A with an involution i (edges are the
i-orbits), a vertex set V, and a partial attachment map whose domain D
consists of the arcs adjacent to a vertex.  The boundary is A minus D.
The nodeless loop is unrepresentable: the only legal vertex-free graph
is the exceptional edge with a single two-arc orbit.
"""

from __future__ import annotations

import itertools
import json
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    BettiUndefined,
    Disconnected,
    InvolutionFixedPoint,
    InvolutionNotPairing,
    NodelessLoopUnrepresentable,
    UnknownArcOrVertex,
    UnknownVertex,
)


def _edge_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


class FeynmanGraph:
    """Immutable graph value; all derived data is computed lazily and cached."""

    __slots__ = ("arcs", "vertices", "involution", "attach", "__dict__")

    def __init__(self, arcs, vertices, involution, attach):
        self.arcs = tuple(sorted(arcs))
        self.vertices = tuple(sorted(vertices))
        self.involution = dict(involution)
        self.attach = dict(attach)

    # -- construction -------------------------------------------------

    @staticmethod
    def build(
        arcs: Iterable[str],
        involution_pairs: Iterable[Sequence[str]],
        attach: Mapping[str, str],
        vertices: Optional[Iterable[str]] = None,
        require_connected: bool = True,
    ) -> "FeynmanGraph":
        arcs = list(arcs)
        if len(set(arcs)) != len(arcs):
            raise UnknownArcOrVertex("duplicate arc identifiers")
        arcset = set(arcs)
        inv: dict[str, str] = {}
        for pair in involution_pairs:
            a, b = pair
            if a not in arcset or b not in arcset:
                raise UnknownArcOrVertex(f"involution pair ({a},{b}) uses unknown arcs")
            if a == b:
                raise InvolutionFixedPoint(f"arc {a} paired with itself")
            if a in inv or b in inv:
                raise InvolutionNotPairing(f"arc {a} or {b} appears in two pairs")
            inv[a] = b
            inv[b] = a
        if set(inv) != arcset:
            missing = sorted(arcset - set(inv))
            raise InvolutionNotPairing(f"arcs not covered by the pairing: {missing}")
        if vertices is None:
            vset = set(attach.values())
        else:
            vset = set(vertices)
        for a, v in attach.items():
            if a not in arcset:
                raise UnknownArcOrVertex(f"attached arc {a} not declared")
            if v not in vset:
                raise UnknownArcOrVertex(f"attach target {v} not a declared vertex")
        if not vset:
            # Only the exceptional edge survives with no vertices.
            if attach or len(arcs) != 2:
                raise NodelessLoopUnrepresentable(
                    "a vertex-free graph must be a single unattached edge"
                )
        g = FeynmanGraph(arcs, vset, inv, attach)
        if require_connected and not g.is_connected():
            raise Disconnected("graph is not connected")
        return g

    # -- derived data --------------------------------------------------

    def partner(self, a: str) -> str:
        return self.involution[a]

    def attached_to(self, a: str) -> Optional[str]:
        return self.attach.get(a)

    @cached_property
    def domain(self) -> frozenset:
        return frozenset(self.attach)

    @cached_property
    def boundary(self) -> tuple[str, ...]:
        return tuple(a for a in self.arcs if a not in self.attach)

    @cached_property
    def edges(self) -> tuple[tuple[str, str], ...]:
        return tuple(sorted({_edge_key(a, self.involution[a]) for a in self.arcs}))

    @cached_property
    def internal_edges(self) -> tuple[tuple[str, str], ...]:
        return tuple(
            e for e in self.edges if e[0] in self.attach and e[1] in self.attach
        )

    @cached_property
    def _nb(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arcs:
            v = self.attach.get(a)
            if v is not None:
                out[v].append(a)
        return {v: tuple(sorted(arcs)) for v, arcs in out.items()}

    def nb(self, v: str) -> tuple[str, ...]:
        if v not in self._nb:
            raise UnknownVertex(f"unknown vertex {v}")
        return self._nb[v]

    def arity(self, v: str) -> int:
        return len(self.nb(v))

    def is_connected(self) -> bool:
        if not self.arcs and len(self.vertices) <= 1:
            return bool(self.vertices)
        items = list(self.vertices) + list(self.arcs)
        if not items:
            return False
        parent = {x: x for x in items}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            parent[find(x)] = find(y)

        for a in self.arcs:
            union(a, self.involution[a])
            v = self.attach.get(a)
            if v is not None:
                union(a, v)
        roots = {find(x) for x in items}
        return len(roots) == 1

    def degree(self) -> int:
        """Reedy degree: |V| + first Betti number; elementary maps shift it by one."""
        if not self.vertices:
            return 0
        return len(self.internal_edges) + 1

    def betti(self) -> int:
        if not self.vertices:
            return 0
        if not self.is_connected():
            raise BettiUndefined("Betti number defined only for connected graphs")
        return len(self.internal_edges) - len(self.vertices) + 1

    # -- identity ------------------------------------------------------

    @cached_property
    def key(self) -> tuple:
        return (
            self.arcs,
            self.vertices,
            tuple(sorted(self.involution.items())),
            tuple(sorted(self.attach.items())),
        )

    def __eq__(self, other):
        return isinstance(other, FeynmanGraph) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FeynmanGraph(|A|={len(self.arcs)}, V={list(self.vertices)})"


# -- constructors -------------------------------------------------------


def new_graph(arcs, involution_pairs, attach, vertices=None, require_connected=True):
    return FeynmanGraph.build(
        arcs, involution_pairs, attach, vertices, require_connected
    )


def edge() -> FeynmanGraph:
    """The exceptional edge: two arcs, no vertices."""
    return FeynmanGraph.build(["a", "b"], [("a", "b")], {}, vertices=[])


def star(n: int) -> FeynmanGraph:
    """The n-star: one vertex with n legs, each leg ending loose."""
    if n < 0:
        raise ValueError("star arity must be non-negative")
    arcs, pairs, attach = [], [], {}
    for k in range(1, n + 1):
        arcs += [f"{k}", f"{k}*"]
        pairs.append((f"{k}", f"{k}*"))
        attach[f"{k}"] = "v"
    return FeynmanGraph.build(arcs, pairs, attach, vertices=["v"])


def boundary(g: FeynmanGraph) -> tuple[str, ...]:
    return g.boundary


def edges(g: FeynmanGraph) -> tuple[tuple[str, str], ...]:
    return g.edges


def internal_edges(g: FeynmanGraph) -> tuple[tuple[str, str], ...]:
    return g.internal_edges


def neighbourhood(g: FeynmanGraph, v: str) -> tuple[str, ...]:
    return g.nb(v)


def _fresh(name: str, taken: set) -> str:
    cand = name + "^"
    while cand in taken:
        cand += "^"
    return cand


def star_of_vertex(g: FeynmanGraph, v: str):
    """Star on nb(v).  Returns (star graph, correspondence star arc -> arc of g).

    Attached arcs keep their names and correspond to themselves; each fresh
    boundary arc corresponds to the g-partner of its attached mate.
    """
    nb = g.nb(v)
    taken = set(nb)
    arcs, pairs, attach, corr = [], [], {}, {}
    for a in nb:
        b = _fresh(a, taken)
        taken.add(b)
        arcs += [a, b]
        pairs.append((a, b))
        attach[a] = v
        corr[a] = a
        corr[b] = g.involution[a]
    h = FeynmanGraph.build(arcs, pairs, attach, vertices=[v])
    return h, corr


def star_of_graph(g: FeynmanGraph) -> FeynmanGraph:
    """One-vertex star whose legs are the boundary of g; for the edge this is a 2-star."""
    bnd = g.boundary
    taken = set(bnd)
    arcs, pairs, attach = [], [], {}
    for a in bnd:
        b = _fresh(a, taken)
        taken.add(b)
        arcs += [a, b]
        pairs.append((a, b))
        attach[b] = "v"
    return FeynmanGraph.build(arcs, pairs, attach, vertices=["v"])


def is_connected(g: FeynmanGraph) -> bool:
    return g.is_connected()


def degree(g: FeynmanGraph) -> int:
    return g.degree()


def betti(g: FeynmanGraph) -> int:
    return g.betti()


# -- genus ---------------------------------------------------------------


class GenusGraph:
    """A graph together with a genus label on every vertex."""

    __slots__ = ("graph", "genus")

    def __init__(self, graph: FeynmanGraph, genus: Mapping[str, int]):
        if set(genus) != set(graph.vertices):
            raise UnknownVertex("genus map must cover exactly the vertex set")
        if any(k < 0 for k in genus.values()):
            raise ValueError("genus values must be natural numbers")
        self.graph = graph
        self.genus = dict(genus)

    def __eq__(self, other):
        return (
            isinstance(other, GenusGraph)
            and self.graph == other.graph
            and self.genus == other.genus
        )

    def __hash__(self):
        return hash((self.graph.key, tuple(sorted(self.genus.items()))))

    def __repr__(self):
        return f"GenusGraph({self.graph!r}, genus={self.genus})"


def total_genus(gg: GenusGraph) -> int:
    return gg.graph.betti() + sum(gg.genus.values())


def is_stable(gg: GenusGraph) -> bool:
    g = gg.graph
    if not g.is_connected():
        return False
    return all(2 * gg.genus[v] + g.arity(v) - 2 > 0 for v in g.vertices)


# -- isomorphism ----------------------------------------------------------


def _vertex_invariants(g: FeynmanGraph, genus=None) -> dict[str, tuple]:
    inv = {}
    for v in g.vertices:
        loops = sum(
            1 for a in g.nb(v) if g.attach.get(g.involution[a]) == v
        )
        base = (g.arity(v), loops, -1 if genus is None else genus[v])
        inv[v] = base
    for _ in range(max(1, len(g.vertices))):
        nxt = {}
        for v in g.vertices:
            seen = []
            for a in g.nb(v):
                p = g.involution[a]
                w = g.attach.get(p)
                seen.append(("b",) if w is None else ("i", inv[w]))
            nxt[v] = (inv[v], tuple(sorted(seen)))
        if len(set(nxt.values())) == len(set(inv.values())):
            inv = nxt
            break
        inv = nxt
    return inv


def isomorphisms(g: FeynmanGraph, h: FeynmanGraph):
    """All graph isomorphisms g -> h as (arc bijection, vertex bijection), sorted."""
    out = []
    if not g.vertices and not h.vertices:
        (a1, a2) = g.arcs
        (b1, b2) = h.arcs
        out = [
            ({a1: b1, a2: b2}, {}),
            ({a1: b2, a2: b1}, {}),
        ]
        return out
    if len(g.vertices) != len(h.vertices) or len(g.arcs) != len(h.arcs):
        return []
    gi = _vertex_invariants(g)
    hi = _vertex_invariants(h)
    if sorted(gi.values()) != sorted(hi.values()):
        return []
    gverts = list(g.vertices)

    def candidate_targets(v):
        return [w for w in h.vertices if hi[w] == gi[v]]

    for vmap_targets in itertools.product(*(candidate_targets(v) for v in gverts)):
        if len(set(vmap_targets)) != len(gverts):
            continue
        vmap = dict(zip(gverts, vmap_targets))
        nb_choices = []
        ok = True
        for v in gverts:
            src, tgt = g.nb(v), h.nb(vmap[v])
            if len(src) != len(tgt):
                ok = False
                break
            nb_choices.append([dict(zip(src, p)) for p in itertools.permutations(tgt)])
        if not ok:
            continue
        for combo in itertools.product(*nb_choices):
            amap = {}
            for d in combo:
                amap.update(d)
            # extend over boundary arcs and check involution/attach compatibility
            good = True
            full = dict(amap)
            for a in g.arcs:
                if a in full:
                    continue
                p = g.involution[a]
                if p in amap:
                    full[a] = h.involution[amap[p]]
                else:
                    good = False
                    break
            if not good or len(set(full.values())) != len(full):
                continue
            for a in g.arcs:
                if full[g.involution[a]] != h.involution[full[a]]:
                    good = False
                    break
                va = g.attach.get(a)
                wa = h.attach.get(full[a])
                if (va is None) != (wa is None) or (
                    va is not None and vmap[va] != wa
                ):
                    good = False
                    break
            if good:
                out.append((full, vmap))
    out.sort(key=lambda m: tuple(sorted(m[0].items())))
    return out


def is_isomorphic(g: FeynmanGraph, h: FeynmanGraph) -> bool:
    return canonical_key(g) == canonical_key(h)


# -- canonical labeling ---------------------------------------------------

_CANON_CACHE: dict = {}


def _canon_search(g: FeynmanGraph, genus=None):
    """Minimal encoding over invariant-respecting labelings.

    Encoding: vertex arities (plus genus when given) in chosen vertex order,
    then one (attach index, partner index) pair per arc in its assigned
    number order.  D-arcs are numbered vertex block by vertex block; boundary
    arcs afterwards, ordered by their partner's number.
    """
    if not g.vertices:
        return ("edge",), {g.arcs[0]: 0, g.arcs[1]: 1}, {}
    inv = _vertex_invariants(g, genus)
    classes: dict[tuple, list[str]] = {}
    for v in g.vertices:
        classes.setdefault(inv[v], []).append(v)
    class_keys = sorted(classes)
    best = None

    def vertex_orders():
        pools = [itertools.permutations(sorted(classes[k])) for k in class_keys]
        for combo in itertools.product(*pools):
            yield [v for block in combo for v in block]

    for order in vertex_orders():
        vidx = {v: i for i, v in enumerate(order)}
        # positions of "structural" arcs (loop arcs or internal-edge arcs) matter;
        # boundary-partnered legs are interchangeable and keep sorted order.
        per_vertex_arrangements = []
        for v in order:
            nb = g.nb(v)
            structural = [
                a for a in nb if g.involution[a] in g.attach
            ]
            legs = [a for a in nb if a not in set(structural)]
            k = len(nb)
            arrangements = []
            for pos in itertools.combinations(range(k), len(structural)):
                for perm in itertools.permutations(structural):
                    slots: list = [None] * k
                    for p, a in zip(pos, perm):
                        slots[p] = a
                    it = iter(legs)
                    arrangements.append(
                        tuple(a if a is not None else next(it) for a in slots)
                    )
            per_vertex_arrangements.append(arrangements)
        for combo in itertools.product(*per_vertex_arrangements):
            arc_num: dict[str, int] = {}
            n = 0
            for arcs_of_v in combo:
                for a in arcs_of_v:
                    arc_num[a] = n
                    n += 1
            bnd = [a for a in g.arcs if a not in g.attach]
            bnd.sort(key=lambda a: arc_num[g.involution[a]])
            for a in bnd:
                arc_num[a] = n
                n += 1
            enc_head = tuple(
                (g.arity(v), -1 if genus is None else genus[v]) for v in order
            )
            by_num = sorted(arc_num, key=arc_num.get)
            enc_arcs = tuple(
                (
                    vidx.get(g.attach.get(a), -1),
                    arc_num[g.involution[a]],
                )
                for a in by_num
            )
            enc = (len(order), enc_head, enc_arcs)
            if best is None or enc < best[0]:
                best = (enc, dict(arc_num), dict(vidx))
    return best


def canonicalize(g: FeynmanGraph, genus=None):
    """Return (canonical graph, arc map g->canon, vertex map g->canon).

    Isomorphic graphs produce identical canonical graphs; with a genus map,
    isomorphic genus graphs produce identical (graph, genus) pairs.
    """
    gk = g.key if genus is None else (g.key, tuple(sorted(genus.items())))
    hit = _CANON_CACHE.get(gk)
    if hit is not None:
        return hit
    enc, arc_num, vidx = _canon_search(g, genus)
    arc_map = {a: f"a{i}" for a, i in arc_num.items()}
    vertex_map = {v: f"v{i}" for v, i in vidx.items()}
    cg = FeynmanGraph(
        [arc_map[a] for a in g.arcs],
        [vertex_map[v] for v in g.vertices],
        {arc_map[a]: arc_map[g.involution[a]] for a in g.arcs},
        {arc_map[a]: vertex_map[v] for a, v in g.attach.items()},
    )
    result = (cg, arc_map, vertex_map)
    _CANON_CACHE[gk] = result
    return result


def canonical_key(g: FeynmanGraph) -> tuple:
    return canonicalize(g)[0].key


# -- JSON ----------------------------------------------------------------


def graph_to_json(g: FeynmanGraph, genus: Optional[Mapping[str, int]] = None) -> dict:
    doc = {
        "arcs": list(g.arcs),
        "involution": sorted([list(e) for e in g.edges]),
        "vertices": list(g.vertices),
        "attach": dict(sorted(g.attach.items())),
    }
    if genus is not None:
        doc["genus"] = dict(sorted(genus.items()))
    return doc


def graph_from_json(doc: dict, require_connected: bool = True):
    """Parse the graph schema; returns a FeynmanGraph or a GenusGraph."""
    g = FeynmanGraph.build(
        doc["arcs"],
        doc["involution"],
        doc.get("attach", {}),
        vertices=doc.get("vertices"),
        require_connected=require_connected,
    )
    if "genus" in doc:
        return GenusGraph(g, {v: int(k) for v, k in doc["genus"].items()})
    return g


def load_graph(path: str, require_connected: bool = True):
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(json.load(fh), require_connected)
