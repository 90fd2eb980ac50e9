"""Embeddings between graphs: neighbourhood-bijective, vertex-injective maps.

An embedding need not be injective on arcs: two loose legs of the source
may fold onto the two halves of one internal edge of the target (the
contracted-star phenomenon).  Up to isomorphism, an embedding into G is
classified by the set W of target vertices it covers plus the subset S of
internal edges of G[W] that are genuinely internal in the source; the
remaining G[W]-edges are folded.
"""

from __future__ import annotations

from functools import cached_property
import itertools
from typing import Iterable, Optional

from .errors import UnknownVertex
from .graphs import FeynmanGraph, _edge_key, _fresh, edge, star_of_vertex


class Embedding:
    __slots__ = ("source", "target", "arc_map", "vertex_map", "__dict__")

    def __init__(self, source, target, arc_map, vertex_map):
        self.source = source
        self.target = target
        self.arc_map = dict(arc_map)
        self.vertex_map = dict(vertex_map)

    @cached_property
    def key(self):
        return (
            self.source.key,
            self.target.key,
            tuple(sorted(self.arc_map.items())),
            tuple(sorted(self.vertex_map.items())),
        )

    def __eq__(self, other):
        return isinstance(other, Embedding) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Embedding({self.source!r} -> {self.target!r})"

    def class_key(self):
        """Isomorphism-class signature: covered vertices plus unfolded edges."""
        if not self.source.vertices:
            a = self.source.arcs[0]
            return ("edge", _edge_key(self.arc_map[a], self.target.involution[self.arc_map[a]]))
        w = frozenset(self.vertex_map.values())
        s = frozenset(
            _edge_key(self.arc_map[a], self.arc_map[b])
            for (a, b) in self.source.internal_edges
        )
        return ("shape", w, s)

    def is_edge_class(self) -> bool:
        return not self.source.vertices

    def genus_of(self, target_genus) -> int:
        """Betti of the source plus the genus of the covered vertices."""
        return self.source.betti() + sum(
            target_genus[self.vertex_map[v]] for v in self.source.vertices
        )


def validate_embedding(e: Embedding):
    """Check the embedding clauses; returns (ok, first violated clause or '')."""
    src, tgt = e.source, e.target
    if set(e.arc_map) != set(src.arcs):
        return False, "arc_map is not total on source arcs"
    if any(a not in tgt.involution for a in e.arc_map.values()):
        return False, "arc_map leaves the target arc set"
    if set(e.vertex_map) != set(src.vertices):
        return False, "vertex_map is not total on source vertices"
    if any(v not in tgt._nb for v in e.vertex_map.values()):
        return False, "vertex_map leaves the target vertex set"
    if len(set(e.vertex_map.values())) != len(e.vertex_map):
        return False, "vertex_map is not injective"
    for a in src.arcs:
        if e.arc_map[src.involution[a]] != tgt.involution[e.arc_map[a]]:
            return False, f"arc_map does not commute with the involutions at {a}"
    for v in src.vertices:
        images = [e.arc_map[a] for a in src.nb(v)]
        if sorted(images) != sorted(tgt.nb(e.vertex_map[v])):
            return False, f"neighbourhood of {v} does not map bijectively"
    return True, ""


def _shape_graph(g: FeynmanGraph, w: Iterable[str], s: Iterable[tuple]):
    """Build the canonical source for the class (W, S) plus its embedding maps."""
    w = sorted(set(w))
    s_arcs = set()
    for (a, b) in s:
        s_arcs.add(a)
        s_arcs.add(b)
    arcs, pairs, attach = [], [], {}
    arc_map = {}
    taken = set()
    for v in w:
        for a in g.nb(v):
            taken.add(a)
    for v in w:
        for a in g.nb(v):
            attach[a] = v
            arc_map[a] = a
    done = set()
    for v in w:
        for a in g.nb(v):
            if a in done:
                continue
            p = g.involution[a]
            if a in s_arcs and p in attach:
                pairs.append((a, p))
                arcs += [a, p]
                done.add(a)
                done.add(p)
            else:
                b = _fresh(a, taken)
                taken.add(b)
                pairs.append((a, b))
                arcs += [a, b]
                arc_map[b] = p
                done.add(a)
    shape = FeynmanGraph(arcs, w, dict(i for p in pairs for i in [(p[0], p[1]), (p[1], p[0])]), attach)
    emb = Embedding(shape, g, arc_map, {v: v for v in w})
    return shape, emb


def shape_class_embedding(g: FeynmanGraph, w, s) -> Optional[Embedding]:
    """Representative embedding for class (W, S), or None if the shape is not connected."""
    shape, emb = _shape_graph(g, w, s)
    if not shape.is_connected():
        return None
    return emb


def edge_class_embedding(g: FeynmanGraph, arc: str) -> Embedding:
    src = edge()
    return Embedding(src, g, {"a": arc, "b": g.involution[arc]}, {})


def canonical_star_embedding(g: FeynmanGraph, v: str) -> Embedding:
    if v not in g._nb:
        raise UnknownVertex(f"unknown vertex {v}")
    shape, corr = star_of_vertex(g, v)
    return Embedding(shape, g, corr, {v: v})


def emb_classes(g: FeynmanGraph) -> list[Embedding]:
    """One representative per isomorphism class of embeddings into g.

    Classes with a vertex are the connected (W, S) shapes; the vertex-free
    classes are one edge inclusion per edge of g.
    """
    out = []
    seen_edges = set()
    for a in g.arcs:
        ek = _edge_key(a, g.involution[a])
        if ek in seen_edges:
            continue
        seen_edges.add(ek)
        out.append(edge_class_embedding(g, ek[0]))
    verts = list(g.vertices)
    for r in range(1, len(verts) + 1):
        for w in itertools.combinations(verts, r):
            wset = set(w)
            inside = [
                e
                for e in g.internal_edges
                if g.attach[e[0]] in wset and g.attach[e[1]] in wset
            ]
            for k in range(len(inside) + 1):
                for s in itertools.combinations(inside, k):
                    emb = shape_class_embedding(g, w, s)
                    if emb is not None:
                        out.append(emb)
    out.sort(key=lambda e: _class_sort_key(e))
    return out


def _class_sort_key(e: Embedding):
    ck = e.class_key()
    if ck[0] == "edge":
        return (0, tuple(sorted(ck[1])), ())
    return (1, tuple(sorted(ck[1])), tuple(sorted(ck[2])))


def enumerate_embeddings(h: FeynmanGraph, g: FeynmanGraph) -> list[Embedding]:
    """Exhaustive list of embeddings h -> g, deterministically ordered."""
    out = []
    if not h.vertices:
        a, b = h.arcs
        for x in g.arcs:
            out.append(Embedding(h, g, {a: x, b: g.involution[x]}, {}))
        out.sort(key=lambda e: tuple(sorted(e.arc_map.items())))
        return out
    hverts = list(h.vertices)
    gverts = list(g.vertices)
    if len(hverts) > len(gverts):
        return []
    for targets in itertools.permutations(gverts, len(hverts)):
        vmap = dict(zip(hverts, targets))
        if any(h.arity(v) != g.arity(vmap[v]) for v in hverts):
            continue
        pools = []
        for v in hverts:
            src, tgt = h.nb(v), g.nb(vmap[v])
            pools.append([dict(zip(src, p)) for p in itertools.permutations(tgt)])
        for combo in itertools.product(*pools):
            amap = {}
            for d in combo:
                amap.update(d)
            full = dict(amap)
            ok = True
            for a in h.arcs:
                if a in full:
                    continue
                p = h.involution[a]
                if p not in amap:
                    ok = False
                    break
                full[a] = g.involution[amap[p]]
            if not ok:
                continue
            for a in h.arcs:
                if full[h.involution[a]] != g.involution[full[a]]:
                    ok = False
                    break
            if ok:
                out.append(Embedding(h, g, full, vmap))
    out.sort(
        key=lambda e: (
            tuple(sorted(e.vertex_map.items())),
            tuple(sorted(e.arc_map.items())),
        )
    )
    return out
