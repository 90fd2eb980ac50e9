"""Graphical maps: morphisms of the category of connected graphs.

A map G -> G' is an involutive arc map together with an assignment of an
embedding H_v -> G' to every vertex v of G, blowing v up into H_v.  The
embeddings may not overlap at vertices, each nb(v) corresponds to the
boundary of H_v through a unique bijection compatible with the arc map,
and a boundaryless source must blow up some vertex by more than an edge.

Composition substitutes the second map's blow-ups into the shapes of the
first; the spliced edges are traced arc by arc.  A splice cycle with no
surviving arc would be the nodeless loop and is rejected.
"""

from __future__ import annotations

from functools import cached_property
import itertools
from typing import Mapping, Optional

from .embeddings import (
    Embedding,
    canonical_star_embedding,
    edge_class_embedding,
    emb_classes,
    validate_embedding,
)
from .errors import (
    CompositionIncompatible,
    NodelessLoopUnrepresentable,
    SearchBudgetExceeded,
)
from .graphs import FeynmanGraph, edge


class GraphicalMap:
    __slots__ = ("source", "target", "arc_map", "assignments", "__dict__")

    def __init__(self, source, target, arc_map, assignments):
        self.source = source
        self.target = target
        self.arc_map = dict(arc_map)
        self.assignments = dict(assignments)

    @cached_property
    def key(self):
        return (
            self.source.key,
            self.target.key,
            tuple(sorted(self.arc_map.items())),
            tuple(sorted((v, e.class_key()) for v, e in self.assignments.items())),
        )

    def __eq__(self, other):
        return isinstance(other, GraphicalMap) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"GraphicalMap({self.source!r} -> {self.target!r})"


def identity_map(g: FeynmanGraph) -> GraphicalMap:
    return GraphicalMap(
        g,
        g,
        {a: a for a in g.arcs},
        {v: canonical_star_embedding(g, v) for v in g.vertices},
    )


def boundary_bijection(phi: GraphicalMap, v: str) -> Optional[dict]:
    """The unique map nb(v) -> boundary of the blow-up compatible with the arc map."""
    emb = phi.assignments[v]
    bnd = emb.source.boundary
    out = {}
    for a in phi.source.nb(v):
        y = phi.arc_map[phi.source.involution[a]]
        hits = [b for b in bnd if emb.arc_map[b] == y]
        if len(hits) != 1:
            return None
        out[a] = hits[0]
    if sorted(out.values()) != sorted(bnd):
        return None
    return out


def validate_graphical_map(phi: GraphicalMap):
    """Check all graphical-map clauses; returns (ok, first violated clause or '')."""
    src, tgt = phi.source, phi.target
    if set(phi.arc_map) != set(src.arcs):
        return False, "arc map is not total"
    if any(x not in tgt.involution for x in phi.arc_map.values()):
        return False, "arc map leaves the target arc set"
    for a in src.arcs:
        if phi.arc_map[src.involution[a]] != tgt.involution[phi.arc_map[a]]:
            return False, f"arc map not involutive at {a}"
    if set(phi.assignments) != set(src.vertices):
        return False, "vertex assignment is not total"
    covered: set = set()
    for v in sorted(src.vertices):
        emb = phi.assignments[v]
        if emb.target != tgt:
            return False, f"assignment at {v} lands in the wrong graph"
        ok, why = validate_embedding(emb)
        if not ok:
            return False, f"assignment at {v}: {why}"
        img = set(emb.vertex_map.values())
        if img & covered:
            return False, f"assignments overlap at vertices near {v}"
        covered |= img
        if boundary_bijection(phi, v) is None:
            return False, f"no boundary bijection at {v}"
    if not src.boundary and src.vertices:
        if all(not e.source.vertices for e in phi.assignments.values()):
            return False, "boundaryless source blown up entirely by edges"
    return True, ""


# -- substitution ----------------------------------------------------------


def substitute(outer: FeynmanGraph, parts: Mapping[str, tuple]):
    """Replace every vertex w of `outer` by a graph, gluing boundaries.

    `parts[w]` is a pair (graph K, bijection nb(w) -> boundary of K).  Returns
    (result graph, name of each surviving outer arc, names of part arcs and
    part vertices).  Splice cycles with no surviving arc are rejected.
    """
    if set(parts) != set(outer.vertices):
        raise CompositionIncompatible("substitution must cover every vertex")
    glue: dict = {}
    for w, (k, bij) in parts.items():
        if sorted(bij) != sorted(outer.nb(w)):
            raise CompositionIncompatible(f"bad gluing domain at {w}")
        if sorted(bij.values()) != sorted(k.boundary):
            raise CompositionIncompatible(f"bad gluing image at {w}")
        for a, b in bij.items():
            glue[("o", a)] = ("p", w, b)
            glue[("p", w, b)] = ("o", a)

    def home_partner(tag):
        if tag[0] == "o":
            return ("o", outer.involution[tag[1]])
        _, w, b = tag
        return ("p", w, parts[w][0].involution[b])

    surviving = [("o", a) for a in outer.boundary]
    part_vertices = []
    for w in outer.vertices:
        k = parts[w][0]
        part_vertices += [("p", w, x) for x in k.vertices]
        surviving += [("p", w, d) for d in k.arcs if d in k.attach]

    def walk(tag):
        cur = home_partner(tag)
        seen = set()
        while cur in glue:
            if cur in seen:
                raise NodelessLoopUnrepresentable(
                    "substitution collapses a cycle to the nodeless loop"
                )
            seen.add(cur)
            cur = home_partner(glue[cur])
        return cur

    # closed splice cycles touch no surviving arc; detect them directly
    dying = set(glue)
    reached = set()
    name = {}
    for tag in surviving:
        name[tag] = "o|%s" % tag[1] if tag[0] == "o" else "p|%s|%s" % (tag[1], tag[2])
    vname = {t: "p|%s|%s" % (t[1], t[2]) for t in part_vertices}
    involution = {}
    for tag in surviving:
        cur = home_partner(tag)
        while cur in glue:
            reached.add(cur)
            reached.add(glue[cur])
            cur = home_partner(glue[cur])
        involution[name[tag]] = name[cur]
    if dying - reached:
        raise NodelessLoopUnrepresentable(
            "substitution collapses a cycle to the nodeless loop"
        )
    attach = {}
    for w in outer.vertices:
        k = parts[w][0]
        for d, x in k.attach.items():
            attach[name[("p", w, d)]] = vname[("p", w, x)]
    result = FeynmanGraph(
        [name[t] for t in surviving],
        [vname[t] for t in part_vertices],
        involution,
        attach,
    )
    arc_names = {t: name[t] for t in surviving}
    return result, arc_names, vname


def compose(psi: GraphicalMap, phi: GraphicalMap) -> GraphicalMap:
    """The composite psi after phi, computed by graph substitution."""
    if phi.target != psi.source:
        raise CompositionIncompatible("target of the first map must be the source of the second")
    g, gpp = phi.source, psi.target
    arc_map = {a: psi.arc_map[phi.arc_map[a]] for a in g.arcs}
    psi_bij = {u: boundary_bijection(psi, u) for u in psi.source.vertices}
    assignments = {}
    for v in g.vertices:
        e_v = phi.assignments[v]
        h_v = e_v.source
        if not h_v.vertices:
            a, b = h_v.arcs
            emb = Embedding(
                edge(),
                gpp,
                {"a": psi.arc_map[e_v.arc_map[a]], "b": psi.arc_map[e_v.arc_map[b]]},
                {},
            )
            assignments[v] = emb
            continue
        parts = {}
        for w in h_v.vertices:
            u = e_v.vertex_map[w]
            k_emb = psi.assignments[u]
            bij = {}
            for alpha in h_v.nb(w):
                t_arc = e_v.arc_map[alpha]
                bij[alpha] = psi_bij[u][t_arc]
            parts[w] = (k_emb.source, bij)
        lv, arc_names, vnames = substitute(h_v, parts)
        e_arc = {}
        for tag, nm in arc_names.items():
            if tag[0] == "o":
                e_arc[nm] = psi.arc_map[e_v.arc_map[tag[1]]]
            else:
                _, w, d = tag
                e_arc[nm] = psi.assignments[e_v.vertex_map[w]].arc_map[d]
        e_vtx = {}
        for (tag, nm) in vnames.items():
            _, w, x = tag
            e_vtx[nm] = psi.assignments[e_v.vertex_map[w]].vertex_map[x]
        emb = Embedding(lv, gpp, e_arc, e_vtx)
        ok, why = validate_embedding(emb)
        if not ok:
            raise CompositionIncompatible(f"substitution produced a bad embedding: {why}")
        assignments[v] = emb
    out = GraphicalMap(g, gpp, arc_map, assignments)
    ok, why = validate_graphical_map(out)
    if not ok:
        raise CompositionIncompatible(f"composite fails validation: {why}")
    return out


def compose_chain(maps) -> GraphicalMap:
    """Compose maps listed in application order (first applied first)."""
    maps = list(maps)
    if not maps:
        raise CompositionIncompatible("empty chain")
    acc = maps[0]
    for m in maps[1:]:
        acc = compose(m, acc)
    return acc


_COMPOSE_CACHE: dict = {}


def compose_cached(psi: GraphicalMap, phi: GraphicalMap) -> GraphicalMap:
    """Composition memoized by the key pair; for hot enumeration loops."""
    ck = (psi.key, phi.key)
    hit = _COMPOSE_CACHE.get(ck)
    if hit is None:
        hit = compose(psi, phi)
        _COMPOSE_CACHE[ck] = hit
    return hit


# -- hom enumeration -------------------------------------------------------

_EMB_CLASS_CACHE: dict = {}


def emb_classes_cached(g: FeynmanGraph):
    hit = _EMB_CLASS_CACHE.get(g.key)
    if hit is None:
        hit = emb_classes(g)
        _EMB_CLASS_CACHE[g.key] = hit
    return hit


_HOM_CACHE: dict = {}


def hom_set(h: FeynmanGraph, g: FeynmanGraph, budget: int = 10**6):
    """Every graphical map h -> g, duplicate-free and deterministically ordered."""
    ck = (h.key, g.key, budget)
    hit = _HOM_CACHE.get(ck)
    if hit is not None:
        return hit
    out = []
    if not h.vertices:
        a, b = h.arcs
        for x in g.arcs:
            out.append(GraphicalMap(h, g, {a: x, b: g.involution[x]}, {}))
        _HOM_CACHE[ck] = out
        return out
    classes = emb_classes_cached(g)
    hverts = sorted(h.vertices)
    cand = {
        v: [e for e in classes if len(e.source.boundary) == h.arity(v)]
        for v in hverts
    }
    counter = [0]
    results = []

    def extend(idx, arc_map, assignments, covered):
        if idx == len(hverts):
            if not h.boundary and all(
                not e.source.vertices for e in assignments.values()
            ):
                return
            results.append(
                GraphicalMap(h, g, dict(arc_map), dict(assignments))
            )
            return
        v = hverts[idx]
        nb = h.nb(v)
        for emb in cand[v]:
            img = set(emb.vertex_map.values())
            if img & covered:
                continue
            bnd = emb.source.boundary
            for perm in itertools.permutations(bnd):
                counter[0] += 1
                if counter[0] > budget:
                    raise SearchBudgetExceeded(
                        f"hom-set search exceeded {budget} candidates"
                    )
                new_entries = {}
                ok = True
                for a, b in zip(nb, perm):
                    x = emb.arc_map[b]
                    for arc, val in ((h.involution[a], x), (a, g.involution[x])):
                        prev = arc_map.get(arc, new_entries.get(arc))
                        if prev is None:
                            new_entries[arc] = val
                        elif prev != val:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                arc_map.update(new_entries)
                assignments[v] = emb
                extend(idx + 1, arc_map, assignments, covered | img)
                del assignments[v]
                for arc in new_entries:
                    del arc_map[arc]

    extend(0, {}, {}, set())
    results.sort(key=lambda m: m.key)
    _HOM_CACHE[ck] = results
    return results
