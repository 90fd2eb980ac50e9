"""Elementary graphical maps and Reedy factorization.

Cofaces raise the degree by exactly one, codegeneracies lower it by one.
Every map factors as codegeneracies, then an isomorphism, then cofaces;
the factorization peels edge-assignments off the source first and then
lifts through the lexicographically least coface into the target whose
transport reproduces the map on recomposition.
"""

from __future__ import annotations

import enum
import itertools
from typing import Optional

from .embeddings import (
    Embedding,
    canonical_star_embedding,
    edge_class_embedding,
    shape_class_embedding,
    validate_embedding,
)
from .errors import FactorizationFailed, NodelessLoopUnrepresentable, UnknownVertex
from .graphs import FeynmanGraph, _edge_key, edge
from .maps import GraphicalMap, compose, identity_map, validate_graphical_map


class ElementaryKind(enum.Enum):
    Isomorphism = "Isomorphism"
    InnerCoface = "InnerCoface"
    OuterCofaceEmbedding = "OuterCofaceEmbedding"
    EdgeInclusion = "EdgeInclusion"
    Codegeneracy = "Codegeneracy"


def embedding_as_map(emb: Embedding) -> GraphicalMap:
    """The graphical map underlying an embedding: stars at every image vertex."""
    return GraphicalMap(
        emb.source,
        emb.target,
        dict(emb.arc_map),
        {
            v: canonical_star_embedding(emb.target, emb.vertex_map[v])
            for v in emb.source.vertices
        },
    )


def iso_as_map(g: FeynmanGraph, h: FeynmanGraph, arc_map, vertex_map) -> GraphicalMap:
    return embedding_as_map(Embedding(g, h, arc_map, vertex_map))


def as_embedding(phi: GraphicalMap) -> Optional[Embedding]:
    """The underlying embedding when every blow-up is a plain star."""
    vmap = {}
    for v, emb in phi.assignments.items():
        ck = emb.class_key()
        if ck[0] != "shape" or len(ck[1]) != 1 or ck[2]:
            return None
        (w,) = ck[1]
        vmap[v] = w
    cand = Embedding(phi.source, phi.target, dict(phi.arc_map), vmap)
    ok, _ = validate_embedding(cand)
    return cand if ok else None


def classify_elementary(phi: GraphicalMap) -> Optional[ElementaryKind]:
    """Mutually exclusive classification; None for non-elementary maps."""
    ok, _ = validate_graphical_map(phi)
    if not ok:
        return None
    src, tgt = phi.source, phi.target
    edge_assigned, one_edge, stars, bigger = [], [], [], []
    covered = set()
    for v in sorted(src.vertices):
        ck = phi.assignments[v].class_key()
        if ck[0] == "edge":
            edge_assigned.append(v)
            continue
        covered |= ck[1]
        if not ck[2] and len(ck[1]) == 1:
            stars.append(v)
        elif len(ck[2]) == 1:
            one_edge.append(v)
        else:
            bigger.append(v)
    ddiff = tgt.degree() - src.degree()
    if (
        not edge_assigned
        and not one_edge
        and not bigger
        and len(covered) == len(tgt.vertices)
        and len(set(phi.arc_map.values())) == len(tgt.arcs) == len(src.arcs)
    ):
        return ElementaryKind.Isomorphism
    if (
        not src.vertices
        and len(tgt.vertices) == 1
        and not tgt.internal_edges
        and tgt.arcs
    ):
        return ElementaryKind.EdgeInclusion
    if (
        len(edge_assigned) == 1
        and not one_edge
        and not bigger
        and len(covered) == len(tgt.vertices)
        and ddiff == -1
    ):
        return ElementaryKind.Codegeneracy
    if (
        len(one_edge) == 1
        and not edge_assigned
        and not bigger
        and len(covered) == len(tgt.vertices)
        and ddiff == 1
    ):
        return ElementaryKind.InnerCoface
    if not edge_assigned and not one_edge and not bigger and ddiff == 1:
        emb = as_embedding(phi)
        if emb is not None and len(tgt.internal_edges) == len(src.internal_edges) + 1:
            return ElementaryKind.OuterCofaceEmbedding
    return None


# -- contraction and splice --------------------------------------------------


def contract_edge(g: FeynmanGraph, e):
    """Contract an internal edge; endpoints merge (a loop keeps its vertex)."""
    p, q = e
    u, w = g.attach[p], g.attach[q]
    arcs = [a for a in g.arcs if a not in (p, q)]
    if u == w:
        vmap = {v: v for v in g.vertices}
        merged = u
    else:
        merged = min(u, w)
        vmap = {v: (merged if v in (u, w) else v) for v in g.vertices}
    m = FeynmanGraph(
        arcs,
        set(vmap.values()),
        {a: g.involution[a] for a in arcs},
        {a: vmap[g.attach[a]] for a in arcs if a in g.attach},
    )
    return m, vmap, merged


def inner_coface_at(g: FeynmanGraph, e) -> GraphicalMap:
    """The inner coface into g that blows the contraction of e back up."""
    p, q = e
    u, w = g.attach[p], g.attach[q]
    m, vmap, merged = contract_edge(g, e)
    shape_emb = shape_class_embedding(g, {u, w}, [tuple(sorted((p, q)))])
    assignments = {}
    for v in m.vertices:
        if v == merged:
            assignments[v] = shape_emb
        else:
            assignments[v] = canonical_star_embedding(g, v)
    phi = GraphicalMap(m, g, {a: a for a in m.arcs}, assignments)
    ok, why = validate_graphical_map(phi)
    if not ok:
        raise FactorizationFailed(f"inner coface construction failed: {why}")
    return phi


def inner_cofaces_into(g: FeynmanGraph) -> list[GraphicalMap]:
    return [inner_coface_at(g, e) for e in g.internal_edges]


def codegeneracy_at(g: FeynmanGraph, v: str) -> GraphicalMap:
    """Delete an arity-2 vertex, splicing its two edges into one."""
    nb = g.nb(v)
    if v not in g.vertices:
        raise UnknownVertex(v)
    if len(nb) != 2:
        raise FactorizationFailed(f"vertex {v} does not have arity 2")
    p, q = nb
    pd, qd = g.involution[p], g.involution[q]
    if pd == q:
        raise NodelessLoopUnrepresentable(
            "splicing the loop vertex would leave the nodeless loop"
        )
    arcs = [a for a in g.arcs if a not in (p, q)]
    inv = {a: g.involution[a] for a in arcs}
    inv[pd] = qd
    inv[qd] = pd
    attach = {a: g.attach[a] for a in arcs if a in g.attach and a not in (p, q)}
    tgt = FeynmanGraph(arcs, [w for w in g.vertices if w != v], inv, attach)
    arc_map = {a: a for a in arcs}
    arc_map[p] = qd
    arc_map[q] = pd
    assignments = {v: Embedding(edge(), tgt, {"a": pd, "b": qd}, {})}
    for w in tgt.vertices:
        assignments[w] = canonical_star_embedding(tgt, w)
    phi = GraphicalMap(g, tgt, arc_map, assignments)
    ok, why = validate_graphical_map(phi)
    if not ok:
        raise FactorizationFailed(f"codegeneracy construction failed: {why}")
    return phi


def codegeneracies_out_of(g: FeynmanGraph) -> list[GraphicalMap]:
    out = []
    for v in sorted(g.vertices):
        if g.arity(v) != 2:
            continue
        try:
            out.append(codegeneracy_at(g, v))
        except NodelessLoopUnrepresentable:
            continue
    return out


def outer_cofaces_into(g: FeynmanGraph) -> list[GraphicalMap]:
    """Cut one non-bridge edge, drop one pendant vertex, or include an edge."""
    out = []
    if len(g.vertices) == 1 and not g.internal_edges and g.arcs:
        for x in g.arcs:
            emb = edge_class_embedding(g, x)
            out.append(GraphicalMap(emb.source, g, dict(emb.arc_map), {}))
    for e in g.internal_edges:
        rest = [d for d in g.internal_edges if d != e]
        emb = shape_class_embedding(g, g.vertices, rest)
        if emb is not None:
            out.append(embedding_as_map(emb))
    if len(g.vertices) >= 2:
        for w in sorted(g.vertices):
            at_w = [
                e
                for e in g.internal_edges
                if g.attach[e[0]] == w or g.attach[e[1]] == w
            ]
            if len(at_w) != 1:
                continue
            (e,) = at_w
            if g.attach[e[0]] == g.attach[e[1]]:
                continue
            keep = [v for v in g.vertices if v != w]
            rest = [
                d
                for d in g.internal_edges
                if g.attach[d[0]] != w and g.attach[d[1]] != w
            ]
            emb = shape_class_embedding(g, keep, rest)
            if emb is not None:
                out.append(embedding_as_map(emb))
    out.sort(key=lambda m: m.key)
    return out


def elementary_cofaces_into(g: FeynmanGraph) -> list[GraphicalMap]:
    return sorted(inner_cofaces_into(g) + outer_cofaces_into(g), key=lambda m: m.key)


# -- factorization -----------------------------------------------------------


def _residual_after_codegeneracy(phi: GraphicalMap, s: GraphicalMap, v: str):
    m = s.target
    arc_map = {a: phi.arc_map[a] for a in m.arcs}
    assignments = {w: phi.assignments[w] for w in m.vertices}
    rho = GraphicalMap(m, phi.target, arc_map, assignments)
    ok, why = validate_graphical_map(rho)
    if not ok:
        raise FactorizationFailed(f"codegeneracy peel failed: {why}")
    if compose(rho, s).key != phi.key:
        raise FactorizationFailed("codegeneracy peel does not recompose")
    return rho


def _delta_cover(delta: GraphicalMap):
    cover = {}
    for mv, emb in delta.assignments.items():
        for _, u in emb.vertex_map.items():
            cover[u] = mv
    return cover


def _lift_embedding_through(delta: GraphicalMap, e_v: Embedding):
    """An embedding into delta's target re-based over delta's source, or None."""
    m = delta.source
    h = e_v.source
    cover = _delta_cover(delta)
    inner_shapes = {
        mv: emb
        for mv, emb in delta.assignments.items()
        if emb.source.internal_edges
    }
    if not inner_shapes:
        # delta is backed by an embedding f: M -> target with the same vertex names
        f = as_embedding(delta)
        if f is None:
            return None
        f_inv_vertex = {u: mv for mv, u in f.vertex_map.items()}
        vmap, amap = {}, {}
        for xv in h.vertices:
            u = e_v.vertex_map[xv]
            if u not in f_inv_vertex:
                return None
            mv = f_inv_vertex[u]
            vmap[xv] = mv
            for alpha in h.nb(xv):
                hits = [
                    t
                    for t in m.nb(mv)
                    if f.arc_map[t] == e_v.arc_map[alpha]
                ]
                if len(hits) != 1:
                    return None
                amap[alpha] = hits[0]
        for alpha in h.arcs:
            if alpha in amap:
                continue
            p = h.involution[alpha]
            if p not in amap:
                return None
            amap[alpha] = m.involution[amap[p]]
        cand = Embedding(h, m, amap, vmap)
        ok, _ = validate_embedding(cand)
        if not ok:
            return None
        if any(f.arc_map[amap[a]] != e_v.arc_map[a] for a in h.arcs):
            return None
        return cand
    # inner coface: one blow-up shape with a single internal edge
    ((mv_star, shape_emb),) = inner_shapes.items()
    (edge_pair,) = shape_emb.source.internal_edges
    p, q = shape_emb.arc_map[edge_pair[0]], shape_emb.arc_map[edge_pair[1]]
    u1, u2 = delta.target.attach[p], delta.target.attach[q]
    img = set(e_v.vertex_map.values())
    if any(a in (p, q) for a in e_v.arc_map.values()):
        touchers = {u1, u2} & img
        if touchers != {u1, u2} and u1 != u2:
            return None
    if u1 != u2 and len({u1, u2} & img) == 1:
        return None
    if {u1, u2} <= img or (u1 == u2 and u1 in img):
        # the lifted source contracts the preimage of the target edge
        pre_p = [a for a in h.arcs if a in h.attach and e_v.arc_map[a] == p]
        pre_q = [a for a in h.arcs if a in h.attach and e_v.arc_map[a] == q]
        if len(pre_p) != 1 or len(pre_q) != 1:
            return None
        (ap,), (aq,) = pre_p, pre_q
        if h.involution[ap] != aq:
            return None
        hm, hvmap, hmerged = contract_edge(h, _edge_key(ap, aq))
        amap = {a: e_v.arc_map[a] for a in hm.arcs}
        vmap = {}
        for xv in hm.vertices:
            orig = [ov for ov in h.vertices if hvmap[ov] == xv]
            us = {e_v.vertex_map[ov] for ov in orig}
            if xv == hmerged and (us == {u1, u2} or us == {u1}):
                vmap[xv] = mv_star
            else:
                (u,) = us
                vmap[xv] = cover.get(u)
                if vmap[xv] is None:
                    return None
        cand = Embedding(hm, m, amap, vmap)
    else:
        if any(a in (p, q) for a in e_v.arc_map.values()):
            return None
        vmap = {}
        for xv in h.vertices:
            u = e_v.vertex_map[xv]
            mv = cover.get(u)
            if mv is None:
                return None
            vmap[xv] = mv
        cand = Embedding(h, m, dict(e_v.arc_map), vmap)
    ok, _ = validate_embedding(cand)
    return cand if ok else None


def try_lift(phi: GraphicalMap, delta: GraphicalMap) -> Optional[GraphicalMap]:
    """rho with delta o rho == phi, or None when phi does not factor through delta."""
    m = delta.source
    src = phi.source
    if not src.vertices:
        a, b = src.arcs
        want = phi.arc_map[a]
        for x in m.arcs:
            if delta.arc_map[x] != want:
                continue
            rho = GraphicalMap(src, m, {a: x, b: m.involution[x]}, {})
            ok, _ = validate_graphical_map(rho)
            if ok and compose(delta, rho).key == phi.key:
                return rho
        return None
    assignments = {}
    for v in sorted(src.vertices):
        lifted = _lift_embedding_through(delta, phi.assignments[v])
        if lifted is None:
            return None
        assignments[v] = lifted
    arc_map = {}
    for v in sorted(src.vertices):
        emb = assignments[v]
        bnd = emb.source.boundary
        for a in src.nb(v):
            y = phi.arc_map[src.involution[a]]
            hits = [b for b in bnd if delta.arc_map.get(emb.arc_map[b]) == y]
            if len(hits) != 1:
                return None
            val = emb.arc_map[hits[0]]
            for arc, res in ((src.involution[a], val), (a, m.involution[val])):
                if arc_map.setdefault(arc, res) != res:
                    return None
    if set(arc_map) != set(src.arcs):
        return None
    rho = GraphicalMap(src, m, arc_map, assignments)
    ok, _ = validate_graphical_map(rho)
    if not ok:
        return None
    if compose(delta, rho).key != phi.key:
        return None
    return rho


def factorize(phi: GraphicalMap):
    """Split phi into (codegeneracies, cofaces, isomorphism).

    Applying the codegeneracies, then the isomorphism, then the cofaces in
    list order recomposes to phi on the nose.
    """
    ok, why = validate_graphical_map(phi)
    if not ok:
        raise FactorizationFailed(f"cannot factor an invalid map: {why}")
    codegens = []
    cur = phi
    while True:
        vs = [
            v
            for v in sorted(cur.source.vertices)
            if not cur.assignments[v].source.vertices
        ]
        if not vs:
            break
        s = codegeneracy_at(cur.source, vs[0])
        cur = _residual_after_codegeneracy(cur, s, vs[0])
        codegens.append(s)
    cofaces_rev = []
    while cur.source.degree() < cur.target.degree():
        step = None
        for delta in elementary_cofaces_into(cur.target):
            rho = try_lift(cur, delta)
            if rho is not None:
                step = (delta, rho)
                break
        if step is None:
            raise FactorizationFailed("no elementary coface admits a lift")
        cofaces_rev.append(step[0])
        cur = step[1]
    if classify_elementary(cur) is not ElementaryKind.Isomorphism:
        raise FactorizationFailed("residual map after peeling is not an isomorphism")
    return codegens, list(reversed(cofaces_rev)), cur
