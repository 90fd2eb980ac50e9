"""Finite presheaves on the graphical category: Segal and inner-Kan checkers.

Presheaves are carried on a finite corpus of canonical graphs (bounded
degree, vertex arity and boundary size; the theorems under test are local
to the carried range).  Representables act by precomposition, nerves by
decoration restriction.  The Segal limit glues star values along internal
edges, including loop edges at a single vertex; horns are generated by
the elementary cofaces into a graph minus one inner coface.
"""

from __future__ import annotations

import itertools
from typing import Callable, Optional

from .elementary import (
    codegeneracy_at,
    elementary_cofaces_into,
    embedding_as_map,
    inner_cofaces_into,
    iso_as_map,
)
from .embeddings import Embedding, canonical_star_embedding
from .errors import NotSegal, ProfileMismatch
from .graphs import (
    FeynmanGraph,
    canonicalize,
    edge,
    isomorphisms,
    star,
)
from .maps import GraphicalMap, compose, compose_cached, hom_set
from .operads import (
    ColourSet,
    Decoration,
    ModularOperad,
    decorations,
    permute,
    restrict,
)

# -- carrier generation -------------------------------------------------------

_CARRIER_CACHE: dict = {}


def make_carrier(
    degree_bound: int = 4,
    max_arity: int = 3,
    max_boundary: int = 3,
    face_closed: bool = True,
):
    """All canonical connected graphs within the finiteness caps, plus the edge.

    With ``face_closed`` the family is closed under taking sources of
    elementary cofaces (contractions can merge arities past the seed cap),
    and contains the star of every arity that occurs; horn checks need the
    face sources present.
    """
    key = (degree_bound, max_arity, max_boundary, face_closed)
    hit = _CARRIER_CACHE.get(key)
    if hit is not None:
        return hit
    out = {canonicalize(edge())[0].key: canonicalize(edge())[0]}
    max_edges = degree_bound - 1
    for nv in range(1, degree_bound + 1):
        for arities in itertools.combinations_with_replacement(
            range(0 if nv == 1 else 1, max_arity + 1), nv
        ):
            slots = []
            for v, k in enumerate(arities):
                slots += [(v, t) for t in range(k)]
            if len(slots) < 2 * (nv - 1):
                continue
            for pairs in _matchings(slots, nv - 1, max_edges, max_boundary):
                g = _graph_from_matching(nv, arities, slots, pairs)
                if g is None or not g.is_connected() or g.degree() > degree_bound:
                    continue
                cg = canonicalize(g)[0]
                out.setdefault(cg.key, cg)
    if face_closed:
        frontier = list(out.values())
        while frontier:
            nxt = []
            for g in frontier:
                for m in elementary_cofaces_into(g):
                    cg = canonicalize(m.source)[0]
                    if cg.key not in out:
                        out[cg.key] = cg
                        nxt.append(cg)
            frontier = nxt
        top = max(
            [0] + [g.arity(v) for g in out.values() for v in g.vertices]
        )
        for n in range(top + 1):
            cg = canonicalize(star(n))[0]
            out.setdefault(cg.key, cg)
    carrier = sorted(out.values(), key=lambda g: g.key)
    _CARRIER_CACHE[key] = carrier
    return carrier


def _matchings(slots, min_pairs, max_pairs, max_unpaired):
    results = []

    def rec(remaining, pairs, unpaired):
        if len(pairs) > max_pairs or unpaired > max_unpaired:
            return
        if not remaining:
            if len(pairs) >= min_pairs:
                results.append(tuple(pairs))
            return
        s0 = remaining[0]
        rest = remaining[1:]
        rec(rest, pairs, unpaired + 1)
        for k, s1 in enumerate(rest):
            rec(rest[:k] + rest[k + 1 :], pairs + [(s0, s1)], unpaired)

    rec(list(slots), [], 0)
    return results


def _graph_from_matching(nv, arities, slots, pairs):
    name = {s: f"s{s[0]}_{s[1]}" for s in slots}
    paired = {s for p in pairs for s in p}
    arcs, ip, attach = [], [], {}
    for s in slots:
        arcs.append(name[s])
        attach[name[s]] = f"v{s[0]}"
    for (s0, s1) in pairs:
        ip.append((name[s0], name[s1]))
    for s in slots:
        if s not in paired:
            arcs.append(name[s] + "*")
            ip.append((name[s], name[s] + "*"))
    try:
        return FeynmanGraph.build(
            arcs, ip, attach, vertices=[f"v{k}" for k in range(nv)], require_connected=False
        )
    except Exception:
        return None


# -- presheaves ----------------------------------------------------------------


class FinPresheaf:
    """Finite contravariant assignment on a carried family of canonical graphs."""

    def __init__(self, graphs, values, action_fn: Callable, name: str = "presheaf"):
        self.graphs = list(graphs)
        self._values = {g.key: tuple(values[g.key]) for g in self.graphs}
        self._action_fn = action_fn
        self.name = name
        self._memo: dict = {}

    def carries(self, g: FeynmanGraph) -> bool:
        return g.key in self._values

    def value(self, g: FeynmanGraph):
        return self._values[g.key]

    def action(self, phi: GraphicalMap, x):
        mk = (phi.key, _xkey(x))
        hit = self._memo.get(mk)
        if hit is None:
            hit = self._action_fn(phi, x)
            self._memo[mk] = hit
        return hit

    def __repr__(self):
        return f"FinPresheaf({self.name}, |carrier|={len(self.graphs)})"


def _xkey(x):
    return x.key if hasattr(x, "key") else x


def representable(
    g: FeynmanGraph,
    degree_bound: int = 4,
    carrier=None,
    max_arity: Optional[int] = None,
    budget: int = 10**6,
) -> FinPresheaf:
    """U[g]: the hom-sets into g, acting by precomposition."""
    if carrier is None:
        cap = max_arity if max_arity is not None else max(
            [2] + [g.arity(v) for v in g.vertices]
        )
        carrier = make_carrier(degree_bound, cap, max(2, len(g.boundary)))
    values = {h.key: hom_set(h, g, budget) for h in carrier}
    return FinPresheaf(
        carrier, values, lambda phi, x: compose(x, phi), name=f"U[{g!r}]"
    )


def nerve_presheaf(
    p: ModularOperad, degree_bound: int = 4, carrier=None, max_arity: int = 3
) -> FinPresheaf:
    """NP: decorations of each carried graph, acting by restriction."""
    if carrier is None:
        carrier = make_carrier(degree_bound, max_arity, max_arity)
    values = {g.key: decorations(p, g) for g in carrier}
    return FinPresheaf(
        carrier, values, lambda phi, x: restrict(p, phi, x), name=f"N({p.name})"
    )


# -- star and edge legs --------------------------------------------------------


def _carried_star_map(x: FinPresheaf, g: FeynmanGraph, v: str) -> GraphicalMap:
    """The star inclusion at v, re-sourced at the canonical star graph."""
    emb = canonical_star_embedding(g, v)
    incl = embedding_as_map(emb)
    cstar = canonicalize(star(g.arity(v)))[0]
    if not x.carries(cstar):
        raise ProfileMismatch(f"carrier misses the star of arity {g.arity(v)}")
    iso = isomorphisms(cstar, emb.source)[0]
    return compose(incl, iso_as_map(cstar, emb.source, *iso))


def _edge_object(x: FinPresheaf) -> FeynmanGraph:
    e = canonicalize(edge())[0]
    if not x.carries(e):
        raise ProfileMismatch("carrier misses the exceptional edge")
    return e


def _edge_leg(e0, star_map: GraphicalMap, g_arc: str, reversed_: bool) -> GraphicalMap:
    """Edge inclusion into the star underlying ``star_map`` hitting ``g_arc``."""
    cstar = star_map.source
    hits = [
        s
        for s in cstar.arcs
        if s in cstar.attach and star_map.arc_map[s] == g_arc
    ]
    (slot,) = hits
    a0, a1 = e0.arcs
    if reversed_:
        return GraphicalMap(e0, cstar, {a0: cstar.involution[slot], a1: slot}, {})
    return GraphicalMap(e0, cstar, {a0: slot, a1: cstar.involution[slot]}, {})


def segal_limit(x: FinPresheaf, g: FeynmanGraph):
    """X^1_G: tuples of star values agreeing along every internal edge."""
    verts = sorted(g.vertices)
    if not verts:
        return [(val,) for val in x.value(_edge_object(x))]
    e0 = _edge_object(x)
    star_maps = {v: _carried_star_map(x, g, v) for v in verts}
    conditions = []
    for (a, b) in g.internal_edges:
        v, w = g.attach[a], g.attach[b]
        alpha = _edge_leg(e0, star_maps[v], a, reversed_=False)
        beta = _edge_leg(e0, star_maps[w], b, reversed_=True)
        conditions.append((verts.index(v), alpha, verts.index(w), beta))
    pools = [x.value(star_maps[v].source) for v in verts]
    out = []
    for combo in itertools.product(*pools):
        if all(
            x.action(alpha, combo[i]) == x.action(beta, combo[j])
            for (i, alpha, j, beta) in conditions
        ):
            out.append(tuple(combo))
    return out


def segal_map(x: FinPresheaf, g: FeynmanGraph) -> dict:
    """The map X_G -> X^1_G as an explicit value table."""
    verts = sorted(g.vertices)
    if not verts:
        return {_xkey(val): (val,) for val in x.value(g)}
    star_maps = {v: _carried_star_map(x, g, v) for v in verts}
    return {
        _xkey(val): tuple(x.action(star_maps[v], val) for v in verts)
        for val in x.value(g)
    }


def is_strict_segal(x: FinPresheaf):
    """(ok, witnesses): the Segal map must be a bijection for every carried graph."""
    witnesses = []
    for g in x.graphs:
        if not g.vertices:
            continue
        limit = segal_limit(x, g)
        table = segal_map(x, g)
        tuples = list(table.values())
        if len(set(map(_tupkey, tuples))) != len(tuples):
            witnesses.append((g, "segal map not injective"))
            continue
        lim_keys = {_tupkey(t) for t in limit}
        img_keys = {_tupkey(t) for t in tuples}
        if img_keys != lim_keys:
            witnesses.append((g, "segal map not onto the limit"))
    return (not witnesses), witnesses


def _tupkey(t):
    return tuple(_xkey(c) for c in t)


# -- horns ----------------------------------------------------------------------


class Horn:
    """Sub-presheaf of U[G] generated by every elementary coface except delta."""

    def __init__(self, base: FeynmanGraph, omitted: GraphicalMap, generators):
        self.base = base
        self.omitted = omitted
        self.generators = list(generators)

    def __repr__(self):
        return f"Horn({self.base!r}, |generators|={len(self.generators)})"


def horn(g: FeynmanGraph, delta: GraphicalMap, carrier=None) -> Horn:
    gens = []
    for gamma in elementary_cofaces_into(g):
        if gamma.key == delta.key:
            continue
        gens.append(gamma)
    if carrier is not None:
        gens = [_resource_to_carrier(gamma, carrier) for gamma in gens]
        gens = [gamma for gamma in gens if gamma is not None]
    return Horn(g, delta, gens)


def _resource_to_carrier(gamma: GraphicalMap, carrier) -> Optional[GraphicalMap]:
    cg, _, _ = canonicalize(gamma.source)
    carried = next((h for h in carrier if h.key == cg.key), None)
    if carried is None:
        return None
    iso = isomorphisms(carried, gamma.source)[0]
    return compose(gamma, iso_as_map(carried, gamma.source, *iso))


_SKELETON_CACHE: dict = {}


def _horn_skeleton(g: FeynmanGraph, gens, carrier):
    """Constraint groups: cells (generator, rho) sharing the same composite into g.

    Depends only on the horn and the carrier, so it is cached and shared by
    every presheaf checked against the same corpus.
    """
    cache_key = (g.key, tuple(m.key for m in gens), tuple(k.key for k in carrier))
    hit = _SKELETON_CACHE.get(cache_key)
    if hit is not None:
        return hit
    groups: dict = {}
    for k in carrier:
        for idx, gamma in enumerate(gens):
            for rho in hom_set(k, gamma.source):
                ck = compose_cached(gamma, rho).key
                groups.setdefault(ck, []).append((idx, rho))
    out = [cells for cells in groups.values() if len(cells) > 1]
    _SKELETON_CACHE[cache_key] = out
    return out


def has_unique_filler(x: FinPresheaf, h: Horn, carrier=None) -> bool:
    """Every compatible family of generator values extends to exactly one element."""
    carrier = carrier if carrier is not None else x.graphs
    gens = h.generators
    if not gens:
        return True
    skeleton = _horn_skeleton(h.base, gens, carrier)
    by_last: dict[int, list] = {}
    for cells in skeleton:
        last = max(idx for idx, _ in cells)
        by_last.setdefault(last, []).append(cells)
    pools = [x.value(gamma.source) for gamma in gens]
    fill_count: dict = {}
    for val in x.value(h.base):
        fk = tuple(_xkey(x.action(gamma, val)) for gamma in gens)
        fill_count[fk] = fill_count.get(fk, 0) + 1

    ok = [True]

    def extend(idx, family):
        if not ok[0]:
            return
        if idx == len(gens):
            if fill_count.get(tuple(_xkey(v) for v in family), 0) != 1:
                ok[0] = False
            return
        for val in pools[idx]:
            good = True
            for cells in by_last.get(idx, []):
                vals = {
                    _xkey(x.action(rho, family[i] if i < idx else val))
                    for (i, rho) in cells
                    if i <= idx
                }
                if len(vals) > 1:
                    good = False
                    break
            if good:
                extend(idx + 1, family + [val])

    extend(0, [])
    return ok[0]


def is_strict_inner_kan(x: FinPresheaf):
    """(ok, witnesses): unique fillers for every inner horn of every carried graph."""
    witnesses = []
    for g in x.graphs:
        for delta in inner_cofaces_into(g):
            h = horn(g, delta, carrier=x.graphs)
            if not has_unique_filler(x, h):
                witnesses.append((g, delta))
    return (not witnesses), witnesses


# -- corrupted presheaves --------------------------------------------------------


class OverlayPresheaf(FinPresheaf):
    """A presheaf table with targeted corruptions, for negative testing."""

    def __init__(self, base: FinPresheaf, deleted=(), extras=(), redirects=(), name="corrupt"):
        self.base = base
        self.deleted = {(gk, _xkey(v)) for gk, v in deleted}
        self.extras = {}
        for gk, z, donor in extras:
            self.extras.setdefault(gk, []).append((z, donor))
        self.redirects = {(mk, _xkey(v)): out for (mk, v, out) in redirects}
        self.graphs = base.graphs
        self.name = name
        self._memo = {}

    def carries(self, g):
        return self.base.carries(g)

    def value(self, g):
        vals = [
            v
            for v in self.base.value(g)
            if (g.key, _xkey(v)) not in self.deleted
        ]
        vals += [z for (z, _) in self.extras.get(g.key, [])]
        return tuple(vals)

    def action(self, phi, v):
        key = (phi.key, _xkey(v))
        if key in self.redirects:
            return self.redirects[key]
        for (z, donor) in self.extras.get(phi.target.key, []):
            if _xkey(v) == _xkey(z):
                if phi.source.key == phi.target.key and all(
                    a == b for a, b in phi.arc_map.items()
                ):
                    return v
                return self.base.action(phi, donor)
        return self.base.action(phi, v)


# -- extraction -------------------------------------------------------------------


def _two_star_graph(n, m, i, j):
    """Two stars of arities n, m joined along slots i of the first, j of the second."""
    arcs, ip, attach = [], [], {}
    for k in range(n):
        attach[f"L{k}"] = "vL"
        arcs.append(f"L{k}")
    for k in range(m):
        attach[f"R{k}"] = "vR"
        arcs.append(f"R{k}")
    ip.append((f"L{i}", f"R{j}"))
    for k in range(n):
        if k != i:
            arcs.append(f"L{k}*")
            ip.append((f"L{k}", f"L{k}*"))
    for k in range(m):
        if k != j:
            arcs.append(f"R{k}*")
            ip.append((f"R{k}", f"R{k}*"))
    return FeynmanGraph.build(arcs, ip, attach, vertices=["vL", "vR"])


def _loop_star_graph(n, i, j):
    """A star of arity n whose slots i < j close into a loop."""
    arcs, ip, attach = [], [], {}
    for k in range(n):
        attach[f"L{k}"] = "v"
        arcs.append(f"L{k}")
    ip.append((f"L{i}", f"L{j}"))
    for k in range(n):
        if k not in (i, j):
            arcs.append(f"L{k}*")
            ip.append((f"L{k}", f"L{k}*"))
    return FeynmanGraph.build(arcs, ip, attach, vertices=["v"])


class _StarFrame:
    """Slot bookkeeping for a carried star: slots in sorted D-arc order."""

    def __init__(self, cstar: FeynmanGraph):
        self.graph = cstar
        self.slots = tuple(a for a in cstar.arcs if a in cstar.attach)

    def reader(self, e0, k) -> GraphicalMap:
        a0, a1 = e0.arcs
        s = self.slots[k]
        return GraphicalMap(e0, self.graph, {a0: s, a1: self.graph.involution[s]}, {})

    def automorphism(self, perm) -> GraphicalMap:
        amap = {}
        for k, s in enumerate(self.slots):
            t = self.slots[perm[k]]
            amap[s] = t
            amap[self.graph.involution[s]] = self.graph.involution[t]
        v = self.graph.vertices[0]
        return GraphicalMap(
            self.graph,
            self.graph,
            amap,
            {v: canonical_star_embedding(self.graph, v)},
        )


def _vertex_map_into(frame: _StarFrame, g: FeynmanGraph, v: str, slot_arcs):
    """Map frame's star into g sending slot k to slot_arcs[k] at vertex v."""
    amap = {}
    for k, s in enumerate(frame.slots):
        amap[s] = slot_arcs[k]
        amap[frame.graph.involution[s]] = g.involution[slot_arcs[k]]
    return GraphicalMap(
        frame.graph,
        g,
        amap,
        {frame.graph.vertices[0]: canonical_star_embedding(g, v)},
    )


def _whole_graph_map(frame: _StarFrame, g: FeynmanGraph, boundary_order):
    """Map from the star of g's boundary to g, blowing the vertex up to all of g."""
    ident = Embedding(
        g, g, {a: a for a in g.arcs}, {v: v for v in g.vertices}
    )
    amap = {}
    for k, s in enumerate(frame.slots):
        b = boundary_order[k]
        amap[frame.graph.involution[s]] = b
        amap[s] = g.involution[b]
    v0 = frame.graph.vertices[0]
    return GraphicalMap(frame.graph, g, amap, {v0: ident})


def extract_modular_operad(x: FinPresheaf, max_arity: Optional[int] = None) -> ModularOperad:
    """Rebuild the modular operad presented by a strictly Segal presheaf."""
    ok, wit = is_strict_segal(x)
    if not ok:
        raise NotSegal(f"presheaf is not strictly Segal: {wit[0][1]} at {wit[0][0]!r}")
    e0 = _edge_object(x)
    colours_raw = list(x.value(e0))
    cname = {_xkey(c): f"c{k}" for k, c in enumerate(colours_raw)}
    by_name = {cname[_xkey(c)]: c for c in colours_raw}
    a0, a1 = e0.arcs
    swap = GraphicalMap(e0, e0, {a0: a1, a1: a0}, {})
    dagger = {
        cname[_xkey(c)]: cname[_xkey(x.action(swap, c))] for c in colours_raw
    }
    cs = ColourSet(list(by_name), dagger)
    frames = {}
    arity = 0
    while True:
        cstar = canonicalize(star(arity))[0]
        if not x.carries(cstar):
            break
        frames[arity] = _StarFrame(cstar)
        arity += 1
    top = arity - 1
    if max_arity is not None:
        top = min(top, max_arity)

    entries: dict = {}
    elem_profile: dict = {}
    for n in range(top + 1):
        fr = frames[n]
        readers = [fr.reader(e0, k) for k in range(n)]
        for val in x.value(fr.graph):
            prof = tuple(cname[_xkey(x.action(r, val))] for r in readers)
            entries.setdefault(prof, []).append(val)
            elem_profile[(n, _xkey(val))] = prof
    for n in range(top + 1):
        for prof in itertools.product(cs.colours, repeat=n):
            entries.setdefault(prof, [])

    sigma_table = {}

    def sigma_fn(profile, perm, v):
        key = (profile, perm, _xkey(v))
        if key not in sigma_table:
            fr = frames[len(profile)]
            sigma_table[key] = x.action(fr.automorphism(perm), v)
        return sigma_table[key]

    units = {}
    fr2 = frames[2]
    s_map = codegeneracy_at(fr2.graph, fr2.graph.vertices[0])
    iso = isomorphisms(e0, s_map.target)[0]
    s_to_e0 = compose(iso_as_map(s_map.target, e0, *_invert_iso(iso)), s_map)
    for c in colours_raw:
        u = x.action(s_to_e0, c)
        prof = elem_profile[(2, _xkey(u))]
        want = (cs.dual(cname[_xkey(c)]), cname[_xkey(c)])
        if prof != want:
            u = sigma_fn(prof, (1, 0), u)
            prof = permute(prof, (1, 0))
        if prof != want:
            raise NotSegal("unit extraction produced an inconsistent profile")
        units[cname[_xkey(c)]] = u

    comp_table = {}
    contract_table = {}

    def seg_inverse(g, star_frames_and_maps, parts):
        for cand in x.value(g):
            if all(
                _xkey(x.action(m, cand)) == _xkey(v)
                for (m, v) in zip(star_frames_and_maps, parts)
            ):
                return cand
        raise NotSegal("missing Segal preimage during extraction")

    def comp_fn(p1, v1, i, p2, v2, j):
        key = (p1, i, p2, j, _xkey(v1), _xkey(v2))
        if key in comp_table:
            return comp_table[key]
        n, m = len(p1), len(p2)
        raw = _two_star_graph(n, m, i, j)
        cg, amap, vmap = canonicalize(raw)
        if not x.carries(cg):
            raise ProfileMismatch("carrier misses a two-star gluing graph")
        carried = cg
        left = _vertex_map_into(
            frames[n], carried, vmap["vL"], [amap[f"L{k}"] for k in range(n)]
        )
        right = _vertex_map_into(
            frames[m], carried, vmap["vR"], [amap[f"R{k}"] for k in range(m)]
        )
        z = seg_inverse(carried, [left, right], [v1, v2])
        border = [amap[f"L{k}*"] for k in range(n) if k != i] + [
            amap[f"R{k}*"] for k in range(m) if k != j
        ]
        mu = _whole_graph_map(frames[n + m - 2], carried, border)
        out = x.action(mu, z)
        comp_table[key] = out
        return out

    def contract_fn(profile, v, i, j):
        key = (profile, i, j, _xkey(v))
        if key in contract_table:
            return contract_table[key]
        n = len(profile)
        raw = _loop_star_graph(n, i, j)
        cg, amap, vmap = canonicalize(raw)
        if not x.carries(cg):
            raise ProfileMismatch("carrier misses a loop-star graph")
        chi = _vertex_map_into(
            frames[n], cg, vmap["v"], [amap[f"L{k}"] for k in range(n)]
        )
        z = seg_inverse(cg, [chi], [v])
        border = [amap[f"L{k}*"] for k in range(n) if k not in (i, j)]
        mu = _whole_graph_map(frames[n - 2], cg, border)
        out = x.action(mu, z)
        contract_table[key] = out
        return out

    out = ModularOperad(
        cs,
        top,
        entries,
        units,
        sigma_fn,
        comp_fn,
        contract_fn,
        name=f"extract({x.name})",
    )
    out.colour_elements = dict(by_name)
    return out


def nerve_extract_correspondence(p: ModularOperad, x: FinPresheaf, q: ModularOperad):
    """Canonical (colour_map, entry_maps) between p and extract(nerve(p)).

    A colour goes to the name of the edge decoration reading it on the first
    arc; an entry goes to the star decoration carrying it as the label.
    """
    e0 = _edge_object(x)
    a0 = e0.arcs[0]
    colour_map = {}
    for name, raw in q.colour_elements.items():
        colour_map[raw.colouring[a0]] = name
    entry_maps = {}
    for prof in p.profiles():
        if len(prof) > q.max_arity:
            continue
        tprof = tuple(colour_map[c] for c in prof)
        em = {}
        for val in p.entry(prof):
            hits = [d for d in q.entry(tprof) if list(d.labels.values()) == [val]]
            if len(hits) != 1:
                raise NotSegal(f"no unique counterpart for {val!r} at {prof}")
            em[val] = hits[0]
        entry_maps[prof] = em
    return colour_map, entry_maps


def _invert_iso(iso):
    amap, vmap = iso
    return ({b: a for a, b in amap.items()}, {w: v for v, w in vmap.items()})
