"""Graph core: construction, derived data, genus, isomorphism, canonical forms."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from modgraph import (
    BettiUndefined,
    Disconnected,
    FeynmanGraph,
    GenusGraph,
    InvolutionFixedPoint,
    InvolutionNotPairing,
    NodelessLoopUnrepresentable,
    UnknownArcOrVertex,
    UnknownVertex,
    canonical_key,
    canonicalize,
    edge,
    graph_from_json,
    graph_to_json,
    is_isomorphic,
    is_stable,
    isomorphisms,
    new_graph,
    star,
    star_of_graph,
    star_of_vertex,
    total_genus,
)


def test_exceptional_edge():
    e = edge()
    assert len(e.arcs) == 2 and not e.vertices
    assert set(e.boundary) == set(e.arcs)
    assert e.degree() == 0 and e.betti() == 0


def test_star_shapes():
    s4 = star(4)
    assert len(s4.arcs) == 8
    assert len(s4.vertices) == 1
    assert len(s4.boundary) == 4
    s0 = star(0)
    assert not s0.arcs and len(s0.vertices) == 1
    assert star(3).nb("v") == ("1", "2", "3")


def test_paper_figure_graph(paper_figure):
    g = paper_figure
    assert g.internal_edges == (("3", "4"), ("5", "6"))
    assert set(g.boundary) == {"1", "8", "10"}
    assert g.betti() == 1  # the [5,6] edge is a loop at v2
    assert g.degree() == 3


def test_construction_errors():
    with pytest.raises(InvolutionNotPairing):
        new_graph(["a"], [], {})
    with pytest.raises(InvolutionFixedPoint):
        new_graph(["a", "b"], [("a", "a")], {})
    with pytest.raises(UnknownArcOrVertex):
        new_graph(["a", "b"], [("a", "c")], {})
    with pytest.raises(NodelessLoopUnrepresentable):
        new_graph(["a", "b", "c", "d"], [("a", "b"), ("c", "d")], {}, vertices=[])
    with pytest.raises(Disconnected):
        new_graph(
            ["a", "b", "c", "d"],
            [("a", "b"), ("c", "d")],
            {"a": "u", "c": "w"},
        )
    with pytest.raises(UnknownVertex):
        star(2).nb("nope")


def test_boundary_domain_partition(paper_figure, two_stars):
    for g in (paper_figure, two_stars, edge(), star(5)):
        assert len(g.boundary) + len(g.attach) == len(g.arcs)


def test_star_of_vertex(paper_figure):
    s, corr = star_of_vertex(paper_figure, "v2")
    assert len(s.nb("v2")) == 4
    assert not s.internal_edges
    assert s.betti() == 0
    # the correspondence sends attached arcs to themselves and fresh legs to partners
    for a in paper_figure.nb("v2"):
        assert corr[a] == a


def test_star_of_graph():
    s = star_of_graph(edge())
    assert len(s.vertices) == 1 and len(s.nb("v")) == 2
    assert is_isomorphic(star_of_graph(star(3)), star(3))


def test_degree_and_betti(two_vertex_loop, vertex_loop):
    assert two_vertex_loop.betti() == 1
    assert two_vertex_loop.degree() == 3
    assert vertex_loop.betti() == 1
    assert star(7).degree() == 1
    assert star(0).degree() == 1
    assert edge().degree() == 0
    with pytest.raises(BettiUndefined):
        FeynmanGraph(
            ["a", "b", "c", "d"],
            ["u", "w"],
            {"a": "b", "b": "a", "c": "d", "d": "c"},
            {"a": "u", "c": "w"},
        ).betti()


def test_genus_figure():
    # big vertex of genus 4 with a loop and two legs, joined to a genus-1 and a
    # genus-2 vertex sitting on a 2-cycle
    g = new_graph(
        arcs=["l", "l*", "x", "x*", "y", "y*", "p", "q", "r", "s", "t", "u"],
        involution_pairs=[("l", "l*"), ("x", "x*"), ("y", "y*"), ("p", "q"), ("r", "s"), ("t", "u")],
        attach={
            "l": "v1", "l*": "v1", "x": "v1", "y": "v1", "p": "v1",
            "q": "v2", "r": "v2", "u": "v2",
            "s": "v3", "t": "v3",
        },
    )
    assert g.betti() == 2
    gg = GenusGraph(g, {"v1": 4, "v2": 1, "v3": 2})
    assert total_genus(gg) == 9


def test_stability():
    e = GenusGraph(edge(), {})
    assert total_genus(e) == 0 and is_stable(e)
    s2 = GenusGraph(star(2), {"v": 0})
    assert not is_stable(s2)  # 2*0 + 2 - 2 = 0 is not > 0
    assert is_stable(GenusGraph(star(2), {"v": 1}))
    assert is_stable(GenusGraph(star(3), {"v": 0}))


def _edge_bijection_automorphisms(g):
    """Independent oracle: automorphisms via edge bijections plus flips."""
    es = g.edges
    count = 0
    for perm in itertools.permutations(range(len(es))):
        for flips in itertools.product((False, True), repeat=len(es)):
            amap = {}
            for k, (a, b) in enumerate(es):
                c, d = es[perm[k]]
                if flips[k]:
                    c, d = d, c
                amap[a], amap[b] = c, d
            if any(amap[g.involution[a]] != g.involution[amap[a]] for a in g.arcs):
                continue
            vmap = {}
            good = True
            for a in g.arcs:
                va, wa = g.attach.get(a), g.attach.get(amap[a])
                if (va is None) != (wa is None):
                    good = False
                    break
                if va is not None:
                    if vmap.setdefault(va, wa) != wa:
                        good = False
                        break
            if good and len(set(vmap.values())) == len(vmap):
                count += 1
    return count


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4, 5])
def test_star_automorphism_count(n):
    expected = _edge_bijection_automorphisms(star(n))
    got = len(isomorphisms(star(n), star(n)))
    assert got == expected
    import math

    assert got == math.factorial(n)


def test_edge_automorphisms():
    assert len(isomorphisms(edge(), edge())) == 2


def test_not_isomorphic():
    assert not is_isomorphic(star(2), edge())
    assert not is_isomorphic(star(2), star(3))


def test_canonical_form_identifies_isomorphic(two_stars):
    relabeled = new_graph(
        arcs=["z" + a for a in two_stars.arcs],
        involution_pairs=[("z" + a, "z" + b) for a, b in two_stars.edges],
        attach={"z" + a: "V" + v for a, v in two_stars.attach.items()},
    )
    assert canonical_key(two_stars) == canonical_key(relabeled)
    cg, amap, vmap = canonicalize(two_stars)
    assert sorted(amap) == sorted(two_stars.arcs)
    assert sorted(vmap) == sorted(two_stars.vertices)


def test_json_round_trip(paper_figure):
    doc = graph_to_json(paper_figure)
    back = graph_from_json(doc)
    assert back == paper_figure
    gg = GenusGraph(star(3), {"v": 2})
    doc2 = graph_to_json(gg.graph, gg.genus)
    back2 = graph_from_json(doc2)
    assert isinstance(back2, GenusGraph)
    assert back2.genus == {"v": 2}


# -- random graphs ------------------------------------------------------------


@st.composite
def connected_graphs(draw):
    nv = draw(st.integers(min_value=1, max_value=3))
    arities = [draw(st.integers(min_value=1, max_value=3)) for _ in range(nv)]
    slots = [(v, k) for v in range(nv) for k in range(arities[v])]
    pairs = []
    pool = list(slots)
    while len(pool) >= 2 and draw(st.booleans()):
        i = draw(st.integers(min_value=0, max_value=len(pool) - 1))
        a = pool.pop(i)
        j = draw(st.integers(min_value=0, max_value=len(pool) - 1))
        pairs.append((a, pool.pop(j)))
    name = {s: f"s{s[0]}_{s[1]}" for s in slots}
    arcs = [name[s] for s in slots]
    ip = [(name[a], name[b]) for a, b in pairs]
    att = {name[s]: f"v{s[0]}" for s in slots}
    used = {s for p in pairs for s in p}
    for s in slots:
        if s not in used:
            arcs.append(name[s] + "*")
            ip.append((name[s], name[s] + "*"))
    try:
        return new_graph(arcs, ip, att, vertices=[f"v{k}" for k in range(nv)])
    except Disconnected:
        return star(draw(st.integers(min_value=0, max_value=3)))


@given(connected_graphs())
@settings(max_examples=60, deadline=None)
def test_graph_invariants(g):
    for a in g.arcs:
        assert g.involution[g.involution[a]] == a
        assert g.involution[a] != a
    assert len(g.boundary) + len(g.attach) == len(g.arcs)
    cg, amap, _ = canonicalize(g)
    assert canonical_key(cg) == canonical_key(g)
    assert len(set(amap.values())) == len(g.arcs)


@given(connected_graphs())
@settings(max_examples=30, deadline=None)
def test_genus_invariance_under_isomorphism(g):
    genus = {v: (hash(v) % 3) for v in g.vertices}
    gg = GenusGraph(g, genus)
    for amap, vmap in isomorphisms(g, g)[:6]:
        transported = {vmap[v]: genus[v] for v in g.vertices}
        gg2 = GenusGraph(g, transported)
        assert total_genus(gg2) == total_genus(gg)
        assert is_stable(gg2) == is_stable(gg)
