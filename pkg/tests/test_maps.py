"""Graphical maps: validation, hom-set enumeration against oracles, composition."""

import itertools

import pytest

from modgraph import (
    CompositionIncompatible,
    Embedding,
    GraphicalMap,
    SearchBudgetExceeded,
    compose,
    edge,
    edge_class_embedding,
    hom_set,
    identity_map,
    is_isomorphic,
    new_graph,
    star,
    validate_graphical_map,
)
from modgraph.maps import compose_chain


def test_identity_validates(two_stars):
    ok, why = validate_graphical_map(identity_map(two_stars))
    assert ok, why
    ok, why = validate_graphical_map(identity_map(edge()))
    assert ok, why


def test_boundaryless_all_edges_invalid(two_vertex_loop):
    g = two_vertex_loop
    tgt = g
    # assign both vertices to edge classes: forbidden for a closed source
    e1 = edge_class_embedding(tgt, g.internal_edges[0][0])
    e2 = edge_class_embedding(tgt, g.internal_edges[1][0])
    arc_map = {}
    for a in g.arcs:
        arc_map[a] = a
    phi = GraphicalMap(g, tgt, arc_map, {"v": e1, "w": e2})
    ok, why = validate_graphical_map(phi)
    assert not ok


def _raw_involutive_maps(h, g):
    """Oracle for edge-source homs: involutive arc maps, counted directly."""
    count = 0
    for x in g.arcs:
        f = {h.arcs[0]: x, h.arcs[1]: g.involution[x]}
        if all(f[h.involution[a]] == g.involution[f[a]] for a in h.arcs):
            count += 1
    return count


def test_hom_edge_to_edge():
    assert _raw_involutive_maps(edge(), edge()) == 2
    assert len(hom_set(edge(), edge())) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_hom_edge_to_star(n):
    assert len(hom_set(edge(), star(n))) == _raw_involutive_maps(edge(), star(n)) == 2 * n


def test_hom_isomorphism_equivariance(two_stars):
    relabeled = new_graph(
        arcs=["Q" + a for a in two_stars.arcs],
        involution_pairs=[("Q" + a, "Q" + b) for a, b in two_stars.edges],
        attach={"Q" + a: v for a, v in two_stars.attach.items()},
    )
    for h in (edge(), star(3)):
        assert len(hom_set(h, two_stars)) == len(hom_set(h, relabeled))


def test_hom_budget(two_stars):
    with pytest.raises(SearchBudgetExceeded):
        hom_set(two_stars, two_stars, budget=2)


def test_hom_no_duplicates(two_stars, chain3):
    for h, g in [(chain3, two_stars), (star(3), two_stars), (two_stars, two_stars)]:
        homs = hom_set(h, g)
        keys = [m.key for m in homs]
        assert len(keys) == len(set(keys))
        for m in homs:
            ok, why = validate_graphical_map(m)
            assert ok, why


def test_not_full_behaviour(cycle4, two_vertex_loop):
    homs = hom_set(cycle4, two_vertex_loop)
    # no graphical map can place all four vertices on the two target stars
    for phi in homs:
        star_targets = []
        for v in cycle4.vertices:
            ck = phi.assignments[v].class_key()
            if ck[0] == "shape" and not ck[2] and len(ck[1]) == 1:
                star_targets.append(next(iter(ck[1])))
        assert len(star_targets) < 4


def test_compose_identity(two_stars):
    phi = hom_set(star(3), two_stars)[0]
    assert compose(phi, identity_map(star(3))).key == phi.key
    assert compose(identity_map(two_stars), phi).key == phi.key


def test_compose_two_outer_cofaces():
    # gluing two pairs of legs one at a time adds two internal edges
    s4 = star(4)
    from modgraph import outer_cofaces_into

    g1 = new_graph(
        arcs=["1", "2", "3", "4", "1*", "2*"],
        involution_pairs=[("1", "1*"), ("2", "2*"), ("3", "4")],
        attach={k: "v" for k in "1234"},
    )
    d1 = [m for m in outer_cofaces_into(g1) if not m.source.internal_edges]
    assert d1
    first = d1[0]
    assert is_isomorphic(first.source, s4)
    g2 = new_graph(
        arcs=["1", "2", "3", "4"],
        involution_pairs=[("1", "2"), ("3", "4")],
        attach={k: "v" for k in "1234"},
    )
    d2 = [m for m in outer_cofaces_into(g2) if len(m.source.internal_edges) == 1]
    second = d2[0]
    lift = hom_set(first.source, second.source)
    comps = [compose(second, m) for m in lift if compose(second, m)]
    assert any(
        len(c.target.internal_edges) == len(c.source.internal_edges) + 2
        for c in comps
    )


def test_compose_incompatible(two_stars):
    phi = identity_map(star(3))
    psi = identity_map(two_stars)
    with pytest.raises(CompositionIncompatible):
        compose(psi, phi)


def test_composition_associative(two_stars, chain3):
    corpus = [edge(), star(2), star(3), chain3, two_stars]
    triples = 0
    for a, b in itertools.product(corpus, repeat=2):
        for f in hom_set(a, b)[:4]:
            for c in corpus:
                for g in hom_set(b, c)[:4]:
                    for d in corpus:
                        for h in hom_set(c, d)[:4]:
                            lhs = compose(h, compose(g, f))
                            rhs = compose(compose(h, g), f)
                            assert lhs.key == rhs.key
                            triples += 1
    assert triples > 50


def test_compose_chain_matches_nested(two_stars):
    phi = hom_set(edge(), two_stars)[0]
    assert compose_chain([phi, identity_map(two_stars)]).key == phi.key
