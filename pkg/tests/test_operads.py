"""Operad tables: axiom checking, evaluation, decorations, restriction."""

import itertools

import pytest

from modgraph import (
    ColourSet,
    Decoration,
    ProfileMismatch,
    bad_charge_operad,
    charge_operad,
    decorations,
    edge,
    evaluate,
    graded_charge_operad,
    hom_set,
    identity_map,
    new_graph,
    restrict,
    star,
    swap_terminal_operad,
    terminal_operad,
    truncate_genus,
    twisted_charge_operad,
    underlying_cyclic,
    validate_decoration,
    validate_modular_operad,
)
from modgraph.maps import compose
from modgraph.operads import truncate_arity


def test_colour_set_requires_involution():
    with pytest.raises(ProfileMismatch):
        ColourSet(["a", "b"], {"a": "b", "b": "a", "c": "c"})
    with pytest.raises(ProfileMismatch):
        ColourSet(["a", "b"], {"a": "b", "b": "b"})


def test_terminal_operad_valid():
    ok, why = validate_modular_operad(terminal_operad(5))
    assert ok, why


def test_charge_operad_valid():
    ok, why = validate_modular_operad(charge_operad(6))
    assert ok, why


def test_swap_terminal_valid():
    ok, why = validate_modular_operad(swap_terminal_operad(5))
    assert ok, why


def test_bad_charge_fails():
    ok, why = validate_modular_operad(bad_charge_operad(6))
    assert not ok
    assert why


def test_twisted_charge_is_still_valid():
    # shifting the contraction adds the Betti number to every evaluation,
    # which is order independent, so all axioms still hold
    ok, why = validate_modular_operad(twisted_charge_operad(6))
    assert ok, why


def test_cyclic_has_no_contraction():
    from modgraph import ModgraphError

    c = underlying_cyclic(charge_operad(4))
    with pytest.raises(ModgraphError):
        c.contract(("c", "c"), 0, 0, 1)
    ok, why = validate_modular_operad(c)
    assert ok, why


def test_evaluate_star_is_label():
    p = charge_operad(4)
    s = star(3)
    dec = Decoration(s, {a: "c" for a in s.arcs}, {"v": 1})
    assert evaluate(p, dec) == 1


def test_evaluate_two_stars(two_stars):
    p = charge_operad(6)
    dec = Decoration(two_stars, {a: "c" for a in two_stars.arcs}, {"u": 1, "w": 1})
    assert evaluate(p, dec) == 0


def test_evaluate_loop(vertex_loop):
    p = charge_operad(4)
    dec = Decoration(vertex_loop, {a: "c" for a in vertex_loop.arcs}, {"v": 1})
    assert evaluate(p, dec) == 1
    t = twisted_charge_operad(4)
    assert evaluate(t, dec) == 0  # contraction shifted by one


def test_evaluate_order_independent(paper_figure, two_stars, two_vertex_loop):
    p = charge_operad(6)
    for g in (paper_figure, two_stars, two_vertex_loop):
        for dec in decorations(p, g):
            results = {
                evaluate(p, dec, edge_order=list(order))
                for order in itertools.permutations(g.internal_edges)
            }
            assert len(results) == 1


def test_decoration_counts():
    p = charge_operad(5)
    assert len(decorations(p, edge())) == 1
    assert len(decorations(p, star(3))) == 2
    assert len(decorations(terminal_operad(5), star(4))) == 1
    assert len(decorations(swap_terminal_operad(4), edge())) == 2


def test_decoration_product_formula(two_stars, chain3):
    p = charge_operad(6)
    for g in (two_stars, chain3):
        expected = 1
        for v in g.vertices:
            expected *= len(p.entry(("c",) * g.arity(v)))
        assert len(decorations(p, g)) == expected


def test_decoration_validation(two_stars):
    p = charge_operad(6)
    dec = decorations(p, two_stars)[0]
    ok, why = validate_decoration(p, dec)
    assert ok, why
    bad = Decoration(two_stars, dec.colouring, {v: 7 for v in two_stars.vertices})
    ok, _ = validate_decoration(p, bad)
    assert not ok


def test_restrict_identity(two_stars):
    p = charge_operad(6)
    for dec in decorations(p, two_stars):
        assert restrict(p, identity_map(two_stars), dec) == dec


def test_restrict_codegeneracy_inserts_unit(chain3):
    from modgraph import codegeneracies_out_of

    p = charge_operad(6)
    s = codegeneracies_out_of(chain3)[0]
    for dec in decorations(p, s.target):
        pulled = restrict(p, s, dec)
        collapsed = sorted(set(chain3.vertices) - set(s.target.vertices))[0]
        assert pulled.labels[collapsed] == 0  # the unit of (Z/2, +)


def test_restrict_contraction_figure(vertex_loop):
    # blowing the bare vertex up to the whole loop graph restricts by a contraction
    from modgraph import Embedding, GraphicalMap

    t = twisted_charge_operad(4)
    s0 = star(0)
    ident = Embedding(
        vertex_loop,
        vertex_loop,
        {a: a for a in vertex_loop.arcs},
        {"v": "v"},
    )
    mu = GraphicalMap(s0, vertex_loop, {}, {"v": ident})
    for dec in decorations(t, vertex_loop):
        pulled = restrict(t, mu, dec)
        assert pulled.labels["v"] == (dec.labels["v"] + 1) % 2


def test_restrict_functorial(two_stars, chain3):
    p = charge_operad(6)
    corpus = [edge(), star(2), star(3), chain3, two_stars]
    pairs = 0
    for a, b in itertools.product(corpus, repeat=2):
        for f in hom_set(a, b)[:3]:
            for c in corpus:
                for g in hom_set(b, c)[:3]:
                    gf = compose(g, f)
                    for dec in decorations(p, c)[:4]:
                        assert restrict(p, gf, dec) == restrict(
                            p, f, restrict(p, g, dec)
                        )
                        pairs += 1
    assert pairs > 50


def test_graded_truncation():
    gp = graded_charge_operad(max_arity=4, max_genus=2)
    assert truncate_genus(gp, 5) is gp
    t0 = truncate_genus(gp, 0)
    assert t0.contraction_targets() == []
    assert gp.contraction_targets()
    # composition adds genera
    assert gp.comp(1, ("c",) * 2, 1, 0, 1, ("c",) * 2, 1, 0) == 0
    with pytest.raises(ProfileMismatch):
        t0.contract(0, ("c", "c"), 1, 0, 1)


def test_truncate_arity():
    p = truncate_arity(charge_operad(6), 3)
    assert max(len(k) for k in p.entries) == 3
    ok, why = validate_modular_operad(p)
    assert ok, why
