"""Elementary maps: classification, coface generators, degree discipline, factorization."""

import pytest

from modgraph import (
    ElementaryKind,
    FactorizationFailed,
    classify_elementary,
    codegeneracies_out_of,
    codegeneracy_at,
    compose,
    edge,
    elementary_cofaces_into,
    factorize,
    hom_set,
    identity_map,
    inner_coface_at,
    inner_cofaces_into,
    new_graph,
    outer_cofaces_into,
    star,
    validate_graphical_map,
)
from modgraph.maps import compose_chain


def test_classify_identity(two_stars):
    assert classify_elementary(identity_map(two_stars)) is ElementaryKind.Isomorphism


def test_outer_coface_figure():
    # gluing the two loose edges of a fork into a loop: the d_e example
    g = new_graph(
        arcs=["c", "c*", "a", "b"],
        involution_pairs=[("c", "c*"), ("a", "b")],
        attach={"c": "w", "a": "w", "b": "w"},
    )
    outs = outer_cofaces_into(g)
    kinds = {classify_elementary(m) for m in outs}
    assert kinds == {ElementaryKind.OuterCofaceEmbedding}
    cut = [m for m in outs if len(m.source.vertices) == 1]
    assert cut and all(
        len(m.target.internal_edges) == len(m.source.internal_edges) + 1 for m in cut
    )


def test_codegeneracy_figure(chain3):
    s = codegeneracy_at(chain3, "v")
    assert classify_elementary(s) is ElementaryKind.Codegeneracy
    ok, why = validate_graphical_map(s)
    assert ok, why
    assert s.source.degree() == s.target.degree() + 1


def test_codegeneracy_rejects_loop_vertex(vertex_loop):
    from modgraph import NodelessLoopUnrepresentable

    with pytest.raises(NodelessLoopUnrepresentable):
        codegeneracy_at(vertex_loop, "v")
    assert codegeneracies_out_of(vertex_loop) == []


def test_inner_cofaces_correspond_to_edges(two_stars, paper_figure, vertex_loop):
    assert len(inner_cofaces_into(two_stars)) == 1
    assert len(inner_cofaces_into(paper_figure)) == 2
    d = inner_cofaces_into(vertex_loop)[0]
    # contracting the loop leaves the isolated vertex
    assert not d.source.arcs and len(d.source.vertices) == 1
    assert classify_elementary(d) is ElementaryKind.InnerCoface


@pytest.mark.parametrize("n", [1, 2, 3])
def test_star_outer_cofaces_are_edge_inclusions(n):
    outs = outer_cofaces_into(star(n))
    assert len(outs) == 2 * n
    assert all(classify_elementary(m) is ElementaryKind.EdgeInclusion for m in outs)


def test_no_codegeneracies_without_arity_two(two_stars):
    assert codegeneracies_out_of(two_stars) == []


def test_degree_discipline(carrier3):
    for g in carrier3:
        for m in inner_cofaces_into(g) + outer_cofaces_into(g):
            kind = classify_elementary(m)
            assert kind in (
                ElementaryKind.InnerCoface,
                ElementaryKind.OuterCofaceEmbedding,
                ElementaryKind.EdgeInclusion,
            )
            assert m.target.degree() == m.source.degree() + 1
        for m in codegeneracies_out_of(g):
            assert classify_elementary(m) is ElementaryKind.Codegeneracy
            assert m.source.degree() == m.target.degree() + 1


def test_factorize_isomorphism(two_stars):
    cods, cofs, iso = factorize(identity_map(two_stars))
    assert cods == [] and cofs == []
    assert classify_elementary(iso) is ElementaryKind.Isomorphism


def test_factorize_single_coface(two_stars):
    d = inner_cofaces_into(two_stars)[0]
    cods, cofs, iso = factorize(d)
    assert cods == [] and len(cofs) == 1
    assert compose_chain(cods + [iso] + cofs).key == d.key


def test_factorize_codegeneracy(chain3):
    s = codegeneracies_out_of(chain3)[0]
    cods, cofs, iso = factorize(s)
    assert len(cods) == 1 and cofs == []
    assert compose_chain(cods + [iso] + cofs).key == s.key


def test_factorize_round_trip_small(two_stars, chain3, loop_with_leg):
    corpus = [edge(), star(2), star(3), loop_with_leg, chain3, two_stars]
    seen = 0
    for h in corpus:
        for g in corpus:
            for phi in hom_set(h, g):
                cods, cofs, iso = factorize(phi)
                assert compose_chain(cods + [iso] + cofs).key == phi.key
                for c in cods:
                    assert classify_elementary(c) is ElementaryKind.Codegeneracy
                for c in cofs:
                    assert classify_elementary(c) in (
                        ElementaryKind.InnerCoface,
                        ElementaryKind.OuterCofaceEmbedding,
                        ElementaryKind.EdgeInclusion,
                    )
                seen += 1
    assert seen > 100


def test_factorize_rejects_invalid(two_stars):
    bad = identity_map(two_stars)
    bad = type(bad)(bad.source, bad.target, dict(bad.arc_map), {})
    with pytest.raises(FactorizationFailed):
        factorize(bad)


def test_elementary_cofaces_sorted(two_stars):
    gens = elementary_cofaces_into(two_stars)
    assert gens == sorted(gens, key=lambda m: m.key)


def test_inner_coface_at_loop_then_classify(paper_figure):
    d = inner_coface_at(paper_figure, ("5", "6"))
    assert classify_elementary(d) is ElementaryKind.InnerCoface
    assert d.target.degree() == d.source.degree() + 1
