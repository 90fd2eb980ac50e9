import pytest

from modgraph import make_carrier, new_graph


@pytest.fixture(scope="session")
def carrier3():
    return make_carrier(3, 3, 3)


@pytest.fixture(scope="session")
def carrier4():
    return make_carrier(4, 3, 3)


@pytest.fixture
def paper_figure():
    # arcs 1..10 paired (2n-1, 2n); {2,3,9} at v1, {4,5,6,7} at v2
    return new_graph(
        arcs=[str(k) for k in range(1, 11)],
        involution_pairs=[(str(2 * n - 1), str(2 * n)) for n in range(1, 6)],
        attach={"2": "v1", "3": "v1", "9": "v1", "4": "v2", "5": "v2", "6": "v2", "7": "v2"},
    )


@pytest.fixture
def two_stars():
    # two 3-valent vertices joined by a single internal edge
    return new_graph(
        arcs=["a1", "a2", "p", "q", "b1", "b2", "a1*", "a2*", "b1*", "b2*"],
        involution_pairs=[("a1", "a1*"), ("a2", "a2*"), ("p", "q"), ("b1", "b1*"), ("b2", "b2*")],
        attach={"a1": "u", "a2": "u", "p": "u", "q": "w", "b1": "w", "b2": "w"},
    )


@pytest.fixture
def chain3():
    # u - v - w with v of arity 2
    return new_graph(
        arcs=["a", "a*", "p", "q", "r", "s", "b", "b*"],
        involution_pairs=[("a", "a*"), ("p", "q"), ("r", "s"), ("b", "b*")],
        attach={"a": "u", "p": "u", "q": "v", "r": "v", "s": "w", "b": "w"},
    )


@pytest.fixture
def loop_with_leg():
    return new_graph(
        arcs=["l", "m", "x", "x*"],
        involution_pairs=[("l", "m"), ("x", "x*")],
        attach={"l": "v", "m": "v", "x": "v"},
    )


@pytest.fixture
def vertex_loop():
    # one vertex carrying a single loop and nothing else
    return new_graph(
        arcs=["l", "m"], involution_pairs=[("l", "m")], attach={"l": "v", "m": "v"}
    )


@pytest.fixture
def two_vertex_loop():
    # a cycle through two vertices: two parallel internal edges
    return new_graph(
        arcs=["p", "q", "r", "s"],
        involution_pairs=[("p", "q"), ("r", "s")],
        attach={"p": "v", "s": "v", "q": "w", "r": "w"},
    )


@pytest.fixture
def cycle4():
    # v1 - w1 - v2 - w2 - v1, every vertex of arity 2
    return new_graph(
        arcs=["a", "b", "c", "d", "e", "f", "g", "h"],
        involution_pairs=[("a", "b"), ("c", "d"), ("e", "f"), ("g", "h")],
        attach={
            "a": "v1", "b": "w1",
            "c": "w1", "d": "v2",
            "e": "v2", "f": "w2",
            "g": "w2", "h": "v1",
        },
    )
