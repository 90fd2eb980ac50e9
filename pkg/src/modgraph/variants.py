"""Subcategory variants: simply connected sieves and the stable genus-graded category."""

from __future__ import annotations

from typing import Callable, Iterable, Optional

from .elementary import ElementaryKind, classify_elementary
from .errors import SearchBudgetExceeded
from .graphs import FeynmanGraph, GenusGraph
from .maps import GraphicalMap, hom_set


def in_u0(g: FeynmanGraph) -> bool:
    """Simply connected graphs: the augmented-cyclic sieve."""
    return g.betti() == 0


def in_ucyc(g: FeynmanGraph) -> bool:
    """Simply connected graphs with non-empty boundary: the cyclic sieve."""
    return g.betti() == 0 and bool(g.boundary)


def verify_sieve(
    predicate: Callable[[FeynmanGraph], bool],
    samples: Iterable[FeynmanGraph],
    budget: int = 10**6,
):
    """Check the sieve property over all enumerated maps between samples.

    Whenever a map G -> T exists with predicate(T), predicate(G) must hold;
    returns (True, None) or (False, first offending map).
    """
    samples = list(samples)
    targets = [t for t in samples if predicate(t)]
    for t in targets:
        for g in samples:
            homs = hom_set(g, t, budget)
            if homs and not predicate(g):
                return False, homs[0]
    return True, None


class GenusMorphism:
    """A graphical map between genus graphs with the genus triangle condition."""

    def __init__(self, underlying: GraphicalMap, source: GenusGraph, target: GenusGraph):
        if underlying.source != source.graph or underlying.target != target.graph:
            raise ValueError("genus data does not match the underlying map")
        self.underlying = underlying
        self.source = source
        self.target = target

    def __repr__(self):
        return f"GenusMorphism({self.underlying!r})"


def validate_genus_morphism(m: GenusMorphism) -> bool:
    """Vertexwise: the source genus equals the genus of the assigned embedding."""
    for v in m.source.graph.vertices:
        emb = m.underlying.assignments[v]
        if m.source.genus[v] != emb.genus_of(m.target.genus):
            return False
    return True


def ust_morphisms(src: GenusGraph, tgt: GenusGraph, budget: int = 10**6):
    """All stable-category morphisms between two genus graphs."""
    out = []
    for phi in hom_set(src.graph, tgt.graph, budget):
        m = GenusMorphism(phi, src, tgt)
        if validate_genus_morphism(m):
            out.append(m)
    return out


def ust_has_no_codegeneracies(samples: Iterable[GenusGraph], budget: int = 10**6):
    """No stable morphism between the samples classifies as a codegeneracy."""
    samples = list(samples)
    for src in samples:
        for tgt in samples:
            for m in ust_morphisms(src, tgt, budget):
                if classify_elementary(m.underlying) is ElementaryKind.Codegeneracy:
                    return False, m
    return True, None
