"""Finite coloured cyclic and modular operads, decorations, and evaluation.

Entry sets are finite tables indexed by colour profiles.  The symmetric
action, compositions and contractions are callables (dict-backed for
extracted operads).  The axiom checker works with "token" profiles so
that slot bookkeeping under composition is mechanical: two reduction
results are compared after aligning their token lists by a sigma
transport.
"""

from __future__ import annotations

from functools import cached_property
import itertools
from typing import Callable, Mapping, Optional, Sequence

from .errors import ProfileMismatch, ModgraphError
from .graphs import FeynmanGraph
from .maps import GraphicalMap, boundary_bijection


class ColourSet:
    __slots__ = ("colours", "dagger")

    def __init__(self, colours: Sequence[str], dagger: Optional[Mapping[str, str]] = None):
        self.colours = tuple(sorted(colours))
        self.dagger = dict(dagger) if dagger else {c: c for c in self.colours}
        if set(self.dagger) != set(self.colours):
            raise ProfileMismatch("dagger must be defined on every colour")
        for c, d in self.dagger.items():
            if self.dagger[d] != c:
                raise ProfileMismatch("dagger must be involutive")

    def dual(self, c: str) -> str:
        return self.dagger[c]

    def __eq__(self, other):
        return (
            isinstance(other, ColourSet)
            and self.colours == other.colours
            and self.dagger == other.dagger
        )

    def __repr__(self):
        return f"ColourSet({self.colours})"


def permute(profile: tuple, perm: Sequence[int]) -> tuple:
    return tuple(profile[k] for k in perm)


def compose_perms(p1: Sequence[int], p2: Sequence[int]) -> tuple:
    """Right-action composition: acting by p1 then p2 equals acting by this."""
    return tuple(p1[k] for k in p2)


class ModularOperad:
    """Finite modular operad; set ``contract_fn=None`` for a bare cyclic operad."""

    def __init__(
        self,
        colours: ColourSet,
        max_arity: int,
        entries: Mapping[tuple, Sequence],
        units: Mapping[str, object],
        sigma_fn: Callable,
        comp_fn: Callable,
        contract_fn: Optional[Callable],
        name: str = "operad",
    ):
        self.colours = colours
        self.max_arity = max_arity
        self.entries = {tuple(p): tuple(v) for p, v in entries.items()}
        self.units = dict(units)
        self._sigma = sigma_fn
        self._comp = comp_fn
        self._contract = contract_fn
        self.name = name

    @property
    def is_cyclic_only(self) -> bool:
        return self._contract is None

    def entry(self, profile: tuple) -> tuple:
        if profile not in self.entries:
            raise ProfileMismatch(f"no entry set for profile {profile}")
        return self.entries[profile]

    def sigma(self, profile: tuple, perm: Sequence[int], x):
        if x not in self.entry(profile):
            raise ProfileMismatch(f"{x!r} not in entries{profile}")
        y = self._sigma(profile, tuple(perm), x)
        if y not in self.entry(permute(profile, perm)):
            raise ProfileMismatch("sigma left the entry table")
        return y

    def comp(self, p1: tuple, x, i: int, p2: tuple, y, j: int):
        if p1[i] != self.colours.dual(p2[j]):
            raise ProfileMismatch(
                f"composition needs dual colours, got {p1[i]} vs {p2[j]}"
            )
        target = p1[:i] + p1[i + 1 :] + p2[:j] + p2[j + 1 :]
        if len(target) > self.max_arity:
            raise ProfileMismatch("composition exceeds the stored arity range")
        z = self._comp(p1, x, i, p2, y, j)
        if z not in self.entry(target):
            raise ProfileMismatch("composition left the entry table")
        return z

    def contract(self, profile: tuple, x, i: int, j: int):
        if self._contract is None:
            raise ModgraphError("cyclic operad: no contraction operations")
        if not i < j:
            raise ProfileMismatch("contraction requires i < j")
        if profile[i] != self.colours.dual(profile[j]):
            raise ProfileMismatch("contraction needs dual colours")
        z = self._contract(profile, x, i, j)
        target = tuple(c for k, c in enumerate(profile) if k not in (i, j))
        if z not in self.entry(target):
            raise ProfileMismatch("contraction left the entry table")
        return z

    def profiles(self):
        return sorted(self.entries)

    def __repr__(self):
        return f"ModularOperad({self.name}, arity<={self.max_arity})"


# -- standard examples ------------------------------------------------------


def terminal_operad(max_arity: int = 6) -> ModularOperad:
    cs = ColourSet(["c"])
    entries = {("c",) * n: ("*",) for n in range(max_arity + 1)}
    return ModularOperad(
        cs,
        max_arity,
        entries,
        {"c": "*"},
        lambda p, s, x: "*",
        lambda p1, x, i, p2, y, j: "*",
        lambda p, x, i, j: "*",
        name="terminal",
    )


def charge_operad(max_arity: int = 6) -> ModularOperad:
    """Z/2 in every arity; composition adds charges, contraction keeps them."""
    cs = ColourSet(["c"])
    entries = {("c",) * n: (0, 1) for n in range(max_arity + 1)}
    return ModularOperad(
        cs,
        max_arity,
        entries,
        {"c": 0},
        lambda p, s, x: x,
        lambda p1, x, i, p2, y, j: (x + y) % 2,
        lambda p, x, i, j: x,
        name="charge",
    )


def twisted_charge_operad(max_arity: int = 6) -> ModularOperad:
    """Charge operad with contraction shifted by one.

    Still a modular operad: every evaluation adds the first Betti number of
    the underlying graph, which is independent of the elimination order.
    """
    p = charge_operad(max_arity)
    return ModularOperad(
        p.colours,
        max_arity,
        p.entries,
        p.units,
        p._sigma,
        p._comp,
        lambda pr, x, i, j: (x + 1) % 2,
        name="twisted-charge",
    )


def bad_charge_operad(max_arity: int = 6) -> ModularOperad:
    """Z/3 charges with a position-dependent contraction; fails the axiom check
    because contracting two disjoint pairs gives order-dependent results."""
    cs = ColourSet(["c"])
    entries = {("c",) * n: (0, 1, 2) for n in range(max_arity + 1)}
    return ModularOperad(
        cs,
        max_arity,
        entries,
        {"c": 0},
        lambda p, s, x: x,
        lambda p1, x, i, p2, y, j: (x + y) % 3,
        lambda p, x, i, j: (x + i) % 3,
        name="bad-charge",
    )


def swap_terminal_operad(max_arity: int = 6) -> ModularOperad:
    """Two colours swapped by the dagger, every entry a singleton."""
    cs = ColourSet(["c", "d"], {"c": "d", "d": "c"})
    entries = {}
    for n in range(max_arity + 1):
        for p in itertools.product(cs.colours, repeat=n):
            entries[p] = ("*",)
    return ModularOperad(
        cs,
        max_arity,
        entries,
        {"c": "*", "d": "*"},
        lambda p, s, x: "*",
        lambda p1, x, i, p2, y, j: "*",
        lambda p, x, i, j: "*",
        name="swap-terminal",
    )


def truncate_arity(p: ModularOperad, arity: int) -> ModularOperad:
    """Forget all entries above the given arity (operations re-range themselves)."""
    entries = {k: v for k, v in p.entries.items() if len(k) <= arity}
    return ModularOperad(
        p.colours,
        arity,
        entries,
        p.units,
        p._sigma,
        p._comp,
        p._contract,
        name=f"{p.name}-ar{arity}",
    )


def underlying_cyclic(p: ModularOperad) -> ModularOperad:
    return ModularOperad(
        p.colours,
        p.max_arity,
        p.entries,
        p.units,
        p._sigma,
        p._comp,
        None,
        name=p.name + "-cyclic",
    )


# -- graded variant ----------------------------------------------------------


class GradedModularOperad:
    """Genus-graded entries; composition adds genera, contraction adds one."""

    def __init__(self, colours, max_arity, max_genus, entries, units, comp_fn, contract_fn, stable=False, name="graded"):
        self.colours = colours
        self.max_arity = max_arity
        self.max_genus = max_genus
        self.entries = {k: tuple(v) for k, v in entries.items()}
        self.units = dict(units)
        self._comp = comp_fn
        self._contract = contract_fn
        self.stable = stable
        self.name = name
        if stable:
            for (g, profile), elems in self.entries.items():
                if elems and 2 * g + len(profile) - 2 <= 0:
                    raise ProfileMismatch(
                        f"stability violated at genus {g}, arity {len(profile)}"
                    )

    def comp(self, g1, p1, x, i, g2, p2, y, j):
        target_g = g1 + g2
        if target_g > self.max_genus:
            raise ProfileMismatch("composition exceeds the genus range")
        if p1[i] != self.colours.dual(p2[j]):
            raise ProfileMismatch("composition needs dual colours")
        z = self._comp(g1, p1, x, i, g2, p2, y, j)
        target = (target_g, p1[:i] + p1[i + 1 :] + p2[:j] + p2[j + 1 :])
        if z not in self.entries.get(target, ()):
            raise ProfileMismatch("graded composition left the entry table")
        return z

    def contract(self, g, profile, x, i, j):
        if g + 1 > self.max_genus:
            raise ProfileMismatch("contraction exceeds the genus range")
        z = self._contract(g, profile, x, i, j)
        target = (g + 1, tuple(c for k, c in enumerate(profile) if k not in (i, j)))
        if z not in self.entries.get(target, ()):
            raise ProfileMismatch("graded contraction left the entry table")
        return z

    def contraction_targets(self):
        """Entry keys reachable by a contraction; empty after genus-0 truncation."""
        out = set()
        for (g, profile) in self.entries:
            if g + 1 <= self.max_genus and len(profile) >= 2:
                for i, j in itertools.combinations(range(len(profile)), 2):
                    if profile[i] == self.colours.dual(profile[j]):
                        key = (g + 1, tuple(c for k, c in enumerate(profile) if k not in (i, j)))
                        if self.entries.get(key):
                            out.add(key)
        return sorted(out)


def graded_charge_operad(max_arity=4, max_genus=2) -> GradedModularOperad:
    cs = ColourSet(["c"])
    entries = {}
    for g in range(max_genus + 1):
        for n in range(max_arity + 1):
            entries[(g, ("c",) * n)] = (0, 1)
    return GradedModularOperad(
        cs,
        max_arity,
        max_genus,
        entries,
        {"c": 0},
        lambda g1, p1, x, i, g2, p2, y, j: (x + y) % 2,
        lambda g, p, x, i, j: x,
        name="graded-charge",
    )


def truncate_genus(p: GradedModularOperad, k) -> GradedModularOperad:
    """Drop all entries of genus above k and every operation landing there."""
    if k is None or k >= p.max_genus:
        return p
    entries = {key: v for key, v in p.entries.items() if key[0] <= k}
    return GradedModularOperad(
        p.colours,
        p.max_arity,
        k,
        entries,
        p.units,
        p._comp,
        p._contract,
        stable=p.stable,
        name=f"{p.name}-tau{k}",
    )


# -- decorations -------------------------------------------------------------


class Decoration:
    """A colouring of the arcs plus an operad element at every vertex."""

    __slots__ = ("graph", "colouring", "labels", "__dict__")

    def __init__(self, graph: FeynmanGraph, colouring, labels):
        self.graph = graph
        self.colouring = dict(colouring)
        self.labels = dict(labels)

    @cached_property
    def key(self):
        return (
            self.graph.key,
            tuple(sorted(self.colouring.items())),
            tuple(
                sorted(
                    (v, getattr(x, "key", x)) for v, x in self.labels.items()
                )
            ),
        )

    def __eq__(self, other):
        return isinstance(other, Decoration) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def profile_at(self, v: str) -> tuple:
        return tuple(self.colouring[a] for a in self.graph.nb(v))

    def __repr__(self):
        return f"Decoration({self.graph!r})"


def validate_decoration(p: ModularOperad, dec: Decoration):
    g = dec.graph
    if set(dec.colouring) != set(g.arcs):
        return False, "colouring is not total"
    for a in g.arcs:
        if dec.colouring[g.involution[a]] != p.colours.dual(dec.colouring[a]):
            return False, f"colouring not involutive at {a}"
    for v in g.vertices:
        if dec.labels.get(v) not in p.entry(dec.profile_at(v)):
            return False, f"label at {v} outside its entry set"
    return True, ""


def decorations(p: ModularOperad, g: FeynmanGraph) -> list[Decoration]:
    """All decorations of g by p: the nerve value at g."""
    es = g.edges
    out = []
    for combo in itertools.product(p.colours.colours, repeat=len(es)):
        colouring = {}
        for (a, b), c in zip(es, combo):
            colouring[a] = c
            colouring[b] = p.colours.dual(c)
        pools = []
        ok = True
        for v in g.vertices:
            prof = tuple(colouring[a] for a in g.nb(v))
            if prof not in p.entries:
                raise ProfileMismatch(
                    f"vertex {v} reaches profile {prof} outside the stored range"
                )
            elems = p.entries[prof]
            if not elems:
                ok = False
                break
            pools.append([(v, e) for e in elems])
        if not ok:
            continue
        for labels in itertools.product(*pools):
            out.append(Decoration(g, colouring, dict(labels)))
    out.sort(key=lambda d: d.key)
    return out


def evaluate(p: ModularOperad, dec: Decoration, edge_order=None):
    """Eliminate internal edges of the decorated graph down to one element.

    Non-loop edges apply a composition, loops a contraction; the final
    element is transported to the sorted boundary order.  The result is
    independent of ``edge_order`` precisely because the operad axioms hold.
    """
    g = dec.graph
    if not g.vertices:
        raise ProfileMismatch("evaluation needs at least one vertex")
    clusters = [(list(g.nb(v)), dec.labels[v]) for v in g.vertices]
    order = list(edge_order if edge_order is not None else g.internal_edges)
    if sorted(order) != sorted(g.internal_edges):
        raise ProfileMismatch("edge order must enumerate the internal edges")
    col = dec.colouring
    for (a, b) in order:
        xi = next(k for k, (arcs, _) in enumerate(clusters) if a in arcs)
        yi = next(k for k, (arcs, _) in enumerate(clusters) if b in arcs)
        xa, xv = clusters[xi]
        if xi == yi:
            i, j = sorted((xa.index(a), xa.index(b)))
            prof = tuple(col[t] for t in xa)
            z = p.contract(prof, xv, i, j)
            arcs = [t for k, t in enumerate(xa) if k not in (i, j)]
            clusters[xi] = (arcs, z)
        else:
            ya, yv = clusters[yi]
            i, j = xa.index(a), ya.index(b)
            z = p.comp(
                tuple(col[t] for t in xa), xv, i, tuple(col[t] for t in ya), yv, j
            )
            arcs = xa[:i] + xa[i + 1 :] + ya[:j] + ya[j + 1 :]
            hi, lo = max(xi, yi), min(xi, yi)
            del clusters[hi]
            clusters[lo] = (arcs, z)
    if len(clusters) != 1:
        raise ProfileMismatch("graph is not connected")
    arcs, val = clusters[0]
    bnd = sorted(arcs)
    perm = tuple(arcs.index(t) for t in bnd)
    return p.sigma(tuple(col[t] for t in arcs), perm, val)


def restrict(p: ModularOperad, phi: GraphicalMap, dec: Decoration) -> Decoration:
    """Nerve functoriality: pull a decoration of the target back along phi."""
    if phi.target != dec.graph:
        raise ProfileMismatch("decoration does not live over the map's target")
    h = phi.source
    colouring = {a: dec.colouring[phi.arc_map[a]] for a in h.arcs}
    labels = {}
    for v in h.vertices:
        emb = phi.assignments[v]
        hv = emb.source
        nbv = h.nb(v)
        if not hv.vertices:
            q = nbv[1]
            c = colouring[q]
            if colouring[nbv[0]] != p.colours.dual(c):
                raise ProfileMismatch(f"unit insertion mismatch at {v}")
            labels[v] = p.units[c]
            continue
        sub_col = {alpha: dec.colouring[emb.arc_map[alpha]] for alpha in hv.arcs}
        sub_labels = {}
        for x in hv.vertices:
            u = emb.vertex_map[x]
            g_order = dec.graph.nb(u)
            h_order = hv.nb(x)
            perm = tuple(g_order.index(emb.arc_map[t]) for t in h_order)
            sub_labels[x] = p.sigma(
                tuple(dec.colouring[t] for t in g_order), perm, dec.labels[u]
            )
        val = evaluate(p, Decoration(hv, sub_col, sub_labels))
        bij = boundary_bijection(phi, v)
        if bij is None:
            raise ProfileMismatch(f"no boundary bijection at {v}")
        bnd = sorted(hv.boundary)
        perm2 = tuple(bnd.index(bij[a]) for a in nbv)
        labels[v] = p.sigma(tuple(sub_col[t] for t in bnd), perm2, val)
    out = Decoration(h, colouring, labels)
    ok, why = validate_decoration(p, out)
    if not ok:
        raise ProfileMismatch(f"restriction produced a bad decoration: {why}")
    return out


# -- axiom checking ----------------------------------------------------------


class _Tok:
    """An entry value together with the tokens naming its slots."""

    __slots__ = ("tokens", "profile", "val")

    def __init__(self, tokens, profile, val):
        self.tokens = tuple(tokens)
        self.profile = tuple(profile)
        self.val = val

    def slot(self, token):
        return self.tokens.index(token)


def _tok_comp(p: ModularOperad, a: _Tok, ta, b: _Tok, tb) -> _Tok:
    i, j = a.slot(ta), b.slot(tb)
    val = p.comp(a.profile, a.val, i, b.profile, b.val, j)
    toks = a.tokens[:i] + a.tokens[i + 1 :] + b.tokens[:j] + b.tokens[j + 1 :]
    prof = a.profile[:i] + a.profile[i + 1 :] + b.profile[:j] + b.profile[j + 1 :]
    return _Tok(toks, prof, val)


def _tok_contract(p: ModularOperad, a: _Tok, t1, t2) -> _Tok:
    i, j = sorted((a.slot(t1), a.slot(t2)))
    val = p.contract(a.profile, a.val, i, j)
    toks = tuple(t for k, t in enumerate(a.tokens) if k not in (i, j))
    prof = tuple(c for k, c in enumerate(a.profile) if k not in (i, j))
    return _Tok(toks, prof, val)


def _tok_equal(p: ModularOperad, a: _Tok, b: _Tok) -> bool:
    """Compare after aligning b's token order to a's by a sigma transport."""
    if sorted(a.tokens) != sorted(b.tokens):
        return False
    perm = tuple(b.tokens.index(t) for t in a.tokens)
    return p.sigma(b.profile, perm, b.val) == a.val and permute(b.profile, perm) == a.profile


def _gen_perms(n: int):
    gens = []
    for k in range(n - 1):
        p = list(range(n))
        p[k], p[k + 1] = p[k + 1], p[k]
        gens.append(tuple(p))
    if n > 1:
        gens.append(tuple(range(1, n)) + (0,))
    return gens


def validate_modular_operad(
    p: ModularOperad,
    assoc_arity: int = 3,
    sigma_exhaustive_arity: int = 4,
):
    """Exhaustive finite axiom check; returns (ok, first failing instance).

    Sigma functoriality is fully exhaustive up to ``sigma_exhaustive_arity``
    and generator-complete above it; composition shapes are exhausted for
    factors up to ``assoc_arity`` slots.
    """
    try:
        return _validate(p, assoc_arity, sigma_exhaustive_arity)
    except ProfileMismatch as exc:
        return False, f"table error: {exc}"


def _validate(p, assoc_arity, sigma_exhaustive_arity):
    cs = p.colours
    for c in cs.colours:
        prof = (cs.dual(c), c)
        if prof not in p.entries or p.units[c] not in p.entries[prof]:
            return False, f"missing unit for colour {c}"
    # sigma is a right action
    for prof in p.profiles():
        n = len(prof)
        if n < 2:
            continue
        perms = list(itertools.permutations(range(n)))
        idp = tuple(range(n))
        for x in p.entry(prof):
            if p.sigma(prof, idp, x) != x:
                return False, f"identity permutation moves {x!r} at {prof}"
            firsts = perms if n <= sigma_exhaustive_arity else _gen_perms(n)
            for s1 in firsts:
                y = p.sigma(prof, s1, x)
                prof1 = permute(prof, s1)
                for s2 in perms:
                    lhs = p.sigma(prof1, s2, y)
                    rhs = p.sigma(prof, compose_perms(s1, s2), x)
                    if lhs != rhs:
                        return False, f"sigma functoriality fails at {prof}, {s1}, {s2}"
    # unit laws
    for prof in p.profiles():
        n = len(prof)
        if n == 0 or n + 2 - 2 > p.max_arity:
            continue
        for x in p.entry(prof):
            for i in range(n):
                c = prof[i]
                u = p.units[c]
                z = p.comp(prof, x, i, (cs.dual(c), c), u, 0)
                perm = tuple(k for k in range(n) if k != i) + (i,)
                if z != p.sigma(prof, perm, x):
                    return False, f"right unit law fails at {prof} slot {i}"
                u2 = p.units[cs.dual(c)]
                z2 = p.comp((c, cs.dual(c)), u2, 1, prof, x, i)
                perm2 = (i,) + tuple(k for k in range(n) if k != i)
                if z2 != p.sigma(prof, perm2, x):
                    return False, f"left unit law fails at {prof} slot {i}"
    # composition shapes: sequential and parallel associativity, equivariance
    small = [q for q in p.profiles() if 1 <= len(q) <= assoc_arity]

    def toks(tag, prof):
        return [(tag, k) for k in range(len(prof))]

    def comp_fits(*parts):
        return sum(len(q) for q in parts) - 2 * (len(parts) - 1) <= p.max_arity

    for p1, p2 in itertools.product(small, repeat=2):
        if not comp_fits(p1, p2):
            continue
        for x, y in itertools.product(p.entry(p1), p.entry(p2)):
            a = _Tok(toks("a", p1), p1, x)
            b = _Tok(toks("b", p2), p2, y)
            for i, j in itertools.product(range(len(p1)), range(len(p2))):
                if p1[i] != cs.dual(p2[j]):
                    continue
                ab = _tok_comp(p, a, ("a", i), b, ("b", j))
                # equivariance of composition in both factors
                for s1 in itertools.permutations(range(len(p1))):
                    sa = _Tok(permute(a.tokens, s1), permute(p1, s1), p.sigma(p1, s1, x))
                    ab2 = _tok_comp(p, sa, ("a", i), b, ("b", j))
                    if not _tok_equal(p, ab, ab2):
                        return False, f"composition not equivariant at {p1},{p2}"
                for p3 in small:
                    if not (
                        comp_fits(p1, p2, p3)
                        and comp_fits(p2, p3)
                        and comp_fits(p1, p3)
                    ):
                        continue
                    for z in p.entry(p3):
                        cc = _Tok(toks("c", p3), p3, z)
                        for t in ab.tokens:
                            for k in range(len(p3)):
                                ti = ab.slot(t)
                                if ab.profile[ti] != cs.dual(p3[k]):
                                    continue
                                lhs = _tok_comp(p, ab, t, cc, ("c", k))
                                if t[0] == "b":
                                    bc = _tok_comp(p, b, t, cc, ("c", k))
                                    rhs = _tok_comp(p, a, ("a", i), bc, ("b", j))
                                elif t[0] == "a":
                                    ac = _tok_comp(p, a, t, cc, ("c", k))
                                    rhs = _tok_comp(p, ac, ("a", i), b, ("b", j))
                                if not _tok_equal(p, lhs, rhs):
                                    return False, (
                                        f"associativity fails at {p1},{p2},{p3}"
                                    )
    if p._contract is None:
        return True, ""
    # contraction families: order independence, equivariance, interchange
    for prof in p.profiles():
        n = len(prof)
        if n < 2:
            continue
        pairs = [
            (i, j)
            for i, j in itertools.combinations(range(n), 2)
            if prof[i] == cs.dual(prof[j])
        ]
        for x in p.entry(prof):
            a = _Tok(toks("a", prof), prof, x)
            for (i, j) in pairs:
                za = _tok_contract(p, a, ("a", i), ("a", j))
                # equivariance of contraction
                for s1 in itertools.permutations(range(n)):
                    if n > sigma_exhaustive_arity and s1 not in _gen_perms(n):
                        continue
                    sa = _Tok(permute(a.tokens, s1), permute(prof, s1), p.sigma(prof, s1, x))
                    zb = _tok_contract(p, sa, ("a", i), ("a", j))
                    if not _tok_equal(p, za, zb):
                        return False, f"contraction not equivariant at {prof}"
                for (k, l) in pairs:
                    if {i, j} & {k, l}:
                        continue
                    lhs = _tok_contract(p, za, ("a", k), ("a", l))
                    rhs = _tok_contract(
                        p, _tok_contract(p, a, ("a", k), ("a", l)), ("a", i), ("a", j)
                    )
                    if not _tok_equal(p, lhs, rhs):
                        return False, f"double contraction order fails at {prof}"
    # interchange of composition and contraction
    for p1, p2 in itertools.product(small, repeat=2):
        if not comp_fits(p1, p2):
            continue
        for x, y in itertools.product(p.entry(p1), p.entry(p2)):
            a = _Tok(toks("a", p1), p1, x)
            b = _Tok(toks("b", p2), p2, y)
            for i, j in itertools.product(range(len(p1)), range(len(p2))):
                if p1[i] != cs.dual(p2[j]):
                    continue
                ab = _tok_comp(p, a, ("a", i), b, ("b", j))
                # contract a pair inside one factor before or after composing
                for (k, l) in itertools.combinations(range(len(p1)), 2):
                    if k == i or l == i or p1[k] != cs.dual(p1[l]):
                        continue
                    lhs = _tok_contract(p, ab, ("a", k), ("a", l))
                    xa = _tok_contract(p, a, ("a", k), ("a", l))
                    rhs = _tok_comp(p, xa, ("a", i), b, ("b", j))
                    if not _tok_equal(p, lhs, rhs):
                        return False, f"comp/contract interchange fails at {p1}"
                # two bridges between the factors: compose one, contract the other
                for k, l in itertools.product(range(len(p1)), range(len(p2))):
                    if k == i or l == j or p1[k] != cs.dual(p2[l]):
                        continue
                    lhs = _tok_contract(p, ab, ("a", k), ("b", l))
                    ab2 = _tok_comp(p, a, ("a", k), b, ("b", l))
                    rhs = _tok_contract(p, ab2, ("a", i), ("b", j))
                    if not _tok_equal(p, lhs, rhs):
                        return False, f"double-bridge interchange fails at {p1},{p2}"
    return True, ""


def modular_operads_isomorphic(p, q, colour_map, entry_maps):
    """Check a proposed iso (colour bijection + per-profile bijections).

    ``entry_maps[profile]`` maps p-elements at that profile to q-elements at
    the translated profile.  Verifies compatibility with units, sigma, comp
    and contract over the stored tables.
    """
    cs = p.colours

    def tr(profile):
        return tuple(colour_map[c] for c in profile)

    for c in cs.colours:
        if colour_map[cs.dual(c)] != q.colours.dual(colour_map[c]):
            return False, "colour map does not respect the dagger"
    for prof in p.profiles():
        f = entry_maps[prof]
        image = {f[x] for x in p.entry(prof)}
        if len(image) != len(p.entry(prof)) or image != set(q.entry(tr(prof))):
            return False, f"entries mismatch at {prof}"
    for c in cs.colours:
        prof = (cs.dual(c), c)
        if entry_maps[prof][p.units[c]] != q.units[colour_map[c]]:
            return False, f"unit mismatch at {c}"
    for prof in p.profiles():
        n = len(prof)
        for x in p.entry(prof):
            for perm in itertools.permutations(range(n)):
                lhs = entry_maps[permute(prof, perm)][p.sigma(prof, perm, x)]
                rhs = q.sigma(tr(prof), perm, entry_maps[prof][x])
                if lhs != rhs:
                    return False, f"sigma mismatch at {prof}"
    for p1, p2 in itertools.product(p.profiles(), repeat=2):
        target_len = len(p1) + len(p2) - 2
        if target_len > p.max_arity or target_len < 0:
            continue
        for i, j in itertools.product(range(len(p1)), range(len(p2))):
            if p1[i] != cs.dual(p2[j]):
                continue
            tgt = p1[:i] + p1[i + 1 :] + p2[:j] + p2[j + 1 :]
            for x, y in itertools.product(p.entry(p1), p.entry(p2)):
                lhs = entry_maps[tgt][p.comp(p1, x, i, p2, y, j)]
                rhs = q.comp(tr(p1), entry_maps[p1][x], i, tr(p2), entry_maps[p2][y], j)
                if lhs != rhs:
                    return False, f"composition mismatch at {p1},{p2}"
    if not p.is_cyclic_only and not q.is_cyclic_only:
        for prof in p.profiles():
            for i, j in itertools.combinations(range(len(prof)), 2):
                if prof[i] != cs.dual(prof[j]):
                    continue
                tgt = tuple(c for k, c in enumerate(prof) if k not in (i, j))
                for x in p.entry(prof):
                    lhs = entry_maps[tgt][p.contract(prof, x, i, j)]
                    rhs = q.contract(tr(prof), entry_maps[prof][x], i, j)
                    if lhs != rhs:
                        return False, f"contraction mismatch at {prof}"
    return True, ""
