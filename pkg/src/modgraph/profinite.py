"""Inverse systems and limits, truncated profinite integers, finite groupoids.

Everything is level-truncated: the library computes finite stages of
profinite limits, never the full pro-object.  Groups are multiplication
tables; subgroup enumeration is closure-based and intended for orders
up to a few dozen.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Optional, Sequence

from .errors import IncompatibleLevels, ProfileMismatch


class InverseSystem:
    """Finite inverse system over a partially ordered index set."""

    def __init__(self, indices, order_pairs, objects, transitions):
        self.indices = list(indices)
        self.order = set(order_pairs)  # (i, j) meaning i >= j
        for i in self.indices:
            self.order.add((i, i))
        self.objects = {i: list(objects[i]) for i in self.indices}
        self.transitions = {k: dict(v) for k, v in transitions.items()}

    def validate(self):
        for i in self.indices:
            t = self.transitions.get((i, i), {x: x for x in self.objects[i]})
            if any(t[x] != x for x in self.objects[i]):
                return False, f"transition at ({i},{i}) is not the identity"
        for (i, j) in self.order:
            if i == j:
                continue
            if (i, j) not in self.transitions:
                return False, f"missing transition ({i},{j})"
            t = self.transitions[(i, j)]
            if sorted(t) != sorted(self.objects[i]):
                return False, f"transition ({i},{j}) has the wrong domain"
            if any(v not in self.objects[j] for v in t.values()):
                return False, f"transition ({i},{j}) has the wrong codomain"
        for (i, j) in self.order:
            for (j2, k) in self.order:
                if j2 != j or i == j or j == k:
                    continue
                if (i, k) not in self.order:
                    return False, f"order not transitive at {i}>={j}>={k}"
                tij = self.transitions[(i, j)]
                tjk = self.transitions[(j, k)]
                tik = self.transitions[(i, k)]
                if any(tjk[tij[x]] != tik[x] for x in self.objects[i]):
                    return False, f"transitions do not compose along {i}>={j}>={k}"
        return True, ""


def limit(sys: InverseSystem):
    """All compatible tuples, ordered by index position."""
    ok, why = sys.validate()
    if not ok:
        raise ProfileMismatch(f"invalid inverse system: {why}")
    idx = sys.indices
    out = []
    for combo in itertools.product(*(sys.objects[i] for i in idx)):
        point = dict(zip(idx, combo))
        if all(
            sys.transitions[(i, j)][point[i]] == point[j]
            for (i, j) in sys.order
            if i != j
        ):
            out.append(tuple(combo))
    return out


# -- profinite integers -------------------------------------------------------


def _divisor_closed(levels) -> bool:
    ls = set(levels)
    return all(
        n % d != 0 or d in ls for n in ls for d in range(1, n + 1)
    )


class ProfiniteInt:
    """A compatible residue tuple over a divisor-closed level set."""

    def __init__(self, levels: Iterable[int], residues: Mapping[int, int]):
        self.levels = tuple(sorted(set(levels)))
        if not _divisor_closed(self.levels):
            raise IncompatibleLevels("level set must be closed under divisors")
        self.residues = {n: residues[n] % n for n in self.levels}
        for n in self.levels:
            for m in self.levels:
                if n % m == 0 and self.residues[n] % m != self.residues[m]:
                    raise IncompatibleLevels(
                        f"residues at {n} and {m} are incompatible"
                    )

    def __eq__(self, other):
        return (
            isinstance(other, ProfiniteInt)
            and self.levels == other.levels
            and self.residues == other.residues
        )

    def __repr__(self):
        return f"ProfiniteInt({self.residues})"


def zhat_from_int(k: int, levels) -> ProfiniteInt:
    return ProfiniteInt(levels, {n: k % n for n in levels})


def _zhat_binop(a: ProfiniteInt, b: ProfiniteInt, op) -> ProfiniteInt:
    if a.levels != b.levels:
        raise IncompatibleLevels("operands live over different level sets")
    return ProfiniteInt(a.levels, {n: op(a.residues[n], b.residues[n]) % n for n in a.levels})


def zhat_add(a: ProfiniteInt, b: ProfiniteInt) -> ProfiniteInt:
    return _zhat_binop(a, b, lambda x, y: x + y)


def zhat_mul(a: ProfiniteInt, b: ProfiniteInt) -> ProfiniteInt:
    return _zhat_binop(a, b, lambda x, y: x * y)


def zhat_tower(levels) -> InverseSystem:
    """The inverse system of Z/n over a divisor-closed level set."""
    levels = sorted(set(levels))
    if not _divisor_closed(levels):
        raise IncompatibleLevels("level set must be closed under divisors")
    order = [(n, m) for n in levels for m in levels if n != m and n % m == 0]
    objects = {n: list(range(n)) for n in levels}
    transitions = {(n, m): {x: x % m for x in range(n)} for (n, m) in order}
    return InverseSystem(levels, order, objects, transitions)


# -- finite groups as multiplication tables ------------------------------------


class FiniteGroup:
    def __init__(self, elements: Sequence, table: Mapping, name="G"):
        self.elements = list(elements)
        self.table = {k: v for k, v in table.items()}
        self.name = name
        self.identity = self._find_identity()

    def _find_identity(self):
        for e in self.elements:
            if all(
                self.table[(e, x)] == x and self.table[(x, e)] == x
                for x in self.elements
            ):
                return e
        raise ProfileMismatch("multiplication table has no identity")

    def mul(self, a, b):
        return self.table[(a, b)]

    def inv(self, a):
        for b in self.elements:
            if self.mul(a, b) == self.identity:
                return b
        raise ProfileMismatch(f"no inverse for {a}")

    def order(self):
        return len(self.elements)

    def power(self, a, k: int):
        if k < 0:
            return self.power(self.inv(a), -k)
        acc = self.identity
        for _ in range(k):
            acc = self.mul(acc, a)
        return acc

    def validate(self):
        es = set(self.elements)
        for a in es:
            for b in es:
                if self.table.get((a, b)) not in es:
                    return False, f"table not closed at ({a},{b})"
        for a in es:
            for b in es:
                for c in es:
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        return False, f"associativity fails at ({a},{b},{c})"
        return True, ""

    def subgroup_closure(self, gens):
        cur = {self.identity}
        frontier = set(gens) | cur
        while frontier > cur:
            cur = frontier
            frontier = set(cur)
            for a in cur:
                for b in cur:
                    frontier.add(self.mul(a, b))
                frontier.add(self.inv(a))
        return frozenset(cur)

    def all_subgroups(self):
        subs = {frozenset([self.identity])}
        frontier = {frozenset([self.identity])}
        while frontier:
            nxt = set()
            for h in frontier:
                for g in self.elements:
                    if g in h:
                        continue
                    h2 = self.subgroup_closure(h | {g})
                    if h2 not in subs:
                        subs.add(h2)
                        nxt.add(h2)
            frontier = nxt
        return sorted(subs, key=lambda s: (len(s), sorted(map(str, s))))

    def normal_subgroups(self):
        out = []
        for h in self.all_subgroups():
            if all(
                self.mul(self.mul(g, n), self.inv(g)) in h
                for g in self.elements
                for n in h
            ):
                out.append(h)
        return out


def cyclic_group(n: int) -> FiniteGroup:
    table = {(a, b): (a + b) % n for a in range(n) for b in range(n)}
    return FiniteGroup(list(range(n)), table, name=f"Z/{n}")


def symmetric_group(n: int) -> FiniteGroup:
    elems = list(itertools.permutations(range(n)))
    table = {
        (p, q): tuple(p[q[k]] for k in range(n)) for p in elems for q in elems
    }
    return FiniteGroup(elems, table, name=f"S{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Order 2n: pairs (rotation, flip) with the usual relations."""
    elems = [(r, f) for f in (0, 1) for r in range(n)]

    def mul(a, b):
        (r1, f1), (r2, f2) = a, b
        if f1 == 0:
            return ((r1 + r2) % n, f2)
        return ((r1 - r2) % n, 1 - f2)

    table = {(a, b): mul(a, b) for a in elems for b in elems}
    return FiniteGroup(elems, table, name=f"D{n}")


def product_group(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    elems = [(a, b) for a in g.elements for b in h.elements]
    table = {
        ((a1, b1), (a2, b2)): (g.mul(a1, a2), h.mul(b1, b2))
        for (a1, b1) in elems
        for (a2, b2) in elems
    }
    return FiniteGroup(elems, table, name=f"{g.name}x{h.name}")


def completion_system(g: FiniteGroup) -> InverseSystem:
    """Quotients by every normal subgroup, ordered by inclusion of kernels."""
    normals = g.normal_subgroups()
    idx = list(range(len(normals)))
    cosets = {}
    rep = {}
    for i, n in enumerate(normals):
        seen = {}
        for a in g.elements:
            cs = frozenset(g.mul(a, x) for x in n)
            seen.setdefault(cs, cs)
        cosets[i] = list(seen)
        rep[i] = {a: next(cs for cs in cosets[i] if a in cs) for a in g.elements}
    order = []
    transitions = {}
    for i, ni in enumerate(normals):
        for j, nj in enumerate(normals):
            if i != j and ni <= nj:
                order.append((i, j))
                transitions[(i, j)] = {
                    cs: rep[j][next(iter(cs))] for cs in cosets[i]
                }
    return InverseSystem(idx, order, cosets, transitions)


def completion_of_finite_group(g: FiniteGroup):
    """(limit points, natural map, is_isomorphism) for the profinite completion."""
    sys = completion_system(g)
    pts = limit(sys)
    nat = {}
    for a in g.elements:
        nat[a] = tuple(
            next(cs for cs in sys.objects[i] if a in cs) for i in sys.indices
        )
    injective = len(set(nat.values())) == len(g.elements)
    surjective = set(nat.values()) == set(pts)
    hom = all(
        tuple(
            next(
                cs
                for cs in sys.objects[i]
                if g.mul(a, b) in cs
            )
            for i in sys.indices
        )
        == nat[g.mul(a, b)]
        for a in g.elements
        for b in g.elements
    )
    return pts, nat, injective and surjective and hom


# -- finite groupoids -----------------------------------------------------------


class FiniteGroupoid:
    """Objects, hom-sets, composition tables, identities, inverses."""

    def __init__(self, objects, homs, comp, identities, name="C"):
        self.objects = list(objects)
        self.homs = {k: list(v) for k, v in homs.items()}
        self.comp = dict(comp)
        self.identities = dict(identities)
        self.name = name

    def hom(self, x, y):
        return self.homs.get((x, y), [])

    def compose(self, g, f):
        # g after f
        return self.comp[(g, f)]

    def validate(self):
        for x in self.objects:
            if self.identities.get(x) not in self.hom(x, x):
                return False, f"missing identity at {x}"
        for (x, y) in list(self.homs):
            for f in self.hom(x, y):
                if self.compose(f, self.identities[x]) != f:
                    return False, f"right unit fails at {f}"
                if self.compose(self.identities[y], f) != f:
                    return False, f"left unit fails at {f}"
                if not any(
                    self.compose(g, f) == self.identities[x]
                    and self.compose(f, g) == self.identities[y]
                    for g in self.hom(y, x)
                ):
                    return False, f"no inverse for {f}"
        for x in self.objects:
            for y in self.objects:
                for z in self.objects:
                    for w in self.objects:
                        for f in self.hom(x, y):
                            for g in self.hom(y, z):
                                for h in self.hom(z, w):
                                    lhs = self.compose(h, self.compose(g, f))
                                    rhs = self.compose(self.compose(h, g), f)
                                    if lhs != rhs:
                                        return False, "associativity fails"
        return True, ""


class GroupoidFunctor:
    def __init__(self, source, target, object_map, morphism_map):
        self.source = source
        self.target = target
        self.object_map = dict(object_map)
        self.morphism_map = dict(morphism_map)

    def validate(self):
        s, t = self.source, self.target
        for (x, y), fs in s.homs.items():
            for f in fs:
                if self.morphism_map[f] not in t.hom(
                    self.object_map[x], self.object_map[y]
                ):
                    return False, f"functor breaks hom typing at {f}"
        for (g, f), h in s.comp.items():
            if self.morphism_map[h] != t.compose(
                self.morphism_map[g], self.morphism_map[f]
            ):
                return False, f"functor breaks composition at ({g},{f})"
        for x, i in s.identities.items():
            if self.morphism_map[i] != t.identities[self.object_map[x]]:
                return False, f"functor breaks identities at {x}"
        return True, ""


def groupoid_equivalence(f: GroupoidFunctor) -> bool:
    """Fully faithful and essentially surjective, checked exhaustively."""
    ok, _ = f.validate()
    if not ok:
        return False
    s, t = f.source, f.target
    for x in s.objects:
        for y in s.objects:
            src = s.hom(x, y)
            images = [f.morphism_map[m] for m in src]
            tgt = t.hom(f.object_map[x], f.object_map[y])
            if len(set(images)) != len(src) or sorted(map(str, images)) != sorted(
                map(str, tgt)
            ):
                return False
    hit = set(f.object_map.values())
    for y in t.objects:
        if y in hit:
            continue
        if not any(t.hom(y, z) for z in hit):
            return False
    return True


def groupoid_product(c: FiniteGroupoid, d: FiniteGroupoid) -> FiniteGroupoid:
    objects = [(x, y) for x in c.objects for y in d.objects]
    homs = {}
    for (x1, x2) in objects:
        for (y1, y2) in objects:
            homs[((x1, x2), (y1, y2))] = [
                (f, g) for f in c.hom(x1, y1) for g in d.hom(x2, y2)
            ]
    comp = {}
    for ((g1, g2), (f1, f2)) in [
        (gg, ff)
        for key, fs in homs.items()
        for ff in fs
        for key2, gs in homs.items()
        for gg in gs
        if key[1] == key2[0]
    ]:
        if (g1, f1) in c.comp and (g2, f2) in d.comp:
            comp[((g1, g2), (f1, f2))] = (c.comp[(g1, f1)], d.comp[(g2, f2)])
    identities = {
        (x, y): (c.identities[x], d.identities[y]) for (x, y) in objects
    }
    return FiniteGroupoid(objects, homs, comp, identities, name=f"{c.name}x{d.name}")


def complete_groupoid(c: FiniteGroupoid) -> FiniteGroupoid:
    """Profinite completion is the identity on finite groupoids."""
    return c


def product_completion_check(c: FiniteGroupoid, d: FiniteGroupoid) -> bool:
    """The projections induce an isomorphism between the completed product
    and the product of completions; for finite groupoids both sides are the
    literal product, and the comparison functor is the identity, so the check
    verifies that it is bijective on objects and on every hom-set."""
    lhs = complete_groupoid(groupoid_product(c, d))
    rhs = groupoid_product(complete_groupoid(c), complete_groupoid(d))
    if sorted(map(str, lhs.objects)) != sorted(map(str, rhs.objects)):
        return False
    for key in set(lhs.homs) | set(rhs.homs):
        if sorted(map(str, lhs.homs.get(key, []))) != sorted(
            map(str, rhs.homs.get(key, []))
        ):
            return False
    return True


def group_as_groupoid(g: FiniteGroup) -> FiniteGroupoid:
    homs = {("*", "*"): list(g.elements)}
    comp = {(a, b): g.mul(a, b) for a in g.elements for b in g.elements}
    return FiniteGroupoid(["*"], homs, comp, {"*": g.identity}, name=g.name)
