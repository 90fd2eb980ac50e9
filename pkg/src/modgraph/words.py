"""Free-group word calculus over {x, y} and the two word-level GT relations.

Words are freely reduced tuples of (generator, +-1).  Relation (I) is
f(x,y)f(y,x) = 1; relation (II) is f(x,y) x^m f(z,x) z^m f(y,z) y^m = 1
with xyz = 1 and m = (lambda-1)/2, checked by free reduction.  Relations
(III) and (IV) need profinite mapping class groups and are refused.
"""

from __future__ import annotations

from typing import Sequence

from .errors import LambdaEven, NotGenerated, UnsupportedRelation
from .profinite import FiniteGroup


Letter = tuple[str, int]


def reduce_word(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    """Freely reduce: cancel adjacent (g, s), (g, -s) pairs."""
    stack: list[Letter] = []
    for (g, s) in letters:
        if s not in (1, -1):
            raise ValueError(f"bad exponent sign {s}")
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


def word(text: str) -> tuple[Letter, ...]:
    """Parse 'x y X Y' style words; capital letters are inverses."""
    out = []
    for tok in text.split():
        if tok.isupper():
            out.append((tok.lower(), -1))
        else:
            out.append((tok, 1))
    return reduce_word(out)


def word_str(w: Sequence[Letter]) -> str:
    return " ".join(g.upper() if s < 0 else g for (g, s) in w)


def invert(w: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple((g, -s) for (g, s) in reversed(list(w)))


def concat(*ws) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for w in ws:
        out.extend(w)
    return reduce_word(out)


def power(w: Sequence[Letter], k: int) -> tuple[Letter, ...]:
    if k < 0:
        return power(invert(w), -k)
    return concat(*([tuple(w)] * k)) if k else ()


def substitute(f: Sequence[Letter], a: Sequence[Letter], b: Sequence[Letter]):
    """Replace x by a and y by b throughout f, then reduce."""
    images = {"x": tuple(a), "y": tuple(b)}
    out: list[Letter] = []
    for (g, s) in f:
        img = images.get(g)
        if img is None:
            raise ValueError(f"substitution only replaces x and y, found {g}")
        out.extend(img if s > 0 else invert(img))
    return reduce_word(out)


def exponent_sums(w: Sequence[Letter]) -> dict[str, int]:
    out: dict[str, int] = {}
    for (g, s) in w:
        out[g] = out.get(g, 0) + s
    return out


class GtPair:
    """(lambda, f): lambda odd, f with zero exponent sum in both generators."""

    def __init__(self, lam: int, f: Sequence[Letter]):
        if lam % 2 == 0:
            raise LambdaEven("lambda must be odd so that m=(lambda-1)/2 is integral")
        f = reduce_word(f)
        sums = exponent_sums(f)
        if sums.get("x", 0) != 0 or sums.get("y", 0) != 0:
            raise ValueError("f must have zero exponent sum in x and y")
        self.lam = lam
        self.f = f

    @property
    def m(self) -> int:
        return (self.lam - 1) // 2


X = (("x", 1),)
Y = (("y", 1),)
Z = invert(concat(X, Y))  # z with xyz = 1


def check_relation_i(f: Sequence[Letter]) -> bool:
    """f(x,y) f(y,x) = 1 in the free group."""
    return concat(substitute(f, X, Y), substitute(f, Y, X)) == ()


def check_relation_ii(lam: int, f: Sequence[Letter]) -> bool:
    """f(x,y) x^m f(z,x) z^m f(y,z) y^m = 1 with z = (xy)^{-1}, m = (lambda-1)/2."""
    if lam % 2 == 0:
        raise LambdaEven("relation (II) needs an odd lambda")
    m = (lam - 1) // 2
    prod = concat(
        substitute(f, X, Y),
        power(X, m),
        substitute(f, Z, X),
        power(Z, m),
        substitute(f, Y, Z),
        power(Y, m),
    )
    return prod == ()


def check_relation(name: str, lam: int, f: Sequence[Letter]) -> bool:
    if name == "I":
        return check_relation_i(f)
    if name == "II":
        return check_relation_ii(lam, f)
    raise UnsupportedRelation(
        f"relation ({name}) needs profinite mapping class groups and is not implemented"
    )


def word_in_group(g: FiniteGroup, w: Sequence[Letter], images: dict):
    acc = g.identity
    for (gen, s) in w:
        val = images[gen]
        acc = g.mul(acc, val if s > 0 else g.inv(val))
    return acc


def induced_endo_on_quotient(pair: GtPair, g: FiniteGroup, a, b):
    """Images of x and y in a finite quotient, with a bijectivity proxy.

    Sends x to a^lambda and y to f(a,b)^{-1) b^lambda f(a,b); the map is
    reported bijective when the images generate a subgroup of the same
    order as <a, b>, which must be all of g.
    """
    gen = g.subgroup_closure([a, b])
    if len(gen) != g.order():
        raise NotGenerated("the chosen images do not generate the group")
    fab = word_in_group(g, pair.f, {"x": a, "y": b})
    xa = g.power(a, pair.lam)
    yb = g.mul(g.mul(g.inv(fab), g.power(b, pair.lam)), fab)
    image_subgroup = g.subgroup_closure([xa, yb])
    return {"x": xa, "y": yb}, len(image_subgroup) == g.order()
