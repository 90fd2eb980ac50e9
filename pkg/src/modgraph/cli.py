"""Command-line front door: JSON in, a machine-readable report out.

Exit codes: 0 pass, 1 fail (with witnesses), 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import (
    GtPair,
    ModgraphError,
    charge_operad,
    check_relation_i,
    check_relation_ii,
    classify_elementary,
    compose_chain,
    decorations,
    extract_modular_operad,
    factorize,
    graph_from_json,
    graph_to_json,
    hom_set,
    in_u0,
    in_ucyc,
    induced_endo_on_quotient,
    is_strict_inner_kan,
    is_strict_segal,
    limit,
    make_carrier,
    nerve_presheaf,
    swap_terminal_operad,
    terminal_operad,
    total_genus,
    ust_has_no_codegeneracies,
    validate_graphical_map,
    validate_modular_operad,
    verify_sieve,
    word,
    word_str,
    zhat_add,
    zhat_from_int,
    zhat_mul,
)
from .errors import SearchBudgetExceeded
from .graphs import FeynmanGraph, GenusGraph, canonicalize
from .maps import GraphicalMap
from .embeddings import Embedding
from .operads import ColourSet, ModularOperad
from .profinite import InverseSystem
from .variants import GenusMorphism, validate_genus_morphism


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _graph(doc):
    g = graph_from_json(doc)
    return g.graph if isinstance(g, GenusGraph) else g


def _map_from_json(doc) -> GraphicalMap:
    src = _graph(doc["source"])
    tgt = _graph(doc["target"])
    assignments = {}
    for v, e in doc.get("phi1", {}).items():
        shape = graph_from_json(e["shape"])
        assignments[v] = Embedding(shape, tgt, e["arc_map"], e.get("vertex_map", {}))
    return GraphicalMap(src, tgt, doc["arc_map"], assignments)


def _operad_from_json(doc) -> ModularOperad:
    named = doc.get("builtin")
    if named:
        arity = int(doc.get("max_arity", 6))
        return {
            "terminal": terminal_operad,
            "charge": charge_operad,
            "swap-terminal": swap_terminal_operad,
        }[named](arity)
    cs = ColourSet(doc["colours"], doc.get("dagger"))

    def parse_profile(s):
        return tuple(s.split(",")) if s else ()

    entries = {parse_profile(k): v for k, v in doc["entries"].items()}
    sigma_tab = {
        (parse_profile(p), tuple(perm), _dejson(x)): _dejson(y)
        for p, perm, x, y in doc.get("sigma", [])
    }
    comp_tab = {
        (parse_profile(p1), _dejson(x), i, parse_profile(p2), _dejson(y), j): _dejson(z)
        for p1, x, i, p2, y, j, z in doc.get("comp", [])
    }
    contract_tab = {
        (parse_profile(p), _dejson(x), i, j): _dejson(z)
        for p, x, i, j, z in doc.get("contract", [])
    }

    def sigma_fn(profile, perm, x):
        if perm == tuple(range(len(profile))):
            return x
        return sigma_tab[(profile, perm, x)]

    def comp_fn(p1, x, i, p2, y, j):
        return comp_tab[(p1, x, i, p2, y, j)]

    def contract_fn(profile, x, i, j):
        return contract_tab[(profile, x, i, j)]

    return ModularOperad(
        cs,
        int(doc["max_arity"]),
        entries,
        doc["units"],
        sigma_fn,
        comp_fn,
        contract_fn,
        name=doc.get("name", "operad"),
    )


def _dejson(x):
    return tuple(x) if isinstance(x, list) else x


def _report(verb, status, witnesses, started, extra=None):
    doc = {
        "verb": verb,
        "status": status,
        "witnesses": witnesses,
        "timing": round(time.perf_counter() - started, 6),
    }
    if extra:
        doc.update(extra)
    return doc


def _emit(doc, quiet=False):
    if not quiet:
        print(json.dumps(doc, sort_keys=True, default=str))
    return {"pass": 0, "fail": 1, "error": 2}[doc["status"]]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="modgraph", description="graphical-category and modular-operad checks"
    )
    parser.add_argument("--quiet", action="store_true", help="suppress the report")
    parser.add_argument("--budget", type=int, default=10**6)
    parser.add_argument("--max-degree", type=int, default=4)
    sub = parser.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("graph-validate")
    sp.add_argument("graph")
    sp = sub.add_parser("homs")
    sp.add_argument("source")
    sp.add_argument("target")
    sp = sub.add_parser("factorize")
    sp.add_argument("map", help="JSON with source, target, arc_map, phi1")
    sp = sub.add_parser("operad-validate")
    sp.add_argument("operad")
    sp = sub.add_parser("nerve")
    sp.add_argument("operad")
    sp.add_argument("--graph", default=None)
    sp = sub.add_parser("segal-check")
    sp.add_argument("operad")
    sp = sub.add_parser("horn-check")
    sp.add_argument("operad")
    sp = sub.add_parser("extract")
    sp.add_argument("operad")
    sp = sub.add_parser("sieve-check")
    sp.add_argument("--predicate", choices=["u0", "ucyc"], required=True)
    sp.add_argument("samples", help="JSON list of graphs")
    sp = sub.add_parser("stable-check")
    sp.add_argument("samples", help="JSON list of genus graphs")
    sp = sub.add_parser("genus")
    sp.add_argument("graph", help="graph JSON with a genus table")
    sp = sub.add_parser("zhat")
    sp.add_argument("--levels", required=True, help="comma-separated level set")
    sp.add_argument("--op", choices=["from-int", "add", "mul"], default="from-int")
    sp.add_argument("ints", nargs="+", type=int)
    sp = sub.add_parser("limit")
    sp.add_argument("tower", help="JSON inverse system")
    sp = sub.add_parser("gt-check")
    sp.add_argument("--lambda", dest="lam", type=int, required=True)
    sp.add_argument("--f", dest="f", required=True)
    sp.add_argument("--quotient", default=None, help="group JSON (elements, table)")
    sp.add_argument("--x", dest="gx", default=None)
    sp.add_argument("--y", dest="gy", default=None)

    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        doc = _run(args, started)
    except (ModgraphError, KeyError, ValueError, OSError, json.JSONDecodeError) as exc:
        doc = _report(args.verb, "error", [f"{type(exc).__name__}: {exc}"], started)
    return _emit(doc, args.quiet)


def _run(args, started):
    verb = args.verb
    if verb == "graph-validate":
        g = graph_from_json(_load(args.graph))
        graph = g.graph if isinstance(g, GenusGraph) else g
        return _report(
            verb,
            "pass",
            [],
            started,
            {
                "arcs": len(graph.arcs),
                "vertices": len(graph.vertices),
                "degree": graph.degree(),
                "betti": graph.betti(),
            },
        )
    if verb == "homs":
        h = _graph(_load(args.source))
        g = _graph(_load(args.target))
        homs = hom_set(h, g, args.budget)
        return _report(verb, "pass", [], started, {"count": len(homs)})
    if verb == "factorize":
        phi = _map_from_json(_load(args.map))
        ok, why = validate_graphical_map(phi)
        if not ok:
            return _report(verb, "fail", [why], started)
        cods, cofs, iso = factorize(phi)
        rebuilt = compose_chain(cods + [iso] + cofs)
        return _report(
            verb,
            "pass" if rebuilt.key == phi.key else "fail",
            [] if rebuilt.key == phi.key else ["recomposition mismatch"],
            started,
            {
                "codegeneracies": len(cods),
                "cofaces": len(cofs),
                "coface_kinds": [str(classify_elementary(c).value) for c in cofs],
            },
        )
    if verb == "operad-validate":
        p = _operad_from_json(_load(args.operad))
        ok, why = validate_modular_operad(p)
        return _report(verb, "pass" if ok else "fail", [] if ok else [why], started)
    if verb == "nerve":
        p = _operad_from_json(_load(args.operad))
        if args.graph:
            g = _graph(_load(args.graph))
            decs = decorations(p, g)
            return _report(verb, "pass", [], started, {"count": len(decs)})
        carrier = make_carrier(args.max_degree, 3, 3)
        x = nerve_presheaf(p, carrier=carrier)
        table = {
            json.dumps(graph_to_json(g), sort_keys=True): len(x.value(g))
            for g in x.graphs
        }
        return _report(verb, "pass", [], started, {"values": table})
    if verb in ("segal-check", "horn-check"):
        p = _operad_from_json(_load(args.operad))
        carrier = make_carrier(args.max_degree, 3, 3)
        x = nerve_presheaf(p, carrier=carrier)
        checker = is_strict_segal if verb == "segal-check" else is_strict_inner_kan
        ok, wit = checker(x)
        return _report(
            verb,
            "pass" if ok else "fail",
            [json.dumps(graph_to_json(g), sort_keys=True) for g, _ in wit],
            started,
        )
    if verb == "extract":
        p = _operad_from_json(_load(args.operad))
        carrier = make_carrier(args.max_degree, 3, 3)
        x = nerve_presheaf(p, carrier=carrier)
        q = extract_modular_operad(x, max_arity=3)
        ok, why = validate_modular_operad(q)
        return _report(
            verb,
            "pass" if ok else "fail",
            [] if ok else [why],
            started,
            {
                "colours": len(q.colours.colours),
                "entry_sizes": {
                    ",".join(k): len(v) for k, v in sorted(q.entries.items())
                },
            },
        )
    if verb == "sieve-check":
        samples = [_graph(doc) for doc in _load(args.samples)]
        pred = in_u0 if args.predicate == "u0" else in_ucyc
        ok, counter = verify_sieve(pred, samples, args.budget)
        return _report(
            verb,
            "pass" if ok else "fail",
            [] if ok else [repr(counter)],
            started,
        )
    if verb == "stable-check":
        samples = []
        for doc in _load(args.samples):
            gg = graph_from_json(doc)
            if not isinstance(gg, GenusGraph):
                raise ValueError("stable-check samples need genus tables")
            samples.append(gg)
        ok, wit = ust_has_no_codegeneracies(samples, args.budget)
        return _report(
            verb, "pass" if ok else "fail", [] if ok else [repr(wit)], started
        )
    if verb == "genus":
        gg = graph_from_json(_load(args.graph))
        if not isinstance(gg, GenusGraph):
            raise ValueError("genus verb needs a genus table")
        return _report(verb, "pass", [], started, {"total_genus": total_genus(gg)})
    if verb == "zhat":
        levels = [int(t) for t in args.levels.split(",")]
        if args.op == "from-int":
            z = zhat_from_int(args.ints[0], levels)
        else:
            fn = zhat_add if args.op == "add" else zhat_mul
            z = fn(
                zhat_from_int(args.ints[0], levels),
                zhat_from_int(args.ints[1], levels),
            )
        return _report(
            verb,
            "pass",
            [],
            started,
            {"residues": {str(n): z.residues[n] for n in z.levels}},
        )
    if verb == "limit":
        doc = _load(args.tower)
        sys_ = InverseSystem(
            doc["indices"],
            [tuple(p) for p in doc["order"]],
            {k: v for k, v in zip(doc["indices"], doc["objects"])},
            {
                (i, j): {_dejson(a): _dejson(b) for a, b in t}
                for (i, j), t in zip(
                    [tuple(p) for p in doc["order"]], doc["transitions"]
                )
            },
        )
        pts = limit(sys_)
        return _report(verb, "pass", [], started, {"count": len(pts)})
    if verb == "gt-check":
        f = word(args.f)
        r1 = check_relation_i(f)
        r2 = check_relation_ii(args.lam, f)
        extra = {"relation_I": r1, "relation_II": r2}
        status = "pass" if (r1 and r2) else "fail"
        witnesses = [] if status == "pass" else [
            w for w, okw in (("relation_I", r1), ("relation_II", r2)) if not okw
        ]
        if args.quotient:
            gdoc = _load(args.quotient)
            from .profinite import FiniteGroup

            table = {
                (_dejson(a), _dejson(b)): _dejson(c) for a, b, c in gdoc["table"]
            }
            grp = FiniteGroup([_dejson(e) for e in gdoc["elements"]], table)
            pair = GtPair(args.lam, f)
            images, bij = induced_endo_on_quotient(
                pair, grp, _dejson(json.loads(args.gx)), _dejson(json.loads(args.gy))
            )
            extra["quotient_bijective"] = bij
        return _report(verb, status, witnesses, started, extra)
    raise ValueError(f"unknown verb {verb}")


if __name__ == "__main__":
    sys.exit(main())
