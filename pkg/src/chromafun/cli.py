"""Command-line interface.

Exit codes: 0 success, 2 malformed input, 3 resource limit, 4 failed precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .cache import PersistentCache
from .chromatic import DEFAULT_VERTEX_LIMIT, PolynomialCache, chromatic_number, chromatic_polynomial, to_falling_factorial
from .errors import ChromaError, DomainError, ParseError
from .functor import DEFAULT_COLORING_BUDGET, build_natural_bijection, verify_all_injections
from .graph import GraphHom, Injection
from .graph6 import emit_graph6, parse_graph6
from .infinite import (
    DEFAULT_PROBE,
    Strip,
    analyze_transfer,
    build_transfer_digraph,
    chromatic_number_countable,
    continuum_witness,
    count_colorings,
    enumerate_finite_colorings,
    is_proper_on_prefix,
    load_countable,
)

CACHE_ENV = "CHROMAFUN_CACHE"


@dataclass
class RunConfig:
    vertex_limit: int = DEFAULT_VERTEX_LIMIT
    coloring_budget: int = DEFAULT_COLORING_BUDGET
    probe_bound: int = DEFAULT_PROBE
    cache_path: str | None = None
    output_format: str = "json"

    def __post_init__(self):
        for name in ("vertex_limit", "coloring_budget", "probe_bound"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_args(cls, args, environ=os.environ) -> RunConfig:
        return cls(
            vertex_limit=args.limit,
            coloring_budget=args.budget,
            probe_bound=args.probe,
            cache_path=environ.get(CACHE_ENV) or args.cache,
            output_format=args.format,
        )

    def open_cache(self) -> PolynomialCache:
        return PersistentCache(self.cache_path) if self.cache_path else PolynomialCache()


def _poly(g, cfg: RunConfig, cache):
    return chromatic_polynomial(g, vertex_limit=cfg.vertex_limit, cache=cache)


def cmd_chrompoly(args, cfg: RunConfig, cache) -> dict:
    g = parse_graph6(args.graph6)
    p = _poly(g, cfg, cache)
    return {
        "graph6": emit_graph6(g),
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "polynomial": p.to_json(),
        "text": str(p),
        "st": to_falling_factorial(p).to_json()["st"],
        "chromatic_number": chromatic_number(g, vertex_limit=cfg.vertex_limit, cache=cache) if g.vertex_count else None,
    }


def cmd_equiv(args, cfg: RunConfig, cache) -> dict:
    g1, g2 = parse_graph6(args.graph6_a), parse_graph6(args.graph6_b)
    s1 = to_falling_factorial(_poly(g1, cfg, cache))
    s2 = to_falling_factorial(_poly(g2, cfg, cache))
    return {
        "equivalent": s1 == s2,
        "st1": s1.to_json()["st"],
        "st2": s2.to_json()["st"],
        "first_difference": s1.first_difference(s2),
    }


def cmd_natiso(args, cfg: RunConfig, cache) -> dict:
    g1, g2 = parse_graph6(args.graph6_a), parse_graph6(args.graph6_b)
    r = build_natural_bijection(g1, g2)
    cert = verify_all_injections(r, args.max_colors, budget=cfg.coloring_budget)
    out = dict(r.to_json())
    out["max_colors"] = args.max_colors
    out["certificate"] = cert
    if not cert["natural"]:
        raise DomainError(f"naturality certificate failed: {json.dumps(cert)}")
    return out


def cmd_strip(args, cfg: RunConfig, cache) -> dict:
    g = load_countable(args.graph)
    n = args.n
    card = count_colorings(g, n)
    out = {"graph": getattr(g, "name", "strip"), "n": n, "cardinality": card.to_json(), "probe": cfg.probe_bound}
    strip = g if isinstance(g, Strip) else getattr(g, "strip", None)
    if strip is not None:
        td = build_transfer_digraph(strip, n)
        an = analyze_transfer(td)
        out["states"] = len(td.states)
        out["arcs"] = td.arc_count
        out["live_states"] = len(an.live)
        if card.is_finite:
            cols = enumerate_finite_colorings(strip, n)
            out["colorings"] = [c.describe() for c in cols]
            out["proper_on_probe"] = all(is_proper_on_prefix(strip, c, cfg.probe_bound) for c in cols)
        elif an.branch is not None:
            w = continuum_witness(strip, n)
            out["witness"] = {
                "state": "".join(map(str, w.state)),
                "successors": ["".join(map(str, s)) for s in w.successors],
                "colorings": [c.describe() for c in w.colorings],
                "first_difference_cell": w.position,
                "proper_on_probe": all(is_proper_on_prefix(strip, c, cfg.probe_bound) for c in w.colorings),
            }
        elif an.exit_arc is not None:
            s, t = an.exit_arc
            out["exit_arc"] = ["".join(map(str, td.states[s])), "".join(map(str, td.states[t]))]
    chi = chromatic_number_countable(g)
    out["chromatic_number"] = chi if isinstance(chi, int) else "infinite"
    if hasattr(g, "stable_partition_report"):
        out["report"] = g.stable_partition_report()
    return out


def _corpus_line(item, cfg: RunConfig, cache):
    lineno, text = item
    try:
        g = parse_graph6(text)
        p = _poly(g, cfg, cache)
        return lineno, text, p, None
    except ChromaError as exc:
        return lineno, text, None, exc


def cmd_corpus(args, cfg: RunConfig, cache) -> dict:
    with open(args.file, encoding="ascii", errors="replace") as fh:
        items = [(k, line.strip()) for k, line in enumerate(fh, start=1) if line.strip()]
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        results = list(pool.map(lambda it: _corpus_line(it, cfg, cache), items))
    classes: dict = {}
    errors = []
    for lineno, text, p, exc in results:
        if exc is not None:
            errors.append({"line": lineno, "error": str(exc), "exit_code": exc.exit_code})
            continue
        st = to_falling_factorial(p)
        cls = classes.setdefault(st, {"st": st.to_json()["st"], "polynomial": str(p), "members": []})
        cls["members"].append({"line": lineno, "graph6": text})
    report = [
        dict(c, size=len(c["members"]), representative=c["members"][0]["graph6"]) for c in classes.values()
    ]
    return {"graphs": len(items) - len(errors), "classes": report, "errors": errors}


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",")) if text else ()
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_cbs(args, cfg: RunConfig, cache) -> dict:
    from .cbs import chromatic_cbs

    g1, g2 = parse_graph6(args.graph6_a), parse_graph6(args.graph6_b)
    phi = GraphHom(g1, g2, _int_list(args.phi))
    psi = GraphHom(g2, g1, _int_list(args.psi))
    f = Injection(args.m, args.n, _int_list(args.f) if args.f else tuple(range(args.m)))
    res = chromatic_cbs(g1, g2, phi, psi, f, budget=cfg.coloring_budget)
    c1, c2 = res.result.c_sets
    return {"bijections": res.index_pairs(g1, g2), "c_sizes": [len(c1), len(c2)]}


COMMANDS = {
    "chrompoly": cmd_chrompoly,
    "equiv": cmd_equiv,
    "natiso": cmd_natiso,
    "strip": cmd_strip,
    "corpus": cmd_corpus,
    "cbs": cmd_cbs,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--limit", type=int, default=DEFAULT_VERTEX_LIMIT, help="vertex limit for polynomials")
    common.add_argument("--budget", type=int, default=DEFAULT_COLORING_BUDGET, help="coloring enumeration budget")
    common.add_argument("--probe", type=int, default=DEFAULT_PROBE, help="vertices checked in prefix claims")
    common.add_argument("--cache", default=None, help=f"polynomial cache file (${CACHE_ENV} overrides)")
    common.add_argument("--format", choices=("json", "table"), default="json")

    parser = argparse.ArgumentParser(prog="chromafun", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chrompoly", parents=[common], help="chromatic polynomial of a graph6 graph")
    p.add_argument("graph6")
    p = sub.add_parser("equiv", parents=[common], help="compare two graphs by their St vectors")
    p.add_argument("graph6_a")
    p.add_argument("graph6_b")
    p = sub.add_parser("natiso", parents=[common], help="natural isomorphism of coloring functors")
    p.add_argument("graph6_a")
    p.add_argument("graph6_b")
    p.add_argument("--max-colors", type=int, default=4)
    p = sub.add_parser("strip", parents=[common], help="cardinality of colorings of a countable graph")
    p.add_argument("graph", help="fixture name or strip JSON")
    p.add_argument("n", type=int)
    p = sub.add_parser("corpus", parents=[common], help="group a graph6 file into equivalence classes")
    p.add_argument("file")
    p.add_argument("--jobs", type=int, default=4)
    p = sub.add_parser("cbs", parents=[common], help="commuting bijections from surjective homomorphisms")
    p.add_argument("graph6_a")
    p.add_argument("graph6_b")
    p.add_argument("--phi", required=True, help="images of g1's vertices in g2")
    p.add_argument("--psi", required=True, help="images of g2's vertices in g1")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", default=None, help="images of the injection [m] -> [n]")
    return parser


def _table(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_table(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False) if not isinstance(v, str) else v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_table(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(obj, fmt: str) -> str:
    if fmt == "table":
        return "\n".join(_table(obj))
    return json.dumps(obj, ensure_ascii=False, sort_keys=False)


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args, os.environ if environ is None else environ)
    except ValueError as exc:
        parser.error(str(exc))
    cache = cfg.open_cache()
    try:
        result = COMMANDS[args.command](args, cfg, cache)
    except ChromaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        if isinstance(cache, PersistentCache):
            cache.flush()
    print(render(result, cfg.output_format))
    if args.command == "corpus" and result["errors"]:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
