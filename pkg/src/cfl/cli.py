"""Command-line interface: ``cfl <command> [options]``.

Every command prints JSON (or DOT/SVG where asked) to standard output.
Failures print ``{"error": <kind>, "message": ...}`` to standard error and
exit with status 2; a verification that runs but finds violations exits with 1.

File formats
------------
graph       {"vertices": ["1", ...], "edges": [["1", "2"], ...]}
assignment  {"d": 2, "anti_standard": [[["1","2"],["2","3"]], ...]}
order       {"d": 2, "order": [[["1","2"]], ...]}   (smallest first)
chain       {"d": 2, "flips": [[["1","2"],["2","3"]], ...]}
cubillage   {"n": 4, "d": 2, "cubes": [{"X": [2, 3], "T": [1, 4]}, ...]}
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from dataclasses import dataclass
from pathlib import Path as FsPath

from .bridge import MaximalChain, descend, lift_chain_details
from .corteges import Cortege, enumerate_corteges
from .cubillage import (
    Cubillage,
    bits,
    capsid,
    cubillage_flip_graph,
    extreme_cubillage,
    mask_of,
    natural_order_dag,
    validate_cubillage,
    ziegler_sets,
)
from .digraph import Digraph, enumerate_paths, enumerate_routes, load_digraph, two_route_graph, small_dags
from .errors import CflError, PreconditionViolated, default_cap
from .orders import (
    ConvexOrder,
    TypeAssignment,
    apply_flip,
    brute_force_orders,
    check_convex,
    extreme_order,
    flip_graph,
    representative,
    verify_poset,
)
from .zonotope import default_configuration, veronese_configuration


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    d: int = 2
    k: int = 1
    n: int = 4
    dim: int = 2
    t: tuple[int, ...] | None = None
    cap: int | None = None
    side: str = "std"
    dot: bool = False
    svg_out: str | None = None
    json_out: str | None = None
    seed: int = 0
    order: str | None = None
    chain: str | None = None
    tiling: str | None = None
    cortege: str | None = None
    capsid: tuple[int, ...] | None = None
    arrows: bool = False
    max_vertices: int = 4
    degrees: tuple[int, ...] = (2, 3)

    def __post_init__(self):
        if self.cap is not None and self.cap <= 0:
            raise PreconditionViolated(f"cap must be positive, got {self.cap}")
        if self.cap is None:
            self.cap = default_cap()

    def load_graph(self) -> Digraph:
        if self.graph is None or self.graph == "example":
            return two_route_graph()
        return load_digraph(self.graph)


# ------------------------------------------------------------ serialization


def cortege_to_json(c: Cortege) -> list[list[str]]:
    return [list(part) for part in c]


def cortege_from_json(data) -> Cortege:
    return tuple(tuple(str(v) for v in part) for part in data)


def assignment_to_json(sigma: TypeAssignment) -> dict:
    return {"d": sigma.d, "anti_standard": [cortege_to_json(c) for c in sigma.sorted_anti()]}


def order_to_json(order: ConvexOrder) -> dict:
    return {"d": order.d, "order": [cortege_to_json(c) for c in order.sequence]}


def read_assignment(graph: Digraph, data: dict) -> TypeAssignment:
    """Accepts either an order document or an assignment document."""
    d = int(data["d"])
    if "order" in data:
        order = ConvexOrder(graph, d, tuple(cortege_from_json(c) for c in data["order"]))
        return check_convex(order)
    anti = frozenset(cortege_from_json(c) for c in data["anti_standard"])
    sigma = TypeAssignment(graph, d, anti)
    unknown = anti - set(sigma.system.upper)
    if unknown:
        raise PreconditionViolated(f"not {d}-corteges of the graph: {sorted(unknown)}")
    representative(sigma)  # raises when the forced relations have a cycle
    return sigma


def _read_json(source: str | None, flag: str):
    if source is None:
        raise PreconditionViolated(f"missing {flag} (use '-' to read standard input)")
    if source == "-":
        return json.load(sys.stdin)
    return json.loads(FsPath(source).read_text())


# ------------------------------------------------------------------ SVG


def render_svg(q: Cubillage, bold_packet=None, arrows: bool = False, scale: float = 40.0) -> str:
    """Rhombus picture of a two-dimensional cubillage.

    Only the combinatorics is drawn: color i is shown as a unit vector at angle
    pi * i / (n + 1), which has the same cyclic order as any cyclic configuration.
    """
    if q.d != 2:
        raise PreconditionViolated("rendering is only available for d = 2")
    n = q.n
    vec = {i: (-math.cos(math.pi * i / (n + 1)), math.sin(math.pi * i / (n + 1))) for i in range(1, n + 1)}

    def point(mask):
        x = sum(vec[i][0] for i in bits(mask))
        y = sum(vec[i][1] for i in bits(mask))
        return x, y

    top = point(mask_of(range(1, n + 1)))
    xs = [point(mask_of(range(1, k + 1)))[0] for k in range(n + 1)] + [
        point(mask_of(range(k, n + 1)))[0] for k in range(1, n + 2)
    ]
    xmin, xmax = min(xs), max(xs)
    margin = 0.5
    width = (xmax - xmin + 2 * margin) * scale
    height = (top[1] + 2 * margin) * scale

    def screen(p):
        return (p[0] - xmin + margin) * scale, height - (p[1] + margin) * scale

    bold = set()
    if bold_packet:
        bold = set(capsid(q, bold_packet).cubes)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}" '
        f'viewBox="0 0 {width:.1f} {height:.1f}">',
        '<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto">'
        '<path d="M0,0 L6,3 L0,6 z" fill="#c0392b"/></marker></defs>',
    ]
    centers = {}
    for c in q.sorted_cubes:
        a, b = bits(c.T)
        corners = [c.X, c.X | 1 << a, c.X | 1 << a | 1 << b, c.X | 1 << b]
        pts = [screen(point(m)) for m in corners]
        centers[c] = (sum(p[0] for p in pts) / 4, sum(p[1] for p in pts) / 4)
        stroke = 3.0 if c in bold else 1.0
        poly = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        out.append(
            f'<polygon class="rhombus" data-cube="{c}" points="{poly}" '
            f'fill="#eef3fb" stroke="#1f2d3d" stroke-width="{stroke}"/>'
        )
    for c in q.sorted_cubes:
        x, y = centers[c]
        out.append(f'<text x="{x:.2f}" y="{y + 4:.2f}" font-size="10" text-anchor="middle">{c}</text>')
    if arrows:
        for a, succ in natural_order_dag(q).items():
            for b in succ:
                (x1, y1), (x2, y2) = centers[a], centers[b]
                out.append(
                    f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                    'stroke="#c0392b" stroke-width="1" marker-end="url(#arrow)"/>'
                )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- commands


def _configuration(cfg: RunConfig):
    if cfg.t is not None:
        if len(cfg.t) != cfg.n:
            raise PreconditionViolated(f"--t has {len(cfg.t)} values but --n is {cfg.n}")
        return veronese_configuration(cfg.t, cfg.dim)
    return default_configuration(cfg.n, cfg.dim)


def cmd_paths(cfg):
    g = cfg.load_graph()
    return {
        "paths": [list(p) for p in enumerate_paths(g, cfg.cap)],
        "routes": [list(r) for r in enumerate_routes(g)],
    }


def cmd_corteges(cfg):
    g = cfg.load_graph()
    cs = enumerate_corteges(g, cfg.k, cfg.cap)
    return {"k": cfg.k, "count": len(cs), "corteges": [cortege_to_json(c) for c in cs]}


def cmd_extreme_order(side):
    def run(cfg):
        order = extreme_order(cfg.load_graph(), cfg.d, side)
        out = order_to_json(order)
        out["anti_standard"] = assignment_to_json(check_convex(order))["anti_standard"]
        return out

    return run


def cmd_flip(cfg):
    g = cfg.load_graph()
    sigma = read_assignment(g, _read_json(cfg.order, "--order"))
    if cfg.cortege is None:
        raise PreconditionViolated("flip needs --cortege")
    p = cortege_from_json(json.loads(cfg.cortege))
    return assignment_to_json(apply_flip(sigma, p))


def cmd_flip_graph(cfg):
    fg = flip_graph(cfg.load_graph(), cfg.d, cfg.cap)
    if cfg.dot:
        return fg.to_dot()
    sysm = fg.system
    return {
        "d": cfg.d,
        "nodes": [[cortege_to_json(c) for c in sysm.upper if m >> sysm.upper_index[c] & 1] for m in fg.masks],
        "arcs": [[a, b] for a, b, _ in fg.arcs],
    }


def cmd_verify(cfg):
    g = cfg.load_graph()
    report = verify_poset(flip_graph(g, cfg.d, cfg.cap), strict=True)
    out = report.to_json()
    out["d"] = cfg.d
    return out, 0 if report.ok else 1


def cmd_cubillage(cfg):
    config = _configuration(cfg)
    side = {"std": "front", "anti": "rear"}.get(cfg.side)
    if side is None:
        raise PreconditionViolated(f"cubillage side must be std or anti, got {cfg.side!r}")
    q = extreme_cubillage(config, side)
    out = q.to_json()
    if cfg.t is not None:
        out["t"] = list(cfg.t)
    return out


def cmd_cubillage_flips(cfg):
    fg = cubillage_flip_graph(cfg.n, cfg.dim, _configuration(cfg), cfg.cap)
    if cfg.dot:
        lines = ["digraph cubillages {", "  rankdir=BT;"]
        for i, k in enumerate(fg.keys):
            label = " ".join("".join(map(str, bits(p))) for p in sorted(k, key=bits))
            lines.append(f'  n{i} [label="{{{label}}}"];')
        lines.extend(f"  n{a} -> n{b};" for a, b, _ in fg.arcs)
        lines.append("}")
        return "\n".join(lines) + "\n"
    return {
        "n": cfg.n,
        "d": cfg.dim,
        "nodes": len(fg),
        "arcs": len(fg.arcs),
        "sources": fg.sources(),
        "sinks": fg.sinks(),
        "inversion_sets": [sorted((bits(p) for p in k)) for k in fg.keys],
    }


def cmd_ziegler(cfg):
    sets = ziegler_sets(cfg.n, cfg.dim, cfg.cap)
    return {"n": cfg.n, "d": cfg.dim, "count": len(sets), "sets": [sorted(bits(p) for p in s) for s in sets]}


def cmd_lift(cfg):
    g = cfg.load_graph()
    chain = MaximalChain.from_json(g, _read_json(cfg.chain, "--chain"))
    lift = lift_chain_details(chain)
    out = order_to_json(lift.order)
    out["anti_standard"] = assignment_to_json(lift.assignment)["anti_standard"]
    return out


def cmd_descend(cfg):
    g = cfg.load_graph()
    sigma = read_assignment(g, _read_json(cfg.order, "--order"))
    return descend(sigma).to_json()


def cmd_roundtrip(cfg):
    """Pick a class of degree d+1 with the seed, descend to a chain and lift it back."""
    g = cfg.load_graph()
    fg = flip_graph(g, cfg.d + 1, cfg.cap)
    rng = random.Random(cfg.seed)
    sigma = fg.node(rng.randrange(len(fg)))
    chain = descend(sigma)
    back = lift_chain_details(chain).assignment
    ok = back.anti_standard == sigma.anti_standard
    return {
        "seed": cfg.seed,
        "class": assignment_to_json(sigma),
        "chain": chain.to_json(),
        "lifted": assignment_to_json(back),
        "ok": ok,
    }, 0 if ok else 1


def cmd_render(cfg):
    q = Cubillage.from_json(_read_json(cfg.tiling or "-", "--tiling"))
    report = validate_cubillage(q)
    if not report.ok:
        raise PreconditionViolated(f"not a valid cubillage: {report.failures}")
    return render_svg(q, cfg.capsid, cfg.arrows)


def corpus_graphs(max_vertices: int) -> list[tuple[str, Digraph]]:
    out = [(f"dag{i}", g) for i, g in enumerate(small_dags(max_vertices))]
    out.append(("example", two_route_graph()))
    return out


def cmd_corpus(cfg):
    rows = []
    failures = 0
    for name, g in corpus_graphs(cfg.max_vertices):
        for d in cfg.degrees:
            fg = flip_graph(g, d, cfg.cap)
            report = verify_poset(fg, strict=True)
            oracle = None
            if fg.system.m <= 8:
                oracle = brute_force_orders(g, d) == fg.node_sets()
            ok = report.ok and oracle is not False
            failures += not ok
            rows.append(
                {
                    "graph": name,
                    "edges": g.to_json()["edges"],
                    "d": d,
                    "corteges": len(fg.system.upper),
                    "classes": len(fg),
                    "ok": ok,
                    "oracle_match": oracle,
                    "violations": report.violations,
                }
            )
    return {"instances": len(rows), "failures": failures, "rows": rows}, 0 if failures == 0 else 1


COMMANDS = {
    "paths": cmd_paths,
    "corteges": cmd_corteges,
    "min-order": cmd_extreme_order("min"),
    "max-order": cmd_extreme_order("max"),
    "flip": cmd_flip,
    "flip-graph": cmd_flip_graph,
    "verify": cmd_verify,
    "cubillage": cmd_cubillage,
    "cubillage-flips": cmd_cubillage_flips,
    "ziegler": cmd_ziegler,
    "lift": cmd_lift,
    "descend": cmd_descend,
    "roundtrip": cmd_roundtrip,
    "render": cmd_render,
    "corpus": cmd_corpus,
}


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="digraph JSON file (default: the five-vertex example graph)")
    common.add_argument("--d", type=int, default=2, help="degree of the orders")
    common.add_argument("--n", type=int, default=4, help="number of colors")
    common.add_argument("--dim", type=int, default=2, help="dimension of the zonotope")
    common.add_argument("--t", type=_int_list, help="Veronese parameters, e.g. 0,1,2,3")
    common.add_argument("--cap", type=int, help="enumeration cap (default: CFL_CAP or 100000)")
    common.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")
    common.add_argument("--svg-out", help="write SVG output to this file")
    common.add_argument("--json-out", help="write JSON output to this file")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="cfl", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "corteges":
            p.add_argument("--k", type=int, default=1)
        if name == "cubillage":
            p.add_argument("side", choices=["std", "anti"])
        if name in ("flip", "descend"):
            p.add_argument("--order", help="order or assignment JSON file ('-' for stdin)")
        if name == "flip":
            p.add_argument("--cortege", help='cortege as JSON, e.g. [["1","2"],["2","3"]]')
        if name == "lift":
            p.add_argument("--chain", help="chain JSON file ('-' for stdin)")
        if name == "render":
            p.add_argument("--tiling", help="cubillage JSON file (default: stdin)")
            p.add_argument("--capsid", type=_int_list, help="packet to draw in bold, e.g. 1,2,3")
            p.add_argument("--arrows", action="store_true", help="overlay the natural order")
        if name == "corpus":
            p.add_argument("--max-vertices", type=int, default=4)
            p.add_argument("--degrees", type=_int_list, default=(2, 3))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    known = set(RunConfig.__dataclass_fields__)
    values = {k: v for k, v in vars(args).items() if k in known and v is not None}
    return RunConfig(**values)


def _emit(result, cfg: RunConfig) -> str:
    if isinstance(result, str):
        text = result
        if cfg.svg_out and text.startswith("<svg"):
            FsPath(cfg.svg_out).write_text(text)
    else:
        text = json.dumps(result, indent=2, sort_keys=True) + "\n"
        if cfg.json_out:
            FsPath(cfg.json_out).write_text(text)
    return text


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        result = COMMANDS[cfg.command](cfg)
        status = 0
        if isinstance(result, tuple):
            result, status = result
        text = _emit(result, cfg)
    except CflError as exc:
        sys.stderr.write(json.dumps({"error": exc.kind, "message": str(exc)}) + "\n")
        return 2
    except (OSError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
