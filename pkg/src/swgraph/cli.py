"""Command line entry point: ``swgraph <command> ...``.

Results go to standard output as JSON (experiments default to CSV); files are
written only with --out. Exit codes: 0 ok, 2 invalid parameters, 3 resource
limit, 4 corrupt or inadmissible input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import codec, experiments
from .entropy import entropy_report, sw_entropy_asymptotic, sw_entropy_exact
from .errors import (CorruptPayload, HeaderMismatch, InvalidParams, NotAdmissible,
                     ResourceLimit, TooLarge)
from .model import ModelParams, format_edge_list, read_edge_list, sample_sw, write_edge_list
from .symmetry import canonical_form

EXIT_OK, EXIT_PARAMS, EXIT_RESOURCE, EXIT_CORRUPT = 0, 2, 3, 4


def _add_model(p: argparse.ArgumentParser, need_n: bool = True) -> None:
    if need_n:
        p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--b", type=float)
    group.add_argument("--b-preset", choices=sorted(experiments.B_PRESETS))


def _params(args, n: int | None = None) -> ModelParams:
    n = args.n if n is None else n
    b = experiments.resolve_b(n, args.b, args.b_preset)
    return ModelParams(n, args.a, b)


def _config(args, params: ModelParams | None = None) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    if params is not None:
        cfg.update(n=params.n, a=params.a, b=params.b, c=params.c)
    return cfg


def _emit(obj, args) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if getattr(args, "json_out", None):
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_sample(args) -> int:
    params = _params(args)
    g = sample_sw(params, args.seed)
    deg = g.degrees()
    out = {
        "config": _config(args, params),
        "num_edges": g.num_edges,
        "max_degree": int(deg.max()),
        "mean_degree": float(deg.mean()),
    }
    if args.out:
        write_edge_list(g, args.out)
    else:
        out["edge_list"] = format_edge_list(g)
    _emit(out, args)
    return EXIT_OK


_NAT_FIELDS = ("h_graph_exact", "h_graph_asymptotic", "h_graph_asymptotic_corrected",
               "h_structure_asymptotic", "h_conditional_upper", "structure_lower_bound",
               "compressibility")


def cmd_entropy(args) -> int:
    params = _params(args)
    if args.mode == "exact":
        body = {"h_graph_exact": sw_entropy_exact(params)}
    elif args.mode == "asymptotic":
        body = {"h_graph_asymptotic": sw_entropy_asymptotic(params),
                "h_graph_asymptotic_corrected": sw_entropy_asymptotic(params, corrected=True)}
    else:
        body = entropy_report(params).as_dict()
    if args.units == "bits":
        for k in _NAT_FIELDS:
            if k in body:
                body[k] = body[k] / math.log(2.0)
    _emit({"config": _config(args, params), "units": args.units, **body}, args)
    return EXIT_OK


def cmd_compress(args) -> int:
    g = read_edge_list(args.input)
    if args.n is not None and args.n != g.n:
        raise InvalidParams(f"--n {args.n} disagrees with the edge list (n = {g.n})")
    params = _params(args, n=g.n)
    if args.mode == "labelled":
        c = codec.encode_labelled(params, g)
    else:
        c = codec.encode_structural(params, g)
    blob = c.to_bytes()
    with open(args.out, "wb") as fh:
        fh.write(blob)
    h = sw_entropy_exact(params)
    _emit({
        "config": _config(args, params),
        "mode": c.mode,
        "payload_bits": c.payload_bits,
        "container_bytes": len(blob),
        "h_graph_exact": h,
        "ratio": codec.payload_entropy_ratio(c, h),
    }, args)
    return EXIT_OK


def cmd_decompress(args) -> int:
    c = codec.load(args.input)
    g = codec.decode(c)
    write_edge_list(g, args.out)
    out = {"config": _config(args), "mode": c.mode, "n": c.n, "a": c.a, "b": c.b,
           "num_edges": g.num_edges, "payload_bits": c.payload_bits}
    if c.mode == "structural":
        out["aut_size"] = canonical_form(g).aut_size
    _emit(out, args)
    return EXIT_OK


def cmd_symmetry(args) -> int:
    params = _params(args)
    res = experiments.symmetry(params.n, params.a, params.b, args.trials, args.seed,
                               args.workers, args.node_budget)
    _emit({"config": _config(args, params), **res}, args)
    return EXIT_OK


def _experiment_rows(args) -> list[dict]:
    name = args.name
    ns = args.n or [1001]
    a_values = args.a or [0.5]
    rows: list[dict] = []
    if name == "s2-regimes":
        return experiments.s2_regimes(a_values, ns, args.b if args.b is not None else 1.0)
    if name == "entropy-sweep":
        for a in a_values:
            rows += experiments.entropy_sweep(a, ns, args.b, None if args.b is not None else args.b_preset or "log2")
        return rows
    fn = experiments.EXPERIMENTS[name]
    for n in ns:
        for a in a_values:
            b = experiments.resolve_b(n, args.b, None if args.b is not None else args.b_preset or "log2")
            rows += fn(n, a, b, args.trials, args.seed, args.workers)
    return rows


def cmd_experiment(args) -> int:
    rows = _experiment_rows(args)
    if args.format == "json":
        text = json.dumps({"config": _config(args), "rows": rows}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        fields = list(dict.fromkeys(k for r in rows for k in r))
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swgraph", description="Small-world graph entropy and compression.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw one SW graph")
    _add_model(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="edge-list file to write")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("entropy", help="exact and asymptotic entropies")
    _add_model(p)
    p.add_argument("--mode", choices=("exact", "asymptotic", "report"), default="report")
    p.add_argument("--units", choices=("nats", "bits"), default="nats")
    p.add_argument("--json-out", help="also write the JSON to this file")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("compress", help="encode an edge-list file into an SWG1 container")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=codec.MODES, default="labelled")
    p.add_argument("--n", type=int, help="optional; must match the edge list")
    _add_model(p, need_n=False)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decompress", help="decode an SWG1 container into an edge list")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompress)

    p = sub.add_parser("symmetry", help="Monte Carlo automorphism-group sizes")
    _add_model(p)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--json-out")
    p.set_defaults(func=cmd_symmetry)

    p = sub.add_parser("experiment", help="named acceptance sweeps (CSV by default)")
    p.add_argument("name", choices=sorted(experiments.EXPERIMENTS))
    p.add_argument("--n", type=int, action="append", help="repeat for a grid")
    p.add_argument("--a", type=float, action="append", help="repeat for a grid")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--b", type=float)
    group.add_argument("--b-preset", choices=sorted(experiments.B_PRESETS))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidParams as exc:
        print(f"swgraph: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except (ResourceLimit, TooLarge) as exc:
        print(f"swgraph: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (CorruptPayload, HeaderMismatch, NotAdmissible) as exc:
        print(f"swgraph: bad input: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except (ValueError, OSError) as exc:
        print(f"swgraph: {exc}", file=sys.stderr)
        return EXIT_CORRUPT if args.command in ("compress", "decompress") else EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
