"""Command-line interface.

Exit status: 0 when every requested check passes, 1 on a computational
failure or a failed check (failures are described as JSON on standard
error), 2 on usage errors (bad flags or an unreadable input file).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import export
from .chern import chern_check
from .combinatorics import (MAX_TREE_N, enumerate_3trees, find_edge_basis,
                            random_edge_basis)
from .errors import MeasureError
from .measure import measure_jacobian, measure_kahler, measure_trees
from .mesh import TOL_GEOM, PointConfig, delaunay_build
from .operators import assemble_operators, kahler_assemble
from .sampler import iter_chain, run_chains
from .verify import TOL_AGREE, run_checks


class UsageError(Exception):
    pass


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def _triple(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected three comma-separated indices")
    if len(parts) != 3 or len(set(parts)) != 3:
        raise argparse.ArgumentTypeError("expected three distinct indices")
    return parts


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="point-set JSON file ('-' for standard input)")
    common.add_argument("--convention", choices=("infinity", "fixed-face"),
                        help="override the convention of the input; 'infinity' "
                             "sends the first fixed vertex to infinity")
    common.add_argument("--fixed", type=_triple, help="fixed vertices i,j,k")
    common.add_argument("--tol-geom", type=_positive, default=TOL_GEOM)
    common.add_argument("--tol-agree", type=_positive, default=TOL_AGREE)
    common.add_argument("--out", help="write the main output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="delaunay-measure",
                                description="Conformally invariant measure on "
                                            "Delaunay triangulations.")
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build", parents=[common], help="triangulate a point set")
    b.add_argument("--svg", help="also write an SVG drawing to this path")
    b.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_parser("measure", parents=[common], help="measure density by all routes")
    tr = sub.add_parser("trees", parents=[common], help="enumerate rooted 3-trees")
    tr.add_argument("--complete", action="store_true",
                    help="include the terms whose third set has extra odd cycles")
    sub.add_parser("verify", parents=[common], help="run the identity suite")
    s = sub.add_parser("sample", parents=[common], help="Metropolis-Hastings chain")
    s.add_argument("--steps", type=int, default=10_000)
    s.add_argument("--sigma", type=_positive, default=0.1)
    s.add_argument("--thin", type=int, default=1)
    s.add_argument("--chains", type=int, default=1)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--target", choices=("kahler", "constant"), default="kahler")
    sub.add_parser("chern", parents=[common], help="Chern-form Pfaffian check")
    return p


def load_config(args) -> PointConfig:
    try:
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read input: {exc}") from exc
    if not isinstance(data, dict) or "points" not in data:
        raise UsageError("input must be a JSON object with a 'points' array")
    if args.fixed is not None:
        data["fixed"] = list(args.fixed)
    data.setdefault("fixed", [0, 1, 2])
    if args.convention == "infinity":
        if data.get("infinity") is None:
            data["infinity"] = data["fixed"][0]
    elif args.convention == "fixed-face":
        if data.get("infinity") is not None:
            raise UsageError("input places a vertex at infinity; cannot use fixed-face")
    try:
        return PointConfig.from_dict(data)
    except MeasureError:
        raise
    except (ValueError, TypeError, IndexError, KeyError) as exc:
        raise UsageError(f"invalid point set: {exc}") from exc


def _emit(args, payload: str):
    if args.out:
        Path(args.out).write_text(payload)
    else:
        sys.stdout.write(payload)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    raise TypeError(f"not serialisable: {type(x).__name__}")


def _basis(t, seed):
    f0 = t.find_face(t.config.fixed)
    return find_edge_basis(t, f0) if f0 is not None else random_edge_basis(
        t, np.random.default_rng(seed))


def cmd_build(args, cfg) -> int:
    t = delaunay_build(cfg, args.tol_geom)
    if args.format == "csv":
        lines = ["u,v,theta"] + [f"{a},{b},{th!r}" for (a, b), th in
                                 zip(t.edges.tolist(), t.theta.tolist())]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dump(export.triangulation_json(t)))
    if args.svg:
        Path(args.svg).write_text(export.to_svg(t))
    return 0


def cmd_measure(args, cfg) -> int:
    t = delaunay_build(cfg, args.tol_geom)
    basis = _basis(t, args.seed)
    ops = assemble_operators(t, basis)
    routes = {"jacobian": measure_jacobian(ops),
              "kahler": measure_kahler(kahler_assemble(t), cfg.fixed)}
    if t.n_free <= MAX_TREE_N and t.find_face(cfg.fixed) is not None:
        routes["trees"] = measure_trees(t, cfg.fixed, basis=basis)
    ref = routes["jacobian"]
    worst = max(ref.rel_diff(m) for m in routes.values())
    ok = worst < args.tol_agree
    report = {"schema": export.SCHEMA, "N": t.n_free,
              "routes": {k: v.to_dict() for k, v in routes.items()},
              "max_rel_diff": worst, "tol_agree": args.tol_agree, "ok": ok}
    _emit(args, _dump(report))
    return 0 if ok else 1


def cmd_trees(args, cfg) -> int:
    t = delaunay_build(cfg, args.tol_geom)
    if t.find_face(cfg.fixed) is None:
        raise MeasureError("the fixed vertices do not form a face")
    basis = find_edge_basis(t, t.find_face(cfg.fixed))
    trees = enumerate_3trees(t, cfg.fixed, basis=basis, odd_cycles=args.complete)
    edges = t.edges.tolist()
    rows = [{"I": [edges[e] for e in f.I], "Ip": [edges[e] for e in f.Ip],
             "Ipp": [edges[e] for e in f.Ipp], "epsilon": f.epsilon,
             "extra_cycles": f.extra_cycles} for f in trees]
    _emit(args, _dump({"schema": export.SCHEMA, "N": t.n_free,
                       "complete": args.complete, "count": len(rows), "trees": rows}))
    return 0


def cmd_verify(args, cfg) -> int:
    checks = run_checks(cfg, args.tol_agree, args.seed)
    ok = all(c.ok for c in checks)
    _emit(args, _dump({"schema": export.SCHEMA, "N": cfg.n_free, "ok": ok,
                       "checks": [c.to_dict() for c in checks]}))
    return 0 if ok else 1


def cmd_sample(args, cfg) -> int:
    if args.steps < 0 or args.thin < 1 or args.chains < 1:
        raise UsageError("steps must be >= 0, thin and chains >= 1")
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.chains == 1:
            stream = ((0, s) for s in iter_chain(cfg, args.steps, args.sigma, args.seed,
                                                 args.thin, args.target))
        else:
            results = run_chains(cfg, args.chains, args.steps, args.sigma, args.seed,
                                 args.thin, args.target, args.workers)
            stream = ((k, s) for k, r in enumerate(results) for s in r.samples)
        for chain, s in stream:
            out.write(json.dumps({"chain": chain, **s.to_dict()}) + "\n")
    finally:
        if args.out:
            out.close()
    return 0


def cmd_chern(args, cfg) -> int:
    t = delaunay_build(cfg, args.tol_geom)
    c = chern_check(t, _basis(t, args.seed))
    _emit(args, _dump({"schema": export.SCHEMA, **c.to_dict()}))
    return 0 if c.ok else 1


COMMANDS = {"build": cmd_build, "measure": cmd_measure, "trees": cmd_trees,
            "verify": cmd_verify, "sample": cmd_sample, "chern": cmd_chern}


def _fail(kind: str, exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "type": type(exc).__name__,
                                 "message": str(exc)}) + "\n")
    return code


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = load_config(args)
        return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        return _fail("usage", exc, 2)
    except MeasureError as exc:
        return _fail("computation", exc, 1)
    except OSError as exc:
        return _fail("usage", exc, 2)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
