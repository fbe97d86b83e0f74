"""Command-line entry point: `hjlab <subcommand> ...` (or `python -m hjlab`).

Exit codes: 0 success / found, 1 success / not found, 2 usage or budget
error, 20 certified not colourable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import coloring, hypergraphs, lines, moves, words

EXIT_OK, EXIT_NOT_FOUND, EXIT_USAGE, EXIT_UNCOLOURABLE = 0, 1, 2, 20
BUDGET_ENV = "HJLAB_BUDGET"


@dataclass
class RunConfig:
    command: str
    m: int | None = None
    n: int | None = None
    q: int | None = None
    r: int | None = None
    budget: int | None = None
    threads: int = 1
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.q is not None and self.q < 1:
            raise ValueError("q must be at least 1")
        if self.r is not None and self.r < 1:
            raise ValueError("r must be at least 1")
        if self.m is not None and self.m < 2:
            raise ValueError("m must be at least 2")
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be positive")
        if self.threads < 1:
            raise ValueError("threads must be positive")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        budget = args.budget
        if budget is None and os.environ.get(BUDGET_ENV):
            budget = int(os.environ[BUDGET_ENV])
        known = {"command", "m", "n", "q", "r", "budget", "threads", "out", "func"}
        extra = {k: v for k, v in vars(args).items() if k not in known}
        return cls(args.command, getattr(args, "m", None), getattr(args, "n", None),
                   getattr(args, "q", None), getattr(args, "r", None), budget,
                   args.threads, args.out, extra)


class UsageError(Exception):
    pass


def _emit(cfg: RunConfig, text: str | bytes) -> None:
    if cfg.out and cfg.out != "-":
        mode = "wb" if isinstance(text, bytes) else "w"
        with open(cfg.out, mode) as fh:
            fh.write(text)
    elif isinstance(text, bytes):
        sys.stdout.buffer.write(text)
        sys.stdout.flush()
    else:
        sys.stdout.write(text)


def _read(path: str, binary: bool = False) -> str | bytes:
    if path == "-":
        return sys.stdin.buffer.read() if binary else sys.stdin.read()
    with open(path, "rb" if binary else "r") as fh:
        return fh.read()


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False) + "\n"


def _load_hypergraph(path: str) -> hypergraphs.Hypergraph:
    try:
        return hypergraphs.Hypergraph.from_json(_read(path))
    except (json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"{path}: not a hypergraph JSON file ({exc})") from exc


def _need(cfg: RunConfig, *names: str) -> None:
    missing = [f"-{n}" for n in names if getattr(cfg, n) is None]
    if missing:
        raise UsageError(f"{cfg.command} needs {' '.join(missing)}")


# -- subcommands ----------------------------------------------------------------------

def cmd_enumerate(cfg: RunConfig) -> int:
    kind = cfg.extra["kind"]
    _need(cfg, "m", "n")
    limit = cfg.budget if cfg.budget is not None else hypergraphs.DEFAULT_H_BUDGET
    size = cfg.m ** cfg.n if kind != "lines" else (cfg.m + 1) ** cfg.n
    if size > limit:
        raise hypergraphs.BudgetExceeded(f"{kind} of length {cfg.n} over [{cfg.m}]: "
                                         f"{size} candidates, over the budget of {limit}")
    if kind == "words":
        items = words.words(cfg.m, cfg.n)
    elif kind == "patterns":
        items = words.enumerate_patterns(cfg.m, cfg.n)
    else:
        _need(cfg, "q")
        items = lines.enumerate_lines(cfg.m, cfg.n, cfg.q)
    out = list(items)
    _emit(cfg, "".join(s + "\n" for s in out) + f"# count: {len(out)}\n")
    return EXIT_OK


def cmd_build(cfg: RunConfig) -> int:
    kind = cfg.extra["kind"]
    _need(cfg, "q")
    if kind == "C":
        H = hypergraphs.build_C(cfg.q, budget=cfg.budget)
    else:
        _need(cfg, "m", "n")
        if kind == "H":
            H = hypergraphs.build_H(cfg.m, cfg.n, cfg.q, budget=cfg.budget)
        else:
            H = hypergraphs.build_P(cfg.m, cfg.n, cfg.q, method=cfg.extra["method"], budget=cfg.budget)
    _emit(cfg, H.to_text() if cfg.extra["format"] == "text" else H.to_json() + "\n")
    return EXIT_OK


def _hypergraph_arg(cfg: RunConfig) -> hypergraphs.Hypergraph:
    src = cfg.extra.get("hypergraph")
    if src is None:
        _need(cfg, "q")
        return hypergraphs.build_C(cfg.q, budget=cfg.budget)
    return _load_hypergraph(src)


def cmd_certify(cfg: RunConfig) -> int:
    _need(cfg, "r")
    H = _hypergraph_arg(cfg)
    cert = coloring.exact_colourability(H, cfg.r, max_nodes=cfg.extra["max_nodes"])
    _emit(cfg, cert.to_json(timing=cfg.extra["timing"]) + "\n")
    if cert.verdict == coloring.COLOURABLE:
        return EXIT_OK
    if cert.verdict == coloring.NOT_COLOURABLE:
        return EXIT_UNCOLOURABLE
    print(f"inconclusive: {cert.note}", file=sys.stderr)
    return EXIT_USAGE


def cmd_search(cfg: RunConfig) -> int:
    _need(cfg, "q")
    binary = cfg.extra["binary"]
    m, n, r, col = lines.read_colouring(_read(cfg.extra["colouring"], binary), binary=binary)
    limit = cfg.budget if cfg.budget is not None else hypergraphs.DEFAULT_H_BUDGET
    if m**n > limit:
        raise hypergraphs.BudgetExceeded(f"[{m}]^{n} is over the budget of {limit}")
    ell = lines.find_monochromatic_line(col, m, n, cfg.q, threads=cfg.threads)
    _emit(cfg, (ell if ell else "none") + "\n")
    return EXIT_OK if ell else EXIT_NOT_FOUND


def cmd_reduce(cfg: RunConfig) -> int:
    _need(cfg, "q")
    core = cfg.extra["core"]
    try:
        bp = hypergraphs.make_buffered(core, cfg.q)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(cfg, moves.canonical_reduction(bp).dump())
    return EXIT_OK


def cmd_export(cfg: RunConfig) -> int:
    _need(cfg, "r")
    _emit(cfg, coloring.export_dimacs(_hypergraph_arg(cfg), cfg.r))
    return EXIT_OK


def cmd_linear(cfg: RunConfig) -> int:
    _need(cfg, "q")
    H = hypergraphs.build_C(cfg.q, budget=cfg.budget)
    found = coloring.linear_colouring_search(cfg.q, H)
    _emit(cfg, _dump({"schema_version": hypergraphs.SCHEMA_VERSION, "q": cfg.q,
                      "functionals": [list(c) for c in found]}))
    return EXIT_OK if found else EXIT_NOT_FOUND


def _c_colouring(cfg: RunConfig) -> np.ndarray:
    if cfg.extra.get("functional"):
        return coloring.linear_colouring(cfg.extra["functional"], cfg.q)
    src = cfg.extra.get("certificate")
    if not src:
        raise UsageError("give --functional c1 c2 c3 or --certificate FILE")
    cert = json.loads(_read(src))
    if not cert.get("witness"):
        raise UsageError(f"{src} holds no witness colouring")
    return np.asarray(cert["witness"], dtype=np.int64)


def cmd_lift(cfg: RunConfig) -> int:
    _need(cfg, "q", "n")
    f = _c_colouring(cfg)
    limit = cfg.budget if cfg.budget is not None else hypergraphs.DEFAULT_H_BUDGET
    col = coloring.lift_colouring(f, cfg.n, cfg.q, budget=limit)
    r = int(f.max()) + 1
    _emit(cfg, lines.write_colouring(col, 3, cfg.n, r, binary=cfg.extra["binary"]))
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    _need(cfg, "q")
    f = _c_colouring(cfg)
    H = hypergraphs.build_C(cfg.q, budget=cfg.budget)
    mv = coloring.check_colour_move(f, cfg.q, H)
    report = {"schema_version": hypergraphs.SCHEMA_VERSION, "q": cfg.q, "proper": mv.proper,
              "bad_edge": list(mv.bad_edge) if mv.bad_edge else None}
    if mv.proper:
        g = coloring.check_gcd_obstruction(f, cfg.q, H)
        report.update({
            "colour_move": {"premises": mv.premises, "violations": mv.violation_count,
                            "examples": [{**v, "x": list(v["x"]), "axes": list(v["axes"]),
                                          "point": list(v["point"])} for v in mv.violations]},
            "latin_violations": len(coloring.latin_violations(f, cfg.q)),
            "gcd": {"j0_candidates": list(g.j0_candidates), "j0": g.j0,
                    "lattice_monochromatic": g.lattice_monochromatic,
                    "projection_sizes": list(g.sizes), "gcds": list(g.gcds),
                    "formulas": g.formulas},
        })
    _emit(cfg, _dump(report))
    ok = mv.ok and report.get("latin_violations", 1) == 0
    return EXIT_OK if ok else EXIT_NOT_FOUND


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker threads (output does not depend on it)")
    common.add_argument("--budget", type=int, default=None,
                        help=f"vertex/word budget; overrides the defaults and ${BUDGET_ENV}")
    common.add_argument("-o", "--out", default=None, help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="hjlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="list words, patterns or q-fold lines")
    s.add_argument("--kind", choices=["words", "patterns", "lines"], required=True)
    s.add_argument("-m", type=int, default=3)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("-q", type=int, default=None)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("build", parents=[common], help="build H, P or C as JSON")
    s.add_argument("--kind", choices=["H", "P", "C"], required=True)
    s.add_argument("-m", type=int, default=3)
    s.add_argument("-n", type=int, default=None)
    s.add_argument("-q", type=int, required=True)
    s.add_argument("--method", choices=["lines", "stars"], default="stars", help="how P is built")
    s.add_argument("--format", choices=["json", "text"], default="json")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("certify", parents=[common], help="decide r-colourability exactly")
    s.add_argument("hypergraph", nargs="?", help="hypergraph JSON (default: C(q) built in place)")
    s.add_argument("-q", type=int, default=None)
    s.add_argument("-r", type=int, required=True)
    s.add_argument("--max-nodes", type=int, default=coloring.DEFAULT_MAX_NODES)
    s.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identity)")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("search", parents=[common], help="first monochromatic q-fold line of a colouring")
    s.add_argument("colouring")
    s.add_argument("-q", type=int, required=True)
    s.add_argument("--binary", action="store_true")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("reduce", parents=[common], help="canonical reduction trace of a buffered core")
    s.add_argument("core")
    s.add_argument("-q", type=int, required=True)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("export", parents=[common], help="DIMACS CNF for r-colourability")
    s.add_argument("hypergraph", nargs="?")
    s.add_argument("-q", type=int, default=None)
    s.add_argument("-r", type=int, required=True)
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("linear", parents=[common], help="linear functionals giving proper colourings of C(q)")
    s.add_argument("-q", type=int, required=True)
    s.set_defaults(func=cmd_linear)

    for name, func, helptext in (("lift", cmd_lift, "lift a C(q) colouring to [3]^n"),
                                 ("check", cmd_check, "run the C(q) colouring checkers")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("-q", type=int, required=True)
        s.add_argument("--functional", type=int, nargs=3, metavar="C")
        s.add_argument("--certificate")
        if name == "lift":
            s.add_argument("-n", type=int, required=True)
            s.add_argument("--binary", action="store_true")
        s.set_defaults(func=func)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        return args.func(cfg)
    except hypergraphs.BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
