"""Command line entry point: `homolog compute|check|analyze-seq|corpus|catalog`."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from . import __version__
from .algebra import ring_invariants
from .asymptotics import analyze, parse_sequence, report_dict
from .checks import CATALOG, CheckResult, run_check, select_checks
from .corpus import builtin_corpus, load_corpus
from .errors import BudgetExceededError, HomologError
from .homalg import pair_sequences
from .modules import module_invariants
from .report import FORMATS, emit_report, status_counts
from .resolution import bass_sequence, betti_sequence

log = logging.getLogger("homolog")


def _find_instance(instances, name: str):
    for inst in instances:
        if inst.name == name:
            return inst
    raise SystemExit(f"homolog: no ring named {name!r}; available: {', '.join(i.name for i in instances)}")


def _seq_block(values: Sequence[int]) -> dict:
    return {"values": list(values), "asymptotics": report_dict(analyze(values))}


def _print_seq(label: str, block: dict) -> None:
    a = block["asymptotics"]
    tag = "exact" if a["exact"] else "estimate"
    print(f"{label:>12}: {' '.join(map(str, block['values']))}")
    print(f"{'':>12}  cx {a['cx']['value']}, curv {a['curv']['value']} ({tag})")


def cmd_compute(args) -> int:
    inst = _find_instance(load_corpus(args.corpus), args.ring)
    try:
        ring = inst.ring
    except HomologError as exc:
        print(f"homolog: ring {inst.name}: {exc}", file=sys.stderr)
        return 1
    want_betti = args.betti or not (args.bass or args.pairs)
    want_bass = args.bass or not (args.betti or args.pairs)
    out: dict = {"ring": inst.name, "depth": args.depth}
    ri = ring_invariants(ring)
    out["ring_invariants"] = {"length": ri.length, "embdim": ri.embdim, "type": ri.type, "mult": ri.mult}
    try:
        if args.module:
            m = inst.module(args.module)
            inv = module_invariants(m)
            out["module"] = args.module
            out["invariants"] = {
                "length": inv.length,
                "mu": inv.mu,
                "type": inv.type,
                "mult": inv.mult,
                "min_mult": inv.is_min_mult,
                "ulrich": inv.is_ulrich,
            }
            if want_betti:
                out["betti"] = _seq_block(betti_sequence(m, args.depth))
            if want_bass:
                out["bass"] = _seq_block(bass_sequence(m, args.depth))
        if args.pairs:
            names = [s.strip() for s in args.pairs.split(",")]
            if len(names) != 2:
                raise SystemExit("homolog: --pairs takes two module names, e.g. --pairs M,N")
            ps = pair_sequences(inst.module(names[0]), inst.module(names[1]), args.depth)
            out["pairs"] = {
                "modules": names,
                **{s.kind: _seq_block(s.values) for s in (ps.ext_mu, ps.ext_len, ps.tor_mu, ps.tor_len)},
            }
    except BudgetExceededError as exc:
        print(f"homolog: budget exceeded: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(out, indent=2))
        return 0
    print(f"ring {inst.name}: length {ri.length}, embdim {ri.embdim}, type {ri.type}, mult {ri.mult}")
    if "invariants" in out:
        inv = out["invariants"]
        print(f"module {args.module}: " + ", ".join(f"{k} {v}" for k, v in inv.items()))
    for key in ("betti", "bass"):
        if key in out:
            _print_seq(key, out[key])
    if "pairs" in out:
        print(f"pair {out['pairs']['modules'][0]},{out['pairs']['modules'][1]}:")
        for key in ("ext_mu", "ext_len", "tor_mu", "tor_len"):
            _print_seq(key, out["pairs"][key])
    return 0


def _parse_overrides(items: Sequence[str]) -> dict[str, int]:
    out = {}
    for item in items:
        cid, _, n = item.partition("=")
        if not n.isdigit():
            raise SystemExit(f"homolog: bad --depth-for {item!r}, expected ID=N")
        select_checks([cid])
        out[cid.strip()] = int(n)
    return out


def _run_instance(corpus: str, name: str, checks: Sequence[str], depth: int, overrides: dict[str, int]) -> list[CheckResult]:
    """All checks on one instance; loads its own copy of the corpus so workers share nothing."""
    inst = _find_instance(load_corpus(corpus), name)
    out = []
    for cid in checks:
        d = overrides.get(cid, depth)
        if inst.error is not None:
            out.append(CheckResult(cid, inst.name, d, "inconclusive", (), 0.0, (f"inconclusive: {inst.error}",)))
        else:
            out.append(run_check(cid, inst, d))
    return out


def cmd_check(args) -> int:
    checks = sorted(select_checks(args.catalog))
    overrides = _parse_overrides(args.depth_for)
    instances = load_corpus(args.corpus)
    names = sorted(i.name for i in instances)
    if args.instance:
        unknown = set(args.instance) - set(names)
        if unknown:
            raise SystemExit(f"homolog: unknown instance(s): {', '.join(sorted(unknown))}")
        names = [n for n in names if n in set(args.instance)]
    results: list[CheckResult] = []
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_run_instance, args.corpus, n, checks, args.depth, overrides) for n in names]
            for fut in futures:
                results.extend(fut.result())
    else:
        by_name = {i.name: i for i in instances}
        for n in names:
            inst = by_name[n]
            for cid in checks:
                d = overrides.get(cid, args.depth)
                if inst.error is not None:
                    results.append(CheckResult(cid, n, d, "inconclusive", (), 0.0, (f"inconclusive: {inst.error}",)))
                else:
                    results.append(run_check(cid, inst, d))
                log.info("%s %s: %s", n, cid, results[-1].status)
    out = args.report if args.report and args.report != "-" else sys.stdout
    code = emit_report(results, args.format, out, corpus=args.corpus, depth=args.depth, timing=not args.no_timing)
    if out is not sys.stdout:
        counts = status_counts(results)
        print(" ".join(f"{k}={v}" for k, v in counts.items()), f"-> {args.report}", file=sys.stderr)
    return code


def cmd_analyze_seq(args) -> int:
    text = sys.stdin.read() if args.file == "-" else open(args.file, encoding="utf-8").read()
    try:
        seq = parse_sequence(text, args.file)
        r = analyze(seq)
    except ValueError as exc:
        print(f"homolog: {args.file}: {exc}", file=sys.stderr)
        return 1
    d = report_dict(r)
    if args.json:
        print(json.dumps({"length": len(seq), **d}, indent=2))
        return 0
    tag = "exact" if r.exact else "estimate"
    print(f"terms {len(seq)}")
    print(f"cx {r.cx} ({r.cx.kind})")
    print(f"curv {r.curv} ({tag})")
    if r.recurrence is not None:
        print(f"recurrence {list(r.recurrence)} from index {r.offset}")
    if r.diagnostics:
        print(r.diagnostics)
    return 0


def cmd_corpus(args) -> int:
    if args.action == "builtin":
        try:
            sys.stdout.write(builtin_corpus(args.name))
        except KeyError as exc:
            print(f"homolog: {exc.args[0]}", file=sys.stderr)
            return 1
        return 0
    for inst in load_corpus(args.name):
        lab = inst.labels
        state = f"error: {inst.error}" if inst.error is not None else f"length {inst.ring.length}"
        mods = ",".join(inst.module_names) or "-"
        print(f"{inst.name:16} ci={lab.ci!s:5} codim={lab.codim} gorenstein={lab.gorenstein!s:5} modules={mods} {state}")
    return 0


def cmd_catalog(args) -> int:
    for cid, spec in CATALOG.items():
        print(f"{cid:16} {spec.summary}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homolog", description="Homological invariants over Artinian local algebras.")
    p.add_argument("--version", action="version", version=f"homolog {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0, help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="invariants and sequences of one module")
    c.add_argument("--corpus", required=True, help="corpus file or builtin:NAME")
    c.add_argument("--ring", required=True)
    c.add_argument("--module", help="module name; `k` is always available")
    c.add_argument("--depth", type=int, default=6)
    c.add_argument("--betti", action="store_true")
    c.add_argument("--bass", action="store_true")
    c.add_argument("--pairs", metavar="M,N", help="Ext and Tor sequences of a pair")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_compute)

    k = sub.add_parser("check", help="run catalog checks over a corpus")
    k.add_argument("--corpus", required=True, help="corpus file or builtin:NAME")
    k.add_argument("--catalog", default="all", help="all, or comma-separated check ids")
    k.add_argument("--depth", type=int, default=6)
    k.add_argument("--depth-for", action="append", default=[], metavar="ID=N", help="per-check depth override")
    k.add_argument("--instance", action="append", default=[], help="restrict to these ring names")
    k.add_argument("--report", help="output path (default stdout)")
    k.add_argument("--format", choices=FORMATS, default="json")
    k.add_argument("--no-timing", action="store_true", help="write ms as 0 for byte-identical reports")
    k.add_argument("--jobs", type=int, default=1, help="worker processes, one instance per task")
    k.set_defaults(func=cmd_check)

    a = sub.add_parser("analyze-seq", help="complexity and curvature of an integer sequence")
    a.add_argument("file", help="one non-negative integer per line; - for stdin")
    a.add_argument("--json", action="store_true")
    a.set_defaults(func=cmd_analyze_seq)

    cp = sub.add_parser("corpus", help="print a built-in corpus or list a corpus file")
    cp.add_argument("action", choices=["builtin", "list"])
    cp.add_argument("name", help="built-in corpus name, or a corpus path for list")
    cp.set_defaults(func=cmd_corpus)

    cat = sub.add_parser("catalog", help="list check ids")
    cat.set_defaults(func=cmd_catalog)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except HomologError as exc:
        print(f"homolog: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"homolog: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
