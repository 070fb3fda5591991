"""Command-line surface: decide, count, girth, threshold, scaling, search.

Machine-readable JSON goes to stdout and CSV/JSON artifacts into a run
directory; human-oriented notes go to stderr so pipelines stay clean.
Every run writes one manifest.  Timing lives only in the manifest, so all
other outputs are byte-identical across reruns with the same flags and
seed.

Exit codes: 0 property holds / success, 1 property fails, 2 budget
exhausted, 3 threshold diagnostic, 64 usage error, 65 malformed input
data.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .colourings import Colouring, count_coloured_aps
from .cycles import (
    BudgetExceededError,
    cycle_structure_report,
    enumerate_minimal_cycles,
    girth,
)
from .deciders import (
    certificate_refutes_alpharb,
    certificate_refutes_alphasz,
    certificate_refutes_can,
    certificate_refutes_rkvdw,
)
from .montecarlo import (
    AlphaRb,
    AlphaSz,
    CanVdW,
    RkVdW,
    ThresholdDiagnosticError,
    scaling_experiment,
    search_sparse_canvdw,
    threshold_bisect,
)
from .progressions import GroundSet, build_ap_hypergraph, count_aps_in_interval

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_BUDGET = 2
EXIT_DIAGNOSTIC = 3
EXIT_USAGE = 64
EXIT_DATA = 65

_RUNS_ENV = "APLAB_RUNS_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors must exit 64, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_set_spec(spec: str) -> GroundSet:
    spec = spec.strip()
    if ".." in spec:
        lo_s, hi_s = spec.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if lo < 1 or hi < lo:
            raise ValueError(f"bad range {spec!r}")
        return GroundSet.from_iterable(range(lo, hi + 1), n=hi)
    if "," in spec or spec.lstrip("-").isdigit():
        items = [int(tok) for tok in spec.split(",") if tok.strip()]
        return GroundSet.from_iterable(items)
    path = Path(spec)
    if not path.exists():
        raise ValueError(f"set spec {spec!r} is neither a range, a list nor a file")
    items = [int(line) for line in path.read_text().split()]
    return GroundSet.from_iterable(items)


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest(obj) -> str:
    return "sha256:" + hashlib.sha256(_canonical_json(obj).encode()).hexdigest()


def _run_dir(args, command: str) -> Path:
    if getattr(args, "out", None):
        path = Path(args.out)
    else:
        root = Path(os.environ.get(_RUNS_ENV, "runs"))
        stamp = time.strftime("%Y%m%d-%H%M%S", time.gmtime())
        path = root / f"{stamp}-{command}"
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


class _Manifest:
    """Collects one run's metadata; timing fields live only here."""

    def __init__(self, command: str, args, input_digest: str):
        flags = {
            key: (str(value) if isinstance(value, Fraction) else value)
            for key, value in vars(args).items()
            if key not in ("func", "out") and value is not None
        }
        self.payload = {
            "command": command,
            "flags": flags,
            "seed": getattr(args, "seed", None),
            "library_version": __version__,
            "input_digest": input_digest,
            "started_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "outputs": [],
        }
        self._t0 = time.perf_counter()

    def add_output(self, path: Path) -> None:
        self.payload["outputs"].append(path.name)

    def write(self, run_dir: Path, **extra) -> None:
        self.payload.update(extra)
        self.payload["finished_utc"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        self.payload["wall_clock_s"] = time.perf_counter() - self._t0
        _write_json(run_dir / "manifest.json", self.payload)


def _trial_rows(records) -> list[dict]:
    return [
        {
            "index": rec.index,
            "size": rec.size,
            "verdict": rec.verdict,
            "nodes": rec.nodes,
            "time_s": rec.elapsed,
        }
        for rec in records
    ]


def _build_property(args):
    if args.property == "canvdw":
        return CanVdW(args.k)
    if args.property == "rkvdw":
        if args.r is None:
            raise ValueError("--r is required for the rkvdw property")
        return RkVdW(args.r, args.k)
    if args.property == "alpharb":
        if args.alpha is None:
            raise ValueError("--alpha is required for the alpharb property")
        return AlphaRb(args.alpha, args.k)
    if args.property == "alphasz":
        if args.alpha is None:
            raise ValueError("--alpha is required for the alphasz property")
        return AlphaSz(args.alpha, args.k)
    raise ValueError(f"unknown property {args.property!r}")


def _certificate_payload(prop, A: GroundSet, certificate) -> dict:
    if isinstance(certificate, Colouring):
        body = {"kind": "colouring", "colours": list(certificate.assignment)}
    else:
        body = {"kind": "subset", "elements": list(certificate.elements)}
    return {
        "property": prop.name,
        "params": prop.params(),
        "set": list(A.elements),
        "n": A.n,
        "verdict": False,
        "certificate": body,
    }


def cmd_decide(args) -> int:
    A = _parse_set_spec(args.set)
    prop = _build_property(args)
    run_dir = _run_dir(args, "decide")
    manifest = _Manifest(
        "decide", args, _digest({"set": list(A.elements), "params": prop.params()})
    )
    result = prop.decide(A, node_budget=args.budget)
    verdict_word = {True: "holds", False: "fails", None: "budget-exhausted"}[result.verdict]
    out = {
        "property": prop.name,
        "params": prop.params(),
        "set_size": len(A),
        "n": A.n,
        "verdict": verdict_word,
        "nodes_explored": result.nodes_explored,
    }
    if result.verdict is False:
        cert_path = run_dir / "certificate.json"
        _write_json(cert_path, _certificate_payload(prop, A, result.certificate))
        manifest.add_output(cert_path)
        out["certificate_path"] = str(cert_path)
    print(json.dumps(out, sort_keys=True))
    manifest.write(run_dir, verdict=verdict_word, elapsed_s=result.elapsed)
    if result.verdict is True:
        return EXIT_OK
    if result.verdict is False:
        return EXIT_FAILS
    return EXIT_BUDGET


def _load_colouring_spec(spec: str, domain: GroundSet) -> Colouring:
    text = spec.strip()
    if not text.startswith("["):
        text = Path(text).read_text()
    values = json.loads(text)
    return Colouring(domain, tuple(values))


def cmd_count(args) -> int:
    run_dir = _run_dir(args, "count")
    manifest = _Manifest("count", args, _digest({"n": args.n, "k": args.k}))
    domain = GroundSet.interval(args.n)
    if args.colouring is None:
        out = {"aps": count_aps_in_interval(args.n, args.k)}
    else:
        try:
            chi = _load_colouring_spec(args.colouring, domain)
        except (ValueError, json.JSONDecodeError) as exc:
            print(f"error: colouring is not a restricted-growth array: {exc}", file=sys.stderr)
            return EXIT_DATA
        counts = count_coloured_aps(domain, chi, args.k)
        out = {"mono": counts.mono, "rainbow": counts.rainbow, "neither": counts.neither}
    print(json.dumps(out, sort_keys=True))
    manifest.write(run_dir, result=out)
    return EXIT_OK


def cmd_girth(args) -> int:
    A = _parse_set_spec(args.set)
    H = build_ap_hypergraph(A, args.k)
    run_dir = _run_dir(args, "girth")
    manifest = _Manifest("girth", args, _digest({"set": list(A.elements), "k": args.k}))
    value = girth(H)
    out = {"girth": "infinity" if value == float("inf") else value}
    if args.enumerate:
        try:
            cycles = enumerate_minimal_cycles(H, args.lmax, step_budget=args.budget)
            report = cycle_structure_report(H, max(args.lmax, 3), step_budget=args.budget)
        except BudgetExceededError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        cycles_path = run_dir / "cycles.json"
        _write_json(
            cycles_path,
            [
                {"edges": list(c.edges), "linking": [int(A.elements[v]) for v in c.linking]}
                for c in cycles
            ],
        )
        manifest.add_output(cycles_path)
        out["minimal_cycles"] = len(cycles)
        out["cycles_path"] = str(cycles_path)
        out["structure"] = {
            "cycles_checked": report.cycles_checked,
            "counts_by_length": dict(report.counts_by_length),
            "passed": report.passed,
            "failures": list(report.failures),
        }
    print(json.dumps(out, sort_keys=True))
    manifest.write(run_dir, girth=out["girth"])
    return EXIT_OK


def _probe_csv_rows(n: int, probes) -> list[str]:
    rows = ["n,p,estimate,ci_lo,ci_hi"]
    for pr in probes:
        est = "" if pr.estimate is None else repr(float(pr.estimate))
        lo, hi = pr.confidence_interval
        rows.append(f"{n},{float(pr.p)!r},{est},{lo!r},{hi!r}")
    return rows


def _probe_manifest(pr) -> dict:
    return {
        "p": str(pr.p),
        "trials_run": pr.trials_run,
        "successes": pr.successes,
        "failures": pr.failures,
        "exhausted": pr.exhausted,
        "trials": _trial_rows(pr.records),
    }


def cmd_threshold(args) -> int:
    prop = _build_property(args)
    run_dir = _run_dir(args, "threshold")
    manifest = _Manifest(
        "threshold", args, _digest({"n": args.n, "params": prop.params(), "seed": args.seed})
    )
    try:
        result = threshold_bisect(
            args.n,
            prop,
            args.trials,
            target=args.target,
            seed=args.seed,
            resolution=args.resolution,
            node_budget=args.budget,
        )
    except ThresholdDiagnosticError as exc:
        print(f"diagnostic: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    csv_path = run_dir / "out.csv"
    csv_path.write_text("\n".join(_probe_csv_rows(args.n, result.probes)) + "\n")
    manifest.add_output(csv_path)
    out = {
        "n": args.n,
        "property": prop.name,
        "p_lo": str(result.p_lo),
        "p_hi": str(result.p_hi),
        "p_star": str(result.p_star),
        "p_star_float": float(result.p_star),
        "optimistic_bracket": [str(x) for x in result.optimistic_bracket],
        "pessimistic_bracket": [str(x) for x in result.pessimistic_bracket],
        "budget_exhausted_trials": result.exhausted_total,
        "csv_path": str(csv_path),
    }
    print(json.dumps(out, sort_keys=True))
    manifest.write(run_dir, probes=[_probe_manifest(pr) for pr in result.probes])
    return EXIT_OK


def cmd_scaling(args) -> int:
    ns = tuple(int(tok) for tok in args.ns.split(","))
    run_dir = _run_dir(args, "scaling")
    manifest = _Manifest(
        "scaling", args, _digest({"k": args.k, "ns": list(ns), "seed": args.seed})
    )
    try:
        result = scaling_experiment(
            args.k,
            ns,
            args.trials,
            args.seed,
            target=args.target,
            resolution=args.resolution,
            node_budget=args.budget,
        )
    except ThresholdDiagnosticError as exc:
        print(f"diagnostic: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    csv_path = run_dir / "out.csv"
    lines = ["n,p_star,normalized"]
    for row in result.rows:
        lines.append(f"{row.n},{float(row.p_star)!r},{row.normalized!r}")
    csv_path.write_text("\n".join(lines) + "\n")
    manifest.add_output(csv_path)
    print(
        f"normalized threshold spread max/min = {result.spread:.3f} "
        f"(optimistic {result.spread_optimistic:.3f}, "
        f"pessimistic {result.spread_pessimistic:.3f})",
        file=sys.stderr,
    )
    out = {
        "k": args.k,
        "rows": [
            {"n": row.n, "p_star": str(row.p_star), "normalized": row.normalized}
            for row in result.rows
        ],
        "spread": result.spread,
        "spread_optimistic": result.spread_optimistic,
        "spread_pessimistic": result.spread_pessimistic,
        "csv_path": str(csv_path),
    }
    print(json.dumps(out, sort_keys=True))
    manifest.write(
        run_dir,
        thresholds=[
            {"n": row.n, "probes": [_probe_manifest(pr) for pr in row.threshold.probes]}
            for row in result.rows
        ],
    )
    return EXIT_OK


def cmd_search(args) -> int:
    run_dir = _run_dir(args, "search")
    manifest = _Manifest(
        "search",
        args,
        _digest({"k": args.k, "g": args.g, "n": args.n, "p": str(args.p), "seed": args.seed}),
    )
    outcome = search_sparse_canvdw(
        args.k, args.g, args.n, args.p, args.attempts, args.seed, node_budget=args.budget
    )
    log_path = run_dir / "attempts.csv"
    lines = ["attempt,size,girth_ok,verdict,nodes"]
    for rec in outcome.attempts:
        verdict = "" if rec.verdict is None else str(rec.verdict).lower()
        lines.append(f"{rec.index},{rec.size},{str(rec.girth_ok).lower()},{verdict},{rec.nodes}")
    log_path.write_text("\n".join(lines) + "\n")
    manifest.add_output(log_path)
    out = {
        "k": args.k,
        "g": args.g,
        "n": args.n,
        "p": str(args.p),
        "attempts": len(outcome.attempts),
        "found": outcome.found,
        "log_path": str(log_path),
    }
    if outcome.found:
        witness = outcome.witness
        witness_path = run_dir / "witness.txt"
        witness_path.write_text("\n".join(str(x) for x in witness.elements) + "\n")
        manifest.add_output(witness_path)
        # independent re-validation: girth through the cycle enumeration
        # route, the colouring property through a fresh decision
        H = build_ap_hypergraph(witness, args.k)
        cycles = enumerate_minimal_cycles(H, max(args.g - 1, 2))
        girth_ok = all(c.length >= args.g for c in cycles)
        can_ok = CanVdW(args.k).decide(witness).verdict is True
        out["witness_path"] = str(witness_path)
        out["witness"] = list(witness.elements)
        out["validated"] = bool(girth_ok and can_ok)
    print(json.dumps(out, sort_keys=True))
    manifest.write(run_dir, found=outcome.found)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="aplab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"aplab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    decide = sub.add_parser("decide", help="decide a colouring property of a set")
    decide.add_argument("--set", required=True, help="range a..b, comma list, or file path")
    decide.add_argument(
        "--property", required=True, choices=["canvdw", "rkvdw", "alpharb", "alphasz"]
    )
    decide.add_argument("--k", type=int, required=True)
    decide.add_argument("--r", type=int)
    decide.add_argument("--alpha", type=_parse_fraction)
    decide.add_argument("--budget", type=int)
    decide.add_argument("--out", help="run directory (default: runs/<timestamp>-decide)")
    decide.set_defaults(func=cmd_decide)

    count = sub.add_parser("count", help="count progressions, optionally per colour class")
    count.add_argument("--n", type=int, required=True)
    count.add_argument("--k", type=int, required=True)
    count.add_argument("--colouring", help="JSON array (inline or file) in restricted-growth form")
    count.add_argument("--out")
    count.set_defaults(func=cmd_count)

    girth_p = sub.add_parser("girth", help="girth of the k-AP hypergraph of a set")
    girth_p.add_argument("--set", required=True)
    girth_p.add_argument("--k", type=int, required=True)
    girth_p.add_argument("--enumerate", action="store_true", help="list minimal cycles")
    girth_p.add_argument("--lmax", type=int, default=4)
    girth_p.add_argument("--budget", type=int)
    girth_p.add_argument("--out")
    girth_p.set_defaults(func=cmd_girth)

    threshold = sub.add_parser("threshold", help="bisect the 50% point of a property")
    threshold.add_argument("--n", type=int, required=True)
    threshold.add_argument("--k", type=int, required=True)
    threshold.add_argument(
        "--property", default="canvdw", choices=["canvdw", "rkvdw", "alpharb", "alphasz"]
    )
    threshold.add_argument("--r", type=int)
    threshold.add_argument("--alpha", type=_parse_fraction)
    threshold.add_argument("--trials", type=int, default=200)
    threshold.add_argument("--seed", type=int, default=0)
    threshold.add_argument("--target", type=_parse_fraction, default=Fraction(1, 2))
    threshold.add_argument("--resolution", type=_parse_fraction, default=Fraction(1, 64))
    threshold.add_argument("--budget", type=int)
    threshold.add_argument("--out")
    threshold.set_defaults(func=cmd_threshold)

    scaling = sub.add_parser("scaling", help="normalized thresholds across several n")
    scaling.add_argument("--k", type=int, required=True)
    scaling.add_argument("--ns", required=True, help="comma-separated ascending n values")
    scaling.add_argument("--trials", type=int, default=200)
    scaling.add_argument("--seed", type=int, default=0)
    scaling.add_argument("--target", type=_parse_fraction, default=Fraction(1, 2))
    scaling.add_argument("--resolution", type=_parse_fraction, default=Fraction(1, 64))
    scaling.add_argument("--budget", type=int)
    scaling.add_argument("--out")
    scaling.set_defaults(func=cmd_scaling)

    search = sub.add_parser("search", help="hunt for a high-girth set with the canonical property")
    search.add_argument("--k", type=int, required=True)
    search.add_argument("--g", type=int, required=True)
    search.add_argument("--n", type=int, required=True)
    search.add_argument("--p", type=_parse_fraction, required=True)
    search.add_argument("--attempts", type=int, default=100)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--budget", type=int)
    search.add_argument("--out")
    search.set_defaults(func=cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
