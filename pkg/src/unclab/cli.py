"""Command-line entry point ``unclab``.

Exit codes: 0 when nothing was violated, 2 when a violation (or a failed
re-check, or a positive search gap) was found, 1 on any error.
"""
import argparse
import json
import math
import sys

from . import campaign as cp
from .claims import CLAIM_IDS, DEFAULT_TOL
from .errors import UnclabError
from .specsup import search_extremal_set

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2
SEARCH_GAP_TOL = 1e-9


def _read_json(path):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UnclabError(f"invalid JSON in {path or 'stdin'}: {exc}") from exc


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _apply_overrides(cfg, args):
    cfg = dict(cfg)
    params = dict(cfg.get("params", {}))
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.trials is not None:
        cfg["trials"] = args.trials
    if args.tol is not None:
        cfg["tol"] = args.tol
    if args.override_hypothesis:
        cfg["hypothesis_override"] = True
    if args.nodes is not None:
        params["nodes"] = args.nodes
    cfg["params"] = params
    return cfg


def cmd_check(args):
    obj = _read_json(args.input)
    items = obj if isinstance(obj, list) else [obj]
    reports = []
    for item in items:
        if not isinstance(item, dict) or item.get("claim_id") not in CLAIM_IDS:
            raise UnclabError("each check item needs a known 'claim_id' and a 'witness'")
        tol = args.tol if args.tol is not None else item.get("tol", cp.DEFAULT_TOLS.get(item["claim_id"], DEFAULT_TOL))
        reports.append(cp.recompute(item["claim_id"], item.get("witness", {}), tol, args.override_hypothesis))
    payload = [r.to_json() for r in reports]
    _emit(cp.dumps(payload if isinstance(obj, list) else payload[0]), args.out)
    return EXIT_VIOLATION if any(not r.satisfied for r in reports) else EXIT_OK


def cmd_campaign(args):
    camp = cp.Campaign.from_json(_apply_overrides(_read_json(args.config), args))
    report = cp.run_campaign(camp, timing=args.timing)
    if args.format == "csv":
        _emit(cp.rows_to_csv([cp.campaign_row(report)]), args.out)
    else:
        _emit(cp.dumps(report.to_json()), args.out)
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_map(args):
    obj = _read_json(args.config)
    if not isinstance(obj, dict) or "campaign" not in obj or "grid" not in obj:
        raise UnclabError("map config needs 'campaign' and 'grid' blocks")
    camp = cp.Campaign.from_json(_apply_overrides(obj["campaign"], args))
    rows = cp.validity_map(camp, obj["grid"], timing=args.timing)
    if args.format == "json":
        _emit(cp.dumps(rows), args.out)
    else:
        _emit(cp.rows_to_csv(rows), args.out)
    return EXIT_VIOLATION if any(r["violations"] for r in rows) else EXIT_OK


def _certificates(obj):
    # a single report, a list of reports, or a campaign report
    if isinstance(obj, dict) and "violations" in obj and "campaign" in obj:
        return obj["violations"]
    if isinstance(obj, list):
        return obj
    return [obj]


def cmd_recheck(args):
    certs = _certificates(_read_json(args.input))
    results = [bool(cp.recheck(c)) for c in certs]
    _emit(cp.dumps({"certificates": len(results), "valid": results}), args.out)
    return EXIT_OK if all(results) else EXIT_VIOLATION


def cmd_search(args):
    best, lam, gap = search_extremal_set(args.degree, args.delta, args.r_max, args.budget, args.seed)
    payload = {
        "set": best.to_json(),
        "lambda": lam,
        "interval_lambda": lam - gap,
        "gap": gap,
        "seed": args.seed,
        "budget": args.budget,
    }
    _emit(cp.dumps(payload), args.out)
    return EXIT_VIOLATION if gap > SEARCH_GAP_TOL else EXIT_OK


def _positive_float(text):
    v = float(text)
    if not (math.isfinite(v) and v > 0.0):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="unclab", description="Concentration inequality lab")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--tol", type=_positive_float)
        sp.add_argument("--override-hypothesis", action="store_true")
        if seed:
            sp.add_argument("--seed", type=int)
            sp.add_argument("--trials", type=int)
            sp.add_argument("--nodes", type=int)
            sp.add_argument("--timing", action="store_true", help="record runtime_ms")

    sp = sub.add_parser("check", help="check one witness (or a list) read from a file or stdin")
    sp.add_argument("input", nargs="?", default="-")
    common(sp, seed=False)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("campaign", help="run a seeded campaign from a JSON config")
    sp.add_argument("config")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    common(sp)
    sp.set_defaults(func=cmd_campaign)

    sp = sub.add_parser("map", help="validity map over a parameter grid")
    sp.add_argument("config")
    sp.add_argument("--format", choices=["json", "csv"], default="csv")
    common(sp)
    sp.set_defaults(func=cmd_map)

    sp = sub.add_parser("recheck", help="re-verify certificates")
    sp.add_argument("input", nargs="?", default="-")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_recheck)

    sp = sub.add_parser("search", help="search arc unions for larger sup-concentration")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--delta", type=_positive_float, required=True)
    sp.add_argument("--r-max", type=int, default=3)
    sp.add_argument("--budget", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_search)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (UnclabError, OSError, ValueError) as exc:
        print(f"unclab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
