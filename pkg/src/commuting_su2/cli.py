"""Command-line front end.

Exit codes: 0 when every requested check passes, 1 on a mathematical
mismatch, 2 on usage or guard errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from typing import Sequence

from . import closed_form as cf
from .cw import DEFAULT_MAX_N, MAX_N_ENV, GuardExceeded, check_guard, sign_vectors
from .linalg import AbelianGroup, mod2_rank
from .restriction import expected_rank, restriction_matrix, restriction_rows
from .ring import BlowupRing, YnRing, additive_structure
from .verify import CHECKS, ORACLE_CHECKS, oracle_groups, oracle_z2_dims, run_checks

log = logging.getLogger("commuting_su2")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "space": "yn",
    "theory": "cohomology-z",
    "format": "json",
    "oracle": False,
    "check": "all",
    "max_degree": 9,
    "quantity": "h3-z2",
    "n_range": None,
    "n": None,
    "values": None,
    "out": None,
}


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    try:
        lo, hi = (int(t) for t in text.split(".."))
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected a..b") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return list(range(lo, hi + 1))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="commuting-su2", description="K-theory and cohomology of Hom(Z^n, SU(2)).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spaces=True, theory=False, formats=("json", "csv", "markdown")):
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--n-range", default=None, help="inclusive range a..b")
        if spaces:
            sp.add_argument("--space", choices=cf.SPACES, default=None)
        if theory:
            sp.add_argument("--theory", choices=cf.THEORIES, default=None)
        sp.add_argument("--format", choices=formats, default=None)
        sp.add_argument("--max-n", type=int, default=None, help=f"oracle guard (env {MAX_N_ENV}, default {DEFAULT_MAX_N})")
        sp.add_argument("--config", default=None, help="JSON file of option defaults")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")
        sp.add_argument("-v", "--verbose", action="store_true")

    g = sub.add_parser("groups", help="closed-form groups, optionally checked against the oracle")
    common(g, theory=True)
    g.add_argument("--oracle", action="store_true", default=None)

    r = sub.add_parser("ring", help="multiplication table of a presented K-ring")
    common(r)

    v = sub.add_parser("verify", help="run cross-checks")
    common(v, spaces=False)
    v.add_argument("--check", choices=("all",) + CHECKS, default=None)

    s = sub.add_parser("restrict", help="restriction matrix and its mod-2 rank")
    common(s, spaces=False)

    f = sub.add_parser("fi-growth", help="finite-difference test on a dimension sequence")
    common(f, spaces=False, formats=("json", "markdown"))
    f.add_argument("--max-degree", type=int, default=None)
    f.add_argument("--quantity", choices=("h3-z2", "h3-free"), default=None)
    f.add_argument("--values", default=None, help="explicit comma-separated sequence")
    return p


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config file over defaults."""
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from None
        cfg.update({k.replace("-", "_"): v for k, v in loaded.items()})
    for k, v in vars(args).items():
        if v is not None:
            cfg[k] = v
    if cfg.get("max_n") is None:
        env = os.environ.get(MAX_N_ENV)
        cfg["max_n"] = int(env) if env else DEFAULT_MAX_N
    if cfg.get("n_range"):
        cfg["ns"] = parse_range(cfg["n_range"])
    elif cfg.get("n") is not None:
        if cfg["n"] < 1:
            raise UsageError("n must be >= 1")
        cfg["ns"] = [cfg["n"]]
    else:
        cfg["ns"] = None
    return cfg


def _need_ns(cfg) -> list[int]:
    if not cfg["ns"]:
        raise UsageError("--n or --n-range is required")
    return cfg["ns"]


def _groups_row(key: str, closed: AbelianGroup, oracle: AbelianGroup | None) -> dict:
    row = {"key": key, "closed_form": str(closed), "closed_form_group": closed.to_json()}
    if oracle is not None:
        row |= {"oracle": str(oracle), "oracle_group": oracle.to_json(), "match": oracle == closed}
    return row


def run_groups(cfg) -> tuple[dict, int]:
    reports, mismatch = [], False
    for n in _need_ns(cfg):
        table = cf.closed_form_table(cfg["space"], cfg["theory"], n)
        oracle = None
        if cfg["oracle"]:
            if cfg["theory"] == "k":
                ring = BlowupRing(n) if cfg["space"] == "blowup" else YnRing(n)
                oracle = {p: additive_structure(ring, p) for p in cf.PARITIES}
            else:
                check_guard(n, cfg["max_n"])
                if cfg["theory"] == "cohomology-z":
                    oracle = dict(enumerate(oracle_groups(cfg["space"], n, cfg["max_n"])))
                else:
                    dims = oracle_z2_dims(cfg["space"], n, cfg["max_n"])
                    oracle = {k: AbelianGroup.elementary(0, d) for k, d in enumerate(dims)}
        rows = []
        for key in table.keys():
            name = key if cfg["theory"] == "k" else f"H{key}"
            rows.append(_groups_row(name, table.groups[key], None if oracle is None else oracle[key]))
        rep = {"space": table.space, "theory": table.theory, "n": n, "provenance": table.provenance, "rows": rows}
        if oracle is not None:
            ok = all(r["match"] for r in rows)
            mismatch |= not ok
            rep["oracle_source"] = (
                "additive basis of the presented ring" if cfg["theory"] == "k" else "cellular chain complex"
            )
            rep["verdict"] = "all degrees agree" if ok else "mismatch"
        reports.append(rep)
    return {"command": "groups", "reports": reports}, EXIT_MISMATCH if mismatch else EXIT_OK


def run_ring(cfg) -> tuple[dict, int]:
    reports = []
    for n in _need_ns(cfg):
        check_guard(n, cfg["max_n"])
        ring = BlowupRing(n) if cfg["space"] == "blowup" else YnRing(n)
        t = ring.multiplication_table()
        t["basis"] = [str(m) for m in ring.basis()]
        reports.append(t)
    return {"command": "ring", "reports": reports}, EXIT_OK


def run_verify(cfg) -> tuple[dict, int]:
    ns = cfg["ns"] or [1, 2, 3, 4]
    checks = CHECKS if cfg["check"] == "all" else (cfg["check"],)
    if any(c in ORACLE_CHECKS for c in checks):
        for n in ns:
            check_guard(n, cfg["max_n"])
    results = []
    for name in checks:
        start = time.perf_counter()
        batch = run_checks([name], ns, cfg["max_n"])
        log.info("check %s finished in %.2fs", name, time.perf_counter() - start)
        for r in batch:
            log.info("  %s n=%s: %s", r.name, r.n, "pass" if r.passed else "FAIL")
        results.extend(batch)
    ok = all(r.passed for r in results)
    report = {"command": "verify", "passed": ok, "checks": [r.to_json() for r in results]}
    return report, EXIT_OK if ok else EXIT_MISMATCH


def run_restrict(cfg) -> tuple[dict, int]:
    reports, ok = [], True
    for n in _need_ns(cfg):
        M = restriction_matrix(n)
        rank = mod2_rank(M)
        rows = [k if not idx else f"{k}{''.join(map(str, idx)) if n < 10 else idx}" for k, idx in restriction_rows(n)]
        cols = ["".join("+" if s == 1 else "-" for s in a) for a in sign_vectors(n)]
        ok &= rank == expected_rank(n)
        reports.append(
            {"n": n, "rows": rows, "columns": cols, "matrix": M.to_dense(), "rank": rank,
             "expected_rank": expected_rank(n), "independent": rank == expected_rank(n)}
        )
    return {"command": "restrict", "reports": reports}, EXIT_OK if ok else EXIT_MISMATCH


def run_fi_growth(cfg) -> tuple[dict, int]:
    d = int(cfg["max_degree"])
    if cfg.get("values"):
        vals = cfg["values"]
        values = [int(x) for x in vals.split(",")] if isinstance(vals, str) else [int(x) for x in vals]
        ns, quantity = None, "explicit"
    else:
        ns = cfg["ns"] or list(range(1, 13))
        quantity = cfg["quantity"]
        if quantity == "h3-z2":
            values = [cf.yn_mod2_betti(n, 3) for n in ns]
        else:
            values = [cf.yn_cohomology(n, 3).free_rank for n in ns]
    poly = cf.polynomial_growth_test(values, d)
    lowest = next((k for k in range(d + 1) if cf.polynomial_growth_test(values, k)), None)
    diffs = {str(k): cf.finite_differences(values, k) for k in range(d + 2)}
    verdict = f"polynomial of degree {lowest}" if poly else f"non-polynomial up to degree {d}"
    report = {
        "command": "fi-growth", "quantity": quantity, "n": ns, "values": values, "max_degree": d,
        "differences": diffs, "polynomial": poly, "verdict": verdict,
    }
    return report, EXIT_OK


RUNNERS = {"groups": run_groups, "ring": run_ring, "verify": run_verify, "restrict": run_restrict, "fi-growth": run_fi_growth}


# formatting ---------------------------------------------------------------


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _md(header: list[str], rows: list[list]) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(str(c) for c in r) + " |" for r in rows]
    return "\n".join(lines)


def format_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    cmd = report["command"]
    if cmd == "groups":
        header = ["space", "theory", "n", "key", "closed_form", "oracle", "match"]
        rows = [
            [r["space"], r["theory"], r["n"], row["key"], row["closed_form"], row.get("oracle", ""), row.get("match", "")]
            for r in report["reports"]
            for row in r["rows"]
        ]
    elif cmd == "verify":
        header = ["check", "n", "passed", "detail"]
        rows = [[c["check"], c["n"] if c["n"] is not None else "", c["passed"], "; ".join(c["detail"])] for c in report["checks"]]
    elif cmd == "restrict":
        if fmt == "markdown":
            parts = []
            for r in report["reports"]:
                parts.append(f"n = {r['n']}: mod-2 rank {r['rank']} (expected {r['expected_rank']})\n")
                parts.append(_md(["generator"] + r["columns"], [[g] + row for g, row in zip(r["rows"], r["matrix"])]))
            return "\n\n".join(parts) + "\n"
        out = []
        for r in report["reports"]:
            out.append(["n", r["n"], "rank", r["rank"], "expected_rank", r["expected_rank"]])
            out.append(["generator"] + r["columns"])
            out += [[g] + row for g, row in zip(r["rows"], r["matrix"])]
        return _csv(out)
    elif cmd == "ring":
        if fmt == "markdown":
            parts = []
            for t in report["reports"]:
                gens = t["generators"]
                parts.append(f"{t['ring']} ring, n = {t['n']}\n")
                parts.append(_md(["*"] + gens, [[g] + [t["products"][g][h] for h in gens] for g in gens]))
            return "\n\n".join(parts) + "\n"
        header = ["ring", "n", "left", "right", "product"]
        rows = [
            [t["ring"], t["n"], g, h, t["products"][g][h]] for t in report["reports"] for g in t["generators"] for h in t["generators"]
        ]
    elif cmd == "fi-growth":
        d = report["max_degree"]
        lines = [f"quantity: {report['quantity']}", f"verdict: {report['verdict']}", ""]
        lines.append(_md(["order", "finite differences"], [[k, " ".join(map(str, v))] for k, v in report["differences"].items()]))
        return "\n".join(lines) + f"\n\n(tested up to degree {d})\n"
    else:
        raise ValueError(cmd)
    if fmt == "csv":
        return _csv([header] + rows)
    return _md(header, rows) + "\n"


def _setup_logging(verbose: bool):
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    _setup_logging(args.verbose or bool(getattr(args, "oracle", False)) or args.command == "verify")
    try:
        cfg = resolve(args)
        report, code = RUNNERS[args.command](cfg)
    except (UsageError, GuardExceeded, cf.InsufficientData, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = format_report(report, cfg["format"])
    if cfg.get("out"):
        with open(cfg["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
