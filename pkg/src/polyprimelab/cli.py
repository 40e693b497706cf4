"""Command-line front end: verify | search | counterexample | transfer | spectrum.

Flags override config-file values; reports land in the output directory as
deterministic JSON (integers as decimal strings), bulk data as CSV.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .experiments import (
    config_from_sources,
    run_counterexample,
    run_search,
    run_spectrum,
    run_transfer,
    run_verify,
    write_report,
    _parse_w_spec,
)

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyprimelab",
        description="Experiments on monochromatic x + y = psi(z) with z from a prime progression",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in [
        ("verify", "run every module invariant suite; nonzero exit on failure"),
        ("search", "search a coloring file for monochromatic solutions"),
        ("counterexample", "build the blocking partition and verify emptiness"),
        ("transfer", "run the full transference pipeline"),
        ("spectrum", "dump spectra and report-only diagnostics"),
    ]:
        p = sub.add_parser(name, help=desc)
        p.add_argument("--config", help="key-value config file")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int, help="master seed (recorded in reports)")
        p.add_argument("--n", type=int, help="ambient scale")
        p.add_argument("--w", help="smooth modulus: level like '3' or exponents '2:1,3:2'")
        p.add_argument("--eta", help="spectrum threshold as a rational 'p/q'")
        p.add_argument("--eps", help="Bohr radius as a rational 'p/q'")
        p.add_argument("--rho", help="comma list of restriction exponents")
        p.add_argument("--arc-B", dest="arc_b", type=float, help="arc exponent B")
        p.add_argument("--psi", help="polynomial coefficients, highest degree first")
        p.add_argument("--b0", type=int)
        p.add_argument("--w0", type=int)
        p.add_argument("--m", type=int, help="number of colors")
        p.add_argument("--p", type=int, help="blocking prime (counterexample)")
        p.add_argument("--variant", choices=["integer-coloring", "prime-coloring"])
        p.add_argument("--coloring-rule", dest="coloring", help="random | residue:<q> | interval:<cuts>")
        if name == "search":
            p.add_argument("--coloring", dest="coloring_file", required=True, help="coloring file to search")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    out = {}
    simple = ["seed", "n", "b0", "w0", "m", "p", "variant", "arc_b", "out", "coloring"]
    for key in simple:
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    if getattr(args, "w", None) is not None:
        out["w_config"] = _parse_w_spec(args.w)
    if getattr(args, "eta", None) is not None:
        out["eta"] = Fraction(args.eta)
    if getattr(args, "eps", None) is not None:
        out["eps"] = Fraction(args.eps)
    if getattr(args, "rho", None) is not None:
        out["rho"] = tuple(float(x) for x in args.rho.split(","))
    if getattr(args, "psi", None) is not None:
        out["psi"] = tuple(int(c) for c in args.psi.replace("[", "").replace("]", "").split(","))
    return out


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = config_from_sources(args.config, _overrides(args))
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    out_dir = cfg.out
    try:
        if args.command == "verify":
            ok, report = run_verify(cfg)
            write_report(report, os.path.join(out_dir, "verify.json"))
            for name, entry in sorted(report["checks"].items()):
                status = "pass" if entry["pass"] else "FAIL"
                print(f"{status}  {name}  {entry['info']}")
            print("all checks passed" if ok else "FAILURES present")
            return 0 if ok else 1
        if args.command == "search":
            sols, report = run_search(
                cfg, args.coloring_file, os.path.join(out_dir, "solutions.csv")
            )
            write_report(report, os.path.join(out_dir, "search.json"))
            print(f"{report['status']}: {len(sols)} solution(s)")
            return 0
        if args.command == "counterexample":
            report = run_counterexample(cfg)
            write_report(report, os.path.join(out_dir, "counterexample.json"))
            print(f"empty: {report['empty']} across {3 * cfg.p} classes up to n = {cfg.n}")
            return 0
        if args.command == "transfer":
            report = run_transfer(cfg)
            write_report(report, os.path.join(out_dir, "transfer.json"))
            print(
                f"N = {report['context']['N']}, dense class size = "
                f"{report['dense_class']['size']}, lifted = {report['solutions_sampled']}"
            )
            return 0
        if args.command == "spectrum":
            report = run_spectrum(cfg, out_dir)
            write_report(report, os.path.join(out_dir, "spectrum.json"))
            print(
                f"mass = {report['measure_summary']['mass']:.6f}, "
                f"minor-arc ratio = {report['minor_arc_decay']['ratio']}"
            )
            return 0
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
