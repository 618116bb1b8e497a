"""Command-line front end.

Subcommands: analyze, ising-scan, xxz-scan, ed-dump.  Exit codes:
0 success, 2 validation failure (unphysical state / malformed input),
3 numerical failure (quadrature or eigensolver).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import chains, scan
from .filtering import FilterError, apply_filter, filtered_obesity_general, load_filter
from .ising import UnphysicalPairStateError
from .obesity import obesity
from .quadrature import QuadratureError
from .states import StateValidationError, load_state

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _load_config(path):
    if path is None:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    return cfg


def _merge(cfg, args, key, default):
    """Flag beats config beats default."""
    val = getattr(args, key)
    if val is not None:
        return val
    return cfg.get(key, default)


def _cmd_analyze(args):
    cfg = _load_config(args.config)
    report = scan.analyze_state(args.state)
    if args.filter:
        filt = load_filter(args.filter)
        rho = load_state(args.state)
        rho_f, trace_norm = apply_filter(rho, filt)
        report["filtered"] = {
            "trace_norm": trace_norm,
            "omega": obesity(rho_f),
            "omega_predicted": filtered_obesity_general(rho, filt),
        }
    text = json.dumps(report, indent=1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    del cfg
    return EXIT_OK


def _kink_note(records, name):
    try:
        kink = scan.detect_kink([r.param for r in records], [r.d_omega for r in records])
    except ValueError:
        return ""
    return f"; derivative kink at {name} = {kink.param_hat:.4f} (score {kink.score:.1f})"


def _cmd_ising_scan(args):
    cfg = _load_config(args.config)
    records = scan.ising_scan(
        lo=_merge(cfg, args, "lo", 0.0),
        hi=_merge(cfg, args, "hi", 2.0),
        step=_merge(cfg, args, "step", 0.01),
        k=int(_merge(cfg, args, "k", 1)),
        quad_tol=_merge(cfg, args, "quad_tol", 1e-10),
        with_filter=args.filter,
        densify=args.densify,
    )
    scan.write_scan_csv(records, args.out, scan.ISING_CSV_COLUMNS)
    print(f"wrote {len(records)} records to {args.out}" + _kink_note(records, "lambda"))
    return EXIT_OK


def _cmd_xxz_scan(args):
    cfg = _load_config(args.config)
    records = scan.xxz_scan(
        lo=_merge(cfg, args, "lo", -2.0),
        hi=_merge(cfg, args, "hi", 0.0),
        step=_merge(cfg, args, "step", 0.05),
        n_sites=int(_merge(cfg, args, "n", 12)),
        source=args.source,
        table_file=args.table_file,
    )
    scan.write_scan_csv(records, args.out, scan.XXZ_CSV_COLUMNS)
    print(f"wrote {len(records)} records to {args.out}" + _kink_note(records, "Delta"))
    return EXIT_OK


def _cmd_ed_dump(args):
    spec = chains.ChainSpec(args.model, args.n, args.param)
    chains.write_correlator_table(
        args.out, [spec], list(range(1, args.kmax + 1))
    )
    print(f"wrote correlators for {args.model} N={args.n} param={args.param} to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qobesity",
        description="Quantum obesity, steering ellipsoids and spin-chain phase-transition scans",
    )
    parser.add_argument("--config", help="JSON config file; flags override its values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="report obesity/ellipsoid geometry of a state file")
    p.add_argument("state", help="JSON state file {'rho': [[[re,im] x4] x4]}")
    p.add_argument("--filter", help="optional JSON filter file {'O_A': ..., 'O_B': ...}")
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("ising-scan", help="sweep the transverse-field Ising coupling")
    p.add_argument("--from", dest="lo", type=float, default=None)
    p.add_argument("--to", dest="hi", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--k", type=int, default=None, help="spin separation (default 1)")
    p.add_argument("--filter", action=argparse.BooleanOptionalAction, default=True,
                   help="include the filtered-obesity columns")
    p.add_argument("--quad-tol", dest="quad_tol", type=float, default=None)
    p.add_argument("--densify", action="store_true",
                   help="add a 10x finer sub-grid on [0.9, 1.1]")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_ising_scan)

    p = sub.add_parser("xxz-scan", help="sweep the XXZ anisotropy")
    p.add_argument("--from", dest="lo", type=float, default=None)
    p.add_argument("--to", dest="hi", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--n", type=int, default=None, help="chain length for ED (default 12)")
    p.add_argument("--source", choices=("ed", "table"), default="ed")
    p.add_argument("--table-file", dest="table_file", default=None)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_xxz_scan)

    p = sub.add_parser("ed-dump", help="dump exact-diagonalization pair correlators")
    p.add_argument("--model", choices=("ising", "xxz"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_ed_dump)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StateValidationError, FilterError, UnphysicalPairStateError,
            chains.NotBellDiagonalError, FileNotFoundError, json.JSONDecodeError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (QuadratureError, chains.EigensolverError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
