"""
gfinv - Main Entry Point
Command-line front end: field descriptions, inversion-stable subspace classification,
S-box certification, brute-force scans and the AES walkthrough.
"""
import argparse
import logging
import os
import sys

from dotenv import load_dotenv
load_dotenv()

from gfinv import commands, settings, storage
from gfinv.errors import GfinvError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfinv", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--field", help="field description file, or a name under fields/ (default: aes)")
    parser.add_argument("--p", type=int, help="characteristic, for an inline field")
    parser.add_argument("--n", type=int, help="extension degree, for an inline field")
    parser.add_argument("--modulus", help="'1,1,0,1,1,0,0,0,1', 'x^8+x^4+x^3+x+1' or 0x11B; default is the smallest irreducible")
    parser.add_argument("--workers", type=int, help="worker processes for scans and classification")
    parser.add_argument("--cap", type=int, help="largest number of subspaces one enumeration may visit")
    parser.add_argument("--output", help="write the report here instead of standard output")
    parser.add_argument("--format", choices=("json", "text"), help="report format (default: json)")
    parser.add_argument("--config", help="run defaults file (default: config.json next to app.py)")
    parser.add_argument("--progress", action="store_true", help="stream per-dimension counters to standard error")

    sub = parser.add_subparsers(dest="command", required=True)

    p_field = sub.add_parser("field", help="describe the configured field")
    p_field.add_argument("--write", help="save the field description to this path")

    p_classify = sub.add_parser("classify", help="affine subspaces mapped to affine subspaces by inversion")
    p_classify.add_argument("--brute", action="store_true", help="confirm against the exhaustive oracle")

    p_certify = sub.add_parser("certify", help="certify A(x^-1) + b or alpha x^-1 + b")
    p_certify.add_argument("--b", required=True, help="the additive constant (hex, decimal or polynomial)")
    group = p_certify.add_mutually_exclusive_group(required=True)
    group.add_argument("--matrix", help="builtin:aes, builtin:identity, builtin:mul:<g>, builtin:frobenius:<k> or a JSON file")
    group.add_argument("--alpha", help="scalar alpha for x -> alpha x^-1 + b")
    group.add_argument("--sbox", help="table to test through b^-1 f(b): builtin:aes or a table file")
    p_certify.add_argument("--brute-check", action="store_true", help="append the scanner's ground truth")

    p_construct = sub.add_parser("construct", help="parameters (alpha, b) with no invariant affine subspace")
    p_construct.add_argument("--b", help="fix b (default 1)")
    p_construct.add_argument("--all-b", action="store_true", help="emit pairs for every nonzero b")
    p_construct.add_argument("--limit", type=int, help="stop after this many pairs")
    p_construct.add_argument("--brute-check", action="store_true", help="confirm every pair with a full scan")

    p_scan = sub.add_parser("scan", help="brute-force scan of an S-box table")
    p_scan.add_argument("--sbox", required=True, help="builtin:aes, builtin:inv, builtin:identity or a table file")
    p_scan.add_argument("--table-format", choices=("hex-table", "json"), help="table file format (default by suffix)")
    p_scan.add_argument("--dims", help="comma-separated dimensions to scan (default: all)")
    mode = p_scan.add_mutually_exclusive_group()
    mode.add_argument("--images", action="store_true", help="report subspaces whose image is affine")
    mode.add_argument("--survey", action="store_true", help="report cosets mapped onto cosets")
    p_scan.add_argument("--min-card", type=int, default=3, help="smallest subspace for --images (default 3)")

    p_demo = sub.add_parser("aes-demo", help="walk through the AES S-box certificate")
    p_demo.add_argument("--skip-scan", action="store_true", help="leave out the full GF(2^8) scan")
    return parser


def _configure_logging(progress: bool):
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL, logging.WARNING),
        format="[%(name)s] %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    if progress:
        for name in ("gfinv.scan", "gfinv.inv_map", "gfinv.commands"):
            logging.getLogger(name).setLevel(logging.INFO)


def _run_config(args) -> commands.RunConfig:
    defaults = storage.load_run_defaults(args.config)
    spec, source = commands.resolve_field(args.field, args.p, args.n, args.modulus,
                                          default_field=defaults.get("field", "aes"))
    if args.workers is not None:
        workers = args.workers
    elif "GFINV_WORKERS" in os.environ:
        workers = settings.DEFAULT_WORKERS
    else:
        workers = int(defaults.get("workers", settings.DEFAULT_WORKERS))
    cap = args.cap if args.cap is not None else defaults.get("cap")
    return commands.RunConfig(
        spec=spec,
        field_source=source,
        worker_count=workers,
        cap_override=int(cap) if cap is not None else None,
        output=args.output,
        format=args.format or defaults.get("format", "json"),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.progress)
    try:
        config = _run_config(args)
        if args.command == "field":
            return commands.cmd_field(config, write=args.write)
        if args.command == "classify":
            return commands.cmd_classify(config, brute=args.brute)
        if args.command == "certify":
            return commands.cmd_certify(config, b=args.b, matrix=args.matrix, alpha=args.alpha,
                                        sbox=args.sbox, brute_check=args.brute_check)
        if args.command == "construct":
            return commands.cmd_construct(config, b=args.b, all_b=args.all_b, limit=args.limit,
                                          brute_check=args.brute_check)
        if args.command == "scan":
            return commands.cmd_scan(config, sbox=args.sbox, fmt=args.table_format, dims=args.dims,
                                     images=args.images, min_card=args.min_card, survey=args.survey)
        if args.command == "aes-demo":
            return commands.cmd_aes_demo(config, skip_scan=args.skip_scan)
    except GfinvError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
