"""Command-line front end.

Three subcommands:

  verify   run seeded verification campaigns and write report files
  explain  print what a named check computes, with the tensor layout
           rendered for a concrete chain length
  perm     print the slot permutation and padding pattern for one n

Exit status: 0 when everything passed, 1 when any trial failed, 2 on
configuration or usage errors.
"""
from __future__ import annotations

import argparse
import sys

from . import __version__
from .campaign import (
    CHECKS,
    CampaignConfig,
    config_from,
    load_config_file,
    run_campaign,
)
from .combinatorics import (
    MAX_N,
    build_permutation,
    shape_params,
    slot_sources,
    thue_morse_prefix,
)
from .entangle import build_layout
from .errors import TraceIneqError, UnknownCheck


def _layout_text(n: int, d: int) -> list[str]:
    """Slot-by-slot description of the tensor factors for chain length n."""
    layout = build_layout(n, d)
    shape = shape_params(n)
    lines = [
        f"layout for n = {n}, local dimension d = {d}:",
        f"  levels = {shape.level_count}, full chain length = {shape.full_n}, "
        f"padded slots = {shape.pad_count}",
        f"  total one-side dimension = {layout.total_dim}",
        f"  left factors: A_1 and conj(A_{n}), then maximally entangled",
        "  projector blocks: " +
        ", ".join(f"P on {c} pair cop{'ies' if c > 1 else 'y'}"
                  for c in layout.pair_copies),
        "  mid slots (order of tensor factors in the conjugating power):",
    ]
    for slot in layout.mid_slots:
        if slot.source is None:
            lines.append(f"    slot {slot.slot}: identity pad")
        else:
            tag = ", entrywise conjugate" if slot.conjugate else ""
            lines.append(f"    slot {slot.slot}: A_{slot.source}{tag}")
    lines.append(f"  outer pairing copies = {layout.outer_copies}")
    return lines


def _perm_text(n: int) -> list[str]:
    shape = shape_params(n)
    sources = slot_sources(n)
    reduced = build_permutation(n)
    alpha = thue_morse_prefix(shape.full_n)
    lines = [
        f"chain length n = {n}",
        f"levels = {shape.level_count}, full chain length = {shape.full_n}, "
        f"padded slots = {shape.pad_count}",
        "full slot table (slot: source, conjugation bit):",
    ]
    for idx, src in enumerate(sources):
        slot = idx + 2
        bit = alpha[idx]
        what = f"A_{src}" if src is not None else "identity"
        lines.append(f"  slot {slot}: {what:9s} alpha = {bit}")
    lines.append("reduced permutation on live slots:")
    for k, v in sorted(reduced.mapping.items()):
        lines.append(f"  {k} -> {v}")
    return lines


def _cmd_verify(args) -> int:
    file_overrides = load_config_file(args.config) if args.config else {}
    flag_overrides = {
        "suite": args.suite,
        "checks": tuple(args.check) if args.check else None,
        "n_values": tuple(args.n) if args.n else None,
        "local_dim": args.d,
        "trials": args.trials,
        "seed": args.seed,
        "lam_lo": args.lam_min,
        "lam_hi": args.lam_max,
        "out": args.out,
        "fmt": args.format,
        "parallel": args.parallel,
    }
    cfg = config_from(file_overrides, flag_overrides)
    summary = run_campaign(cfg)
    print(summary.to_text())
    if cfg.out:
        print(f"reports under {cfg.out}.*")
    return 0 if summary.passed else 1


def _cmd_explain(args) -> int:
    if args.check not in CHECKS:
        raise UnknownCheck(f"no check named {args.check!r}; known: "
                           f"{', '.join(sorted(CHECKS))}")
    spec = CHECKS[args.check]
    print(f"{spec.check_id}  (suite: {spec.suite})")
    print()
    print(f"  {spec.formula}")
    print()
    print(f"{spec.description}")
    if spec.n_policy == "fixed":
        print(f"chain length: fixed at n = {spec.fixed_n}")
    elif spec.n_policy == "grid":
        print("chain length: runs over the configured n grid")
    if spec.layout_aware:
        n = args.n if args.n is not None else (spec.fixed_n or 4)
        print()
        for line in _layout_text(n, args.d):
            print(line)
    return 0


def _cmd_perm(args) -> int:
    for line in _perm_text(args.n):
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="traceineq",
        description="Numerical verification of multivariate trace "
                    "inequalities and the identities behind them.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("--suite", choices=("identities", "inequalities", "all"),
                   default=None, help="which family of checks to run")
    p.add_argument("--check", action="append", metavar="ID",
                   help="restrict to a named check (repeatable)")
    p.add_argument("--n", type=int, nargs="+", metavar="N",
                   help="chain lengths for the n-dependent checks (3..6)")
    p.add_argument("--d", type=int, default=None, metavar="D",
                   help="local matrix dimension")
    p.add_argument("--trials", type=int, default=None,
                   help="random trials per check and chain length")
    p.add_argument("--seed", type=int, default=None,
                   help="base seed; trial i uses seed + i")
    p.add_argument("--lam-min", type=float, default=None,
                   help="smallest eigenvalue drawn")
    p.add_argument("--lam-max", type=float, default=None,
                   help="largest eigenvalue drawn")
    p.add_argument("--out", default=None, metavar="PREFIX",
                   help="report file prefix (default: $TRACEINEQ_OUT/report "
                        "when the variable is set, else no files)")
    p.add_argument("--format", choices=("jsonl", "csv"), default=None,
                   help="per-trial report format")
    p.add_argument("--config", default=None, metavar="FILE",
                   help="key = value configuration file; flags override it")
    p.add_argument("--parallel", type=int, default=None, metavar="W",
                   help="worker processes (0 = one per core, 1 = in process)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("explain", help="describe one check")
    p.add_argument("--check", required=True, metavar="ID")
    p.add_argument("--n", type=int, default=None,
                   help=f"chain length for the layout rendering (3..{MAX_N})")
    p.add_argument("--d", type=int, default=2,
                   help="local dimension for the layout rendering")
    p.set_defaults(func=_cmd_explain)

    p = sub.add_parser("perm", help="print the slot permutation for one n")
    p.add_argument("--n", type=int, required=True,
                   help=f"chain length (3..{MAX_N})")
    p.set_defaults(func=_cmd_perm)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TraceIneqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
