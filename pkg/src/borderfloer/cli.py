"""Command line front end.

Subcommands:

- `tau`: tau of the three-component satellite glued from J with framing s
  and K with framing t.  Prints the integer; `--json` prints the full
  report.
- `whitehead`: tau of the t-twisted Whitehead double of K with the given
  clasp sign.
- `hfk`: per-level homology dimensions of the associated graded for one
  run, as `level: dim` lines.
- `sweep`: tau over a rectangle of (s, t) values, rendered as a grid with
  `!` marking cells where the computation disagrees with the closed-form
  oracle.
- `validate FILE`: structural checks for a module/complex file or a knot
  chain-model file (sniffed from the JSON keys).
- `fixtures check`: integrity suite over the packaged reference modules.
- `reduce FILE`: cancel a filtered complex or module and report
  survivors, pages, and tau.
- `tensor A SIDE_A B SIDE_B`: box tensor product of two module files.

Exit status: 0 on success, 1 when a computation disagrees with the
oracle or a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .knot_cfd import (
    CFKModel, KnotModelError, builtin_model, loads_model, validate_model,
)
from .pipeline import (
    PipelineError, SatelliteRequest, sweep, tau_satellite, tau_whitehead,
)
from .reduction import CancellationPolicy, ReductionError, reduce
from .structures import (
    StructureError, dumps_structure, exhaustive_pool, loads_structure,
    validate_a_infinity, validate_generic,
)
from .tensor import TensorPlan, box

__all__ = ["main"]


class InputError(Exception):
    """Unreadable file, malformed JSON, failed validation, bad flag value."""


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None


def _load_model(spec: str) -> CFKModel:
    """`builtin:NAME` or a path to a knot chain-model JSON file."""
    if spec.startswith("builtin:"):
        try:
            return builtin_model(spec[len("builtin:"):])
        except KnotModelError as e:
            raise InputError(str(e)) from None
    try:
        model = loads_model(_read_text(spec))
    except (KnotModelError, ValueError) as e:
        raise InputError(f"{spec}: {e}") from None
    report = validate_model(model)
    if not report.ok:
        raise InputError(f"{spec}: " + "; ".join(report.errors[:5]))
    return model


def _load_structure(path: str):
    try:
        return loads_structure(_read_text(path))
    except (StructureError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _write_trace(path: str, trace: list) -> None:
    try:
        Path(path).write_text(json.dumps(trace, indent=1) + "\n")
    except OSError as e:
        raise InputError(f"cannot write trace to {path}: {e}") from None


def _range_pair(text: str):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI integers, got {text!r}")


def _emit_report(rep, args) -> int:
    if args.json:
        print(json.dumps(rep.to_json(), indent=1))
    elif args.command == "hfk":
        for level in sorted(rep.hfk_dims):
            print(f"{level}: {rep.hfk_dims[level]}")
    else:
        print(rep.tau)
    if not rep.agrees:
        print(f"note: computed tau {rep.tau} disagrees with closed-form "
              f"prediction {rep.theorem_prediction}", file=sys.stderr)
        return 1
    return 0


def cmd_tau(args) -> int:
    req = SatelliteRequest(_load_model(args.J), args.s, _load_model(args.K), args.t)
    trace = [] if args.trace else None
    rep = tau_satellite(req, prune=args.prune, seed=args.seed, trace_out=trace)
    if args.trace:
        _write_trace(args.trace, trace)
    return _emit_report(rep, args)


# same computation as tau; _emit_report renders the level table instead
cmd_hfk = cmd_tau


def cmd_whitehead(args) -> int:
    trace = [] if args.trace else None
    rep = tau_whitehead(_load_model(args.K), args.t, args.sign,
                        prune=args.prune, seed=args.seed, trace_out=trace)
    if args.trace:
        _write_trace(args.trace, trace)
    return _emit_report(rep, args)


def cmd_sweep(args) -> int:
    J = _load_model(args.J)
    K = _load_model(args.K)
    try:
        result = sweep(J, K, args.s_range, args.t_range,
                       prune=args.prune, seed=args.seed)
    except ValueError as e:
        raise InputError(str(e)) from None
    cells = result.cells
    if args.json:
        print(json.dumps({
            "J": J.name, "K": K.name,
            "cells": [{"s": s, "t": t, **rep.to_json()}
                      for (s, t), rep in sorted(cells.items())],
            "disagreements": len(result.disagreements),
        }, indent=1))
    elif cells:
        s_vals = sorted({s for s, _ in cells})
        t_vals = sorted({t for _, t in cells})
        body = {st: f"{rep.tau}" + ("" if rep.agrees else "!")
                for st, rep in cells.items()}
        width = max(len(c) for c in body.values())
        width = max(width, *(len(str(t)) for t in t_vals))
        left = max(len(f"s={s}") for s in s_vals)
        print(" " * left + " " + " ".join(f"{t:>{width}}" for t in t_vals))
        for s in s_vals:
            row = " ".join(f"{body[(s, t)]:>{width}}" for t in t_vals)
            print(f"{f's={s}':>{left}} {row}")
        print(f"{len(cells)} cells, {len(result.disagreements)} disagreements")
    else:
        print("0 cells, 0 disagreements")
    return 0 if result.ok else 1


def cmd_validate(args) -> int:
    text = _read_text(args.file)
    try:
        obj = json.loads(text)
    except ValueError as e:
        raise InputError(f"{args.file}: not valid JSON: {e}") from None
    if isinstance(obj, dict) and "sides" in obj:
        S = _load_structure(args.file)
        report = validate_generic(S)
        if not report.ok:
            raise InputError(f"{args.file}: " + "; ".join(report.errors[:10]))
        if args.exhaustive is not None:
            if not S.a_labels():
                raise InputError("--exhaustive needs a structure with an A side")
            deep = validate_a_infinity(S, exhaustive_pool(S, args.exhaustive))
            if not deep.ok:
                print(f"{args.file}: fails the relation on exhaustive inputs "
                      f"up to total length {args.exhaustive}:", file=sys.stderr)
                for err in deep.errors[:10]:
                    print(f"  {err}", file=sys.stderr)
                return 1
        kinds = ",".join(f"{s.label}:{s.kind}" for s in S.sides) or "complex"
        print(f"ok: structure ({kinds}) with {len(S.generators)} generators, "
              f"{len(S.terms)} terms")
        return 0
    if isinstance(obj, dict) and ("xi_to_eta" in obj or "vertical_lengths" in obj):
        try:
            model = loads_model(text)
        except (KnotModelError, ValueError) as e:
            raise InputError(f"{args.file}: {e}") from None
        report = validate_model(model)
        if not report.ok:
            raise InputError(f"{args.file}: " + "; ".join(report.errors[:10]))
        print(f"ok: knot model {model.name!r} with {2 * model.n + 1} "
              f"generators, tau={model.tau}")
        return 0
    raise InputError(f"{args.file}: unrecognized JSON; expected a module file "
                     f"(key 'sides') or a knot model file (key 'xi_to_eta')")


def cmd_fixtures(args) -> int:
    from .fixtures import check_fixtures
    failures = check_fixtures()
    if failures:
        for line in failures:
            print(line, file=sys.stderr)
        print(f"{len(failures)} fixture check(s) failed", file=sys.stderr)
        return 1
    print("all fixture checks passed")
    return 0


def cmd_reduce(args) -> int:
    S = _load_structure(args.file)
    res = reduce(S, CancellationPolicy(seed=args.seed))
    if args.trace:
        _write_trace(args.trace, res.trace)
    if args.json:
        print(json.dumps({
            "survivors": res.survivors,
            "tau": res.tau,
            "pages": {str(p): {str(l): d for l, d in sorted(dims.items())}
                      for p, dims in sorted(res.pages.items())},
            "structure": json.loads(dumps_structure(res.structure)),
        }, indent=1))
        return 0
    names = ", ".join(res.survivors[:12])
    if len(res.survivors) > 12:
        names += ", ..."
    print(f"survivors: {len(res.survivors)}" + (f" ({names})" if names else ""))
    print(f"tau: {res.tau if res.tau is not None else 'none'}")
    for p, dims in sorted(res.pages.items()):
        row = " ".join(f"{l}:{d}" for l, d in sorted(dims.items()))
        print(f"page {p}: {row}")
    return 0


def cmd_tensor(args) -> int:
    left = _load_structure(args.fileA)
    right = _load_structure(args.fileB)
    try:
        product = box(TensorPlan(left, args.sideA, right, args.sideB),
                      prune=args.prune)
    except StructureError as e:
        raise InputError(str(e)) from None
    if args.json:
        print(dumps_structure(product))
        return 0
    kinds = ",".join(f"{s.label}:{s.kind}" for s in product.sides) or "complex"
    print(f"product ({kinds}): {len(product.generators)} generators, "
          f"{len(product.terms)} terms")
    return 0


def _add_run_flags(sp, trace: bool = True) -> None:
    sp.add_argument("--json", action="store_true",
                    help="print the full report as JSON")
    sp.add_argument("--prune", action="store_true",
                    help="drop module inputs no complement chain can realize")
    sp.add_argument("--seed", type=int, default=None,
                    help="randomize cancellation tie-breaks (result-invariant)")
    if trace:
        sp.add_argument("--trace", metavar="PATH",
                        help="write the cancellation log as JSON")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="borderfloer",
        description="Satellite tau and knot Floer dimensions from bordered modules.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("tau", help="tau for one (J, s, K, t)")
    sp.add_argument("--J", required=True, metavar="MODEL",
                    help="companion on the first side: builtin:NAME or a JSON path")
    sp.add_argument("--s", required=True, type=int, help="framing on the J side")
    sp.add_argument("--K", required=True, metavar="MODEL",
                    help="companion on the second side")
    sp.add_argument("--t", required=True, type=int, help="framing on the K side")
    _add_run_flags(sp)
    sp.set_defaults(func=cmd_tau)

    sp = sub.add_parser("whitehead", help="tau of a twisted Whitehead double")
    sp.add_argument("--K", required=True, metavar="MODEL")
    sp.add_argument("--t", required=True, type=int, help="twist parameter")
    sp.add_argument("--sign", required=True, choices=("+", "-"),
                    help="clasp sign of the double")
    _add_run_flags(sp)
    sp.set_defaults(func=cmd_whitehead)

    sp = sub.add_parser("hfk", help="per-level dimensions for one (J, s, K, t)")
    sp.add_argument("--J", required=True, metavar="MODEL")
    sp.add_argument("--s", required=True, type=int)
    sp.add_argument("--K", required=True, metavar="MODEL")
    sp.add_argument("--t", required=True, type=int)
    _add_run_flags(sp)
    sp.set_defaults(func=cmd_hfk)

    sp = sub.add_parser("sweep", help="tau over a grid of (s, t) framings")
    sp.add_argument("--J", required=True, metavar="MODEL")
    sp.add_argument("--K", required=True, metavar="MODEL")
    sp.add_argument("--s-range", required=True, type=_range_pair, metavar="LO:HI")
    sp.add_argument("--t-range", required=True, type=_range_pair, metavar="LO:HI")
    _add_run_flags(sp, trace=False)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("validate", help="check a module or knot-model JSON file")
    sp.add_argument("file")
    sp.add_argument("--exhaustive", type=int, metavar="N",
                    help="also test the relation on every input vector of "
                         "total length at most N")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("fixtures", help="packaged reference data")
    fsub = sp.add_subparsers(dest="fixtures_command", required=True,
                             metavar="ACTION")
    fc = fsub.add_parser("check", help="run the fixture integrity suite")
    fc.set_defaults(func=cmd_fixtures)

    sp = sub.add_parser("reduce", help="cancel a filtered complex or module")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--trace", metavar="PATH")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("tensor", help="box tensor product of two module files")
    sp.add_argument("fileA")
    sp.add_argument("sideA", help="A-side label consumed from the first file")
    sp.add_argument("fileB")
    sp.add_argument("sideB", help="D-side label consumed from the second file")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--prune", action="store_true")
    sp.set_defaults(func=cmd_tensor)
    return p


def _merge_range_flags(argv):
    """Join `--s-range -3:3` into `--s-range=-3:3`.

    Range values starting with a negative bound would otherwise be read
    as option strings."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in ("--s-range", "--t-range") and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_merge_range_flags(list(argv)))
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 for --help; keep main()
        # return-based so embedding callers never see SystemExit
        return e.code if isinstance(e.code, int) else 2
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (PipelineError, ReductionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (StructureError, KnotModelError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
