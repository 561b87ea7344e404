"""Command line entry point: ``dnrate <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import experiments as ex
from .discretization import GridSpec1D, _cells_for
from .materials import PRESETS, load_materials, preset, resolve_material
from .theory import RateInputs, rate_report

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for numerical failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _write(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _extra(args):
    return load_materials(args.materials_file) if args.materials_file else None


def cmd_materials(args) -> int:
    table = {name: preset(name) for name in PRESETS}
    table.update(_extra(args) or {})
    rows = [{"name": k, "lambda": m.lam, "rho": m.rho, "cp": m.cp, "alpha": m.alpha, "d": m.d}
            for k, m in table.items()]
    _write(ex.format_csv(["name", "lambda", "rho", "cp", "alpha", "d"], rows), args.out)
    return EXIT_OK


def cmd_rate(args) -> int:
    extra = _extra(args)
    mat1, mat2 = resolve_material(args.mat1, extra), resolve_material(args.mat2, extra)
    dt, dx1 = ex.parse_number(args.dt), ex.parse_number(args.dx1)
    if args.n2 is not None:
        if args.r is not None:
            raise UsageError("give either --r or --n2")
        grid = GridSpec1D(_cells_for(dx1), args.n2)
        inp = RateInputs.build(dt, grid, mat1, mat2)
    else:
        r = ex.parse_number(args.r) if args.r is not None else 1.0
        inp, _ = ex._rate_inputs(ex.SweepSpec("dt", (dt,), r=r), mat1, mat2, dt, dx1)
    rep = rate_report(inp, mat1, mat2)
    cols = ["dt", "dx1", "dx2", "n1", "n2", "r", "sigma_exact", "sigma_schur", "beta",
            "delta_r", "temporal_limit"]
    row = {"dt": dt, "dx1": inp.dx1, "dx2": inp.dx2, "n1": inp.n1, "n2": inp.n2, "r": inp.r,
           "sigma_exact": rep.sigma_exact, "sigma_schur": rep.sigma_schur, "beta": rep.beta,
           "delta_r": rep.delta_r, "temporal_limit": rep.temporal_limit}
    _write(ex.format_csv(cols, [row], [f"mat1 = {args.mat1}", f"mat2 = {args.mat2}"]), args.out)
    return EXIT_OK


_FLAG_KEYS = ("sweep_variable", "values", "start", "stop", "count", "spacing", "mat1", "mat2",
              "dt", "dx1", "r", "modes", "tol", "max_iters", "ny", "materials_file")


def cmd_sweep(args) -> int:
    raw, base = {}, None
    if args.spec:
        raw = ex.read_spec_file(args.spec)
        base = Path(args.spec).parent
    flags = {k: getattr(args, k) for k in _FLAG_KEYS if getattr(args, k) is not None}
    if "values" in flags:
        for k in ex._RANGE_KEYS:
            raw.pop(k, None)
    if any(k in flags for k in ex._RANGE_KEYS):
        raw.pop("values", None)
    raw.update(flags)
    spec = ex.spec_from_mapping(raw, base_dir=base if "materials_file" not in flags else None)
    rows = ex.run_sweep(spec, workers=args.workers)
    _write(ex.sweep_csv(spec, rows), args.out)
    return EXIT_NUMERIC if any(r["error"] for r in rows) else EXIT_OK


def cmd_asymptotics(args) -> int:
    pairs = [p.strip() for p in args.pairs.split(",") if p.strip()]
    for p in pairs:
        if p.count("-") != 1:
            raise UsageError(f"pair {p!r} must look like mat1-mat2")
    cols, rows = ex.asymptotics_table(pairs, _extra(args))
    _write(ex.format_csv(cols, rows), args.out)
    return EXIT_OK


def cmd_fsi(args) -> int:
    if args.case not in ex.FSI_CASES:
        raise UsageError(f"unknown case {args.case!r}; choose from {sorted(ex.FSI_CASES)}")
    cols, rows, comments = ex.fsi_estimate(args.case)
    _write(ex.format_csv(cols, rows, comments), args.out)
    return EXIT_OK


def cmd_plots(args) -> int:
    out = args.out or str(Path(args.csv).with_suffix(".gp"))
    ex.emit_plots(args.csv, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dnrate", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--materials-file", dest="materials_file",
                        help="extra materials, lines of 'name lambda rho cp'")
        return sp

    common(sub.add_parser("materials", help="list the material table"))

    sp = common(sub.add_parser("rate", help="rate estimates at one parameter point"))
    sp.add_argument("--dt", required=True)
    sp.add_argument("--dx1", required=True)
    sp.add_argument("--r")
    sp.add_argument("--n2", type=int)
    sp.add_argument("--mat1", default="air")
    sp.add_argument("--mat2", default="steel")

    sp = common(sub.add_parser("sweep", help="rates over a range of dt or dx1"))
    sp.add_argument("--spec", help="file of 'key = value' lines; flags override it")
    sp.add_argument("--sweep", dest="sweep_variable", choices=("dt", "dx1"))
    sp.add_argument("--values", help="e.g. '1e-3, 1e-2' or 'multiples(40/39, 39)'")
    sp.add_argument("--start")
    sp.add_argument("--stop")
    sp.add_argument("--count")
    sp.add_argument("--spacing", choices=("linear", "log"))
    for flag in ("dt", "dx1", "r", "mat1", "mat2", "modes", "tol", "max_iters", "ny"):
        sp.add_argument(f"--{flag.replace('_', '-')}", dest=flag)
    sp.add_argument("--workers", type=int, default=1)

    sp = common(sub.add_parser("asymptotics", help="temporal and spatial limits per pair"))
    sp.add_argument("--pairs", default="air-steel,water-steel,air-water")

    sp = common(sub.add_parser("fsi-estimate", help="rates for the cooling applications"))
    sp.add_argument("--case", required=True)

    sp = sub.add_parser("plots", help="gnuplot script for a sweep CSV")
    sp.add_argument("csv")
    sp.add_argument("--out")
    return p


_COMMANDS = {"materials": cmd_materials, "rate": cmd_rate, "sweep": cmd_sweep,
             "asymptotics": cmd_asymptotics, "fsi-estimate": cmd_fsi, "plots": cmd_plots}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, ex.SpecError, KeyError, FileNotFoundError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"dnrate: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # bad numbers in flags or malformed input files
        print(f"dnrate: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"dnrate: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
