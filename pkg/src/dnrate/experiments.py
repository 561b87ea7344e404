"""Parameter sweeps, tables and plot scripts written as flat CSV files."""

from __future__ import annotations

import ast
import math
import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .discretization import GridSpec1D, build_fem_blocks, build_fvm_blocks
from .dn1d import DNConfig, RateEstimationError, StateVector, dn_time_step, observed_rate
from .materials import Material, load_materials, material_from, resolve_material
from .model2d import GridSpec2D, State2D, build_fem_2d, build_fvm_2d, dn_time_step_2d
from .theory import RateInputs, semidiscrete_beta, sigma_exact, sigma_schur, spatial_limit

MODES = ("formula", "schur_oracle", "observed_1d", "observed_2d", "beta", "delta_r")
OBSERVED = ("observed_1d", "observed_2d")

# flag values written next to observed rates
CONVERGED, NOT_CONVERGED, TOO_FEW_ITERATIONS, FAILED = 1, 0, 2, -1


class SpecError(ValueError):
    """Invalid sweep specification (a usage error)."""


# --- small expression language for spec values ---------------------------

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _eval_node(node):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    raise SpecError(f"unsupported expression: {ast.dump(node)}")


def parse_number(text: str) -> float:
    """Evaluate ``40/39``, ``1e-4`` or ``2*40/39``; nothing else is allowed."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise SpecError(f"cannot parse number {text!r}") from None
    return _eval_node(tree.body)


def parse_values(text: str) -> tuple[float, ...]:
    """Parse a value list.

    Accepted forms::

        1, 40/39, 1e-3                explicit list
        linspace(start, stop, count)
        logspace(start, stop, count)  start/stop are the values, not exponents
        multiples(base, count)        base, 2*base, ..., count*base
        reciprocals(first, last)      1/first, 1/(first+1), ..., 1/last
    """
    text = text.strip()
    if not text:
        raise SpecError("empty value list")
    if "(" in text:
        name, _, rest = text.partition("(")
        if not rest.endswith(")"):
            raise SpecError(f"unbalanced parentheses in {text!r}")
        args = [parse_number(a) for a in rest[:-1].split(",")]
        name = name.strip()
        if name in ("linspace", "logspace") and len(args) == 3:
            start, stop, count = args
            return range_values(start, stop, int(count),
                                "linear" if name == "linspace" else "log")
        elif name == "multiples" and len(args) == 2:
            vals = args[0] * np.arange(1, int(args[1]) + 1)
        elif name == "reciprocals" and len(args) == 2:
            vals = 1.0 / np.arange(int(args[0]), int(args[1]) + 1, dtype=float)[::-1]
        else:
            raise SpecError(f"unknown value generator {text!r}")
        return tuple(float(v) for v in vals)
    return tuple(parse_number(t) for t in text.split(",") if t.strip())


# --- sweep specification --------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    sweep_variable: str
    values: tuple
    mat1: str = "air"
    mat2: str = "steel"
    dt: float = 1.0
    dx1: float = 1.0 / 1100
    r: float = 1.0
    modes: tuple = ("formula",)
    tol: float = 1e-10
    max_iters: int = 100
    ny: int | None = None
    materials_file: str | None = None

    def __post_init__(self):
        if self.sweep_variable not in ("dt", "dx1"):
            raise SpecError(f"sweep_variable must be 'dt' or 'dx1', got {self.sweep_variable!r}")
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise SpecError("values must not be empty")
        if any(not (v > 0 and math.isfinite(v)) for v in vals):
            raise SpecError("values must be positive")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise SpecError("values must be strictly increasing")
        modes = tuple(self.modes)
        object.__setattr__(self, "modes", modes)
        if not modes:
            raise SpecError("at least one mode is required")
        unknown = [m for m in modes if m not in MODES]
        if unknown:
            raise SpecError(f"unknown modes {unknown}; choose from {list(MODES)}")
        if len(set(modes)) != len(modes):
            raise SpecError("modes must not repeat")

    def materials(self) -> tuple[Material, Material]:
        extra = load_materials(self.materials_file) if self.materials_file else None
        try:
            return resolve_material(self.mat1, extra), resolve_material(self.mat2, extra)
        except KeyError as exc:
            raise SpecError(str(exc.args[0])) from None

    def columns(self) -> list[str]:
        cols = [self.sweep_variable, *self.modes]
        cols += [f"{m}_flag" for m in self.modes if m in OBSERVED]
        return cols + ["error"]

    def to_lines(self) -> list[str]:
        out = [
            f"sweep_variable = {self.sweep_variable}",
            "values = " + ", ".join(_fmt(v) for v in self.values),
            f"mat1 = {self.mat1}",
            f"mat2 = {self.mat2}",
        ]
        fixed = "dx1" if self.sweep_variable == "dt" else "dt"
        out.append(f"{fixed} = {_fmt(getattr(self, fixed))}")
        out += [f"r = {_fmt(self.r)}", "modes = " + ", ".join(self.modes),
                f"tol = {_fmt(self.tol)}", f"max_iters = {self.max_iters}"]
        if self.ny is not None:
            out.append(f"ny = {self.ny}")
        if self.materials_file:
            out.append(f"materials_file = {self.materials_file}")
        return out


_SPEC_KEYS = {"sweep_variable", "values", "start", "stop", "count", "spacing", "mat1", "mat2",
              "dt", "dx1", "r", "modes", "tol", "max_iters", "ny", "materials_file"}
_RANGE_KEYS = ("start", "stop", "count", "spacing")


def range_values(start: float, stop: float, count: int, spacing: str = "linear") -> tuple:
    """``count`` values from ``start`` to ``stop`` inclusive, linear or log spaced."""
    if count < 1:
        raise SpecError("count must be at least 1")
    if spacing == "linear":
        vals = np.linspace(start, stop, count)
    elif spacing == "log":
        if start <= 0 or stop <= 0:
            raise SpecError("log spacing needs positive bounds")
        vals = np.geomspace(start, stop, count)
    else:
        raise SpecError(f"spacing must be 'linear' or 'log', got {spacing!r}")
    return tuple(float(v) for v in vals)


def read_spec_file(path) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise SpecError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip()
        if key not in _SPEC_KEYS:
            raise SpecError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value.strip()
    return out


def spec_from_mapping(raw: dict[str, str], base_dir=None) -> SweepSpec:
    """Build a :class:`SweepSpec` from string values (spec file or CLI flags)."""
    kw = {}
    raw = {k: v for k, v in raw.items() if v is not None}
    given = [k for k in _RANGE_KEYS if k in raw]
    if given:
        if "values" in raw:
            raise SpecError("give either values or start/stop/count, not both")
        missing = [k for k in ("start", "stop", "count") if k not in raw]
        if missing:
            raise SpecError(f"range is missing {missing}")
        try:
            count = int(raw["count"])
        except ValueError:
            raise SpecError(f"count must be an integer, got {raw['count']!r}") from None
        kw["values"] = range_values(parse_number(raw["start"]), parse_number(raw["stop"]),
                                    count, raw.get("spacing", "linear").strip())
        raw = {k: v for k, v in raw.items() if k not in _RANGE_KEYS}
    for key, value in raw.items():
        if key == "values":
            kw[key] = parse_values(value)
        elif key == "modes":
            kw[key] = tuple(m.strip() for m in value.split(",") if m.strip())
        elif key in ("dt", "dx1", "r", "tol"):
            kw[key] = parse_number(value)
        elif key in ("max_iters", "ny"):
            try:
                kw[key] = int(value)
            except ValueError:
                raise SpecError(f"{key} must be an integer, got {value!r}") from None
        elif key == "materials_file" and base_dir is not None and not Path(value).is_absolute():
            kw[key] = str(Path(base_dir) / value)
        else:
            kw[key] = value
    if "sweep_variable" not in kw or "values" not in kw:
        raise SpecError("sweep_variable and values are required")
    try:
        return SweepSpec(**kw)
    except TypeError as exc:
        raise SpecError(str(exc)) from None


# --- evaluation ---------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v, ".17g")


def _point(spec: SweepSpec, value: float):
    dt = value if spec.sweep_variable == "dt" else spec.dt
    dx1 = value if spec.sweep_variable == "dx1" else spec.dx1
    return dt, dx1


def _rate_inputs(spec, mat1, mat2, dt, dx1):
    try:
        return RateInputs.build(dt, GridSpec1D.from_dx(dx1, spec.r), mat1, mat2), True
    except ValueError:
        return RateInputs.from_widths(dt, dx1, spec.r * dx1, mat1, mat2), False


def _observe_1d(spec, mat1, mat2, dt, dx1):
    grid = GridSpec1D.from_dx(dx1, spec.r)
    cfg = DNConfig(dt=dt, tol=spec.tol, max_iters=spec.max_iters, initial_interface=0.0)
    _, trace = dn_time_step(build_fvm_blocks(grid, mat1), build_fem_blocks(grid, mat2), cfg,
                            StateVector.hat(grid))
    return _trace_rate(trace)


def _observe_2d(spec, mat1, mat2, dt, dx1):
    grid = GridSpec2D.from_dx(dx1, spec.r, spec.ny)
    cfg = DNConfig(dt=dt, tol=spec.tol, max_iters=spec.max_iters, initial_interface=0.0)
    state = smooth_state_2d(grid)
    _, trace = dn_time_step_2d(build_fvm_2d(grid, mat1), build_fem_2d(grid, mat2), cfg, state)
    return _trace_rate(trace)


def smooth_state_2d(grid: GridSpec2D) -> State2D:
    """Hat profile in x times the lowest sine mode along the interface."""
    h = grid.height
    return State2D.from_function(grid, lambda x, y: (1.0 - np.abs(x)) * np.sin(np.pi * y / h))


def _trace_rate(trace):
    try:
        rate = observed_rate(trace)
    except RateEstimationError:
        return float("nan"), TOO_FEW_ITERATIONS
    if not np.isfinite(rate):
        return float("nan"), NOT_CONVERGED
    return rate, CONVERGED if trace.converged else NOT_CONVERGED


def evaluate_point(spec: SweepSpec, value: float) -> dict:
    """All requested modes at one swept value; failures become NaN plus ``error = 1``."""
    mat1, mat2 = spec.materials()
    dt, dx1 = _point(spec, value)
    row = {spec.sweep_variable: value, "error": 0}
    inp = exact_grid = None
    for mode in spec.modes:
        try:
            if mode in ("formula", "schur_oracle") and inp is None:
                inp, exact_grid = _rate_inputs(spec, mat1, mat2, dt, dx1)
            if mode == "formula":
                row[mode] = sigma_exact(inp)
            elif mode == "schur_oracle":
                if not exact_grid:
                    raise ValueError("mesh widths do not form a valid grid")
                row[mode] = sigma_schur(inp)
            elif mode == "beta":
                row[mode] = semidiscrete_beta(dt, mat1, mat2)
            elif mode == "delta_r":
                row[mode] = spatial_limit(spec.r, mat1.lam, mat2.lam)
            elif mode == "observed_1d":
                row[mode], row[f"{mode}_flag"] = _observe_1d(spec, mat1, mat2, dt, dx1)
            elif mode == "observed_2d":
                row[mode], row[f"{mode}_flag"] = _observe_2d(spec, mat1, mat2, dt, dx1)
        except (ArithmeticError, ValueError, RuntimeError):
            row[mode] = float("nan")
            if mode in OBSERVED:
                row[f"{mode}_flag"] = FAILED
            row["error"] = 1
    return row


def _evaluate_args(args):
    return evaluate_point(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[dict]:
    """Evaluate every value of the sweep; rows come back in spec order."""
    spec.materials()  # fail early on unknown materials
    jobs = [(spec, v) for v in spec.values]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate_args, jobs))
    return [evaluate_point(*j) for j in jobs]


def format_csv(columns, rows, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row[c]) if not isinstance(row[c], str) else row[c]
                              for c in columns))
    return "\n".join(lines) + "\n"


def sweep_csv(spec: SweepSpec, rows=None, workers: int = 1) -> str:
    rows = run_sweep(spec, workers) if rows is None else rows
    return format_csv(spec.columns(), rows, spec.to_lines())


def read_csv(path_or_text):
    """Parse a CSV written by this module into ``(comments, header, rows)``."""
    text = path_or_text
    if not isinstance(text, str) or "\n" not in text:
        text = Path(path_or_text).read_text()
    comments, header, rows = [], None, []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        cells = [c.strip() for c in line.split(",")]
        if header is None:
            header = cells
            continue
        if len(cells) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} fields, got {len(cells)}")
        rows.append(cells)
    if header is None:
        raise ValueError("CSV has no header row")
    return comments, header, rows


# --- tables -----------------------------------------------------------------------

def asymptotics_table(pairs, extra=None) -> tuple[list[str], list[dict]]:
    """Temporal limit and spatial coefficient (times ``r``) per material pair."""
    rows = []
    for pair in pairs:
        name1, name2 = pair if isinstance(pair, tuple) else pair.split("-")
        m1, m2 = resolve_material(name1, extra), resolve_material(name2, extra)
        rows.append({"pair": f"{name1}-{name2}", "temporal_limit": 0.0,
                     "spatial_coefficient": spatial_limit(1.0, m1.lam, m2.lam)})
    return ["pair", "temporal_limit", "spatial_coefficient"], rows


# Application parameters: cell widths at the interface and steel coefficients
# at the quoted temperatures (rho of steel 7836 throughout).
FSI_CASES = {
    "flat_plate": {"dx1": 9.3736e-5, "dx2": 1.6667, "lam": 39.82, "cp": 1.3684e3,
                   "theta": 900.0, "r_quoted": 1.7780e4, "r_mesh_text": 1.7780e5},
    "flanged_shaft": {"dx1": 1.6538e-4, "dx2": 1.1364, "lam": 39.8, "cp": 572.75,
                      "theta": 1145.0, "r_quoted": 6.8713e3, "r_mesh_text": None},
}

FSI_DT = tuple(float(v) for v in np.geomspace(1e-3, 1e1, 13))


def fsi_materials(case: str) -> tuple[Material, Material]:
    p = FSI_CASES[case]
    air = resolve_material("air")
    return air, material_from(p["lam"], 7836.0, p["cp"], f"steel@{p['theta']:g}K")


def fsi_estimate(case: str, dts=FSI_DT) -> tuple[list[str], list[dict], list[str]]:
    """Rate estimates for one of the two cooling applications over ``dts``.

    Returns ``(columns, rows, comments)``.
    """
    if case not in FSI_CASES:
        raise KeyError(f"unknown case {case!r}; choose from {sorted(FSI_CASES)}")
    p = FSI_CASES[case]
    air, steel = fsi_materials(case)
    r = p["dx2"] / p["dx1"]
    comments = [f"case = {case}", f"dx1 = {_fmt(p['dx1'])}", f"dx2 = {_fmt(p['dx2'])}",
                f"r_from_dx = {_fmt(r)}", f"r_quoted = {_fmt(p['r_quoted'])}"]
    if p["r_mesh_text"] is not None:
        comments.append(f"r_mesh_description = {_fmt(p['r_mesh_text'])} (differs from r_from_dx)")
    comments.append(f"steel lambda = {_fmt(steel.lam)}, cp = {_fmt(steel.cp)}, rho = 7836")
    rows = []
    for dt in dts:
        inp = RateInputs.from_widths(dt, p["dx1"], p["dx2"], air, steel)
        rows.append({"dt": dt, "sigma_exact": sigma_exact(inp),
                     "beta": semidiscrete_beta(dt, air, steel),
                     "delta_r": spatial_limit(r, air.lam, steel.lam)})
    return ["dt", "sigma_exact", "beta", "delta_r"], rows, comments


# --- plot scripts -----------------------------------------------------------------

def emit_plots(csv_path, out_path=None, title: str | None = None) -> str:
    """Write a gnuplot script drawing every rate column of a CSV on log-log axes."""
    comments, header, rows = read_csv(csv_path)
    skip = {"error"} | {c for c in header if c.endswith("_flag")}
    series = [c for c in header[1:] if c not in skip and c != "pair"]
    csv_name = Path(csv_path).name if "\n" not in str(csv_path) else "data.csv"
    lines = [
        f"# gnuplot script for {csv_name}",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        "set logscale xy",
        f"set xlabel '{header[0]}'",
        "set ylabel 'convergence rate'",
    ]
    if title:
        lines.append(f"set title '{title}'")
    if not rows:
        lines.append("# warning: no data rows, the plot is empty")
        lines.append("plot NaN notitle")
    elif not series:
        lines.append("# warning: no rate columns found")
        lines.append("plot NaN notitle")
    else:
        parts = [f"'{csv_name}' using 1:{header.index(c) + 1} with linespoints title '{c}'"
                 for c in series]
        lines.append("plot " + ", \\\n     ".join(parts))
    script = "\n".join(lines) + "\n"
    if out_path is not None:
        Path(out_path).write_text(script)
    return script


