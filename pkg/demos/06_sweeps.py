"""Parameter sweeps to CSV and a gnuplot script, as the CLI does them."""

import tempfile
from pathlib import Path

from dnrate import experiments as ex

spec = ex.SweepSpec(
    sweep_variable="dx1",
    values=ex.parse_values("reciprocals(3, 50)"),
    mat1="water", mat2="steel", dt=10.0, r=1.0,
    modes=("formula", "observed_1d", "beta", "delta_r"),
)
rows = ex.run_sweep(spec)
worst = max(abs(r["observed_1d"] / r["formula"] - 1) for r in rows)
print(f"{len(rows)} points, max relative gap observed vs formula: {worst:.1e}")

out = Path(tempfile.mkdtemp())
csv = out / "water_steel_dx1.csv"
csv.write_text(ex.sweep_csv(spec, rows))
ex.emit_plots(csv, out / "water_steel_dx1.gp")
print(csv.read_text().splitlines()[0])
print("wrote", csv, "and", out / "water_steel_dx1.gp")

# the shipped specs cover every figure; the command line equivalent is
#   dnrate sweep --spec specs/air_steel_dt_r100.spec --out rates.csv
