"""Rate estimates for the flat plate and the flanged shaft."""

from dnrate import experiments as ex

for case in ("flat_plate", "flanged_shaft"):
    cols, rows, comments = ex.fsi_estimate(case)
    print("\n".join(comments))
    for row in rows[::3]:
        print(f"  dt={row['dt']:8.4f}  sigma={row['sigma_exact']:.3e}  beta={row['beta']:.3e}")
    print()
