"""Behaviour of the exact rate for small time steps and fine meshes."""

from dnrate import GridSpec1D, RateInputs, preset, semidiscrete_beta, sigma_exact, spatial_limit

air, steel = preset("air"), preset("steel")

# dt -> 0: the rate vanishes, roughly linearly in dt
inp = RateInputs.build(1.0, GridSpec1D.from_dx(1 / 1100, 100), air, steel)
for dt in (1e-10, 1e-8, 1e-6, 1e-4, 1e-2, 1.0):
    print(f"dt={dt:7.0e}  sigma={sigma_exact(inp.with_dt(dt)):.3e}")

# dx1 -> 0 at fixed dt and r: the rate levels off.  At r = 1 the plateau is
# the semidiscrete rate beta(dt), not r * lambda1 / lambda2.  The two agree
# only once dt is large enough for beta to reach its own large-dt limit.
for dt in (10.0, 1e7):
    beta = semidiscrete_beta(dt, air, steel)
    delta = spatial_limit(1.0, air.lam, steel.lam)
    print(f"\ndt={dt:g}: beta={beta:.5e} delta_r={delta:.5e}")
    for k in (100, 1000, 10000, 100000):
        s = sigma_exact(RateInputs.from_widths(dt, 1 / k, 1 / k, air, steel))
        print(f"  dx1=1/{k:<6d} sigma={s:.5e}  sigma/beta={s / beta:.6f}  sigma/delta_r={s / delta:.4f}")
