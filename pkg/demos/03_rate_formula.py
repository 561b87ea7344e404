"""The exact rate against the Schur complement oracle and the DN solver."""

from dnrate import (DNConfig, GridSpec1D, RateInputs, StateVector, build_fem_blocks,
                    build_fvm_blocks, dn_time_step, observed_rate, preset, semidiscrete_beta,
                    sigma_exact, sigma_schur)

air, steel = preset("air"), preset("steel")
grid = GridSpec1D.from_dx(1 / 1100, r=100)
b1, b2 = build_fvm_blocks(grid, air), build_fem_blocks(grid, steel)

print("dt        formula       schur         observed      beta")
for k in (1, 5, 10, 20, 39):
    dt = 40 / 39 * k
    inp = RateInputs.build(dt, grid, air, steel)
    # start the interface at 0 with a hat profile so the first update is O(1)
    cfg = DNConfig(dt=dt, initial_interface=0.0)
    _, trace = dn_time_step(b1, b2, cfg, StateVector.hat(grid))
    print(f"{dt:8.4f}  {sigma_exact(inp):.6e}  {sigma_schur(inp):.6e}  "
          f"{observed_rate(trace):.6e}  {semidiscrete_beta(dt, air, steel):.6e}")
