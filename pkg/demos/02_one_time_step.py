"""One implicit Euler step of the coupled 1D problem, solved two ways."""

import numpy as np

from dnrate import (DNConfig, GridSpec1D, StateVector, assemble, build_fem_blocks, build_fvm_blocks,
                    dn_time_step, material_from, monolithic_step)

unit = material_from(1.0, 1.0, 1.0)
grid = GridSpec1D(2, 2)
b1, b2 = build_fvm_blocks(grid, unit), build_fem_blocks(grid, unit)

system = assemble(b1, b2, dt=1.0)
np.set_printoptions(precision=4, suppress=True)
print("M~ + dt A~ for n1 = n2 = 2:")
print(system.a_step.toarray())

prev = StateVector(np.ones(2), np.ones(2), [1.0])
mono = monolithic_step(system, prev)

# The Dirichlet-Neumann iteration alternates a Dirichlet solve on the FVM
# side with a flux-driven solve on the FEM side.  With equal materials and
# this coarse grid the iteration matrix is about 0.965, so it is slow.
state, trace = dn_time_step(b1, b2, DNConfig(dt=1.0, max_iters=2000), prev)
print(f"DN iterations: {trace.iters}, converged: {trace.converged}")
print("DN        :", state.flat())
print("monolithic:", mono.flat())
print("difference:", np.linalg.norm(state.flat() - mono.flat()))
