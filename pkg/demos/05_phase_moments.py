# # Moment operators
#
# Cyclic moments pick out one diagonal of the phase matrix. The first angle
# moment divides the off-diagonal entries by i(m - n), so the matrix can be
# read back from it.

# %%
import numpy as np

from covphase import (
    IndexWindow,
    PhaseMatrix,
    cyclic_moment,
    first_phase_moment,
    parity_matrix,
    second_phase_moment,
    trivial_phase_matrix,
)
from covphase.analysis import moment_defect, reconstruct_from_first_moment

W = IndexWindow(-3, 3)
C = parity_matrix(0.5, W)
print("V(1):\n", cyclic_moment(C, 1).real)

# %%
E1 = first_phase_moment(C)
print("reconstruction error:", np.max(np.abs(reconstruct_from_first_moment(E1, W).entries - C.entries)))

# %% The trivial observable is uniform: mean pi, variance pi^2/3 in every state.
T = trivial_phase_matrix(W)
print("mean:", first_phase_moment(T)[0, 0], " variance:", (second_phase_moment(T) - first_phase_moment(T) @ first_phase_moment(T))[0, 0].real)

# %% Projection-valued observables have E2 close to E1 squared away from the edges.
W32 = IndexWindow(-32, 32)
print("defect, all-ones:", moment_defect(PhaseMatrix(W32, np.ones((65, 65))), 16))
print("defect, parity 0.5:", moment_defect(parity_matrix(0.5, W32), 16))
