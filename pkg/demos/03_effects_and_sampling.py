# # Effects, probabilities and Born-rule sampling

# %%
import numpy as np

from covphase import (
    IndexWindow,
    PhaseMatrix,
    covariance_check,
    density,
    effect_matrix,
    normalize_arcs,
    probability,
    random_gram_matrix,
    sample,
    superposition,
)
from covphase.observable import cdf

W = IndexWindow(0, 1)
ones = PhaseMatrix(W, np.ones((2, 2)))
half = normalize_arcs([(0, np.pi)])

# %% The all-ones matrix with an equal superposition gives density (1 + cos)/2pi.
psi = superposition(W)
print("E([0, pi)):\n", np.round(effect_matrix(ones, half).entries, 4))
print("P([0, pi)):", probability(ones, psi, half))
print("density at 0, pi/2, pi:", density(ones, psi, np.array([0, np.pi / 2, np.pi])) * 2 * np.pi)

# %% Samples follow the exact CDF.
draws = sample(ones, psi, 200_000, seed=0)
for x in (1.0, 2.0, 4.0):
    print(f"empirical vs exact CDF at {x}: {np.mean(draws < x):.4f} {cdf(ones, psi, x):.4f}")

# %% Rotating the outcome set is the same as conjugating by diagonal phases.
C = random_gram_matrix(IndexWindow(-5, 5), 4, seed=2)
X = normalize_arcs([(0.3, 2.2), (4.0, 5.0)])
print("covariance deviation:", covariance_check(C, X, 1.3))
