# # Commutative, projection-valued and equivalent observables
#
# The parity family alternates two unit vectors with overlap xi. All of its
# members satisfy the triple-product criterion for commuting effects, but only
# xi = +-1 gives projections.

# %%
import numpy as np

from covphase import (
    IndexWindow,
    PhaseMatrix,
    check_commutative_criterion,
    check_equivalent,
    check_projection_valued,
    commutator_norm,
    normalize_arcs,
    parity_matrix,
    pv_matrix,
    random_gram_matrix,
)

for xi in (-1, -0.5, 0, 0.5, 1):
    C = parity_matrix(xi, IndexWindow(-6, 6))
    print(f"xi={xi:+.1f} commutes={check_commutative_criterion(C).passed} pv={check_projection_valued(C)}")

# %% A generic Gram matrix fails, with a witness triple.
report = check_commutative_criterion(random_gram_matrix(IndexWindow(-4, 4), 9, seed=0))
print(report.passed, report.witnesses[0])

# %% On a finite window the commutator of two effects only vanishes away from the edges.
X, Y = normalize_arcs([(0, np.pi)]), normalize_arcs([(0, np.pi / 2)])
for L in (8, 16, 32):
    z_win = commutator_norm(parity_matrix(0.5, IndexWindow(-L, L)), X, Y, margin=L // 2)
    n_win = commutator_norm(parity_matrix(0.5, IndexWindow(0, L)), X, Y, margin=L // 2, edges="upper")
    print(f"L={L:2d} two-sided window {z_win:.2e}   half-line window {n_win:.2e}")

# %% Unimodular matrices are all gauge-equivalent to the all-ones matrix.
W = IndexWindow(-3, 3)
P = pv_matrix(np.random.default_rng(0).uniform(0, 6, W.size), W)
phases = check_equivalent(PhaseMatrix(W, np.ones((7, 7))), P)
print("gauge phases:", np.round(phases.phases, 3))
