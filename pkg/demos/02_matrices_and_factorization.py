# # Phase matrices and their unit-vector factorizations
#
# A phase matrix has unit diagonal and is positive semidefinite, which
# makes it exactly the Gram matrix of a sequence of unit vectors.

# %%
import numpy as np

from covphase import (
    IndexWindow,
    factorize_spectral,
    gram,
    parity_matrix,
    principal_minor_check,
    random_gram_matrix,
    same_observable,
    validate,
)
from covphase.gram_factor import factorize_paper_phase

W = IndexWindow(-4, 4)

# %% Validation reports every defect it finds.
C = parity_matrix(0.5, W)
print(validate(C).to_dict())
print("3x3 minors:", principal_minor_check(C, 3))

# %% Two ways to recover vectors: the spectral square root and the weighted construction.
R = random_gram_matrix(W, 3, seed=1)
spectral = factorize_spectral(R)
weighted = factorize_paper_phase(R)
for name, V in (("spectral", spectral), ("weighted", weighted)):
    print(name, "round trip:", np.max(np.abs(gram(V).entries - R.entries)))

# %% The two factorizations differ by an isometry, so they define the same observable.
print("same observable:", same_observable(spectral, weighted))
print("rank of R:", np.sum(np.linalg.eigvalsh(R.entries) > 1e-10))
