# # Arc sets and the Fourier kernel
#
# Outcome sets on the circle are finite unions of half-open arcs. Every
# effect matrix is built from one scalar per frequency: the normalized
# integral of exp(i q theta) over the set.

# %%
import numpy as np

from covphase import ArcSet, haar_measure, kernel_integral, normalize_arcs, rotate, set_complement

# %% Arcs are normalized on construction: overlaps merge, wrap-arounds glue.
X = normalize_arcs([(0.0, 1.0), (0.5, 1.5), (6.0, 0.2)])
print("arcs:", X.to_pairs())
print("measure:", haar_measure(X))
print("complement:", set_complement(X).to_pairs())

# %% The kernel at q = 0 is the measure; the full circle gives a delta.
q = np.arange(-4, 5)
print("kernel(X, q):", np.round(kernel_integral(X, q), 4))
print("kernel(full, q):", kernel_integral(ArcSet.full(), q).real)

# %% One cell of an equal k-partition is invisible to multiples of k.
k = 5
cell = normalize_arcs([(0, 2 * np.pi / k)])
print("cell kernel at q = 0, 5, 10:", [abs(kernel_integral(cell, q)) for q in (0, k, 2 * k)])

# %% Rotating the set multiplies the kernel by a phase.
theta = 0.7
lhs = kernel_integral(rotate(X, theta), 3)
print("rotation phase check:", abs(lhs - np.exp(3j * theta) * kernel_integral(X, 3)))
