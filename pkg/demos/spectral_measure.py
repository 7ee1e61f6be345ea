"""Orthogonality measure of the walk polynomials and spectral transition probabilities."""
# %%
import numpy as np

from wallwalk import build_measure, eval_family, evolve, gram, km_transition, stationary

delta = 1.5
mu = build_measure(delta, 512)

# %% Two atoms of mass pi_0 at +-1 and a continuous part of mass 1/delta.
print("atom", mu.atom_mass, "continuous", mu.continuous_mass, "total", mu.total_mass)

# %% The density is even with integrable singularities at the ends.
t = np.array([0.0, 0.5, 0.9, 0.99, 0.999])
print(np.column_stack([t, mu.density(t)]))

# %% Q_x are orthogonal with norms pi_0 / pi_x.
G = gram(mu, 10)
pi = stationary(delta, 10).values
print("max off-target:", np.max(np.abs(G - np.diag(pi[0] / pi))))

# %% Q_1 = t and Q_2 = 3.5 t^2 - 2.5 at delta = 1.5.
print(eval_family("Q", 2, np.array([0.0, 1.0]), delta=delta))

# %% Transition probabilities from the measure agree with the exact law,
# and stay cheap for very large n where the DP would be slow.
fine = build_measure(delta, 2048)
print(km_transition(delta, 0, 0, 2000, measure=fine).raw, evolve(delta, 0, 2000)[0])
for n in (20_000, 200_000, 2_000_000):
    print(n, km_transition(delta, 0, 0, n, measure=fine).raw - 1 / 3)
