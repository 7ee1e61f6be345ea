"""The walk itself: step probabilities, exact laws and the stationary law."""
# %%
import numpy as np

from wallwalk import evolve, mean_trajectory, stationary, step_probs

delta = 1.5

# %% Away from the wall the walk is almost symmetric; near it the pull dominates.
for y in (1, 2, 10, 100):
    p, q = step_probs(delta, y)
    print(f"y={y:4d}  up {p:.4f}  down {q:.4f}")

# %% Exact law after n steps by dynamic programming. Only sites with the
# parity of n are reachable from 0.
dist = evolve(delta, 0, 10)
for y in range(0, 11, 2):
    print(y, dist[y])
print("mass", dist.probs.sum())

# %% The stationary law has a y^{-delta} tail, so the mean is infinite for delta <= 2.
pi = stationary(delta, 10_000).values
y = np.array([100, 1000, 10_000])
print("pi_y * y^delta:", pi[y] * y**delta)

# %% E_0 X_n grows on even steps and zig-zags between parities.
m = mean_trajectory(delta, 0, 12)
print(np.round(m, 4))

# %% For delta > 2 the parity-averaged mean settles at delta / (2 (delta - 2)).
m = mean_trajectory(3.0, 0, 10_001)
for n in (100, 1000, 10_000):
    print(n, 0.5 * (m[n] + m[n + 1]))
