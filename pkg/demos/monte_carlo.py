"""Reproducible Monte Carlo of the walk, checked against the exact means."""
# %%
from wallwalk import mean_trajectory, simulate

# %% 10^6 paths of 100 steps. Each block of paths owns its own random stream,
# so the numbers do not depend on how many threads run them.
res = simulate(1.5, 0, 100, paths=10**6, seed=2024, workers=4)
exact = mean_trajectory(1.5, 0, 100)
for n in (10, 50, 100):
    print(f"n={n:3d}  MC {res.mean[n]:.5f} +- {res.stderr[n]:.5f}  exact {exact[n]:.5f}")

# %% Same seed, one worker: bit-identical.
again = simulate(1.5, 0, 100, paths=10**6, seed=2024, workers=1)
print("identical:", again.mean.tobytes() == res.mean.tobytes())
