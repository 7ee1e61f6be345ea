"""Power-law growth of the mean and of its generating function."""
# %%
import numpy as np

from wallwalk import check_gen_asymptotics, check_moment_asymptotics, k_delta, tauberian_fit

# %% The amplitude K_delta as a function of delta.
for d in (1.01, 1.1, 1.3, 1.5, 1.7, 1.9, 1.99):
    k = k_delta(d)
    print(f"delta={d}  K={k.value:.6g}  converged={k.converged}")

# %% g_e(z) against Gamma(2 - delta/2) K (1 - z)^{delta/2 - 2}.
rep = check_gen_asymptotics(1.5, 1.0 - np.geomspace(0.1, 0.001, 12))
for z, ge, r in rep.samples:
    print(f"z={z:.5f}  ratio={r:.5f}")
print("slope of log|r - 1|:", rep.fitted_exponent)

# %% Extrapolating g_e (1 - z)^{2 - delta/2} to z = 1 recovers the constant.
fit = tauberian_fit(1.5, 1.0 - np.geomspace(0.1, 0.001, 16))
print("fitted", fit.constant, "expected", fit.target, "relative error", fit.relative_error)

# %% On the step side the ratio E_0 X_n / (K n^{1 - delta/2}) drifts slowly upward.
rep = check_moment_asymptotics(1.5, [2**k for k in range(6, 15)])
for n, m, r in rep.samples:
    print(f"n={n:6d}  E X_n={m:.6f}  ratio={r:.4f}")
print("top-half slope:", rep.fitted_exponent)
