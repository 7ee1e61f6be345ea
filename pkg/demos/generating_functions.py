"""Generating functions of the mean position, from the spectral side and from the DP."""
# %%
import numpy as np

from wallwalk import generating_functions, generating_functions_dp, ode_residual, phi_closed, phi_series

delta = 1.5

# %% Phi_t(u) = sum H_y(t) u^y in closed form next to its truncated series.
v = phi_closed(delta, 0.5, 0.2)
print(v.phi, float(phi_series(delta, 0.5, 0.2)[0]))

# %% The closed form solves a first-order linear ODE in u.
print("ODE residual", ode_residual(delta, 0.5, np.linspace(0.1, 0.9, 9)))

# %% Even and odd parts of sum_n z^n E_0 X_n.
for z in (0.3, 0.9, 0.99, 0.999):
    g = generating_functions(delta, z)
    print(f"z={z}  g_e={g.g_e:.10g}  g_o={g.g_o:.10g}  g_o/g_e={g.g_o / g.g_e:.4f}")

# %% Partial sums from the exact means confirm the spectral values.
ref, tail = generating_functions_dp(delta, 0.9, 2000)
print(ref.g_e, generating_functions(delta, 0.9).g_e, "tail bound", tail)
