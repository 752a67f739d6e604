"""
Probit on a single predictor
============================

Fit a probit by Newton's method, look at the usual output, and test
restrictions with the Wald statistic.
"""

# %%
import numpy as np

from cycleprobe.probit import DesignMatrix, fit_probit, log_cdf, predict_prob, wald_test

rng = np.random.default_rng(7)
n = 200
x = rng.standard_normal(n)
z = rng.standard_normal(n)
y = (-0.5 + 1.2 * x + rng.standard_normal(n) > 0).astype(float)

design = DesignMatrix.with_intercept({"x": x, "z": z}, y)
fit = fit_probit(design)

# %%
# Coefficients with standard errors from the inverse observed information.
# `z` plays no part in the data, so its coefficient should be near zero.
for name, b, se, p in zip(fit.column_names, fit.coefficients, fit.std_errors, fit.p_values):
    print(f"{name:>6}  {b:+.3f}  ({se:.3f})  p = {p:.3f}")
print(f"log-likelihood {fit.log_likelihood:.3f}, null {fit.null_log_likelihood:.3f}")
print(f"McFadden R2 {fit.mcfadden_r2:.3f} after {fit.iterations} Newton steps")

# %%
# Wald tests: a single restriction is the squared z statistic; the joint
# test is reported both as chi2(q) and as W/q against F(q, n - k).
single = wald_test(fit, ["z"])
print(f"z alone: W = {single.chi2_stat:.3f} = z^2 = {fit.z_stats[2] ** 2:.3f}, p = {single.chi2_p:.3f}")
joint = wald_test(fit, ["x", "z"])
print(f"x and z: chi2 p = {joint.chi2_p:.2e}, F({joint.df_num}, {joint.df_denom}) p = {joint.f_p:.2e}")

# %%
# Predicted probabilities for new rows (intercept column included).
grid = np.column_stack([np.ones(5), np.linspace(-2, 2, 5), np.zeros(5)])
print(np.round(predict_prob(fit, grid), 3))

# %%
# The log-likelihood works with log Phi directly, which stays finite far
# into the tail where Phi itself underflows.
print("log Phi(-30) =", log_cdf(-30.0))
