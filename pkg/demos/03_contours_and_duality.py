# %% [markdown]
# # Contour functionals, special solutions and the dual equation
#
# `e^{x^3/3}` decays in three sectors.  The functional `l_j` integrates
# `q e^h` along a path that arrives from one sector and leaves through the
# next.  With `n = 0` and `a = 0` these are Airy integrals, which gives an
# independent reference.

# %%
import mpmath

from wavecoh import spectral_datum
from wavecoh.contour import (J_values, asymptotics_check_g, contour_ratio_c, dual_g1, dual_g2,
                             taylor_reconstruct_p, y_solution)

mpmath.mp.prec = 256

# %% [markdown]
# ## Airy check

# %%
airy = spectral_datum(0, 0, 0)
for u in (0, mpmath.mpf("1.5"), mpmath.mpf(4)):
    g = dual_g1(airy, 2, u).value
    print(f"u = {mpmath.nstr(u, 3):>4}: g = {mpmath.nstr(g, 20)}   2 pi i Ai(u) = "
          f"{mpmath.nstr(2j * mpmath.pi * mpmath.airyai(u), 20)}")

# %% [markdown]
# ## The three constants J_j = l_j(1/p^2)
#
# They sum to zero because the three paths together bound no singularity
# of `e^h / p^2` once the pole detours are accounted for.

# %%
sd = spectral_datum(1, -1, 0)
Js = [J.value for J in J_values(sd)]
for j, J in enumerate(Js):
    print(f"J_{j} = {mpmath.nstr(J, 20)}")
print("sum:", mpmath.nstr(abs(sum(Js)), 3))
print("l_j(p(-x)^2) / J_j =", mpmath.nstr(contour_ratio_c(sd), 20))

# %% [markdown]
# ## Connection formula
#
# `y_j(x) = p(x) * (integral of e^h / p^2 from infinity in sector j to x)`
# solves the same ODE as `p`, and consecutive solutions differ by `J_j p`.

# %%
x = mpmath.mpc("0.4", "-0.8")
ys = [y_solution(sd, j, x).value for j in range(3)]
for j in range(3):
    gap = ys[(j + 1) % 3] - ys[j] + Js[j] * sd.p(x)
    print(f"y_{(j + 1) % 3} - y_{j} + J_{j} p = {mpmath.nstr(abs(gap), 3)}")

# %% [markdown]
# ## The dual equation
#
# Swapping multiplication by `x` with `d/du` turns the ODE into
# `u g'' - n g' - (u^2 - a u + b) g = 0`.  Two integral transforms solve it
# and agree up to the sign `(-1)^n`; the Taylor coefficients at `u = 0`
# rebuild `p` up to a constant.

# %%
sd = spectral_datum(3, 1, 0)
u = mpmath.mpc("0.5", "0.25")
g1, g2 = dual_g1(sd, 2, u).value, dual_g2(sd, 2, u).value
print("g1 + g2 =", mpmath.nstr(abs(g1 + g2), 3), "(n = 3)")
recon, alpha, worst = taylor_reconstruct_p(sd, 2)
print("Taylor reconstruction error:", mpmath.nstr(worst, 3))

# %% [markdown]
# ## Large-u behaviour
#
# The ratio to the leading asymptotic form approaches 1.  For the Airy case
# the relative correction is `5/(48 u^(3/2))`; for `n = 1` it decays only
# like `u^(-1/2)`, so the ratio is still visibly off at `|u| = 80`.

# %%
for n, a, idx in ((0, 0, 0), (1, -1, 0), (1, -1, 1)):
    r = asymptotics_check_g(spectral_datum(n, a, idx))
    devs = ", ".join(f"{d:.4f}" for d in r.detail["deviations"])
    print(f"n={n} a={a} eig={idx}: deviations at |u| = 20, 40, 80: {devs}  [{r.status}]")
