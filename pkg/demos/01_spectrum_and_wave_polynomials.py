# %% [markdown]
# # Eigenvalues and wave polynomials
#
# For the weight `h(x) = x^3/3 + a x` the equation
# `y'' - h'(x) y' + (n x + b) y = 0` has a polynomial solution of degree `n`
# exactly when `-b` is an eigenvalue of a banded `(n+1) x (n+1)` operator.
# This script walks through the small cases by hand and then lets the
# library do the same for a larger `n`.

# %%
from fractions import Fraction

import mpmath

from wavecoh import char_poly, spectral_data
from wavecoh.spectra import WaveOperator

mpmath.mp.prec = 256

# %% [markdown]
# ## The characteristic polynomial is exact
#
# With a rational `a` the determinant stays in the rationals, so `chi` is
# compared symbolically.

# %%
for n in range(4):
    print(n, char_poly(n, Fraction(-1)).coeffs)

# %% [markdown]
# The operator itself, for `n = 2` and `a = -1`:

# %%
for row in WaveOperator(2, -1).matrix():
    print(row)

# %% [markdown]
# ## The desk case n = 1, a = -1
#
# Here `chi(lambda) = lambda^2 - 1`, the two eigenpairs have `b = 1` and
# `b = -1`, and the wave polynomials are `x - 1` and `x + 1`.  The
# characteristic derivative `chi'(b)` is `2b`.

# %%
for sd in spectral_data(1, -1):
    coeffs = [mpmath.nstr(mpmath.re(c), 10) for c in sd.p.coeffs]
    print(f"b = {mpmath.nstr(mpmath.re(sd.b), 10)}  p coefficients (ascending) = {coeffs}  "
          f"chi'(b) = {mpmath.nstr(mpmath.re(sd.chi_prime_at_b), 10)}")

# %% [markdown]
# ## A larger case
#
# For `n = 6` the roots of `chi` are found numerically at 256 bits and
# each wave polynomial is checked against the ODE at a few points.

# %%
for sd in spectral_data(6, 2):
    worst = max(abs(sd.ode_residual(x)) for x in (mpmath.mpf("0.3"), mpmath.mpc(-1, 1), mpmath.mpf(2)))
    print(f"[{sd.index}] b = {mpmath.nstr(sd.b, 12):>32}   ODE residual {mpmath.nstr(worst, 3)}")
