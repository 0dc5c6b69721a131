# %% [markdown]
# # Reducing rational functions modulo exact forms
#
# `D(q) = q' + h' q` is the derivative twisted by `e^h`: the integral of
# `D(q) e^h` along any decaying contour vanishes.  Every rational function
# whose residues against `e^h` vanish reduces to `alpha x + beta` modulo the
# image of `D`, and the reducer returns an explicit certificate `u` with
# `q = D(u) + alpha x + beta`.

# %%
import mpmath

from wavecoh import (CubicWeight, PoleExpansion, Polynomial, apply_D, reduce_to_linear,
                     spectral_datum, wave_basis_coordinates)
from wavecoh.cohomology import check_in_R, verify_certificate

mpmath.mp.prec = 256
w = CubicWeight(-1)

# %% [markdown]
# ## Polynomials
#
# `D(1) = x^2 + a` and `D(x) = x^3 + a x + 1`, so `x^2 ~ -a` and
# `x^3 ~ -a x - 1`.

# %%
for k in range(2, 6):
    cls = reduce_to_linear(Polynomial.monomial(k), w)
    print(f"x^{k} ~ {cls.linear_form[0]} x + {cls.linear_form[1]}")

# %% [markdown]
# ## Poles
#
# A simple pole carries a residue that no exact form can cancel.  A double
# pole is fine when its companion simple-pole term balances it.

# %%
z = 2
lone = PoleExpansion.from_terms(Polynomial(), [(z, 1, 1)])
print("1/(x-2) in R:", check_in_R(lone, w).in_R)

balanced = PoleExpansion.from_terms(Polynomial(), [(z, 2, 1), (z, 1, -(z * z - 1))])
cls = reduce_to_linear(balanced, w)
print("balanced double pole ~", cls.linear_form)
print("certificate verifies:", verify_certificate(balanced, cls, w)[0])

# %% [markdown]
# Anything of the form `D(u)` reduces to zero.

# %%
u = PoleExpansion.from_terms(Polynomial((1, 2, 3)), [(z, 3, 5), (-1, 1, 7)])
print(reduce_to_linear(apply_D(u, w), w).linear_form)

# %% [markdown]
# ## Coordinates in the wave basis
#
# For a wave polynomial `p` with simple roots, the classes of `1/p^2` and
# `f/p^2` (with `f' = p`, `f(0) = 0`) span the functions with poles of order
# at most two at the roots of `p`.  The class of `p(-x)^2` sits on `1/p^2`
# alone, with coefficient `chi'(b)`.

# %%
for index in (0, 1):
    sd = spectral_datum(1, -1, index)
    q = sd.p.reflect() * sd.p.reflect()
    c, d = wave_basis_coordinates(q, sd).wave_coords
    print(f"b = {mpmath.nstr(sd.b, 5)}: c = {mpmath.nstr(c, 15)}, d = {mpmath.nstr(d, 3)}, "
          f"chi'(b) = {mpmath.nstr(sd.chi_prime_at_b, 15)}")

# %%
sd = spectral_datum(7, 1, 3)
c, d = wave_basis_coordinates(sd.p.reflect() * sd.p.reflect(), sd).wave_coords
print(f"n = 7: c - chi'(b) = {mpmath.nstr(c - sd.chi_prime_at_b, 3)}, |d| = {mpmath.nstr(abs(d), 3)}")
