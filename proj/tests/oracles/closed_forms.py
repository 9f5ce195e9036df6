#!/usr/bin/env python3
"""Reference values frozen into the C++ tests, each checked two ways."""
import mpmath as mp

mp.mp.dps = 40

# Exponential-weight Gaussian integral: int e^{k y} N(y; y0, sigma^2) dy.
k, y0, sigma = mp.mpf("0.7"), mp.mpf("0.3"), mp.mpf("0.5")
gauss = lambda y: mp.exp(-(y - y0) ** 2 / (2 * sigma**2)) / (sigma * mp.sqrt(2 * mp.pi))
closed = mp.exp(k * y0 + k**2 * sigma**2 / 2)
quad = mp.quad(lambda y: mp.exp(k * y) * gauss(y), [-10, 0.3, 10])
print("gaussian_weight closed", mp.nstr(closed, 20), "quad", mp.nstr(quad, 20))

# First moment with the same weight, referenced at x_r.
x_r = mp.mpf("0.2")
closed_m = mp.exp(-k * x_r) * closed * (y0 + k * sigma**2)
quad_m = mp.exp(-k * x_r) * mp.quad(lambda y: mp.exp(k * y) * y * gauss(y), [-10, 0.3, 10])
print("weighted_moment closed", mp.nstr(closed_m, 20), "quad", mp.nstr(quad_m, 20))

# Unit conversions.
mpc_km = mp.mpf("3.0857e19")
year = mp.mpf(31557600)
G = mp.mpf("6.67430e-11")
for h0 in (70, 100):
    ps = h0 / mpc_km
    print("h0", h0, "per_s", mp.nstr(ps, 12), "per_yr", mp.nstr(ps * year, 12),
          "rho_c", mp.nstr(3 * ps**2 / (8 * mp.pi * G), 12))

# Imaginary energy term for A = 2.3e-18 /s, in eV.
hbar = mp.mpf("1.054571817e-34")
eV = mp.mpf("1.602176634e-19")
print("hbar*A [eV]", mp.nstr(hbar * mp.mpf("2.3e-18") / eV, 12))

# Redshift over 100 Myr at H0 = 2.268e-18 /s.
x = mp.mpf("2.268e-18") * 100e6 * year
print("z exact", mp.nstr(mp.expm1(x), 12), "linear", mp.nstr(x, 12), "rel", mp.nstr((mp.expm1(x) - x) / mp.expm1(x), 6))
