"""Summing a power series to a requested accuracy."""
# %%
from fractions import Fraction as F

from gtm.analysis import PowerSeriesInput, QComplex, geometric, series_partial, series_sum
from gtm.represent import rho_decode

# Geometric series sum_j z^j, taken with r = 1/2 and Cauchy constant 1, at z = 1/4.
inp = PowerSeriesInput(geometric, F(1, 2), 1, F(1, 4))
rep = series_partial(inp, 3, report=True)
print("ratio bound", rep.ratio, "q", rep.q, "terms", rep.terms)
print("partial sum", rep.value, "error", float(abs(rep.value.re - F(4, 3))))

# %%
for k in (5, 10, 20, 40):
    b = series_partial(inp, k)
    print(k, float(abs(b.re - F(4, 3))), "<=", 2.0 ** -k)

# %%
# The full sum is a real, so it comes back as a name we can decode at any width.
re, im = series_sum(inp)
print("sum to 2^-40:", [float(v) for v in rho_decode(re, 40)])

# Complex arguments work the same way.
z = QComplex(F(0), F(1, 4))
re, im = series_sum(PowerSeriesInput(geometric, F(1, 2), 1, z))
print("Re", [float(v) for v in rho_decode(re, 20)], "Im", [float(v) for v in rho_decode(im, 20)])
