"""Real numbers as interval streams, and adding them with a machine."""
# %%
from fractions import Fraction as F

from gtm import names
from gtm.fixtures import load
from gtm.library import BUILTINS
from gtm.machine import run
from gtm.realize import RealizerTable, check_machine_realization_empirical, lower_machine
from gtm.represent import rho, rho_decode, rho_encode

# A real is named by a stream of nested rational intervals.
x = rho_encode(F(1, 3))
print("first symbols of a name of 1/3:", x.prefix(60))
print("first interval:", next(names.read_intervals(x)))

# %%
# Decoding to a given precision reads records until one is narrow enough.
for d in (4, 16, 40):
    lo, hi = rho_decode(x, d)
    print(f"width 2^-{d}: [{lo}; {hi}]")

# %%
# An abstract machine over reals: one assignment, "plus".
adder = load("real_adder")
print(adder.stm)

# Swap the abstract function for a stream realizer and check the lowered machine.
table = RealizerTable({"plus": BUILTINS["add.rho"]}, (rho, rho, rho))
low = lower_machine(adder, table)
pairs = [(F(1, 3), F(1, 6)), (F(-2), F(5, 7)), (F(0), F(0))]
samples = [((rho_encode(a), rho_encode(b)), (a, b)) for a, b in pairs]
for (a, b), v in zip(pairs, check_machine_realization_empirical(low, adder, (rho, rho, rho), samples, 30)):
    print(a, "+", b, "->", v.status)

# %%
out = run(low, (rho_encode(F(1, 3)), rho_encode(F(1, 6)))).output
print("1/3 + 1/6 to 2^-30:", rho_decode(out, 30))
