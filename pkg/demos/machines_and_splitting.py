"""Writing a machine in the text format, running it, and splitting an oracle call out of it."""
# %%
from gtm.dsl import parse, render
from gtm.fixtures import ORACLE, load
from gtm.library import STREAM_FUNCTIONS
from gtm.machine import enumerate_outcomes, run
from gtm.names import Stream
from gtm.weihrauch import check_single_use, split_G, split_H, verify_reduction

src = """
machine flip;
tapes 0:word, 1:word;
inputs 1;
labels l0 final lf;
l0: 0 := neg(1) -> lf;
"""
m = parse(src)
print(render(m))
print(run(m, ("0110",)))

# %%
# Nondeterminism: the coin machine has two maximal runs.
print(enumerate_outcomes(load("coin"), ()))

# %%
# A stream machine that calls the oracle once can be cut into a pre- and post-processor.
m = load("w_post")
print("single use:", check_single_use(m, ORACLE).ok)
print(render(split_H(m, ORACLE)))
print(render(split_G(m, ORACLE)))

p = Stream.periodic("0", "1")
print("direct:", run(m, (p,)).output.prefix(16))
vs = verify_reduction(m, ORACLE, STREAM_FUNCTIONS["neg"], [p, Stream.periodic("", "01")], 64)
print([v.status for v in vs])
