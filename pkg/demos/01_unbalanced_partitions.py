"""
Unbalanced distance terms
=========================

Five distance words are not evenly spread: "very close to" and "near" sit
much closer together than "far" and "out of route".  Here we build the
twofold partition for them, compare it with the evenly spaced one, and
move a few words around with 2-tuples.
"""

# %%
# The apexes follow the word meanings rather than a uniform grid.
from geoling.linguistic import (
    build_twofold_partition,
    build_uniform_partition,
    coverage_min,
)

labels = ["InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute"]
twofold = build_twofold_partition(labels, [0, 200, 400, 700, 1200])
uniform = build_uniform_partition(labels, 0, 1200)

for t in twofold.terms:
    print(f"{t.label:12s} apex={t.apex:6.0f}  left={t.left_width:5.0f}  right={t.right_width:5.0f}")

# %%
# Each half-width is capped at span/g = 300 m, so the long Far -> OutOfRoute
# gap is not fully covered by either side.  The two terms meet at 950 m with
# degree 1/6, which is also the lowest coverage anywhere on the axis.
print("Far at 950 m:       ", twofold.membership(twofold.index("Far"), 950.0))
print("OutOfRoute at 950 m:", twofold.membership(twofold.index("OutOfRoute"), 950.0))
print("coverage, twofold:  ", coverage_min(twofold))
print("coverage, uniform:  ", coverage_min(uniform))

# %%
# The same reading, 700 m, lands on different terms.
for name, p in (("uniform", uniform), ("twofold", twofold)):
    t = p.to_two_tuple(700.0)
    print(f"{name:8s} 700 m -> ({p.labels[t.term_index]}, {t.alpha:+.3f})")

# %%
# A 2-tuple shifts a word by a fraction of a term.  "Very close" is Near
# pushed half a term toward the origin: 300 m on this scale.
from geoling.linguistic import TwoTuple, apply_modifier

near = TwoTuple(twofold.index("Near"), 0.0, twofold.g)
very_near = apply_modifier(near, 0.5, "toward_low")
print(very_near, "->", twofold.from_two_tuple(very_near), "m")
