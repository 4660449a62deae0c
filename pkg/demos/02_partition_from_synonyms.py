"""
Partitions from synonym bags
============================

Where do the apexes come from?  Each label gets a bag of synonyms; labels
that share many synonyms mean nearly the same thing and end up close on
the axis.
"""

# %%
from importlib import resources

from geoling.partition_builder import (
    build_partition_from_bags,
    order_terms,
    place_apexes,
    read_bags,
    resemblance_matrix,
)

bags = read_bags(resources.files("geoling.data").joinpath("distance_bags.txt"))
for b in bags:
    print(f"{b.label:12s} {sorted(b.synonyms)}")

# %%
# Resemblance is the Jaccard overlap of two bags.
m = resemblance_matrix(bags)
print("       " + " ".join(f"{l[:6]:>6s}" for l in m.labels))
for label, row in zip(m.labels, m.r):
    print(f"{label[:6]:>6s} " + " ".join(f"{v:6.2f}" for v in row))

# %%
# The order maximises the resemblance of neighbours, with both ends pinned.
order = order_terms(m, "InTheCenter", "OutOfRoute")
print(order)

# %%
# Gaps are proportional to 1 - resemblance, stretched over the domain.
print(place_apexes(m, order, 0.0, 1200.0))

# %%
# All of the above in one call, ending with the twofold partition.
p = build_partition_from_bags(bags, 0.0, 1200.0, "InTheCenter", "OutOfRoute")
print(p.labels, p.apexes)
