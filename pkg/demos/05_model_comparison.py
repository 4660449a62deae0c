"""
Where the two scales disagree
=============================

Sweep the whole input grid through both controllers and list the points
where one alerts and the other does not.
"""

# %%
import time

from geoling.alerts import GridSpec, compare_models, load_alert1

start = time.perf_counter()
report = compare_models(load_alert1(), GridSpec(distance_step=50, battery_step=10,
                                                tolerance_step=60))
print(f"{len(report.points)} points in {time.perf_counter() - start:.2f} s")

# %%
print(report.summary().splitlines()[2])
for p in report.divergences[:10]:
    print(f"b={p.battery:5.0f} d={p.distance:6.0f} t={p.tolerance:5.0f}  "
          f"uniform={p.uniform_trigger:.3f} twofold={p.twofold_trigger:.3f}")

# %%
# Divergences by distance: they cluster where the uneven spacing moves the
# Far term furthest from its evenly spaced position.
from collections import Counter

print(sorted(Counter(p.distance for p in report.divergences).items()))
