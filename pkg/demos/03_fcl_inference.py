"""
The Alert1 controller
=====================

The geofence alert is a Mamdani controller written in a small FCL subset.
Battery, distance to the arrival point and time tolerance go in; a crisp
trigger in [0, 1] comes out, and anything at or above 0.5 raises the alert.
"""

# %%
from geoling.alerts import load_alert1
from geoling.fcl import Mode, compile_program, infer, pretty_print

program = load_alert1()
print(pretty_print(program)[:900], "...")

# %%
# The same script compiles two ways: pairs blocks become either the twofold
# partition or evenly spaced triangles over the same range.
twofold = compile_program(program, Mode.TWOFOLD)
uniform = compile_program(program, Mode.UNIFORM_BASELINE)

# %%
# A full battery, no slack, 700 m out.  Only Far is active on the twofold
# scale, so Rule 28 fires alone and the centroid of "Alert" is 2/3.
reading = {"Battery": 100.0, "Distance": 700.0, "TimeTolerance": 0.0}
for name, c in (("twofold", twofold), ("uniform", uniform)):
    r = infer(c, reading)
    top = sorted(r.rule_activations.items(), key=lambda kv: -kv[1])[:2]
    print(f"{name:8s} trigger={r.outputs['AlertTrigger']:.3f}  strongest rules={top}")

# %%
# Out-of-range readings are clamped and reported.
r = infer(twofold, {"Battery": 100.0, "Distance": 5000.0, "TimeTolerance": 0.0})
print(r.outputs, r.warnings)
