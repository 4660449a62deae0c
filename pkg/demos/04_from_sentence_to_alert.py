"""
From a sentence to an alert
===========================

A user types a request, the frame grammar fills in an alert spec, the
distance word is placed on the partition, and telemetry is run through the
controller.
"""

# %%
from geoling.nlu import analyze, resolve_fuzzy, understand

sentence = "I want to receive an alert when the vehicle gets very close to the warehouse"
for tok in analyze(sentence):
    print(f"{tok.surface:10s} {tok.pos or '-':12s} {tok.sem or '-'}")

# %%
# Every slot is filled, so we get a spec rather than a question.
spec = understand(sentence)
print(spec)

# %%
# Without a place the parser asks for one.
print(understand("I want to receive an alert when the vehicle gets very close"))

# %%
# "very close to" is Near moved half a term toward the origin.
from geoling.linguistic import build_twofold_partition

distance = build_twofold_partition(
    ["InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute"], [0, 200, 400, 700, 1200])
print(resolve_fuzzy(spec, distance).distance_constraint)

# %%
# A short trip toward the arrival point, with battery draining on the way.
from geoling.alerts import TelemetrySample, load_alert1, simulate
from geoling.fcl import Mode, compile_program

trip = [TelemetrySample(t, 100 - t / 30, distance_m=d)
        for t, d in zip(range(0, 600, 60), (1200, 1100, 950, 800, 700, 600, 450, 300, 150, 0))]
program = load_alert1()
for mode in (Mode.UNIFORM_BASELINE, Mode.TWOFOLD):
    events = simulate(compile_program(program, mode), trip, tolerance_value=0.0)
    print(f"{mode.value:17s}", " ".join("A" if e.fired else "." for e in events))
