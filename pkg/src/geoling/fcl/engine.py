"""Compile FCL programs into controllers and run Mamdani inference.

AND is min, implication clips the consequent at the rule activation, and
clipped consequents accumulate by pointwise max.  The crisp output is the
centre of gravity of the accumulated set, sampled on an even grid.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..linguistic import Partition, build_twofold_partition, build_uniform_partition
from .model import FclProgram, Pairs, Triangles

logger = logging.getLogger(__name__)

DEFAULT_COG_SAMPLES = 1001
MIN_AREA = 1e-12


class Mode(str, enum.Enum):
    TWOFOLD = "twofold"
    UNIFORM_BASELINE = "uniform_baseline"


class InferenceError(ValueError):
    pass


@dataclass(frozen=True)
class InputVariable:
    """An input term set: a 2-tuple partition (``pairs``) or explicit triangles."""

    name: str
    labels: tuple[str, ...]
    domain: tuple[float, float]
    partition: Partition | None = None
    triangles: Triangles | None = None

    def memberships(self, x: float) -> np.ndarray:
        if self.partition is not None:
            return self.partition.memberships(x)
        return np.array([float(t.membership(x)) for t in self.triangles.terms])


@dataclass(frozen=True)
class OutputVariable:
    name: str
    labels: tuple[str, ...]
    domain: tuple[float, float]
    xs: np.ndarray = field(repr=False)
    shapes: np.ndarray = field(repr=False)  # (n_terms, n_samples)


@dataclass(frozen=True)
class CompiledRule:
    id: int
    antecedents: tuple[tuple[str, int], ...]
    output: str
    term: int


@dataclass(frozen=True)
class CompiledController:
    inputs: dict[str, InputVariable]
    outputs: dict[str, OutputVariable]
    rules: tuple[CompiledRule, ...]
    mode: Mode

    def partition(self, var: str) -> Partition:
        p = self.inputs[var].partition
        if p is None:
            raise KeyError(f"input {var!r} is not a pairs term set")
        return p


@dataclass
class InferenceResult:
    outputs: dict[str, float]
    rule_activations: dict[int, float]
    no_rule_fired: set[str] = field(default_factory=set)
    warnings: list[str] = field(default_factory=list)


def _input_variable(name: str, terms, mode: Mode) -> InputVariable:
    if isinstance(terms, Pairs):
        if mode is Mode.TWOFOLD:
            p = build_twofold_partition(terms.labels, terms.apexes)
        else:
            p = build_uniform_partition(terms.labels, terms.apexes[0], terms.apexes[-1])
        return InputVariable(name, p.labels, (p.domain_lo, p.domain_hi), partition=p)
    lo = min(t.a for t in terms.terms)
    hi = max(t.c for t in terms.terms)
    return InputVariable(name, terms.labels, (lo, hi), triangles=terms)


def compile_program(
    program: FclProgram,
    mode: Mode | str = Mode.TWOFOLD,
    cog_samples: int = DEFAULT_COG_SAMPLES,
) -> CompiledController:
    """Build membership functions and index the rules of ``program``.

    In ``uniform_baseline`` mode every ``pairs`` term set keeps its labels and
    extreme apexes but is respaced evenly; ``trian`` terms are unaffected.
    """
    mode = Mode(mode)
    if cog_samples < 2:
        raise ValueError(f"cog_samples must be >= 2, got {cog_samples}")
    inputs = {var: _input_variable(var, terms, mode)
              for var, terms in program.fuzzify_blocks.items()}
    outputs = {}
    for var, block in program.defuzzify_blocks.items():
        lo = min(t.a for t in block.terms.terms)
        hi = max(t.c for t in block.terms.terms)
        xs = np.linspace(lo, hi, cog_samples)
        shapes = np.vstack([t.membership(xs) for t in block.terms.terms])
        outputs[var] = OutputVariable(var, block.terms.labels, (lo, hi), xs, shapes)
    rules = []
    for r in program.rules:
        ants = tuple((c.var, inputs[c.var].labels.index(c.term)) for c in r.antecedents)
        out = r.consequent
        rules.append(CompiledRule(r.id, ants, out.var, outputs[out.var].labels.index(out.term)))
    return CompiledController(inputs, outputs, tuple(rules), mode)


def centroid(xs: np.ndarray, mu: np.ndarray) -> float | None:
    """Discrete centre of gravity, or ``None`` when the area is negligible."""
    dx = (xs[-1] - xs[0]) / (len(xs) - 1)
    area = float(mu.sum()) * dx
    if area < MIN_AREA:
        return None
    return float((xs * mu).sum() / mu.sum())


def defuzzify(out: OutputVariable, term_activations: np.ndarray) -> float | None:
    clipped = np.minimum(out.shapes, term_activations[:, None])
    return centroid(out.xs, clipped.max(axis=0))


def infer(c: CompiledController, inputs: Mapping[str, float]) -> InferenceResult:
    """Evaluate the controller on crisp ``inputs``.

    Values outside an input's domain are clamped and a warning is recorded.
    An output with no firing rule is set to its domain midpoint and listed in
    ``no_rule_fired``.
    """
    unknown = set(inputs) - c.inputs.keys()
    if unknown:
        raise InferenceError(f"unknown input variable(s): {sorted(unknown)}")
    missing = c.inputs.keys() - set(inputs)
    if missing:
        raise InferenceError(f"missing input variable(s): {sorted(missing)}")

    warnings = []
    degrees = {}
    for name, var in c.inputs.items():
        x = float(inputs[name])
        lo, hi = var.domain
        if not lo <= x <= hi:
            clamped = min(max(x, lo), hi)
            msg = f"{name}={x!r} outside [{lo!r}, {hi!r}], clamped to {clamped!r}"
            logger.warning(msg)
            warnings.append(msg)
            x = clamped
        degrees[name] = var.memberships(x)

    activations = {}
    per_term = {name: np.zeros(len(o.labels)) for name, o in c.outputs.items()}
    for rule in c.rules:
        a = min(float(degrees[var][k]) for var, k in rule.antecedents)
        activations[rule.id] = a
        acc = per_term[rule.output]
        # max of clipped copies of one shape == one copy clipped at the max
        acc[rule.term] = max(acc[rule.term], a)

    result = InferenceResult({}, activations, warnings=warnings)
    for name, out in c.outputs.items():
        value = defuzzify(out, per_term[name])
        if value is None:
            value = 0.5 * (out.domain[0] + out.domain[1])
            result.no_rule_fired.add(name)
        result.outputs[name] = value
    return result
