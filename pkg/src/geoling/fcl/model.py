"""AST nodes for the supported FCL subset."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "LING" or "REAL"


@dataclass(frozen=True)
class Pairs:
    """``TERM S := pairs (label, apex) ...``: a whole term set at once."""

    name: str
    pairs: tuple[tuple[str, float], ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.pairs)

    @property
    def apexes(self) -> tuple[float, ...]:
        return tuple(apex for _, apex in self.pairs)


@dataclass(frozen=True)
class Triangle:
    label: str
    a: float
    b: float
    c: float

    def membership(self, x):
        """Vectorised triangular membership; ``a == b`` or ``b == c`` gives a vertical side."""
        x = np.asarray(x, dtype=float)
        left = np.ones_like(x) if self.b == self.a else (x - self.a) / (self.b - self.a)
        right = np.ones_like(x) if self.c == self.b else (self.c - x) / (self.c - self.b)
        mu = np.where(x <= self.b, left, right)
        mu = np.where((x < self.a) | (x > self.c), 0.0, mu)
        return np.clip(mu, 0.0, 1.0)


@dataclass(frozen=True)
class Triangles:
    terms: tuple[Triangle, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)


TermSet = Union[Pairs, Triangles]


@dataclass(frozen=True)
class Defuzzify:
    terms: Triangles
    method: str = "COG"


@dataclass(frozen=True)
class Condition:
    var: str
    term: str


@dataclass(frozen=True)
class Rule:
    id: int
    antecedents: tuple[Condition, ...]
    consequent: Condition


@dataclass(frozen=True)
class FclProgram:
    block_name: str
    inputs: tuple[Variable, ...]
    outputs: tuple[Variable, ...]
    fuzzify_blocks: dict[str, TermSet] = field(hash=False)
    defuzzify_blocks: dict[str, Defuzzify] = field(hash=False)
    rules: tuple[Rule, ...]
    ruleblock_name: str = "Rules"

    def term_labels(self, var: str) -> tuple[str, ...]:
        if var in self.fuzzify_blocks:
            return self.fuzzify_blocks[var].labels
        return self.defuzzify_blocks[var].terms.labels
