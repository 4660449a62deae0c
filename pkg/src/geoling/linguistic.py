"""2-tuple linguistic values and twofold triangular partitions.

A 2-tuple ``(s_i, alpha)`` locates a value ``beta = i + alpha`` on a scale of
``g + 1`` ordered terms.  Partitions map that symbolic scale onto a numeric
domain (meters, battery percent, ...).  Two constructions are provided:

* a uniform partition, with equally spaced apexes (a Ruspini partition);
* a twofold partition built from arbitrary increasing apexes, where every
  term has its own left and right half-width.  Neighbouring terms separated
  by a wide gap may then cross below 0.5 while the partition still covers the
  whole domain.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "DomainError",
    "PartitionError",
    "Polarity",
    "TwoTuple",
    "TwofoldTerm",
    "Partition",
    "delta",
    "delta_inv",
    "build_uniform_partition",
    "build_twofold_partition",
    "membership",
    "to_two_tuple",
    "from_two_tuple",
    "apply_modifier",
    "coverage_min",
    "dumps_partition",
    "loads_partition",
]


class DomainError(ValueError):
    """A value lies outside the range an operation accepts."""


class PartitionError(ValueError):
    """Labels or apexes cannot form a valid partition."""


class Polarity(str, enum.Enum):
    TOWARD_LOW = "toward_low"
    TOWARD_HIGH = "toward_high"


@dataclass(frozen=True)
class TwoTuple:
    """Linguistic 2-tuple ``(s_term_index, alpha)`` on a scale ``s_0 .. s_g``."""

    term_index: int
    alpha: float
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise DomainError(f"granularity g must be >= 1, got {self.g}")
        if not 0 <= self.term_index <= self.g:
            raise DomainError(f"term_index {self.term_index} outside [0, {self.g}]")
        if not -0.5 <= self.alpha < 0.5:
            raise DomainError(f"alpha {self.alpha!r} outside [-0.5, 0.5)")
        beta = self.term_index + self.alpha
        if beta < 0 or beta > self.g:
            raise DomainError(f"beta {beta!r} outside [0, {self.g}]")

    @property
    def beta(self) -> float:
        return self.term_index + self.alpha


def delta(beta: float, g: int) -> TwoTuple:
    """Translate ``beta`` in ``[0, g]`` into the equivalent 2-tuple.

    Ties (``beta - floor(beta) == 0.5``) go to the upper term, so alpha always
    lies in ``[-0.5, 0.5)``.  The result satisfies ``delta_inv(t) == beta``
    exactly: ``beta - round(beta)`` is an exact floating point subtraction.
    """
    if not beta >= 0:
        raise DomainError(f"beta {beta!r} is below the lower bound 0")
    if beta > g:
        raise DomainError(f"beta {beta!r} is above the upper bound g={g}")
    index = math.floor(beta)
    # beta - floor(beta) is exact, unlike floor(beta + 0.5) near x.5 - ulp
    if beta - index >= 0.5:
        index += 1
    return TwoTuple(int(index), beta - index, g)


def delta_inv(t: TwoTuple) -> float:
    return t.term_index + t.alpha


@dataclass(frozen=True)
class TwofoldTerm:
    """One triangular term with independent left and right half-widths.

    A shoulder side is flat: membership stays at 1 beyond the apex.
    """

    label: str
    apex: float
    left_width: float
    right_width: float
    left_shoulder: bool = False
    right_shoulder: bool = False

    def __post_init__(self):
        if self.left_width < 0 or self.right_width < 0:
            raise PartitionError(f"term {self.label!r}: negative width")
        if self.left_width == 0 and not self.left_shoulder:
            raise PartitionError(f"term {self.label!r}: zero left width off a shoulder")
        if self.right_width == 0 and not self.right_shoulder:
            raise PartitionError(f"term {self.label!r}: zero right width off a shoulder")

    def membership(self, x: float) -> float:
        if x == self.apex:
            return 1.0
        if x < self.apex:
            if self.left_shoulder:
                return 1.0
            return max(0.0, 1.0 - (self.apex - x) / self.left_width)
        if self.right_shoulder:
            return 1.0
        return max(0.0, 1.0 - (x - self.apex) / self.right_width)


@dataclass(frozen=True)
class Partition:
    """Ordered twofold terms covering ``[domain_lo, domain_hi]``."""

    terms: tuple[TwofoldTerm, ...]
    domain_lo: float
    domain_hi: float
    kind: str

    def __post_init__(self):
        if len(self.terms) < 2:
            raise PartitionError("a partition needs at least 2 terms")
        if self.kind not in ("uniform", "twofold"):
            raise PartitionError(f"unknown partition kind {self.kind!r}")
        apexes = self.apexes
        for left, right in zip(apexes, apexes[1:]):
            if not right > left:
                raise PartitionError(f"apexes must increase: {left!r} then {right!r}")
        if apexes[0] != self.domain_lo or apexes[-1] != self.domain_hi:
            raise PartitionError("first and last apexes must equal the domain bounds")
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise PartitionError(f"duplicate labels in {labels}")
        shoulders = [(t.left_shoulder, t.right_shoulder) for t in self.terms]
        if not shoulders[0][0] or not shoulders[-1][1]:
            raise PartitionError("the end terms must carry the outer shoulders")
        if any(ls for ls, _ in shoulders[1:]) or any(rs for _, rs in shoulders[:-1]):
            raise PartitionError("only the end terms may have shoulders")

    @property
    def g(self) -> int:
        return len(self.terms) - 1

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(t.label for t in self.terms)

    @property
    def apexes(self) -> tuple[float, ...]:
        return tuple(t.apex for t in self.terms)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"label {label!r} not in partition {self.labels}") from None

    def clamp(self, x: float) -> float:
        return min(max(x, self.domain_lo), self.domain_hi)

    def memberships(self, x: float) -> np.ndarray:
        """Membership of ``x`` in every term, in term order."""
        _check_domain(self, x)
        return np.array([t.membership(x) for t in self.terms])

    def membership(self, term_index: int, x: float) -> float:
        return membership(self, term_index, x)

    def to_two_tuple(self, x: float) -> TwoTuple:
        return to_two_tuple(self, x)

    def from_two_tuple(self, t: TwoTuple) -> float:
        return from_two_tuple(self, t)

    def label_of(self, t: TwoTuple) -> str:
        return self.terms[t.term_index].label


def _check_domain(p: Partition, x: float) -> None:
    if not p.domain_lo <= x <= p.domain_hi:
        raise DomainError(f"x={x!r} outside domain [{p.domain_lo!r}, {p.domain_hi!r}]")


def _terms_from_widths(labels, apexes, widths) -> tuple[TwofoldTerm, ...]:
    # widths[k] is the half-width used on both sides of gap k
    last = len(labels) - 1
    terms = []
    for i, (label, apex) in enumerate(zip(labels, apexes)):
        terms.append(TwofoldTerm(
            label=label,
            apex=apex,
            left_width=0.0 if i == 0 else widths[i - 1],
            right_width=0.0 if i == last else widths[i],
            left_shoulder=i == 0,
            right_shoulder=i == last,
        ))
    return tuple(terms)


def build_uniform_partition(labels: Sequence[str], lo: float, hi: float) -> Partition:
    """Equally spaced terms over ``[lo, hi]``; adjacent memberships sum to 1."""
    labels = list(labels)
    if len(labels) < 2:
        raise PartitionError(f"need at least 2 labels, got {len(labels)}")
    if not lo < hi:
        raise PartitionError(f"need lo < hi, got lo={lo!r}, hi={hi!r}")
    g = len(labels) - 1
    apexes = [lo + (hi - lo) * k / g for k in range(g)] + [hi]
    gaps = [b - a for a, b in zip(apexes, apexes[1:])]
    return Partition(_terms_from_widths(labels, apexes, gaps), lo, hi, "uniform")


def build_twofold_partition(labels: Sequence[str], apexes: Sequence[float]) -> Partition:
    """Unbalanced partition from labels placed at increasing apexes.

    Each half-width is ``min(gap to the neighbour, W_ref)`` where
    ``W_ref = (hi - lo) / g`` is the spacing a uniform partition would use.
    Gaps no wider than ``W_ref`` therefore cross at 0.5, wider gaps cross at
    ``1 - gap / (2 W_ref)``.  A gap of ``2 W_ref`` or more would leave a point
    with zero membership and is rejected.
    """
    labels = list(labels)
    apexes = [float(a) for a in apexes]
    if len(labels) != len(apexes):
        raise PartitionError(f"{len(labels)} labels but {len(apexes)} apexes")
    if len(labels) < 2:
        raise PartitionError(f"need at least 2 labels, got {len(labels)}")
    for (la, a), (lb, b) in zip(zip(labels, apexes), zip(labels[1:], apexes[1:])):
        if not b > a:
            raise PartitionError(
                f"apexes must increase: {la}={a!r} is followed by {lb}={b!r}")
    g = len(labels) - 1
    w_ref = (apexes[-1] - apexes[0]) / g
    widths = []
    for i in range(g):
        gap = apexes[i + 1] - apexes[i]
        if gap >= 2 * w_ref:
            raise PartitionError(
                f"gap {labels[i]}->{labels[i + 1]} = {gap!r} is at least "
                f"2*W_ref = {2 * w_ref!r}; coverage would drop to 0")
        widths.append(min(gap, w_ref))
    terms = _terms_from_widths(labels, apexes, widths)
    return Partition(terms, apexes[0], apexes[-1], "twofold")


def membership(p: Partition, term_index: int, x: float) -> float:
    if not 0 <= term_index <= p.g:
        raise IndexError(f"term index {term_index} outside [0, {p.g}]")
    _check_domain(p, x)
    return min(1.0, p.terms[term_index].membership(x))


def to_two_tuple(p: Partition, x: float) -> TwoTuple:
    """Numeric value to 2-tuple by interpolation between the bracketing apexes."""
    _check_domain(p, x)
    apexes = p.apexes
    if x == apexes[-1]:
        return TwoTuple(p.g, 0.0, p.g)
    i = bisect.bisect_right(apexes, x) - 1
    f = (x - apexes[i]) / (apexes[i + 1] - apexes[i])
    if f < 0.5:
        return TwoTuple(i, f, p.g)
    return TwoTuple(i + 1, f - 1.0, p.g)


def from_two_tuple(p: Partition, t: TwoTuple) -> float:
    if t.g != p.g:
        raise DomainError(f"2-tuple granularity {t.g} does not match partition g={p.g}")
    apexes = p.apexes
    i = t.term_index
    if t.alpha == 0:
        return apexes[i]
    if t.alpha > 0:
        return apexes[i] + t.alpha * (apexes[i + 1] - apexes[i])
    return apexes[i] + t.alpha * (apexes[i] - apexes[i - 1])


def apply_modifier(t: TwoTuple, delta_: float, polarity: Polarity | str) -> TwoTuple:
    """Shift a 2-tuple by ``delta_`` along the scale, clamped to ``[0, g]``.

    >>> apply_modifier(TwoTuple(2, 0.0, 4), 0.5, "toward_low")
    TwoTuple(term_index=2, alpha=-0.5, g=4)
    """
    polarity = Polarity(polarity)
    sign = -1.0 if polarity is Polarity.TOWARD_LOW else 1.0
    beta = min(max(t.beta + sign * delta_, 0.0), float(t.g))
    return delta(beta, t.g)


def coverage_min(p: Partition) -> float:
    """Smallest, over the domain, of the largest membership at each point.

    Between two adjacent apexes the maximum membership is lowest where the
    falling side of the left term meets the rising side of the right one, so
    only those crossing points need evaluating.
    """
    worst = 1.0
    for left, right in zip(p.terms, p.terms[1:]):
        gap = right.apex - left.apex
        span = left.right_width + right.left_width
        if span < gap:
            return 0.0
        x = left.apex + gap * left.right_width / span
        worst = min(worst, max(t.membership(x) for t in p.terms))
    return worst


def dumps_partition(p: Partition) -> str:
    lines = [f"#partition v1 lo={p.domain_lo!r} hi={p.domain_hi!r} kind={p.kind}"]
    for t in p.terms:
        lines.append(f"{t.label}\t{t.apex!r}\t{t.left_width!r}\t{t.right_width!r}")
    return "\n".join(lines) + "\n"


def loads_partition(text: str) -> Partition:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#partition v1"):
        raise PartitionError("missing '#partition v1' header")
    fields = dict(item.split("=", 1) for item in lines[0].split()[2:])
    try:
        lo, hi, kind = float(fields["lo"]), float(fields["hi"]), fields["kind"]
    except KeyError as exc:
        raise PartitionError(f"header lacks {exc.args[0]!r}") from None
    records = [ln.split("\t") for ln in lines[1:] if not ln.startswith("#")]
    last = len(records) - 1
    terms = []
    for i, rec in enumerate(records):
        if len(rec) != 4:
            raise PartitionError(f"bad partition record {rec!r}")
        label, apex, lw, rw = rec
        terms.append(TwofoldTerm(label, float(apex), float(lw), float(rw),
                                 left_shoulder=i == 0, right_shoulder=i == last))
    return Partition(tuple(terms), lo, hi, kind)
