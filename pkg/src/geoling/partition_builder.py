"""Unbalanced partitions from synonym bags.

Labels that share many synonyms are considered close on their axis.  The
pipeline is: Jaccard resemblance between every pair of bags, an anchored
ordering that maximises resemblance between neighbours, apex placement
proportional to ``1 - resemblance``, then a twofold partition.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .linguistic import Partition, build_twofold_partition

__all__ = [
    "BagError",
    "SynonymBag",
    "ResemblanceMatrix",
    "MAX_ORDER_LABELS",
    "resemblance_matrix",
    "order_terms",
    "place_apexes",
    "build_partition_from_bags",
    "parse_bags",
    "read_bags",
]

MAX_ORDER_LABELS = 10


class BagError(ValueError):
    pass


def _normalize(word: str) -> str:
    return word.strip().casefold()


@dataclass(frozen=True)
class SynonymBag:
    label: str
    synonyms: frozenset[str]

    def __post_init__(self):
        object.__setattr__(
            self, "synonyms", frozenset(_normalize(s) for s in self.synonyms if s.strip()))
        if not self.synonyms:
            raise BagError(f"synonym bag {self.label!r} is empty")


@dataclass(frozen=True)
class ResemblanceMatrix:
    labels: tuple[str, ...]
    r: np.ndarray

    def rate(self, a: str, b: str) -> float:
        return float(self.r[self.labels.index(a), self.labels.index(b)])


def resemblance_matrix(bags: Sequence[SynonymBag]) -> ResemblanceMatrix:
    """Pairwise Jaccard index ``|A & B| / |A | B|`` of the synonym sets."""
    if len(bags) < 2:
        raise BagError(f"need at least 2 bags, got {len(bags)}")
    labels = tuple(b.label for b in bags)
    if len(set(labels)) != len(labels):
        dup = sorted({l for l in labels if labels.count(l) > 1})
        raise BagError(f"duplicate bag labels: {dup}")
    n = len(bags)
    r = np.eye(n)
    for i, j in itertools.combinations(range(n), 2):
        a, b = bags[i].synonyms, bags[j].synonyms
        r[i, j] = r[j, i] = len(a & b) / len(a | b)
    r.setflags(write=False)
    return ResemblanceMatrix(labels, r)


def order_terms(m: ResemblanceMatrix, low_anchor: str, high_anchor: str) -> list[str]:
    """Order labels from ``low_anchor`` to ``high_anchor``.

    Exhaustive search over the free middle labels for the sequence with the
    largest summed resemblance between neighbours.  Candidates are visited in
    lexicographic order and only a strictly better score replaces the best,
    so ties resolve to the lexicographically smallest sequence.
    """
    for anchor in (low_anchor, high_anchor):
        if anchor not in m.labels:
            raise BagError(f"anchor {anchor!r} not among labels {list(m.labels)}")
    if low_anchor == high_anchor:
        raise BagError("low and high anchors must differ")
    if len(m.labels) > MAX_ORDER_LABELS:
        raise BagError(
            f"{len(m.labels)} labels exceeds the exhaustive-search cap of {MAX_ORDER_LABELS}")
    pos = {label: k for k, label in enumerate(m.labels)}
    middle = sorted(l for l in m.labels if l not in (low_anchor, high_anchor))
    best, best_score = None, -math.inf
    for perm in itertools.permutations(middle):
        seq = (low_anchor, *perm, high_anchor)
        score = math.fsum(m.r[pos[a], pos[b]] for a, b in zip(seq, seq[1:]))
        if score > best_score:
            best, best_score = seq, score
    return list(best)


def place_apexes(m: ResemblanceMatrix, order: Sequence[str], lo: float, hi: float) -> list[float]:
    """Apexes spaced in proportion to ``1 - r`` between consecutive labels."""
    if sorted(order) != sorted(m.labels):
        raise BagError(f"order {list(order)} is not a permutation of {list(m.labels)}")
    if not lo < hi:
        raise BagError(f"need lo < hi, got lo={lo!r}, hi={hi!r}")
    distances = []
    for a, b in zip(order, order[1:]):
        d = 1.0 - m.rate(a, b)
        if d <= 0:
            raise BagError(f"labels {a!r} and {b!r} are identical (r = 1): degenerate spacing")
        distances.append(d)
    cum = np.cumsum(distances)
    total = cum[-1]
    apexes = [lo] + [lo + (hi - lo) * c / total for c in cum[:-1]] + [hi]
    return [float(a) for a in apexes]


def build_partition_from_bags(
    bags: Sequence[SynonymBag],
    lo: float,
    hi: float,
    low_anchor: str,
    high_anchor: str,
) -> Partition:
    # canonical bag order makes the result independent of input order
    bags = sorted(bags, key=lambda b: b.label)
    m = resemblance_matrix(bags)
    order = order_terms(m, low_anchor, high_anchor)
    return build_twofold_partition(order, place_apexes(m, order, lo, hi))


def parse_bags(lines: Iterable[str]) -> list[SynonymBag]:
    """Parse ``label: syn1, syn2, ...`` records; ``#`` starts a comment line."""
    bags = []
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, sep, rest = line.partition(":")
        if not sep or not label.strip():
            raise BagError(f"line {lineno}: expected 'label: syn1, syn2, ...'")
        bags.append(SynonymBag(label.strip(), frozenset(rest.split(","))))
    return bags


def read_bags(path: str | Path) -> list[SynonymBag]:
    with open(path, encoding="utf-8") as fh:
        return parse_bags(fh)
