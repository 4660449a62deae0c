"""Rule-based understanding of alert requests.

A sentence is segmented against a closed domain lexicon (longest phrase
first), each token gets a part of speech and a semantic tag, and the tags
fill the frame ``ALERT = TYPE, MOBILE, PLACE, NOTIFICATION``.  A sentence
that leaves a slot empty yields a :class:`ClarificationRequest` naming the
missing slots instead of a partial spec.

Fuzzy distance words ("close to", "far from") bind to a partition label;
adverbs in front of them ("very", "slightly") shift that label's 2-tuple.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .linguistic import Partition, Polarity, TwoTuple, apply_modifier

POS_TAGS = frozenset({"noun", "verb", "adjective", "adverb", "pronoun",
                      "determiner", "preposition", "other"})
SEM_TAGS = frozenset({"ALERT", "ZONE_ENTRY", "ZONE_EXIT", "CORRIDOR", "FUZZY_MODIF_+",
                      "FUZZY_MODIF_-", "DISTANCE", "MOBILE", "TOWN", "ADDRESS", "POI",
                      "ZOI", "NOTIFICATION", "NONE"})
TYPE_TAGS = ("ZONE_ENTRY", "ZONE_EXIT", "CORRIDOR")
PLACE_TAGS = ("TOWN", "ADDRESS", "POI", "ZOI")
NOTIFY_TAGS = ("ALERT", "NOTIFICATION")
MODIFIER_TAGS = ("FUZZY_MODIF_+", "FUZZY_MODIF_-")
SLOTS = ("TYPE", "MOBILE", "PLACE", "NOTIFICATION")

_WORD_RE = re.compile(r"[\w'-]+")


class LexiconError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class LexiconEntry:
    phrase: str
    pos: str
    sem: str
    term_binding: str | None = None
    polarity: Polarity | None = None
    modifier_delta: float | None = None

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(self.phrase.split())


class Lexicon:
    """Immutable phrase table; entries keep their file order for tie-breaks."""

    def __init__(self, entries: Iterable[LexiconEntry]):
        self.entries = tuple(entries)
        index: dict[tuple[str, ...], list[LexiconEntry]] = {}
        seen = set()
        for e in self.entries:
            if e.pos not in POS_TAGS:
                raise LexiconError(f"{e.phrase!r}: unknown part of speech {e.pos!r}")
            if e.sem not in SEM_TAGS:
                raise LexiconError(f"{e.phrase!r}: unknown semantic tag {e.sem!r}")
            if (e.phrase, e.pos) in seen:
                raise LexiconError(f"duplicate entry ({e.phrase!r}, {e.pos})")
            seen.add((e.phrase, e.pos))
            if e.sem == "DISTANCE" and (e.term_binding is None or e.polarity is None):
                raise LexiconError(f"DISTANCE entry {e.phrase!r} needs a term binding and polarity")
            if e.sem in MODIFIER_TAGS and e.modifier_delta is None:
                raise LexiconError(f"modifier entry {e.phrase!r} needs a delta")
            index.setdefault(e.words, []).append(e)
        self._index = index
        self.max_words = max((len(k) for k in index), default=1)

    def lookup(self, words: Sequence[str]) -> tuple[LexiconEntry, ...]:
        return tuple(self._index.get(tuple(words), ()))

    def __len__(self):
        return len(self.entries)


def parse_lexicon(lines: Iterable[str]) -> Lexicon:
    """Read ``phrase<TAB>pos<TAB>sem[<TAB>term_binding<TAB>polarity<TAB>delta]`` lines."""
    entries = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) < 3 or len(cols) > 6:
            raise LexiconError(f"line {lineno}: expected 3 to 6 tab-separated columns")
        cols += [""] * (6 - len(cols))
        phrase, pos, sem, binding, polarity, delta = (c.strip() for c in cols)
        try:
            entries.append(LexiconEntry(
                " ".join(phrase.casefold().split()), pos, sem,
                binding or None,
                Polarity(polarity) if polarity else None,
                float(delta) if delta else None,
            ))
        except ValueError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
    return Lexicon(entries)


def load_lexicon(path: str | Path) -> Lexicon:
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh)


@functools.lru_cache(maxsize=None)
def stock_lexicon() -> Lexicon:
    text = resources.files("geoling.data").joinpath("lexicon.tsv").read_text(encoding="utf-8")
    return parse_lexicon(text.splitlines())


@dataclass(frozen=True)
class Token:
    surface: str  # case-folded
    pos: str
    sem: str | None
    raw: str = ""  # original spelling, used for place names
    entry: LexiconEntry | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.surface:
            raise ValueError("empty token")


def tokenize(text: str, lex: Lexicon | None = None) -> list[Token]:
    """Split ``text`` into tokens, matching lexicon phrases longest first.

    Multiword phrases ("close to") become a single token.  Words the lexicon
    does not know become ``other`` tokens with no semantic tag.
    """
    lex = lex or stock_lexicon()
    raw_words = _WORD_RE.findall(text)
    if not raw_words:
        raise ValueError("empty input")
    words = [w.casefold() for w in raw_words]
    tokens, i = [], 0
    while i < len(words):
        for n in range(min(lex.max_words, len(words) - i), 0, -1):
            entries = lex.lookup(words[i:i + n])
            if entries:
                e = entries[0]
                tokens.append(Token(" ".join(words[i:i + n]), e.pos, e.sem,
                                    " ".join(raw_words[i:i + n]), e))
                i += n
                break
        else:
            tokens.append(Token(words[i], "other", None, raw_words[i]))
            i += 1
    return tokens


def tag(tokens: Sequence[Token], lex: Lexicon | None = None) -> list[Token]:
    """Resolve each token's reading from the lexicon.

    Among a phrase's entries, readings with a semantic tag beat ``NONE``;
    remaining ties go to the entry listed first.  Tags are chosen per token,
    which is what minimising untagged tokens over the sentence amounts to.
    """
    lex = lex or stock_lexicon()
    out = []
    for tok in tokens:
        entries = lex.lookup(tok.surface.split())
        if not entries:
            out.append(replace(tok, pos="other", sem=None, entry=None))
            continue
        best = min(entries, key=lambda e: e.sem == "NONE")
        out.append(replace(tok, pos=best.pos, sem=best.sem, entry=best))
    return out


def analyze(text: str, lex: Lexicon | None = None) -> list[Token]:
    lex = lex or stock_lexicon()
    return tag(tokenize(text, lex), lex)


@dataclass(frozen=True)
class DistanceConstraint:
    """Fuzzy distance wording and, once resolved, its 2-tuple on a partition."""

    term: str
    polarity: Polarity
    modifiers: tuple[float, ...] = ()  # signed: weakening adverbs are negative
    two_tuple: TwoTuple | None = None
    value: float | None = None


@dataclass(frozen=True)
class AlertSpec:
    type: str
    mobile: str
    place: tuple[str, str]  # (kind, name)
    notification: str = "ALERT"
    distance_constraint: DistanceConstraint | None = None


@dataclass(frozen=True)
class ClarificationRequest:
    missing: tuple[str, ...]


def _first(tokens, tags):
    return next((i for i, t in enumerate(tokens) if t.sem in tags), None)


def parse_frame(tokens: Sequence[Token]) -> AlertSpec | ClarificationRequest:
    type_i = _first(tokens, TYPE_TAGS)
    mobile_i = _first(tokens, ("MOBILE",))
    place_i = _first(tokens, PLACE_TAGS)
    notify_i = _first(tokens, NOTIFY_TAGS)
    found = dict(zip(SLOTS, (type_i, mobile_i, place_i, notify_i)))
    missing = tuple(slot for slot in SLOTS if found[slot] is None)
    if missing:
        return ClarificationRequest(missing)

    mobile = tokens[mobile_i].raw or tokens[mobile_i].surface
    if mobile_i > 0 and tokens[mobile_i - 1].pos == "determiner":
        det = tokens[mobile_i - 1]
        mobile = f"{det.surface} {mobile}"
    place = tokens[place_i]

    constraint = None
    dist_i = _first(tokens, ("DISTANCE",))
    if dist_i is not None:
        entry = tokens[dist_i].entry
        mods = []
        j = dist_i - 1
        while j >= 0 and tokens[j].sem in MODIFIER_TAGS:
            m = tokens[j]
            sign = 1.0 if m.sem == "FUZZY_MODIF_+" else -1.0
            mods.append(sign * m.entry.modifier_delta)
            j -= 1
        constraint = DistanceConstraint(entry.term_binding, entry.polarity, tuple(reversed(mods)))

    return AlertSpec(
        type=tokens[type_i].sem,
        mobile=mobile,
        place=(place.sem, place.raw or place.surface),
        notification="ALERT",
        distance_constraint=constraint,
    )


def understand(text: str, lex: Lexicon | None = None) -> AlertSpec | ClarificationRequest:
    return parse_frame(analyze(text, lex))


def resolve_fuzzy(spec: AlertSpec, distance_partition: Partition) -> AlertSpec:
    """Place the spec's distance wording on ``distance_partition``.

    Modifiers apply one at a time, innermost (closest to the distance word)
    first, each clamped to the scale.
    """
    dc = spec.distance_constraint
    if dc is None:
        return spec
    if dc.term not in distance_partition.labels:
        raise ConfigurationError(
            f"distance term {dc.term!r} is not a label of the partition "
            f"{list(distance_partition.labels)}")
    t = TwoTuple(distance_partition.index(dc.term), 0.0, distance_partition.g)
    for d in reversed(dc.modifiers):
        t = apply_modifier(t, d, dc.polarity)
    resolved = replace(dc, two_tuple=t, value=distance_partition.from_two_tuple(t))
    return replace(spec, distance_constraint=resolved)


# Serialized spec: one "key: value" line per field.
#   type, mobile, place_kind, place_name, notification      always present
#   distance_term, distance_polarity, distance_modifiers     when a distance word was used
#   distance_index, distance_alpha, distance_g, distance_value   once resolved
_SPEC_KEYS = ("type", "mobile", "place_kind", "place_name", "notification")


def dumps_spec(spec: AlertSpec) -> str:
    lines = [
        f"type: {spec.type}",
        f"mobile: {spec.mobile}",
        f"place_kind: {spec.place[0]}",
        f"place_name: {spec.place[1]}",
        f"notification: {spec.notification}",
    ]
    dc = spec.distance_constraint
    if dc is not None:
        lines += [
            f"distance_term: {dc.term}",
            f"distance_polarity: {dc.polarity.value}",
            f"distance_modifiers: {','.join(repr(m) for m in dc.modifiers)}",
        ]
        if dc.two_tuple is not None:
            lines += [
                f"distance_index: {dc.two_tuple.term_index}",
                f"distance_alpha: {dc.two_tuple.alpha!r}",
                f"distance_g: {dc.two_tuple.g}",
                f"distance_value: {dc.value!r}",
            ]
    return "\n".join(lines) + "\n"


def loads_spec(text: str) -> AlertSpec:
    fields = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"expected 'key: value', got {line!r}")
        fields[key.strip()] = value.strip()
    missing = [k for k in _SPEC_KEYS if k not in fields]
    if missing:
        raise ValueError(f"spec document lacks {missing}")
    dc = None
    if "distance_term" in fields:
        mods = tuple(float(m) for m in fields["distance_modifiers"].split(",") if m)
        t = value = None
        if "distance_index" in fields:
            t = TwoTuple(int(fields["distance_index"]), float(fields["distance_alpha"]),
                         int(fields["distance_g"]))
            value = float(fields["distance_value"])
        dc = DistanceConstraint(fields["distance_term"], Polarity(fields["distance_polarity"]),
                                mods, t, value)
    return AlertSpec(fields["type"], fields["mobile"],
                     (fields["place_kind"], fields["place_name"]),
                     fields["notification"], dc)


def dumps_clarification(req: ClarificationRequest) -> str:
    return "missing: " + ", ".join(req.missing) + "\n"
