"""Corpus ingestion, rhyme-scheme derivation, year buckets and stats.

Corpus files are UTF-8 JSON lines, one poem per line::

    {"year": 1893, "strophes": [[{"text": "...", "rhyme": 1, "meter": "J"}, ...], ...]}

``year`` may be null; ``rhyme`` is the corpus rhyme-group id (null for
non-rhyming verses); ``meter`` is a one-letter meter label.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

BUCKET_YEARS = 20

# Dataset-frequency order of meter labels; also the tie-break order used
# throughout (header modal meter, meter classification).
METER_ORDER = "JTDAXYHPN"


class MeterLabel(str, Enum):
    IAMB = "J"
    TROCHEE = "T"
    DACTYL = "D"
    AMPHIBRACH = "A"
    DACTYLOTROCHEE = "X"
    DACTYLOTROCHEE_ANACRUSIS = "Y"
    HEXAMETER = "H"
    PENTAMETER = "P"
    NOT_RECOGNIZED = "N"

    @classmethod
    def parse(cls, s: str) -> "MeterLabel":
        try:
            return cls(s)
        except ValueError:
            raise CorpusFormatError(f"unknown meter label {s!r}") from None


class CorpusFormatError(ValueError):
    pass


SCHEME_LENGTHS = (4, 6)
NAN_YEAR = None  # sentinel spelled "NaN" on disk and in headers


@dataclass(frozen=True)
class YearBucket:
    """First year of a 20-year period, or None for the NaN category."""

    start: int | None

    def __post_init__(self):
        if self.start is not None and self.start % BUCKET_YEARS != 0:
            raise CorpusFormatError(f"bucket start {self.start} not a multiple of {BUCKET_YEARS}")

    def __str__(self):
        return "NaN" if self.start is None else str(self.start)

    @classmethod
    def parse(cls, s: str) -> "YearBucket":
        if s == "NaN":
            return cls(None)
        try:
            return cls(int(s))
        except ValueError:
            raise CorpusFormatError(f"bad year bucket {s!r}") from None


def bucketize_year(year: int | None) -> YearBucket:
    """Map a publication year to its 20-year bucket; None -> NaN."""
    if year is None:
        return YearBucket(None)
    return YearBucket((year // BUCKET_YEARS) * BUCKET_YEARS)


def derive_rhyme_scheme(groups: list[int | None]) -> str:
    """Canonical rhyme scheme from corpus rhyme-group ids.

    First rhyming verse gets A, each new group the next letter; verses
    with no group or a group occurring only once map to X.
    """
    if len(groups) not in SCHEME_LENGTHS:
        raise CorpusFormatError(
            f"unsupported strophe length {len(groups)}: expected 4 or 6")
    counts = Counter(g for g in groups if g is not None)
    letters = []
    assigned: dict[int, str] = {}
    next_letter = ord("A")
    for g in groups:
        if g is None or counts[g] < 2:
            letters.append("X")
            continue
        if g not in assigned:
            if chr(next_letter) == "X":
                raise CorpusFormatError("too many rhyme groups in strophe")
            assigned[g] = chr(next_letter)
            next_letter += 1
        letters.append(assigned[g])
    return "".join(letters)


@dataclass(frozen=True)
class Verse:
    text: str
    rhyme_group: int | None
    gold_meter: MeterLabel

    def __post_init__(self):
        if not self.text.strip():
            raise CorpusFormatError("verse text is empty")


@dataclass(frozen=True)
class Strophe:
    verses: tuple[Verse, ...]
    scheme: str
    year_bucket: YearBucket
    poem_index: int | None = None

    def __post_init__(self):
        if len(self.verses) not in SCHEME_LENGTHS:
            raise CorpusFormatError(
                f"unsupported strophe length {len(self.verses)}: expected 4 or 6")
        if len(self.scheme) != len(self.verses):
            raise CorpusFormatError(
                f"scheme {self.scheme} does not match verse count {len(self.verses)}")
        derived = derive_rhyme_scheme([v.rhyme_group for v in self.verses])
        if derived != self.scheme:
            raise CorpusFormatError(
                f"scheme {self.scheme} inconsistent with rhyme groups ({derived})")

    @classmethod
    def from_verses(cls, verses, year, poem_index=None) -> "Strophe":
        verses = tuple(verses)
        scheme = derive_rhyme_scheme([v.rhyme_group for v in verses])
        return cls(verses, scheme, bucketize_year(year), poem_index)


@dataclass
class CorpusStats:
    scheme_counts: Counter = field(default_factory=Counter)
    meter_counts: Counter = field(default_factory=Counter)
    year_counts: Counter = field(default_factory=Counter)
    n_strophes: int = 0
    n_verses: int = 0
    n_poems: int = 0

    def to_dict(self):
        return {
            "schemes": dict(self.scheme_counts),
            "meters": {m.value: c for m, c in self.meter_counts.items()},
            "years": {str(y): c for y, c in self.year_counts.items()},
            "strophes": self.n_strophes,
            "verses": self.n_verses,
            "poems": self.n_poems,
        }


def _parse_verse(obj, where: str) -> Verse:
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"{where}: verse is not an object")
    for key in ("text", "rhyme", "meter"):
        if key not in obj:
            raise CorpusFormatError(f"{where}: missing field {key!r}")
    rhyme = obj["rhyme"]
    if rhyme is not None and not isinstance(rhyme, int):
        raise CorpusFormatError(f"{where}: field 'rhyme' must be integer or null")
    try:
        return Verse(text=obj["text"], rhyme_group=rhyme,
                     gold_meter=MeterLabel.parse(obj["meter"]))
    except CorpusFormatError as e:
        raise CorpusFormatError(f"{where}: {e}") from None


def ingest(path) -> list[Strophe]:
    """Load a corpus file; malformed records fail with a line-addressed error."""
    strophes = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                poem = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusFormatError(f"{where}: invalid JSON ({e})") from None
            if not isinstance(poem, dict) or "strophes" not in poem:
                raise CorpusFormatError(f"{where}: poem object must have 'strophes'")
            year = poem.get("year")
            if year is not None and not isinstance(year, int):
                raise CorpusFormatError(f"{where}: field 'year' must be integer or null")
            for si, raw in enumerate(poem["strophes"]):
                verses = [_parse_verse(v, f"{where} strophe {si}") for v in raw]
                try:
                    strophes.append(Strophe.from_verses(verses, year, poem_index=lineno - 1))
                except CorpusFormatError as e:
                    raise CorpusFormatError(f"{where} strophe {si}: {e}") from None
    return strophes


def split(strophes: list[Strophe], test_fraction: float, seed: int):
    """Deterministic exact train/test partition; test gets floor(n*f)."""
    if not 0 < test_fraction < 1:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    idx = list(range(len(strophes)))
    random.Random(seed).shuffle(idx)
    n_test = int(len(strophes) * test_fraction)
    test_idx = set(idx[:n_test])
    train = [s for i, s in enumerate(strophes) if i not in test_idx]
    test = [s for i, s in enumerate(strophes) if i in test_idx]
    return train, test


def stats(strophes: list[Strophe]) -> CorpusStats:
    st = CorpusStats()
    poems = set()
    for s in strophes:
        st.scheme_counts[s.scheme] += 1
        st.year_counts[s.year_bucket] += 1
        for v in s.verses:
            st.meter_counts[v.gold_meter] += 1
        st.n_strophes += 1
        st.n_verses += len(s.verses)
        if s.poem_index is not None:
            poems.add(s.poem_index)
    st.n_poems = len(poems)
    return st


def modal_meter(strophe: Strophe) -> MeterLabel:
    """Most prevalent verse meter; ties break by dataset-frequency order."""
    counts = Counter(v.gold_meter for v in strophe.verses)
    best = max(counts.items(),
               key=lambda kv: (kv[1], -METER_ORDER.index(kv[0].value)))
    return best[0]
