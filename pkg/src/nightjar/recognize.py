"""Named-entity recognition: a builtin gazetteer recognizer, adapters for
external NER processes, and a union combiner.

The union combiner implements the "either model marks it" rule: a token is
identifiable if any recognizer says so, which can only raise recall relative
to each component recognizer.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .adapter_client import AdapterClient
from .model import (
    AdapterError,
    DataError,
    Detection,
    EntityLabel,
    Tweet,
    make_detection,
)
from .tokenize import Token, TokenKind, token_indices_overlapping

log = logging.getLogger(__name__)

# Default mapping from common external NER schemes into our taxonomy;
# anything unmapped is dropped (with a logged count). Overridable per
# recognizer via configuration.
DEFAULT_LABEL_MAP: dict[str, EntityLabel] = {
    "PERSON": EntityLabel.PERSON,
    "ORG": EntityLabel.ORG,
    "NORP": EntityLabel.GROUP,
    "GPE": EntityLabel.LOCATION,
    "LOC": EntityLabel.LOCATION,
    "FAC": EntityLabel.LOCATION,
    "CITY": EntityLabel.CITY,
    "STATE_OR_PROVINCE": EntityLabel.STATE,
    "COUNTRY": EntityLabel.COUNTRY,
}

# When one gazetteer lists the same surface under several labels, the first
# label in this order wins.
_GAZ_LABEL_PRIORITY = (
    EntityLabel.PERSON,
    EntityLabel.ORG,
    EntityLabel.GROUP,
    EntityLabel.CITY,
    EntityLabel.STATE,
    EntityLabel.COUNTRY,
    EntityLabel.LOCATION,
)


class RecognizerKind(str, Enum):
    BUILTIN = "builtin"
    EXTERNAL = "external"


@dataclass(frozen=True, slots=True)
class RecognizerHandle:
    """Identity, kind, and label mapping of one recognizer in a pipeline."""

    name: str
    kind: RecognizerKind
    label_map: Mapping[str, EntityLabel] = field(
        default_factory=lambda: dict(DEFAULT_LABEL_MAP))
    command: tuple[str, ...] = ()  # external only: argv of the adapter


@dataclass(frozen=True)
class Gazetteer:
    """Surface-form lists per entity label for dictionary recognition."""

    entries: Mapping[EntityLabel, frozenset[str]]
    case_sensitive: bool = True

    def __post_init__(self) -> None:
        for label, values in self.entries.items():
            if any(not v for v in values):
                raise DataError(f"empty gazetteer entry under {label.value}")

    def _key(self, s: str) -> str:
        return s if self.case_sensitive else s.casefold()

    def lookup(self, surface: str) -> EntityLabel | None:
        """Label for a normalized candidate surface, or None."""
        key = self._key(surface)
        for label in _GAZ_LABEL_PRIORITY:
            values = self.entries.get(label)
            if values and key in values:
                return label
        return None

    @property
    def max_words(self) -> int:
        longest = 1
        for values in self.entries.values():
            for v in values:
                longest = max(longest, v.count(" ") + 1)
        return longest

    @classmethod
    def from_dict(cls, raw: Mapping[str, Sequence[str]],
                  case_sensitive: bool = True) -> "Gazetteer":
        entries: dict[EntityLabel, frozenset[str]] = {}
        for name, values in raw.items():
            label = EntityLabel.parse(name)
            normed = (v if case_sensitive else v.casefold() for v in values)
            entries[label] = frozenset(" ".join(v.split()) for v in normed)
        return cls(entries=entries, case_sensitive=case_sensitive)

    @classmethod
    def from_file(cls, path: str | Path, case_sensitive: bool = True) -> "Gazetteer":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh), case_sensitive=case_sensitive)


def default_gazetteer(case_sensitive: bool = True) -> Gazetteer:
    raw = resources.files("nightjar").joinpath("data/gazetteer.json").read_text("utf-8")
    return Gazetteer.from_dict(json.loads(raw), case_sensitive=case_sensitive)


def recognize_builtin(tweet: Tweet, tokens: Sequence[Token], gaz: Gazetteer,
                      source: str = "builtin") -> list[Detection]:
    """Dictionary recognition over runs of consecutive WORD tokens,
    longest match first. An empty gazetteer simply finds nothing."""
    out: list[Detection] = []
    max_words = gaz.max_words
    i = 0
    while i < len(tokens):
        if tokens[i].kind is not TokenKind.WORD:
            i += 1
            continue
        matched = False
        limit = i
        while (limit < len(tokens) and limit - i < max_words
               and tokens[limit].kind is TokenKind.WORD):
            limit += 1
        for j in range(limit, i, -1):
            candidate = " ".join(t.text for t in tokens[i:j])
            label = gaz.lookup(candidate)
            if label is not None:
                out.append(make_detection(
                    tweet.text, tokens[i].span.start, tokens[j - 1].span.end,
                    label, source))
                i = j
                matched = True
                break
        if not matched:
            i += 1
    return out


def recognize_external(tweet: Tweet, handle: RecognizerHandle,
                       client: AdapterClient) -> list[Detection]:
    """Ask a running adapter process for entities and map its labels into
    the taxonomy. Spans that violate the text bounds are a protocol error."""
    if handle.kind is not RecognizerKind.EXTERNAL:
        raise DataError(f"recognizer {handle.name!r} is not external")
    entities = client.annotate(tweet.id, tweet.text)
    out: list[Detection] = []
    dropped = 0
    for ent in entities:
        start, end, raw_label = ent["start"], ent["end"], ent["label"]
        if not (isinstance(start, int) and isinstance(end, int)
                and 0 <= start < end <= len(tweet.text)):
            raise AdapterError(
                f"recognizer {handle.name!r} returned invalid span "
                f"[{start}, {end}) for tweet {tweet.id} "
                f"(text length {len(tweet.text)})"
            )
        label = handle.label_map.get(raw_label)
        if label is None:
            dropped += 1
            continue
        out.append(make_detection(tweet.text, start, end, label, handle.name))
    if dropped:
        log.info("recognizer %s: dropped %d unmapped label(s) on tweet %s",
                 handle.name, dropped, tweet.id)
    return out


def union_combine(results: Sequence[tuple[str, Sequence[Detection]]],
                  tokens: Sequence[Token], text: str) -> list[Detection]:
    """Token-granularity union of several recognizers' detections.

    A token carries label L if any recognizer marked it with L; maximal runs
    of consecutive same-label tokens merge into one detection whose source
    names every contributing recognizer. Commutative and idempotent.
    """
    marks: dict[EntityLabel, dict[int, set[str]]] = {}
    for name, detections in results:
        for det in detections:
            for idx in token_indices_overlapping(tokens, det.span):
                marks.setdefault(det.label, {}).setdefault(idx, set()).add(name)

    out: list[Detection] = []
    for label, marked in marks.items():
        indices = sorted(marked)
        run_start = 0
        while run_start < len(indices):
            run_end = run_start
            while (run_end + 1 < len(indices)
                   and indices[run_end + 1] == indices[run_end] + 1):
                run_end += 1
            first = tokens[indices[run_start]]
            last = tokens[indices[run_end]]
            contributors: set[str] = set()
            for k in range(run_start, run_end + 1):
                contributors |= marked[indices[k]]
            out.append(make_detection(
                text, first.span.start, last.span.end, label,
                "+".join(sorted(contributors))))
            run_start = run_end + 1
    order = {label: i for i, label in enumerate(EntityLabel)}
    out.sort(key=lambda d: (d.span.start, d.span.end, order[d.label]))
    return out
