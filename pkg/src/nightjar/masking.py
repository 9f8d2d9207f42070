"""Resolve detections into a non-overlapping edit plan and apply the
removal/replacement policy with deterministic synthetic values.

Determinism contract: the per-tweet RNG stream is seeded from
``hash(policy seed, tweet id)``, so masked output is byte-identical for a
fixed (corpus, policy, seed) regardless of worker count or tweet order.
"""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .detectors import run_regex_detectors
from .model import (
    ConfigError,
    Detection,
    Edit,
    EntityLabel,
    MaskedTweet,
    NightjarError,
    REMOVAL_CLASS,
    Span,
    Tweet,
)


class Action(str, Enum):
    DELETE = "delete"
    PLACEHOLDER = "placeholder"
    SYNTHETIC = "synthetic"


DEFAULT_TEMPLATES: dict[EntityLabel, str] = {
    EntityLabel.URL: "<URL>",
    EntityLabel.USERNAME: "<USER>",
    EntityLabel.PHONE: "<PHONE>",
    EntityLabel.EMAIL: "<EMAIL>",
    EntityLabel.ID_NUMBER: "<ID>",
    EntityLabel.ZIP: "<ZIP>",
    EntityLabel.PERSON: "<PERSON>",
    EntityLabel.ORG: "<ORG>",
    EntityLabel.GROUP: "<GROUP>",
    EntityLabel.CITY: "<CITY>",
    EntityLabel.STATE: "<STATE>",
    EntityLabel.COUNTRY: "<COUNTRY>",
    EntityLabel.LOCATION: "<LOCATION>",
}


def default_actions() -> dict[EntityLabel, Action]:
    """Placeholders for pattern-detected labels (keeps token counts stable
    for downstream NLP), synthetic replacement for recognized entities."""
    return {
        label: (Action.PLACEHOLDER if label in REMOVAL_CLASS
                else Action.SYNTHETIC)
        for label in EntityLabel
    }


@dataclass(frozen=True)
class ReplacementPolicy:
    """Per-label action, placeholder templates, and the run's seed.

    ``cross_tweet_consistency`` maps equal (surface, label) pairs to equal
    replacements corpus-wide. Off by default: it aids readability but lets
    a reader link mentions across tweets.
    """

    actions: Mapping[EntityLabel, Action] = field(default_factory=default_actions)
    templates: Mapping[EntityLabel, str] = field(
        default_factory=lambda: dict(DEFAULT_TEMPLATES))
    seed: int = 0
    cross_tweet_consistency: bool = False

    def __post_init__(self) -> None:
        for label in EntityLabel:
            if label not in self.actions:
                raise ConfigError(f"policy defines no action for {label.value}")


@dataclass(frozen=True)
class ValuePool:
    """Synthetic surface values per entity label, plus the handle grammar
    used when usernames are synthesized rather than replaced by a
    placeholder."""

    entries: Mapping[EntityLabel, tuple[str, ...]]
    handle_min: int = 4
    handle_max: int = 12

    @classmethod
    def from_dict(cls, raw: Mapping[str, Sequence[str]]) -> "ValuePool":
        entries = {EntityLabel.parse(name): tuple(values)
                   for name, values in raw.items()}
        return cls(entries=entries)

    @classmethod
    def from_file(cls, path: str | Path) -> "ValuePool":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def default_value_pool() -> ValuePool:
    raw = resources.files("nightjar").joinpath("data/value_pools.json").read_text("utf-8")
    return ValuePool.from_dict(json.loads(raw))


def validate_pool(pool: ValuePool, policy: ReplacementPolicy) -> None:
    """Fail at pipeline start, not per tweet: every synthetic-mapped label
    needs a non-empty pool whose values cannot re-trigger the pattern
    detectors."""
    for label, action in policy.actions.items():
        if action is not Action.SYNTHETIC or label is EntityLabel.USERNAME:
            continue
        values = pool.entries.get(label, ())
        if not values:
            raise ConfigError(f"empty value pool for synthetic label "
                              f"{label.value}")
        for value in values:
            if run_regex_detectors(Tweet(id="pool-check", text=value)):
                raise ConfigError(
                    f"pool value {value!r} for {label.value} re-triggers a "
                    f"pattern detector")


_HANDLE_FIRST = "abcdefghijklmnopqrstuvwxyz"
_HANDLE_REST = _HANDLE_FIRST + "0123456789_"


def _handle(rng: random.Random, pool: ValuePool) -> str:
    length = rng.randint(pool.handle_min, pool.handle_max)
    chars = [rng.choice(_HANDLE_FIRST)]
    chars += [rng.choice(_HANDLE_REST) for _ in range(length - 1)]
    return "@" + "".join(chars)


def synth_value(label: EntityLabel, pool: ValuePool,
                rng: random.Random) -> str:
    """Uniform draw from the label's pool; usernames come from the handle
    grammar instead. Advances ``rng`` deterministically."""
    if label is EntityLabel.USERNAME:
        return _handle(rng, pool)
    values = pool.entries.get(label, ())
    if not values:
        raise ConfigError(f"empty value pool for {label.value}")
    return values[rng.randrange(len(values))]


# Overlap resolution: pattern detections beat recognizer detections, then
# longer spans win, then this label order, then the earlier start.
_LABEL_PRIORITY = {label: i for i, label in enumerate((
    EntityLabel.URL, EntityLabel.EMAIL, EntityLabel.USERNAME,
    EntityLabel.PHONE, EntityLabel.ID_NUMBER, EntityLabel.ZIP,
    EntityLabel.PERSON, EntityLabel.ORG, EntityLabel.GROUP,
    EntityLabel.CITY, EntityLabel.STATE, EntityLabel.COUNTRY,
    EntityLabel.LOCATION,
))}


def _is_regex_source(det: Detection) -> bool:
    return det.source.startswith("regex/")


def resolve_spans(detections: Sequence[Detection]) -> list[Detection]:
    """Reduce possibly-overlapping detections on one tweet to a
    non-overlapping list, sorted by start offset."""
    ranked = sorted(detections, key=lambda d: (
        0 if _is_regex_source(d) else 1,
        -len(d.span),
        _LABEL_PRIORITY[d.label],
        d.span.start,
        d.source,
    ))
    kept: list[Detection] = []
    for det in ranked:
        if not any(det.span.intersects(k.span) for k in kept):
            kept.append(det)
    kept.sort(key=lambda d: d.span.start)
    return kept


def _tweet_rng(seed: int, tweet_id: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}:{tweet_id}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _corpus_wide_value(label: EntityLabel, surface: str,
                       policy: ReplacementPolicy, pool: ValuePool) -> str:
    digest = hashlib.sha256(
        f"{policy.seed}:{label.value}:{surface}".encode("utf-8")).digest()
    return synth_value(label, pool,
                       random.Random(int.from_bytes(digest[:8], "big")))


def _delete_span(text: str, span: Span, floor: int, ceiling: int) -> Span:
    """Extend a deletion over the following whitespace run so deletions
    leave single spaces behind; at end of text, absorb the preceding run
    instead. Stays within [floor, ceiling), the gap between neighboring
    edits."""
    end = span.end
    while end < min(len(text), ceiling) and text[end].isspace():
        end += 1
    if end > span.end:
        return Span(span.start, end)
    start = span.start
    while start > floor and text[start - 1].isspace():
        start -= 1
    return Span(start, span.end)


# Residual passes always converge in practice within a pass or two; the cap
# only guards against a pathological policy/detector combination.
MAX_CLOSURE_PASSES = 8


def _apply(text: str, edits: Sequence[Edit]) -> str:
    out = text
    for edit in reversed(edits):
        out = out[:edit.span.start] + edit.replacement + out[edit.span.end:]
    return out


def _map_to_original(span: Span, edits: Sequence[Edit],
                     text: str) -> list[Span]:
    """Translate a span in the masked text back to original-text offsets.

    The result is one span per untouched segment the masked span covers: a
    residual that merged across a deletion point comes back as multiple
    pieces. A span overlapping actual replacement characters returns []
    (possible only with mention-shaped synthetic handles or custom
    alphanumeric templates); such residuals are the policy's own output and
    are left alone.
    """
    segments = []  # (masked_start, masked_end, original_start)
    orig_cursor = masked_cursor = 0
    for edit in edits:
        seg_len = edit.span.start - orig_cursor
        segments.append((masked_cursor, masked_cursor + seg_len, orig_cursor))
        if len(edit.replacement) and span.start < masked_cursor + seg_len + len(edit.replacement) \
                and masked_cursor + seg_len < span.end:
            return []
        masked_cursor += seg_len + len(edit.replacement)
        orig_cursor = edit.span.end
    segments.append((masked_cursor, masked_cursor + (len(text) - orig_cursor),
                     orig_cursor))

    pieces: list[Span] = []
    for masked_start, masked_end, orig_start in segments:
        lo = max(span.start, masked_start)
        hi = min(span.end, masked_end)
        if lo >= hi:
            continue
        shift = orig_start - masked_start
        start, end = lo + shift, hi + shift
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if start < end:
            pieces.append(Span(start, end))
    return pieces


def mask_tweet(tweet: Tweet, detections: Sequence[Detection],
               policy: ReplacementPolicy,
               pool: ValuePool | None = None, *,
               residual_detector=None) -> MaskedTweet:
    """Apply the policy to resolved (non-overlapping) detections.

    Equal (surface, label) pairs within one tweet always receive the same
    replacement.

    After applying the edits, the pattern detectors run again on the masked
    text: replacing a span changes its neighbors' context, which can make a
    previously uncued ZIP cue-adjacent or merge digit runs into a phone
    shape. Mappable residual detections are masked too, iterating to a
    fixed point, which is what makes the removal-class safety closure hold.
    """
    if pool is None:
        pool = default_value_pool()
    if residual_detector is None:
        residual_detector = lambda text: run_regex_detectors(
            Tweet(id=tweet.id, text=text, author_verified=False))
    ordered = sorted(detections, key=lambda d: d.span.start)
    for det in ordered:
        if det.span.end > len(tweet.text):
            raise NightjarError(
                f"detection span [{det.span.start}, {det.span.end}) out of "
                f"bounds for tweet {tweet.id} (length {len(tweet.text)})")
    for a, b in zip(ordered, ordered[1:]):
        if a.span.intersects(b.span):
            raise NightjarError(
                f"unresolved overlapping detections on tweet {tweet.id}; "
                f"run resolve_spans first")

    rng = _tweet_rng(policy.seed, tweet.id)
    memo: dict[tuple[str, EntityLabel], str] = {}

    def plan(dets: Sequence[Detection], existing: list[Edit]) -> list[Edit]:
        merged = list(existing)
        for det in sorted(dets, key=lambda d: d.span.start):
            action = policy.actions[det.label]
            if action is Action.DELETE:
                floor = max((e.span.end for e in merged
                             if e.span.end <= det.span.start), default=0)
                ceiling = min((e.span.start for e in merged
                               if e.span.start >= det.span.end),
                              default=len(tweet.text))
                span = _delete_span(tweet.text, det.span, floor, ceiling)
                replacement = ""
            elif action is Action.PLACEHOLDER:
                span = det.span
                replacement = policy.templates[det.label]
            else:
                span = det.span
                key = (det.surface, det.label)
                if key not in memo:
                    if policy.cross_tweet_consistency:
                        memo[key] = _corpus_wide_value(det.label, det.surface,
                                                       policy, pool)
                    else:
                        memo[key] = synth_value(det.label, pool, rng)
                replacement = memo[key]
            merged.append(Edit(span=span, label=det.label,
                               replacement=replacement, source=det.source))
        merged.sort(key=lambda e: e.span.start)
        return merged

    edits = plan(ordered, [])
    masked = _apply(tweet.text, edits)
    for _ in range(MAX_CLOSURE_PASSES):
        residual = []
        for det in residual_detector(masked):
            for piece in _map_to_original(det.span, edits, tweet.text):
                residual.append(Detection(
                    span=piece, label=det.label, source=det.source,
                    surface=tweet.text[piece.start:piece.end]))
        if not residual:
            break
        edits = plan(residual, edits)
        masked = _apply(tweet.text, edits)
    return MaskedTweet(tweet_id=tweet.id, original_text=tweet.text,
                       masked_text=masked, edits=tuple(edits))
