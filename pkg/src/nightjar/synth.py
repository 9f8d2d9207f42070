"""Deterministic synthetic corpus generation.

Builds benign filler sentences and injects identifiable surface forms at
recorded offsets; the injection records are the gold standard. Generation is
a pure function of (seed, n, rates), so the corpus doubles as a brute-force
oracle: a pattern detector is correct on it iff it returns exactly the
injected spans.

Construction rules that keep the oracle airtight:

* filler words are lowercase and purely alphabetic, so no filler can match
  any pattern detector or the (capitalized) gazetteer;
* two injections are never adjacent: at least one filler word separates
  them, so digit runs from different injections cannot merge;
* every ZIP injection ships inside a cue context (state abbreviation or
  city words), since uncued five-digit numbers are by design not detected;
* verified-author tweets receive no phone or email injections at all, so
  detection-time gating never contradicts the gold record.
"""
from __future__ import annotations

import json
import random
from importlib import resources
from typing import Mapping

from .detectors import STATE_ABBREVS
from .model import AnnotatedTweet, EntityLabel, Span, Tweet

DEFAULT_RATES: dict[EntityLabel, float] = {
    EntityLabel.URL: 0.45,
    EntityLabel.USERNAME: 0.45,
    EntityLabel.PHONE: 0.12,
    EntityLabel.EMAIL: 0.10,
    EntityLabel.ID_NUMBER: 0.08,
    EntityLabel.ZIP: 0.08,
    EntityLabel.PERSON: 0.25,
    EntityLabel.ORG: 0.12,
    EntityLabel.GROUP: 0.08,
    EntityLabel.CITY: 0.12,
    EntityLabel.STATE: 0.08,
    EntityLabel.COUNTRY: 0.08,
    EntityLabel.LOCATION: 0.05,
}

DEFAULT_VERIFIED_RATE = 0.1

_FILLER = (
    "the a an we you they it this that and but so because after before "
    "today tonight tomorrow yesterday morning evening really very just "
    "finally actually honestly totally kind of sort love like hate enjoy "
    "watch watching watched see saw seen go going went come coming came "
    "make making made take taking took good great nice cool awesome fun "
    "happy sad tired hungry busy free new old big small long short best "
    "worst day week month year time thing stuff people friends family "
    "home work school game show movie music song food coffee lunch dinner"
).split()

_URL_SHORTENERS = ("t.co", "bit.ly", "goo.gl", "tinyurl.com")
_URL_DOMAINS = ("example.com", "newsfeed.org", "dailyupdate.net", "blogpost.io")
_EMAIL_DOMAINS = ("example.com", "mailbox.org", "inbox.net", "postbox.io")

_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_UPPER = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
_DIGITS = "0123456789"

# Injection order is fixed so the rng consumption sequence is stable.
_INJECTION_ORDER = (
    EntityLabel.URL, EntityLabel.USERNAME, EntityLabel.PHONE,
    EntityLabel.EMAIL, EntityLabel.ID_NUMBER, EntityLabel.ZIP,
    EntityLabel.PERSON, EntityLabel.ORG, EntityLabel.GROUP,
    EntityLabel.CITY, EntityLabel.STATE, EntityLabel.COUNTRY,
    EntityLabel.LOCATION,
)

_SORTED_ABBREVS = tuple(sorted(STATE_ABBREVS))


def _load_entity_surfaces() -> dict[EntityLabel, tuple[str, ...]]:
    raw = resources.files("nightjar").joinpath("data/gazetteer.json").read_text("utf-8")
    data = json.loads(raw)
    return {EntityLabel.parse(name): tuple(values)
            for name, values in data.items()}


_ENTITY_SURFACES = _load_entity_surfaces()


def _alnum_token(rng: random.Random, lo: int, hi: int) -> str:
    # Always starts with a letter so URL paths can never be pure digit runs.
    length = rng.randint(lo, hi)
    return (rng.choice(_LETTERS)
            + "".join(rng.choice(_LETTERS + _DIGITS) for _ in range(length - 1)))


def _make_url(rng: random.Random) -> str:
    form = rng.randrange(4)
    token = _alnum_token(rng, 5, 9)
    if form == 0:
        return f"https://{rng.choice(_URL_SHORTENERS)}/{token}"
    if form == 1:
        return f"http://{rng.choice(_URL_DOMAINS)}/{token}"
    if form == 2:
        return f"www.{rng.choice(_URL_DOMAINS)}/{token}"
    return f"{rng.choice(_URL_SHORTENERS)}/{token}"


def _make_handle(rng: random.Random) -> str:
    length = rng.randint(3, 12)
    body = (rng.choice(_LETTERS)
            + "".join(rng.choice(_LETTERS + _DIGITS + "_")
                      for _ in range(length - 1)))
    return "@" + body


def _make_phone(rng: random.Random) -> str:
    d = [rng.randint(2, 9)] + [rng.randint(0, 9) for _ in range(9)]
    s = "".join(str(x) for x in d)
    form = rng.randrange(4)
    if form == 0:
        return f"{s[:3]}-{s[3:6]}-{s[6:]}"
    if form == 1:
        return f"({s[:3]}) {s[3:6]}-{s[6:]}"
    if form == 2:
        return f"+1 {s[:3]} {s[3:6]} {s[6:]}"
    return s


def _make_email(rng: random.Random) -> str:
    local = _alnum_token(rng, 3, 8)
    if rng.random() < 0.4:
        local += "." + _alnum_token(rng, 2, 6)
    return f"{local}@{rng.choice(_EMAIL_DOMAINS)}"


def _make_id(rng: random.Random) -> str:
    # Alternating letter/digit blocks guarantee the interleaving the ID
    # detector requires.
    pairs = rng.randint(4, 6)
    return "".join(rng.choice(_UPPER) + rng.choice(_DIGITS)
                   for _ in range(pairs))


def _make_zip_unit(rng: random.Random) -> tuple[str, int, int]:
    """(unit text, zip start, zip end): a ZIP inside a location cue."""
    z = str(rng.randint(10000, 99999))
    if rng.random() < 0.3:
        z = f"{z}-{rng.randint(0, 9999):04d}"
    city = rng.choice(_ENTITY_SURFACES[EntityLabel.CITY])
    if rng.random() < 0.5:
        prefix = f"{city}, {rng.choice(_SORTED_ABBREVS)} "
        return prefix + z, len(prefix), len(prefix) + len(z)
    return f"{z} {city}", 0, len(z)


def _make_injection(label: EntityLabel, rng: random.Random
                    ) -> tuple[str, list[tuple[int, int, EntityLabel]]]:
    """(unit text, gold spans relative to the unit)."""
    if label is EntityLabel.URL:
        value = _make_url(rng)
    elif label is EntityLabel.USERNAME:
        value = _make_handle(rng)
    elif label is EntityLabel.PHONE:
        value = _make_phone(rng)
    elif label is EntityLabel.EMAIL:
        value = _make_email(rng)
    elif label is EntityLabel.ID_NUMBER:
        value = _make_id(rng)
    elif label is EntityLabel.ZIP:
        unit, start, end = _make_zip_unit(rng)
        return unit, [(start, end, EntityLabel.ZIP)]
    else:
        value = rng.choice(_ENTITY_SURFACES[label])
    return value, [(0, len(value), label)]


def generate_synthetic_corpus(
    seed: int,
    n: int,
    rates: Mapping[EntityLabel, float] | None = None,
    verified_rate: float = DEFAULT_VERIFIED_RATE,
) -> tuple[list[Tweet], list[AnnotatedTweet]]:
    """Generate ``n`` tweets with injected identifiable information and the
    matching gold annotations."""
    if n < 1:
        raise ValueError("n must be >= 1")
    effective = dict(DEFAULT_RATES)
    if rates is not None:
        effective.update(rates)
    rng = random.Random(seed)

    tweets: list[Tweet] = []
    annotated: list[AnnotatedTweet] = []
    for i in range(n):
        verified = rng.random() < verified_rate
        units: list[tuple[str, list[tuple[int, int, EntityLabel]]]] = []
        for label in _INJECTION_ORDER:
            rate = effective.get(label, 0.0)
            if verified and label in (EntityLabel.PHONE, EntityLabel.EMAIL):
                continue
            if rng.random() < rate:
                units.append(_make_injection(label, rng))

        n_fill = max(rng.randint(6, 12), len(units))
        fillers = [rng.choice(_FILLER) for _ in range(n_fill)]
        gaps = sorted(rng.sample(range(n_fill + 1), len(units)))

        parts: list[tuple[str, list[tuple[int, int, EntityLabel]]]] = []
        unit_iter = iter(zip(gaps, units))
        pending = next(unit_iter, None)
        for gap in range(n_fill + 1):
            if pending is not None and pending[0] == gap:
                parts.append(pending[1])
                pending = next(unit_iter, None)
            if gap < n_fill:
                parts.append((fillers[gap], []))

        text_parts: list[str] = []
        gold: list[tuple[Span, EntityLabel]] = []
        cursor = 0
        for part_text, part_spans in parts:
            if text_parts:
                text_parts.append(" ")
                cursor += 1
            text_parts.append(part_text)
            for rel_start, rel_end, label in part_spans:
                gold.append((Span(cursor + rel_start, cursor + rel_end), label))
            cursor += len(part_text)

        tweet = Tweet(id=f"s{i:05d}", text="".join(text_parts),
                      author_verified=verified, lang="en")
        tweets.append(tweet)
        annotated.append(AnnotatedTweet(
            tweet=tweet,
            gold=tuple(sorted(gold, key=lambda g: (g[0].start, g[0].end)))))
    return tweets, annotated


def parse_rates(spec: str) -> dict[EntityLabel, float]:
    """Parse a ``LABEL=prob,LABEL=prob`` string as used by the CLI."""
    rates: dict[EntityLabel, float] = {}
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, _, value = chunk.partition("=")
        rates[EntityLabel.parse(name.strip())] = float(value)
    return rates
