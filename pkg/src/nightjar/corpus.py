"""Read and write tweet corpora, standoff annotations, detections, and
masked output.

All files are newline-delimited JSON, UTF-8, one object per line. Character
offsets count Unicode scalar values. Readers reject structurally invalid
input loudly: a silently dropped line in a de-identification tool is a
privacy bug.
"""
from __future__ import annotations

import json
from typing import IO, Iterable, Iterator, Mapping, Sequence

from .model import (
    AnnotatedTweet,
    DataError,
    Detection,
    Edit,
    EntityLabel,
    MaskedTweet,
    Span,
    Tweet,
    make_detection,
)


def _json_lines(stream: IO[str]) -> Iterator[tuple[int, dict]]:
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: malformed JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise DataError(f"line {lineno}: expected a JSON object")
        yield lineno, obj


def read_tweets(stream: IO[str]) -> Iterator[Tweet]:
    """Parse tweets from NDJSON. Accepts both the plain schema
    (id/text/author_verified) and API-style fields (id_str/full_text/user.verified);
    unknown fields are ignored."""
    for lineno, obj in _json_lines(stream):
        raw_id = obj.get("id", obj.get("id_str"))
        if raw_id is None or str(raw_id) == "":
            raise DataError(f"line {lineno}: tweet has no id")
        text = obj.get("text", obj.get("full_text"))
        if text is None:
            raise DataError(f"line {lineno}: tweet {raw_id} has no text")
        if not isinstance(text, str):
            raise DataError(f"line {lineno}: tweet {raw_id} text is not a string")
        user = obj.get("user") or {}
        verified = bool(obj.get("author_verified",
                                user.get("verified", False)))
        lang = obj.get("lang")
        yield Tweet(id=str(raw_id), text=text, author_verified=verified,
                    lang=lang)


def load_tweets(stream: IO[str]) -> dict[str, Tweet]:
    """Read a whole corpus into an id-keyed mapping; duplicate ids are an
    error."""
    tweets: dict[str, Tweet] = {}
    for tweet in read_tweets(stream):
        if tweet.id in tweets:
            raise DataError(f"duplicate tweet id {tweet.id!r} in corpus")
        tweets[tweet.id] = tweet
    return tweets


def filter_language(tweets: Iterable[Tweet], code: str) -> Iterator[Tweet]:
    """Keep tweets whose language tag equals ``code`` exactly; tweets with
    no tag are dropped."""
    return (t for t in tweets if t.lang == code)


def _parse_span_obj(obj: dict, lineno: int, tweet_id: str,
                    text: str) -> tuple[Span, EntityLabel, str]:
    try:
        start, end = obj["start"], obj["end"]
    except KeyError as exc:
        raise DataError(
            f"line {lineno}: span missing {exc} for tweet {tweet_id}") from None
    if not isinstance(start, int) or not isinstance(end, int):
        raise DataError(f"line {lineno}: non-integer span offsets for tweet "
                        f"{tweet_id}")
    label = EntityLabel.parse(str(obj.get("label")))
    try:
        span = Span(start, end)
    except DataError as exc:
        raise DataError(f"line {lineno}: tweet {tweet_id}: {exc}") from None
    if span.end > len(text):
        raise DataError(
            f"line {lineno}: span [{start}, {end}) out of bounds for tweet "
            f"{tweet_id} (text length {len(text)})")
    return span, label, str(obj.get("source", "gold"))


def read_annotations(stream: IO[str],
                     tweets_by_id: Mapping[str, Tweet] | None = None
                     ) -> Iterator[AnnotatedTweet]:
    """Parse standoff annotation records ``{"tweet_id", "spans": [...]}``.

    Spans are validated against the tweet text, joined either from
    ``tweets_by_id`` or from an inline ``text`` field (the form the
    synthetic generator writes, which makes the file self-contained).
    """
    for lineno, obj in _json_lines(stream):
        tweet_id = obj.get("tweet_id")
        if tweet_id is None:
            raise DataError(f"line {lineno}: annotation has no tweet_id")
        tweet_id = str(tweet_id)
        if tweets_by_id is not None:
            if tweet_id not in tweets_by_id:
                raise DataError(
                    f"line {lineno}: annotation references unknown tweet "
                    f"{tweet_id}")
            tweet = tweets_by_id[tweet_id]
        elif isinstance(obj.get("text"), str):
            tweet = Tweet(id=tweet_id, text=obj["text"],
                          author_verified=bool(obj.get("author_verified", False)),
                          lang=obj.get("lang"))
        else:
            raise DataError(
                f"line {lineno}: annotation for tweet {tweet_id} carries no "
                f"text and no tweet corpus was supplied")
        spans = obj.get("spans")
        if not isinstance(spans, list):
            raise DataError(f"line {lineno}: tweet {tweet_id} has no spans list")
        gold = tuple((span, label) for span, label, _ in
                     (_parse_span_obj(s, lineno, tweet_id, tweet.text)
                      for s in spans))
        yield AnnotatedTweet(tweet=tweet, gold=gold)


def read_detections(stream: IO[str], tweets_by_id: Mapping[str, Tweet]
                    ) -> dict[str, list[Detection]]:
    """Read a detections file (same standoff schema) into per-tweet
    Detection lists, surfaces rebuilt from the tweet text."""
    out: dict[str, list[Detection]] = {}
    for lineno, obj in _json_lines(stream):
        tweet_id = str(obj.get("tweet_id"))
        if tweet_id not in tweets_by_id:
            raise DataError(
                f"line {lineno}: detections reference unknown tweet {tweet_id}")
        text = tweets_by_id[tweet_id].text
        spans = obj.get("spans")
        if not isinstance(spans, list):
            raise DataError(f"line {lineno}: tweet {tweet_id} has no spans list")
        dets = out.setdefault(tweet_id, [])
        for s in spans:
            span, label, source = _parse_span_obj(s, lineno, tweet_id, text)
            dets.append(make_detection(text, span.start, span.end, label,
                                       source))
    return out


def _dump(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


def write_tweets(tweets: Iterable[Tweet], stream: IO[str]) -> None:
    for tweet in sorted(tweets, key=lambda t: t.id):
        record = {"id": tweet.id, "text": tweet.text,
                  "author_verified": tweet.author_verified}
        if tweet.lang is not None:
            record["lang"] = tweet.lang
        stream.write(_dump(record) + "\n")


def write_annotations(annotated: Iterable[AnnotatedTweet], stream: IO[str],
                      inline_text: bool = True) -> None:
    """Write gold annotations; with ``inline_text`` the records are
    self-contained and evaluable without the tweet corpus."""
    for item in sorted(annotated, key=lambda a: a.tweet.id):
        record: dict = {"tweet_id": item.tweet.id}
        if inline_text:
            record["text"] = item.tweet.text
            record["author_verified"] = item.tweet.author_verified
            if item.tweet.lang is not None:
                record["lang"] = item.tweet.lang
        record["spans"] = [
            {"start": span.start, "end": span.end, "label": label.value}
            for span, label in sorted(item.gold, key=lambda g: (g[0].start, g[0].end))
        ]
        stream.write(_dump(record) + "\n")


def write_detections(detections: Mapping[str, Sequence[Detection]],
                     stream: IO[str]) -> None:
    """Write per-tweet detections in the shared standoff schema, ordered by
    tweet id."""
    for tweet_id in sorted(detections):
        record = {
            "tweet_id": tweet_id,
            "spans": [
                {"start": d.span.start, "end": d.span.end,
                 "label": d.label.value, "source": d.source}
                for d in sorted(detections[tweet_id],
                                key=lambda d: (d.span.start, d.span.end))
            ],
        }
        stream.write(_dump(record) + "\n")


def write_masked(masked: Iterable[MaskedTweet], stream: IO[str]) -> None:
    for item in sorted(masked, key=lambda m: m.tweet_id):
        record = {
            "tweet_id": item.tweet_id,
            "original_text": item.original_text,
            "masked_text": item.masked_text,
            "edits": [
                {"start": e.span.start, "end": e.span.end,
                 "label": e.label.value, "replacement": e.replacement,
                 "source": e.source}
                for e in item.edits
            ],
        }
        stream.write(_dump(record) + "\n")


def read_masked(stream: IO[str]) -> Iterator[MaskedTweet]:
    for lineno, obj in _json_lines(stream):
        try:
            edits = tuple(
                Edit(span=Span(e["start"], e["end"]),
                     label=EntityLabel.parse(e["label"]),
                     replacement=e["replacement"], source=e["source"])
                for e in obj["edits"])
            masked = MaskedTweet(
                tweet_id=str(obj["tweet_id"]),
                original_text=obj["original_text"],
                masked_text=obj["masked_text"],
                edits=edits)
        except (KeyError, TypeError) as exc:
            raise DataError(f"line {lineno}: malformed masked record: "
                            f"{exc}") from exc
        if masked.replay() != masked.masked_text:
            raise DataError(
                f"line {lineno}: edits do not reproduce masked text for "
                f"tweet {masked.tweet_id}")
        yield masked
