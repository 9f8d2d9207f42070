"""Tweet-aware tokenization with exact character-offset alignment.

Every non-whitespace character of the input lands in exactly one token, so
character spans from any detector project cleanly onto tokens and token-level
scoring is well-defined.

Boundary conventions (this is the repo's convention; there is no single
standard for tweet tokenization):

* ``@mention``, ``#hashtag``, URL-shaped runs, and email-shaped runs are
  kept as single tokens;
* contractions and possessives stay whole (``don't``, ``Katie's``);
* digit runs joined by ``. , : / -`` form one NUMBER token, so phone numbers
  and ZIP+4 values are single tokens;
* any other non-space character is its own PUNCT/OTHER token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .model import DataError, Span


class TokenKind(str, Enum):
    WORD = "WORD"
    MENTION = "MENTION"
    HASHTAG = "HASHTAG"
    URLLIKE = "URLLIKE"
    NUMBER = "NUMBER"
    PUNCT = "PUNCT"
    OTHER = "OTHER"


@dataclass(frozen=True, slots=True)
class Token:
    span: Span
    text: str
    kind: TokenKind


_TOKEN_RE = re.compile(
    r"""
      (?P<URLLIKE>https?://\S+|www\.\S+|[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+/\S*)
    | (?P<EMAILISH>[\w.+%-]+@[\w-]+(?:\.[\w-]+)+)
    | (?P<MENTION>@\w+)
    | (?P<HASHTAG>\#\w+)
    | (?P<NUMBER>\d+(?:[.,:/-]\d+)*)
    | (?P<WORD>\w+(?:['’]\w+)*)
    | (?P<PUNCT>\S)
    """,
    re.VERBOSE,
)

_GROUP_KIND = {
    "URLLIKE": TokenKind.URLLIKE,
    "EMAILISH": TokenKind.OTHER,
    "MENTION": TokenKind.MENTION,
    "HASHTAG": TokenKind.HASHTAG,
    "NUMBER": TokenKind.NUMBER,
    "WORD": TokenKind.WORD,
    "PUNCT": TokenKind.PUNCT,
}


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into offset-aligned tokens covering every
    non-whitespace character. Deterministic and pure; empty input gives []."""
    tokens: list[Token] = []
    for m in _TOKEN_RE.finditer(text):
        kind = _GROUP_KIND[m.lastgroup]  # type: ignore[index]
        tokens.append(Token(span=Span(m.start(), m.end()), text=m.group(),
                            kind=kind))
    return tokens


def tokens_overlapping(tokens: Sequence[Token], span: Span) -> list[Token]:
    """Return every token whose span intersects ``span``.

    Tokens must come from :func:`tokenize` on the same text. A structurally
    invalid span is rejected as a malformed annotation.
    """
    if not isinstance(span, Span):
        raise DataError(f"not a span: {span!r}")
    return [t for t in tokens if t.span.intersects(span)]


def token_indices_overlapping(tokens: Sequence[Token], span: Span) -> set[int]:
    """Indices into ``tokens`` of the tokens intersecting ``span``."""
    return {i for i, t in enumerate(tokens) if t.span.intersects(span)}
