"""Shared domain types and the label taxonomy used across the toolkit."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class NightjarError(Exception):
    """Base for all toolkit errors."""


class DataError(NightjarError):
    """Malformed or inconsistent input data (corpora, annotations, spans)."""


class ConfigError(NightjarError):
    """Invalid configuration: unknown names, bad values, empty pools."""


class AdapterError(NightjarError):
    """External recognizer adapter failed: unreachable, timed out, or
    emitted output that violates the wire protocol."""


class EntityLabel(str, Enum):
    """Closed set of labels a detection or gold annotation can carry."""

    URL = "URL"
    USERNAME = "USERNAME"
    PHONE = "PHONE"
    EMAIL = "EMAIL"
    ID_NUMBER = "ID_NUMBER"
    PERSON = "PERSON"
    ORG = "ORG"
    GROUP = "GROUP"
    CITY = "CITY"
    STATE = "STATE"
    COUNTRY = "COUNTRY"
    LOCATION = "LOCATION"
    ZIP = "ZIP"

    @classmethod
    def parse(cls, name: str) -> "EntityLabel":
        try:
            return cls[name]
        except KeyError:
            raise DataError(f"unknown entity label: {name!r}") from None


# Labels found by pattern matching and deleted or replaced with placeholders.
REMOVAL_CLASS = frozenset({
    EntityLabel.URL,
    EntityLabel.USERNAME,
    EntityLabel.PHONE,
    EntityLabel.EMAIL,
    EntityLabel.ID_NUMBER,
    EntityLabel.ZIP,
})

# Labels found by named-entity recognition and synthetically replaced.
ENTITY_CLASS = frozenset({
    EntityLabel.PERSON,
    EntityLabel.ORG,
    EntityLabel.GROUP,
    EntityLabel.CITY,
    EntityLabel.STATE,
    EntityLabel.COUNTRY,
    EntityLabel.LOCATION,
})


def label_class(label: EntityLabel) -> str:
    """Return ``"removal"`` or ``"entity"`` for the given label."""
    return "removal" if label in REMOVAL_CLASS else "entity"


# Canonical display order for reports; removal/entity interleaving mirrors
# the order results are conventionally presented in.
LABEL_ORDER = (
    EntityLabel.URL,
    EntityLabel.USERNAME,
    EntityLabel.PERSON,
    EntityLabel.ORG,
    EntityLabel.GROUP,
    EntityLabel.CITY,
    EntityLabel.STATE,
    EntityLabel.COUNTRY,
    EntityLabel.LOCATION,
    EntityLabel.PHONE,
    EntityLabel.EMAIL,
    EntityLabel.ID_NUMBER,
    EntityLabel.ZIP,
)


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open character interval; offsets count Unicode scalar values."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.start >= self.end:
            raise DataError(f"invalid span [{self.start}, {self.end})")

    def __len__(self) -> int:
        return self.end - self.start

    def intersects(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end


def check_span(span: Span, text: str, context: str = "") -> None:
    """Raise DataError unless ``span`` lies inside ``text``."""
    if span.end > len(text):
        where = f" ({context})" if context else ""
        raise DataError(
            f"span [{span.start}, {span.end}) exceeds text of length "
            f"{len(text)}{where}"
        )


@dataclass(frozen=True, slots=True)
class Tweet:
    """One post: the unit of processing.

    ``author_verified`` is the only author metadata the pipeline consults;
    it gates phone and email removal.
    """

    id: str
    text: str
    author_verified: bool = False
    lang: str | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise DataError("tweet id must be non-empty")


@dataclass(frozen=True, slots=True)
class Detection:
    """A labeled character span found in one tweet's text.

    ``surface`` always equals the covered substring; ``source`` names the
    detector or recognizer that produced it.
    """

    span: Span
    label: EntityLabel
    source: str
    surface: str

    def verify(self, text: str) -> None:
        check_span(self.span, text)
        actual = text[self.span.start:self.span.end]
        if actual != self.surface:
            raise DataError(
                f"detection surface {self.surface!r} does not match text "
                f"slice {actual!r} at [{self.span.start}, {self.span.end})"
            )


def make_detection(text: str, start: int, end: int, label: EntityLabel,
                   source: str) -> Detection:
    span = Span(start, end)
    check_span(span, text)
    return Detection(span=span, label=label, source=source,
                     surface=text[start:end])


@dataclass(frozen=True, slots=True)
class AnnotatedTweet:
    """A tweet plus its gold-standard labeled spans (standoff)."""

    tweet: Tweet
    gold: tuple[tuple[Span, EntityLabel], ...] = ()

    def __post_init__(self) -> None:
        for span, label in self.gold:
            check_span(span, self.tweet.text, context=f"tweet {self.tweet.id}")
        by_label: dict[EntityLabel, list[Span]] = {}
        for span, label in self.gold:
            for other in by_label.setdefault(label, []):
                if span.intersects(other):
                    raise DataError(
                        f"overlapping gold {label.value} spans in tweet "
                        f"{self.tweet.id}"
                    )
            by_label[label].append(span)


@dataclass(frozen=True, slots=True)
class Edit:
    """One applied replacement: ``span`` in the original text was replaced
    by ``replacement``."""

    span: Span
    label: EntityLabel
    replacement: str
    source: str


@dataclass(frozen=True, slots=True)
class MaskedTweet:
    """De-identified text plus the edits that produced it.

    Applying ``edits`` to ``original_text`` right-to-left reproduces
    ``masked_text`` exactly; edits are non-overlapping and sorted by start.
    """

    tweet_id: str
    original_text: str
    masked_text: str
    edits: tuple[Edit, ...] = field(default_factory=tuple)

    def replay(self) -> str:
        """Re-apply the edits to the original text."""
        out = self.original_text
        for edit in reversed(self.edits):
            out = out[:edit.span.start] + edit.replacement + out[edit.span.end:]
        return out
