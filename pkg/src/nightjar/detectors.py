"""Pattern-based detectors for the removal-class labels.

Each detector emits labeled character spans; :func:`run_regex_detectors`
composes them with a fixed precedence so overlapping pattern families never
double-claim text. Phone and email detection is gated off for verified
authors; all other detectors ignore the verified flag.
"""
from __future__ import annotations

import json
import re
from functools import lru_cache
from importlib import resources

from .model import Detection, EntityLabel, Tweet, make_detection

# Tokens of length >= ID_MIN_LENGTH containing at least ID_MIN_LETTERS
# letters and ID_MIN_DIGITS digits count as identification numbers. The
# threshold excludes ordinary words-with-digits; override via configuration.
ID_MIN_LENGTH = 8
ID_MIN_LETTERS = 2
ID_MIN_DIGITS = 2

# Digit-count bounds for phone-shaped runs.
PHONE_MIN_DIGITS = 7
PHONE_MAX_DIGITS = 15

URL_RE = re.compile(
    r"""(?:https?://[^\s<>"']+
        | www\.[^\s<>"']+
        | (?<![\w@./-])[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)+/[^\s<>"']*
        )""",
    re.VERBOSE,
)
_URL_TRAILING = ".,!?;:)]}'\""

USERNAME_RE = re.compile(r"(?<![\w@])@[A-Za-z0-9_]{1,15}(?![A-Za-z0-9_])")

EMAIL_RE = re.compile(
    r"[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}"
)

PHONE_RE = re.compile(
    r"""(?<![\w@./-])
        (?:\+\d{1,3}[ .-]?)?          # country prefix
        (?:\(\d{1,4}\)[ .-]?)?        # parenthesized area code
        \d(?:[ .-]?\d){5,14}
        (?![\w-])""",
    re.VERBOSE,
)
# A standalone five-four digit pair is a ZIP+4 code, not a phone number.
_ZIP_PLUS4_SHAPE = re.compile(r"\d{5}-\d{4}$")

ID_RUN_RE = re.compile(r"(?<![\w@#])[A-Za-z0-9]{%d,}(?![A-Za-z0-9])" % ID_MIN_LENGTH)

ZIP_RE = re.compile(r"(?<![\w/.-])\d{5}(?:-\d{4})?(?![\w-])")

_WORD_RE = re.compile(r"[A-Za-z]+")

# Two-letter US state and district abbreviations, uppercase only: matching
# them case-insensitively would turn common words (in, or, me, hi) into
# location cues.
STATE_ABBREVS = frozenset(
    "AL AK AZ AR CA CO CT DE FL GA HI ID IL IN IA KS KY LA ME MD MA MI MN MS "
    "MO MT NE NV NH NJ NM NY NC ND OH OK OR PA RI SC SD TN TX UT VT VA WA WV "
    "WI WY DC".split()
)

_ZIP_CUE_EXTRAS = frozenset({"zip", "Zip", "ZIP", "zipcode", "Zipcode", "ZIPCODE"})


@lru_cache(maxsize=1)
def default_zip_cues() -> frozenset[str]:
    """Location cue words for ZIP detection: state abbreviations plus the
    individual words of the bundled city/state gazetteer entries."""
    raw = resources.files("nightjar").joinpath("data/gazetteer.json").read_text("utf-8")
    entries = json.loads(raw)
    words: set[str] = set(STATE_ABBREVS) | set(_ZIP_CUE_EXTRAS)
    for label in ("CITY", "STATE"):
        for entry in entries.get(label, ()):
            words.update(entry.split())
    return frozenset(words)


def detect_urls(text: str) -> list[Detection]:
    """One URL detection per maximal URL-shaped run; trailing sentence
    punctuation is not part of the URL."""
    out = []
    for m in URL_RE.finditer(text):
        end = m.end()
        while end > m.start() and text[end - 1] in _URL_TRAILING:
            end -= 1
        if end > m.start():
            out.append(make_detection(text, m.start(), end,
                                      EntityLabel.URL, "regex/url"))
    return out


def detect_usernames(text: str) -> list[Detection]:
    """@-mentions, including the @; the @ inside an email address is not a
    mention."""
    return [
        make_detection(text, m.start(), m.end(), EntityLabel.USERNAME,
                       "regex/username")
        for m in USERNAME_RE.finditer(text)
    ]


def detect_phone_numbers(text: str, author_verified: bool) -> list[Detection]:
    """Phone-shaped digit runs (7 to 15 digits, optional separators and
    country prefix). Verified authors are exempt: returns [] outright."""
    if author_verified:
        return []
    out = []
    for m in PHONE_RE.finditer(text):
        surface = m.group()
        digits = sum(c.isdigit() for c in surface)
        if not (PHONE_MIN_DIGITS <= digits <= PHONE_MAX_DIGITS):
            continue
        if _ZIP_PLUS4_SHAPE.fullmatch(surface):
            continue
        out.append(make_detection(text, m.start(), m.end(),
                                  EntityLabel.PHONE, "regex/phone"))
    return out


def detect_emails(text: str, author_verified: bool) -> list[Detection]:
    """local@domain.tld shapes; verified authors are exempt."""
    if author_verified:
        return []
    return [
        make_detection(text, m.start(), m.end(), EntityLabel.EMAIL,
                       "regex/email")
        for m in EMAIL_RE.finditer(text)
    ]


def _alnum_transitions(s: str) -> int:
    """Number of letter-run/digit-run boundaries inside an alphanumeric
    token. 'A1B2' has 3; a word with a digit tail like 'hello123' has 1."""
    runs = 0
    prev = None
    for c in s:
        cur = c.isdigit()
        if prev is not None and cur != prev:
            runs += 1
        prev = cur
    return runs


def detect_id_numbers(text: str, *, min_length: int = ID_MIN_LENGTH,
                      min_letters: int = ID_MIN_LETTERS,
                      min_digits: int = ID_MIN_DIGITS) -> list[Detection]:
    """Long alphanumeric tokens that genuinely interleave letters and
    digits (at least two letter/digit boundaries), so ordinary
    words-with-digits like 'hello123' stay out.

    Runs inside URL, email, mention, or hashtag shapes are skipped: those
    belong to the more structured pattern.
    """
    claimed: list[tuple[int, int]] = [
        (m.start(), m.end()) for m in URL_RE.finditer(text)
    ]
    claimed += [(m.start(), m.end()) for m in EMAIL_RE.finditer(text)]
    claimed += [(m.start(), m.end()) for m in USERNAME_RE.finditer(text)]

    run_re = (ID_RUN_RE if min_length == ID_MIN_LENGTH else
              re.compile(r"(?<![\w@#])[A-Za-z0-9]{%d,}(?![A-Za-z0-9])" % min_length))
    out = []
    for m in run_re.finditer(text):
        if any(m.start() < e and s < m.end() for s, e in claimed):
            continue
        surface = m.group()
        letters = sum(c.isalpha() for c in surface)
        digits = sum(c.isdigit() for c in surface)
        if (letters >= min_letters and digits >= min_digits
                and _alnum_transitions(surface) >= 2):
            out.append(make_detection(text, m.start(), m.end(),
                                      EntityLabel.ID_NUMBER, "regex/id"))
    return out


def detect_zip_codes(text: str, cues: frozenset[str] | None = None) -> list[Detection]:
    """Standalone 5-digit (optionally ZIP+4) tokens adjacent to a location
    cue word. Bare five-digit numbers with no cue are not ZIP codes.

    A cue counts when it appears among the two word tokens immediately
    before or after the candidate. Cue matching is case-sensitive so that
    lowercase prose ("in", "or", "me") never reads as a state abbreviation.
    """
    if cues is None:
        cues = default_zip_cues()
    words = [(m.start(), m.end(), m.group()) for m in _WORD_RE.finditer(text)]
    out = []
    for m in ZIP_RE.finditer(text):
        before = [w for s, e, w in words if e <= m.start()][-2:]
        after = [w for s, e, w in words if s >= m.end()][:2]
        if any(w in cues for w in before + after):
            out.append(make_detection(text, m.start(), m.end(),
                                      EntityLabel.ZIP, "regex/zip"))
    return out


def run_regex_detectors(tweet: Tweet, *,
                        id_min_length: int = ID_MIN_LENGTH,
                        id_min_letters: int = ID_MIN_LETTERS,
                        id_min_digits: int = ID_MIN_DIGITS,
                        zip_cues: frozenset[str] | None = None
                        ) -> list[Detection]:
    """All five pattern detectors composed, precedence applied, sorted by
    start offset.

    Precedence when patterns overlap: URL > EMAIL > USERNAME > PHONE >
    ID_NUMBER > ZIP. The earlier detector claims the span; later detectors
    skip claimed regions.
    """
    text = tweet.text
    batches = (
        detect_urls(text),
        detect_emails(text, tweet.author_verified),
        detect_usernames(text),
        detect_phone_numbers(text, tweet.author_verified),
        detect_id_numbers(text, min_length=id_min_length,
                          min_letters=id_min_letters,
                          min_digits=id_min_digits),
        detect_zip_codes(text, cues=zip_cues),
    )
    claimed: list[Detection] = []
    for batch in batches:
        for det in batch:
            if not any(det.span.intersects(kept.span) for kept in claimed):
                claimed.append(det)
    claimed.sort(key=lambda d: (d.span.start, d.span.end))
    return claimed
