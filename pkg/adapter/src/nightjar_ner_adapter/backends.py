"""Model backends for the adapter.

``spacy`` and ``transformers`` wrap real statistical models when those
packages (and their weights) are installed. ``lexicon`` is a self-contained
capitalization-plus-wordlist fallback so the wire protocol always has a
backend to serve; it makes no claim to model-grade quality.

Every backend returns entities as ``{"start", "end", "label"}`` dicts with
offsets into the given text (Unicode scalar values) and leaves its label
scheme unmapped; the consuming pipeline owns the mapping.
"""
from __future__ import annotations

import json
import re
from importlib import resources


class BackendUnavailable(Exception):
    pass


class SpacyBackend:
    """English spaCy pipeline (PERSON/ORG/GPE/NORP/... scheme)."""

    scheme = "spacy"

    def __init__(self, model: str | None = None):
        try:
            import spacy
        except ImportError as exc:
            raise BackendUnavailable(f"spacy not installed: {exc}") from exc
        names = [model] if model else ["en_core_web_sm", "en_core_web_md",
                                       "en_core_web_lg"]
        self._nlp = None
        errors = []
        for name in names:
            try:
                self._nlp = spacy.load(name)
                break
            except OSError as exc:
                errors.append(str(exc))
        if self._nlp is None:
            raise BackendUnavailable(
                f"no spaCy English model loadable: {'; '.join(errors)}")

    def entities(self, text: str) -> list[dict]:
        doc = self._nlp(text)
        return [{"start": ent.start_char, "end": ent.end_char,
                 "label": ent.label_} for ent in doc.ents]


class TransformersBackend:
    """HuggingFace token-classification pipeline (usually PER/ORG/LOC/MISC)."""

    scheme = "conll"

    def __init__(self, model: str | None = None):
        try:
            from transformers import pipeline
        except ImportError as exc:
            raise BackendUnavailable(
                f"transformers not installed: {exc}") from exc
        try:
            self._pipe = pipeline("token-classification",
                                  model=model or "dslim/bert-base-NER",
                                  aggregation_strategy="simple")
        except Exception as exc:  # model download/load can fail many ways
            raise BackendUnavailable(
                f"cannot load token-classification model: {exc}") from exc

    def entities(self, text: str) -> list[dict]:
        if not text:
            return []
        out = []
        for ent in self._pipe(text):
            start, end = int(ent["start"]), int(ent["end"])
            if 0 <= start < end <= len(text):
                out.append({"start": start, "end": end,
                            "label": str(ent["entity_group"])})
        return out


_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'’-]*")


class LexiconBackend:
    """Bundled fallback: wordlist matches plus a first-name rule that
    extends over following capitalized words. Emits spaCy-style labels."""

    scheme = "lexicon"

    def __init__(self, model: str | None = None):
        raw = resources.files("nightjar_ner_adapter").joinpath(
            "data/lexicon.json").read_text("utf-8")
        data = json.loads(raw)
        self._first_names = set(data["PERSON"])
        self._phrases: dict[str, str] = {}
        for label in ("GPE", "NORP", "ORG"):
            for entry in data[label]:
                self._phrases[entry] = label
        self._max_words = max((e.count(" ") + 1 for e in self._phrases), default=1)

    def entities(self, text: str) -> list[dict]:
        words = [(m.start(), m.end(), m.group())
                 for m in _WORD_RE.finditer(text)
                 if m.start() == 0 or text[m.start() - 1] not in "@#"]
        out: list[dict] = []
        i = 0
        while i < len(words):
            match = self._match_phrase(words, i)
            if match is not None:
                start, end, label, consumed = match
                out.append({"start": start, "end": end, "label": label})
                i += consumed
                continue
            start_, end_, word = words[i]
            if word in self._first_names:
                j = i + 1
                while (j < len(words) and j - i < 3
                       and words[j][2][0].isupper()
                       and self._is_adjacent(text, words[j - 1], words[j])):
                    j += 1
                out.append({"start": start_, "end": words[j - 1][1],
                            "label": "PERSON"})
                i = j
                continue
            i += 1
        return out

    def _match_phrase(self, words, i):
        for n in range(min(self._max_words, len(words) - i), 0, -1):
            candidate = " ".join(w[2] for w in words[i:i + n])
            label = self._phrases.get(candidate)
            if label is not None:
                return words[i][0], words[i + n - 1][1], label, n
        return None

    @staticmethod
    def _is_adjacent(text, prev, cur) -> bool:
        return text[prev[1]:cur[0]] == " "


_BACKENDS = {
    "spacy": SpacyBackend,
    "transformers": TransformersBackend,
    "lexicon": LexiconBackend,
}


def load_backend(name: str = "auto", model: str | None = None):
    """Instantiate a backend; ``auto`` tries the real models first and
    falls back to the bundled lexicon."""
    if name == "auto":
        for candidate in ("spacy", "transformers", "lexicon"):
            try:
                return _BACKENDS[candidate](model=model)
            except BackendUnavailable:
                continue
        raise BackendUnavailable("no backend available")
    if name not in _BACKENDS:
        raise BackendUnavailable(
            f"unknown backend {name!r} (choose from "
            f"{', '.join(sorted(_BACKENDS))}, auto)")
    return _BACKENDS[name](model=model)
