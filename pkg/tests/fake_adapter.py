#!/usr/bin/env python3
"""Scripted recognizer adapter for tests: speaks the NDJSON stdio protocol
from a tiny hardcoded lexicon, with failure modes selectable via argv.

Modes: ok (default), badspan, garbage, noready, sleep.
"""
import json
import sys
import time

LEXICON = {
    "Katie": "PERSON",
    "Brian": "PERSON",
    "Alice": "PERSON",
    "Paris": "GPE",
    "London": "GPE",
    "Acme": "ORG",
    "French": "NORP",
    "Maryland": "STATE_OR_PROVINCE",
}


def find_entities(text):
    entities = []
    for surface, label in LEXICON.items():
        start = 0
        while True:
            idx = text.find(surface, start)
            if idx < 0:
                break
            entities.append({"start": idx, "end": idx + len(surface),
                             "label": label})
            start = idx + len(surface)
    entities.sort(key=lambda e: e["start"])
    return entities


def emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def main():
    mode = sys.argv[1] if len(sys.argv) > 1 else "ok"
    if mode == "noready":
        emit({"ready": False, "error": "model load failed"})
        return 1
    emit({"ready": True, "scheme": "test-lexicon"})
    for line in sys.stdin:
        if not line.strip():
            continue
        if mode == "sleep":
            time.sleep(10)
        if mode == "garbage":
            sys.stdout.write("this is not json\n")
            sys.stdout.flush()
            continue
        try:
            request = json.loads(line)
            request_id = request["id"]
            text = request["text"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            emit({"id": None, "error": f"malformed request: {exc}"})
            continue
        if mode == "badspan":
            emit({"id": request_id,
                  "entities": [{"start": 0, "end": len(text) + 5,
                                "label": "PERSON"}]})
            continue
        emit({"id": request_id, "entities": find_entities(text)})
    return 0


if __name__ == "__main__":
    sys.exit(main())
