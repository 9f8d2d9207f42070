"""NDJSON-over-stdio request loop.

Wire contract, bit-exact: UTF-8, one JSON object per line, no
pretty-printing. The first line out is the banner
``{"ready": true, "scheme": ...}`` (or ``{"ready": false, "error": ...}``
followed by a nonzero exit when the model cannot load). Each request line
``{"id", "text"}`` gets exactly one response line, in order:
``{"id", "entities": [{"start", "end", "label"}, ...]}`` on success,
``{"id", "error": ...}`` on a per-request failure. Offsets are Unicode
scalar-value indices into the request text.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import IO

from .backends import BackendUnavailable, load_backend


def _emit(stream: IO[str], obj: dict) -> None:
    stream.write(json.dumps(obj, ensure_ascii=False) + "\n")
    stream.flush()


def serve(backend_name: str = "auto", model: str | None = None,
          stdin: IO[str] | None = None, stdout: IO[str] | None = None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout

    try:
        backend = load_backend(backend_name, model=model)
    except BackendUnavailable as exc:
        _emit(stdout, {"ready": False, "error": str(exc)})
        return 1
    _emit(stdout, {"ready": True, "scheme": backend.scheme})

    for line in stdin:
        if not line.strip():
            continue
        request_id = None
        try:
            request = json.loads(line)
            request_id = request["id"]
            text = request["text"]
            if not isinstance(text, str):
                raise TypeError("text must be a string")
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            _emit(stdout, {"id": request_id,
                           "error": f"malformed request: {exc}"})
            continue
        try:
            entities = backend.entities(text)
        except Exception as exc:  # keep serving after a bad request
            _emit(stdout, {"id": request_id, "error": str(exc)})
            continue
        _emit(stdout, {"id": request_id, "entities": entities})
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nightjar-ner-adapter",
        description="Serve an English NER model over stdio NDJSON.")
    parser.add_argument("--backend", default="auto",
                        choices=["auto", "spacy", "transformers", "lexicon"])
    parser.add_argument("--model", default=None,
                        help="Backend-specific model name.")
    args = parser.parse_args(argv)
    return serve(args.backend, model=args.model)


if __name__ == "__main__":
    sys.exit(main())
