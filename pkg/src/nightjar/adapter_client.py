"""Client side of the recognizer adapter protocol.

An adapter is a subprocess speaking newline-delimited JSON over stdio:
it prints a ready banner, then answers each request line
``{"id": ..., "text": ...}`` with exactly one response line
``{"id": ..., "entities": [{"start", "end", "label"}, ...]}``.
"""
from __future__ import annotations

import json
import select
import subprocess
from typing import Any, Sequence

from .model import AdapterError


class AdapterClient:
    """Owns one adapter subprocess and serializes requests to it."""

    def __init__(self, name: str, command: Sequence[str],
                 timeout: float = 30.0):
        self.name = name
        self.command = tuple(command)
        self.timeout = timeout
        self.scheme: str | None = None
        self._buf = b""
        try:
            self._proc = subprocess.Popen(
                self.command, stdin=subprocess.PIPE, stdout=subprocess.PIPE)
        except OSError as exc:
            raise AdapterError(
                f"recognizer {name!r}: cannot start adapter "
                f"{' '.join(self.command)}: {exc}") from exc
        banner = self._read_json_line()
        if not banner.get("ready"):
            self.close()
            raise AdapterError(
                f"recognizer {name!r}: adapter refused to start: "
                f"{banner.get('error', banner)}")
        self.scheme = banner.get("scheme")

    def annotate(self, request_id: str, text: str) -> list[dict[str, Any]]:
        """One request/response round trip; returns the raw entity dicts."""
        proc = self._proc
        if proc.poll() is not None:
            raise AdapterError(
                f"recognizer {self.name!r}: adapter exited with code "
                f"{proc.returncode}")
        line = json.dumps({"id": request_id, "text": text},
                          ensure_ascii=False) + "\n"
        try:
            proc.stdin.write(line.encode("utf-8"))
            proc.stdin.flush()
        except (BrokenPipeError, OSError) as exc:
            raise AdapterError(
                f"recognizer {self.name!r}: adapter unreachable: {exc}") from exc
        reply = self._read_json_line()
        if reply.get("id") != request_id:
            raise AdapterError(
                f"recognizer {self.name!r}: response id {reply.get('id')!r} "
                f"does not match request id {request_id!r}")
        if "error" in reply:
            raise AdapterError(
                f"recognizer {self.name!r}: adapter error for tweet "
                f"{request_id}: {reply['error']}")
        entities = reply.get("entities")
        if not isinstance(entities, list):
            raise AdapterError(
                f"recognizer {self.name!r}: response has no entities list: "
                f"{reply!r}")
        return entities

    def _read_json_line(self) -> dict[str, Any]:
        raw = self._read_line()
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise AdapterError(
                f"recognizer {self.name!r}: malformed adapter output: "
                f"{raw!r}") from exc
        if not isinstance(obj, dict):
            raise AdapterError(
                f"recognizer {self.name!r}: malformed adapter output: "
                f"{raw!r}")
        return obj

    def _read_line(self) -> str:
        stdout = self._proc.stdout
        while b"\n" not in self._buf:
            ready, _, _ = select.select([stdout], [], [], self.timeout)
            if not ready:
                raise AdapterError(
                    f"recognizer {self.name!r}: adapter timed out after "
                    f"{self.timeout}s")
            chunk = stdout.read1(65536)
            if not chunk:
                raise AdapterError(
                    f"recognizer {self.name!r}: adapter closed its output "
                    f"stream")
            self._buf += chunk
        line, self._buf = self._buf.split(b"\n", 1)
        return line.decode("utf-8")

    def close(self) -> None:
        proc = getattr(self, "_proc", None)
        if proc is None:
            return
        for stream in (proc.stdin, proc.stdout):
            if stream:
                try:
                    stream.close()
                except OSError:
                    pass
        if proc.poll() is None:
            proc.terminate()
            try:
                proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.wait()

    def __enter__(self) -> "AdapterClient":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()
