import json
import subprocess
import sys


class AdapterProc:
    """Line-by-line (ping-pong) harness around an adapter subprocess."""

    def __init__(self, *args: str):
        self.proc = subprocess.Popen(
            [sys.executable, "-m", "nightjar_ner_adapter", *args],
            stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True,
            encoding="utf-8")
        self.banner = json.loads(self._readline())

    def _readline(self) -> str:
        line = self.proc.stdout.readline()
        if not line:
            raise AssertionError("adapter closed its output stream")
        return line

    def send_raw(self, raw: str) -> dict:
        self.proc.stdin.write(raw + "\n")
        self.proc.stdin.flush()
        return json.loads(self._readline())

    def request(self, request_id, text) -> dict:
        return self.send_raw(json.dumps({"id": request_id, "text": text},
                                        ensure_ascii=False))

    def close(self) -> int:
        self.proc.stdin.close()
        self.proc.stdout.close()
        return self.proc.wait(timeout=10)
