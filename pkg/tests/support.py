import sys
from pathlib import Path

FAKE_ADAPTER = Path(__file__).parent / "fake_adapter.py"


def fake_adapter_cmd(mode: str = "ok") -> tuple[str, ...]:
    cmd = (sys.executable, str(FAKE_ADAPTER))
    return cmd if mode == "ok" else cmd + (mode,)
