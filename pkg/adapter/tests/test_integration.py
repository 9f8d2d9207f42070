"""Drive the adapter through the main pipeline's CLI, its public interface."""
import json
import shutil
import subprocess
import sys

import pytest

pytestmark = pytest.mark.skipif(shutil.which("nightjar") is None,
                                reason="nightjar CLI not installed")


def test_detect_via_cli_with_real_adapter(tmp_path):
    tweets = tmp_path / "tweets.jsonl"
    tweets.write_text(json.dumps(
        {"id": "1", "text": "Shout out to Katie for making this event happen"})
        + "\n", encoding="utf-8")
    out = tmp_path / "det.jsonl"
    adapter_cmd = f"{sys.executable} -m nightjar_ner_adapter --backend auto"
    result = subprocess.run(
        ["nightjar", "detect", "--input", str(tweets),
         "--output", str(out), "--recognizers", f"external:{adapter_cmd}"],
        capture_output=True, text=True, timeout=120)
    assert result.returncode == 0, result.stderr
    (record,) = [json.loads(line) for line in
                 out.read_text(encoding="utf-8").splitlines()]
    person = [s for s in record["spans"] if s["label"] == "PERSON"]
    assert [(s["start"], s["end"]) for s in person] == [(13, 18)]
