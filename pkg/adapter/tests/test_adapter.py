import json
import subprocess
import sys

import pytest

from harness import AdapterProc

WORKED_SENTENCE = "Shout out to Katie for making this event happen"


def _spacy_model_available() -> bool:
    try:
        import spacy
    except ImportError:
        return False
    for name in ("en_core_web_sm", "en_core_web_md", "en_core_web_lg"):
        try:
            spacy.load(name)
            return True
        except OSError:
            continue
    return False


def _request_texts():
    texts = [
        WORKED_SENTENCE,
        "",
        "no entities in this line at all",
        "Katie met Brian in Paris",
        "the French delegation visited Baltimore",
        "covfefe @Katie #Katie t.co/abc",
        "Emoji ahead \U0001f426 then Katie again",
        "ünïcode Katie café",
        "A" * 300,
        "Acme Corporation hired Maria from Tokyo",
    ]
    return (texts * 5)[:50]


def test_protocol_conformance_fifty_requests(lexicon_adapter):
    """One well-formed, id-matching response per request; all spans valid."""
    for i, text in enumerate(_request_texts()):
        request_id = f"req{i:03d}"
        reply = lexicon_adapter.request(request_id, text)
        assert reply["id"] == request_id
        assert "error" not in reply
        assert isinstance(reply["entities"], list)
        for ent in reply["entities"]:
            assert set(ent) == {"start", "end", "label"}
            assert isinstance(ent["start"], int)
            assert isinstance(ent["end"], int)
            assert 0 <= ent["start"] < ent["end"] <= len(text)
            assert isinstance(ent["label"], str) and ent["label"]


def test_worked_sentence_with_bundled_fallback(lexicon_adapter):
    reply = lexicon_adapter.request("1", WORKED_SENTENCE)
    spans = [(e["start"], e["end"], e["label"]) for e in reply["entities"]]
    assert (13, 18, "PERSON") in spans


def test_empty_text_yields_no_entities(lexicon_adapter):
    assert lexicon_adapter.request("2", "")["entities"] == []


def test_malformed_request_keeps_loop_alive(lexicon_adapter):
    reply = lexicon_adapter.send_raw("this is not json")
    assert reply["id"] is None
    assert "error" in reply
    reply = lexicon_adapter.send_raw(json.dumps({"id": "3"}))  # no text
    assert "error" in reply
    reply = lexicon_adapter.request("4", "Katie here")
    assert reply["id"] == "4"
    assert reply["entities"]


def test_one_response_per_line_in_order(lexicon_adapter):
    ids = [f"seq{i}" for i in range(10)]
    for request_id in ids:
        reply = lexicon_adapter.request(request_id, "Katie in Paris")
        assert reply["id"] == request_id


def test_multiword_and_person_extension(lexicon_adapter):
    text = "Katie Smith joined Acme Corporation"
    reply = lexicon_adapter.request("5", text)
    spans = {(e["start"], e["end"], e["label"]) for e in reply["entities"]}
    assert (0, 11, "PERSON") in spans          # first-name rule extends
    assert (19, 35, "ORG") in spans            # multiword lexicon entry


@pytest.mark.skipif(_spacy_model_available(),
                    reason="spacy model installed; load cannot fail")
def test_model_load_failure_banner_and_exit():
    proc = subprocess.Popen(
        [sys.executable, "-m", "nightjar_ner_adapter", "--backend", "spacy"],
        stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True)
    banner = json.loads(proc.stdout.readline())
    assert banner["ready"] is False
    assert banner["error"]
    proc.stdin.close()
    assert proc.wait(timeout=10) != 0


@pytest.mark.skipif(not _spacy_model_available(),
                    reason="no stock English NER model installable in this "
                           "environment: the package mirror carries no "
                           "spacy/nltk/stanza/flair and model hubs are "
                           "unreachable (see notes/decisions.md)")
def test_worked_sentence_with_stock_model():
    adapter = AdapterProc("--backend", "spacy")
    assert adapter.banner["ready"] is True
    try:
        reply = adapter.request("1", WORKED_SENTENCE)
        hits = [e for e in reply["entities"]
                if e["label"] == "PERSON" and e["start"] <= 13
                and e["end"] >= 18]
        assert hits, reply["entities"]
    finally:
        adapter.close()
