import pytest

from harness import AdapterProc


@pytest.fixture
def lexicon_adapter():
    adapter = AdapterProc("--backend", "lexicon")
    assert adapter.banner == {"ready": True, "scheme": "lexicon"}
    yield adapter
    assert adapter.close() == 0
