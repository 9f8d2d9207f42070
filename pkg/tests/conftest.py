import pytest

from support import fake_adapter_cmd


@pytest.fixture
def adapter_cmd():
    return fake_adapter_cmd()
