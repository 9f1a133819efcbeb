"""Shared fixtures."""
import pytest

from janus.config import Config, get_config, set_config


@pytest.fixture(autouse=True)
def default_config():
    """Every test starts from the default config and leaves it restored."""
    previous = get_config()
    set_config(Config())
    yield
    set_config(previous)
