"""
Tests for the engine configuration
"""

import pytest
from pydantic import ValidationError

from omegatile.core.config import DEFAULT_SEARCH_NODE_BUDGET, get_config
from omegatile.core.errors import InvariantViolation


def test_defaults(monkeypatch):
    monkeypatch.delenv("OMEGATILE_BUDGET", raising=False)
    config = get_config()
    assert config.search_node_budget == DEFAULT_SEARCH_NODE_BUDGET
    assert config.data_path.endswith("data")


def test_environment_overrides_defaults(monkeypatch):
    monkeypatch.setenv("OMEGATILE_BUDGET", "500")
    monkeypatch.setenv("OMEGATILE_TRACE_LIMIT", '"40"')
    config = get_config()
    assert config.search_node_budget == 500
    assert config.trace_limit == 40


def test_arguments_override_environment(monkeypatch):
    monkeypatch.setenv("OMEGATILE_BUDGET", "500")
    assert get_config(search_node_budget=7).search_node_budget == 7


@pytest.mark.parametrize("raw", ["many", "0", "-3"])
def test_bad_environment_values(monkeypatch, raw):
    monkeypatch.setenv("OMEGATILE_ENUMERATION_BOUND", raw)
    with pytest.raises(InvariantViolation):
        get_config()


def test_zero_argument_is_not_replaced_by_the_environment(monkeypatch):
    monkeypatch.setenv("OMEGATILE_BUDGET", "500")
    with pytest.raises(ValidationError):
        get_config(search_node_budget=0)
