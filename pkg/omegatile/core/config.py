"""
Engine configuration: search budgets and enumeration bounds
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

from .errors import InvariantViolation

PROJECT_ROOT = Path(__file__).parent.parent.parent

# Load environment variables from project root (system env vars win)
load_dotenv(PROJECT_ROOT / '.env', override=False)

DEFAULT_SEARCH_NODE_BUDGET = 10 ** 7
DEFAULT_TRACE_LIMIT = 10 ** 6
DEFAULT_ENUMERATION_BOUND = 2 ** 24


class EngineConfig(BaseModel):
    """Limits shared by searches, simulations and enumerations"""
    model_config = ConfigDict(frozen=True)

    search_node_budget: int = Field(DEFAULT_SEARCH_NODE_BUDGET, ge=1, description="Max search nodes per bounded search")
    trace_limit: int = Field(DEFAULT_TRACE_LIMIT, ge=1, description="Max live traces per bounded machine run")
    enumeration_bound: int = Field(DEFAULT_ENUMERATION_BOUND, ge=1, description="Max materialized squares")
    data_path: str = Field(str(PROJECT_ROOT / "data"), description="Directory holding sample machines, systems and pictures")


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw.strip().strip('"'))
    except ValueError:
        raise InvariantViolation(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise InvariantViolation(f"{name} must be positive, got {value}")
    return value


def get_config(search_node_budget: Optional[int] = None,
               trace_limit: Optional[int] = None,
               enumeration_bound: Optional[int] = None) -> EngineConfig:
    """
    Build the effective configuration

    Explicit arguments win over OMEGATILE_* environment variables,
    which win over the built-in defaults.
    """
    if search_node_budget is None:
        search_node_budget = _int_env("OMEGATILE_BUDGET", DEFAULT_SEARCH_NODE_BUDGET)
    if trace_limit is None:
        trace_limit = _int_env("OMEGATILE_TRACE_LIMIT", DEFAULT_TRACE_LIMIT)
    if enumeration_bound is None:
        enumeration_bound = _int_env("OMEGATILE_ENUMERATION_BOUND", DEFAULT_ENUMERATION_BOUND)
    return EngineConfig(
        search_node_budget=search_node_budget,
        trace_limit=trace_limit,
        enumeration_bound=enumeration_bound,
        data_path=(os.getenv("OMEGATILE_DATA_PATH") or str(PROJECT_ROOT / "data")).strip('"'),
    )
