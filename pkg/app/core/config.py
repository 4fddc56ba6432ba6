"""
Centralized configuration using Pydantic Settings.
All environment variables are validated and typed.
"""
from functools import lru_cache
from typing import Literal

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library and CLI settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="PMLATTICE_",
        case_sensitive=False,
        extra="ignore",
    )

    # ─────────────────────────────────────────────────────────────
    # Logging
    # ─────────────────────────────────────────────────────────────
    log_level: str = "INFO"

    # ─────────────────────────────────────────────────────────────
    # Brute-force oracle
    # ─────────────────────────────────────────────────────────────
    oracle_cap: int = 10000
    facet_cut_samples: int = 20

    # ─────────────────────────────────────────────────────────────
    # Lovász doubling check
    # ─────────────────────────────────────────────────────────────
    doubling_trials: int = 64
    doubling_coefficient_bound: int = 2
    doubling_seed: int = 0

    # ─────────────────────────────────────────────────────────────
    # Facet descent
    # ─────────────────────────────────────────────────────────────
    bvn_probe: Literal["eager", "fallback"] = "eager"

    # ─────────────────────────────────────────────────────────────
    # Test corpus
    # ─────────────────────────────────────────────────────────────
    corpus_random_count: int = 200
    corpus_random_max_n: int = 14
    corpus_seed: int = 7


@lru_cache
def get_settings() -> Settings:
    """Cached settings instance for performance."""
    return Settings()
