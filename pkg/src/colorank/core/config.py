"""
Colorank Configuration - YAML defaults validated with pydantic
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import yaml
from pydantic import BaseModel, Field, field_validator

from .errors import ParseError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "colorank.yml"
OUT_DIR_ENV = "COLORANK_OUT_DIR"


class Budgets(BaseModel):
    approx_cap: int = Field(6, description="Largest |v| of an enumerated approximation")
    approx_budget: int = Field(1_000_000, description="Approximation count guard")
    node_budget: int = Field(2_000_000, description="Universal tree node guard")
    max_height: int = Field(64, description="Universal tree height guard")

    @field_validator("approx_cap", "approx_budget", "node_budget", "max_height")
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("budgets must be positive")
        return v


class TemplateBounds(BaseModel):
    max_roots: int = Field(2, description="Largest level-0 support of a copied template")
    max_colors: int = Field(1, description="Largest color count of a copied template")
    max_splits: int = Field(1, description="Largest number of roots with two children")
    max_level: int = Field(3, description="Last level receiving template copies")
    enumeration_budget: int = Field(200_000, description="Raw template guard")

    @field_validator("max_roots")
    @classmethod
    def validate_roots(cls, v):
        if v < 1:
            raise ValueError("templates need at least one root")
        return v

    @field_validator("max_colors", "max_splits", "max_level", "enumeration_budget")
    @classmethod
    def validate_non_negative(cls, v):
        if v < 0:
            raise ValueError("template bounds must be non-negative")
        return v


class GeometryConfig(BaseModel):
    sample_cap: int = Field(50_000, description="Exhaustive general-position check limit")
    mmax: int = Field(4, description="Number of realized closed layers")


class ForcingConfig(BaseModel):
    theta: int = Field(2, description="Finiteness threshold of the model rank")
    depth: int = Field(5, description="Depth of the generic family")
    subset_cap: int = Field(4, description="Largest subset checked for domination")

    @field_validator("theta")
    @classmethod
    def validate_theta(cls, v):
        if v < 2:
            raise ValueError("theta must be at least 2")
        return v


class ColorankConfig(BaseModel):
    budgets: Budgets = Field(default_factory=Budgets)
    templates: TemplateBounds = Field(default_factory=TemplateBounds)
    geometry: GeometryConfig = Field(default_factory=GeometryConfig)
    forcing: ForcingConfig = Field(default_factory=ForcingConfig)


def validate_config_yaml(yaml_content: str) -> Tuple[bool, Optional[ColorankConfig], Optional[str]]:
    """Validate configuration YAML content against the schema"""
    try:
        data = yaml.safe_load(yaml_content) or {}
        if not isinstance(data, dict):
            return False, None, "Configuration must be a mapping"
        return True, ColorankConfig(**data), None
    except yaml.YAMLError as e:
        return False, None, f"YAML parsing error: {str(e)}"
    except Exception as e:
        return False, None, f"Schema validation error: {str(e)}"


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> ColorankConfig:
    """Load the YAML configuration and apply section-level overrides.

    Args:
        path: Configuration file; the packaged defaults when omitted
        overrides: Mapping of section name to field overrides; None values are ignored

    Returns:
        Validated configuration
    """
    config_path = Path(path) if path else DEFAULT_CONFIG_PATH
    if config_path.exists():
        ok, config, error = validate_config_yaml(config_path.read_text())
        if not ok:
            raise ParseError(error or "invalid configuration", source=str(config_path))
        logger.debug(f"Loaded configuration from {config_path}")
    else:
        if path:
            raise ParseError("configuration file not found", source=str(config_path))
        config = ColorankConfig()

    if overrides:
        data = config.model_dump()
        for section, values in overrides.items():
            for key, value in values.items():
                if value is not None:
                    data[section][key] = value
        config = ColorankConfig(**data)
    return config


def resolve_output_path(out: str) -> Path:
    """Apply the output directory override to relative paths"""
    target = Path(out)
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir and not target.is_absolute():
        target = Path(out_dir) / target
    return target
