"""
Colorank IO - Text formats for trees, models, conditions, families and scenes
"""

from .formats import (
    content_lines,
    detect_kind,
    dump_basic,
    dump_coloring,
    dump_condition,
    dump_family,
    dump_model,
    dump_oracle,
    dump_rank_report,
    dump_ranked,
    dump_scene,
    dump_tree,
    parse_approx_key,
    parse_atomic_type,
    parse_basic,
    parse_coloring,
    parse_condition,
    parse_family,
    parse_model,
    parse_oracle,
    parse_rank_report,
    parse_ranked,
    parse_scene,
    parse_tree,
    read_text,
    write_atomic,
)

__all__ = [
    "content_lines",
    "detect_kind",
    "dump_basic",
    "dump_coloring",
    "dump_condition",
    "dump_family",
    "dump_model",
    "dump_oracle",
    "dump_rank_report",
    "dump_ranked",
    "dump_scene",
    "dump_tree",
    "parse_approx_key",
    "parse_atomic_type",
    "parse_basic",
    "parse_coloring",
    "parse_condition",
    "parse_family",
    "parse_model",
    "parse_oracle",
    "parse_rank_report",
    "parse_ranked",
    "parse_scene",
    "parse_tree",
    "read_text",
    "write_atomic",
]
