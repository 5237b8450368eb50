"""
Colorank Universal - Templates, embeddings and universal ranked trees
"""

from .builder import UniversalTree, build_universal
from .embed import ColoringEmbedding, augment_coloring, coloring_templates, embed_coloring, embed_ranked
from .embedding import (
    Embedding,
    IndexCache,
    extend_template_embedding,
    identity_embedding,
    partial_embeddings,
    validate_embedding,
)
from .template import (
    LevelBounds,
    binarize,
    canonical_form,
    enumerate_templates,
    in_class,
    level_bounds,
    level_templates,
    template_family,
    template_from_levels,
)

__all__ = [
    "UniversalTree",
    "build_universal",
    "ColoringEmbedding",
    "augment_coloring",
    "coloring_templates",
    "embed_coloring",
    "embed_ranked",
    "Embedding",
    "IndexCache",
    "extend_template_embedding",
    "identity_embedding",
    "partial_embeddings",
    "validate_embedding",
    "LevelBounds",
    "binarize",
    "canonical_form",
    "enumerate_templates",
    "in_class",
    "level_bounds",
    "level_templates",
    "template_family",
    "template_from_levels",
]
