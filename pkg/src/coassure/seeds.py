"""Shipped seed model: the published example grouping as ready-to-load data.

The seed catalog holds the six resource/timing safety requirements and
the four security classes; the seed links route each class to its type.
The per-type assignment is an editorial choice at finer grain than the
published group and is meant to be edited for real projects.
"""

from __future__ import annotations

import json
from importlib import resources

from .catalog import Catalog, load_catalog
from .claims import StmClaim, claims_from_doc
from .links import CompileParams, LinkTable, load_link_table


def _read(name: str) -> object:
    return json.loads(resources.files("coassure.data").joinpath(name).read_text("utf-8"))


def seed_catalog() -> Catalog:
    return load_catalog(_read("seed_catalog.json"))


def seed_links() -> tuple[LinkTable, CompileParams]:
    return load_link_table(_read("seed_links.json"))


def seed_claims() -> list[StmClaim]:
    return claims_from_doc(_read("seed_claims.json"))


def seed_file_path(name: str) -> str:
    """Filesystem path of a shipped seed file (for CLI examples and tests)."""
    return str(resources.files("coassure.data").joinpath(name))
