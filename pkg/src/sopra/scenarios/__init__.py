"""Bundled example scenarios."""

from __future__ import annotations

import json
from importlib import resources
from typing import Any

from ..model import Scenario
from ..scenario import build_scenario


def list_bundled() -> list[str]:
    files = resources.files(__name__)
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def bundled_document(name: str) -> dict[str, Any]:
    path = resources.files(__name__).joinpath(f"{name}.json")
    if not path.is_file():
        raise KeyError(f"no bundled scenario {name!r}; have {list_bundled()}")
    return json.loads(path.read_text(encoding="utf-8"))


def load_bundled(name: str) -> Scenario:
    return build_scenario(bundled_document(name))
