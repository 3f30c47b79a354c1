"""Shared fixtures: built graphs are cached per (preset, depth) for the whole
session since construction is deterministic and read-only."""

from __future__ import annotations

import pytest

from ifsgraph.graph import build_graph
from ifsgraph.presets import get_preset

_CACHE: dict = {}


@pytest.fixture(scope="session")
def built():
    def factory(preset: str, depth: int, **kwargs):
        key = (preset, depth, tuple(sorted(kwargs.items())))
        if key not in _CACHE:
            _CACHE[key] = build_graph(get_preset(preset), depth, **kwargs)
        return _CACHE[key]

    return factory
