"""Shared test fixtures and suite import aliases."""

from __future__ import annotations

import importlib.util
from pathlib import Path
import sys
import types
from typing import Any, Dict

import pytest

from stabcover.arrangement_core import named_arrangement
from stabcover.chamber_graph import SkeletonGraph, build_skeleton
from stabcover.config import Config

_BASE_DIR = Path(__file__).resolve().parents[1]


def _ensure_package(name: str) -> types.ModuleType:
    """Ensure a package-like module exists for the given dotted name."""
    module = sys.modules.get(name)
    if module is None:
        module = types.ModuleType(name)
        module.__path__ = []  # type: ignore[attr-defined]
        sys.modules[name] = module
        if "." in name:
            parent_name, child_name = name.rsplit(".", 1)
            parent_module = _ensure_package(parent_name)
            setattr(parent_module, child_name, module)
    return module


def _register_alias(alias: str, relative_path: str) -> None:
    """Register an import alias that maps to a hyphenated suite directory."""
    module_path = _BASE_DIR / relative_path
    spec = importlib.util.spec_from_file_location(alias, module_path)
    if not spec or not spec.loader:
        raise ImportError(f"Cannot load module at {module_path}")

    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)  # type: ignore[union-attr]

    parts = alias.split(".")
    for i in range(1, len(parts)):
        parent_name = ".".join(parts[:i])
        parent_module = _ensure_package(parent_name)
        child_name = parts[i]
        if not hasattr(parent_module, child_name):
            setattr(parent_module, child_name, None)

    sys.modules[alias] = module
    if len(parts) > 1:
        parent_module = _ensure_package(".".join(parts[:-1]))
        setattr(parent_module, parts[-1], module)


def _register_suite_module_aliases() -> None:
    """Expose suite modules via underscore-based import paths for tests."""
    _ensure_package("catalog.suites.main")
    _ensure_package("catalog.suites.sub")

    _register_alias(
        "catalog.suites.main.verify_harness.code.orchestrator",
        "catalog/suites/main/verify-harness/code/orchestrator.py",
    )
    for slug, module in (
        ("arrangement-suite", "arrangement"),
        ("ktheory-suite", "ktheory"),
        ("groupoid-suite", "groupoid"),
        ("cover-suite", "cover"),
        ("monodromy-suite", "monodromy"),
    ):
        _register_alias(
            f"catalog.suites.sub.{slug.replace('-', '_')}.code.{module}",
            f"catalog/suites/sub/{slug}/code/{module}.py",
        )


_register_suite_module_aliases()


@pytest.fixture
def cd4_graph() -> SkeletonGraph:
    return build_skeleton(named_arrangement("cd4"))


@pytest.fixture
def small_config() -> Dict[str, Any]:
    """Config payload with sample counts small enough for unit tests."""
    return Config(
        path_samples=10,
        loop_samples=10,
        point_samples=40,
        piece_samples=5,
        pair_samples=30,
        stability_samples=10,
        monodromy_samples=5,
        budget=5000,
        seed=3,
    ).model_dump()
