"""Load verification suites from the catalog registry and invoke them."""

from __future__ import annotations

import importlib.util
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Tuple

import yaml

_REGISTRY = Path("catalog") / "registry" / "suites.yaml"


def _discover_repo_root() -> Path:
    """Locate the directory that holds the suite catalog."""
    repo_root = Path(__file__).resolve().parents[2]
    candidates = [
        Path.cwd(),
        repo_root,
        repo_root.parent,
    ]
    for candidate in candidates:
        if (candidate / _REGISTRY).exists():
            return candidate
    raise RuntimeError("Unable to locate the StabCover suite catalog.")


@lru_cache(maxsize=None)
def _registry() -> Dict[str, Tuple[str, str]]:
    """Map suite slug to (catalog path, module name)."""
    repo_root = _discover_repo_root()
    with open(repo_root / _REGISTRY, "r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}
    entries: Dict[str, Tuple[str, str]] = {}
    for entry in data.get("suites", []):
        entries[entry["slug"]] = (entry["path"], entry["module"])
    return entries


def registered_suites(role: str | None = None) -> List[str]:
    """Slugs of registered suites, optionally filtered by path group (main/sub)."""
    slugs = []
    for slug, (path, _) in _registry().items():
        if role is None or Path(path).parts[-2] == role:
            slugs.append(slug)
    return slugs


@lru_cache(maxsize=None)
def _load_suite_module(suite_slug: str):
    """Load the Python module for a given suite slug."""
    entries = _registry()
    if suite_slug not in entries:
        raise ValueError(f"Unknown suite slug: {suite_slug}")

    rel_path, module_name = entries[suite_slug]
    module_path = _discover_repo_root() / rel_path / "code" / f"{module_name}.py"

    if not module_path.exists():
        raise FileNotFoundError(f"Suite module not found at {module_path}")

    spec = importlib.util.spec_from_file_location(
        f"{suite_slug}.{module_name}", module_path
    )
    if not spec or not spec.loader:
        raise ImportError(f"Unable to load module for suite '{suite_slug}'")

    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)  # type: ignore[union-attr]
    return module


def invoke_suite(
    suite_slug: str,
    payload: Dict[str, Any],
    parent_context: Dict[str, Any] | None = None,
) -> Dict[str, Any]:
    """Invoke a verification suite by loading its run() function."""
    module = _load_suite_module(suite_slug)
    if not hasattr(module, "run"):
        raise AttributeError(f"Suite '{suite_slug}' does not define a run() function")

    context = parent_context if parent_context is not None else {}
    return module.run(payload, context)
