"""Built-in visual asset library and asset reference resolution.

The library ships inside the package (simple flat-shape SVG parts plus
placeholder audio); DB_ASSET_DIR points at an alternative library root
with the same manifest layout. Uploaded assets live next to a saved
project under assets/uploads/.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import UnknownAsset


@dataclass(frozen=True)
class AssetRef:
    id: str
    kind: str  # builtin | uploaded
    path: str  # library-relative (builtin) or project-relative (uploads)
    mime: str

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "path": self.path, "mime": self.mime}

    @classmethod
    def from_dict(cls, d: dict) -> "AssetRef":
        return cls(id=str(d["id"]), kind=str(d["kind"]), path=str(d["path"]), mime=str(d["mime"]))


def builtin_root() -> Path:
    override = os.environ.get("DB_ASSET_DIR")
    if override:
        return Path(override)
    return Path(__file__).parent / "resources" / "assets"


def _load_manifest() -> dict:
    root = builtin_root()
    with open(root / "manifest.json", "r", encoding="utf-8") as f:
        return json.load(f)


def builtin_manifest() -> dict:
    """id -> {path, mime, width, height}; cached per asset root."""
    root = str(builtin_root())
    cached = _manifest_cache.get(root)
    if cached is None:
        cached = _load_manifest()
        _manifest_cache[root] = cached
    return cached


_manifest_cache: dict[str, dict] = {}


def builtin_ref(asset_id: str) -> AssetRef:
    entry = builtin_manifest().get(asset_id)
    if entry is None:
        raise UnknownAsset(f"no builtin asset {asset_id!r}")
    return AssetRef(id=asset_id, kind="builtin", path=entry["path"], mime=entry["mime"])


def asset_size(ref: AssetRef) -> tuple[float, float]:
    """Intrinsic size in canvas units; (0, 0) for non-image assets."""
    if ref.kind == "builtin":
        entry = builtin_manifest().get(ref.id)
        if entry is None:
            raise UnknownAsset(f"no builtin asset {ref.id!r}")
        return float(entry["width"]), float(entry["height"])
    return 100.0, 100.0  # uploads default to one nominal tile


def builtin_file(ref: AssetRef) -> Path:
    path = builtin_root() / "builtin" / ref.path
    if not path.exists():
        raise UnknownAsset(f"builtin asset file missing: {ref.path}")
    return path


def list_builtin() -> list[dict]:
    man = builtin_manifest()
    return [
        {"id": aid, "kind": "builtin", **entry} for aid, entry in sorted(man.items())
    ]
