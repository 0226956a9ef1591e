"""On-disk cache of Cayley balls keyed by (group spec, radius)."""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path


def cache_dir() -> Path:
    return Path(os.environ.get("MGL_CACHE_DIR", "./.mgl-cache"))


def spec_hash(spec: dict) -> str:
    blob = json.dumps(spec, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class BallCache:
    def __init__(self, root: Path | str | None = None):
        self.root = Path(root) if root is not None else cache_dir()

    def path(self, spec: dict, radius: int) -> Path:
        return self.root / f"ball-{spec_hash(spec)[:32]}-R{radius}.json"

    def get(self, spec: dict, radius: int) -> dict | None:
        p = self.path(spec, radius)
        try:
            with open(p) as fh:
                doc = json.load(fh)
        except (OSError, ValueError):
            return None
        # a different spec with a colliding prefix is treated as a miss
        if doc.get("spec_hash") != spec_hash(spec):
            return None
        return doc["ball"]

    def put(self, spec: dict, radius: int, ball: dict):
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.path(spec, radius)
        tmp = p.with_suffix(f".tmp{os.getpid()}")
        with open(tmp, "w") as fh:
            json.dump({"spec_hash": spec_hash(spec), "ball": ball}, fh, sort_keys=True)
        os.replace(tmp, p)
