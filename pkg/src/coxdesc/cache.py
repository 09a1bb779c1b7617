"""Group cache: skip the root-system closure on repeat builds.

The cache stores the generator permutations of the root set and the root
signs, keyed by a hash of the canonical spec matrix.  Element enumeration
from these permutations is deterministic, so a cache load reproduces the
exact same element table and query results as a fresh build.

Location: the directory named by the COXDESC_CACHE environment variable,
default ".coxdesc-cache".  Files are versioned JSON; stale versions are
ignored.
"""

from __future__ import annotations

import hashlib
import json
import os

CACHE_VERSION = 1
ENV_VAR = "COXDESC_CACHE"
DEFAULT_DIR = ".coxdesc-cache"


def cache_dir(override: str | None = None) -> str:
    return override or os.environ.get(ENV_VAR) or DEFAULT_DIR


def _path(spec, override):
    digest = hashlib.sha256(spec.canonical_key().encode()).hexdigest()[:24]
    return os.path.join(cache_dir(override), f"group-{digest}.json")


def load(spec, override: str | None = None):
    """Return (gen_perms, root_signs) or None when absent/stale."""
    path = _path(spec, override)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, ValueError):
        return None
    if data.get("version") != CACHE_VERSION:
        return None
    if data.get("spec_key") != spec.canonical_key():
        return None
    gen_perms = [tuple(p) for p in data["gen_perms"]]
    signs = tuple(data["root_signs"])
    return gen_perms, signs


def save(spec, gen_perms, root_signs, override: str | None = None) -> str:
    path = _path(spec, override)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    data = {
        "version": CACHE_VERSION,
        "spec_key": spec.canonical_key(),
        "gen_perms": [list(p) for p in gen_perms],
        "root_signs": list(root_signs),
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)
    return path
