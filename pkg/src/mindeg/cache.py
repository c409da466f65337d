"""Content-addressed on-disk cache for expensive per-group computations.

Entries are keyed by the group's multiplication-table hash, so renaming or
rebuilding a group through a different route still hits the same entry.  The
directory is taken from MINDEG_CACHE_DIR, defaulting to ./.mindeg-cache.
"""

from __future__ import annotations

import os

import numpy as np


def cache_dir():
    return os.environ.get("MINDEG_CACHE_DIR", os.path.join(".", ".mindeg-cache"))


def _entry_path(group, kind, version):
    name = "%s.%s.v%d.npz" % (group.cayley_hash, kind, version)
    return os.path.join(cache_dir(), name)


def save_arrays(group, kind, version, **arrays):
    path = _entry_path(group, kind, version)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp-%d" % os.getpid()
    try:
        with open(tmp, "wb") as fh:
            np.savez_compressed(fh, **arrays)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)
    return path


def load_arrays(group, kind, version):
    path = _entry_path(group, kind, version)
    if not os.path.exists(path):
        return None
    try:
        with np.load(path) as z:
            return {k: z[k] for k in z.files}
    except Exception:
        return None
