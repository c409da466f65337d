import pytest


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    """Point the lattice cache at a throwaway directory for the whole run."""
    import os

    path = tmp_path_factory.mktemp("mindeg-cache")
    old = os.environ.get("MINDEG_CACHE_DIR")
    os.environ["MINDEG_CACHE_DIR"] = str(path)
    yield
    if old is None:
        os.environ.pop("MINDEG_CACHE_DIR", None)
    else:
        os.environ["MINDEG_CACHE_DIR"] = old
