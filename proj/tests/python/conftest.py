import pytest

import uslab


def interval(a, b):
    return {"type": "interval", "a": str(a), "b": str(b)}


def disc(c, r):
    return {"type": "disc", "center": c, "radius": r}


@pytest.fixture
def bernstein_config():
    return {
        "schema_version": uslab.SCHEMA_VERSION,
        "command": "construct",
        "name": "bernstein",
        "targets": [
            {"id": "bump", "function": "x*(1-x)", "K": interval(0, 1), "epsilon": 1e-2},
            {"id": "wave", "function": "sin(pi*x)", "K": interval(0, 1), "epsilon": 1e-2},
        ],
    }
