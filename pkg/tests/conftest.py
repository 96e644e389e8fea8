import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hypersynth.plant import Plant


@pytest.fixture
def fig1_plant() -> Plant:
    """The four-state acyclic plant: one uncontrollable edge from init,
    two terminal self-loops, labels a/a/b/b."""
    return Plant(
        states={"sinit", "s1", "s2", "s3"},
        init="sinit",
        c_edges={
            ("sinit", "s3"),
            ("s1", "s3"),
            ("s1", "s2"),
            ("s2", "s2"),
            ("s3", "s3"),
        },
        u_edges={("sinit", "s1")},
        labeling={"sinit": {"a"}, "s1": {"a"}, "s2": {"b"}, "s3": {"b"}},
    )
