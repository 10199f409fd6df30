from __future__ import annotations

import pytest

from latdesign.lattice import GramMatrix, minimal_vectors

FIXTURES = ("zn1", "zn2", "zn4", "d4", "e8", "bw16", "leech")


def load_gram(name: str) -> GramMatrix:
    from importlib import resources

    text = resources.files("latdesign.data").joinpath(name + ".gram").read_text()
    return GramMatrix.from_text(text)


@pytest.fixture(scope="session")
def grams() -> dict[str, GramMatrix]:
    return {name: load_gram(name) for name in FIXTURES}


@pytest.fixture(scope="session")
def short_vectors(grams):
    """Enumerations shared across tests; Leech included (sub-second)."""
    return {name: minimal_vectors(g) for name, g in grams.items()}
