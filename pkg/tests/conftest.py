import hypothesis
import numpy as np
import pytest

from oidct import corpus
from oidct.corpus import GRID_OFFSETS, TEST, TEXTURES, TRAIN

hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(20201019)


def _require(names):
    missing = sorted(set(names) - set(corpus.available()))
    if missing:
        pytest.skip(f"bundled sample images unavailable: {missing}")


@pytest.fixture(scope="session")
def samples():
    _require(TRAIN + TEST + TEXTURES)
    return {n: corpus.load_sample(n) for n in TRAIN + TEST + TEXTURES}


@pytest.fixture(scope="session")
def train_images(samples):
    return [c for n in TRAIN for c in corpus.shifted_crops(samples[n], GRID_OFFSETS)]


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """PPM copies of the split, for tests that go through files and the CLI."""
    _require(TRAIN + TEST + TEXTURES)
    root = tmp_path_factory.mktemp("corpus")
    return {
        "train": corpus.export(TRAIN, root / "train", GRID_OFFSETS),
        "test": corpus.export(TEST, root / "test"),
        "textures": corpus.export(TEXTURES, root / "textures"),
    }
