import numpy as np
import pytest

from ppasim import ArrayState, Image
from ppasim import array_core as core


def random_image(rng, h, w, background=0):
    return Image(rng.integers(0, 256, size=(h, w)), background)


def loaded_state(img, plane="A", background=0):
    state = ArrayState.create(img.height, img.width, background=background)
    core.load_image(state, plane, img)
    return state


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
