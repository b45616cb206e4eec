import pytest

from hillocr.hill import HillKey
from hillocr.neuralnet import TrainConfig
from hillocr.pipeline import build_corpus, train_model

# Goal used for models that must actually read glyphs. The 0.1 goal of the
# trainer comparison is met long before the classes separate (all-zero
# outputs already score 1/26).
OCR_GOAL = 0.001
OCR_MAX_EPOCHS = 5000


def train_ocr_model(seed=0):
    data = build_corpus(copies=4, noise=0.02, seed=seed)
    res = train_model(data, cfg=TrainConfig(goal=OCR_GOAL, max_epochs=OCR_MAX_EPOCHS, seed=seed))
    assert res.goal_met
    return res.net


@pytest.fixture(scope="session")
def trained_net():
    return train_ocr_model(0)


@pytest.fixture(scope="session")
def demo_key():
    return HillKey.from_matrix([[1, 2], [0, 3]])
