from pathlib import Path

import numpy as np
import pytest

from coughrank.audio import AudioClip, DEFAULT_SAMPLE_RATE
from coughrank.metrics import DEFAULT_CRITERIA
from coughrank.tables import read_decision_matrix

DATA_DIR = Path(__file__).parent / "data"

MODELS = [
    "Extra-Trees",
    "SVM",
    "RF",
    "AdaBoost",
    "MLP",
    "XGBoost",
    "GBoost",
    "LR",
    "k-NN",
    "HGBoost",
]


def load_fixture_matrix(category, strategy):
    path = DATA_DIR / f"decision_matrix_{category}_strategy{strategy}.csv"
    return read_decision_matrix(path, list(DEFAULT_CRITERIA))


def sine_clip(freq, duration=0.5, rate=DEFAULT_SAMPLE_RATE, amplitude=0.5):
    t = np.arange(int(duration * rate)) / rate
    return AudioClip(amplitude * np.sin(2 * np.pi * freq * t), rate)


def noise_clip(seed, duration=0.3, rate=DEFAULT_SAMPLE_RATE, amplitude=0.3):
    rng = np.random.default_rng(seed)
    n = int(duration * rate)
    return AudioClip(amplitude * rng.uniform(-1, 1, n), rate)


@pytest.fixture
def data_dir():
    return DATA_DIR
