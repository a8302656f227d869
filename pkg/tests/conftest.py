import numpy as np
import pytest

from wheatvision import synthetic
from wheatvision.config import PipelineConfig
from wheatvision.dataset import ingest_directory
from wheatvision.imaging import GrayImage


_acceptance_lines = []


def record_acceptance(line):
    """Called by the acceptance gate; stdout from passing tests is captured,
    so the lines are replayed in the terminal summary below."""
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance gate")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def make_gray(arr):
    arr = np.asarray(arr, dtype=np.uint8)
    return GrayImage(arr.shape[1], arr.shape[0], arr)


def small_config():
    """Defaults shrunk enough for fast unit tests."""
    cfg = PipelineConfig()
    cfg.forest_trees = 15
    cfg.gbm_rounds = 20
    return cfg


@pytest.fixture(scope="session")
def fixture_root(tmp_path_factory):
    """12 images per synthetic class, written once per session."""
    root = tmp_path_factory.mktemp("synthetic") / "data"
    return synthetic.generate_dataset(root, n_per_class=12, seed=11)


@pytest.fixture(scope="session")
def fixture_dataset(fixture_root):
    return ingest_directory(fixture_root, small_config())
