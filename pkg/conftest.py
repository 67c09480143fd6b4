import logging
import random
from pathlib import Path

import pytest

from weylab.config import load_config

# Set up logging
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

ROOT = Path(__file__).parent

pytest_plugins = ["fixtures.operators"]


def pytest_addoption(parser) -> None:
    """
    Add custom command line options for pytest.

    Args:
        parser: Pytest argument parser
    """
    parser.addoption(
        "--seed",
        action="store",
        type=int,
        default=None,
        help="Seed for the random operators and matrices (default: tests.seed in config.yaml)"
    )


@pytest.fixture(scope="session")
def config() -> dict:
    """
    Load configuration for the test session.

    Returns:
        Configuration dictionary from config.yaml
    """
    return load_config(ROOT / "config.yaml")


@pytest.fixture(scope="session")
def seed(pytestconfig, config) -> int:
    chosen = pytestconfig.getoption("--seed")
    if chosen is None:
        chosen = config["tests"]["seed"]
        logger.info(f"[pytest] No --seed provided, using default: {chosen}")
    else:
        logger.info(f"[pytest] Using seed from CLI: {chosen}")
    return chosen


@pytest.fixture
def rng(seed) -> random.Random:
    """Fresh generator per test so each test sees the same stream whatever runs before it."""
    return random.Random(seed)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return ROOT / "data"
