import os
from pathlib import Path

import numpy as np
import pytest

from qwcrypt.image_io import GrayImage, load_pgm

DATA = Path(__file__).parent / "data"
NATURAL = ("camera", "astronaut", "moon")
CANONICAL = ("boat", "peppers", "plane")

# filled by test_acceptance, printed once at the end of the run
ACCEPTANCE_RESULTS: list[tuple[str, str, str]] = []


def canonical_dir() -> Path | None:
    """Directory holding boat.pgm / peppers.pgm / plane.pgm, if supplied."""
    d = os.environ.get("QWC_SIPI_DIR")
    if d and all((Path(d) / f"{n}.pgm").exists() for n in CANONICAL):
        return Path(d)
    return None


@pytest.fixture(scope="session")
def natural_images() -> dict[str, GrayImage]:
    return {n: load_pgm(DATA / "natural" / f"{n}.pgm") for n in NATURAL}


@pytest.fixture(scope="session")
def camera(natural_images) -> GrayImage:
    return natural_images["camera"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit, status, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{status:4}] {crit}: {detail}")
