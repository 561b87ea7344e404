from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from dnrate.materials import PRESETS

FIXTURES = Path(__file__).parent / "fixtures"
PAIRS = [(a, b) for a in PRESETS for b in PRESETS]


def read_rational_matrix(path):
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(Fraction(t)) for t in line.split()])
    return np.array(rows)


@pytest.fixture
def unit_matrix_5x5():
    return read_rational_matrix(FIXTURES / "assembled_5x5.txt")
