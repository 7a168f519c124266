import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from models.quantum_models import CanonicalParams  # noqa: E402
from services.canonical_service import standard_gates  # noqa: E402
from utils.rng import make_rng  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(1234)


@pytest.fixture(scope="session")
def gates() -> dict:
    return dict(standard_gates())


@pytest.fixture(params=[
    (0.3, 0.2, 0.1),
    (0.3, 0.2, 0.0),
    (0.3, 0.2, -0.1),
    (0.25, 0.25, 0.25),
    (math.pi / 4, 0.0, 0.0),
    (math.pi / 4, math.pi / 4, math.pi / 4),
    (math.pi / 4, 0.3, -0.2),
], ids=lambda p: ",".join(f"{c:.3f}" for c in p))
def region_params(request) -> CanonicalParams:
    return CanonicalParams(*request.param)
