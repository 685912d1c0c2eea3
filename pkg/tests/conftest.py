import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from fixpoint_sets.setalg import SqSet

XI_2_4 = "{ (1 2)(3 4), (1 3)(2 4), (1 4)(2 3) }"


def pytest_collection_modifyitems(config, items):
    if os.environ.get("FPS_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set FPS_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def xi24():
    """All three fixed-point-free involutions on four points."""
    return SqSet.parse(XI_2_4)


@pytest.fixture
def transposition():
    return SqSet.parse("{(1 2)}")
