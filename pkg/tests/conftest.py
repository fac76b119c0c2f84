import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from exploresim.arena import Arena, default_arena


@pytest.fixture(scope="session")
def room() -> Arena:
    return default_arena()


@pytest.fixture
def boxed_arena() -> Arena:
    """Room with the spec's reference obstacle box [(2,2),(3,3)]."""
    return Arena(6.5, 5.5, obstacles=[(2.0, 2.0, 3.0, 3.0)])
