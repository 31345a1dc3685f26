import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nlgames.catalog import chsh_game, cyclic_latin, ms_game, ms_game_with_assignment  # noqa: E402


@pytest.fixture(scope="session")
def chsh():
    return chsh_game()


@pytest.fixture(scope="session")
def ms2_cyclic():
    return ms_game_with_assignment(cyclic_latin(2))


@pytest.fixture(scope="session")
def ms3_cyclic():
    return ms_game_with_assignment(cyclic_latin(3))


@pytest.fixture(scope="session")
def ms3():
    return ms_game(3)
