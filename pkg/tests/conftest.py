import os
import sys

import pytest

# the tests run against the installed package; make a source checkout work too
_SRC = os.path.join(os.path.dirname(__file__), os.pardir, "src")
if os.path.isdir(_SRC) and _SRC not in sys.path:
    sys.path.insert(0, os.path.abspath(_SRC))


@pytest.fixture
def sym_square():
    from dwtunnel.core import SquareWell

    return SquareWell(2.0, 1.0, 1.0, 2.0, 5.0)


@pytest.fixture
def deep_morse():
    from dwtunnel.core import MorsePair

    return MorsePair(20, 20, 2, 2, 2, 2, 6, 6)
