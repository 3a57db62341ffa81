import logging
import sys

import pytest

logging.basicConfig(level=logging.DEBUG, stream=sys.stderr, force=True)


@pytest.fixture
def anyio_backend():
	return "trio"
