from __future__ import annotations

import pytest

from mathpdf import samples
from mathpdf.cos import parse_document


@pytest.fixture
def fig1():
    return parse_document(samples.figure1())


@pytest.fixture
def fig3():
    return parse_document(samples.figure3())


@pytest.fixture
def fig5():
    return parse_document(samples.figure5())


@pytest.fixture
def minimal():
    return parse_document(samples.minimal())
