import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from scipy import ndimage

from scanpoly.curve import trace_boundary
from scanpoly.shapes import fixture_family

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def fixtures():
    return fixture_family()


def blob_from_mask(mask):
    """Largest 8-connected component of ``mask``, holes filled, padded by one pixel."""
    labels, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
    if count == 0:
        return None
    sizes = np.bincount(labels.ravel())[1:]
    comp = ndimage.binary_fill_holes(labels == 1 + int(np.argmax(sizes)))
    if comp.sum() < 4:
        return None
    return np.pad(comp, 1)


@st.composite
def blob_curves(draw, size=10):
    """Closed boundary curves traced from random small binary masks."""
    bits = draw(st.lists(st.booleans(), min_size=size * size, max_size=size * size))
    mask = np.array(bits, dtype=bool).reshape(size, size)
    comp = blob_from_mask(mask)
    if comp is None:
        mask[2:6, 2:6] = True
        comp = blob_from_mask(mask)
    return trace_boundary(comp)


@st.composite
def convex_blob_curves(draw):
    """Boundaries of digitized discs and ellipses with random parameters."""
    from scanpoly.shapes import ellipse

    a = draw(st.floats(3.0, 25.0))
    b = draw(st.floats(3.0, 25.0))
    angle = draw(st.floats(0.0, 180.0))
    return ellipse(a, b, angle)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
