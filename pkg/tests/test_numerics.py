import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from lmax.numerics import compensated_cumsum

CHUNK = 65_536


def test_fresh_offset_at_chunk_seams():
    # The running offset is rebuilt from exactly rounded chunk totals, so
    # the first entry of each chunk is within a few ulp of the true prefix.
    rng = np.random.default_rng(7)
    x = rng.uniform(0.0, 1.0, size=3 * CHUNK + 100)
    out = compensated_cumsum(x)
    for start in (CHUNK, 2 * CHUNK, 3 * CHUNK):
        want = math.fsum(x[: start + 1])
        assert abs(out[start] - want) <= 4 * math.ulp(want)


def test_prefix_error_bounded_by_chunk_length():
    rng = np.random.default_rng(11)
    x = rng.uniform(0.0, 1.0, size=2 * CHUNK + 5000)
    out = compensated_cumsum(x)
    for n in (1, 1000, CHUNK - 1, CHUNK, CHUNK + 1, 2 * CHUNK + 5000):
        want = math.fsum(x[:n])
        assert out[n - 1] == pytest.approx(want, rel=CHUNK * np.finfo(float).eps)


def test_exact_on_integers():
    x = np.ones(200_000)
    out = compensated_cumsum(x)
    assert np.array_equal(out, np.arange(1.0, 200_001.0))


def test_offset_does_not_inherit_swamping():
    # One huge leading value swamps plain cumsum for the whole array; the
    # compensated version recovers at the next chunk boundary.
    n = 10 * CHUNK
    x = np.ones(n + 1)
    x[0] = 1e16
    want = 1e16 + n  # exact: both terms are representable and their sum is even
    plain = np.cumsum(x)
    out = compensated_cumsum(x)
    assert abs(plain[-1] - want) > 1e5
    assert abs(out[-1] - want) <= 4.0


def test_empty_and_single():
    assert compensated_cumsum(np.array([])).size == 0
    out = compensated_cumsum(np.array([0.25]))
    assert out.tolist() == [0.25]


@given(
    x=hnp.arrays(
        np.float64,
        st.integers(1, 400),
        elements=st.floats(0.0, 1e6, allow_nan=False),
    )
)
@settings(max_examples=100, deadline=None)
def test_prefixes_match_fsum(x):
    # Nonnegative summands: error after m adds is bounded by m * eps
    # relative to the (nondecreasing) running total.
    out = compensated_cumsum(x)
    for n in (1, x.size // 2, x.size):
        if n >= 1:
            assert out[n - 1] == pytest.approx(math.fsum(x[:n]), rel=1e-13, abs=1e-290)
