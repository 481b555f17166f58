from hypothesis import given
from hypothesis import strategies as st

from shadowlab.intervals import Iv, iv_max

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
small = st.floats(min_value=0, max_value=1e3, allow_nan=False)


def test_threshold_tristate():
    assert Iv(0.0, 0.5).lt(1.0) is True
    assert Iv(1.5, 2.0).lt(1.0) is False
    assert Iv(0.5, 1.5).lt(1.0) is None


@given(finite, small, finite, small)
def test_add_encloses(a, ea, b, eb):
    x = Iv.pm(a, ea)
    y = Iv.pm(b, eb)
    s = x + y
    assert s.lo <= a + b <= s.hi


@given(finite, small)
def test_pm_contains_center(c, e):
    iv = Iv.pm(c, e)
    assert iv.lo <= c <= iv.hi
    assert iv.width >= 0


@given(finite, small, finite)
def test_scale_encloses(c, e, k):
    iv = Iv.pm(c, e).scale(k)
    assert iv.lo <= k * c <= iv.hi


def test_max_and_clamp():
    m = iv_max(Iv(0.0, 1.0), Iv(0.5, 0.7))
    assert (m.lo, m.hi) == (0.5, 1.0)
    assert Iv(-1.0, 2.0).clamp_nonneg().lo == 0.0
