import math

import pytest
from hypothesis import given, strategies as st

from halfline_nls.errors import ConvergenceError
from halfline_nls.roots import expand_upward, solve_bracketed, solve_log


def test_bracketed_sqrt2():
    assert solve_bracketed(lambda x: x * x - 2.0, 0.0, 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)


def test_no_sign_change_raises():
    with pytest.raises(ConvergenceError):
        solve_bracketed(lambda x: x * x + 1.0, -1.0, 1.0)


def test_expand_upward_finds_bracket():
    lo, hi = expand_upward(lambda x: x - 1000.0, 1.0, 2.0)
    assert lo <= 1000.0 <= hi


def test_log_search_tiny_root():
    root = 3e-250
    got = solve_log(lambda x: math.log(x) - math.log(root), 1e-300, 1.0)
    assert got == pytest.approx(root, rel=1e-12)


@given(c=st.floats(1e-6, 1e6))
def test_cube_root_property(c):
    lo, hi = expand_upward(lambda x: x**3 - c, 0.0, 1.0)
    assert solve_bracketed(lambda x: x**3 - c, lo, hi) == pytest.approx(c ** (1.0 / 3.0), rel=1e-12)
