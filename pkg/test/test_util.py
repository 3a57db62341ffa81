import math

import pytest
from hypothesis import given, strategies as st

from sunirrep._util import (
	DomainError, ResourceError, ConvergenceError, SunIrrepError,
	reduce_angle, center_angle, pairwise_sum, fit_decay, FOUR_PI,
)

angles = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


@given(angles)
def test_reduce_range(a):
	r = reduce_angle(a)
	assert 0 <= r < FOUR_PI
	# same point on the 4π circle
	d = (a - r) / FOUR_PI
	assert abs(d - round(d)) < 1e-9


@given(angles)
def test_center_range(a):
	c = center_angle(a)
	assert -2*math.pi < c <= 2*math.pi + 1e-12
	d = (a - c) / FOUR_PI
	assert abs(d - round(d)) < 1e-9


def test_reduce_examples():
	assert reduce_angle(0) == 0
	assert reduce_angle(FOUR_PI) == 0
	assert reduce_angle(-math.pi) == pytest.approx(3*math.pi)
	assert center_angle(3*math.pi) == pytest.approx(-math.pi)


def test_errors():
	assert issubclass(DomainError, ValueError)
	assert issubclass(ResourceError, MemoryError)
	assert issubclass(ConvergenceError, ArithmeticError)
	for e in (DomainError, ResourceError, ConvergenceError):
		assert issubclass(e, SunIrrepError)
	e = ConvergenceError("nope", 0.5)
	assert e.residual == 0.5
	e = ResourceError("dense dimension", 5000, 4096)
	assert "5000" in str(e)


def test_pairwise_sum():
	assert pairwise_sum([1, 2, 3, 4, 5]) == 15
	assert pairwise_sum([2.5]) == 2.5
	with pytest.raises(DomainError):
		pairwise_sum([])


def test_fit_decay():
	pts = [(L, math.exp(-0.1*L)) for L in (32, 64, 128)]
	fit = fit_decay(pts)
	assert fit.slope == pytest.approx(-0.1)
	assert fit.decreasing
	assert not fit.floor_limited
	d = fit.as_dict()
	assert d["points"][0] == [32, pytest.approx(math.exp(-3.2))]


def test_fit_floor():
	fit = fit_decay([(32, 1e-15), (64, 0.0), (128, 1e-16)], floor=1e-12)
	assert fit.floor_limited
	assert fit.slope == 0


def test_fit_short():
	with pytest.raises(DomainError):
		fit_decay([(32, 1e-3), (64, 1e-5)])
