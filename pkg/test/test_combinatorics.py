import math
from itertools import product

import pytest
from hypothesis import given, strategies as st

from sunirrep._util import DomainError
from sunirrep.combinatorics import (
	IrrepShape, irrep_dimension, dimension_recursive,
	unrank, rank_desc, rank_asc, enumerate_compositions, composition_table,
)


def brute(n, M):
	"""All compositions, sorted descending."""
	res = [c for c in product(range(M+1), repeat=n) if sum(c) == M]
	return sorted(res, reverse=True)


def test_dimension():
	assert irrep_dimension(3, 2) == 6
	assert irrep_dimension(4, 5) == 56
	for m in range(10):
		assert irrep_dimension(1, m) == 1
		assert irrep_dimension(2, m) == m+1
	for n in range(1, 6):
		for M in range(9):
			assert irrep_dimension(n, M) == dimension_recursive(n, M) == math.comb(M+n-1, n-1)


def test_dimension_overflow():
	with pytest.raises(OverflowError):
		irrep_dimension(40, 200)
	with pytest.raises(DomainError):
		irrep_dimension(0, 3)
	with pytest.raises(DomainError):
		IrrepShape(2, -1)


def test_unrank_examples():
	s = IrrepShape(3, 2)
	assert unrank(s, 0).parts == (2, 0, 0)
	assert unrank(s, 5).parts == (0, 0, 2)
	assert unrank(s, 5).rank == 5
	assert rank_desc((1, 0, 1), s) == 2
	assert unrank(IrrepShape(4, 5), 17).parts == brute(4, 5)[17]


def test_unrank_range():
	s = IrrepShape(3, 2)
	with pytest.raises(DomainError):
		unrank(s, 6)
	with pytest.raises(DomainError):
		unrank(s, -1)


def test_rank_bad_parts():
	s = IrrepShape(3, 2)
	for parts in ((1, 1), (2, 1, 0), (3, -1, 0)):
		with pytest.raises(DomainError):
			rank_desc(parts, s)


def test_roundtrip_exhaustive():
	for n in range(1, 6):
		for M in range(9):
			s = IrrepShape(n, M)
			ref = brute(n, M)
			assert list(enumerate_compositions(s)) == ref
			assert s.N == len(ref)
			for ell,parts in enumerate(ref):
				assert unrank(s, ell).parts == parts
				assert rank_desc(parts, s) == ell
				assert rank_asc(parts, s) == s.N-1-ell


def test_endpoints():
	for n in (2, 3, 5):
		s = IrrepShape(n, 7)
		assert rank_desc((7,)+(0,)*(n-1), s) == 0
		assert rank_desc((0,)*(n-1)+(7,), s) == s.N-1


@given(st.integers(2, 12), st.integers(0, 40), st.data())
def test_roundtrip_large(n, M, data):
	s = IrrepShape(n, M)
	ell = data.draw(st.integers(0, s.N-1))
	c = unrank(s, ell)
	assert sum(c.parts) == M
	assert rank_desc(c.parts, s) == ell
	if ell+1 < s.N:
		assert unrank(s, ell+1).parts < c.parts


def test_table():
	s = IrrepShape(3, 2)
	t = composition_table(s)
	assert t.shape == (6, 3)
	assert tuple(t[2]) == (1, 0, 1)
	assert not t.flags.writeable
	assert composition_table(s) is t
