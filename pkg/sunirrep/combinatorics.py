"""
Ranking of weak compositions in descending lexicographic order.

A basis state of the totally symmetric irrep is a composition
(m_1,…,m_n) of M bosons into n modes; its index ℓ is the rank of the
composition when all of them are sorted in descending lexicographic
order, so that (M,0,…,0) is first and (0,…,0,M) is last.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._util import DomainError

import logging
logger = logging.getLogger(__name__)

__all__ = [
	"IrrepShape", "CompositionIndex",
	"irrep_dimension", "dimension_recursive",
	"unrank", "rank_desc", "rank_asc",
	"enumerate_compositions", "composition_table",
]

# we index numpy arrays with these numbers
INDEX_MAX = 2**63-1


def _binom(a, b):
	# multiplicative formula, exact
	if b < 0 or a < b:
		return 0
	b = min(b, a-b)
	r = 1
	for i in range(1, b+1):
		r = r * (a-b+i) // i
	return r


def irrep_dimension(n, M):
	"""
	N(n,M) = binom(M+n-1, n-1).

	Raises `OverflowError` when the result does not fit a signed 64-bit
	index.
	"""
	if n < 1 or M < 0:
		raise DomainError(f"need n>=1 and M>=0, got n={n} M={M}")
	N = _binom(M+n-1, n-1)
	if N > INDEX_MAX:
		raise OverflowError(N)
	return N


@lru_cache(maxsize=None)
def dimension_recursive(n, M):
	"""N(n,M) = sum_{m<=M} N(n-1,m), N(1,m) = 1."""
	if n < 1 or M < 0:
		raise DomainError(f"need n>=1 and M>=0, got n={n} M={M}")
	if n == 1:
		return 1
	return sum(dimension_recursive(n-1, m) for m in range(M+1))


@dataclass(frozen=True)
class IrrepShape:
	n: int
	M: int

	def __post_init__(self):
		if not isinstance(self.n, (int, np.integer)) or not isinstance(self.M, (int, np.integer)):
			raise DomainError(f"n and M must be integers: {self.n!r} {self.M!r}")
		if self.n < 1:
			raise DomainError(f"n must be positive, got {self.n}")
		if self.M < 0:
			raise DomainError(f"M must not be negative, got {self.M}")

	@property
	def N(self):
		return irrep_dimension(self.n, self.M)

	def __str__(self):
		return f"SU({self.n})[M={self.M}, N={self.N}]"


@dataclass(frozen=True)
class CompositionIndex:
	parts: tuple
	rank: int


def _check_parts(parts, shape):
	parts = tuple(int(p) for p in parts)
	if len(parts) != shape.n:
		raise DomainError(f"need {shape.n} parts, got {len(parts)}: {parts}")
	if any(p < 0 for p in parts):
		raise DomainError(f"negative part in {parts}")
	if sum(parts) != shape.M:
		raise DomainError(f"parts {parts} do not sum to M={shape.M}")
	return parts


def unrank(shape, ell):
	"""
	Return the ell-th composition in descending lexicographic order.

	For each mode the number of remaining compositions whose leading part is
	at least r is S_r = binom(M'-r+k, k), k being the number of modes after
	this one. S_r strictly decreases in r, so the leading part is found by
	bisection.
	"""
	N = shape.N
	if not 0 <= ell < N:
		raise DomainError(f"ell={ell} is outside [0,{N-1}]")

	def S(r, Mr, k):
		return _binom(Mr-r+k, k)

	parts = []
	Mr = shape.M
	rest = ell
	for k in range(shape.n-1, 0, -1):
		# largest r with S(r) > rest; S(0) > rest always holds
		lo, hi = 0, Mr+1
		while hi-lo > 1:
			mid = (lo+hi)//2
			if S(mid, Mr, k) > rest:
				lo = mid
			else:
				hi = mid
		r = lo
		rest -= S(r+1, Mr, k)
		parts.append(r)
		Mr -= r
	parts.append(Mr)
	return CompositionIndex(tuple(parts), ell)


def rank_desc(parts, shape):
	"""
	The index of a composition, via suffix sums.

	With S_k = sum(parts[k:]) (1-based k),
	ℓ = Σ_{k=1}^{n-1} binom(S_k+n-k, n-k) - binom(S_k+n-k-1, n-k-1).
	"""
	parts = _check_parts(parts, shape)
	n = shape.n
	ell = 0
	S = shape.M
	for k in range(1, n):
		S -= parts[k-1]
		ell += _binom(S+n-k, n-k) - _binom(S+n-k-1, n-k-1)
	return ell


def rank_asc(parts, shape):
	return shape.N-1 - rank_desc(parts, shape)


def enumerate_compositions(shape):
	"""Yield all compositions, in descending lexicographic order."""
	def _gen(k, Mr):
		if k == 1:
			yield (Mr,)
			return
		for r in range(Mr, -1, -1):
			for tail in _gen(k-1, Mr-r):
				yield (r,)+tail
	yield from _gen(shape.n, shape.M)


@lru_cache(maxsize=64)
def composition_table(shape):
	"""
	All compositions as an (N, n) integer array, row ℓ = unrank(ℓ).

	The array is cached and read-only.
	"""
	tab = np.array(list(enumerate_compositions(shape)), dtype=np.int64).reshape(-1, shape.n)
	tab.setflags(write=False)
	return tab
