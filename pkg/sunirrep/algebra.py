"""
Cartan–Weyl generators of su(n) in the totally symmetric irreps.

The irrep with M bosons in n modes acts on compositions of M (see
`sunirrep.combinatorics`). The ladder generator E_{j,k} moves one boson
from mode k to mode j::

	E_{j,k} |…m_j…m_k…> = sqrt((m_j+1) m_k) |…m_j+1…m_k-1…>

and the Hermitian basis used throughout is

	H_i = (E_{i,i} - E_{i+1,i+1})/2        1 <= i < n
	S_{j,k} = (E_{j,k} + E_{k,j})/2        1 <= j < k <= n
	A_{j,k} = i (E_{j,k} - E_{k,j})/2

All mode indices in this module's interface are 1-based.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse

from ._util import DomainError, ResourceError, reduce_angle
from .combinatorics import IrrepShape, composition_table

import logging
logger = logging.getLogger(__name__)

__all__ = [
	"GenKind", "Generator", "AlgebraMatrix", "AngleSet",
	"build_generator", "hermitian_exponent", "expih",
	"exact_unitary", "exact_unitary_expm",
	"commutator_residual", "casimir", "spin_matrices",
	"DENSE_CAP",
]

DENSE_CAP = 4096


class GenKind(str, Enum):
	LADDER = "E"
	DIAGONAL = "H"
	SYMMETRIC = "S"
	ANTISYMMETRIC = "A"


@dataclass(frozen=True)
class Generator:
	"""
	A generator label. Diagonal(i) is stored as (i, i+1).
	"""
	kind: GenKind
	j: int
	k: int

	@classmethod
	def ladder(cls, j, k):
		return cls(GenKind.LADDER, j, k)

	@classmethod
	def diagonal(cls, i):
		return cls(GenKind.DIAGONAL, i, i+1)

	@classmethod
	def symmetric(cls, j, k):
		return cls(GenKind.SYMMETRIC, j, k)

	@classmethod
	def antisymmetric(cls, j, k):
		return cls(GenKind.ANTISYMMETRIC, j, k)

	@property
	def i(self):
		return self.j

	def check(self, n):
		j,k = self.j, self.k
		if self.kind is GenKind.DIAGONAL:
			if not 1 <= j < n or k != j+1:
				raise DomainError(f"H_{j} is not defined for n={n}")
		elif self.kind is GenKind.LADDER:
			if not (1 <= j <= n and 1 <= k <= n) or j == k:
				raise DomainError(f"E_{j},{k} is not a ladder generator for n={n}")
		else:
			if not 1 <= j < k <= n:
				raise DomainError(f"{self.kind.value}_{j},{k} needs 1<=j<k<={n}")
		return self

	@classmethod
	def parse(cls, s):
		"""
		Read ``H:1``, ``S:1,2``, ``A:2,3`` or ``E:2,1``.
		"""
		try:
			kind, idx = s.split(":", 1)
			kind = GenKind(kind.strip().upper())
			idx = [int(x) for x in idx.split(",")]
		except ValueError:
			raise DomainError(f"cannot parse generator {s!r}") from None
		if kind is GenKind.DIAGONAL:
			if len(idx) != 1:
				raise DomainError(f"H takes one index: {s!r}")
			return cls.diagonal(idx[0])
		if len(idx) != 2:
			raise DomainError(f"{kind.value} takes two indices: {s!r}")
		return cls(kind, *idx)

	def __str__(self):
		if self.kind is GenKind.DIAGONAL:
			return f"H:{self.j}"
		return f"{self.kind.value}:{self.j},{self.k}"


@dataclass
class AlgebraMatrix:
	kind: Generator
	shape: IrrepShape
	entries: scipy.sparse.csc_matrix

	def dense(self):
		return self.entries.toarray()

	def __matmul__(self, other):
		return self.entries @ other


@lru_cache(maxsize=64)
def _index(shape):
	tab = composition_table(shape)
	return {tuple(int(x) for x in row): ell for ell,row in enumerate(tab)}


def _ladder(shape, j, k):
	"""E_{j,k} as a real sparse matrix; j == k gives the number operator of mode j."""
	tab = composition_table(shape)
	N = len(tab)
	j0,k0 = j-1, k-1
	if j0 == k0:
		return scipy.sparse.csc_matrix(
			(tab[:,j0].astype(float), (np.arange(N), np.arange(N))), shape=(N,N))

	idx = _index(shape)
	src = np.nonzero(tab[:,k0] > 0)[0]
	rows = np.empty(len(src), dtype=np.int64)
	vals = np.empty(len(src))
	for t,ell in enumerate(src):
		m = tab[ell].copy()
		vals[t] = np.sqrt((m[j0]+1.0)*m[k0])
		m[j0] += 1
		m[k0] -= 1
		rows[t] = idx[tuple(int(x) for x in m)]
	# one entry per source column, sorted by column
	return scipy.sparse.csc_matrix((vals, (rows, src)), shape=(N,N))


def build_generator(shape, kind):
	"""
	The N×N sparse matrix of a generator in the irrep ``shape``.
	"""
	kind.check(shape.n)
	j,k = kind.j, kind.k
	if kind.kind is GenKind.LADDER:
		m = _ladder(shape, j, k).astype(complex)
	elif kind.kind is GenKind.DIAGONAL:
		m = ((_ladder(shape, j, j) - _ladder(shape, k, k)) * 0.5).astype(complex)
	else:
		e = _ladder(shape, j, k)
		if kind.kind is GenKind.SYMMETRIC:
			m = ((e + e.T) * 0.5).astype(complex)
		else:
			m = (e - e.T) * 0.5j
	return AlgebraMatrix(kind, shape, scipy.sparse.csc_matrix(m))


@dataclass
class AngleSet:
	"""
	Coordinates of an SU(n) element,
	U = exp(i (Σ ς_i H_i + Σ_{j<k} ϑ_{j,k} S_{j,k} + φ_{j,k} A_{j,k})).

	``theta`` and ``phi`` map (j,k) with j<k to an angle; missing pairs are
	zero. All angles are stored reduced to [0, 4π).
	"""
	n: int
	sigma: list = field(default_factory=list)
	theta: dict = field(default_factory=dict)
	phi: dict = field(default_factory=dict)

	def __post_init__(self):
		if self.n < 2:
			raise DomainError(f"n must be at least 2, got {self.n}")
		if not self.sigma:
			self.sigma = [0.0]*(self.n-1)
		if len(self.sigma) != self.n-1:
			raise DomainError(f"need {self.n-1} diagonal angles, got {len(self.sigma)}")
		raw = [(f"H:{i}", s) for i,s in enumerate(self.sigma, 1)]
		self.sigma = [reduce_angle(s) for s in self.sigma]
		moved = [name for (name,v),r in zip(raw, self.sigma) if r != v]
		self.theta = dict(self.theta)
		self.phi = dict(self.phi)
		for d,name in ((self.theta,"S"), (self.phi,"A")):
			for (j,k),v in list(d.items()):
				if not 1 <= j < k <= self.n:
					raise DomainError(f"{name}:{j},{k} is not an upper-triangular index for n={self.n}")
				raw.append((f"{name}:{j},{k}", v))
				d[(j,k)] = reduce_angle(v)
				if d[(j,k)] != v:
					moved.append(f"{name}:{j},{k}")
		# the H_i commute, so only a mix with S or A changes the element
		if moved and sum(1 for _,v in raw if v) > 1 and any(v for name,v in raw if name[0] != "H"):
			logger.warning("%s reduced modulo 4π next to other non-zero angles; the element is not the unreduced one",
				", ".join(moved))

	@classmethod
	def zeros(cls, n):
		return cls(n)

	@classmethod
	def random(cls, n, seed=0):
		rng = np.random.default_rng(seed)
		pairs = [(j,k) for j in range(1,n+1) for k in range(j+1,n+1)]
		sigma = list(rng.uniform(0, 4*np.pi, n-1))
		theta = dict(zip(pairs, rng.uniform(0, 4*np.pi, len(pairs))))
		phi = dict(zip(pairs, rng.uniform(0, 4*np.pi, len(pairs))))
		return cls(n, sigma, theta, phi)

	@classmethod
	def from_lines(cls, n, lines):
		"""
		Parse ``kind j k value`` lines, kind one of H, S, A.
		H lines may omit k. Blank lines and ``#`` comments are skipped.
		"""
		sigma = [0.0]*(n-1)
		theta = {}
		phi = {}
		for nr,line in enumerate(lines, 1):
			line = line.split("#",1)[0].strip()
			if not line:
				continue
			tok = line.split()
			try:
				kind = GenKind(tok[0].upper())
				val = float(tok[-1])
				idx = [int(x) for x in tok[1:-1]]
			except (ValueError, IndexError):
				raise DomainError(f"line {nr}: cannot parse {line!r}") from None
			if kind is GenKind.DIAGONAL and len(idx) in (1,2):
				i = idx[0]
				if not 1 <= i < n or (len(idx) == 2 and idx[1] != i+1):
					raise DomainError(f"line {nr}: bad diagonal index in {line!r}")
				sigma[i-1] = val
			elif kind in (GenKind.SYMMETRIC, GenKind.ANTISYMMETRIC) and len(idx) == 2:
				(theta if kind is GenKind.SYMMETRIC else phi)[tuple(idx)] = val
			else:
				raise DomainError(f"line {nr}: bad angle line {line!r}")
		return cls(n, sigma, theta, phi)

	def items(self):
		"""Yield (Generator, angle) for all n²-1 coordinates."""
		for i,s in enumerate(self.sigma, 1):
			yield Generator.diagonal(i), s
		for j in range(1, self.n+1):
			for k in range(j+1, self.n+1):
				yield Generator.symmetric(j,k), self.theta.get((j,k), 0.0)
				yield Generator.antisymmetric(j,k), self.phi.get((j,k), 0.0)

	@property
	def count(self):
		return self.n*self.n-1

	def lines(self):
		for g,v in self.items():
			if g.kind is GenKind.DIAGONAL:
				yield f"H {g.i} {v!r}"
			else:
				yield f"{g.kind.value} {g.j} {g.k} {v!r}"


def hermitian_exponent(shape, angles):
	"""The sparse Hermitian matrix Σ_a θ_a T_a."""
	if angles.n != shape.n:
		raise DomainError(f"angles are for n={angles.n}, irrep has n={shape.n}")
	N = shape.N
	h = scipy.sparse.csc_matrix((N,N), dtype=complex)
	for g,v in angles.items():
		if v:
			h = h + v * build_generator(shape, g).entries
	return h


def _check_cap(N, cap):
	if N > cap:
		raise ResourceError("dense dimension", N, cap)


def expih(h, t=1.0):
	"""exp(i t h) for a dense Hermitian h, via its eigendecomposition."""
	w,v = scipy.linalg.eigh(h)
	return (v * np.exp(1j*t*w)) @ v.conj().T


def exact_unitary(shape, angles, cap=DENSE_CAP):
	"""
	The N×N unitary of ``angles`` in the irrep, exponentiated exactly.
	"""
	_check_cap(shape.N, cap)
	h = hermitian_exponent(shape, angles).toarray()
	return expih(h)


def exact_unitary_expm(shape, angles, cap=DENSE_CAP):
	"""Same as `exact_unitary`, by scaling and squaring."""
	_check_cap(shape.N, cap)
	h = hermitian_exponent(shape, angles).toarray()
	return scipy.linalg.expm(1j*h)


def _maxabs(m):
	if m.nnz == 0:
		return 0.0
	return float(abs(m).max())


def commutator_residual(shape):
	"""
	Largest entry-wise deviation from the Cartan–Weyl relations

		[E_jk, E_lm] = δ_kl E_jm - δ_jm E_lk
		[E_jk, H_i]  = (δ_ki E_ji - δ_ji E_ik - δ_k,i+1 E_j,i+1 + δ_j,i+1 E_i+1,k)/2
		[H_i, H_i']  = 0

	with E_jj the number operator of mode j.
	"""
	n = shape.n
	E = {(j,k): _ladder(shape, j, k) for j in range(1,n+1) for k in range(1,n+1)}
	N = shape.N
	zero = scipy.sparse.csc_matrix((N,N))
	res = 0.0

	def d(a,b):
		return 1.0 if a == b else 0.0

	for (j,k),ejk in E.items():
		for (l,m),elm in E.items():
			lhs = ejk@elm - elm@ejk
			rhs = d(k,l)*E[j,m] - d(j,m)*E[l,k]
			res = max(res, _maxabs(lhs-rhs))

	H = [(E[i,i]-E[i+1,i+1])*0.5 for i in range(1,n)]
	for (j,k),ejk in E.items():
		for i,h in enumerate(H, 1):
			rhs = zero.copy()
			if k == i:
				rhs = rhs + E[j,i]
			if j == i:
				rhs = rhs - E[i,k]
			if k == i+1:
				rhs = rhs - E[j,i+1]
			if j == i+1:
				rhs = rhs + E[i+1,k]
			res = max(res, _maxabs(ejk@h - h@ejk - rhs*0.5))
	for h1 in H:
		for h2 in H:
			res = max(res, _maxabs(h1@h2 - h2@h1))
	logger.debug("commutator residual %s: %.3e", shape, res)
	return res


def casimir(shape):
	"""The quadratic Casimir Σ_{j,k} E_{j,k} E_{k,j} of gl(n), sparse."""
	n = shape.n
	c = scipy.sparse.csc_matrix((shape.N, shape.N))
	for j in range(1,n+1):
		for k in range(1,n+1):
			c = c + _ladder(shape,j,k) @ _ladder(shape,k,j)
	return c


def spin_matrices(M):
	"""
	Dense (J_x, J_y, J_z) = (S_12, A_12, H_1) of the (M+1)-dimensional
	su(2) irrep. J_y is minus the usual one; see DESIGN.md.
	"""
	shape = IrrepShape(2, M)
	return tuple(build_generator(shape, g).dense() for g in (
		Generator.symmetric(1,2), Generator.antisymmetric(1,2), Generator.diagonal(1)))
