"""
Euler-style factorization of SU(n) elements.

A fundamental unitary u is reduced to a diagonal matrix by Givens rotations
built from one Symmetric and one Antisymmetric exponential each. The
rotations are undone in reverse and the remaining diagonal is written with
the Cartan generators, so that

	u = Π_t exp(-iϑ_t S_{c,k}) exp(-iφ_t A_{c,k}) · Π_i exp(iς_i H_i)

Pivots are visited column by column, c = 1…n-1, and within a column from
the last row upwards (k = n…c+1). That gives n(n-1) rotation factors plus
n-1 diagonal ones, n²-1 in total.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from ._util import DomainError, ConvergenceError, ResourceError, reduce_angle
from .algebra import Generator, GenKind, build_generator, exact_unitary, expih, DENSE_CAP
from .combinatorics import IrrepShape

import logging
logger = logging.getLogger(__name__)

__all__ = [
	"EulerFactor", "EulerSequence",
	"fundamental_matrix", "euler_decompose", "lift_sequence",
	"sequence_matrix", "random_su",
]

UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class EulerFactor:
	generator: Generator
	angle: float

	def __post_init__(self):
		if not math.isfinite(self.angle):
			raise DomainError(f"angle of {self.generator} is not finite")
		if self.generator.kind is GenKind.LADDER:
			raise DomainError("ladder generators are not Hermitian")


@dataclass
class EulerSequence:
	factors: list = field(default_factory=list)
	n: int = 2
	reconstruction_error: float = 0.0

	def __len__(self):
		return len(self.factors)

	def __iter__(self):
		return iter(self.factors)


def fundamental_matrix(n, angles):
	"""The n×n unitary of an AngleSet, i.e. its M=1 irrep."""
	if n < 2:
		raise DomainError(f"n must be at least 2, got {n}")
	return exact_unitary(IrrepShape(n, 1), angles)


def random_su(n, seed=0):
	"""A Haar-random element of SU(n)."""
	u = unitary_group.rvs(n, random_state=seed)
	return u / np.linalg.det(u)**(1/n)


def _givens_angles(a, b):
	"""
	Angles (ϑ, φ) such that exp(iφA) exp(iϑS) maps (a, b) to (r, 0), r > 0.

	In the 2×2 block S = σx/2 and A = -σy/2; the first exponential turns the
	Bloch vector of (a, b) about x into the x-z plane, the second about y
	onto the +z axis.
	"""
	r2 = abs(a)**2 + abs(b)**2
	if r2 < 1e-300:
		return 0.0, 0.0
	ab = np.conj(a)*b
	nx = 2*ab.real/r2
	ny = 2*ab.imag/r2
	nz = (abs(a)**2 - abs(b)**2)/r2
	theta = math.atan2(-ny, nz)
	phi = math.atan2(-nx, math.hypot(ny, nz))
	return theta, phi


def _givens_block(theta, phi):
	c,s = math.cos(phi/2), math.sin(phi/2)
	rot = np.array([[c, -s], [s, c]], dtype=complex)
	c,s = math.cos(theta/2), math.sin(theta/2)
	shr = np.array([[c, 1j*s], [1j*s, c]])
	return rot @ shr


def _fundamental_generators(n):
	shape = IrrepShape(n, 1)
	return lambda g: build_generator(shape, g).dense()


def sequence_matrix(factors, n):
	"""Product of the fundamental exponentials exp(i angle T), leftmost first."""
	gen = _fundamental_generators(n)
	res = np.eye(n, dtype=complex)
	for f in factors:
		if f.angle:
			res = res @ expih(gen(f.generator), f.angle)
	return res


def _diagonal_factors(delta):
	"""Cartan factors whose product is diag(exp(iδ_1) … exp(iδ_n))."""
	delta = np.array(delta, dtype=float)
	# det = 1: the last phase is fixed by the others
	delta[-1] = -delta[:-1].sum()
	sigma = 2*np.cumsum(delta[:-1])
	return [EulerFactor(Generator.diagonal(i), reduce_angle(s)) for i,s in enumerate(sigma, 1)]


def _jacobi(w):
	"""
	Reduce ``w`` to a diagonal by Givens pairs. Returns the rotation
	factors and the phases of the remaining diagonal.
	"""
	n = w.shape[0]
	w = w.copy()
	factors = []
	for c in range(n-1):
		for k in range(n-1, c, -1):
			theta, phi = _givens_angles(w[c,c], w[k,c])
			rows = [c,k]
			w[rows,:] = _givens_block(theta, phi) @ w[rows,:]
			factors.append(EulerFactor(Generator.symmetric(c+1,k+1), reduce_angle(-theta)))
			factors.append(EulerFactor(Generator.antisymmetric(c+1,k+1), reduce_angle(-phi)))

	return factors, np.angle(np.diag(w))


def euler_decompose(u, tol=1e-10, max_sweeps=4):
	"""
	Factor a unitary with unit determinant into n²-1 exponentials.

	The first sweep runs the elimination. If the reconstruction V misses
	``tol``, each further sweep folds the diagonal phases of V⁻¹u into the
	Cartan factors, so the length stays n²-1. After ``max_sweeps`` sweeps
	a ConvergenceError carries the last reconstruction error.
	"""
	u = np.asarray(u, dtype=complex)
	if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] < 2:
		raise DomainError(f"need a square matrix of size >= 2, got shape {u.shape}")
	n = u.shape[0]
	dev = np.linalg.norm(u.conj().T@u - np.eye(n), 2)
	if dev > UNITARY_TOL:
		raise DomainError(f"matrix is not unitary: |u'u-1| = {dev:.3e}")
	det = np.linalg.det(u)
	if abs(det-1) > UNITARY_TOL:
		raise DomainError(f"determinant is {det:.12g}, not 1")

	err = math.inf
	rot = delta = v = None
	for sweep in range(max_sweeps):
		if sweep == 0:
			rot, delta = _jacobi(u)
		else:
			# u = V·R with R diagonal up to rounding
			delta = delta + np.angle(np.diag(v.conj().T @ u))
		factors = rot + _diagonal_factors(delta)
		v = sequence_matrix(factors, n)
		err = float(np.linalg.norm(v - u, 2))
		logger.debug("decompose n=%d sweep %d: error %.3e", n, sweep, err)
		if err <= tol:
			return EulerSequence(factors, n, err)
		if sweep+1 < max_sweeps:
			logger.warning("decomposition error %.3e above %.3e, refining the diagonal", err, tol)
	raise ConvergenceError(f"no decomposition of SU({n}) element below {tol:.1e}", err)


def lift_sequence(seq, shape, cap=DENSE_CAP):
	"""
	Evaluate a fundamental Euler sequence in the irrep ``shape``.
	"""
	if seq.n != shape.n:
		raise DomainError(f"sequence is for n={seq.n}, irrep has n={shape.n}")
	N = shape.N
	if N > cap:
		raise ResourceError("dense dimension", N, cap)
	dense = {}
	res = np.eye(N, dtype=complex)
	for f in seq:
		if not f.angle:
			continue
		g = dense.get(f.generator)
		if g is None:
			g = dense[f.generator] = build_generator(shape, f.generator).dense()
		res = res @ expih(g, f.angle)
	return res
