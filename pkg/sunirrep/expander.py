"""
Quantum expanders from integer quaternions.

For a prime p the integer solutions of a_0² + a_1² + a_2² + a_3² = p give,
up to units, p+1 rotations of SU(2) by θ = 2·arccos(a_0/√p) about the axis
(a_1, a_2, a_3)/√(p - a_0²). Used as equally weighted unitary Kraus
operators in the (M+1)-dimensional irrep they form a channel whose second
singular value approaches the Ramanujan bound 2√(D-1)/D, D = p+1.
"""

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
import sympy

from ._util import DomainError, ConvergenceError, ResourceError, pairwise_sum
from .algebra import AngleSet, expih, spin_matrices, DENSE_CAP
from .combinatorics import IrrepShape

import logging
logger = logging.getLogger(__name__)

__all__ = [
	"QuaternionSolution", "ExpanderSpec", "ChannelSpectrum",
	"distinct_solutions", "lps_spec", "build_channel", "spectral_gap",
	"pipeline_kraus", "ramanujan_bound", "apply_channel", "check_prime",
]

# superoperators up to this N are handled densely
DENSE_SUPEROP = 20


@dataclass(frozen=True)
class QuaternionSolution:
	a: tuple
	p: int

	def __post_init__(self):
		if len(self.a) != 4 or sum(x*x for x in self.a) != self.p:
			raise DomainError(f"{self.a} is not a solution for p={self.p}")

	@property
	def theta(self):
		return 2*math.acos(self.a[0]/math.sqrt(self.p))

	@property
	def axis(self):
		r = math.sqrt(self.p - self.a[0]**2)
		return tuple(x/r for x in self.a[1:])


def check_prime(p):
	if not isinstance(p, (int, np.integer)) or not sympy.isprime(int(p)):
		raise DomainError(f"p={p!r} is not a prime")
	p = int(p)
	if p % 4 != 1 and p != 3:
		raise DomainError(f"p={p} is neither 3 nor 1 mod 4")
	return p


def distinct_solutions(p):
	"""
	The p+1 solutions kept for the expander.

	For p ≡ 1 mod 4 exactly one coordinate is odd; those with a_0 odd and
	positive are kept. For p = 3 all solutions have a_0 = 0; the four with
	a_1+a_2+a_3 > 0 are kept.
	"""
	p = check_prime(p)
	r = math.isqrt(p)
	rng = range(-r, r+1)
	sols = []
	for a in product(rng, repeat=4):
		if sum(x*x for x in a) != p:
			continue
		if p == 3:
			keep = a[0] == 0 and sum(a[1:]) > 0
		else:
			keep = a[0] > 0 and a[0] % 2 == 1
		if keep:
			sols.append(QuaternionSolution(a, p))
	sols.sort(key=lambda s: s.a, reverse=True)
	if len(sols) != p+1:
		raise DomainError(f"found {len(sols)} solutions for p={p}, expected {p+1}")
	return sols


def ramanujan_bound(D):
	"""2√(D-1)/D."""
	if D < 2:
		raise DomainError(f"degree must be at least 2, got {D}")
	return 2*math.sqrt(D-1)/D


@dataclass
class ExpanderSpec:
	D: int
	rotations: list
	shape: IrrepShape
	p: int = 0

	def __post_init__(self):
		if self.shape.n != 2:
			raise DomainError(f"expanders use SU(2) irreps, got n={self.shape.n}")
		if len(self.rotations) != self.D:
			raise DomainError(f"need {self.D} rotations, got {len(self.rotations)}")
		for _,ax in self.rotations:
			if abs(math.hypot(*ax) - 1) > 1e-12:
				raise DomainError(f"axis {ax} is not a unit vector")

	@property
	def N(self):
		return self.shape.N

	@property
	def bound(self):
		return ramanujan_bound(self.D)


def lps_spec(p, M):
	"""The expander of prime p acting on the irrep of dimension M+1."""
	sols = distinct_solutions(p)
	rot = [(s.theta, s.axis) for s in sols]
	return ExpanderSpec(len(sols), rot, IrrepShape(2, M), p)


def build_channel(spec, cap=DENSE_CAP):
	"""
	U_d = exp(-iθ (n_x J_x + n_y J_y + n_z J_z)) for each rotation, with
	(J_x, J_y, J_z) = (S_12, A_12, H_1).
	"""
	if spec.N > cap:
		raise ResourceError("dense dimension", spec.N, cap)
	J = spin_matrices(spec.shape.M)
	res = []
	for theta,ax in spec.rotations:
		h = ax[0]*J[0] + ax[1]*J[1] + ax[2]*J[2]
		res.append(expih(h, -theta))
	return res


def pipeline_kraus(spec, L, **kw):
	"""
	The Kraus unitaries of ``spec``, each one emulated by the oscillator
	pipeline at grid size L. Returns the list and the largest spectral
	error against the exact exponentials.
	"""
	from .pipeline import simulate

	res = []
	err = 0.0
	for theta,(nx,ny,nz) in spec.rotations:
		angles = AngleSet(2, sigma=[-theta*nz], theta={(1,2): -theta*nx}, phi={(1,2): -theta*ny})
		r = simulate(spec.shape, angles, L, **kw)
		res.append(r.sim_unitary)
		err = max(err, r.spectral_error)
	return res, err


def apply_channel(kraus, X, adjoint=False):
	"""(1/D) Σ U X U†, or (1/D) Σ U† X U."""
	if adjoint:
		terms = [U.conj().T @ X @ U for U in kraus]
	else:
		terms = [U @ X @ U.conj().T for U in kraus]
	return pairwise_sum(terms) / len(kraus)


@dataclass
class ChannelSpectrum:
	N: int
	singular_values: list = field(default_factory=list)
	lam: float = 0.0
	bound: float = 1.0
	residual: float = 0.0

	@property
	def margin(self):
		return self.bound - self.lam

	@property
	def gap(self):
		return 1 - self.lam


def _traceless(X, N):
	return X - np.trace(X)/N * np.eye(N)


def _dense_spectrum(kraus, N):
	S = pairwise_sum([np.kron(U, U.conj()) for U in kraus]) / len(kraus)
	one = np.eye(N).ravel() / math.sqrt(N)
	P = np.eye(N*N) - np.outer(one, one)
	s = scipy.linalg.svdvals(P @ S @ P)
	# the identity direction contributes one zero
	return list(s[:N*N-1]), 0.0


def _iterative_spectrum(kraus, N, tol, max_iter, seed, k):
	def mv(x, adjoint=False):
		X = _traceless(np.asarray(x).reshape(N, N), N)
		return _traceless(apply_channel(kraus, X, adjoint), N).ravel()

	op = scipy.sparse.linalg.LinearOperator(
		(N*N, N*N), matvec=mv, rmatvec=lambda x: mv(x, True), dtype=complex)
	rng = np.random.default_rng(seed)
	v0 = _traceless(rng.standard_normal((N, N)) + 1j*rng.standard_normal((N, N)), N).ravel()
	try:
		u,s,vh = scipy.sparse.linalg.svds(op, k=k, tol=tol, maxiter=max_iter, v0=v0, solver="arpack")
	except scipy.sparse.linalg.ArpackNoConvergence as exc:
		vecs = exc.eigenvectors
		cand = list(vecs.T) if vecs is not None and np.size(vecs) else [v0]
		res = min(_pair_residual(op, x) for x in cand)
		raise ConvergenceError(f"no singular values for N={N} after {max_iter} iterations", res) from exc
	order = np.argsort(s)[::-1]
	s = s[order]
	u = u[:,order[0]]
	v = vh[order[0]].conj()
	res = max(float(np.linalg.norm(op.matvec(v) - s[0]*u)), float(np.linalg.norm(op.rmatvec(u) - s[0]*v)))
	return list(s), res


def _pair_residual(op, v):
	"""‖A†u - σv‖ for the singular pair that right vector ``v`` suggests."""
	v = np.asarray(v, dtype=complex)
	v = v / np.linalg.norm(v)
	w = op.matvec(v)
	s = float(np.linalg.norm(w))
	if s == 0:
		return float(np.linalg.norm(op.rmatvec(w)))
	return float(np.linalg.norm(op.rmatvec(w/s) - s*v))


def spectral_gap(kraus, tol=1e-12, max_iter=5000, seed=0, residual_tol=1e-10, k=4):
	"""
	The largest singular value of X ↦ (1/D) Σ U_d X U_d† on traceless X.

	Small N use the dense superoperator; larger ones a matrix-free
	Lanczos solver started from a seeded random traceless matrix.
	"""
	D = len(kraus)
	if D < 2:
		raise DomainError(f"need at least 2 Kraus operators, got {D}")
	N = kraus[0].shape[0]
	if N < 2:
		raise DomainError("the traceless subspace of a 1×1 channel is empty")
	if N <= DENSE_SUPEROP:
		sv, res = _dense_spectrum(kraus, N)
	else:
		sv, res = _iterative_spectrum(kraus, N, tol, max_iter, seed, min(k, N*N-2))
		logger.debug("N=%d: top singular values %s, residual %.2e", N, sv, res)
		if res > residual_tol:
			raise ConvergenceError(f"singular value for N={N} did not converge", res)
	spec = ChannelSpectrum(N, sv, float(sv[0]), ramanujan_bound(D), res)
	logger.info("N=%d D=%d: λ=%.12f bound %.12f", N, D, spec.lam, spec.bound)
	return spec
