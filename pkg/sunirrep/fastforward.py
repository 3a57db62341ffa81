"""
Fast-forwarding Cartan–Weyl exponentials through quadratic monomials.

With x_j = (a_j+a_j†)/√2 and p_j = i(a_j†-a_j)/√2 the generators read

	H_i     = (x_i²+p_i²)/4 - (x_{i+1}²+p_{i+1}²)/4
	S_{j,k} = (x_j x_k + p_j p_k)/2
	A_{j,k} = (p_j x_k - x_j p_k)/2

and each exponential factors into three exponentials of single monomials
(an sp(2,R) disentangling identity):

	exp(iτ(x²+p²)/2) = exp(i tan(τ/2)/2 p²) exp(i sin(τ)/2 x²) exp(i tan(τ/2)/2 p²)
	exp(iϑ S_{j,k})  = exp(i tan(ϑ/4) p_j p_k) exp(i sin(ϑ/2) x_j x_k) exp(i tan(ϑ/4) p_j p_k)
	exp(iφ A_{j,k})  = exp(-i tan(φ/4) x_j p_k) exp(i sin(φ/2) p_j x_k) exp(-i tan(φ/4) x_j p_k)

for angles in [-π/2, π/2]. Each monomial exponential is diagonal in position,
or in momentum, or in position on one mode and momentum on the other.
"""

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from ._util import DomainError, reduce_angle, center_angle
from .algebra import GenKind, Generator
from .decompose import EulerFactor, EulerSequence
from .oscillator import DiscreteOscillator, fock_operators

import logging
logger = logging.getLogger(__name__)

__all__ = [
	"Monomial", "FactorTerm", "FactorizationPlan",
	"claim1_angles", "split_factor", "expand_factor", "split_phases", "build_plan",
	"quadratic_form", "symplectic_matrix", "replay_plan",
	"TwoModeFock", "lemma_residual", "claim1_residual",
	"PHASE_BOUND",
]

SQRT2 = math.sqrt(2)

# small-angle bound for momentum-type exponentials
PHASE_BOUND = 1/(2*math.e)

HALF_PI = math.pi/2


class Monomial(str, Enum):
	XX = "XX"
	PP = "PP"
	XP = "XP"
	X2 = "X2"
	P2 = "P2"


@dataclass(frozen=True)
class FactorTerm:
	"""
	exp(i·angle·O) for a quadratic monomial O.

	For XP the modes satisfy j < k; ``transposed`` selects p_j x_k instead
	of x_j p_k. X2/P2 use j == k. ``source`` is the index of the Euler
	factor this term came from, ``rep`` the repetition index after phase
	splitting. ``flipped`` records that the source generator had its
	indices swapped to make j < k.
	"""
	monomial: Monomial
	j: int
	k: int
	angle: float
	transposed: bool = False
	source: int = 0
	rep: int = 0
	flipped: bool = False

	def __post_init__(self):
		if self.monomial in (Monomial.X2, Monomial.P2):
			if self.j != self.k:
				raise DomainError(f"{self.monomial.value} acts on one mode, got {self.j},{self.k}")
		elif self.j == self.k:
			raise DomainError(f"{self.monomial.value} needs two distinct modes")

	@property
	def label(self):
		if self.monomial is Monomial.XP and self.transposed:
			return "PX"
		return self.monomial.value


@dataclass
class FactorizationPlan:
	terms: list = field(default_factory=list)
	source: EulerSequence = None

	@property
	def r(self):
		return len(self.terms)

	def __iter__(self):
		return iter(self.terms)

	def __len__(self):
		return len(self.terms)


def claim1_angles(t):
	"""
	exp((K1+K2)t) = exp(αK2) exp(βK1) exp(αK2) for [K1,K2] = -2K3,
	[K3,K1] = 2K1, [K3,K2] = -2K2, with

		α = tan(t/√2)/√2,  β = sin(√2 t)/√2
	"""
	if abs(t)/SQRT2 >= HALF_PI*(1-1e-12):
		raise DomainError(f"t={t} is at or beyond the tangent pole; split the phase first")
	return math.tan(t/SQRT2)/SQRT2, math.sin(SQRT2*t)/SQRT2


def split_factor(f):
	"""
	Split an Euler factor into equal pieces with angles in [-π/2, π/2].

	Pieces of the same generator commute, so the product is unchanged.
	"""
	a = center_angle(f.angle)
	t = max(1, math.ceil(abs(a)/HALF_PI - 1e-12))
	if t > 1:
		logger.debug("split %s angle %.6g into %d", f.generator, a, t)
	return [EulerFactor(f.generator, reduce_angle(a/t))]*t


def _single_mode(i, tau, source, flipped=False):
	alpha, beta = claim1_angles(tau/SQRT2)
	a = alpha/SQRT2
	b = beta/SQRT2
	return [
		FactorTerm(Monomial.P2, i, i, a, source=source, flipped=flipped),
		FactorTerm(Monomial.X2, i, i, b, source=source, flipped=flipped),
		FactorTerm(Monomial.P2, i, i, a, source=source, flipped=flipped),
	]


def expand_factor(f, source=0):
	"""
	The monomial terms of one Euler factor, whose angle must lie in
	[-π/2, π/2] modulo 4π.
	"""
	g = f.generator
	a = center_angle(f.angle)
	if abs(a) > HALF_PI + 1e-12:
		raise DomainError(f"angle {a:.6g} of {g} is outside [-π/2, π/2]")

	j,k = g.j, g.k
	flipped = False
	if g.kind in (GenKind.SYMMETRIC, GenKind.ANTISYMMETRIC) and j > k:
		# S is symmetric in j,k and A_{k,j} = -A_{j,k}
		j,k = k,j
		flipped = True
		if g.kind is GenKind.ANTISYMMETRIC:
			a = -a
		logger.debug("canonicalized %s to j<k, angle %.6g", g, a)

	if g.kind is GenKind.DIAGONAL:
		# H_i = (x_i²+p_i²)/4 - (x_{i+1}²+p_{i+1}²)/4
		return _single_mode(j, a/2, source) + _single_mode(j+1, -a/2, source)

	alpha, beta = claim1_angles(a/(2*SQRT2))
	a1 = alpha*SQRT2
	a2 = beta*SQRT2
	if g.kind is GenKind.SYMMETRIC:
		return [
			FactorTerm(Monomial.PP, j, k, a1, source=source, flipped=flipped),
			FactorTerm(Monomial.XX, j, k, a2, source=source, flipped=flipped),
			FactorTerm(Monomial.PP, j, k, a1, source=source, flipped=flipped),
		]
	if g.kind is GenKind.ANTISYMMETRIC:
		return [
			FactorTerm(Monomial.XP, j, k, -a1, source=source, flipped=flipped),
			FactorTerm(Monomial.XP, j, k, a2, transposed=True, source=source, flipped=flipped),
			FactorTerm(Monomial.XP, j, k, -a1, source=source, flipped=flipped),
		]
	raise DomainError(f"cannot expand {g}")


def split_phases(plan, bound=PHASE_BOUND):
	"""
	Replace every PP or XP term with |angle| > bound by t = ⌈2e|angle|⌉
	copies of angle/t. Other terms are left alone.
	"""
	terms = []
	for term in plan.terms:
		if term.monomial in (Monomial.PP, Monomial.XP) and abs(term.angle) > bound:
			t = math.ceil(abs(term.angle)/bound)
			terms.extend(replace(term, angle=term.angle/t, rep=i) for i in range(t))
		else:
			terms.append(term)
	return FactorizationPlan(terms, plan.source)


def build_plan(seq, bound=PHASE_BOUND):
	"""Euler sequence -> split, expanded and phase-split monomial plan."""
	terms = []
	for b,f in enumerate(seq):
		if not f.angle:
			continue
		for piece in split_factor(f):
			terms.extend(expand_factor(piece, source=b))
	plan = split_phases(FactorizationPlan(terms, seq), bound)
	logger.debug("plan: %d factors -> %d terms", len(seq), plan.r)
	return plan


# Heisenberg-picture check. With r = (x_1…x_n, p_1…p_n) and G = ½ rᵀKr,
# exp(-iθG) r exp(iθG) = expm(-θΩK) r, Ω = [[0,1],[-1,0]].

def _omega(n):
	z = np.zeros((n,n))
	one = np.eye(n)
	return np.block([[z, one], [-one, z]])


def quadratic_form(item, n):
	"""
	The symmetric 2n×2n matrix K with G = ½ rᵀKr, for a FactorTerm or a
	Generator. Mode indices are 1-based.
	"""
	K = np.zeros((2*n, 2*n))

	def put(a, b, v):
		K[a,b] += v
		if a != b:
			K[b,a] += v

	def x(m):
		return m-1
	def p(m):
		return n+m-1

	if isinstance(item, FactorTerm):
		j,k = item.j, item.k
		mono = item.monomial
		if mono is Monomial.X2:
			put(x(j), x(j), 2)
		elif mono is Monomial.P2:
			put(p(j), p(j), 2)
		elif mono is Monomial.XX:
			put(x(j), x(k), 1)
		elif mono is Monomial.PP:
			put(p(j), p(k), 1)
		elif item.transposed:
			put(p(j), x(k), 1)
		else:
			put(x(j), p(k), 1)
		return K

	g = item
	j,k = g.j, g.k
	if g.kind is GenKind.DIAGONAL:
		for m,s in ((j, 0.5), (k, -0.5)):
			put(x(m), x(m), s)
			put(p(m), p(m), s)
	elif g.kind is GenKind.SYMMETRIC:
		put(x(j), x(k), 0.5)
		put(p(j), p(k), 0.5)
	elif g.kind is GenKind.ANTISYMMETRIC:
		put(p(j), x(k), 0.5)
		put(x(j), p(k), -0.5)
	else:
		raise DomainError(f"{g} is not Hermitian")
	return K


def symplectic_matrix(item, angle, n):
	return scipy.linalg.expm(-angle * _omega(n) @ quadratic_form(item, n))


def replay_plan(plan, n):
	"""
	Largest deviation, over the source factors, between the linear map of a
	factor and the product of the maps of its terms.
	"""
	if plan.source is None:
		raise DomainError("plan has no source sequence")
	prod = {}
	for term in plan:
		m = symplectic_matrix(term, term.angle, n)
		prod[term.source] = prod[term.source] @ m if term.source in prod else m
	err = 0.0
	for b,f in enumerate(plan.source):
		want = symplectic_matrix(f.generator, f.angle, n)
		got = prod.get(b, np.eye(2*n))
		err = max(err, float(np.abs(got-want).max()))
	return err


class TwoModeFock:
	"""
	Truncated ladder, position and momentum operators on two modes.

	The basis state |m_1, m_2> has index m_1·dim + m_2.
	"""
	def __init__(self, dim):
		if dim < 2:
			raise DomainError(f"Fock dimension must be at least 2, got {dim}")
		self.dim = dim
		X,P = fock_operators(dim)
		a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
		one = scipy.sparse.identity(dim, format="csr")

		def both(op):
			op = scipy.sparse.csr_matrix(op)
			return {1: scipy.sparse.kron(op, one, "csr"), 2: scipy.sparse.kron(one, op, "csr")}

		self.x = both(X)
		self.p = both(P)
		self.a = both(a)

	def index(self, m1, m2):
		return m1*self.dim + m2

	def basis(self, pairs):
		"""Columns |m_1, m_2> for each pair, as a dense (dim², len) array."""
		pairs = list(pairs)
		V = np.zeros((self.dim*self.dim, len(pairs)), dtype=complex)
		V[[self.index(*mm) for mm in pairs], np.arange(len(pairs))] = 1
		return V

	def monomial(self, term):
		"""The sparse operator of a term's monomial; modes must be 1 or 2."""
		j,k = term.j, term.k
		if not {j,k} <= {1,2}:
			raise DomainError(f"{term.label}({j},{k}) does not act on modes 1,2")
		mono = term.monomial
		if mono is Monomial.X2:
			return self.x[j] @ self.x[j]
		if mono is Monomial.P2:
			return self.p[j] @ self.p[j]
		if mono is Monomial.XX:
			return self.x[j] @ self.x[k]
		if mono is Monomial.PP:
			return self.p[j] @ self.p[k]
		if term.transposed:
			return self.p[j] @ self.x[k]
		return self.x[j] @ self.p[k]

	def apply(self, term, V):
		"""exp(i·angle·O) V, without forming the exponential."""
		return scipy.sparse.linalg.expm_multiply(1j*term.angle*self.monomial(term).tocsc(), V)

	def generator(self, g):
		"""H_1, S_12 or A_12 in the Jordan–Schwinger form."""
		a1,a2 = self.a[1], self.a[2]
		if g.kind is GenKind.DIAGONAL:
			return (a1.T@a1 - a2.T@a2) * 0.5
		if g.kind is GenKind.SYMMETRIC:
			return (a1.T@a2 + a2.T@a1) * 0.5
		if g.kind is GenKind.ANTISYMMETRIC:
			return (a1.T@a2 - a2.T@a1) * 0.5j
		raise DomainError(f"{g} is not Hermitian")


def lemma_residual(factor, dim=64, mmax=16):
	"""
	Check the factorization of one Euler factor in truncated Fock space.

	Both sides are applied to all two-mode number states with
	m_1+m_2 <= mmax; returns the largest column deviation.
	"""
	g = factor.generator
	fock = TwoModeFock(dim)
	# local modes 1 and 2
	local = Generator(g.kind, 1, 2)
	G = fock.generator(local)

	V = fock.basis((m1,m2) for m1 in range(mmax+1) for m2 in range(mmax+1-m1))
	lhs = scipy.sparse.linalg.expm_multiply(1j*factor.angle*G.tocsc(), V)

	rhs = V
	for t in reversed(expand_factor(EulerFactor(local, factor.angle))):
		rhs = fock.apply(t, rhs)
	return float(np.linalg.norm(lhs-rhs, axis=0).max())


def claim1_residual(t, L=128, mmax=16):
	"""
	Check the disentangling identity with K1 = i x̄²/√2, K2 = i p̄²/√2 on a
	discrete oscillator, applied to the Hermite states 0…mmax.
	"""
	osc = DiscreteOscillator(L)
	alpha, beta = claim1_angles(t)
	x2 = osc.grid**2
	F = osc.dft_matrix()
	p2 = F.conj().T @ np.diag(x2) @ F
	lhs_gen = (np.diag(x2) + p2)/SQRT2
	lhs = scipy.linalg.expm(1j*t*lhs_gen)

	V = osc.states(mmax).T.astype(complex)
	want = lhs @ V

	def kick_p(v, c):
		return osc.icdft(np.exp(1j*c*x2)[:,None] * osc.cdft(v, axis=0), axis=0)

	got = kick_p(V, alpha/SQRT2)
	got = np.exp(1j*beta/SQRT2*x2)[:,None] * got
	got = kick_p(got, alpha/SQRT2)
	return float(np.linalg.norm(want-got, axis=0).max())
