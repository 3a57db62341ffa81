"""
The discrete quantum harmonic oscillator.

On L grid points x_j = j·sqrt(2π/L), j = -L/2…L/2-1, position is the
diagonal matrix x̄ and momentum is p̄ = F⁻¹ x̄ F with the centered DFT

	F_{jk} = exp(-2πi j k / L) / sqrt(L)      j,k = -L/2…L/2-1

so that p̄ approximates -i d/dx. The discrete Hermite states are the
sampled Hermite functions, (2π/L)^{1/4} ψ_m(x_j); they are approximate
eigenvectors of H̄ = (x̄² + p̄²)/2 and of F, with errors that decay
exponentially in L.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from ._util import DomainError, fit_decay

import logging
logger = logging.getLogger(__name__)

__all__ = [
	"DiscreteOscillator", "HermiteState",
	"hermite_function", "hermite_table", "hermite_state",
	"eigen_residual", "fourier_eigen_residual", "matrix_element_residual",
	"matrix_element_continuum", "fock_operators",
	"residual_table", "sizing_L",
]

PI_M14 = math.pi**-0.25
LN2 = math.log(2)
SQRT2 = math.sqrt(2)

# a resolved level keeps this many Airy lengths (2m+1)^(-1/6) between its
# turning point sqrt(2m+1) and the grid edge sqrt(πL/2)
AIRY_MARGIN = 4.0

# rescale the recurrence when the exponent gets this large
_EXP_LIMIT = 256


def _finish(p, e, x):
	"""p · 2^e · exp(-x²/2), computed in the log domain; underflow gives 0."""
	with np.errstate(divide="ignore"):
		logabs = np.log(np.abs(p)) + e*LN2 - x*x/2
	return np.sign(p) * np.exp(logabs)


def _hermite_rows(mmax, x):
	"""
	Yield ψ_0(x) … ψ_mmax(x) via the normalized recurrence

		ψ_m = x sqrt(2/m) ψ_{m-1} - sqrt((m-1)/m) ψ_{m-2}

	run without the Gaussian factor and with a shared binary exponent.
	"""
	x = np.asarray(x, dtype=float)
	e = np.zeros(x.shape, dtype=np.int64)
	p0 = np.full(x.shape, PI_M14)
	yield _finish(p0, e, x)
	if mmax < 1:
		return
	p1 = SQRT2 * x * p0
	yield _finish(p1, e, x)
	for m in range(2, mmax+1):
		p0, p1 = p1, x*math.sqrt(2/m)*p1 - math.sqrt((m-1)/m)*p0
		ex = np.maximum(np.frexp(p0)[1], np.frexp(p1)[1])
		shift = np.where(ex > _EXP_LIMIT, ex, 0)
		if shift.any():
			p0 = np.ldexp(p0, -shift)
			p1 = np.ldexp(p1, -shift)
			e += shift
		yield _finish(p1, e, x)


def _hermite_scalar(m, x):
	p0 = PI_M14
	if m == 0:
		return float(_finish(p0, 0, x))
	p1 = SQRT2*x*p0
	e = 0
	for k in range(2, m+1):
		p0, p1 = p1, x*math.sqrt(2/k)*p1 - math.sqrt((k-1)/k)*p0
		ex = max(math.frexp(p0)[1], math.frexp(p1)[1])
		if ex > _EXP_LIMIT:
			p0 = math.ldexp(p0, -ex)
			p1 = math.ldexp(p1, -ex)
			e += ex
	if p1 == 0:
		return 0.0
	logabs = math.log(abs(p1)) + e*LN2 - x*x/2
	if logabs < -745:
		return 0.0
	return math.copysign(math.exp(logabs), p1)


def hermite_function(m, x):
	"""
	The normalized Hermite function ψ_m(x) = e^{-x²/2} H_m(x) / sqrt(2^m m! sqrt(π)).

	Accepts a scalar or an array. Stable for very large m.
	"""
	if m < 0:
		raise DomainError(f"m must not be negative, got {m}")
	if np.isscalar(x):
		return _hermite_scalar(int(m), float(x))
	for k,row in enumerate(_hermite_rows(m, x)):
		if k == m:
			return row


def hermite_table(mmax, x):
	"""All ψ_0 … ψ_mmax on the points x, as an (mmax+1, len(x)) array."""
	if mmax < 0:
		raise DomainError(f"mmax must not be negative, got {mmax}")
	return np.array(list(_hermite_rows(mmax, x)))


def fock_operators(dim):
	"""Truncated X = (a+a†)/√2 and P = i(a†-a)/√2, as dense dim×dim arrays."""
	a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
	ad = a.T
	return (a+ad)/SQRT2, 1j*(ad-a)/SQRT2


def sizing_L(M, eps):
	"""
	Grid size suggested by the asymptotic analysis, L ~ M^2.25 / eps^3.25,
	rounded up to a power of two. Advisory only; it is far larger than
	what the measured errors require.
	"""
	if eps <= 0:
		raise DomainError("eps must be positive")
	L = max(2.0, max(M,1)**2.25 / eps**3.25)
	return 1 << math.ceil(math.log2(L))


class DiscreteOscillator:
	"""
	A discrete oscillator on L grid points. Immutable.
	"""
	def __init__(self, L, workers=None):
		if not isinstance(L, (int, np.integer)) or L < 2 or L % 2:
			raise DomainError(f"L must be an even integer >= 2, got {L!r}")
		if L & (L-1):
			logger.debug("L=%d is not a power of two", L)
		self.L = int(L)
		self.workers = workers
		self.dx = math.sqrt(2*math.pi/L)
		self.grid = np.arange(-L//2, L//2) * self.dx
		self.edge = L//2 * self.dx
		self.grid.setflags(write=False)
		self._table = {}

	def __repr__(self):
		return f"DiscreteOscillator(L={self.L})"

	@property
	def xbar(self):
		return self.grid

	def cdft(self, v, axis=-1):
		"""Apply F along ``axis``."""
		v = scipy.fft.ifftshift(v, axes=axis)
		v = scipy.fft.fft(v, axis=axis, norm="ortho", workers=self.workers)
		return scipy.fft.fftshift(v, axes=axis)

	def icdft(self, v, axis=-1):
		"""Apply F⁻¹ along ``axis``."""
		v = scipy.fft.ifftshift(v, axes=axis)
		v = scipy.fft.ifft(v, axis=axis, norm="ortho", workers=self.workers)
		return scipy.fft.fftshift(v, axes=axis)

	def dft_matrix(self):
		"""F as a dense matrix; for checks at small L."""
		j = np.arange(-self.L//2, self.L//2)
		return np.exp(-2j*np.pi*np.outer(j, j)/self.L) / math.sqrt(self.L)

	def pbar(self, v):
		return self.icdft(self.grid * self.cdft(v))

	def hamiltonian(self, v):
		"""H̄ v = (x̄² v + F⁻¹ x̄² F v)/2."""
		x2 = self.grid**2
		return (x2*v + self.icdft(x2*self.cdft(v)))/2

	def check_m(self, m):
		if not 0 <= m < self.L:
			raise DomainError(f"m={m} is outside [0,{self.L-1}]")
		if not self.resolved(m):
			logger.warning("m=%d is not resolved on L=%d (largest resolved level %d); no decay expected",
				m, self.L, self.max_level)

	def resolved(self, m):
		"""
		Whether ψ_m fits on the grid, in position and equally in momentum.
		Resolved states have norm within 1e-6 of 1.
		"""
		w = math.sqrt(2*m+1)
		return w + AIRY_MARGIN * w**(-1/3) <= self.edge

	@property
	def max_level(self):
		"""The largest resolved level, -1 if there is none."""
		m = -1
		while m+1 < self.L and self.resolved(m+1):
			m += 1
		return m

	def states(self, mmax):
		"""
		The discrete Hermite states 0…mmax as rows of a real (mmax+1, L) array.
		"""
		if not 0 <= mmax < self.L:
			raise DomainError(f"mmax={mmax} is outside [0,{self.L-1}]")
		tab = self._table.get(mmax)
		if tab is None:
			tab = (2*math.pi/self.L)**0.25 * hermite_table(mmax, self.grid)
			tab.setflags(write=False)
			self._table[mmax] = tab
		return tab


@dataclass(frozen=True)
class HermiteState:
	m: int
	L: int
	amplitudes: np.ndarray

	@property
	def norm(self):
		return float(np.linalg.norm(self.amplitudes))


def hermite_state(osc, m):
	"""The (unnormalized) discrete Hermite state |ψ_m> on ``osc``'s grid."""
	if not 0 <= m < osc.L:
		raise DomainError(f"m={m} is outside [0,{osc.L-1}]")
	amp = (2*math.pi/osc.L)**0.25 * hermite_function(m, osc.grid)
	return HermiteState(m, osc.L, amp.astype(complex))


def eigen_residual(osc, m):
	"""‖(H̄ - (m+1/2)) ψ_m‖."""
	osc.check_m(m)
	v = hermite_state(osc, m).amplitudes
	return float(np.linalg.norm(osc.hamiltonian(v) - (m+0.5)*v))


def fourier_eigen_residual(osc, m):
	"""
	Distance of ψ_m from being an eigenvector of the centered DFT with
	eigenvalue i^m, measured as ‖F⁻¹ψ_m - i^m ψ_m‖ (which equals
	‖Fψ_m - (-i)^m ψ_m‖ since F is unitary).
	"""
	osc.check_m(m)
	v = hermite_state(osc, m).amplitudes
	return float(np.linalg.norm(osc.icdft(v) - 1j**(m % 4) * v))


def matrix_element_continuum(m, mp, a, b):
	"""<m'| x^a p^b |m> of the continuum oscillator, from the ladder algebra."""
	dim = max(m, mp) + a + b + 2
	X,P = fock_operators(dim)
	op = np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(P, b)
	return complex(op[mp, m])


def _check_power(a, b):
	if not (0 <= a <= 4 and 0 <= b <= 4):
		raise DomainError(f"powers must be in 0…4, got a={a} b={b}")


def matrix_element_discrete(osc, m, mp, a, b):
	"""<ψ_m'| x̄^a p̄^b |ψ_m>, operators applied right to left."""
	_check_power(a, b)
	v = hermite_state(osc, m).amplitudes
	w = hermite_state(osc, mp).amplitudes
	if b:
		v = osc.icdft(osc.grid**b * osc.cdft(v))
	v = osc.grid**a * v
	return complex(np.vdot(w, v))


def matrix_element_residual(osc, m, mp, a, b):
	"""|<ψ_m'| x̄^a p̄^b |ψ_m> - <m'| x^a p^b |m>|."""
	_check_power(a, b)
	osc.check_m(m)
	osc.check_m(mp)
	return abs(matrix_element_discrete(osc, m, mp, a, b) - matrix_element_continuum(m, mp, a, b))


QUANTITIES = ("eigen", "fourier", "matelem")


def residual_table(L_list, m_list, quantity="eigen", mp=None, a=0, b=0, floor=1e-12):
	"""
	Tabulate a residual over a grid of L and m.

	Returns (rows, fits): rows are (L, m, m', a, b, residual) tuples, fits
	maps m to the ErrorFitResult of its decay in L (only when at least three
	L values are given).
	"""
	if quantity not in QUANTITIES:
		raise DomainError(f"unknown quantity {quantity!r}, use one of {QUANTITIES}")
	rows = []
	for m in m_list:
		for L in L_list:
			osc = DiscreteOscillator(L)
			if quantity == "eigen":
				r = eigen_residual(osc, m)
				rows.append((L, m, m, 0, 0, r))
			elif quantity == "fourier":
				r = fourier_eigen_residual(osc, m)
				rows.append((L, m, m, 0, 0, r))
			else:
				m2 = m if mp is None else mp
				r = matrix_element_residual(osc, m, m2, a, b)
				rows.append((L, m, m2, a, b, r))
			logger.debug("%s L=%d m=%d: %.3e", quantity, L, m, r)

	fits = {}
	if len(set(L_list)) >= 3:
		for m in m_list:
			fits[m] = fit_decay([(r[0], r[5]) for r in rows if r[1] == m], floor=floor)
	return rows, fits
