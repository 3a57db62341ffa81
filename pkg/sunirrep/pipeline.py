"""
Classical emulation of the oscillator-based circuit.

A basis state |ℓ> of the irrep is mapped to the product of discrete
Hermite states |ψ_{m_1}> ⊗ … ⊗ |ψ_{m_n}> on an L^n grid. The monomial
plan of the element is applied there as diagonal phases, some of them
conjugated by centered DFTs on single axes, and the result is projected
back onto the embedded basis. The projected N×N matrix is compared with
the exactly exponentiated irrep unitary.
"""

import math
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

import anyio
import numpy as np
import scipy.linalg

from ._util import DomainError, ResourceError, CtxObj, fit_decay
from .algebra import AngleSet, exact_unitary, spin_matrices, expih, DENSE_CAP
from .combinatorics import composition_table
from .decompose import euler_decompose, fundamental_matrix
from .fastforward import Monomial, TwoModeFock, build_plan
from .oscillator import DiscreteOscillator

import logging
logger = logging.getLogger(__name__)

__all__ = [
	"Embedding", "PipelineResult", "KickedTopRun", "ColumnPool",
	"apply_factor", "apply_plan",
	"simulate", "simulate_async", "error_sweep", "error_sweep_async",
	"kicked_top_demo", "term_action", "fock_term_action",
	"admissible", "MEM_CAP", "OCCUPATION_RATIO",
]

# complex entries of one grid vector
MEM_CAP = 2**26

# largest M/L for which the embedded columns are near-orthonormal
OCCUPATION_RATIO = 0.375


def _grid_modes(size, L):
	n = 0
	s = size
	while s > 1 and s % L == 0:
		s //= L
		n += 1
	if s != 1 or n == 0:
		raise DomainError(f"state length {size} is not a power of L={L}")
	return n


def apply_factor(state, term, osc):
	"""
	exp(i·angle·O) applied to a grid state.

	``state`` has the grid as its last axis, of length L^n, mode 1 being the
	slowest index; leading axes are a batch. Position-type factors are
	diagonal. Momentum factors are diagonal after a centered DFT on their
	own axis; the momentum grid equals the position grid.
	"""
	state = np.asarray(state)
	if not term.angle:
		return state
	L = osc.L
	n = _grid_modes(state.shape[-1], L)
	if not (1 <= term.j <= n and 1 <= term.k <= n):
		raise DomainError(f"{term.label}({term.j},{term.k}) does not fit {n} modes")

	batch = state.shape[:-1]
	nb = len(batch)
	v = state.reshape(batch + (L,)*n).astype(complex)
	aj = nb + term.j - 1
	ak = nb + term.k - 1
	x = osc.grid
	mono = term.monomial

	bshape = [1]*v.ndim
	bshape[aj] = L
	if mono in (Monomial.X2, Monomial.P2):
		phase = np.exp(1j*term.angle*x*x).reshape(bshape)
		fourier = [aj] if mono is Monomial.P2 else []
	else:
		bshape[ak] = L
		# x_a x_b is symmetric, so axis order does not matter
		phase = np.exp(1j*term.angle*np.multiply.outer(x, x)).reshape(bshape)
		if mono is Monomial.XX:
			fourier = []
		elif mono is Monomial.PP:
			fourier = [aj, ak]
		elif term.transposed:
			fourier = [aj]
		else:
			fourier = [ak]

	for a in fourier:
		v = osc.cdft(v, axis=a)
	v = v * phase
	for a in fourier:
		v = osc.icdft(v, axis=a)
	return v.reshape(state.shape)


def apply_plan(state, plan, osc):
	"""Apply a plan's product of exponentials, rightmost term first."""
	for term in reversed(plan.terms):
		state = apply_factor(state, term, osc)
	return state


class Embedding:
	"""
	The map from irrep basis states to products of discrete Hermite states.

	Only the per-mode Hermite table is stored. The Gram matrix of the
	embedded columns is a product of single-mode overlaps; if it deviates
	from the identity by more than ``gram_tol`` the projection solves with
	it instead of assuming orthonormal columns.
	"""
	def __init__(self, shape, osc, gram_tol=1e-10, mem_cap=MEM_CAP):
		self.shape = shape
		self.osc = osc
		self.size = osc.L**shape.n
		if self.size > mem_cap:
			raise ResourceError("grid size L^n", self.size, mem_cap)
		self.table = composition_table(shape)
		self.psi = osc.states(shape.M)

		g = self.psi @ self.psi.T
		G = np.ones((shape.N, shape.N))
		for i in range(shape.n):
			t = self.table[:,i]
			G *= g[np.ix_(t, t)]
		self.gram = G
		self.gram_deviation = float(np.linalg.norm(G - np.eye(shape.N), 2))
		self.corrected = self.gram_deviation > gram_tol
		if self.corrected:
			logger.debug("Gram deviation %.3e, using the corrected projector", self.gram_deviation)
			self._chol = scipy.linalg.cho_factor(G)

	def column(self, ell):
		"""Embedded column ℓ, shaped (L,)*n."""
		v = self.psi[self.table[ell,0]]
		for m in self.table[ell,1:]:
			v = np.multiply.outer(v, self.psi[m])
		return v

	def isometry(self, cap=DENSE_CAP):
		"""The dense L^n × N embedding; only for small grids."""
		if self.size > cap:
			raise ResourceError("dense embedding rows", self.size, cap)
		return np.stack([self.column(ell).ravel() for ell in range(self.shape.N)], axis=1)

	def overlaps(self, state):
		"""<column ℓ|state> for all ℓ."""
		L = self.osc.L
		t = np.asarray(state).reshape((L,)*self.shape.n)
		for _ in range(self.shape.n):
			# contracts the leading axis, appends the excitation axis
			t = np.tensordot(t, self.psi, axes=([0],[1]))
		return t[tuple(self.table.T)]

	def project(self, state):
		"""
		Coefficients of the projection of ``state`` onto the embedded span,
		and the leakage ‖state‖² − ‖projection‖².
		"""
		c = self.overlaps(state)
		a = scipy.linalg.cho_solve(self._chol, c) if self.corrected else c
		leak = float(np.vdot(state, state).real - np.vdot(c, a).real)
		return a, max(leak, 0.0)


@dataclass
class PipelineResult:
	sim_unitary: np.ndarray
	spectral_error: float
	L_used: int
	plan_stats: tuple
	exact: np.ndarray = None
	leakage: np.ndarray = None
	leakage_flagged: bool = False
	gram_deviation: float = 0.0

	@property
	def leakage_max(self):
		return float(self.leakage.max()) if self.leakage is not None and len(self.leakage) else 0.0

	@property
	def unitarity_defect(self):
		u = self.sim_unitary
		return float(np.linalg.norm(u.conj().T@u - np.eye(u.shape[0]), 2))

	def summary(self):
		return dict(
			spectral_error=self.spectral_error,
			leakage_max=self.leakage_max,
			leakage_flagged=self.leakage_flagged,
			unitarity_defect=self.unitarity_defect,
			gram_deviation=self.gram_deviation,
			L=self.L_used,
			plan_stats=dict(factors=self.plan_stats[0], terms=self.plan_stats[1]),
		)


def admissible(shape, L, mem_cap=MEM_CAP):
	"""Whether the grid size L may be used for ``shape``; raises if not."""
	if not isinstance(L, (int, np.integer)) or L < 2 or L % 2:
		raise DomainError(f"L must be an even integer >= 2, got {L!r}")
	if shape.M > OCCUPATION_RATIO*L:
		raise DomainError(f"M={shape.M} exceeds {OCCUPATION_RATIO}·L for L={L}")
	if L**shape.n > mem_cap:
		raise ResourceError("grid size L^n", L**shape.n, mem_cap)


class _Run:
	"""
	One emulation: the plan, the embedding and the output being filled.

	Column ranges are independent; each call owns its scratch vectors.
	"""
	def __init__(self, shape, angles, L, *, mem_cap=MEM_CAP, dense_cap=DENSE_CAP,
			leakage_threshold=1e-6, gram_tol=1e-10, decompose_tol=1e-10, max_sweeps=4, workers=None):
		if angles.n != shape.n:
			raise DomainError(f"angles are for n={angles.n}, irrep has n={shape.n}")
		admissible(shape, L, mem_cap)
		N = shape.N
		if N > dense_cap:
			raise ResourceError("dense dimension", N, dense_cap)
		self.shape = shape
		self.L = L
		self.leakage_threshold = leakage_threshold
		self.osc = DiscreteOscillator(L, workers=workers)

		# a sequence error ε' in the fundamental costs about N·ε' in the irrep
		tol = max(decompose_tol/N, 1e-14)
		self.seq = euler_decompose(fundamental_matrix(shape.n, angles), tol=tol, max_sweeps=max_sweeps)
		self.plan = build_plan(self.seq)
		self.emb = Embedding(shape, self.osc, gram_tol=gram_tol, mem_cap=mem_cap)
		self.exact = exact_unitary(shape, angles, cap=dense_cap)

		self.sim = np.zeros((N,N), dtype=complex)
		self.leakage = np.zeros(N)
		logger.debug("emulating %s at L=%d: %d factors, %d terms", shape, L, len(self.seq), self.plan.r)

	def columns(self, lo, hi):
		for ell in range(lo, hi):
			v = self.emb.column(ell).ravel().astype(complex)
			v = apply_plan(v, self.plan, self.osc)
			self.sim[:,ell], self.leakage[ell] = self.emb.project(v)

	def result(self):
		err = float(np.linalg.norm(self.sim - self.exact, 2))
		flagged = bool(self.leakage.max() > self.leakage_threshold)
		if flagged:
			logger.warning("leakage %.3e above %.1e at L=%d", self.leakage.max(), self.leakage_threshold, self.L)
		logger.info("%s L=%d: spectral error %.3e", self.shape, self.L, err)
		return PipelineResult(
			sim_unitary=self.sim,
			spectral_error=err,
			L_used=self.L,
			plan_stats=(len(self.seq), self.plan.r),
			exact=self.exact,
			leakage=self.leakage,
			leakage_flagged=flagged,
			gram_deviation=self.emb.gram_deviation,
		)


def simulate(shape, angles, L, **kw):
	"""
	Emulate the circuit for ``angles`` in the irrep ``shape`` on an L-point
	grid per mode.

	Keyword arguments are the caps and tolerances of `RunConfig`.
	"""
	run = _Run(shape, angles, L, **kw)
	run.columns(0, shape.N)
	return run.result()


class ColumnPool(CtxObj):
	"""
	Run column ranges in worker threads, at most ``threads`` at a time.

	Usage::
		async with ColumnPool(4) as pool:
			pool.submit(run.columns, 0, 10)
	"""
	def __init__(self, threads=1):
		if threads < 1:
			raise DomainError(f"need at least one thread, got {threads}")
		self.threads = threads

	@asynccontextmanager
	async def _ctx(self):
		self._limiter = anyio.CapacityLimiter(self.threads)
		async with anyio.create_task_group() as self._tg:
			yield self

	def submit(self, fn, *args):
		self._tg.start_soon(self._run, fn, args)

	async def _run(self, fn, args):
		await anyio.to_thread.run_sync(fn, *args, limiter=self._limiter)


def _chunks(N, threads):
	step = max(1, math.ceil(N/(4*threads)))
	for lo in range(0, N, step):
		yield lo, min(N, lo+step)


async def simulate_async(shape, angles, L, threads=1, **kw):
	"""`simulate`, with the basis columns spread over worker threads."""
	run = _Run(shape, angles, L, **kw)
	async with ColumnPool(threads) as pool:
		for lo,hi in _chunks(shape.N, threads):
			pool.submit(run.columns, lo, hi)
	return run.result()


def _sweep_grid(shape, L_list, mem_cap):
	good = []
	for L in L_list:
		try:
			admissible(shape, L, mem_cap)
		except (DomainError, ResourceError) as exc:
			logger.warning("skipping L=%s: %s", L, exc)
		else:
			good.append(L)
	if len(good) < 3:
		raise DomainError(f"need at least 3 admissible L values, got {good}")
	return good


def error_sweep(shape, angles, L_list, floor=1e-12, **kw):
	"""
	Spectral error over several grid sizes, with a fit of log(error)
	against L. All-zero angles give floor-limited errors.
	"""
	pts = []
	for L in _sweep_grid(shape, L_list, kw.get("mem_cap", MEM_CAP)):
		pts.append((L, simulate(shape, angles, L, **kw).spectral_error))
	return fit_decay(pts, floor=floor)


async def error_sweep_async(shape, angles, L_list, threads=1, floor=1e-12, **kw):
	pts = []
	for L in _sweep_grid(shape, L_list, kw.get("mem_cap", MEM_CAP)):
		res = await simulate_async(shape, angles, L, threads=threads, **kw)
		pts.append((L, res.spectral_error))
	return fit_decay(pts, floor=floor)


@dataclass
class KickedTopRun:
	"""States after each Floquet step, emulated and exact."""
	states: list = field(default_factory=list)
	reference: list = field(default_factory=list)
	rotation_error: float = 0.0

	@property
	def fidelity_errors(self):
		return [1 - abs(np.vdot(r, s))**2 for s,r in zip(self.states, self.reference)]

	@property
	def state_errors(self):
		return [float(np.linalg.norm(s-r)) for s,r in zip(self.states, self.reference)]


def kicked_top_demo(shape, gamma, beta, steps, L, **kw):
	"""
	Iterate V = exp(-iβ J_z²) exp(-iγ J_y) on the state ℓ=0.

	The rotation comes from the emulated circuit, the kick is an exact
	diagonal phase. The reference iterates the dense V.
	"""
	if shape.n != 2:
		raise DomainError(f"the kicked top needs n=2, got n={shape.n}")
	if steps < 0:
		raise DomainError(f"steps must not be negative, got {steps}")
	_, Jy, Jz = spin_matrices(shape.M)
	# exp(-iγ J_y) = exp(i·(-γ)·A_12)
	rot = simulate(shape, AngleSet(2, phi={(1,2): -gamma}), L, **kw)
	kick = np.exp(-1j*beta*np.diag(Jz).real**2)
	exact = kick[:,None] * expih(Jy, -gamma)

	v = np.zeros(shape.N, dtype=complex)
	v[0] = 1
	w = v.copy()
	res = KickedTopRun(rotation_error=rot.spectral_error)
	for _ in range(steps):
		v = kick * (rot.sim_unitary @ v)
		w = exact @ w
		res.states.append(v)
		res.reference.append(w)
	return res


def fock_term_action(term, dim, pairs):
	"""
	exp(i·angle·O) in the two-mode Fock space truncated to ``dim`` levels
	per mode, applied to |a, b> for each (a, b) in ``pairs``.
	"""
	fock = TwoModeFock(dim)
	return fock.apply(term, fock.basis(pairs))


def term_action(term, osc, mmax, dim=None):
	"""
	Largest deviation between the grid action of a two-mode term on
	ψ_a ⊗ ψ_b (a, b ≤ mmax) and its continuum action, expanded in the
	embedded Hermite states up to ``dim``-1 (default 4·mmax).
	"""
	dim = dim or max(4*mmax, 8)
	if dim > osc.L:
		raise DomainError(f"Fock dimension {dim} exceeds L={osc.L}")
	pairs = [(a,b) for a in range(mmax+1) for b in range(mmax+1)]
	C = fock_term_action(term, dim, pairs)
	psi = osc.states(dim-1)
	err = 0.0
	for col,(a,b) in enumerate(pairs):
		v = np.multiply.outer(psi[a], psi[b]).ravel()
		got = apply_factor(v, term, osc).reshape(osc.L, osc.L)
		want = psi.T @ C[:,col].reshape(dim, dim) @ psi
		err = max(err, float(np.linalg.norm(got - want)))
	return err
