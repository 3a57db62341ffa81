import math

import numpy as np
import pytest
import scipy.linalg

from sunirrep._util import DomainError, ResourceError
from sunirrep.algebra import AngleSet, Generator, exact_unitary
from sunirrep.combinatorics import IrrepShape
from sunirrep.fastforward import FactorTerm, Monomial
from sunirrep.oscillator import DiscreteOscillator
from sunirrep.pipeline import (
	Embedding, ColumnPool, apply_factor, admissible,
	simulate, simulate_async, error_sweep, error_sweep_async,
	kicked_top_demo, term_action,
)


def dense_ops(osc):
	F = osc.dft_matrix()
	X = np.diag(osc.grid).astype(complex)
	P = F.conj().T @ X @ F
	return X, P


def random_state(L, n, seed=0):
	rng = np.random.default_rng(seed)
	v = rng.standard_normal(L**n) + 1j*rng.standard_normal(L**n)
	return v/np.linalg.norm(v)


def test_zero_angle():
	osc = DiscreteOscillator(16)
	v = random_state(16, 2)
	assert apply_factor(v, FactorTerm(Monomial.PP, 1, 2, 0.0), osc) is v


def test_point_mass():
	osc = DiscreteOscillator(16)
	v = np.zeros((16, 16), dtype=complex)
	v[3, 11] = 1
	w = apply_factor(v.ravel(), FactorTerm(Monomial.XX, 1, 2, 0.7), osc).reshape(16, 16)
	x = osc.grid
	assert w[3, 11] == pytest.approx(np.exp(0.7j*x[3]*x[11]))
	w[3, 11] = 0
	assert not w.any()


@pytest.mark.parametrize("mono,transposed,build", [
	(Monomial.PP, False, lambda X,P: np.kron(P, P)),
	(Monomial.XX, False, lambda X,P: np.kron(X, X)),
	(Monomial.XP, False, lambda X,P: np.kron(X, P)),
	(Monomial.XP, True, lambda X,P: np.kron(P, X)),
])
def test_two_mode_dense(mono, transposed, build):
	osc = DiscreteOscillator(16)
	X,P = dense_ops(osc)
	v = random_state(16, 2, seed=4)
	term = FactorTerm(mono, 1, 2, 0.1, transposed=transposed)
	want = scipy.linalg.expm(0.1j*build(X, P)) @ v
	got = apply_factor(v, term, osc)
	assert np.linalg.norm(got-want) <= 1e-9
	assert np.linalg.norm(got) == pytest.approx(1, abs=1e-12)


def test_single_mode_dense():
	osc = DiscreteOscillator(16)
	X,P = dense_ops(osc)
	v = random_state(16, 3, seed=2)
	term = FactorTerm(Monomial.P2, 2, 2, 0.3)
	op = np.kron(np.kron(np.eye(16), scipy.linalg.expm(0.3j*P@P)), np.eye(16))
	assert np.linalg.norm(apply_factor(v, term, osc) - op@v) <= 1e-9


def test_batch():
	osc = DiscreteOscillator(16)
	vs = np.stack([random_state(16, 2, seed=s) for s in range(3)])
	term = FactorTerm(Monomial.XP, 1, 2, 0.2)
	got = apply_factor(vs, term, osc)
	for v,g in zip(vs, got):
		assert np.allclose(apply_factor(v, term, osc), g)


def test_bad_axes():
	osc = DiscreteOscillator(16)
	v = random_state(16, 2)
	with pytest.raises(DomainError):
		apply_factor(v, FactorTerm(Monomial.XX, 1, 3, 0.1), osc)
	with pytest.raises(DomainError):
		apply_factor(v[:100], FactorTerm(Monomial.XX, 1, 2, 0.1), osc)


@pytest.mark.parametrize("term", [
	FactorTerm(Monomial.XX, 1, 2, 0.1),
	FactorTerm(Monomial.PP, 1, 2, 0.1),
	FactorTerm(Monomial.XP, 1, 2, -0.15),
	FactorTerm(Monomial.XP, 1, 2, -0.15, transposed=True),
], ids=lambda t: t.label)
def test_term_action(term):
	osc = DiscreteOscillator(256)
	assert term_action(term, osc, mmax=8) <= 1e-6


def test_embedding():
	s = IrrepShape(3, 2)
	osc = DiscreteOscillator(32)
	emb = Embedding(s, osc)
	assert emb.gram_deviation <= 1e-8
	assert not emb.corrected
	psi = osc.states(2)
	assert np.allclose(emb.column(2), np.multiply.outer(np.multiply.outer(psi[1], psi[0]), psi[1]))
	c, leak = emb.project(emb.column(4).ravel())
	want = np.zeros(6)
	want[4] = 1
	assert np.allclose(c, want, atol=1e-10)
	assert leak <= 1e-10
	assert emb.isometry(cap=2**15).shape == (32**3, 6)


def test_admissible():
	s = IrrepShape(2, 4)
	admissible(s, 16)
	with pytest.raises(DomainError):
		admissible(s, 15)
	with pytest.raises(DomainError):
		admissible(s, 8)
	with pytest.raises(ResourceError):
		admissible(IrrepShape(3, 2), 64, mem_cap=1000)


def test_caps():
	a = AngleSet.random(2, 0)
	with pytest.raises(ResourceError):
		simulate(IrrepShape(2, 4), a, 32, dense_cap=3)
	with pytest.raises(DomainError):
		simulate(IrrepShape(2, 4), AngleSet.random(3, 0), 32)


def test_identity():
	res = simulate(IrrepShape(2, 3), AngleSet.zeros(2), 32)
	assert res.plan_stats == (3, 0)
	assert res.spectral_error <= 1e-10
	assert res.leakage_max <= 1e-10
	assert not res.leakage_flagged


@pytest.mark.parametrize("M", [4, 8, 16])
def test_su2_end_to_end(M):
	s = IrrepShape(2, M)
	for seed in range(5):
		res = simulate(s, AngleSet.random(2, seed), 256)
		assert res.spectral_error <= 1e-4, (M, seed, res.spectral_error)
		assert res.unitarity_defect <= 10*res.spectral_error + 1e-12
		assert res.L_used == 256


def test_su3_end_to_end():
	s = IrrepShape(3, 2)
	a = AngleSet.random(3, 13)
	res = simulate(s, a, 64)
	assert res.spectral_error <= 1e-4
	assert res.unitarity_defect <= 10*res.spectral_error + 1e-12
	assert np.allclose(res.exact, exact_unitary(s, a))
	summary = res.summary()
	assert summary["plan_stats"]["factors"] == 8
	assert summary["L"] == 64


def test_gram_corrected():
	s = IrrepShape(2, 4)
	a = AngleSet.random(2, 3)
	res = simulate(s, a, 64, gram_tol=1e-300)
	ref = simulate(s, a, 64)
	assert np.allclose(res.sim_unitary, ref.sim_unitary, atol=1e-8)


@pytest.mark.anyio
async def test_async_matches():
	s = IrrepShape(2, 5)
	a = AngleSet.random(2, 9)
	ref = simulate(s, a, 64)
	res = await simulate_async(s, a, 64, threads=3)
	assert np.array_equal(res.sim_unitary, ref.sim_unitary)


@pytest.mark.anyio
async def test_pool():
	seen = []
	async with ColumnPool(2) as pool:
		for i in range(5):
			pool.submit(seen.append, i)
	assert sorted(seen) == list(range(5))
	with pytest.raises(DomainError):
		ColumnPool(0)


def test_sweep():
	s = IrrepShape(2, 4)
	fit = error_sweep(s, AngleSet.random(2, 1), [16, 32, 64], floor=1e-13)
	errs = [e for _,e in fit.points]
	assert errs[0] > errs[-1]
	assert fit.floor_limited or fit.slope < 0


def test_sweep_skips():
	s = IrrepShape(2, 4)
	with pytest.raises(DomainError):
		error_sweep(s, AngleSet.random(2, 1), [8, 16, 32])


def test_sweep_floor():
	fit = error_sweep(IrrepShape(2, 2), AngleSet.zeros(2), [32, 64, 128], floor=1e-12)
	assert fit.floor_limited


@pytest.mark.anyio
async def test_sweep_async():
	s = IrrepShape(2, 3)
	a = AngleSet.random(2, 2)
	ref = error_sweep(s, a, [16, 32, 64])
	fit = await error_sweep_async(s, a, [16, 32, 64], threads=2)
	assert fit.points == ref.points


def test_kicked_top():
	res = kicked_top_demo(IrrepShape(2, 16), math.pi/2, 3.0, 10, 128)
	assert len(res.states) == 10
	assert max(res.fidelity_errors) <= 1e-6
	assert res.rotation_error <= 1e-4
	for v in res.states:
		assert np.linalg.norm(v) == pytest.approx(1, abs=1e-6)
	with pytest.raises(DomainError):
		kicked_top_demo(IrrepShape(3, 2), 1.0, 1.0, 1, 64)
