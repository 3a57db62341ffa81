import math

import numpy as np
import pytest
import scipy.linalg
import scipy.sparse.linalg

from sunirrep._util import DomainError, ResourceError, ConvergenceError
from sunirrep.algebra import expih
from sunirrep.combinatorics import IrrepShape
from sunirrep.expander import (
	QuaternionSolution, ExpanderSpec, distinct_solutions, lps_spec, build_channel,
	spectral_gap, apply_channel, pipeline_kraus, ramanujan_bound, check_prime,
)


def test_solutions_p5():
	sols = {s.a for s in distinct_solutions(5)}
	assert sols == {(1, 2, 0, 0), (1, -2, 0, 0), (1, 0, 2, 0), (1, 0, -2, 0), (1, 0, 0, 2), (1, 0, 0, -2)}
	for s in distinct_solutions(5):
		assert s.theta == pytest.approx(2*math.acos(1/math.sqrt(5)))
		assert math.hypot(*s.axis) == pytest.approx(1)


def test_solutions_p3():
	sols = distinct_solutions(3)
	assert len(sols) == 4
	axes = {tuple(round(x*math.sqrt(3)) for x in s.axis) for s in sols}
	assert axes == {(1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)}
	for s in sols:
		assert s.a[0] == 0
		assert s.theta == pytest.approx(math.pi)


def test_solutions_p13():
	sols = distinct_solutions(13)
	assert len(sols) == 14
	r = math.isqrt(13) + 1
	brute = 0
	for a0 in range(1, r+1, 2):
		for a1 in range(-r, r+1):
			for a2 in range(-r, r+1):
				for a3 in range(-r, r+1):
					if a0*a0 + a1*a1 + a2*a2 + a3*a3 == 13:
						brute += 1
	assert brute == 14


def test_bad_primes():
	for p in (4, 1, 9, 7, 11):
		with pytest.raises(DomainError):
			check_prime(p)
	with pytest.raises(DomainError):
		QuaternionSolution((1, 1, 1, 1), 5)


def test_bound():
	assert ramanujan_bound(6) == pytest.approx(2*math.sqrt(5)/6)
	assert ramanujan_bound(4) == pytest.approx(2*math.sqrt(3)/4)
	with pytest.raises(DomainError):
		ramanujan_bound(1)


def test_spec_checks():
	spec = lps_spec(5, 3)
	assert spec.D == 6
	assert spec.N == 4
	with pytest.raises(DomainError):
		ExpanderSpec(2, spec.rotations[:2], IrrepShape(3, 1))
	with pytest.raises(DomainError):
		ExpanderSpec(6, spec.rotations[:5], IrrepShape(2, 1))
	with pytest.raises(DomainError):
		ExpanderSpec(1, [(1.0, (1.0, 1.0, 0.0))], IrrepShape(2, 1))


def test_channel_fundamental():
	kraus = build_channel(lps_spec(5, 1))
	assert len(kraus) == 6
	for U in kraus:
		assert np.trace(U) == pytest.approx(2/math.sqrt(5))
		assert np.allclose(U.conj().T@U, np.eye(2))


def test_channel_spin1():
	r = 1/math.sqrt(2)
	Jx = np.array([[0, r, 0], [r, 0, r], [0, r, 0]])
	Jy = np.array([[0, 1j*r, 0], [-1j*r, 0, 1j*r], [0, -1j*r, 0]])
	Jz = np.diag([1.0, 0, -1])
	spec = lps_spec(5, 2)
	for (theta,(nx,ny,nz)),U in zip(spec.rotations, build_channel(spec)):
		want = scipy.linalg.expm(-1j*theta*(nx*Jx + ny*Jy + nz*Jz))
		assert np.allclose(U, want, atol=1e-12)


def test_channel_cap():
	with pytest.raises(ResourceError):
		build_channel(lps_spec(5, 30), cap=10)


def test_identity_channel():
	kraus = [np.eye(5, dtype=complex)]*4
	res = spectral_gap(kraus)
	assert res.lam == pytest.approx(1)
	assert res.gap == pytest.approx(0, abs=1e-12)


def test_channel_properties():
	kraus = build_channel(lps_spec(5, 7))
	N = 8
	assert np.abs(apply_channel(kraus, np.eye(N)) - np.eye(N)).max() <= 1e-12
	rng = np.random.default_rng(0)
	X = rng.standard_normal((N, N)) + 1j*rng.standard_normal((N, N))
	X = X + X.conj().T
	X -= np.trace(X)/N*np.eye(N)
	Y = apply_channel(kraus, X)
	assert np.abs(Y - Y.conj().T).max() <= 1e-12
	assert abs(np.trace(Y)) <= 1e-12


@pytest.mark.parametrize("p", [3, 5])
def test_ramanujan_dense(p):
	bound = ramanujan_bound(p+1)
	for N in range(2, 21):
		res = spectral_gap(build_channel(lps_spec(p, N-1)))
		assert res.lam <= bound + 1e-9, (p, N, res.lam)
		assert res.singular_values == sorted(res.singular_values, reverse=True)
		assert len(res.singular_values) == N*N-1


@pytest.mark.parametrize("p", [3, 5])
def test_ramanujan_iterative(p):
	bound = ramanujan_bound(p+1)
	for N in range(22, 61, 2):
		res = spectral_gap(build_channel(lps_spec(p, N-1)))
		assert res.lam <= bound + 1e-9, (p, N, res.lam)
		assert res.residual <= 1e-10
		assert res.margin >= -1e-9


def test_iterative_matches_dense():
	kraus = build_channel(lps_spec(5, 19))
	dense = spectral_gap(kraus)
	from sunirrep import expander
	sv, res = expander._iterative_spectrum(kraus, 20, 1e-12, 5000, 0, 4)
	assert sv[0] == pytest.approx(dense.lam, abs=1e-10)


def test_pipeline_consistency():
	spec = lps_spec(5, 10)
	dense = spectral_gap(build_channel(spec)).lam
	kraus, err = pipeline_kraus(spec, 128)
	emulated = spectral_gap(kraus).lam
	assert abs(emulated - dense) <= max(10*err, 1e-12)
	assert abs(emulated - dense) <= 1e-3


def test_bad_kraus():
	with pytest.raises(DomainError):
		spectral_gap([np.eye(3)])
	with pytest.raises(DomainError):
		spectral_gap([np.eye(1)]*3)


@pytest.mark.parametrize("partial", [0, 2])
def test_iterative_no_convergence(monkeypatch, partial):
	N = 22
	kraus = build_channel(lps_spec(5, N-1))
	rng = np.random.default_rng(1)
	vecs = rng.standard_normal((N*N, partial)) + 0j

	def stuck(*a, **k):
		raise scipy.sparse.linalg.ArpackNoConvergence("stuck", np.ones(partial), vecs)

	monkeypatch.setattr(scipy.sparse.linalg, "svds", stuck)
	with pytest.raises(ConvergenceError) as exc:
		spectral_gap(kraus, max_iter=3)
	assert math.isfinite(exc.value.residual)
	assert exc.value.residual > 0
