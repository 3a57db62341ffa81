import logging
import math

import numpy as np
import pytest

from sunirrep._util import DomainError, ConvergenceError, center_angle, FOUR_PI
from sunirrep.algebra import AngleSet, Generator, GenKind, exact_unitary, expih, build_generator
from sunirrep.combinatorics import IrrepShape
from sunirrep import decompose
from sunirrep.decompose import (
	EulerFactor, EulerSequence, fundamental_matrix, random_su,
	euler_decompose, lift_sequence, sequence_matrix,
)


def test_fundamental():
	assert np.allclose(fundamental_matrix(3, AngleSet.zeros(3)), np.eye(3))
	u = fundamental_matrix(2, AngleSet(2, theta={(1, 2): math.pi}))
	assert np.allclose(u, 1j*np.array([[0, 1], [1, 0]]))

	u = fundamental_matrix(3, AngleSet.random(3, seed=11))
	assert abs(np.linalg.det(u) - 1) <= 1e-12
	assert np.linalg.norm(u.conj().T@u - np.eye(3), 2) <= 1e-12


def test_identity():
	seq = euler_decompose(np.eye(3))
	assert seq.reconstruction_error == 0
	assert all(f.angle == 0 for f in seq)


def test_single_rotation():
	s = IrrepShape(3, 1)
	u = expih(build_generator(s, Generator.symmetric(1, 3)).dense(), 0.7) \
		@ expih(build_generator(s, Generator.antisymmetric(1, 3)).dense(), 0.3)
	seq = euler_decompose(u)
	assert seq.reconstruction_error <= 1e-12
	for f in seq:
		if abs(center_angle(f.angle)) > 1e-9:
			assert f.generator.kind in (GenKind.SYMMETRIC, GenKind.ANTISYMMETRIC)
			assert (f.generator.j, f.generator.k) == (1, 3)


def test_random():
	u = random_su(3, seed=3)
	seq = euler_decompose(u)
	assert seq.reconstruction_error <= 1e-10
	assert len(seq) <= 8
	assert seq.n == 3
	assert np.linalg.norm(sequence_matrix(seq, 3) - u, 2) <= 1e-10
	for f in seq:
		assert 0 <= f.angle < FOUR_PI


def test_bad_input():
	with pytest.raises(DomainError):
		euler_decompose(np.array([[1, 1], [0, 1]], dtype=complex))
	with pytest.raises(DomainError):
		euler_decompose(1j*np.eye(3))
	with pytest.raises(DomainError):
		euler_decompose(np.eye(3)[:2])
	with pytest.raises(ConvergenceError) as exc:
		euler_decompose(random_su(3, 1), max_sweeps=0)
	assert exc.value.residual == math.inf


def test_factor_checks():
	with pytest.raises(DomainError):
		EulerFactor(Generator.ladder(1, 2), 0.1)
	with pytest.raises(DomainError):
		EulerFactor(Generator.diagonal(1), math.nan)


def test_lift_examples():
	s = IrrepShape(2, 2)
	assert np.allclose(lift_sequence(EulerSequence([], 2), s), np.eye(3))
	seq = EulerSequence([EulerFactor(Generator.diagonal(1), math.pi)], 2)
	assert np.allclose(lift_sequence(seq, s), np.diag([-1, 1, -1]))
	with pytest.raises(DomainError):
		lift_sequence(seq, IrrepShape(3, 2))


def test_homomorphism():
	tol = 1e-10
	for n in (2, 3):
		for M in (1, 2, 4):
			s = IrrepShape(n, M)
			# the fundamental tolerance is tightened by the irrep dimension
			ftol = max(tol/s.N, 1e-14)
			for seed in range(20):
				a = AngleSet.random(n, seed)
				seq = euler_decompose(fundamental_matrix(n, a), tol=ftol)
				assert seq.reconstruction_error <= ftol
				err = np.linalg.norm(lift_sequence(seq, s) - exact_unitary(s, a), 2)
				assert err <= 100*ftol*M, (n, M, seed, err)


def test_refine_diagonal(monkeypatch, caplog):
	jacobi = decompose._jacobi
	calls = []

	def coarse(w):
		rot, delta = jacobi(w)
		calls.append(1)
		delta = delta.copy()
		delta[0] += 1e-6
		return rot, delta

	monkeypatch.setattr(decompose, "_jacobi", coarse)
	u = random_su(3, seed=3)
	with caplog.at_level(logging.WARNING):
		seq = euler_decompose(u, tol=1e-10, max_sweeps=2)
	assert len(calls) == 1
	assert "refining the diagonal" in caplog.text
	assert len(seq) == 8
	assert seq.reconstruction_error <= 1e-10
	assert np.linalg.norm(sequence_matrix(seq, 3) - u, 2) <= 1e-10

	with pytest.raises(ConvergenceError) as exc:
		euler_decompose(u, tol=1e-10, max_sweeps=1)
	assert 1e-7 <= exc.value.residual <= 1e-5
