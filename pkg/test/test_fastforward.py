import math

import numpy as np
import pytest

from sunirrep._util import DomainError
from sunirrep.algebra import Generator
from sunirrep.decompose import EulerFactor, EulerSequence, euler_decompose, random_su
from sunirrep.fastforward import (
	Monomial, FactorTerm, FactorizationPlan, PHASE_BOUND,
	claim1_angles, claim1_residual, expand_factor, split_factor, split_phases,
	build_plan, replay_plan, lemma_residual, symplectic_matrix,
)


def angles(terms):
	return [t.angle for t in terms]


def test_claim1_angles():
	assert claim1_angles(0) == (0, 0)
	t = math.pi/4
	a,b = claim1_angles(t)
	assert a == pytest.approx(math.tan(math.pi/(4*math.sqrt(2)))/math.sqrt(2))
	assert b == pytest.approx(math.sin(math.sqrt(2)*math.pi/4)/math.sqrt(2))
	with pytest.raises(DomainError):
		claim1_angles(math.pi/math.sqrt(2))


@pytest.mark.parametrize("t", [0.1, 0.3, 0.7])
def test_claim1_identity(t):
	assert claim1_residual(t, L=128, mmax=16) <= 1e-8


def test_expand_diagonal():
	terms = expand_factor(EulerFactor(Generator.diagonal(1), 0.0))
	assert [t.monomial for t in terms] == [Monomial.P2, Monomial.X2, Monomial.P2]*2
	assert [t.j for t in terms] == [1, 1, 1, 2, 2, 2]
	assert angles(terms) == [0]*6

	s = 1.2
	terms = expand_factor(EulerFactor(Generator.diagonal(2), s))
	tau = s/2
	want = [math.tan(tau/2)/2, math.sin(tau)/2, math.tan(tau/2)/2]
	assert angles(terms[:3]) == pytest.approx(want)
	assert angles(terms[3:]) == pytest.approx([-w for w in want])
	assert terms[3].j == 3


def test_expand_symmetric():
	terms = expand_factor(EulerFactor(Generator.symmetric(1, 2), math.pi/2))
	assert [t.monomial for t in terms] == [Monomial.PP, Monomial.XX, Monomial.PP]
	assert angles(terms) == pytest.approx([math.tan(math.pi/8), math.sin(math.pi/4), math.tan(math.pi/8)])


def test_expand_antisymmetric():
	terms = expand_factor(EulerFactor(Generator.antisymmetric(1, 2), 0.4))
	assert [t.label for t in terms] == ["XP", "PX", "XP"]
	assert angles(terms) == pytest.approx([-math.tan(0.1), math.sin(0.2), -math.tan(0.1)])


def test_expand_flipped():
	fwd = expand_factor(EulerFactor(Generator.antisymmetric(1, 3), 0.4))
	rev = expand_factor(EulerFactor(Generator.antisymmetric(3, 1), -0.4 + 4*math.pi))
	assert angles(rev) == pytest.approx(angles(fwd))
	assert all(t.flipped for t in rev)
	assert all((t.j, t.k) == (1, 3) for t in rev)


def test_expand_range():
	with pytest.raises(DomainError):
		expand_factor(EulerFactor(Generator.symmetric(1, 2), 2.0))
	# 4π-periodic: 4π - 0.5 is -0.5
	expand_factor(EulerFactor(Generator.symmetric(1, 2), 4*math.pi - 0.5))


def test_split_factor():
	f = EulerFactor(Generator.symmetric(1, 2), 5.0)
	pieces = split_factor(f)
	assert len(pieces) == 4
	assert sum(math.remainder(p.angle, 4*math.pi) for p in pieces) == pytest.approx(5.0)
	assert len(split_factor(EulerFactor(Generator.symmetric(1, 2), 1.0))) == 1


def test_split_phases():
	plan = FactorizationPlan([FactorTerm(Monomial.PP, 1, 2, 1.0)])
	res = split_phases(plan)
	assert res.r == 6
	assert angles(res) == pytest.approx([1/6]*6)
	assert [t.rep for t in res] == list(range(6))

	small = FactorizationPlan([FactorTerm(Monomial.XP, 1, 2, 0.1), FactorTerm(Monomial.XX, 1, 2, 1.4)])
	assert split_phases(small).terms == small.terms


def test_split_conserves():
	seq = euler_decompose(random_su(3, seed=5))
	plan = build_plan(seq, bound=math.inf)
	split = split_phases(plan)
	assert split.r > plan.r
	it = iter(split.terms)
	for t in plan:
		if t.monomial in (Monomial.PP, Monomial.XP) and abs(t.angle) > PHASE_BOUND:
			pieces = [next(it) for _ in range(math.ceil(abs(t.angle)/PHASE_BOUND))]
			assert all(abs(p.angle) <= PHASE_BOUND*(1+1e-12) for p in pieces)
			assert sum(angles(pieces)) == pytest.approx(t.angle)
		else:
			assert next(it) == t
	assert next(it, None) is None


def test_term_checks():
	with pytest.raises(DomainError):
		FactorTerm(Monomial.X2, 1, 2, 0.1)
	with pytest.raises(DomainError):
		FactorTerm(Monomial.XP, 2, 2, 0.1)


def test_replay():
	for n,seed in ((2, 1), (3, 3), (4, 8)):
		seq = euler_decompose(random_su(n, seed=seed))
		plan = build_plan(seq)
		assert plan.r >= len([f for f in seq if f.angle])
		assert replay_plan(plan, n) <= 1e-10


def test_symplectic():
	S = symplectic_matrix(Generator.diagonal(1), 0.9, 2)
	omega = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
	assert np.allclose(S.T @ omega @ S, omega)


@pytest.mark.parametrize("t", [0.1, 0.3, 0.7])
@pytest.mark.parametrize("g", [Generator.diagonal(1), Generator.symmetric(1, 2), Generator.antisymmetric(1, 2)])
def test_lemma_identity(g, t):
	assert lemma_residual(EulerFactor(g, t), dim=64, mmax=16) <= 1e-8


def test_empty_plan():
	plan = build_plan(EulerSequence([], 3))
	assert plan.r == 0
	assert replay_plan(plan, 3) == 0
