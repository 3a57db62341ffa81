import csv

import asyncclick as click

from . import Command
from ._util import csv_text, read_matrix, read_angles
from .._util import DomainError
from ..algebra import Generator, GenKind
from ..decompose import EulerFactor, EulerSequence, euler_decompose, fundamental_matrix, random_su
from ..fastforward import build_plan, replay_plan

import logging
logger = logging.getLogger(__name__)

__all__ = ["Cmd_Decompose", "Cmd_Plan"]


def factor_rows(seq):
	for f in seq:
		g = f.generator
		yield g.kind.value, g.j, g.k, f.angle


def read_factors(path):
	"""An EulerSequence from a decompose CSV (kind, j, k, angle)."""
	factors = []
	with open(path, newline="") as f:
		for nr,row in enumerate(csv.DictReader(f), 2):
			try:
				kind = GenKind(row["kind"].strip().upper())
				j,k = int(row["j"]), int(row["k"])
				g = Generator.diagonal(j) if kind is GenKind.DIAGONAL else Generator(kind, j, k)
				factors.append(EulerFactor(g, float(row["angle"])))
			except (KeyError, ValueError, AttributeError) as exc:
				raise DomainError(f"{path}:{nr}: cannot parse {row!r}") from exc
	if not factors:
		raise DomainError(f"{path}: no factors")
	n = max(f.generator.k for f in factors)
	for f in factors:
		f.generator.check(n)
	return EulerSequence(factors, n)


class Cmd_Decompose(Command):
	"Factor an SU(n) matrix into Cartan–Weyl exponentials."
	_name = "decompose"
	_doc = dict(
		matrix="CSV file with the n×n matrix, entries like 0.6-0.8j",
		random="Decompose a Haar-random element of SU(n) instead",
		angles_file="Decompose the fundamental matrix of these angles instead (needs --random for n)",
		_l="""\
Write the factors (kind, j, k, angle) of u = Π exp(i·angle·T) as CSV,
leftmost factor first. Diagonal factors are written as (H, i, i+1).
Angles are in [0, 4π).
""",
	)

	@classmethod
	def options(cls):
		return [
			cls.option("--matrix", type=click.Path(exists=True, dir_okay=False)),
			cls.option("--random", type=int),
			cls.option("--angles-file", "angles_file", type=click.Path(exists=True, dir_okay=False)),
		]

	def check(self):
		p = self.p
		if (p.matrix is None) == (p.random is None):
			raise click.BadParameter("give exactly one of --matrix and --random", param_hint="'--matrix'")
		if p.random is not None and p.random < 2:
			raise click.BadParameter(f"n must be at least 2, got {p.random}", param_hint="'--random'")
		if p.angles_file is not None and p.random is None:
			raise click.BadParameter("needs --random N for the group rank", param_hint="'--angles-file'")

	def matrix(self):
		p = self.p
		if p.matrix is not None:
			return read_matrix(p.matrix)
		if p.angles_file is not None:
			return fundamental_matrix(p.random, read_angles(p.angles_file, p.random, self.cfg.seed))
		return random_su(p.random, self.cfg.seed)

	async def run(self):
		seq = euler_decompose(self.matrix(), tol=self.cfg.decompose_tol, max_sweeps=self.cfg.max_sweeps)
		logger.info("%d factors, reconstruction error %.3e", len(seq), seq.reconstruction_error)
		await self.write(csv_text(("kind", "j", "k", "angle"), factor_rows(seq)))


class Cmd_Plan(Command):
	"Expand a factor list into quadratic-monomial exponentials."
	_name = "plan"
	_doc = dict(
		factors="CSV written by 'decompose'",
		_l="""\
Expand every factor into exponentials of x_j x_k, p_j p_k, x_j p_k
(written PX when transposed to p_j x_k), x_i² and p_i², and split
momentum-type phases to at most 1/(2e). Writes CSV (monomial, j, k,
angle, rep); the replay error of the linear phase-space maps goes to
stderr.
""",
	)

	@classmethod
	def options(cls):
		return [
			cls.option("--factors", type=click.Path(exists=True, dir_okay=False), required=True),
		]

	async def run(self):
		seq = read_factors(self.p.factors)
		plan = build_plan(seq)
		rows = ((t.label, t.j, t.k, t.angle, t.rep) for t in plan)
		await self.write(csv_text(("monomial", "j", "k", "angle", "rep"), rows))
		click.echo(f"{len(seq)} factors, {plan.r} terms, replay error {replay_plan(plan, seq.n):.3e}", err=True)
