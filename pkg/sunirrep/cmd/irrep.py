import asyncclick as click

from . import Command
from ._util import shape_options, check_shape, csv_text
from ..algebra import Generator, build_generator, commutator_residual, casimir
from .._util import DomainError

import logging
logger = logging.getLogger(__name__)

__all__ = ["Cmd_Irrep"]


class Cmd_Irrep(Command):
	"Dump generator matrices of a totally symmetric irrep."
	_name = "irrep"
	_doc = dict(
		n="Number of modes",
		M="Number of bosons",
		generator="Generator to dump, like H:1, S:1,2, A:1,3 or E:2,1; repeatable. Default: all Hermitian ones",
		check="Also report the commutator and Casimir checks on stderr",
		_l="""\
Write the nonzero entries of generator matrices of the N-dimensional
irrep as CSV (generator, row, col, re, im). Rows and columns are basis
indices in descending lexicographic order.
""",
	)

	@classmethod
	def options(cls):
		return shape_options(cls) + [
			cls.option("-g", "--generator", "--kind", "generator", multiple=True),
			cls.option("--check", is_flag=True),
		]

	def check(self):
		p = self.p
		self.shape = check_shape(p.n, p.M)
		if p.generator:
			gens = []
			for g in p.generator:
				try:
					gens.append(Generator.parse(g).check(p.n))
				except DomainError as exc:
					raise click.BadParameter(str(exc), param_hint="'--generator'") from None
		else:
			n = p.n
			gens = [Generator.diagonal(i) for i in range(1,n)]
			for j in range(1,n+1):
				for k in range(j+1,n+1):
					gens += [Generator.symmetric(j,k), Generator.antisymmetric(j,k)]
		self.gens = gens

	def describe(self):
		return f"irrep: {self.shape}, generators {' '.join(map(str,self.gens))}"

	async def run(self):
		rows = []
		for g in self.gens:
			m = build_generator(self.shape, g).entries.tocoo()
			for r,c,v in sorted(zip(m.row, m.col, m.data)):
				rows.append((str(g), int(r), int(c), float(v.real), float(v.imag)))
		await self.write(csv_text(("generator", "row", "col", "re", "im"), rows))

		if self.p.check:
			res = commutator_residual(self.shape)
			cas = casimir(self.shape).diagonal()
			M, n = self.shape.M, self.shape.n
			# gl(n) Casimir on the M-boson irrep is M(M+n-1)
			click.echo(f"commutator residual {res:.3e}", err=True)
			click.echo(f"casimir {cas.min():.12g}…{cas.max():.12g}, expected {M*(M+n-1)}", err=True)
