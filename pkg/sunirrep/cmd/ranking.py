import asyncclick as click

from . import Command
from ._util import INT_TUPLE, shape_options, check_shape
from ..combinatorics import rank_desc, unrank

import logging
logger = logging.getLogger(__name__)

__all__ = ["Cmd_Rank", "Cmd_Unrank"]


class Cmd_Rank(Command):
	"Print the index of a composition."
	_name = "rank"
	_doc = dict(
		n="Number of modes",
		M="Number of bosons",
		parts="The composition, comma separated",
		_l="""\
Print the position of a composition (m_1,…,m_n) of M in descending
lexicographic order, counted from zero. (M,0,…,0) has index 0.
""",
	)

	@classmethod
	def options(cls):
		return shape_options(cls) + [
			cls.option("--parts", type=INT_TUPLE, required=True),
		]

	def check(self):
		p = self.p
		self.shape = check_shape(p.n, p.M)
		parts = p.parts
		if len(parts) != p.n or any(x < 0 for x in parts) or sum(parts) != p.M:
			raise click.BadParameter(
				f"{','.join(map(str,parts))} is not a composition of M={p.M} into n={p.n} parts",
				param_hint="'--parts'")

	async def run(self):
		await self.write(f"{rank_desc(self.p.parts, self.shape)}\n")


class Cmd_Unrank(Command):
	"Print the composition at an index."
	_name = "unrank"
	_doc = dict(
		n="Number of modes",
		M="Number of bosons",
		ell="The index, 0 ≤ ell < N",
		_l="""\
Print the composition of M into n parts that has the given index in
descending lexicographic order.
""",
	)

	@classmethod
	def options(cls):
		return shape_options(cls) + [
			cls.option("--ell", type=int, required=True),
		]

	def check(self):
		p = self.p
		self.shape = check_shape(p.n, p.M)
		N = self.shape.N
		if not 0 <= p.ell < N:
			raise click.BadParameter(f"ell={p.ell} is not below N={N}", param_hint="'--ell'")

	async def run(self):
		parts = unrank(self.shape, self.p.ell).parts
		await self.write(",".join(map(str, parts)) + "\n")
