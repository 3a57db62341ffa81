import asyncclick as click

from . import Command
from ._util import INT_LIST, csv_text
from ..oscillator import QUANTITIES, residual_table

import logging
logger = logging.getLogger(__name__)

__all__ = ["Cmd_QhoResiduals"]


class Cmd_QhoResiduals(Command):
	"Residuals of the discrete oscillator against the continuum one."
	_name = "qho-residuals"
	_doc = dict(
		L_list="Grid sizes, e.g. 32,64,128 or 16,32,...,256",
		m_list="Levels",
		quantity="eigen: ‖(H̄-(m+½))ψ_m‖; fourier: ‖F⁻¹ψ_m - i^m ψ_m‖; matelem: |<ψ_m'|x̄^a p̄^b|ψ_m> - <m'|x^a p^b|m>|",
		mp="m' for matelem, default m",
		a="Power of x for matelem",
		b="Power of p for matelem",
		_l="""\
Tabulate discretization residuals of the discrete Hermite states over a
grid of L and m. CSV columns: L, m, m', a, b, residual. With three or
more L values the fitted log-decay per m is reported on stderr.
""",
	)

	@classmethod
	def options(cls):
		return [
			cls.option("--L-list", "L_list", type=INT_LIST, required=True),
			cls.option("--m-list", "m_list", type=INT_LIST, required=True),
			cls.option("--quantity", type=click.Choice(QUANTITIES), default="eigen", show_default=True),
			cls.option("--mp", type=int),
			cls.option("--a", "a", type=int, default=0, show_default=True),
			cls.option("--b", "b", type=int, default=0, show_default=True),
		]

	def check(self):
		p = self.p
		for L in p.L_list:
			if L < 2 or L % 2:
				raise click.BadParameter(f"L must be an even integer >= 2, got {L}", param_hint="'--L-list'")
		for m in p.m_list + ([p.mp] if p.mp is not None else []):
			if not 0 <= m < min(p.L_list):
				raise click.BadParameter(f"level {m} is outside [0,{min(p.L_list)-1}]", param_hint="'--m-list'")
		if p.quantity != "matelem" and (p.mp is not None or p.a or p.b):
			raise click.BadParameter("only used with --quantity matelem", param_hint="'--mp/--a/--b'")
		if not (0 <= p.a <= 4 and 0 <= p.b <= 4):
			raise click.BadParameter(f"powers must be in 0…4, got a={p.a} b={p.b}", param_hint="'--a/--b'")

	async def run(self):
		p = self.p
		rows, fits = residual_table(p.L_list, p.m_list, p.quantity, mp=p.mp, a=p.a, b=p.b, floor=self.cfg.floor)
		await self.write(csv_text(("L", "m", "m'", "a", "b", "residual"), rows))
		for m,fit in fits.items():
			if fit.floor_limited:
				click.echo(f"m={m}: at the noise floor", err=True)
			else:
				click.echo(f"m={m}: slope {fit.slope:.4g}, fit residual {fit.fit_residual:.2e}", err=True)
