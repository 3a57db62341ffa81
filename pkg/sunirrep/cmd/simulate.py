import asyncclick as click

from . import Command
from ._util import INT_LIST, shape_options, check_shape, read_angles, csv_text, complex_rows
from ..pipeline import admissible, simulate_async, error_sweep_async
from .._util import DomainError, ResourceError

import logging
logger = logging.getLogger(__name__)

__all__ = ["Cmd_Simulate", "Cmd_Sweep"]

_DOC = dict(
	n="Number of modes",
	M="Number of bosons",
	L="Grid points per mode (even)",
	L_list="Grid sizes to sweep, e.g. 64,128,256",
	angles_file="Angles, one 'kind j k value' per line; default: random from --seed",
	summary="Write the JSON summary here, default stderr",
)


class _SimBase(Command):
	@classmethod
	def options(cls):
		return shape_options(cls) + [
			cls.option("--angles-file", "angles_file", type=click.Path(exists=True, dir_okay=False)),
		]

	def check(self):
		self.shape = check_shape(self.p.n, self.p.M, min_n=2)

	def angles(self):
		try:
			return read_angles(self.p.angles_file, self.shape.n, self.cfg.seed)
		except DomainError as exc:
			raise click.BadParameter(str(exc), param_hint="'--angles-file'") from None


class Cmd_Simulate(_SimBase):
	"Emulate the oscillator circuit for one irrep unitary."
	_name = "simulate"
	_doc = dict(_DOC, _l="""\
Build exp(i(Σσ_i H_i + Σθ_jk S_jk + Σφ_jk A_jk)) in the irrep by running
the fast-forwarded oscillator circuit on an L^n grid, and compare it with
the exact exponential. The emulated matrix goes out as CSV (ell,
ell_prime, re, im); spectral error, leakage and plan size as JSON.
""")

	@classmethod
	def options(cls):
		return super().options() + [
			cls.option("--L", "L", type=int, required=True),
			cls.option("--summary", type=click.Path(dir_okay=False, writable=True)),
		]

	def check(self):
		super().check()
		try:
			admissible(self.shape, self.p.L, self.cfg.mem_cap)
		except (DomainError, ResourceError) as exc:
			raise click.BadParameter(str(exc), param_hint="'--L'") from None
		if self.shape.N > self.cfg.dense_cap:
			raise click.BadParameter(f"N={self.shape.N} exceeds the dense cap {self.cfg.dense_cap}", param_hint="'--M'")

	def describe(self):
		return f"simulate: {self.shape}, N={self.shape.N}, L={self.p.L}, grid {self.p.L}^{self.shape.n}, {self.cfg.threads} thread(s)"

	async def run(self):
		res = await simulate_async(self.shape, self.angles(), self.p.L, threads=self.cfg.threads, **self.cfg.sim_kw)
		await self.write(csv_text(("ell", "ell_prime", "re", "im"), complex_rows(res.sim_unitary)))
		summary = self.summary(**res.summary())
		if self.p.summary:
			await self.write(summary, self.p.summary)
		else:
			click.echo(summary, err=True, nl=False)


class Cmd_Sweep(_SimBase):
	"Emulation error over several grid sizes."
	_name = "sweep"
	_doc = dict(_DOC, _l="""\
Run 'simulate' for each L and fit log(spectral error) against L. Writes
JSON with the points, slope, intercept and whether the errors were at the
noise floor. Inadmissible L values are skipped with a warning.
""")

	@classmethod
	def options(cls):
		return super().options() + [
			cls.option("--L-list", "L_list", type=INT_LIST, required=True),
		]

	def check(self):
		super().check()
		if len(set(self.p.L_list)) < 3:
			raise click.BadParameter("need at least 3 grid sizes", param_hint="'--L-list'")

	async def run(self):
		fit = await error_sweep_async(self.shape, self.angles(), self.p.L_list,
				threads=self.cfg.threads, floor=self.cfg.floor, **self.cfg.sim_kw)
		if not fit.floor_limited and not fit.decreasing:
			logger.warning("errors do not decrease monotonically: %r", fit.points)
		await self.write(self.summary(fit=fit.as_dict(), decreasing=fit.decreasing))
