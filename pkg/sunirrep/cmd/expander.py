import asyncclick as click

from . import Command
from ._util import INT_LIST, csv_text, complex_rows
from .._util import DomainError
from ..expander import DENSE_SUPEROP, check_prime, lps_spec, build_channel, pipeline_kraus, spectral_gap

import logging
logger = logging.getLogger(__name__)

__all__ = ["Cmd_Expander"]


class Cmd_Expander(Command):
	"Spectral gaps of quaternion expanders on SU(2) irreps."
	_name = "expander"
	_doc = dict(
		p="Prime, 3 or 1 mod 4; the channel has p+1 Kraus unitaries",
		N_list="Irrep dimensions, e.g. 10,20,...,60",
		emit_unitaries="Also write the Kraus unitaries as CSV (N, d, ell, ell_prime, re, im)",
		unitaries_out="File for --emit-unitaries",
		pipeline_L="Build the unitaries with the oscillator emulation at this L (N ≤ 20 only)",
		_l="""\
For each N compute λ, the largest singular value of ρ ↦ (1/D) Σ U_d ρ U_d†
on traceless ρ, and compare it with the Ramanujan bound 2√(D-1)/D.
CSV columns: N, lambda, bound, margin (bound - lambda).
""",
	)

	@classmethod
	def options(cls):
		return [
			cls.option("--p", "p", type=int, required=True),
			cls.option("--N-list", "N_list", type=INT_LIST, required=True),
			cls.option("--emit-unitaries", "emit_unitaries", is_flag=True),
			cls.option("--unitaries-out", "unitaries_out", type=click.Path(dir_okay=False, writable=True),
				default="unitaries.csv", show_default=True),
			cls.option("--pipeline-L", "pipeline_L", type=int),
		]

	def check(self):
		p = self.p
		try:
			check_prime(p.p)
		except DomainError as exc:
			raise click.BadParameter(str(exc), param_hint="'--p'") from None
		for N in p.N_list:
			if N < 2:
				raise click.BadParameter(f"N must be at least 2, got {N}", param_hint="'--N-list'")
			if N > self.cfg.dense_cap:
				raise click.BadParameter(f"N={N} exceeds the dense cap {self.cfg.dense_cap}", param_hint="'--N-list'")
		if p.pipeline_L is not None and max(p.N_list) > DENSE_SUPEROP:
			raise click.BadParameter(f"the emulated channel is limited to N ≤ {DENSE_SUPEROP}", param_hint="'--pipeline-L'")

	def describe(self):
		return f"expander: p={self.p.p}, D={self.p.p+1}, N in {self.p.N_list}"

	def kraus(self, spec):
		if self.p.pipeline_L is None:
			return build_channel(spec, cap=self.cfg.dense_cap)
		kraus, err = pipeline_kraus(spec, self.p.pipeline_L, **self.cfg.sim_kw)
		logger.info("N=%d: emulated unitaries, spectral error ≤ %.3e", spec.N, err)
		return kraus

	async def run(self):
		p = self.p
		rows = []
		dump = []
		for N in p.N_list:
			spec = lps_spec(p.p, N-1)
			kraus = self.kraus(spec)
			res = spectral_gap(kraus, tol=self.cfg.solver_tol, max_iter=self.cfg.max_iter, seed=self.cfg.seed)
			rows.append((N, res.lam, res.bound, res.margin))
			if res.margin < 0:
				logger.warning("N=%d: λ=%.6f is above the Ramanujan bound %.6f", N, res.lam, res.bound)
			if p.emit_unitaries:
				for d,U in enumerate(kraus):
					dump.extend((N, d) + r for r in complex_rows(U))

		await self.write(csv_text(("N", "lambda", "bound", "margin"), rows))
		if p.emit_unitaries:
			await self.write(csv_text(("N", "d", "ell", "ell_prime", "re", "im"), dump), p.unitaries_out)
