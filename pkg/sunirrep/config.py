import os

from moat.util import attrdict

from ._util import DomainError

import logging
logger = logging.getLogger(__name__)

__all__ = ["RunConfig"]


class RunConfig:
	"""
	Everything one CLI run needs.

	Configurable parameters ("system" group in a ``--config`` file):
	"""

	mem_cap = 2**26  # complex entries of one grid vector
	dense_cap = 4096  # largest N for dense N×N work

	leakage_threshold = 1e-6  # flag emulation columns leaking more than this
	gram_tol = 1e-10  # above this Gram deviation, use the corrected projector

	decompose_tol = 1e-10  # fundamental reconstruction error
	max_sweeps = 4  # decomposition sweeps before giving up

	floor = 1e-12  # errors below this are numerical noise
	solver_tol = 1e-12  # iterative singular value solver
	max_iter = 5000

	threads = 1  # worker threads for column fan-out

	def __init__(self, cfg=None, command=None, **params):
		self.cfg = cfg if cfg is not None else attrdict()
		self.command = command

		for k,v in self.cfg.get("system",{}).items():
			try:
				vv = getattr(type(self),k)
				if not isinstance(vv,(type(None),int,float,str)):
					raise RuntimeError
			except AttributeError:
				logger.error("System param unknown: %r", k)
			except RuntimeError:
				logger.error("Not a system param: %r", k)
			else:
				setattr(self,k,v)

		self.seed = params.pop("seed", None) or 0
		self.dry_run = bool(params.pop("dry_run", False))
		self.out = params.pop("out", None)
		threads = params.pop("threads", None)
		if threads is None and os.environ.get("SUNIRREP_THREADS"):
			try:
				threads = int(os.environ["SUNIRREP_THREADS"])
			except ValueError:
				raise DomainError(f"SUNIRREP_THREADS is not an integer: {os.environ['SUNIRREP_THREADS']!r}") from None
		if threads is not None:
			self.threads = threads
		self.params = attrdict(params)
		self.check()

	def check(self):
		for k in ("mem_cap", "dense_cap", "max_sweeps", "max_iter", "threads"):
			v = getattr(self, k)
			if not isinstance(v, int) or v < 1:
				raise DomainError(f"{k} must be a positive integer, got {v!r}")
		for k in ("leakage_threshold", "gram_tol", "decompose_tol", "floor", "solver_tol"):
			v = getattr(self, k)
			if not isinstance(v, (int, float)) or not v > 0:
				raise DomainError(f"{k} must be positive, got {v!r}")
		if self.seed < 0:
			raise DomainError(f"seed must not be negative, got {self.seed}")

	@property
	def sim_kw(self):
		"""Caps and tolerances for `sunirrep.pipeline`."""
		return dict(
			mem_cap=self.mem_cap,
			dense_cap=self.dense_cap,
			leakage_threshold=self.leakage_threshold,
			gram_tol=self.gram_tol,
			decompose_tol=self.decompose_tol,
			max_sweeps=self.max_sweeps,
		)

	def echo(self):
		"""A plain-data copy for output files."""
		return dict(
			command=self.command,
			seed=self.seed,
			threads=self.threads,
			params={k: v for k,v in self.params.items()},
			system={k: getattr(self, k) for k in (
				"mem_cap", "dense_cap", "leakage_threshold", "gram_tol",
				"decompose_tol", "max_sweeps", "floor", "solver_tol", "max_iter")},
		)

	def __repr__(self):
		return f"RunConfig({self.command!r}, {dict(self.params)!r})"
