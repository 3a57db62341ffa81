import math
from dataclasses import dataclass, field

import numpy as np

import logging
logger = logging.getLogger(__name__)

__all__ = [
	"SunIrrepError", "DomainError", "ResourceError", "ConvergenceError", "CtxObj",
	"FOUR_PI", "reduce_angle", "center_angle", "pairwise_sum",
	"ErrorFitResult", "fit_decay",
]

FOUR_PI = 4*math.pi

# anything this close to 4π is reported as zero
_WRAP_EPS = 1e-12


class SunIrrepError(Exception):
	pass

class DomainError(SunIrrepError, ValueError):
	"""A precondition of an operation is violated."""
	pass

class ResourceError(SunIrrepError, MemoryError):
	"""A dense-dimension or memory cap would be exceeded."""
	def __init__(self, what, size, cap):
		super().__init__(f"{what}: {size} exceeds cap {cap}")
		self.size = size
		self.cap = cap

class ConvergenceError(SunIrrepError, ArithmeticError):
	"""
	A numerical procedure did not get below its tolerance.

	The achieved residual is available as ``residual``.
	"""
	def __init__(self, msg, residual):
		super().__init__(f"{msg} (residual {residual:.3e})")
		self.residual = residual


class CtxObj:
	"""
	Add an async context manager that calls `_ctx` to run the context.

	Usage::
		class Foo(CtxObj):
			@asynccontextmanager
			async def _ctx(self):
				yield self # or whatever

		async with Foo() as self_or_whatever:
			pass
	"""

	async def __aenter__(self):
		self.__ctx = ctx = self._ctx()  # pylint: disable=E1101,W0201
		return await ctx.__aenter__()

	def __aexit__(self, *tb):
		return self.__ctx.__aexit__(*tb)


def reduce_angle(a):
	"""
	Map an angle to [0, 4π).

	exp(iθG) of a single generator G of a totally symmetric irrep has
	period 4π in θ, so reducing one coordinate alone keeps that one
	exponential. It does not keep exp(i Σ θ_a G_a) when other,
	non-commuting coordinates are non-zero.
	"""
	r = math.fmod(float(a), FOUR_PI)
	if r < 0:
		r += FOUR_PI
	if FOUR_PI - r < _WRAP_EPS:
		r = 0.0
	if r != a:
		logger.debug("angle %r reduced to %r", a, r)
	return r

def center_angle(a):
	"""Map an angle to (−2π, 2π]."""
	r = reduce_angle(a)
	if r > 2*math.pi:
		r -= FOUR_PI
	return r


def pairwise_sum(items):
	"""
	Sum a sequence by pairwise tree reduction.

	The association order only depends on the number of items.
	"""
	items = list(items)
	if not items:
		raise DomainError("nothing to sum")
	while len(items) > 1:
		nxt = [items[i]+items[i+1] for i in range(0, len(items)-1, 2)]
		if len(items) % 2:
			nxt.append(items[-1])
		items = nxt
	return items[0]


@dataclass
class ErrorFitResult:
	"""
	A least-squares line through (L, log error).

	The decay constants of the discretization bounds are only known to
	exist; ``slope`` is their measurable stand-in.
	"""
	points: list = field(default_factory=list)
	slope: float = math.nan
	intercept: float = math.nan
	fit_residual: float = math.nan
	floor_limited: bool = False

	def as_dict(self):
		return dict(
			points=[[int(L), float(e)] for L,e in self.points],
			slope=self.slope,
			intercept=self.intercept,
			fit_residual=self.fit_residual,
			floor_limited=self.floor_limited,
		)

	@property
	def decreasing(self):
		errs = [e for _,e in self.points]
		return all(b < a for a,b in zip(errs, errs[1:]))


def fit_decay(points, floor=1e-12):
	"""
	Fit log(error) against L.

	If every error is at or below ``floor`` the fit is meaningless; the
	result is then flagged as floor-limited and the slope is left at 0.
	"""
	points = sorted((int(L), float(e)) for L,e in points)
	res = ErrorFitResult(points=points)
	if points and all(e <= floor for _,e in points):
		res.floor_limited = True
		res.slope = 0.0
		res.intercept = math.log(floor)
		res.fit_residual = 0.0
		logger.info("error fit is floor-limited: %r", points)
		return res
	if len(points) < 3:
		raise DomainError(f"need at least 3 points to fit, got {len(points)}")

	Ls = np.array([L for L,_ in points], dtype=float)
	# clamp so that an exact zero does not produce -inf
	logs = np.log(np.maximum([e for _,e in points], np.finfo(float).tiny))
	(slope, intercept), resid, *_ = np.polyfit(Ls, logs, 1, full=True)
	res.slope = float(slope)
	res.intercept = float(intercept)
	res.fit_residual = float(math.sqrt(resid[0])) if len(resid) else 0.0
	logger.debug("fit: slope %.4g intercept %.4g", res.slope, res.intercept)
	return res
