import csv
import io

import asyncclick as click
import numpy as np

from .._util import DomainError
from ..algebra import AngleSet
from ..combinatorics import IrrepShape

import logging
logger = logging.getLogger(__name__)


class IntList(click.ParamType):
	"""
	Comma-separated integers. ``a,b,...,z`` continues the progression
	set by a and b up to z.
	"""
	name = "int,int,..."

	def convert(self, value, param, ctx):
		if isinstance(value, (list, tuple)):
			return list(value)
		tok = [t.strip() for t in str(value).split(",") if t.strip()]
		try:
			if "..." in tok:
				i = tok.index("...")
				if i != 2 or len(tok) != 4:
					raise ValueError(value)
				a,b,z = int(tok[0]), int(tok[1]), int(tok[3])
				if b <= a or z < b:
					raise ValueError(value)
				return list(range(a, z+1, b-a))
			res = [int(t) for t in tok]
		except ValueError:
			self.fail(f"{value!r} is not a comma-separated list of integers", param, ctx)
		if not res:
			self.fail("the list is empty", param, ctx)
		return res


class IntTuple(IntList):
	"""Comma-separated integers, e.g. a composition."""
	name = "a,b,c"

	def convert(self, value, param, ctx):
		if "..." in str(value):
			self.fail(f"{value!r}: no ranges here", param, ctx)
		return tuple(super().convert(value, param, ctx))


INT_LIST = IntList()
INT_TUPLE = IntTuple()


def shape_options(cmd, M_required=True):
	return [
		cmd.option("--n", type=int, required=True),
		cmd.option("--M", "M", type=int, required=M_required),
	]


def check_shape(n, M, min_n=1):
	"""The IrrepShape for n, M, or a usage error naming the bad option."""
	if n is None or n < min_n:
		raise click.BadParameter(f"n must be at least {min_n}, got {n}", param_hint="'--n'")
	if M is None or M < 0:
		raise click.BadParameter(f"M must not be negative, got {M}", param_hint="'--M'")
	try:
		shape = IrrepShape(n, M)
		shape.N
	except OverflowError as exc:
		raise click.BadParameter(f"irrep dimension {exc} is too large", param_hint="'--M'") from None
	return shape


def read_angles(path, n, seed):
	"""Angles from a ``kind j k value`` file, or random ones from ``seed``."""
	if path is None:
		logger.info("random angles, seed %d", seed)
		return AngleSet.random(n, seed)
	with open(path) as f:
		return AngleSet.from_lines(n, f)


def fmt(x):
	"""Shortest round-trip text of a number."""
	if isinstance(x, (float, np.floating)):
		return repr(float(x))
	return str(x)


def csv_text(header, rows):
	buf = io.StringIO()
	w = csv.writer(buf, lineterminator="\n")
	w.writerow(header)
	for r in rows:
		w.writerow([fmt(x) for x in r])
	return buf.getvalue()


def complex_rows(m):
	"""(ell, ell_prime, re, im) for every entry m[ell_prime, ell], column by column."""
	for l in range(m.shape[1]):
		for lp in range(m.shape[0]):
			v = complex(m[lp,l])
			yield l, lp, v.real, v.imag


def read_matrix(path):
	"""A square complex matrix from CSV, one row per line, entries like ``0.6-0.8j``."""
	rows = []
	with open(path, newline="") as f:
		for nr,row in enumerate(csv.reader(f), 1):
			if not row or row[0].startswith("#"):
				continue
			try:
				rows.append([complex(x.strip().replace(" ", "")) for x in row])
			except ValueError:
				raise DomainError(f"{path}:{nr}: cannot parse {row!r}") from None
	if not rows or any(len(r) != len(rows) for r in rows):
		raise DomainError(f"{path}: need a square matrix")
	return np.array(rows, dtype=complex)
