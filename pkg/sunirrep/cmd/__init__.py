"""
The ``sunirrep`` command line.

Every module in this package contributes subcommands: classes derived from
`Command` that are listed in the module's ``__all__`` and have a ``_name``.
The ``_doc`` mapping of a command holds the help text of its options; its
``_l`` entry is the long description.
"""

import sys
import json
import logging

import anyio
import asyncclick as click
from moat.util import attrdict, yload
from ruyaml.error import YAMLError

from .._util import DomainError, ResourceError, ConvergenceError
from ..config import RunConfig

logger = logging.getLogger(__name__)

__all__ = ["main", "cli", "parse_args", "run", "Command", "COMMANDS"]


class Command:
	"""
	Base class for subcommands.

	Subclasses provide `options`, may refine `check` and `describe`, and
	implement `run`.
	"""
	_name = None
	_doc = {}

	COMMANDS = {}

	@classmethod
	def register(cls, target):
		if target._name in cls.COMMANDS:
			raise RuntimeError(f"Command {target._name} already known: {cls.COMMANDS[target._name]}")
		cls.COMMANDS[target._name] = target

	@classmethod
	def options(cls):
		return []

	@classmethod
	def option(cls, *decls, **kw):
		"""A click option whose help comes from ``_doc``."""
		name = decls[-1] if decls[-1].isidentifier() else decls[-1].lstrip("-").replace("-","_")
		kw.setdefault("help", cls._doc.get(name))
		return click.Option(decls, **kw)

	def __init__(self, cfg):
		self.cfg = cfg
		self.p = cfg.params

	def check(self):
		"""Validate parameters. Raise `click.BadParameter` naming the option."""
		pass

	def describe(self):
		"""What a real run would do; printed by ``--dry-run``."""
		args = " ".join(f"{k}={v!r}" for k,v in self.p.items() if v is not None)
		return f"{self._name}: {args}"

	async def run(self):
		raise NotImplementedError(self._name)

	async def write(self, text, path=None):
		"""Emit ``text`` to ``path``, default the ``--out`` file or stdout."""
		path = path or self.cfg.out
		if path is None or str(path) == "-":
			sys.stdout.write(text)
		else:
			await anyio.Path(path).write_text(text)
			logger.info("wrote %s", path)

	def summary(self, **data):
		from .. import __version__
		res = dict(version=__version__, config=self.cfg.echo())
		res.update(data)
		return json.dumps(res, indent=2, sort_keys=True, default=str) + "\n"


COMMANDS = Command.COMMANDS

def _common():
	return [
		click.Option(["--seed"], type=int, default=0, show_default=True, help="Random seed"),
		click.Option(["--dry-run", "dry_run"], is_flag=True, help="Validate and describe, do not compute"),
		click.Option(["--threads"], type=int, envvar="SUNIRREP_THREADS", help="Worker threads [env SUNIRREP_THREADS]"),
		click.Option(["-o", "--out"], type=click.Path(dir_okay=False, writable=True), help="Output file, default stdout"),
	]


@click.group()
@click.option("-c", "--config", type=click.File("r"), help="YAML file with a 'system' section")
@click.option("-v", "--verbose", count=True, help="More logging; repeat for debug output")
@click.pass_context
async def main(ctx, config, verbose):
	"""
	Totally symmetric irreps of SU(n), their oscillator emulation, and
	quantum expanders built from them.
	"""
	obj = ctx.ensure_object(attrdict)
	if verbose:
		logging.basicConfig(stream=sys.stderr)
		logging.getLogger().setLevel(logging.INFO if verbose == 1 else logging.DEBUG)
	obj.cfg = _read_config(config) if config is not None else attrdict()


def _read_config(f):
	try:
		cfg = yload(f, attr=True)
	except YAMLError as exc:
		raise click.ClickException(f"cannot read {f.name}: {exc}") from exc
	if cfg is None:
		return attrdict()
	if not isinstance(cfg, dict) or not isinstance(cfg.get("system", {}), dict):
		raise click.ClickException(f"{f.name}: expected a mapping with a 'system' section")
	return cfg


def _make_command(c):
	async def callback(**kw):
		ctx = click.get_current_context()
		obj = ctx.find_object(attrdict)
		try:
			cfg = RunConfig(obj.cfg, command=c._name, **kw)
		except DomainError as exc:
			raise click.UsageError(str(exc)) from exc
		c(cfg).check()
		obj.run_cfg = cfg

	doc = (c.__doc__ or "").strip()
	return click.Command(c._name, params=_common() + c.options(), callback=callback,
			help=c._doc.get("_l", doc), short_help=doc.split("\n")[0])


async def parse_args(argv):
	"""
	Parse a command line into a validated `RunConfig`.

	Returns None if nothing is to be run (``--help``). Raises
	`click.UsageError` for anything invalid.
	"""
	obj = attrdict()
	res = await main.main(args=list(argv), prog_name="sunirrep", standalone_mode=False, obj=obj)
	if isinstance(res, int) and res:
		raise click.UsageError(f"exit code {res}")
	return obj.get("run_cfg")


def _origin(exc):
	tb = exc.__traceback__
	name = None
	while tb is not None:
		name = tb.tb_frame.f_globals.get("__name__", name)
		tb = tb.tb_next
	return name or type(exc).__module__


async def run(cfg):
	"""Execute a parsed configuration. Returns the process exit code."""
	cmd = COMMANDS[cfg.command](cfg)
	try:
		cmd.check()
		if cfg.dry_run:
			print(cmd.describe())
			return 0
		await cmd.run()
	except ConvergenceError as exc:
		print(f"{_origin(exc)}: {exc}", file=sys.stderr)
		return 2
	except (DomainError, ResourceError, OverflowError, click.UsageError) as exc:
		print(f"{_origin(exc)}: {exc}", file=sys.stderr)
		return 1
	return 0


async def cli(argv):
	"""Parse and run a command line. Returns the process exit code."""
	try:
		cfg = await parse_args(argv)
	except click.exceptions.Exit as exc:
		return exc.exit_code
	except click.Abort:
		return 1
	except click.ClickException as exc:
		exc.show()
		return 1
	if cfg is None:
		return 0
	return await run(cfg)


def _loader(path, cls, reg):
	from pathlib import Path
	from importlib import import_module

	def _imp(name):
		m = import_module("."+name, package=_loader.__module__)
		for n in m.__all__:
			c = getattr(m,n)
			if isinstance(c,type) and issubclass(c,cls) and getattr(c,'_name',None):
				reg(c)

	path = Path(path)
	for filename in sorted(path.glob("*")):
		if filename.name[0] in "._":
			continue
		if filename.name.endswith(".py"):
			_imp(filename.name[:-3])
		elif (path / filename / "__init__.py").is_file():
			_imp(filename.name)

_loader(__path__[0], Command, Command.register)
del _loader

for _c in COMMANDS.values():
	main.add_command(_make_command(_c))
del _c
