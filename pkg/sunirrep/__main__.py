import sys

import anyio

from .cmd import cli


async def _main():
	return await cli(sys.argv[1:])


if __name__ == "__main__":
	sys.exit(anyio.run(_main, backend="trio"))
