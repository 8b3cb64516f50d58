"""Runner script for ProjectiveSuperflows.

Includes a variety of command line options which can be explored by invoking with the `--help` flag. Every
subcommand prints JSON (or CSV, for sampled fields) to standard output unless given `--out`, and exits with 0 when
everything it checked passed, 1 when a check failed or a domain error was raised, and 2 on a usage error.
"""

from __future__ import annotations

from logging import DEBUG, INFO, basicConfig, getLogger
from os import getenv

from .application import dispatch, parse_args
from .consts import EnvironmentVariable

args = parse_args()

if args.logging:
    # Enable logging
    basicConfig(
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        level=(DEBUG if getenv(EnvironmentVariable.DEBUG.value) or args.verbose else INFO),
        filename=getenv(EnvironmentVariable.LogFile.value),
    )
    logger = getLogger(__name__)

exit(dispatch(args))
