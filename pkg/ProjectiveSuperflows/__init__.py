"""Projective Superflows Library.

This module constructs, classifies, integrates and verifies projective superflows: 2-homogenic rational vector
fields in three dimensions whose flows satisfy the projective translation equation and which are, up to scale,
the unique fields of minimal denominator degree invariant under a finite group of symmetries.

Exact work happens over ℚ(√5) and cyclotomic fields. Flow-level work is numerical. Every claim the library can
check is a :class:`Check`, and the ``check`` subpackage holds the registered ones.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from logging import ERROR, INFO, getLogger
from os import getenv
from time import perf_counter
from typing import TYPE_CHECKING

from attrs import define, field, frozen

from .util import DictDeserializable, round_sig_figs

if TYPE_CHECKING:  # pragma: no cover
    from logging import Logger
    from typing import Any, Dict, Mapping, Tuple


@frozen
class CheckResult:
    """The structured outcome of one check: what was expected, what was found, and whether they agree."""

    name: str
    expected: Any
    got: Any
    passed: bool
    seconds: float = field(default=0.0, eq=False)
    children: Tuple[CheckResult, ...] = field(default=(), converter=tuple)

    def failures(self) -> Tuple[CheckResult, ...]:
        """Every failing leaf below (and including) this result."""
        if not self.children:
            return () if self.passed else (self, )
        return tuple(f for child in self.children for f in child.failures())

    def to_json(self) -> Dict[str, Any]:
        ret: Dict[str, Any] = {"name": self.name, "expected": self.expected, "got": self.got, "pass": self.passed}
        if self.children:
            ret["children"] = [c.to_json() for c in self.children]
        return ret


@define(slots=False)  # type: ignore
class Check(ABC, DictDeserializable):
    """The basic unit of verification, a named claim about the superflows that can be run and explained."""

    logger: Logger = field(init=False, repr=False, hash=False)

    def __attrs_post_init__(self) -> None:
        """Ensure that the logger object is created."""
        if hasattr(super(), '__attrs_post_init__'):
            super().__attrs_post_init__()  # type: ignore
        self.logger = getLogger(f"{type(self).__qualname__}[{id(self)}]")

    def __getstate__(self) -> Mapping[str, Any]:
        """Remove non-serializable state before pickling."""
        state = self.__dict__.copy()
        if 'logger' in state:
            del state['logger']
        return state

    def __setstate__(self, state: Mapping[str, Any]) -> None:
        self.__dict__.update(state)
        self.logger = getLogger(f"{type(self).__qualname__}[{id(self)}]")

    @property
    def name(self) -> str:
        """The registry name, e.g. ``exact.GroupOrders``."""
        return f"{type(self).__module__.rsplit('.', 1)[-1]}.{type(self).__qualname__}"

    @abstractmethod
    def _run(self) -> CheckResult:  # pragma: no cover
        ...

    def run(self) -> CheckResult:
        """Run the check; domain errors become a failed result rather than escaping."""
        start = perf_counter()
        try:
            ret = self._run()
        except (ArithmeticError, ValueError, RuntimeError) as e:
            self.logger.exception("%s raised", self.name)
            ret = CheckResult(self.name, "no error", f"{type(e).__name__}: {e}", False)
        elapsed = perf_counter() - start
        ret = CheckResult(ret.name, ret.expected, ret.got, ret.passed, elapsed, ret.children)
        self.logger.log(INFO if ret.passed else ERROR, "%s %s in %ss", ret.name,
                        "passed" if ret.passed else "FAILED", round_sig_figs(elapsed, 3))
        return ret

    @abstractmethod
    def _explain(self, indent: int = 0) -> str:  # pragma: no cover
        raise NotImplementedError(type(self))

    def explain(self, indent: int = 0) -> str:
        """Describe what the check claims, one line per (sub)check."""
        return self._explain(indent)


from . import check, util  # noqa: E402
from .catalog import Superflow, build_superflow  # noqa: E402
from .check import get_check  # noqa: E402
from .util import dynamic_import  # noqa: E402

VERSION = "0.1.0"
__version_info__ = tuple(int(x) for x in VERSION.split('.'))
__all__ = [
    "__version_info__", "VERSION", "Check", "CheckResult", "Superflow", "build_superflow", "get_check", "check",
    "util"
]

if getenv("DEBUG"):  # pragma: no cover
    import sys

    def info(type, value, tb):  # type: ignore  # pragma: no cover
        """Open a postmortem pdb prompt on exception, if able."""
        if hasattr(sys, 'ps1') or not sys.stderr.isatty():
            # we are in interactive mode or we don't have a tty-like
            # device, so we call the default hook
            sys.__excepthook__(type, value, tb)
        else:
            import pdb
            import traceback

            # we are NOT in interactive mode, print the exception...
            traceback.print_exception(type, value, tb)
            print()
            # ...then start the debugger in post-mortem mode.
            pdb.post_mortem(tb)

    sys.excepthook = info

# dynamically load the remaining modules where able to
exempt = {'__init__', '__main__', '__pycache__', 'application', 'test', 'py.typed', *__all__}
dynamic_import(__file__, __name__, __all__, exempt)
