"""Contains abstract subclasses of Check which provide the shared shapes of the concrete checks."""

from __future__ import annotations

from typing import TYPE_CHECKING

from attrs import Factory, define

from .. import Check, CheckResult
from ..caching import parallel
from . import get_check

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, ClassVar, List, Mapping, Optional, Sequence, Tuple

SENTINEL_STUB = "A programatic explanation was not provided"


@define(slots=False)  # type: ignore
class AbstractCheck(Check):
    """Provide a check where the explanation is pre-written."""

    _explainer_stub: ClassVar[str] = SENTINEL_STUB

    def __init_subclass__(cls) -> None:
        """Enforce that concrete subclasses provide an explanatory stub."""
        if cls._explainer_stub is SENTINEL_STUB and cls.__module__ != __name__:
            raise ValueError("You need to override _explainer_stub to subclass this")
        return super().__init_subclass__()

    def _explain(self, indent: int = 0) -> str:
        return f"{'  ' * indent}- {self._explainer_stub}\n"


@define(slots=False)  # type: ignore
class ToleranceCheck(AbstractCheck):
    """A check whose outcome is a list of named residuals, each held to a bound."""

    def _residuals(self) -> Sequence[Tuple[str, float, float]]:  # pragma: no cover
        """Return (label, residual, bound) triples."""
        raise NotImplementedError(type(self))

    def _run(self) -> CheckResult:
        children = []
        for label, residual, bound in self._residuals():
            children.append(CheckResult(f"{self.name}[{label}]", f"<= {bound:g}", residual, residual <= bound))
        worst = max((c.got for c in children), default=0.0)
        return CheckResult(self.name, "all residuals within bounds", worst, all(c.passed for c in children),
                           children=children)


@define(slots=False)  # type: ignore
class EqualityCheck(AbstractCheck):
    """A check whose outcome is a list of named (expected, got) pairs compared exactly."""

    def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:  # pragma: no cover
        raise NotImplementedError(type(self))

    def _run(self) -> CheckResult:
        children = [CheckResult(f"{self.name}[{label}]", expected, got, expected == got)
                    for label, expected, got in self._pairs()]
        return CheckResult(self.name, [c.expected for c in children], [c.got for c in children],
                           all(c.passed for c in children), children=children)


@define(slots=False)  # type: ignore
class CheckSuite(AbstractCheck):
    """Run many checks, concurrently unless parallelism is switched off, and pass only if all of them pass."""

    _explainer_stub: ClassVar[str] = "Pass if every check below passes"

    checks: List[Check] = Factory(list)

    @classmethod
    def from_names(cls, names: Sequence[str], options: Optional[Mapping[str, Mapping[str, Any]]] = None
                   ) -> CheckSuite:
        """Build a suite from registry names, with optional keyword arguments per name."""
        options = options or {}
        return cls([get_check(name).from_dict(options.get(name, {})) for name in names])

    @classmethod
    def from_dict(cls, env: Mapping[str, Any]) -> CheckSuite:
        """Take a dictionary of ``{"checks": [[name, kwargs], ...]}`` and return a suite."""
        arr: Sequence[Tuple[str, Mapping[str, Any]]] = env.get("checks", [])
        return cls([get_check(type_).from_dict(kwargs) for type_, kwargs in arr])

    def _run(self) -> CheckResult:
        futures = [parallel(check.run) for check in self.checks]
        children = [f.result() for f in futures]
        failed = [c.name for c in children if not c.passed]
        return CheckResult("suite", [], failed, not failed, children=children)

    def _explain(self, indent: int = 0) -> str:
        ret = super()._explain(indent)
        for check in self.checks:
            ret += check.explain(indent + 1)
        return ret
