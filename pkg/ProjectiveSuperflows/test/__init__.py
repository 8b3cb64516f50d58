"""Contain some common fixtures."""

from __future__ import annotations

from dataclasses import dataclass
from sys import modules
from typing import TYPE_CHECKING, Generic, TypeVar

from pytest import fixture

from ..catalog import build_superflow
from ..consts import AVAILABLE_CHECKS, SuperflowName

if TYPE_CHECKING:  # pragma: no cover
    from ..catalog import Superflow

T = TypeVar('T')


@dataclass
class PytestRequest(Generic[T]):
    """Generic stub to represent a Pytest request."""

    param: T


spherical_names = (SuperflowName.ICOSAHEDRAL, SuperflowName.OCTAHEDRAL)
nonspherical_names = (SuperflowName.TETRAHEDRAL, SuperflowName.PRISMATIC, SuperflowName.ANTIPRISMATIC)
combos = {
    "superflow": tuple(SuperflowName),
    "spherical_superflow": spherical_names,
    "nonspherical_superflow": nonspherical_names,
}
__all__ = ['PytestRequest', 'check_name', *combos]

superflow = spherical_superflow = nonspherical_superflow = True  # get mypy to shut up

for name, params in combos.items():
    @fixture(params=params, name=name, scope='session', ids=[p.value for p in params])  # type: ignore
    def foo(request: PytestRequest[SuperflowName]) -> Superflow:
        """Generate catalog superflows via a fixture."""
        return build_superflow(request.param)

    foo.__name__ = name
    setattr(modules[__name__], name, foo)


@fixture(params=AVAILABLE_CHECKS)  # type: ignore
def check_name(request: PytestRequest[str]) -> str:
    """Return the name of a registered check."""
    return request.param
