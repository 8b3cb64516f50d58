"""Umbrella package for all checks.

Anyone who wants to add checks from a plugin is welcome to modify the values in this specific namespace. In
particular, to add a check with your plugin:
1) Add your plugin's checks as a submodule of this using
   `from sys import modules; modules['.'.join((PATH_TO_CHECK_MODULE, PATH_TO_YOUR_CHECK))] = module[PATH_TO_YOUR_CHECK]
2) Append your plugin's namespace to `check.__all__`
3) Append each of your checks' import paths to `consts.AVAILABLE_CHECKS`
"""

from __future__ import annotations

from importlib import import_module
from typing import Type, cast

from .. import Check
from ..util import dynamic_import


def get_check(type_: str) -> Type[Check]:
    """Dynamically import and return a check type by name, e.g. ``numeric.FixedPoints``."""
    ret = getattr(
        import_module(".".join(("", *type_.split(".")[:-1])), __name__),
        type_.split(".")[-1]
    )
    if isinstance(ret, type) and issubclass(ret, Check):
        return cast(Type[Check], ret)
    raise NameError(type_)


__all__ = ['get_check']

# dynamically load optional plugins where able to
exempt = {'__init__', '__main__', '__pycache__'}
dynamic_import(__file__, __name__, __all__, exempt)
