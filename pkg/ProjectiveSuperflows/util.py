"""Contains utility functions."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from hashlib import blake2b
from importlib import import_module
from io import StringIO
from itertools import count
from json import dumps
from logging import getLogger
from math import ceil, isfinite
from pathlib import Path
from sys import modules
from traceback import print_exc
from typing import TYPE_CHECKING
from warnings import warn

import numpy as np

from .consts import FLOAT_DIGITS

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Collection, Mapping, MutableSequence, Optional, Sequence, Type, TypeVar, Union

    from numpy.typing import ArrayLike

    T = TypeVar("T")

logger = getLogger(__name__)


class DictDeserializable:
    """Build an instance from a mapping of keyword arguments, without checking against the signature."""

    @classmethod
    def from_dict(cls: Type[T], env: Mapping[str, Any]) -> T:
        """Take a dictionary and return an instance of the associated class."""
        return cls(**env)


def hash_to_randrange(buff: bytes, *args: int, **kwargs: int) -> int:
    """Generate a 'random' number by hashing a buffer."""
    active_range = range(*args, **kwargs)
    size = len(active_range)
    bits = max((size - 1).bit_length(), 1)
    mask = (1 << bits) - 1
    byte_length = ceil(bits / 8)
    ret: int
    for idx in count():
        hashobj = blake2b(buff, digest_size=byte_length, salt=str(idx).encode())
        as_int = int.from_bytes(hashobj.digest(), 'little') & mask
        if as_int < size:
            ret = active_range[as_int]
            break
    return ret


def seeded_rng(label: str) -> np.random.Generator:
    """Return a numpy generator whose seed is derived from a label, so runs are reproducible."""
    return np.random.default_rng(hash_to_randrange(label.encode(), 2**32))


def round_sig_figs(num: float, sig_figs: int = 4) -> str:
    """Round a number to the specified number of significant figures, then return it as a str."""
    return f"%.{sig_figs}g" % (num, )


def to_jsonable(obj: Any) -> Any:
    """Convert exact scalars, numpy values, enums and attrs-style objects into plain JSON data."""
    if hasattr(obj, 'to_json'):
        return to_jsonable(obj.to_json())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return [obj.numerator, obj.denominator]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"Cannot serialize {obj!r}")


def _format_float(value: float) -> str:
    if not isfinite(value):
        return dumps(value)
    return f"%.{FLOAT_DIGITS}g" % (value, )


def canonical_json(obj: Any, indent: Optional[int] = 2, _level: int = 0) -> str:
    """Serialize with sorted keys and floats at a fixed number of significant digits.

    The output is byte-identical for identical inputs, which the golden-file tests rely on.
    """
    data = to_jsonable(obj)
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = "," if indent is not None else ", "
    if isinstance(data, dict):
        if not data:
            return "{}"
        items = [f"{pad}{dumps(k)}: {canonical_json(data[k], indent, _level + 1)}" for k in sorted(data)]
        return "{" + sep.join(items) + end + "}"
    if isinstance(data, list):
        if not data:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in data):
            return "[" + ", ".join(canonical_json(v, None) for v in data) + "]"
        items = [pad + canonical_json(v, indent, _level + 1) for v in data]
        return "[" + sep.join(items) + end + "]"
    if isinstance(data, float):
        return _format_float(data)
    return dumps(data)


def write_output(text: str, out: Optional[Union[str, Path]] = None) -> None:
    """Write text to out, or to standard output when out is None."""
    if out is None:
        print(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info("wrote %s", path)


def format_csv(columns: Sequence[str], rows: ArrayLike) -> str:
    """Render a numeric table with a header line and fixed 17-digit formatting."""
    buff = StringIO()
    np.savetxt(buff, np.asarray(rows, dtype=float), fmt=f"%.{FLOAT_DIGITS}g", delimiter=",",
               header=",".join(columns), comments="")
    return buff.getvalue()


def write_csv(path: Union[str, Path], columns: Sequence[str], rows: ArrayLike) -> Path:
    """Write a numeric table to path, creating parent directories as needed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_csv(columns, rows), encoding="utf-8")
    logger.info("wrote %s", path)
    return path


def dynamic_import(fname: str, mname: str, __all__: MutableSequence[str], exempt: Collection[str]) -> None:
    """Dynamically import submodules and add them to the export list."""
    for entry in Path(fname).parent.glob("[!.]*"):
        name = entry.name[:-3] if entry.name.endswith(".py") else entry.name
        if name in exempt:
            continue
        try:
            setattr(modules[mname], name, import_module("." + name, mname))
            __all__.append(name)
        except ImportError:  # pragma: no cover
            print_exc()
            warn(f"Unable to import extension module: {mname}.{name}")
