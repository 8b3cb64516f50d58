from __future__ import annotations

from fractions import Fraction
from json import loads
from typing import TYPE_CHECKING

import numpy as np
from pytest import mark, raises

from ..consts import SuperflowName
from ..util import (canonical_json, format_csv, hash_to_randrange, round_sig_figs, seeded_rng, to_jsonable, write_csv,
                    write_output)
from . import superflow

if TYPE_CHECKING:  # pragma: no cover
    from pathlib import Path
    from typing import Tuple

    from pytest import CaptureFixture
    from pytest_benchmark.fixture import BenchmarkFixture

    from ..catalog import Superflow

assert superflow  # just need to access so mypy doesn't complain


def test_canonical_json_layout() -> None:
    assert canonical_json({"b": [1, 2], "a": 0.5}) == '{\n  "a": 0.5,\n  "b": [1, 2]\n}'
    assert canonical_json({"b": [1, 2], "a": 0.1}, indent=None) == '{"a": 0.10000000000000001, "b": [1, 2]}'
    assert canonical_json({}) == "{}"
    assert canonical_json([]) == "[]"
    assert canonical_json([{"x": True}], indent=None) == '[{"x": true}]'
    assert canonical_json(float("nan")) == "NaN"


def test_to_jsonable() -> None:
    assert to_jsonable(Fraction(1, 3)) == [1, 3]
    assert to_jsonable(SuperflowName.ICOSAHEDRAL) == "I"
    assert to_jsonable(np.float64(0.25)) == 0.25
    assert to_jsonable(np.arange(3)) == [0, 1, 2]
    assert to_jsonable(1 + 2j) == [1.0, 2.0]
    assert to_jsonable({1: (None, "a")}) == {"1": [None, "a"]}
    with raises(TypeError):
        to_jsonable(object())


def test_catalog_output_is_deterministic(superflow: Superflow, benchmark: BenchmarkFixture) -> None:
    """Two serializations of the same catalog entry are byte-identical and parse back to the same data."""
    first = benchmark(canonical_json, superflow)
    assert canonical_json(superflow) == first
    assert loads(first) == to_jsonable(superflow)


def test_seeded_rng() -> None:
    assert seeded_rng("translation-I").random() == seeded_rng("translation-I").random()
    assert seeded_rng("translation-I").random() != seeded_rng("translation-O").random()


@mark.parametrize("args", [(10, ), (5, 10), (0, 100, 7), (1, )])
def test_hash_to_randrange(args: Tuple[int, ...]) -> None:
    for label in (b"", b"a", b"superflow"):
        value = hash_to_randrange(label, *args)
        assert value in range(*args)
        assert value == hash_to_randrange(label, *args)


def test_round_sig_figs() -> None:
    assert round_sig_figs(123456) == "1.235e+05"
    assert round_sig_figs(0.000123456, 2) == "0.00012"


def test_format_and_write_csv(tmp_path: Path) -> None:
    assert format_csv(("a", "b"), [[1, 0.5], [-2, 0.1]]) == "a,b\n1,0.5\n-2,0.10000000000000001\n"
    path = write_csv(tmp_path / "nested" / "table.csv", ("t", "x"), np.zeros((2, 2)))
    assert path.read_text() == "t,x\n0,0\n0,0\n"


def test_write_output(tmp_path: Path, capsys: CaptureFixture[str]) -> None:
    write_output("hello")
    assert capsys.readouterr().out == "hello\n"
    target = tmp_path / "deep" / "out.json"
    write_output("{}", target)
    assert target.read_text() == "{}\n"
    assert capsys.readouterr().out == ""
