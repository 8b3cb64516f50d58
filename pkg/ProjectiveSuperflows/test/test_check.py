from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from pytest import mark, raises, skip

from .. import Check, CheckResult
from ..catalog import build_superflow
from ..check import get_check
from ..check.abstract import CheckSuite, EqualityCheck
from ..check.exact import ClassificationDimensions, GroupOrders, OrbitEquation, SymmetricExtension
from ..check.numeric import (START_RADIUS, CircleImages, Conservation, CurveResiduals, SingularCase,
                             TranslationEquation, start_point)
from ..consts import SuperflowName
from ..util import seeded_rng
from . import check_name

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Sequence, Tuple

assert check_name  # just need to access so mypy doesn't complain


def test_import_check(check_name: str) -> None:
    """Make sure this function can import any registered check."""
    assert issubclass(get_check(check_name), Check)


def test_import_check_failure() -> None:
    """Make sure this function can't import arbitrary objects."""
    for name in ["time.sleep", "random.Random"]:
        with raises(Exception):
            get_check(name)
    for name in ["abstract.SENTINEL_STUB", "abstract.get_check"]:
        with raises(NameError):
            get_check(name)


@mark.depends(on=('test_import_check', ))
def test_check_from_dict(check_name: str) -> None:
    """Make sure that if `__init__` doesn't require arguments, `from_dict()` also does not."""
    CheckSubclass = get_check(check_name)
    try:
        CheckSubclass()
    except Exception:
        skip("Cannot instantiate with default arguments, may be tested elsewhere")
    check = CheckSubclass.from_dict({})
    assert check.name == check_name
    assert check.explain().startswith("- ")


def test_explainer_is_required() -> None:
    with raises(ValueError):
        class Unexplained(EqualityCheck):
            def _pairs(self) -> Sequence[Tuple[str, Any, Any]]:
                return []


def test_group_orders() -> None:
    result = GroupOrders({"cyclic:3": 3, "dihedral:2": 4}).run()
    assert result.passed
    assert len(result.children) == 4
    assert result.seconds >= 0
    wrong = GroupOrders.from_dict({"orders": {"cyclic:3": 4}}).run()
    assert not wrong.passed
    assert [f.name for f in wrong.failures()] == ["exact.GroupOrders[cyclic:3]"]


def test_domain_errors_become_failures() -> None:
    result = GroupOrders({"nonsense": 1}).run()
    assert not result.passed
    assert result.got.startswith("ValueError")
    assert result.failures() == (result, )


def test_suite() -> None:
    suite = CheckSuite.from_dict({"checks": [
        ["exact.OrbitEquation", {}],
        ["exact.GroupOrders", {"orders": {"mixed-dihedral:3": 12}}],
    ]})
    assert isinstance(suite.checks[0], OrbitEquation)
    result = suite.run()
    assert result.name == "suite"
    assert result.passed
    assert result.got == []
    assert [c.name for c in result.children] == ["exact.OrbitEquation", "exact.GroupOrders"]
    assert result.to_json()["pass"] is True

    failing = CheckSuite.from_names(["exact.GroupOrders"], {"exact.GroupOrders": {"orders": {"cyclic:2": 3}}})
    result = failing.run()
    assert not result.passed
    assert result.got == ["exact.GroupOrders"]


def test_suite_explanation() -> None:
    text = CheckSuite.from_names(["exact.Solenoidal", "numeric.FixedPoints"]).explain()
    lines = text.splitlines()
    assert lines[0] == "- Pass if every check below passes"
    assert len(lines) == 3
    assert all(line.startswith("  - ") for line in lines[1:])


def test_check_result_json() -> None:
    leaf = CheckResult("leaf", 1, 2, False)
    parent = CheckResult("parent", [], ["leaf"], False, children=[leaf])
    assert parent.to_json() == {
        "name": "parent", "expected": [], "got": ["leaf"], "pass": False,
        "children": [{"name": "leaf", "expected": 1, "got": 2, "pass": False}],
    }
    assert parent.failures() == (leaf, )
    assert CheckResult("x", 0, 0, True, seconds=5.0) == CheckResult("x", 0, 0, True)


def test_start_point_is_bounded() -> None:
    """Starts clear the denominator floor, and an unreachable floor fails after a bounded number of draws."""
    s = build_superflow(SuperflowName.ICOSAHEDRAL)
    u = start_point(s, seeded_rng("start-point"))
    assert abs(np.linalg.norm(u) - (1.0 if s.spherical else START_RADIUS)) < 1e-12
    with raises(RuntimeError):
        start_point(s, seeded_rng("start-point"), floor=1e6, max_draws=5)


@mark.slow
def test_conservation() -> None:
    """Every first integral of every superflow is conserved to 1e-9 over t in [0, 1]."""
    check = Conservation()
    assert (check.t_end, check.bound) == (1.0, 1e-9)
    result = check.run()
    assert result.passed, result.failures()


@mark.slow
def test_translation_equation() -> None:
    """Twenty random cases per superflow satisfy the translation equation to 1e-7."""
    check = TranslationEquation()
    assert (check.cases, check.bound) == (20, 1e-7)
    result = check.run()
    assert result.passed, result.failures()


def test_singular_case() -> None:
    assert SingularCase().run().passed


@mark.slow
def test_curve_residuals() -> None:
    assert CurveResiduals().run().passed


def test_circle_images() -> None:
    assert CircleImages().run().passed


@mark.slow
def test_classification_dimensions() -> None:
    result = ClassificationDimensions().run()
    assert result.passed, result.failures()


@mark.slow
def test_symmetric_extension() -> None:
    assert SymmetricExtension().run().passed
