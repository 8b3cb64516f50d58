"""Exact square matrices, and exact kernels through sympy's DomainMatrix."""

from __future__ import annotations

from typing import TYPE_CHECKING, Tuple

import numpy as np
from attrs import field, frozen
from sympy.polys.matrices import DomainMatrix

from .field import GoldenNumber, as_scalar, common_order, from_domain, scalar_domain, to_domain, unify

if TYPE_CHECKING:  # pragma: no cover
    from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

    from numpy.typing import NDArray

    from .field import Scalar


class SingularMatrixError(ZeroDivisionError):
    """Raised when inverting a matrix with zero determinant."""


def _to_rows(rows: Iterable[Iterable[Any]]) -> Tuple[Tuple[Scalar, ...], ...]:
    grid = [list(row) for row in rows]
    n = len(grid)
    if any(len(row) != n for row in grid):
        raise ValueError("ExactMatrix must be square")
    flat = unify([v for row in grid for v in row])
    return tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))


@frozen(cache_hash=True)
class ExactMatrix:
    """A square matrix of exact scalars, all in one carrier (golden when possible)."""

    rows: Tuple[Tuple[Scalar, ...], ...] = field(converter=_to_rows)

    # constructors

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[Any]) -> ExactMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, perm: Sequence[int], signs: Optional[Sequence[int]] = None) -> ExactMatrix:
        """The matrix sending e_j to signs[j]·e_perm[j]."""
        n = len(perm)
        signs = signs or [1] * n
        grid = [[0] * n for _ in range(n)]
        for j, i in enumerate(perm):
            grid[i][j] = signs[j]
        return cls(grid)

    @classmethod
    def block_diagonal(cls, *blocks: ExactMatrix) -> ExactMatrix:
        n = sum(b.n for b in blocks)
        grid: List[List[Any]] = [[0] * n for _ in range(n)]
        offset = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                for j, v in enumerate(row):
                    grid[offset + i][offset + j] = v
            offset += b.n
        return cls(grid)

    # structure

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(row[j] for row in self.rows)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix([self.column(j) for j in range(self.n)])

    def conjugate_transpose(self) -> ExactMatrix:
        return ExactMatrix([[v.complex_conjugate() for v in self.column(j)] for j in range(self.n)])

    def is_identity(self) -> bool:
        return all(v == int(i == j) for i, row in enumerate(self.rows) for j, v in enumerate(row))

    def is_orthogonal(self) -> bool:
        """MᵀM = I exactly."""
        return (self.transpose() @ self).is_identity()

    def is_unitary(self) -> bool:
        return (self.conjugate_transpose() @ self).is_identity()

    def is_real(self) -> bool:
        return all(isinstance(v, GoldenNumber) for row in self.rows for v in row)

    # arithmetic

    def __matmul__(self, other: Any) -> Any:
        if isinstance(other, ExactMatrix):
            if other.n != self.n:
                raise ValueError(f"Shape mismatch: {self.n} vs {other.n}")
            cols = [other.column(j) for j in range(other.n)]
            return ExactMatrix([[_dot(row, col) for col in cols] for row in self.rows])
        vector = [as_scalar(v) for v in other]
        if len(vector) != self.n:
            raise ValueError(f"Shape mismatch: {self.n} vs {len(vector)}")
        return tuple(_dot(row, vector) for row in self.rows)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix([[-v for v in row] for row in self.rows])

    def scale(self, value: Any) -> ExactMatrix:
        c = as_scalar(value)
        return ExactMatrix([[v * c for v in row] for row in self.rows])

    def _domain_matrix(self) -> Tuple[DomainMatrix, Optional[int]]:
        order = common_order(v for row in self.rows for v in row)
        grid = [[to_domain(v, order) for v in row] for row in self.rows]
        return DomainMatrix(grid, (self.n, self.n), scalar_domain(order)), order

    def determinant(self) -> Scalar:
        matrix, order = self._domain_matrix()
        return from_domain(matrix.det(), order)

    def inverse(self) -> ExactMatrix:
        """Exact inverse; raises SingularMatrixError if the matrix is singular."""
        matrix, order = self._domain_matrix()
        if not matrix.det():
            raise SingularMatrixError(f"{self} is singular")
        return ExactMatrix([[from_domain(v, order) for v in row] for row in matrix.inv().to_list()])

    def to_numpy(self) -> NDArray[Any]:
        if self.is_real():
            return np.array([[float(v) for v in row] for row in self.rows])
        return np.array([[complex(v) for v in row] for row in self.rows])

    def to_json(self) -> List[List[Any]]:
        """Row-major coefficient encodings."""
        return [[v.to_json() for v in row] for row in self.rows]

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(v) for v in row) for row in self.rows) + "]"


def _dot(row: Sequence[Scalar], col: Sequence[Scalar]) -> Scalar:
    total: Scalar = GoldenNumber(0)
    for a, b in zip(row, col):
        if a and b:
            total = total + a * b
    return total


def nullspace(rows: Iterable[Mapping[int, Scalar]], ncols: int) -> List[Dict[int, Scalar]]:
    """Return a basis of {v : row·v = 0 for every row}, each vector as a sparse column -> value map.

    Rows are sparse maps from column index to coefficient. Each basis vector has a one at its free column, the
    last nonzero entry, and the pivot columns solved for.
    """
    grid = [{c: v for c, v in raw.items() if v} for raw in rows]
    grid = [row for row in grid if row]
    if not grid:
        return [{free: GoldenNumber(1)} for free in range(ncols)]
    order = common_order(v for row in grid for v in row.values())
    domain = scalar_domain(order)
    matrix = DomainMatrix(
        {i: {c: to_domain(v, order) for c, v in row.items()} for i, row in enumerate(grid)}, (len(grid), ncols), domain
    )
    basis: List[Dict[int, Scalar]] = []
    for vector in matrix.nullspace().to_list():
        last = max(j for j, v in enumerate(vector) if v)
        scale = domain.quo(domain.one, vector[last])
        basis.append({j: from_domain(v * scale, order) for j, v in enumerate(vector) if v})
    return basis
