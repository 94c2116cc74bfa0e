from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

Row = Tuple[int, ...]


def _check_int(value) -> int:
    # bool is an int subclass but never a matrix entry
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"matrix entries must be integers, got {value!r}")
    return value


@dataclass(frozen=True)
class IntMatrix:
    """Exact integer matrix stored row-major."""
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("IntMatrix needs at least one row and one column")
        object.__setattr__(self, 'entries', tuple(_check_int(x) for x in self.entries))
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [tuple(row) for row in rows]
        if not rows or not rows[0]:
            raise ValueError("IntMatrix needs at least one row and one column")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("ragged matrix rows")
        return cls(len(rows), width, tuple(x for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, m: int) -> "IntMatrix":
        return cls.diagonal([m] * n)

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def block_diagonal(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        size = sum(block.rows for block in blocks)
        rows = [[0] * size for _ in range(size)]
        offset = 0
        for block in blocks:
            if not block.is_square:
                raise ValueError("block_diagonal expects square blocks")
            for i, row in enumerate(block.to_rows()):
                rows[offset + i][offset:offset + block.cols] = row
            offset += block.rows
        return cls.from_rows(rows)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Row:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def iter_rows(self) -> Iterator[Row]:
        for i in range(self.rows):
            yield self.row(i)

    def to_rows(self) -> list[list[int]]:
        return [list(row) for row in self.iter_rows()]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows([[self[i, j] for i in range(self.rows)] for j in range(self.cols)])

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = list(other.transpose().iter_rows())
        return IntMatrix.from_rows([
            [sum(a * b for a, b in zip(row, column)) for column in columns]
            for row in self.iter_rows()
        ])

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, row)) + "]" for row in self.iter_rows()) + "]"


@dataclass(frozen=True)
class Lattice:
    """Lattice (1/denominator) * span_Z(rows) inside Q^ambient_rank.

    Build through `intlinalg.lattice_from_generators` so that `rows` is in
    Hermite normal form and equal lattices compare equal.
    """
    ambient_rank: int
    rows: Tuple[Row, ...] = ()
    denominator: int = 1

    def __post_init__(self):
        if self.ambient_rank < 1:
            raise ValueError("ambient_rank must be positive")
        if self.denominator < 1:
            raise ValueError("denominator must be a positive integer")
        rows = tuple(tuple(_check_int(x) for x in row) for row in self.rows)
        if any(len(row) != self.ambient_rank for row in rows):
            raise ValueError(f"lattice rows must have length {self.ambient_rank}")
        if len(rows) > self.ambient_rank:
            raise ValueError("lattice rank exceeds ambient rank")
        object.__setattr__(self, 'rows', rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def is_integral(self) -> bool:
        return self.denominator == 1

    def __str__(self) -> str:
        if not self.rows:
            return "0"
        body = ", ".join("(" + ", ".join(map(str, row)) + ")" for row in self.rows)
        if self.denominator == 1:
            return f"span{{{body}}}"
        return f"1/{self.denominator} * span{{{body}}}"


@dataclass(frozen=True)
class SnfResult:
    """U * M * V = S with U, V unimodular."""
    left_transform: IntMatrix
    diagonal: IntMatrix
    right_transform: IntMatrix
    invariant_factors: Tuple[int, ...]
