"""Exact integer matrix and lattice algebra.

Lattices are row lattices (1/d) * span_Z(rows) in Q^n; isogeny matrices act on
column vectors, x -> M x. Everything is plain Python ints, so no entry ever
overflows.
"""
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

from edcert.errors import InfiniteQuotient, NotASublattice, SingularMatrix
from edcert.models.finite_group import FiniteAbelianGroup
from edcert.models.int_matrix import IntMatrix, Lattice, Row, SnfResult
from edcert.utils.logger import get_logger

logger = get_logger(__name__)

Rows = List[List[int]]


def _identity_rows(n: int) -> Rows:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _det_rows(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(row) for row in rows]
    sign = 1
    previous = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // previous
        previous = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(matrix: IntMatrix) -> int:
    if not matrix.is_square:
        raise ValueError(f"determinant of a non-square {matrix.rows}x{matrix.cols} matrix")
    return _det_rows(matrix.to_rows())


def adjugate(matrix: IntMatrix) -> IntMatrix:
    """adj(M) with M * adj(M) = det(M) * Id."""
    if not matrix.is_square:
        raise ValueError("adjugate of a non-square matrix")
    n = matrix.rows
    if n == 1:
        return IntMatrix.from_rows([[1]])
    a = matrix.to_rows()
    cofactor = [
        [
            (-1) ** (i + j) * _det_rows([row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i])
            for j in range(n)
        ]
        for i in range(n)
    ]
    return IntMatrix.from_rows(cofactor).transpose()


def is_unimodular(matrix: IntMatrix) -> bool:
    return matrix.is_square and abs(determinant(matrix)) == 1


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> Tuple[Row, ...]:
    """Row-style HNF of the lattice generated by `rows`.

    Pivots are positive and strictly move right; entries above a pivot lie in
    [0, pivot). Zero rows are dropped, so the result is a basis.
    """
    a = [list(row) for row in rows if any(row)]
    if not a:
        return ()
    ncols = len(a[0])
    pivot_row = 0
    for col in range(ncols):
        if pivot_row >= len(a):
            break
        if all(a[i][col] == 0 for i in range(pivot_row, len(a))):
            continue
        while True:
            best = min(
                (i for i in range(pivot_row, len(a)) if a[i][col] != 0),
                key=lambda i: abs(a[i][col]),
            )
            a[pivot_row], a[best] = a[best], a[pivot_row]
            pivot = a[pivot_row][col]
            leftover = False
            for i in range(pivot_row + 1, len(a)):
                q = a[i][col] // pivot
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[pivot_row])]
                if a[i][col]:
                    leftover = True
            if not leftover:
                break
        if a[pivot_row][col] < 0:
            a[pivot_row] = [-x for x in a[pivot_row]]
        pivot = a[pivot_row][col]
        for i in range(pivot_row):
            q = a[i][col] // pivot
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[pivot_row])]
        pivot_row += 1
    return tuple(tuple(row) for row in a[:pivot_row])


def _smith_decomposition(rows: Rows, ncols: int) -> Tuple[Rows, Rows, Rows, Rows]:
    """Return (U, S, V, V^-1) with U * A * V = S.

    Pivot rule: the nonzero entry of least absolute value in the active block.
    """
    m = len(rows)
    n = ncols
    a = [list(row) for row in rows]
    u = _identity_rows(m)
    v = _identity_rows(n)
    v_inv = _identity_rows(n)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def add_row(target: int, source: int, q: int) -> None:
        a[target] = [x + q * y for x, y in zip(a[target], a[source])]
        u[target] = [x + q * y for x, y in zip(u[target], u[source])]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]
            v_inv[i], v_inv[j] = v_inv[j], v_inv[i]

    def add_col(target: int, source: int, q: int) -> None:
        for row in a:
            row[target] += q * row[source]
        for row in v:
            row[target] += q * row[source]
        # inverse of the column operation, applied on the left of V^-1
        v_inv[source] = [x - q * y for x, y in zip(v_inv[source], v_inv[target])]

    t = 0
    while t < min(m, n):
        candidates = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not candidates:
            break
        _, i, j = min(candidates)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            pivot = a[t][t]
            for i in range(t + 1, m):
                q = a[i][t] // pivot
                if q:
                    add_row(i, t, -q)
            for j in range(t + 1, n):
                q = a[t][j] // pivot
                if q:
                    add_col(j, t, -q)
            leftovers = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            leftovers += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
            if leftovers:
                _, i, j = min(leftovers)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            blocker = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % pivot),
                None,
            )
            if blocker is None:
                break
            add_row(t, blocker[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v, v_inv


def smith_normal_form(matrix: IntMatrix) -> SnfResult:
    u, s, v, _ = _smith_decomposition(matrix.to_rows(), matrix.cols)
    factors = tuple(s[k][k] for k in range(min(matrix.rows, matrix.cols)) if s[k][k] != 0)
    return SnfResult(
        left_transform=IntMatrix.from_rows(u),
        diagonal=IntMatrix.from_rows(s),
        right_transform=IntMatrix.from_rows(v),
        invariant_factors=factors,
    )


def determinantal_divisors(matrix: IntMatrix) -> Tuple[int, ...]:
    """d_k = gcd of all k x k minors (0 if they all vanish)."""
    a = matrix.to_rows()
    divisors: List[int] = []
    for k in range(1, min(matrix.rows, matrix.cols) + 1):
        if divisors and divisors[-1] == 0:
            divisors.append(0)
            continue
        d = 0
        for row_set in combinations(range(matrix.rows), k):
            for col_set in combinations(range(matrix.cols), k):
                d = gcd(d, _det_rows([[a[r][c] for c in col_set] for r in row_set]))
                if d == 1:
                    break
            if d == 1:
                break
        divisors.append(d)
    return tuple(divisors)


def lattice_from_generators(
    ambient_rank: int,
    generators: Sequence[Sequence[int]],
    denominator: int = 1,
) -> Lattice:
    """Canonical lattice (1/denominator) * span_Z(generators)."""
    for generator in generators:
        if len(generator) != ambient_rank:
            raise ValueError(f"generator {tuple(generator)} does not live in Z^{ambient_rank}")
    if denominator < 1:
        raise ValueError("denominator must be positive")
    basis = hermite_normal_form(generators)
    if not basis:
        return Lattice(ambient_rank)
    content = denominator
    for row in basis:
        for x in row:
            content = gcd(content, x)
    if content > 1:
        basis = tuple(tuple(x // content for x in row) for row in basis)
        denominator //= content
    return Lattice(ambient_rank, basis, denominator)


def standard_lattice(n: int) -> Lattice:
    return lattice_from_generators(n, _identity_rows(n))


def zero_lattice(n: int) -> Lattice:
    return Lattice(n)


def unimodular_completion(lattice: Lattice) -> Tuple[IntMatrix, IntMatrix]:
    """(W, W^-1) unimodular whose first `rank` rows of W span the saturation of `lattice`."""
    n = lattice.ambient_rank
    if lattice.rank == 0:
        identity = IntMatrix.identity(n)
        return identity, identity
    _, _, v, v_inv = _smith_decomposition([list(row) for row in lattice.rows], n)
    return IntMatrix.from_rows(v_inv), IntMatrix.from_rows(v)


def saturate(lattice: Lattice) -> Lattice:
    """span_Q(lattice) intersected with Z^n."""
    if lattice.rank == 0:
        return lattice
    completion, _ = unimodular_completion(lattice)
    return lattice_from_generators(
        lattice.ambient_rank,
        [completion.row(i) for i in range(lattice.rank)],
    )


def is_saturated(lattice: Lattice) -> bool:
    return saturate(lattice) == lattice


def coordinates_in(lattice: Lattice, vector: Sequence[int], denominator: int = 1) -> Optional[Tuple[int, ...]]:
    """Integer x with x * basis = vector / denominator, or None when the vector is not in the lattice."""
    if len(vector) != lattice.ambient_rank:
        raise ValueError("vector and lattice live in different ambient spaces")
    residual = [Fraction(x * lattice.denominator, denominator) for x in vector]
    coordinates = []
    for row in lattice.rows:
        pivot_col = next(c for c, x in enumerate(row) if x != 0)
        coefficient = residual[pivot_col] / row[pivot_col]
        if coefficient.denominator != 1:
            return None
        coordinates.append(int(coefficient))
        residual = [r - coefficient * x for r, x in zip(residual, row)]
    if any(residual):
        return None
    return tuple(coordinates)


def contains(sup: Lattice, sub: Lattice) -> bool:
    return all(coordinates_in(sup, row, sub.denominator) is not None for row in sub.rows)


def _check_ambient(first: Lattice, second: Lattice) -> None:
    if first.ambient_rank != second.ambient_rank:
        raise ValueError(
            f"lattices live in Z^{first.ambient_rank} and Z^{second.ambient_rank}"
        )


def lattice_intersect(first: Lattice, second: Lattice) -> Lattice:
    _check_ambient(first, second)
    n = first.ambient_rank
    if first.rank == 0 or second.rank == 0:
        return zero_lattice(n)
    common = lcm(first.denominator, second.denominator)
    a = [[x * (common // first.denominator) for x in row] for row in first.rows]
    b = [[x * (common // second.denominator) for x in row] for row in second.rows]
    # integer left kernel of [A; -B] pairs the two descriptions of a common vector
    stacked = a + [[-x for x in row] for row in b]
    u, s, _, _ = _smith_decomposition(stacked, n)
    pivots = sum(1 for k in range(min(len(stacked), n)) if s[k][k] != 0)
    generators = []
    for kernel_row in u[pivots:]:
        coefficients = kernel_row[:len(a)]
        generators.append([sum(c * row[j] for c, row in zip(coefficients, a)) for j in range(n)])
    return lattice_from_generators(n, generators, common)


def span_intersect(lattice: Lattice, saturated: Lattice) -> Lattice:
    """lattice ∩ span_Q(saturated) for an integral saturated lattice."""
    _check_ambient(lattice, saturated)
    if not saturated.is_integral:
        raise ValueError("span_intersect expects an integral saturated lattice")
    scaled = lattice_from_generators(lattice.ambient_rank, lattice.rows)
    # D * lattice is integral, and span_Q(S) ∩ Z^n = S
    meet = lattice_intersect(scaled, saturated)
    return lattice_from_generators(lattice.ambient_rank, meet.rows, meet.denominator * lattice.denominator)


def lattice_quotient(sup: Lattice, sub: Lattice) -> FiniteAbelianGroup:
    _check_ambient(sup, sub)
    change_of_basis = []
    for row in sub.rows:
        coordinates = coordinates_in(sup, row, sub.denominator)
        if coordinates is None:
            raise NotASublattice(f"{sub} is not contained in {sup}")
        change_of_basis.append(list(coordinates))
    if sub.rank != sup.rank:
        raise InfiniteQuotient(f"rank {sup.rank} lattice modulo rank {sub.rank} sublattice is infinite")
    if sup.rank == 0:
        return FiniteAbelianGroup()
    snf = smith_normal_form(IntMatrix.from_rows(change_of_basis))
    return FiniteAbelianGroup(tuple(s for s in snf.invariant_factors if s > 1))


def image_lattice(matrix: IntMatrix, source: Lattice) -> Lattice:
    """M(source) for column action x -> M x."""
    if not matrix.is_square or matrix.rows != source.ambient_rank:
        raise ValueError("matrix and lattice dimensions disagree")
    generators = [
        [sum(matrix[i, j] * row[j] for j in range(matrix.cols)) for i in range(matrix.rows)]
        for row in source.rows
    ]
    return lattice_from_generators(source.ambient_rank, generators, source.denominator)


def preimage_lattice(matrix: IntMatrix, target: Lattice) -> Lattice:
    """{x in Q^n : M x in target}, i.e. adj(M) * target / det(M)."""
    if not matrix.is_square or matrix.rows != target.ambient_rank:
        raise ValueError("matrix and lattice dimensions disagree")
    det = determinant(matrix)
    if det == 0:
        raise SingularMatrix(f"matrix {matrix} is singular")
    adj = adjugate(matrix)
    sign = 1 if det > 0 else -1
    generators = [
        [sign * sum(adj[i, j] * row[j] for j in range(adj.cols)) for i in range(adj.rows)]
        for row in target.rows
    ]
    logger.debug(f"Preimage of {target} under a determinant-{det} matrix")
    return lattice_from_generators(target.ambient_rank, generators, abs(det) * target.denominator)
