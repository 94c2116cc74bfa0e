"""Rank and orbit bounds for abelian p-groups acting on smooth projective varieties.

The common source is the fixed-point method: Chern numbers are represented by
G-invariant 0-cycles, so the smallest orbit size p^c divides them, while the
Todd class denominator limits how much of that divisibility chi(X, O_X) can
absorb.
"""
from collections import deque
from fractions import Fraction
from functools import lru_cache
from math import floor, lcm
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import sympy as sp
from sympy import QQ_I, isprime
from sympy.combinatorics import Permutation
from sympy.polys.domains.gaussiandomains import GaussianRational
from sympy.polys.polyfuncs import symmetrize

from edcert.errors import ChiOutOfRange, DegreeTooSmall, InvalidArgument, InvalidDimension, NotPrime, ZeroChi
from edcert.models.group_action import ActionQuery, RankBoundResult, SurfaceChern
from edcert.services.fingroup import nu_p

CY_CHI_VALUES = (-2, -1, 1, 2)

ProjectivePoint = Tuple[Optional[GaussianRational], ...]


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise NotPrime(f"{p!r} is not a prime")


def _require_dimension(n: int, minimum: int = 0) -> None:
    if n < minimum:
        raise InvalidDimension(f"dimension must be >= {minimum}, got {n}")


def todd_denominator_exponent(n: int, p: int) -> int:
    """p-adic valuation of the denominator of the degree-n Todd class."""
    _require_dimension(n)
    _require_prime(p)
    return n // (p - 1)


def orbit_index_bound(query: ActionQuery) -> Tuple[Fraction, int]:
    """log_p[G:H] <= nu_p(chi) + n/(p-1) for some H with a fixed point."""
    chi = query.require_chi()
    raw = nu_p(chi, query.p) + Fraction(query.n, query.p - 1)
    return raw, floor(raw)


def abelian_rank_bound(query: ActionQuery) -> RankBoundResult:
    """rank(G) <= nu_p(chi) + p/(p-1) * n, with G = G1 x G2 split caps."""
    chi = query.require_chi()
    valuation = nu_p(chi, query.p)
    raw = valuation + Fraction(query.p * query.n, query.p - 1)
    decomposition = (
        query.n + valuation,
        query.p ** todd_denominator_exponent(query.n, query.p),
    )
    return RankBoundResult(raw, floor(raw), decomposition)


def rc_rank_bound(n: int, p: int) -> int:
    """Rationally connected X has chi = 1: rank(G) <= p/(p-1) * n <= 2n."""
    _require_dimension(n)
    _require_prime(p)
    return (p * n) // (p - 1)


def sym_alt_degree_bounds(n: int) -> Tuple[int, int]:
    """Largest m with S_m (resp. A_m) acting faithfully on a rationally connected n-fold."""
    _require_dimension(n, 1)
    return 4 * n + 1, 4 * n + 3


def elementary_two_witness(m: int, alternating: bool = False) -> int:
    """Rank of the disjoint-transposition elementary abelian 2-subgroup of S_m (or its even part in A_m)."""
    if alternating:
        if m < 4:
            raise DegreeTooSmall(f"A_{m}: need m >= 4")
        return m // 2 - 1
    if m < 2:
        raise DegreeTooSmall(f"S_{m}: need m >= 2")
    return m // 2


def elementary_two_generators(m: int, alternating: bool = False) -> List[Permutation]:
    """Explicit generators of the witness subgroup on the points 0..m-1."""
    rank = elementary_two_witness(m, alternating)
    transpositions = [Permutation([[2 * k, 2 * k + 1]], size=m) for k in range(m // 2)]
    if not alternating:
        return transpositions
    # even part: products of neighbouring disjoint transpositions
    generators = [transpositions[k] * transpositions[k + 1] for k in range(len(transpositions) - 1)]
    assert len(generators) == rank
    return generators


def local_ring_bounds(n: int, p: int) -> Tuple[int, int]:
    """(index exponent cap, rank cap) for an abelian p-group acting on a rational singularity of dim n."""
    _require_dimension(n, 1)
    _require_prime(p)
    index_cap = (n - 1) // (p - 1)
    return index_cap, n + index_cap


def cy_rank_bound(n: int, p: int, chi: int) -> int:
    """rank(G) when chi(X, O_X) is ±1 or ±2."""
    _require_dimension(n)
    _require_prime(p)
    if chi == 0:
        raise ZeroChi("chi(X, O_X) = 0: the fixed-point method gives no bound")
    if chi not in CY_CHI_VALUES:
        raise ChiOutOfRange(f"chi must be one of {CY_CHI_VALUES}, got {chi}")
    if p == 2:
        return 2 * n + 1
    return (p * n) // (p - 1)


def product_surface_chern(e1: int, e2: int) -> SurfaceChern:
    """Product of two curves with topological Euler numbers e1, e2."""
    return SurfaceChern(c1_sq=2 * e1 * e2, c2=e1 * e2)


def blowup_chern(base: SurfaceChern, r: int) -> SurfaceChern:
    """Blow up r points."""
    if r < 0:
        raise InvalidArgument(f"cannot blow up {r} points")
    return SurfaceChern(c1_sq=base.c1_sq - r, c2=base.c2 + r)


def chern_divisibility_test(chern_number: int, p: int, c: int) -> bool:
    """Whether p^c divides the Chern number, as G-invariant 0-cycles with orbits >= p^c force."""
    _require_prime(p)
    if c < 0:
        raise InvalidArgument(f"orbit exponent must be >= 0, got {c}")
    return chern_number % p ** c == 0


@lru_cache(maxsize=None)
def todd_polynomial(n: int) -> sp.Expr:
    """Degree-n Todd polynomial in the Chern classes c1, ..., cn."""
    _require_dimension(n)
    if n == 0:
        return sp.Integer(1)
    t = sp.Symbol('t')
    series = sp.series(t / (1 - sp.exp(-t)), t, 0, n + 1).removeO()
    roots = sp.symbols(f'x1:{n + 1}')
    product = sp.Integer(1)
    for x in roots:
        product = sp.expand(product * series.subs(t, x))
    poly = sp.Poly(product, *roots)
    homogeneous = sp.Add(*[
        coefficient * sp.Mul(*[x ** e for x, e in zip(roots, monomial)])
        for monomial, coefficient in poly.terms()
        if sum(monomial) == n
    ])
    symmetric, remainder, definitions = symmetrize(homogeneous, *roots, formal=True)
    if remainder != 0:
        raise ArithmeticError("Todd polynomial is not symmetric")
    chern = sp.symbols(f'c1:{n + 1}')
    substitution = {
        symbol: chern[sp.Poly(elementary, *roots).total_degree() - 1]
        for symbol, elementary in definitions
    }
    return sp.expand(symmetric.subs(substitution))


def todd_denominator(n: int) -> int:
    """Common denominator of the coefficients of todd_polynomial(n)."""
    polynomial = todd_polynomial(n)
    if n == 0:
        return 1
    coefficients = sp.Poly(polynomial, *sp.symbols(f'c1:{n + 1}')).coeffs()
    return lcm(*(int(sp.Rational(c).q) for c in coefficients))


def fermat_power_witness(p: int, k: int = 1) -> Tuple[int, int]:
    """(dimension, rank) of (Z/p)^{kp} acting on the k-th power of the degree-p Fermat hypersurface in P^p.

    On one copy, (Z/p)^{p+1} scales the p+1 coordinates and the diagonal acts
    trivially, leaving (Z/p)^p on a hypersurface of dimension p - 1.
    """
    _require_prime(p)
    if k < 1:
        raise InvalidArgument(f"power must be >= 1, got {k}")
    coordinates = p + 1
    return k * (coordinates - 2), k * (coordinates - 1)


def dihedral_product_witness(n: int) -> int:
    """Rank of (Z/2)^{2n} = (D_4)^n acting coordinatewise on (P^1)^n."""
    _require_dimension(n)
    return 2 * n


_ROOTS_OF_UNITY = {1: QQ_I(1, 0), 2: QQ_I(-1, 0), 4: QQ_I(0, 1)}

CoordinateLike = Union[None, int, Tuple[int, int], GaussianRational]


def _to_gaussian(value: CoordinateLike) -> Optional[GaussianRational]:
    if value is None or isinstance(value, GaussianRational):
        return value
    if isinstance(value, tuple):
        return QQ_I(*value)
    return QQ_I(value, 0)


def _rotate(x: Optional[GaussianRational], epsilon: GaussianRational) -> Optional[GaussianRational]:
    return None if x is None else epsilon * x


def _invert(x: Optional[GaussianRational]) -> Optional[GaussianRational]:
    if x is None:
        return QQ_I.zero
    if not x:
        return None
    return QQ_I.one / x


def dihedral_orbit(point: Sequence[CoordinateLike], m: int = 2, swap: bool = False) -> FrozenSet[ProjectivePoint]:
    """Orbit of a point of (P^1)^n under D_{2m}^n, plus coordinate permutations when `swap`.

    D_{2m} acts on P^1 by x -> eps * x and x -> 1/x; None stands for infinity.
    Only m in {1, 2, 4} are supported (roots of unity in Q(i)).
    """
    if m not in _ROOTS_OF_UNITY:
        raise InvalidArgument(f"m must be one of {sorted(_ROOTS_OF_UNITY)}, got {m}")
    epsilon = _ROOTS_OF_UNITY[m]
    start: ProjectivePoint = tuple(_to_gaussian(x) for x in point)
    n = len(start)

    def neighbours(current: ProjectivePoint) -> Iterable[ProjectivePoint]:
        for k in range(n):
            yield current[:k] + (_rotate(current[k], epsilon),) + current[k + 1:]
            yield current[:k] + (_invert(current[k]),) + current[k + 1:]
        if swap:
            for k in range(n - 1):
                yield current[:k] + (current[k + 1], current[k]) + current[k + 2:]

    seen = {start}
    queue = deque([start])
    while queue:
        for image in neighbours(queue.popleft()):
            if image not in seen:
                seen.add(image)
                queue.append(image)
    return frozenset(seen)


def orbit_partition(
    points: Iterable[Sequence[CoordinateLike]], m: int = 2, swap: bool = False
) -> List[FrozenSet[ProjectivePoint]]:
    """Distinct orbits met by `points`, in order of first appearance."""
    orbits: List[FrozenSet[ProjectivePoint]] = []
    for point in points:
        key = tuple(_to_gaussian(x) for x in point)
        if any(key in orbit for orbit in orbits):
            continue
        orbits.append(dihedral_orbit(key, m, swap))
    return orbits
