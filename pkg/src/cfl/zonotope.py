"""Cyclic vector configurations over the integers and points of Z(n, d)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .errors import NotIncreasing, PreconditionViolated

Vector = tuple[int, ...]


def det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def column_det(columns: Sequence[Vector]) -> int:
    """Determinant of the square matrix with the given columns."""
    return det(list(zip(*columns))) if columns else 1


def normal(columns: Sequence[Vector], dim: int) -> Vector:
    """Integer vector h with h.x = det[columns | x] for every x (generalized cross product).

    ``columns`` holds dim-1 vectors of length ``dim``.
    """
    if len(columns) != dim - 1:
        raise ValueError("need dim-1 columns")
    h = []
    for r in range(dim):
        minor = [[c[k] for c in columns] for k in range(dim) if k != r]
        h.append((-1) ** (r + dim - 1) * det(minor))
    return tuple(h)


def dot(a: Vector, b: Vector) -> int:
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class CyclicConfiguration:
    """Integer vectors xi_1..xi_n in dimension d; ``t`` is set when Veronese-generated."""

    vectors: tuple[Vector, ...]
    d: int
    t: tuple[int, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.vectors)

    def xi(self, color: int) -> Vector:
        """Vector of a 1-based color."""
        return self.vectors[color - 1]

    def project(self) -> CyclicConfiguration:
        """Drop the last coordinate."""
        if self.d < 2:
            raise PreconditionViolated("cannot project a 1-dimensional configuration")
        return CyclicConfiguration(tuple(v[:-1] for v in self.vectors), self.d - 1, self.t)

    def lift(self) -> CyclicConfiguration:
        """Veronese configuration on the same parameters, one dimension up."""
        if self.t is None:
            raise PreconditionViolated("lifting needs Veronese parameters")
        # fewer vectors than the dimension is fine here: only their minors are used
        d = self.d + 1
        return CyclicConfiguration(tuple(tuple(x**k for k in range(d)) for x in self.t), d, self.t)

    def delete(self, color: int) -> CyclicConfiguration:
        vectors = self.vectors[: color - 1] + self.vectors[color:]
        t = None if self.t is None else self.t[: color - 1] + self.t[color:]
        return CyclicConfiguration(vectors, self.d, t)

    def restrict(self, colors: Sequence[int]) -> CyclicConfiguration:
        cs = sorted(colors)
        t = None if self.t is None else tuple(self.t[c - 1] for c in cs)
        return CyclicConfiguration(tuple(self.xi(c) for c in cs), self.d, t)

    @cached_property
    def _sign_cache(self) -> dict:
        return {}

    def orientation(self, colors: Sequence[int]) -> int:
        """Sign of det[xi_c for c in colors] (columns in the given order)."""
        key = tuple(colors)
        cache = self._sign_cache
        if key not in cache:
            value = column_det([self.xi(c) for c in key])
            cache[key] = (value > 0) - (value < 0)
        return cache[key]

    def normal_of(self, colors: Sequence[int]) -> Vector:
        """Normal to the span of d-1 colors, oriented so its last entry is positive."""
        key = ("n",) + tuple(colors)
        cache = self._sign_cache
        if key not in cache:
            cache[key] = normal([self.xi(c) for c in colors], self.d)
        return cache[key]


def veronese_configuration(t: Sequence[int], d: int) -> CyclicConfiguration:
    """xi_i = (1, t_i, t_i^2, ..., t_i^(d-1))."""
    t = tuple(int(x) for x in t)
    if any(a >= b for a, b in zip(t, t[1:])):
        raise NotIncreasing(f"parameters {t} are not strictly increasing")
    if d < 1 or len(t) < d:
        raise PreconditionViolated(f"need n >= d >= 1, got n={len(t)}, d={d}")
    return CyclicConfiguration(tuple(tuple(x**k for k in range(d)) for x in t), d, t)


def flag_minors(config: CyclicConfiguration):
    """Yield (columns, minor) for every flag minor (top k rows, k increasing columns)."""
    for k in range(1, config.d + 1):
        for cols in combinations(range(config.n), k):
            yield cols, det([[config.vectors[c][r] for c in cols] for r in range(k)])


def check_cyclic(config: CyclicConfiguration) -> bool:
    if any(v[0] != 1 for v in config.vectors):
        return False
    return all(m > 0 for _, m in flag_minors(config))


def subset_point(config: CyclicConfiguration, colors) -> Vector:
    """Sum of xi_i over a color set (1-based colors)."""
    out = [0] * config.d
    for c in colors:
        for k, x in enumerate(config.xi(c)):
            out[k] += x
    return tuple(out)


def combinations_distinct(config: CyclicConfiguration) -> bool:
    """Whether all 0/1-combinations of the vectors are pairwise different."""
    seen = set()
    n = config.n
    for mask in range(1 << n):
        p = subset_point(config, [i + 1 for i in range(n) if mask >> i & 1])
        if p in seen:
            return False
        seen.add(p)
    return True


def default_configuration(n: int, d: int, t: Sequence[int] | None = None) -> CyclicConfiguration:
    """Veronese configuration with t_i = i-1 unless given; respaced to t_i = 2^i on collisions."""
    config = veronese_configuration(t if t is not None else range(n), d)
    if n <= 12 and not combinations_distinct(config):
        config = veronese_configuration([2**i for i in range(n)], d)
    return config
