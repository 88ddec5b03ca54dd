"""Labeled seeds, extended exchange matrices, and mutation."""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import MultiPoly, VarRegistry

Matrix = tuple[tuple[int, ...], ...]


class NotSkewSymmetrizableError(ValueError):
    pass


class NotAcyclicError(ValueError):
    pass


def _as_rows(entries: Sequence[Sequence[int]]) -> Matrix:
    rows = tuple(tuple(int(x) for x in row) for row in entries)
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("ragged matrix")
    return rows


@dataclass(frozen=True)
class SkewSymmetrizer:
    d: tuple[int, ...]

    def certifies(self, entries: Sequence[Sequence[int]]) -> bool:
        n = len(self.d)
        return all(
            self.d[i] * entries[i][j] == -self.d[j] * entries[j][i] for i in range(n) for j in range(n)
        )


def find_skew_symmetrizer(M: "ExtendedExchangeMatrix | Sequence[Sequence[int]]") -> SkewSymmetrizer | None:
    """Minimal positive symmetrizer of the top square block, or ``None``.

    Ratios d_j/d_i = -b_ij/b_ji are propagated over each connected component
    of the nonzero pattern; each component is scaled to coprime integers.
    """
    rows = M.entries if isinstance(M, ExtendedExchangeMatrix) else _as_rows(M)
    n = len(rows[0]) if rows else 0
    if len(rows) < n:
        return None
    B = rows[:n]
    for i in range(n):
        if B[i][i] != 0:
            return None
        for j in range(i + 1, n):
            a, b = B[i][j], B[j][i]
            if (a == 0) != (b == 0) or a * b > 0:
                return None

    ratio: list[Fraction | None] = [None] * n
    components: list[list[int]] = []
    for start in range(n):
        if ratio[start] is not None:
            continue
        ratio[start] = Fraction(1)
        comp = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if B[i][j] == 0:
                    continue
                want = ratio[i] * Fraction(-B[i][j], B[j][i])
                if ratio[j] is None:
                    ratio[j] = want
                    comp.append(j)
                    queue.append(j)
                elif ratio[j] != want:
                    return None
        components.append(comp)

    d = [0] * n
    for comp in components:
        denom = math.lcm(*(ratio[i].denominator for i in comp))
        ints = [int(ratio[i] * denom) for i in comp]
        g = math.gcd(*ints)
        for i, v in zip(comp, ints):
            d[i] = v // g
    return SkewSymmetrizer(tuple(d))


@dataclass(frozen=True)
class ExtendedExchangeMatrix:
    """An m x n integer matrix whose top n x n block is skew-symmetrizable."""

    entries: Matrix

    def __post_init__(self) -> None:
        rows = _as_rows(self.entries)
        object.__setattr__(self, "entries", rows)
        if not rows:
            raise ValueError("empty matrix")
        if len(rows) < len(rows[0]):
            raise ValueError("need at least as many rows as columns")
        if find_skew_symmetrizer(rows) is None:
            raise NotSkewSymmetrizableError(f"top block of {rows} is not skew-symmetrizable")

    @classmethod
    def of(cls, entries: Sequence[Sequence[int]]) -> "ExtendedExchangeMatrix":
        return cls(_as_rows(entries))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @property
    def principal_part(self) -> Matrix:
        return self.entries[: self.n]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def column(self, k: int) -> tuple[int, ...]:
        return tuple(row[k] for row in self.entries)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def mutate_matrix(M: ExtendedExchangeMatrix, k: int) -> ExtendedExchangeMatrix:
    """Matrix mutation in direction ``k`` (1-based), applied to all m x n entries."""
    if not 1 <= k <= M.n:
        raise IndexError(f"direction {k} outside 1..{M.n}")
    k -= 1
    b = M.entries
    out = []
    for i in range(M.m):
        row = []
        for j in range(M.n):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                row.append(b[i][j] + _sgn(b[i][k]) * max(b[i][k] * b[k][j], 0))
        out.append(tuple(row))
    return ExtendedExchangeMatrix(tuple(out))


def is_acyclic(M: "ExtendedExchangeMatrix | Sequence[Sequence[int]]") -> bool:
    """No directed cycle in the digraph with an edge i -> j whenever b_ij > 0."""
    rows = M.entries if isinstance(M, ExtendedExchangeMatrix) else _as_rows(M)
    n = len(rows[0]) if rows else 0
    indeg = [sum(1 for i in range(n) if rows[i][j] > 0) for j in range(n)]
    ready = [j for j in range(n) if indeg[j] == 0]
    seen = 0
    while ready:
        i = ready.pop()
        seen += 1
        for j in range(n):
            if rows[i][j] > 0:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
    return seen == n


# ---------------------------------------------------------------------------
# Labeled seeds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabeledSeed:
    matrix: ExtendedExchangeMatrix
    vars: tuple[str, ...]
    invertible: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "invertible", tuple(bool(f) for f in self.invertible))
        if len(self.vars) != self.matrix.m:
            raise ValueError(f"{len(self.vars)} variables for a matrix with {self.matrix.m} rows")
        if len(self.invertible) != self.matrix.m:
            raise ValueError("one invertibility flag per variable is required")
        if any(self.invertible[: self.matrix.n]):
            raise ValueError("mutable variables cannot be invertible")
        VarRegistry(self.vars, self.invertible)  # validates names

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def m(self) -> int:
        return self.matrix.m

    @property
    def mutable(self) -> tuple[str, ...]:
        return self.vars[: self.n]

    @property
    def frozen(self) -> tuple[str, ...]:
        return self.vars[self.n :]

    @property
    def registry(self) -> VarRegistry:
        return VarRegistry(self.vars, self.invertible)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "entries": self.matrix.as_lists(),
            "vars": list(self.vars),
            "invertible": list(self.invertible),
        }

    @classmethod
    def from_json(cls, data: "dict | str") -> "LabeledSeed":
        if isinstance(data, str):
            data = json.loads(data)
        M = ExtendedExchangeMatrix.of(data["entries"])
        if (M.m, M.n) != (data["m"], data["n"]):
            raise ValueError("declared shape does not match entries")
        return cls(M, tuple(data["vars"]), tuple(data["invertible"]))


def trivial_seed(entries: Sequence[Sequence[int]], prefix: str = "x") -> LabeledSeed:
    """Seed for an m x n matrix: mutable x1..xn, frozen x_{n+1}..x_m (not inverted)."""
    M = ExtendedExchangeMatrix.of(entries)
    names = tuple(f"{prefix}{i}" for i in range(1, M.m + 1))
    return LabeledSeed(M, names, (False,) * M.m)


def exchange_polynomial(
    seed: LabeledSeed, k: int, new_name: str, registry: VarRegistry
) -> MultiPoly:
    """x_k * x_k_new - prod_{b_ik>0} x_i^{b_ik} - prod_{b_ik<0} x_i^{-b_ik} over ``registry``."""
    col = seed.matrix.column(k - 1)
    pos = {seed.vars[i]: b for i, b in enumerate(col) if b > 0}
    neg = {seed.vars[i]: -b for i, b in enumerate(col) if b < 0}
    lead = MultiPoly.monomial(registry, {seed.vars[k - 1]: 1, new_name: 1})
    return lead - MultiPoly.monomial(registry, pos) - MultiPoly.monomial(registry, neg)


def mutate_seed(s: LabeledSeed, k: int) -> tuple[LabeledSeed, MultiPoly]:
    """Mutate in direction ``k``; returns the new seed and the exchange relation.

    The relation lives over the old variables plus the new one, named with an
    extra prime.
    """
    if not 1 <= k <= s.n:
        raise IndexError(f"direction {k} outside 1..{s.n}")
    old = s.vars[k - 1]
    new = old + "'"
    while new in s.vars:
        new += "'"
    registry = VarRegistry(s.vars + (new,), s.invertible + (False,))
    relation = exchange_polynomial(s, k, new, registry)
    names = list(s.vars)
    names[k - 1] = new
    return LabeledSeed(mutate_matrix(s.matrix, k), tuple(names), s.invertible), relation


def involution_check(s: LabeledSeed, k: int) -> bool:
    return mutate_matrix(mutate_matrix(s.matrix, k), k) == s.matrix


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

DYNKIN_MIN = {"A": 1, "B": 2, "C": 3, "D": 4, "E": 6}


def _chain(n: int, length: int) -> list[list[int]]:
    B = [[0] * n for _ in range(n)]
    for i in range(length - 1):
        B[i][i + 1] = 1
        B[i + 1][i] = -1
    return B


def dynkin_matrix(kind: str, n: int | None = None) -> list[list[int]]:
    """Exchange matrix of the acyclic seed of the given Dynkin type."""
    kind = kind.upper()
    if kind == "F4":
        if n not in (None, 4):
            raise ValueError("F4 has rank 4")
        return [[0, 1, 0, 0], [-1, 0, 1, 0], [0, -2, 0, 1], [0, 0, -1, 0]]
    if kind == "G2":
        if n not in (None, 2):
            raise ValueError("G2 has rank 2")
        return [[0, 1], [-3, 0]]
    if kind not in DYNKIN_MIN:
        raise ValueError(f"unknown Dynkin type {kind!r}")
    if n is None or n < DYNKIN_MIN[kind]:
        raise ValueError(f"type {kind} needs n >= {DYNKIN_MIN[kind]}, got {n}")
    if kind == "A":
        return _chain(n, n)
    if kind == "B":
        B = _chain(n, n)
        B[n - 1][n - 2] = -2
        return B
    if kind == "C":
        B = _chain(n, n)
        B[n - 2][n - 1] = 2
        return B
    if kind == "D":
        B = _chain(n, n - 2)
        for leaf in (n - 2, n - 1):
            B[n - 3][leaf] = 1
            B[leaf][n - 3] = -1
        return B
    # E_n: chain 1..n-3, two branches at n-3, and the edge n-1 -> n
    B = _chain(n, n - 3)
    for leaf in (n - 3, n - 2):
        B[n - 4][leaf] = 1
        B[leaf][n - 4] = -1
    B[n - 2][n - 1] = 1
    B[n - 1][n - 2] = -1
    return B


def dynkin_seed(kind: str, n: int | None = None) -> LabeledSeed:
    return trivial_seed(dynkin_matrix(kind, n))


def rank_two_seed(a: int, b: int) -> LabeledSeed:
    """Seed with exchange matrix [[0, a], [b, 0]]; requires ab < 0 or a = b = 0."""
    if not (a * b < 0 or a == b == 0):
        raise ValueError(f"rank-2 seed needs ab < 0 or a = b = 0, got ({a}, {b})")
    return trivial_seed([[0, a], [b, 0]])


def with_principal_coefficients(s: LabeledSeed, prefix: str = "c") -> LabeledSeed:
    n = s.n
    eye = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    names = tuple(f"{prefix}{i}" for i in range(1, n + 1))
    M = ExtendedExchangeMatrix(s.matrix.entries + tuple(eye))
    return LabeledSeed(M, s.vars + names, s.invertible + (True,) * n)


def with_generic_coefficients(s: LabeledSeed) -> LabeledSeed:
    n = s.n
    eye = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    neg = [tuple(-int(i == j) for j in range(n)) for i in range(n)]
    names = tuple(f"s{i}" for i in range(1, n + 1)) + tuple(f"t{i}" for i in range(1, n + 1))
    M = ExtendedExchangeMatrix(s.matrix.entries + tuple(eye) + tuple(neg))
    return LabeledSeed(M, s.vars + names, s.invertible + (True,) * (2 * n))


# ---------------------------------------------------------------------------
# Mutation classes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MutationClassResult:
    finite: bool
    count: int | None
    explored: int

    @property
    def status(self) -> str:
        return f"finite({self.count})" if self.finite else "exceeded"


def _canonical(entries: Matrix, n: int) -> Matrix:
    m = len(entries)
    best = None
    for perm in itertools.permutations(range(n)):
        cand = tuple(
            tuple(entries[perm[i] if i < n else i][perm[j]] for j in range(n)) for i in range(m)
        )
        if best is None or cand < best:
            best = cand
    return best


def mutation_class_is_finite(s: LabeledSeed, budget: int = 10_000, framed: bool = True) -> MutationClassResult:
    """Breadth-first search over extended matrices up to relabeling of mutable indices.

    With ``framed`` set and no frozen rows present, principal frozen rows are
    appended first, so that the class separates seeds (a bare exchange matrix
    of rank two never leaves a one-element class).  Exceeding ``budget``
    reports ``exceeded``, never infinity.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    seed = with_principal_coefficients(s) if framed and s.m == s.n else s
    n = seed.n
    start = _canonical(seed.matrix.entries, n)
    seen = {start}
    queue = deque([start])
    while queue:
        current = ExtendedExchangeMatrix(queue.popleft())
        for k in range(1, n + 1):
            key = _canonical(mutate_matrix(current, k).entries, n)
            if key in seen:
                continue
            if len(seen) >= budget:
                return MutationClassResult(False, None, len(seen))
            seen.add(key)
            queue.append(key)
    return MutationClassResult(True, len(seen), len(seen))
