"""Independent reference computations shared by the test modules."""

from __future__ import annotations

from itertools import permutations

from clustersing.algebra import MultiPoly, VarRegistry

YREG = VarRegistry.build([f"y{i}" for i in range(1, 13)])
Y = [YREG.var(f"y{i}") for i in range(1, 13)]


def tridiagonal_det(n: int) -> MultiPoly:
    """Leibniz expansion of det(diag y_i, off-diagonals 1); only near-identity permutations contribute."""
    total = MultiPoly.zero(YREG)
    for perm in permutations(range(n)):
        if any(abs(perm[i] - i) > 1 for i in range(n)):
            continue
        sign = 1
        seen = [False] * n
        for i in range(n):  # sign from cycle decomposition
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                sign *= -1 if length % 2 == 0 else 1
        term = MultiPoly.constant(YREG, sign)
        for i in range(n):
            term = term * (Y[i] if perm[i] == i else 1)
        total = total + term
    return total


def low_order_form(n: int) -> MultiPoly:
    """Closed form of the degree <= 2 part of the n-th continuant, by n mod 4."""
    one = MultiPoly.one(YREG)
    odd = lambda l: Y[2 * l - 2]  # noqa: E731  y_{2l-1}
    even = lambda m: Y[2 * m - 1]  # noqa: E731  y_{2m}
    k, r = divmod(n, 4)
    if r in (0, 2):
        top = 2 * k + r // 2
        quad = sum((odd(l) * even(m) for l in range(1, top + 1) for m in range(l, top + 1)), MultiPoly.zero(YREG))
        return one - quad if r == 0 else quad - one
    lin = sum((odd(l) for l in range(1, 2 * k + (r + 1) // 2 + 1)), MultiPoly.zero(YREG))
    return lin if r == 1 else -lin


# (kind, n, a, b, p) entries of the exhaustive oracle/classifier grid
DIFF_GRID = (
    [("A", n, None, None, p) for n in range(1, 5) for p in (2, 3, 5)]
    + [("B", n, None, None, p) for n in (2, 3, 4) for p in (2, 3, 5)]
    + [("C", n, None, None, p) for n in (3, 4) for p in (2, 3, 5)]
    + [("D", n, None, None, p) for n in (4, 5) for p in (2, 3)]
    + [("E", 7, None, None, 2)]
    + [("F4", None, None, None, p) for p in (2, 3)]
    + [("G2", None, None, None, p) for p in (3, 5, 7)]
    + [("rank2", None, a, b, p) for a, b in [(2, -2), (2, -3), (3, -3), (0, 0)] for p in (2, 3)]
)
