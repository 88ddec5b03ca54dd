"""Brute-force ground truth over F_p.

Points are enumerated exhaustively with numpy, the Jacobian criterion is
applied with a batched fraction-free elimination, and the outcome is compared
against the classifier.  Nothing here knows any theorem.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .algebra import Fp, MultiPoly, is_prime
from .classifier import CoefficientPoint, SingularityReport, classify, coefficient_torus
from .presentations import (
    Presentation,
    bfz_presentation,
    family_rank,
    normalize_family,
    principal_seed,
    reduced_presentation,
    reduction_witness,
)

DEFAULT_BUDGET = 10**8
BUDGET_ENV = "CLUSTERSING_BUDGET"
_CHUNK = 1 << 17
_CACHE_LIMIT = 1 << 21


class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# Compiled polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompiledPoly:
    """A polynomial with all coefficient variables fixed, as exponent/coefficient arrays."""

    exps: np.ndarray  # (terms, vars)
    coeffs: np.ndarray  # (terms,)
    p: int

    @classmethod
    def build(cls, poly: MultiPoly, variables: Sequence[str], p: int) -> "CompiledPoly":
        reg = poly.registry
        cols = [reg.index(v) for v in variables]
        rows, cs = [], []
        for exps, c in poly.items():
            extra = [reg.names[i] for i, e in enumerate(exps) if e and i not in cols]
            if extra:
                raise ValueError(f"variables {extra} are neither fixed nor enumerated")
            if c % p:
                rows.append([exps[i] for i in cols])
                cs.append(c % p)
        exps_arr = np.array(rows, dtype=np.int64).reshape(len(rows), len(cols))
        return cls(exps_arr, np.array(cs, dtype=np.int64), p)

    def __call__(self, powers: np.ndarray) -> np.ndarray:
        """Evaluate at points given a power table of shape (max_exp + 1, points, vars)."""
        npts = powers.shape[1]
        out = np.zeros(npts, dtype=np.int64)
        p = self.p
        for row, c in zip(self.exps, self.coeffs):
            term = np.full(npts, c, dtype=np.int64)
            for j in np.nonzero(row)[0]:
                term = term * powers[row[j], :, j] % p
            out = (out + term) % p
        return out

    @property
    def max_exp(self) -> int:
        return int(self.exps.max()) if self.exps.size else 0


def power_table(points: np.ndarray, max_exp: int, p: int) -> np.ndarray:
    table = np.empty((max_exp + 1,) + points.shape, dtype=np.int64)
    table[0] = 1
    for e in range(1, max_exp + 1):
        table[e] = table[e - 1] * points % p
    return table


# ---------------------------------------------------------------------------
# Fibers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberInstance:
    """The fiber of a presentation over one coefficient point."""

    presentation: Presentation
    p: int
    eta: CoefficientPoint

    def __post_init__(self) -> None:
        if self.eta.p != self.p:
            raise ValueError("coefficient point lives over a different prime")
        units = self.presentation.registry.units
        if len(units) != self.eta.n:
            raise ValueError(f"{len(units)} coefficient variables but {self.eta.n} values")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.presentation.ambient

    @property
    def bindings(self) -> dict[str, int]:
        return dict(zip(self.presentation.registry.units, self.eta.eta))

    def specialized(self) -> list[MultiPoly]:
        return [g.specialize(self.bindings, self.p) for g in self.presentation.generators]

    def compile(self, polys: Sequence[MultiPoly]) -> list[CompiledPoly]:
        b = self.bindings
        return [CompiledPoly.build(f.specialize(b, self.p), self.variables, self.p) for f in polys]

    @property
    def size(self) -> int:
        return self.p ** len(self.variables)


_grid_cache: dict[tuple[int, int], np.ndarray] = {}


def _grid_chunks(p: int, nvars: int) -> Iterator[np.ndarray]:
    total = p**nvars
    if total <= _CACHE_LIMIT:
        key = (p, nvars)
        if key not in _grid_cache:
            _grid_cache[key] = _digits(np.arange(total, dtype=np.int64), p, nvars)
        yield _grid_cache[key]
        return
    for start in range(0, total, _CHUNK):
        yield _digits(np.arange(start, min(start + _CHUNK, total), dtype=np.int64), p, nvars)


def _digits(idx: np.ndarray, p: int, nvars: int) -> np.ndarray:
    out = np.empty((idx.size, nvars), dtype=np.int64)
    for j in range(nvars - 1, -1, -1):
        out[:, j] = idx % p
        idx = idx // p
    return out


def _check_budget(fi: FiberInstance, budget: int | None) -> None:
    budget = default_budget() if budget is None else budget
    if fi.size > budget:
        raise BudgetExceeded(f"{fi.size} points exceed the budget of {budget}")


def enumerate_fiber(fi: FiberInstance, budget: int | None = None) -> np.ndarray:
    """All F_p-points of the fiber, one row per point, columns in ``fi.variables`` order."""
    _check_budget(fi, budget)
    gens = fi.compile(fi.presentation.generators)
    top = max((g.max_exp for g in gens), default=0)
    found = []
    for pts in _grid_chunks(fi.p, len(fi.variables)):
        powers = power_table(pts, top, fi.p)
        keep = np.ones(pts.shape[0], dtype=bool)
        for g in gens:
            keep &= g(powers) == 0
        found.append(pts[keep])
    return np.concatenate(found) if found else np.empty((0, len(fi.variables)), dtype=np.int64)


# ---------------------------------------------------------------------------
# Ranks
# ---------------------------------------------------------------------------


def rank_mod_p(matrix: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p by fraction-free elimination."""
    rows = [[int(x) % p for x in r] for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            a = rows[i][col]
            if a:
                rows[i] = [(pv * x - a * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def batched_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices of shape (N, rows, cols) over F_p."""
    M = np.array(mats, dtype=np.int64) % p
    N, r, c = M.shape
    rank = np.zeros(N, dtype=np.int64)
    row_ids = np.arange(r)
    for col in range(c):
        cand = (M[:, :, col] != 0) & (row_ids[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = cand[idx].argmax(axis=1)
        rk = rank[idx]
        pr, tr = M[idx, piv].copy(), M[idx, rk].copy()
        M[idx, rk], M[idx, piv] = pr, tr
        pv = pr[:, col]
        for i in range(r):
            sel = rk < i
            if not sel.any():
                continue
            ii = idx[sel]
            a = M[ii, i, col]
            M[ii, i] = (pv[sel, None] * M[ii, i] - a[:, None] * pr[sel]) % p
        rank[idx] += 1
    return rank


# ---------------------------------------------------------------------------
# Singular points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingularSet:
    variables: tuple[str, ...]
    points: frozenset[tuple[int, ...]]
    codim_expected: int
    fiber_size: int

    def as_dicts(self) -> list[dict[str, int]]:
        return [dict(zip(self.variables, pt)) for pt in sorted(self.points)]

    def __len__(self) -> int:
        return len(self.points)


def _jacobian_ranks(fi: FiberInstance, pts: np.ndarray) -> np.ndarray:
    gens = fi.specialized()
    r, v = len(gens), len(fi.variables)
    if pts.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    partials = [[CompiledPoly.build(g.partial(x), fi.variables, fi.p) for x in fi.variables] for g in gens]
    top = max((d.max_exp for row in partials for d in row), default=0)
    powers = power_table(pts, top, fi.p)
    J = np.empty((pts.shape[0], r, v), dtype=np.int64)
    for i, row in enumerate(partials):
        for j, d in enumerate(row):
            J[:, i, j] = d(powers)
    return batched_rank_mod_p(J, fi.p)


def singular_points(fi: FiberInstance, budget: int | None = None) -> SingularSet:
    pts = enumerate_fiber(fi, budget)
    r = len(fi.presentation.generators)
    ranks = _jacobian_ranks(fi, pts)
    sing = pts[ranks < r]
    return SingularSet(fi.variables, frozenset(map(tuple, sing.tolist())), r, int(pts.shape[0]))


def hessian_rank_at(
    f: MultiPoly,
    point: Mapping[str, int],
    p: int,
    variables: Sequence[str] | None = None,
) -> int:
    """Rank of the Hessian of ``f`` at ``point`` over F_p.

    ``point`` must assign every variable occurring in ``f`` (coefficients
    included); derivatives are taken in ``variables``, by default the
    non-invertible variables of the registry.
    """
    if p == 2:
        raise ValueError("the Hessian test is not meaningful in characteristic 2")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    reg = f.registry
    variables = tuple(variables) if variables is not None else reg.plain
    at = {k: Fp(v, p) for k, v in point.items()}
    if f.evaluate(at, p) != 0:
        raise ValueError("f does not vanish at the point")
    grads = [f.partial(x) for x in variables]
    if any(g.evaluate(at, p) != 0 for g in grads):
        raise ValueError("the gradient of f does not vanish at the point")
    H = [[g.partial(y).evaluate(at, p).residue for y in variables] for g in grads]
    return rank_mod_p(H, p)


# ---------------------------------------------------------------------------
# Classifier diff
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Discrepancy:
    eta: tuple[int, ...]
    point: dict[str, int] | None
    side: str  # "oracle" = singular but not predicted, "classifier" = predicted but not singular
    detail: str = ""

    def to_json(self) -> dict:
        return {"eta": list(self.eta), "point": self.point, "side": self.side, "detail": self.detail}


@dataclass
class DiffReport:
    kind: str
    n: int
    p: int
    a: int | None = None
    b: int | None = None
    total: int = 0
    agreeing: int = 0
    singular_eta: int = 0
    singular_counts: dict[tuple[int, ...], int] = field(default_factory=dict)
    discrepancies: list[Discrepancy] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def summary(self) -> str:
        return f"{self.agreeing}/{self.total} eta agree"

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "n": self.n,
            "p": self.p,
            "a": self.a,
            "b": self.b,
            "eta_total": self.total,
            "eta_agree": self.agreeing,
            "singular_eta": self.singular_eta,
            "summary": self.summary(),
            "discrepancies": [d.to_json() for d in self.discrepancies],
        }


def predicted_points(report: SingularityReport, fiber_points: np.ndarray, variables: Sequence[str]) -> set[tuple[int, ...]]:
    """Fiber points lying on some component of the reported singular locus."""
    if fiber_points.shape[0] == 0 or not report.components:
        return set()
    p = report.p
    values = report.coefficient_values()
    compiled = [
        [CompiledPoly.build(e.specialize(values, p), variables, p) for e in comp.equations]
        for comp in report.components
    ]
    top = max((c.max_exp for comp in compiled for c in comp), default=0)
    powers = power_table(fiber_points, top, p)
    hit = np.zeros(fiber_points.shape[0], dtype=bool)
    for comp in compiled:
        on = np.ones(fiber_points.shape[0], dtype=bool)
        for eq in comp:
            on &= eq(powers) == 0
        hit |= on
    return set(map(tuple, fiber_points[hit].tolist()))


def diff_one(report: SingularityReport, budget: int | None = None) -> tuple[list[Discrepancy], SingularSet]:
    pt = CoefficientPoint(report.p, report.eta)
    fi = FiberInstance(report.presentation, report.p, pt)
    pts = enumerate_fiber(fi, budget)
    r = len(fi.presentation.generators)
    ranks = _jacobian_ranks(fi, pts)
    sing = SingularSet(fi.variables, frozenset(map(tuple, pts[ranks < r].tolist())), r, int(pts.shape[0]))
    predicted = predicted_points(report, pts, fi.variables)
    out = []
    for q in sorted(sing.points - predicted):
        out.append(Discrepancy(pt.eta, dict(zip(fi.variables, q)), "oracle", "singular point not predicted"))
    for q in sorted(predicted - sing.points):
        out.append(Discrepancy(pt.eta, dict(zip(fi.variables, q)), "classifier", "predicted point is regular"))
    if report.point is not None:
        q = tuple(report.point[v] for v in fi.variables)
        if q not in sing.points:
            out.append(Discrepancy(pt.eta, dict(report.point), "classifier", "reported point is not a singular fiber point"))
    if report.singular != bool(sing.points) and not _geometric_only(report):
        out.append(Discrepancy(pt.eta, None, "oracle" if sing.points else "classifier", "verdict disagrees"))
    return out, sing


def _geometric_only(report: SingularityReport) -> bool:
    """Singular loci that may have no F_p-rational point (components over extensions)."""
    return report.verdict.value in ("RankTwo", "DComponents", "E7Surface", "CSpecial")


def diff_against_classifier(
    kind: str,
    n: int | None,
    p: int,
    a: int | None = None,
    b: int | None = None,
    budget: int | None = None,
) -> DiffReport:
    kind = normalize_family(kind)
    n = family_rank(kind, n, a, b)
    out = DiffReport(kind, n, p, a, b)
    for pt in coefficient_torus(n, p):
        report = classify(kind, n, pt, a, b)
        found, sing = diff_one(report, budget)
        out.total += 1
        out.singular_counts[pt.eta] = len(sing)
        if sing.points:
            out.singular_eta += 1
        if found:
            out.discrepancies.extend(found)
        else:
            out.agreeing += 1
    return out


# ---------------------------------------------------------------------------
# Transport between the BFZ and reduced charts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransportReport:
    eta: tuple[int, ...]
    bfz_singular: int
    reduced_singular: int
    images: frozenset[tuple[int, ...]]
    reduced_points: frozenset[tuple[int, ...]]

    @property
    def injective(self) -> bool:
        return len(self.images) == self.bfz_singular

    @property
    def ok(self) -> bool:
        return self.injective and self.images == self.reduced_points


def transport_check(
    kind: str,
    n: int | None,
    pt: CoefficientPoint,
    a: int | None = None,
    b: int | None = None,
    budget: int | None = None,
) -> TransportReport:
    """Map the BFZ fiber's singular points through the witness and compare with the reduced chart."""
    w = reduction_witness(kind, n, a, b)
    bfz_fi = FiberInstance(w.bfz, pt.p, pt)
    red_fi = FiberInstance(w.reduced, pt.p, pt)
    bfz_sing = singular_points(bfz_fi, budget)
    red_sing = singular_points(red_fi, budget)
    coeffs = {k: Fp(v, pt.p) for k, v in bfz_fi.bindings.items()}
    images = set()
    for q in bfz_sing.points:
        at = dict(coeffs)
        at.update({v: Fp(x, pt.p) for v, x in zip(bfz_fi.variables, q)})
        images.add(tuple(w.forward[v].evaluate(at, pt.p).residue for v in red_fi.variables))
    return TransportReport(pt.eta, len(bfz_sing), len(red_sing), frozenset(images), red_sing.points)


def bfz_fiber(kind: str, n: int | None, pt: CoefficientPoint, a: int | None = None, b: int | None = None) -> FiberInstance:
    return FiberInstance(bfz_presentation(principal_seed(kind, n, a, b)), pt.p, pt)


def reduced_fiber(kind: str, n: int | None, pt: CoefficientPoint, a: int | None = None, b: int | None = None) -> FiberInstance:
    return FiberInstance(reduced_presentation(kind, n, a, b), pt.p, pt)
