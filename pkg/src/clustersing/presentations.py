"""Presentations of cluster algebras with principal coefficients.

Three layers:

* ``bfz_presentation`` reads the exchange relations off an acyclic seed.
* ``reduced_presentation`` returns the compact hypersurface / two- or
  three-equation models in ``z``/``u`` coordinates, one per Dynkin family
  (plus rank two).
* ``reduction_witness`` records the change of variables carrying the first to
  the second, and ``verify_reduction`` checks it with exact arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import MultiPoly, NonUnitImageError, VarRegistry
from .seeds import (
    LabeledSeed,
    NotAcyclicError,
    dynkin_seed,
    exchange_polynomial,
    is_acyclic,
    rank_two_seed,
    with_generic_coefficients,
    with_principal_coefficients,
)

FAMILIES = ("A", "B", "C", "D", "E", "F4", "G2", "rank2")
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4, "E": 6}


def normalize_family(kind: str) -> str:
    k = kind.strip()
    if k.lower() in ("rank2", "rank-2", "rk2"):
        return "rank2"
    k = k.upper()
    if k not in FAMILIES:
        raise ValueError(f"unknown family {kind!r}; expected one of {FAMILIES}")
    return k


def family_rank(kind: str, n: int | None = None, a: int | None = None, b: int | None = None) -> int:
    """Validate the (family, n) or (a, b) data and return the rank."""
    kind = normalize_family(kind)
    if kind == "F4":
        if n not in (None, 4):
            raise ValueError("F4 has rank 4")
        return 4
    if kind == "G2":
        if n not in (None, 2):
            raise ValueError("G2 has rank 2")
        return 2
    if kind == "rank2":
        if a is None or b is None:
            raise ValueError("rank-2 family needs both a and b")
        if not (a * b < 0 or a == b == 0):
            raise ValueError(f"rank-2 family needs ab < 0 or a = b = 0, got ({a}, {b})")
        if n not in (None, 2):
            raise ValueError("rank-2 family has rank 2")
        return 2
    if n is None or n < _MIN_RANK[kind]:
        raise ValueError(f"type {kind} needs n >= {_MIN_RANK[kind]}, got {n}")
    return n


@dataclass(frozen=True)
class Presentation:
    """Ambient registry plus ideal generators."""

    registry: VarRegistry
    generators: tuple[MultiPoly, ...]
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.registry != self.registry:
                raise ValueError("generator over a foreign registry")

    @property
    def ambient(self) -> tuple[str, ...]:
        """The non-invertible ambient variables (the fiber coordinates)."""
        return self.registry.plain

    @property
    def coefficients(self) -> tuple[str, ...]:
        return self.registry.units

    @property
    def expected_fiber_dim(self) -> int:
        return len(self.ambient) - len(self.generators)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "vars": list(self.registry.names),
            "invertible": list(self.registry.invertible),
            "generators": [str(g) for g in self.generators],
        }


# ---------------------------------------------------------------------------
# Continuants and lambda terms
# ---------------------------------------------------------------------------


def continuant(n: int, variables: Sequence[MultiPoly]) -> MultiPoly:
    """P_n(y_1, ..., y_n) from P_0 = 1, P_1 = y_1, P_n = y_1 P_{n-1}(y_2..) - P_{n-2}(y_3..)."""
    if n < 0:
        raise ValueError("continuant index must be nonnegative")
    if len(variables) < n:
        raise ValueError(f"P_{n} needs {n} variables, got {len(variables)}")
    if not variables:
        raise ValueError("at least one variable is needed to fix the registry")
    reg = variables[0].registry
    ys = list(variables[:n])
    # suffix[j] = P(y_j, ..., y_n), built from the right with the defining recursion
    after_next = MultiPoly.one(reg)
    nxt = MultiPoly.one(reg)
    if n == 0:
        return nxt
    nxt, after_next = ys[n - 1], nxt
    for j in range(n - 2, -1, -1):
        nxt, after_next = ys[j] * nxt - after_next, nxt
    return nxt


def lambda_exponents(k: int) -> tuple[int, ...]:
    """Indices i with c_i^{-1} dividing lambda_k: the even ones up to k, or the odd ones."""
    if k < 0:
        raise ValueError("lambda index must be nonnegative")
    return tuple(range(2 if k % 2 == 0 else 1, k + 1, 2))


def lambda_term(k: int, registry: VarRegistry, prefix: str = "c") -> MultiPoly:
    """lambda_k as a Laurent monomial over ``registry``; lambda_0 = 1."""
    return MultiPoly.monomial(registry, {f"{prefix}{i}": -1 for i in lambda_exponents(k)})


def lambda_value(k: int, eta: Sequence[int], p: int):
    """lambda_k evaluated at the coefficient point ``eta`` over F_p."""
    from .algebra import Fp

    v = Fp(1, p)
    for i in lambda_exponents(k):
        v = v * Fp(eta[i - 1], p).inverse()
    return v


def coefficient_names(n: int, prefix: str = "c") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


# ---------------------------------------------------------------------------
# BFZ presentation
# ---------------------------------------------------------------------------


def exchanged_name(var: str) -> str:
    m = re.fullmatch(r"x(\d+)", var)
    return f"y{m.group(1)}" if m else var + "'"


def bfz_presentation(s: LabeledSeed) -> Presentation:
    """Generators x_k x_k' - prod(b_ik > 0) - prod(b_ik < 0), one per mutable k."""
    if not is_acyclic(s.matrix):
        raise NotAcyclicError("the presentation needs an acyclic seed")
    new = tuple(exchanged_name(v) for v in s.mutable)
    names = s.mutable + new + s.frozen
    flags = (False,) * (2 * s.n) + s.invertible[s.n :]
    reg = VarRegistry(names, flags)
    gens = tuple(exchange_polynomial(s, k, new[k - 1], reg) for k in range(1, s.n + 1))
    return Presentation(reg, gens, label="bfz")


def principal_seed(kind: str, n: int | None = None, a: int | None = None, b: int | None = None) -> LabeledSeed:
    kind = normalize_family(kind)
    family_rank(kind, n, a, b)
    base = rank_two_seed(a, b) if kind == "rank2" else dynkin_seed(kind, n)
    return with_principal_coefficients(base)


# ---------------------------------------------------------------------------
# Reduced presentations
# ---------------------------------------------------------------------------


def _zs(k: int) -> list[str]:
    return [f"z{i}" for i in range(1, k + 1)]


def reduced_registry(kind: str, n: int | None = None) -> VarRegistry:
    kind = normalize_family(kind)
    if kind == "G2":
        return VarRegistry.build(["x", "y", "z"], coefficient_names(2))
    if kind == "rank2":
        return VarRegistry.build(["x1", "x2", "y1", "y2"], coefficient_names(2))
    if kind == "F4":
        return VarRegistry.build([f"x{i}" for i in range(1, 5)] + [f"y{i}" for i in range(1, 5)], coefficient_names(4))
    family_rank(kind, n)
    cs = coefficient_names(n)
    if kind == "A":
        if n == 1:
            return VarRegistry.build(["x1", "y1"], cs)
        return VarRegistry.build(_zs(n + 1), cs)
    if kind == "B":
        return VarRegistry.build(_zs(n - 1) + ["u1", "u2", "u3"], cs)
    if kind == "C":
        return VarRegistry.build(_zs(n + 1), cs)
    if kind == "D":
        return VarRegistry.build(_zs(n - 2) + ["u1", "u2", "u3", "u4"], cs)
    return VarRegistry.build(_zs(n - 2) + ["u1", "u2", "u3", "u4", "u5"], cs)


def reduced_presentation(
    kind: str,
    n: int | None = None,
    a: int | None = None,
    b: int | None = None,
    normalized: bool = True,
) -> Presentation:
    """The compact model of the principal-coefficient algebra of the given type.

    For rank two, ``normalized=False`` returns the exchange relations exactly as
    read off the seed; the default rescales one coefficient so that both
    relations take the shape x_i y_i - c_i - x_j^e.
    """
    kind = normalize_family(kind)
    family_rank(kind, n, a, b)
    if kind == "rank2" and not normalized:
        bfz = bfz_presentation(principal_seed("rank2", a=a, b=b))
        return Presentation(bfz.registry, bfz.generators, label=f"rank2({a},{b}) unnormalized")
    reg = reduced_registry(kind, n)
    var = reg.var
    P = continuant

    def zs(k: int) -> list[MultiPoly]:
        return [var(f"z{i}") for i in range(1, k + 1)]

    def lam(k: int) -> MultiPoly:
        return lambda_term(k, reg)

    if kind == "A":
        if n == 1:
            x1, y1, c1 = reg.vars("x1", "y1", "c1")
            gens = [x1 * y1 - c1 - 1]
        else:
            gens = [P(n + 1, zs(n + 1)) - lam(n)]
    elif kind == "B":
        u1, u2, u3 = reg.vars("u1", "u2", "u3")
        z = zs(n - 1)
        g = (u1 * u2 - lam(n)) * u3 - lam(n - 1).inverse() * u1**2 - P(n - 2, z or [u1])
        h = u1 * u2 - lam(n) - P(n - 1, z)
        gens = [g, h]
    elif kind == "C":
        z = zs(n + 1)
        gens = [P(n, z) * z[n] - P(n - 1, z) ** 2 - lam(n - 2) * lam(n)]
    elif kind == "D":
        u1, u2, u3, u4 = reg.vars("u1", "u2", "u3", "u4")
        z = zs(n - 2)
        h1 = u1 * u2 - u3 * u4 - lam(n - 1).inverse() * u2 * u4 * (u1 * u3 + P(n - 3, z))
        h2 = u3 * u4 - P(n - 2, z) - lam(n - 1)
        gens = [h1, h2]
    elif kind == "E":
        u1, u2, u3, u4, u5 = reg.vars("u1", "u2", "u3", "u4", "u5")
        z = zs(n - 2)
        h1 = P(n - 2, z) - u3 * P(2, [u1, u2])
        h2 = u3 * u4 - P(n - 3, z) - lam(n - 2)
        h3 = P(3, [u1, u2, u5]) - P(n - 3, z)
        gens = [h1, h2, h3]
    elif kind == "F4":
        x = [var(f"x{i}") for i in range(1, 5)]
        y = [var(f"y{i}") for i in range(1, 5)]
        gens = [
            x[0] * y[0] - 1 - x[1],
            x[1] * y[1] - x[0] - x[2] ** 2,
            x[2] * y[2] - x[1] - x[3],
            x[3] * y[3] - x[2] - 1,
        ]
    elif kind == "G2":
        x, y, z, c1 = reg.vars("x", "y", "z", "c1")
        gens = [x * y * z - y - c1 - x**3]
    else:
        x1, x2, y1, y2, c1, c2 = reg.vars("x1", "x2", "y1", "y2", "c1", "c2")
        gens = [x1 * y1 - c1 - x2 ** abs(b), x2 * y2 - c2 - x1 ** abs(a)]
    label = f"rank2({a},{b})" if kind == "rank2" else (kind if kind in ("F4", "G2") else f"{kind}{n}")
    return Presentation(reg, tuple(gens), label=label)


# ---------------------------------------------------------------------------
# Changes of variables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VariableChange:
    """A monomial change of variables followed by an ordered elimination list.

    ``mapping`` sends each source variable to a polynomial over ``target`` of the
    form (unit monomial) * (at most one plain variable).  ``eliminations`` are
    substitutions var -> polynomial over ``target``, applied one after another.
    """

    source: VarRegistry
    target: VarRegistry
    mapping: Mapping[str, MultiPoly]
    eliminations: tuple[tuple[str, MultiPoly], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mapping", dict(self.mapping))
        object.__setattr__(self, "eliminations", tuple(self.eliminations))
        for name, img in self.mapping.items():
            if name not in self.source:
                raise KeyError(f"{name!r} is not a source variable")
            if img.registry != self.target:
                raise ValueError(f"image of {name} is over a foreign registry")
            if not _is_unit_times_variable(img):
                raise NonUnitImageError(f"image of {name} is not a unit times one variable: {img}")
        for name, repl in self.eliminations:
            if name not in self.target or repl.registry != self.target:
                raise ValueError(f"bad elimination for {name!r}")

    def apply(self, poly: MultiPoly) -> MultiPoly:
        return poly.substitute(self.mapping, self.target)

    def eliminate(self, poly: MultiPoly) -> MultiPoly:
        for name, repl in self.eliminations:
            poly = poly.substitute({name: repl})
        return poly

    def describe(self) -> list[str]:
        lines = [f"{k} = {v}" for k, v in self.mapping.items()]
        lines += [f"{k} := {v}" for k, v in self.eliminations]
        return lines


def _is_unit_times_variable(img: MultiPoly) -> bool:
    if not img.is_monomial():
        return False
    (exps, coeff), = img.items()
    if coeff not in (1, -1):
        return False
    plain = [e for e, inv in zip(exps, img.registry.invertible) if not inv and e]
    return plain in ([], [1])


@dataclass(frozen=True)
class ReductionWitness:
    """Everything needed to check that ``bfz`` and ``reduced`` present the same algebra.

    Each BFZ generator k becomes ``units[k] * intermediates[k]`` after
    ``change.mapping``.  ``combinations[r]`` lists (coefficient, index) pairs
    forming relation r out of the intermediates; after ``change.eliminations``
    relation r must vanish identically when ``roles[r]`` is ``None`` and equal
    reduced generator ``roles[r]`` otherwise.  ``forward`` expresses each
    reduced-chart variable (and coefficient) through the BFZ variables.
    """

    kind: str
    n: int
    bfz: Presentation
    reduced: Presentation
    change: VariableChange
    units: tuple[MultiPoly, ...]
    intermediates: tuple[MultiPoly, ...]
    combinations: tuple[tuple[tuple[MultiPoly, int], ...], ...]
    roles: tuple[int | None, ...]
    forward: Mapping[str, MultiPoly] = field(default_factory=dict)
    a: int | None = None
    b: int | None = None


@dataclass(frozen=True)
class CheckResult:
    label: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    subject: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [{"label": c.label, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


class _Builder:
    """Collects the pieces of a witness over one intermediate registry."""

    def __init__(self, bfz: Presentation, plain: Sequence[str], n_coeffs: int):
        self.bfz = bfz
        self.target = VarRegistry.build(list(plain), coefficient_names(n_coeffs))
        self.mapping: dict[str, MultiPoly] = {}
        self.elims: list[tuple[str, MultiPoly]] = []
        self.units: list[MultiPoly] = []
        self.inters: list[MultiPoly] = []

    def v(self, name: str) -> MultiPoly:
        return self.target.var(name)

    def lam(self, k: int) -> MultiPoly:
        return lambda_term(k, self.target)

    def c(self, i: int) -> MultiPoly:
        return self.target.var(f"c{i}")

    def one(self) -> MultiPoly:
        return MultiPoly.one(self.target)

    def send(self, source: str, unit: MultiPoly, new: str | None) -> None:
        """source = unit * new."""
        self.mapping[source] = unit * (self.v(new) if new else self.one())

    def relation(self, unit: MultiPoly, inter: MultiPoly) -> None:
        self.units.append(unit)
        self.inters.append(inter)

    def change(self) -> VariableChange:
        return VariableChange(self.bfz.registry, self.target, self.mapping, tuple(self.elims))


def _forward_map(
    change: VariableChange,
    bfz: Presentation,
    reduced: Presentation,
    extra: Mapping[str, MultiPoly] | None = None,
) -> dict[str, MultiPoly]:
    """Invert the monomial part: target variable -> expression in BFZ variables."""
    inverse: dict[str, MultiPoly] = {}
    src = bfz.registry
    tgt = change.target
    # coefficient images first: each is a +-1 power of one target coefficient
    for s, img in change.mapping.items():
        if img.is_unit_monomial():
            (exps, coeff), = img.items()
            used = [(nm, e) for nm, e in zip(tgt.names, exps) if e]
            if len(used) != 1 or abs(used[0][1]) != 1 or coeff != 1:
                raise ValueError(f"cannot invert coefficient image {img}")
            t, e = used[0]
            inverse[t] = src.var(s) ** e
    for name in tgt.units:
        inverse.setdefault(name, src.var(name))
    coeff_back = {name: inverse[name] for name in tgt.units}
    for s, img in change.mapping.items():
        if img.is_unit_monomial():
            continue
        (exps, coeff), = img.items()
        powers = {nm: e for nm, e, inv in zip(tgt.names, exps, tgt.invertible) if inv and e}
        (t,) = [nm for nm, e, inv in zip(tgt.names, exps, tgt.invertible) if e and not inv]
        unit = MultiPoly.monomial(tgt, powers, coeff)
        inverse[t] = unit.inverse().substitute(coeff_back, src) * src.var(s)
    if extra:
        for name, expr in extra.items():
            inverse[name] = expr.substitute(inverse, src)
    missing = [v for v in reduced.registry.names if v not in inverse]
    if missing:
        raise ValueError(f"no forward expression for {missing}")
    return {v: inverse[v] for v in reduced.registry.names}


def _chain_part(B: _Builder, upto: int, y_names: Mapping[int, str] | None = None) -> None:
    """Standard tilde variables for nodes 1..upto: x_k = lam_{k-1}^{-1} xt_k, y_k = lam_k^{-1} lam_{k-1} z_{k+1}."""
    y_names = y_names or {}
    for k in range(1, upto + 1):
        B.send(f"x{k}", B.lam(k - 1).inverse(), "z1" if k == 1 else f"xt{k}")
        B.send(f"y{k}", B.lam(k).inverse() * B.lam(k - 1), y_names.get(k, f"z{k + 1}"))


def _xt(B: _Builder, k: int) -> MultiPoly:
    if k == 0:
        return B.one()
    return B.v("z1") if k == 1 else B.v(f"xt{k}")


def _chain_eliminations(B: _Builder, upto: int) -> None:
    zs = [B.v(f"z{i}") for i in range(1, upto + 1)]
    for k in range(2, upto + 1):
        B.elims.append((f"xt{k}", continuant(k, zs)))


def _std_relations(B: _Builder, upto: int) -> None:
    """Intermediate relations xt_k y~_k - xt_{k-1} - xt_{k+1}, unit lam_k^{-1}, for k = 1..upto."""
    for k in range(1, upto + 1):
        B.relation(B.lam(k).inverse(), _xt(B, k) * B.v(f"z{k + 1}") - _xt(B, k - 1) - _xt(B, k + 1))


def _identity_combos(count: int, reg: VarRegistry) -> tuple[tuple[tuple[MultiPoly, int], ...], ...]:
    return tuple(((MultiPoly.one(reg), i),) for i in range(count))


def reduction_witness(kind: str, n: int | None = None, a: int | None = None, b: int | None = None) -> ReductionWitness:
    kind = normalize_family(kind)
    n = family_rank(kind, n, a, b)
    seed = principal_seed(kind, n, a, b)
    bfz = bfz_presentation(seed)
    reduced = reduced_presentation(kind, n, a, b)
    extra_forward: dict[str, MultiPoly] = {}
    combos = None

    if kind == "A" and n == 1:
        B = _Builder(bfz, ["x1", "y1"], 1)
        B.send("x1", B.one(), "x1")
        B.send("y1", B.one(), "y1")
        B.relation(B.one(), bfz.generators[0].to_registry(B.target))
        roles = (0,)
    elif kind == "A":
        B = _Builder(bfz, _zs(n + 1) + [f"xt{k}" for k in range(2, n + 1)], n)
        _chain_part(B, n)
        _std_relations(B, n - 1)
        B.relation(B.lam(n).inverse(), _xt(B, n) * B.v(f"z{n + 1}") - _xt(B, n - 1) - B.lam(n))
        _chain_eliminations(B, n)
        roles = (None,) * (n - 1) + (0,)
    elif kind == "B":
        B = _Builder(bfz, _zs(n - 1) + ["u1", "u2", "u3"] + [f"xt{k}" for k in range(2, n)], n)
        _chain_part(B, n - 1, {n - 1: "u3"})
        B.send(f"x{n}", B.lam(n - 1).inverse(), "u1")
        B.send(f"y{n}", B.lam(n).inverse() * B.lam(n - 1), "u2")
        _std_relations(B, n - 2)
        u1, u2, u3 = B.v("u1"), B.v("u2"), B.v("u3")
        B.relation(
            B.lam(n - 1).inverse(),
            _xt(B, n - 1) * u3 - _xt(B, n - 2) - B.lam(n - 1).inverse() * u1**2,
        )
        B.relation(B.lam(n).inverse(), u1 * u2 - _xt(B, n - 1) - B.lam(n))
        _chain_eliminations(B, n - 1)
        one = B.one()
        combos = tuple(((one, i),) for i in range(n - 2)) + (
            ((one, n - 2), (u3, n - 1)),
            ((one, n - 1),),
        )
        roles = (None,) * (n - 2) + (0, 1)
    elif kind == "C":
        B = _Builder(bfz, _zs(n + 1) + [f"xt{k}" for k in range(2, n + 1)], n)
        _chain_part(B, n - 1)
        B.send(f"x{n}", B.lam(n - 1).inverse(), f"xt{n}")
        # y_n = lam_n^{-1} lam_{n-1} y~_n and y~~_n = lam_{n-2} y~_n
        B.send(f"y{n}", B.lam(n).inverse() * B.lam(n - 1) * B.lam(n - 2).inverse(), f"z{n + 1}")
        _std_relations(B, n - 1)
        B.relation(
            (B.lam(n - 2) * B.lam(n)).inverse(),
            _xt(B, n) * B.v(f"z{n + 1}") - _xt(B, n - 1) ** 2 - B.lam(n - 2) * B.lam(n),
        )
        _chain_eliminations(B, n)
        roles = (None,) * (n - 1) + (0,)
    elif kind == "D":
        aux = [f"xt{k}" for k in range(2, n - 1)] + ["yt", "xn"]
        B = _Builder(bfz, _zs(n - 2) + ["u1", "u2", "u3", "u4"] + aux, n)
        _chain_part(B, n - 2, {n - 2: "yt"})
        B.send(f"x{n - 1}", B.lam(n - 2).inverse(), "u3")
        B.send(f"y{n - 1}", B.lam(n - 2) * B.lam(n - 1).inverse(), "u4")
        B.send(f"x{n}", B.one(), "xn")
        B.send(f"y{n}", B.lam(n - 1).inverse(), "u2")
        u1, u2, u3, u4, yt, xn = (B.v(s) for s in ("u1", "u2", "u3", "u4", "yt", "xn"))
        # standard relations for k = 1..n-3; y~_{n-3} is z_{n-2}
        for k in range(1, n - 2):
            B.relation(B.lam(k).inverse(), _xt(B, k) * B.v(f"z{k + 1}") - _xt(B, k - 1) - _xt(B, k + 1))
        lam1 = B.lam(n - 1)
        B.relation(B.lam(n - 2).inverse(), _xt(B, n - 2) * yt - _xt(B, n - 3) - u3 * xn)  # g3
        B.relation(lam1.inverse(), u3 * u4 - _xt(B, n - 2) - lam1)  # g2
        B.relation(lam1.inverse(), xn * u2 - _xt(B, n - 2) - lam1)  # g1
        B.elims.append(("xn", u1 + yt * u4))
        B.elims.append(("yt", -lam1.inverse() * (_xt(B, n - 3) + u1 * u3)))
        _chain_eliminations(B, n - 2)
        one = B.one()
        i3, i2, i1 = n - 2, n - 1, n
        combos = tuple(((one, i),) for i in range(n - 3)) + (
            ((one, i3 - 1), (yt, i2 - 1)),  # g3' = g3 + y~_{n-2} g2
            ((one, i2 - 1),),  # h2 = g2
            ((one, i1 - 1), (-one, i2 - 1)),  # h1 = g1 - g2
        )
        roles = (None,) * (n - 3) + (None, 1, 0)
        extra_forward["u1"] = xn - yt * u4
    elif kind == "E":
        aux = [f"xt{k}" for k in range(2, n - 2)] + [f"xt{n - 1}"]
        B = _Builder(bfz, _zs(n - 2) + ["u1", "u2", "u3", "u4", "u5"] + aux, n)
        _chain_part(B, n - 3)
        cn, cn1 = B.c(n), B.c(n - 1)
        B.send(f"x{n - 2}", cn * B.lam(n - 3).inverse(), "u3")
        B.send(f"y{n - 2}", cn.inverse() * B.lam(n - 2).inverse() * B.lam(n - 3), "u4")
        B.send(f"x{n - 1}", cn.inverse(), f"xt{n - 1}")
        B.send(f"y{n - 1}", cn * cn1 * B.lam(n - 4).inverse(), "u5")
        B.send(f"x{n}", cn1 * B.lam(n - 4).inverse(), "u1")
        B.send(f"y{n}", cn1.inverse() * B.lam(n - 4), "u2")
        u1, u2, u3, u4, u5 = (B.v(f"u{i}") for i in range(1, 6))
        xtl = B.v(f"xt{n - 1}")
        _std_relations(B, n - 4)
        B.relation(B.lam(n - 3).inverse(), _xt(B, n - 3) * B.v(f"z{n - 2}") - _xt(B, n - 4) - u3 * xtl)
        B.relation(B.lam(n - 2).inverse(), u3 * u4 - _xt(B, n - 3) - B.lam(n - 2))
        B.relation(cn1 * B.lam(n - 4).inverse(), xtl * u5 - _xt(B, n - 3) - u1)
        B.relation(B.one(), u1 * u2 - xtl - 1)
        B.elims.append((f"xt{n - 1}", continuant(2, [u1, u2])))
        _chain_eliminations(B, n - 3)
        roles = (None,) * (n - 4) + (0, 1, 2, None)
    elif kind == "F4":
        B = _Builder(bfz, [f"x{i}" for i in range(1, 5)] + [f"y{i}" for i in range(1, 5)], 4)
        c1, c2, c3, c4 = (B.c(i) for i in range(1, 5))
        # x_k = (unit)^{-1} x~_k for the table x~_1 = c2 c4^2 x_1, ...
        table_x = {1: c2 * c4**2, 2: c1.inverse(), 3: c4, 4: (c1 * c3).inverse()}
        table_y = {1: (c1 * c2 * c4**2).inverse(), 2: c1 * c4**2, 3: (c1 * c3 * c4).inverse(), 4: c1 * c3}
        for k in range(1, 5):
            B.send(f"x{k}", table_x[k].inverse(), f"x{k}")
            B.send(f"y{k}", table_y[k].inverse(), f"y{k}")
        for unit, g in zip((c1, c4 ** -2, c1 * c3, B.one()), reduced.generators):
            B.relation(unit, g.to_registry(B.target))
        roles = (0, 1, 2, 3)
    elif kind == "G2":
        B = _Builder(bfz, ["x", "y", "z", "xt1"], 2)
        c1, c2 = B.c(1), B.c(2)
        x, y, z, xt1 = (B.v(s) for s in ("x", "y", "z", "xt1"))
        B.send("x1", c2.inverse(), "xt1")
        B.send("y1", c2, "y")
        B.send("x2", B.one(), "x")
        B.send("y2", B.one(), "z")
        B.relation(B.one(), xt1 * y - c1 - x**3)
        B.relation(B.one(), x * z - xt1 - 1)
        B.elims.append(("xt1", continuant(2, [x, z])))
        roles = (0, None)
    else:  # rank two
        B = _Builder(bfz, ["x1", "x2", "y1", "y2"], 2)
        x1, x2, y1, y2, c1, c2 = (B.v(s) for s in ("x1", "x2", "y1", "y2", "c1", "c2"))
        A, Bb = abs(a), abs(b)
        for s in ("x1", "x2", "y1", "y2"):
            B.send(s, B.one(), s)
        if a == 0:
            B.relation(B.one(), x1 * y1 - c1 - 1)
            B.relation(B.one(), x2 * y2 - c2 - 1)
        elif a > 0:
            # x2 y2 - c2 x1^a - 1 = c2'^{-1} (x2 y2' - x1^a - c2') with c2 = c2'^{-1}, y2 = c2'^{-1} y2'
            B.mapping["c2"] = c2.inverse()
            B.send("y2", c2.inverse(), "y2")
            B.relation(B.one(), x1 * y1 - c1 - x2**Bb)
            B.relation(c2.inverse(), x2 * y2 - c2 - x1**A)
        else:
            B.mapping["c1"] = c1.inverse()
            B.send("y1", c1.inverse(), "y1")
            B.relation(c1.inverse(), x1 * y1 - c1 - x2**Bb)
            B.relation(B.one(), x2 * y2 - c2 - x1**A)
        roles = (0, 1)

    change = B.change()
    if combos is None:
        combos = _identity_combos(len(B.inters), B.target)
    forward = _forward_map(change, bfz, reduced, extra_forward)
    return ReductionWitness(
        kind=kind,
        n=n,
        bfz=bfz,
        reduced=reduced,
        change=change,
        units=tuple(B.units),
        intermediates=tuple(B.inters),
        combinations=combos,
        roles=roles,
        forward=forward,
        a=a,
        b=b,
    )


def verify_reduction(
    kind: str,
    n: int | None = None,
    a: int | None = None,
    b: int | None = None,
    identify: Mapping[str, str] | None = None,
) -> VerificationReport:
    """Check a reduction witness with exact arithmetic; failures are reported, not raised.

    ``identify`` restricts the generator checks to a slice of coefficient space,
    e.g. ``{"c4": "c3"}`` checks them modulo c4 = c3.
    """
    w = reduction_witness(kind, n, a, b)
    subject = w.reduced.label
    checks: list[CheckResult] = []
    target = w.change.target
    if identify:
        for src_name, dst in identify.items():
            if not (target.is_invertible(src_name) and target.is_invertible(dst)):
                raise ValueError("only coefficients can be identified")
        subject += " with " + ", ".join(f"{k} = {v}" for k, v in identify.items())
    for k, (gen, unit, inter) in enumerate(zip(w.bfz.generators, w.units, w.intermediates), start=1):
        lhs = w.change.apply(gen)
        rhs = unit * inter
        diff = lhs - rhs
        if identify:
            diff = diff.substitute({k: target.var(v) for k, v in identify.items()})
        checks.append(
            CheckResult(
                f"generator {k}: {gen} = ({unit}) * ({inter})",
                diff.is_zero(),
                "" if diff.is_zero() else f"difference {diff}",
            )
        )
    matched: list[int] = []
    for r, (combo, role) in enumerate(zip(w.combinations, w.roles), start=1):
        rel = MultiPoly.zero(target)
        for coeff, idx in combo:
            rel = rel + coeff * w.intermediates[idx]
        rel = w.change.eliminate(rel)
        if role is None:
            checks.append(CheckResult(f"relation {r} is eliminated", rel.is_zero(), "" if rel.is_zero() else str(rel)))
            continue
        expected = w.reduced.generators[role]
        try:
            got = rel.to_registry(w.reduced.registry)
            ok = got == expected
            detail = "" if ok else f"difference {got - expected}"
        except KeyError as exc:
            ok, detail = False, f"leftover variable: {exc}"
        matched.append(role)
        checks.append(CheckResult(f"relation {r} equals reduced generator {role + 1}", ok, detail))
    complete = sorted(matched) == list(range(len(w.reduced.generators)))
    checks.append(CheckResult("every reduced generator is produced once", complete))
    return VerificationReport(subject, tuple(checks))


# ---------------------------------------------------------------------------
# Generic versus principal coefficients
# ---------------------------------------------------------------------------


def gen_to_prin_witness(s: LabeledSeed) -> VariableChange:
    """Substitution y_k -> t_k^{-1} y_k, c_k -> t_k^{-1} s_k from the principal to the generic chart."""
    if not is_acyclic(s.matrix):
        raise NotAcyclicError("the comparison needs an acyclic seed")
    prin = bfz_presentation(with_principal_coefficients(s))
    gen = bfz_presentation(with_generic_coefficients(s))
    T = gen.registry
    mapping = {}
    for k in range(1, s.n + 1):
        y = exchanged_name(s.vars[k - 1])
        t = T.var(f"t{k}")
        mapping[y] = t.inverse() * T.var(y)
        mapping[f"c{k}"] = t.inverse() * T.var(f"s{k}")
    return VariableChange(prin.registry, T, mapping)


def verify_gen_to_prin(s: LabeledSeed) -> VerificationReport:
    change = gen_to_prin_witness(s)
    prin = bfz_presentation(with_principal_coefficients(s))
    gen = bfz_presentation(with_generic_coefficients(s))
    trivial = bfz_presentation(s)
    T = gen.registry
    checks = []
    for k, (pg, gg) in enumerate(zip(prin.generators, gen.generators), start=1):
        t = T.var(f"t{k}")
        diff = gg - t * change.apply(pg)
        checks.append(CheckResult(f"generic relation {k} = t{k} * principal relation {k}", diff.is_zero(), str(diff)))
    ones = {name: MultiPoly.one(trivial.registry) for k in range(1, s.n + 1) for name in (f"s{k}", f"t{k}")}
    for k, (gg, tg) in enumerate(zip(gen.generators, trivial.generators), start=1):
        spec = gg.substitute(ones, trivial.registry)
        checks.append(CheckResult(f"s = t = 1 turns generic relation {k} into the trivial one", spec == tg))
    return VerificationReport("generic-to-principal", tuple(checks))
