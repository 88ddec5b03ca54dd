"""Singularity verdicts for fibers of the principal-coefficient families.

Every report lives in the chart of ``reduced_presentation``: locus equations,
points and local equations are polynomials over that registry, with the
coefficient variables either kept symbolic or replaced by residues.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterable, Mapping, Sequence

from .algebra import Fp, MultiPoly, VarRegistry, has_cube_root, is_prime, is_square
from .presentations import (
    Presentation,
    continuant,
    family_rank,
    lambda_term,
    lambda_value,
    normalize_family,
    reduced_presentation,
)


@dataclass(frozen=True)
class CoefficientPoint:
    """A closed point of the coefficient torus over F_p."""

    p: int
    eta: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        eta = tuple(int(e) % self.p for e in self.eta)
        if any(e == 0 for e in eta):
            raise ValueError(f"coefficient point {tuple(self.eta)} has an entry divisible by {self.p}")
        object.__setattr__(self, "eta", eta)

    @property
    def n(self) -> int:
        return len(self.eta)

    def c(self, i: int) -> Fp:
        return Fp(self.eta[i - 1], self.p)

    def values(self, prefix: str = "c") -> dict[str, int]:
        return {f"{prefix}{i}": e for i, e in enumerate(self.eta, start=1)}

    def lam(self, k: int) -> Fp:
        return lambda_value(k, self.eta, self.p)


def coefficient_torus(n: int, p: int) -> Iterable[CoefficientPoint]:
    """All points of (F_p^x)^n in lexicographic order."""
    for eta in product(range(1, p), repeat=n):
        yield CoefficientPoint(p, eta)


class Verdict(str, Enum):
    REGULAR = "Regular"
    ISOLATED = "IsolatedHypersurface"
    TWO_LINES = "TwoLines"
    FOUR_PLANES = "FourPlanes"
    TWO_SURFACES = "TwoSurfaces"
    D_COMPONENTS = "DComponents"
    E7_SURFACE = "E7Surface"
    RANK_TWO = "RankTwo"
    C_SPECIAL = "CSpecial"


@dataclass(frozen=True)
class LocusComponent:
    """One component of the singular locus, cut out by ``equations`` on the fiber."""

    name: str
    equations: tuple[MultiPoly, ...]
    dimension: int
    local_type: str | None = None
    rational_count: int | None = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "equations": [str(e) for e in self.equations],
            "dimension": self.dimension,
            "local_type": self.local_type,
            "rational_count": self.rational_count,
        }


@dataclass(frozen=True)
class SingularityReport:
    kind: str
    n: int
    p: int
    eta: tuple[int, ...]
    verdict: Verdict
    presentation: Presentation
    components: tuple[LocusComponent, ...] = ()
    singularity_type: str | None = None
    point: Mapping[str, int] | None = None
    case: str | None = None
    stratum: str | None = None
    local_equation: MultiPoly | None = None
    local_variables: tuple[str, ...] = ()
    elimination: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    a: int | None = None
    b: int | None = None

    @property
    def singular(self) -> bool:
        return self.verdict is not Verdict.REGULAR

    @property
    def locus_equations(self) -> list[list[MultiPoly]]:
        """The singular locus as a union: one equation list per component."""
        return [list(c.equations) for c in self.components]

    def coefficient_values(self) -> dict[str, int]:
        return {f"c{i}": e for i, e in enumerate(self.eta, start=1)}

    def summary(self) -> str:
        v = self.verdict
        if v is Verdict.REGULAR:
            return "regular"
        if v is Verdict.ISOLATED:
            where = "origin" if self.point is not None and not any(self.point.values()) else _point_text(self.point)
            return f"isolated {self.singularity_type} at {where}"
        if v is Verdict.TWO_LINES:
            return "two lines crossing at origin"
        if v is Verdict.FOUR_PLANES:
            return "union of four planes"
        if v is Verdict.TWO_SURFACES:
            return "union of two surfaces"
        if v is Verdict.D_COMPONENTS:
            return f"case ({self.case}) with components " + ", ".join(c.name for c in self.components)
        if v is Verdict.E7_SURFACE:
            return "singular along a regular surface"
        if v is Verdict.C_SPECIAL:
            return f"case {self.case}: singular locus of dimension {self.components[0].dimension}"
        parts = [f"{c.name}: {c.local_type}, {c.rational_count} rational" for c in self.components]
        return "; ".join(parts)

    def to_json(self) -> dict:
        return {
            "type": self.kind,
            "n": self.n,
            "p": self.p,
            "eta": list(self.eta),
            "a": self.a,
            "b": self.b,
            "verdict": self.verdict.value,
            "summary": self.summary(),
            "singularity_type": self.singularity_type,
            "point": dict(self.point) if self.point is not None else None,
            "case": self.case,
            "stratum": self.stratum,
            "locus": [[str(e) for e in comp] for comp in self.locus_equations],
            "components": [c.to_json() for c in self.components],
            "chart": list(self.presentation.ambient),
            "local_equation": str(self.local_equation) if self.local_equation is not None else None,
            "local_variables": list(self.local_variables),
            "elimination": list(self.elimination),
            "notes": list(self.notes),
        }


def _point_text(point: Mapping[str, int] | None) -> str:
    if point is None:
        return "?"
    return "(" + ", ".join(f"{k}={v}" for k, v in point.items()) + ")"


# ---------------------------------------------------------------------------
# Small helpers
# ---------------------------------------------------------------------------


def _sign(m: int) -> int:
    return -1 if m % 2 else 1


def _point_component(reg: VarRegistry, point: Mapping[str, int], local_type: str) -> LocusComponent:
    eqs = tuple(reg.var(v) - val for v, val in point.items())
    return LocusComponent("point", eqs, 0, local_type, 1)


def _origin(reg: VarRegistry) -> dict[str, int]:
    return {v: 0 for v in reg.plain}


def _check_point(pt: CoefficientPoint, n: int) -> None:
    if pt.n != n:
        raise ValueError(f"expected {n} coefficients, got {pt.n}")


def _report(kind: str, n: int, pt: CoefficientPoint, pres: Presentation, verdict: Verdict, **kw) -> SingularityReport:
    return SingularityReport(kind=kind, n=n, p=pt.p, eta=pt.eta, verdict=verdict, presentation=pres, **kw)


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------


def classify_A(n: int, pt: CoefficientPoint) -> SingularityReport:
    family_rank("A", n)
    _check_point(pt, n)
    pres = reduced_presentation("A", n)
    reg = pres.registry
    if n == 1:
        if pt.c(1) == -1:
            comp = LocusComponent("crossing", (reg.var("x1"), reg.var("y1")), 0, "A1", 1)
            return _report("A", n, pt, pres, Verdict.TWO_LINES, components=(comp,), singularity_type="A1",
                           point={"x1": 0, "y1": 0}, stratum="S1")
        return _report("A", n, pt, pres, Verdict.REGULAR, stratum="S2")
    if n % 2 == 0:
        return _report("A", n, pt, pres, Verdict.REGULAR, stratum="S1")
    m = (n + 1) // 2
    if pt.lam(n) == _sign(m):
        point = _origin(reg)
        return _report(
            "A", n, pt, pres, Verdict.ISOLATED,
            components=(_point_component(reg, point, "A1"),),
            singularity_type="A1", point=point, stratum="S1",
            local_equation=pres.generators[0], local_variables=reg.plain,
        )
    return _report("A", n, pt, pres, Verdict.REGULAR, stratum="S2")


def classify_B(n: int, pt: CoefficientPoint) -> SingularityReport:
    family_rank("B", n)
    _check_point(pt, n)
    pres = reduced_presentation("B", n)
    reg = pres.registry
    local_vars = tuple(f"z{i}" for i in range(1, n)) + ("u1", "u2")
    chain = ("u3 solved from the first generator: its u3-coefficient u1*u2 - lambda_n is a unit at the point",)
    if n % 2 == 1:
        m = (n - 1) // 2
        if pt.lam(n) == _sign(m + 1):
            point = _origin(reg)
            return _report(
                "B", n, pt, pres, Verdict.ISOLATED,
                components=(_point_component(reg, point, "A1"),),
                singularity_type="A1", point=point, stratum="S1",
                local_equation=pres.generators[1], local_variables=local_vars, elimination=chain,
            )
        return _report("B", n, pt, pres, Verdict.REGULAR, stratum="S2")
    if pt.p == 2:
        root = is_square(pt.lam(n - 1))
        if root:
            rho = root.root
            point = {v: 0 for v in reg.plain}
            point["u1"] = rho.residue
            point["u2"] = (rho.inverse() * pt.lam(n)).residue
            return _report(
                "B", n, pt, pres, Verdict.ISOLATED,
                components=(_point_component(reg, point, "A1"),),
                singularity_type="A1", point=point, stratum="S1",
                local_equation=pres.generators[1], local_variables=local_vars, elimination=chain,
                notes=(f"square root of lambda_{n - 1}: {rho.residue}",),
            )
        return _report("B", n, pt, pres, Verdict.REGULAR, stratum="S2")
    return _report("B", n, pt, pres, Verdict.REGULAR, stratum="S1")


def classify_C(n: int, pt: CoefficientPoint) -> SingularityReport:
    family_rank("C", n)
    _check_point(pt, n)
    pres = reduced_presentation("C", n)
    reg = pres.registry
    if pt.p != 2:
        if n % 2 == 0:
            return _report("C", n, pt, pres, Verdict.REGULAR, stratum="S1")
        mu = -(pt.lam(n - 2) * pt.lam(n))
        if mu == 1:
            point = _origin(reg)
            return _report(
                "C", n, pt, pres, Verdict.ISOLATED,
                components=(_point_component(reg, point, "A1"),),
                singularity_type="A1", point=point, stratum="S1",
                local_equation=pres.generators[0], local_variables=reg.plain,
            )
        return _report("C", n, pt, pres, Verdict.REGULAR, stratum="S2")
    root = is_square(-pt.c(n).inverse())
    if not root:
        return _report("C", n, pt, pres, Verdict.REGULAR, stratum="S3" if n % 2 else "S2")
    delta = root.root
    rho = delta * pt.lam(n - 2)
    z = [reg.var(f"z{i}") for i in range(1, n + 1)]
    eqs = (reg.var(f"z{n + 1}"), continuant(n, z), continuant(n - 1, z) + rho.residue)
    special = (n - 1) % 2 == 0 and rho == 1
    case = "2b" if special else "2c"
    comp = LocusComponent("D", eqs, n - 2, "A1 cylinder" if not special else "singular at one point", None)
    stratum = "S1" if special or n % 2 == 0 else "S2"
    return _report(
        "C", n, pt, pres, Verdict.C_SPECIAL, components=(comp,), case=case, stratum=stratum,
        notes=(f"delta = {delta.residue}, rho = {rho.residue}",),
    )


def _d_components(n: int, reg: VarRegistry, which: Sequence[int]) -> tuple[LocusComponent, ...]:
    z = [reg.var(f"z{i}") for i in range(1, n - 1)]
    u = {i: reg.var(f"u{i}") for i in range(1, 5)}
    out = []
    for i in which:
        if i == 0:
            eqs = tuple(u.values()) + (continuant(n - 2, z) + lambda_term(n - 1, reg),)
            out.append(LocusComponent("Y0", eqs, n - 3, None))
        else:
            eqs = tuple(z) + tuple(u[j] for j in range(1, 5) if j != i)
            out.append(LocusComponent(f"Y{i}", eqs, 1, None))
    return tuple(out)


def classify_D(n: int, pt: CoefficientPoint) -> SingularityReport:
    family_rank("D", n)
    _check_point(pt, n)
    pres = reduced_presentation("D", n)
    reg = pres.registry
    if n == 4 and pt.lam(3) == 1:
        case, which, stratum = "a", (0, 1, 2, 3, 4), "S1"
    elif n > 4 and n % 2 == 0 and pt.lam(n - 1) == _sign((n - 2) // 2 + 1):
        case, which, stratum = "b", (0, 1, 2, 3, 4), "S1"
    else:
        case, which = "c", (0,)
        stratum = "S2" if n % 2 == 0 else "S1"
    return _report(
        "D", n, pt, pres, Verdict.D_COMPONENTS, components=_d_components(n, reg, which), case=case, stratum=stratum,
    )


def classify_E(n: int, pt: CoefficientPoint) -> SingularityReport:
    family_rank("E", n)
    _check_point(pt, n)
    pres = reduced_presentation("E", n)
    reg = pres.registry
    if (n - 3) % 2 == 1:
        return _report("E", n, pt, pres, Verdict.REGULAR, stratum="S1")
    m = (n - 3) // 2
    if pt.lam(n - 2) != _sign(m + 1):
        return _report("E", n, pt, pres, Verdict.REGULAR, stratum="S2")
    u1, u2, u3, u4, u5 = (reg.var(f"u{i}") for i in range(1, 6))
    eqs = tuple(reg.var(f"z{i}") for i in range(1, n - 1)) + (
        u3,
        u4,
        continuant(3, [u1, u2, u5]) + lambda_term(n - 2, reg),
    )
    comp = LocusComponent("Y", eqs, 2, f"A1 cylinder over dimension {n - 2}")
    return _report("E", n, pt, pres, Verdict.E7_SURFACE, components=(comp,), stratum="S1")


def classify_F4(pt: CoefficientPoint) -> SingularityReport:
    _check_point(pt, 4)
    return _report("F4", 4, pt, reduced_presentation("F4"), Verdict.REGULAR, stratum="S1")


def classify_G2(pt: CoefficientPoint) -> SingularityReport:
    _check_point(pt, 2)
    pres = reduced_presentation("G2")
    reg = pres.registry
    if pt.p != 3:
        return _report("G2", 2, pt, pres, Verdict.REGULAR, stratum="S1")
    root = has_cube_root(pt.c(1))
    if not root:
        return _report("G2", 2, pt, pres, Verdict.REGULAR, stratum="S2")
    delta = root.root
    point = {"x": (-delta).residue, "y": 0, "z": (-delta.inverse()).residue}
    comp = _point_component(reg, point, "A2")
    return _report(
        "G2", 2, pt, pres, Verdict.ISOLATED, components=(comp,), singularity_type="A2", point=point,
        stratum="S1", notes=(f"cube root of c1: {delta.residue}",),
    )


def g2_local_identity(delta: int) -> bool:
    """In characteristic 3 with c1 = delta^3: x*y*z - y - c1 - x^3 = y*(x*z - 1) - (x + delta)^3."""
    reg = reduced_presentation("G2").registry
    x, y, z = reg.vars("x", "y", "z")
    f = reduced_presentation("G2").generators[0]
    model = y * (x * z - 1) - (x + delta) ** 3
    return (f - model).specialize({"c1": delta**3 % 3}, 3).is_zero_mod(3)


def _prime_power_split(value: int, p: int) -> tuple[int, int]:
    """|value| = alpha * p^m with p not dividing alpha."""
    v, m = abs(value), 0
    while v and v % p == 0:
        v //= p
        m += 1
    return v, m


def classify_rank2(a: int, b: int, pt: CoefficientPoint) -> SingularityReport:
    family_rank("rank2", a=a, b=b)
    _check_point(pt, 2)
    pres = reduced_presentation("rank2", a=a, b=b)
    reg = pres.registry
    x1, x2, y1, y2, c1, c2 = reg.vars("x1", "x2", "y1", "y2", "c1", "c2")
    p = pt.p
    if a == 0:
        comps = []
        if pt.c(1) == -1:
            comps.append(LocusComponent("C1", (x1, y1, x2 * y2 - c2 - 1), 1, "A1 cylinder"))
        if pt.c(2) == -1:
            comps.append(LocusComponent("C2", (x2, y2, x1 * y1 - c1 - 1), 1, "A1 cylinder"))
        verdict = {0: Verdict.REGULAR, 1: Verdict.TWO_SURFACES, 2: Verdict.FOUR_PLANES}[len(comps)]
        stratum = "S" + str(1 + (pt.c(1) != -1) * 2 + (pt.c(2) != -1))
        return _report("rank2", 2, pt, pres, verdict, components=tuple(comps), stratum=stratum, a=a, b=b)
    A, B = abs(a), abs(b)
    comps = []
    if A % p == 0:
        _, m = _prime_power_split(A, p)
        count = sum(1 for x in range(p) if (pow(x, A, p) + pt.eta[1]) % p == 0)
        comps.append(LocusComponent("Ya", (x1**A + c2, x2, x1 * y1 - c1, y2), 0, f"A{p**m - 1}", count))
    if B % p == 0:
        _, m = _prime_power_split(B, p)
        count = sum(1 for x in range(p) if (pow(x, B, p) + pt.eta[0]) % p == 0)
        comps.append(LocusComponent("Yb", (x1, x2**B + c1, y1, x2 * y2 - c2), 0, f"A{p**m - 1}", count))
    verdict = Verdict.RANK_TWO if comps else Verdict.REGULAR
    return _report("rank2", 2, pt, pres, verdict, components=tuple(comps), stratum="S1", a=a, b=b)


def classify(
    kind: str,
    n: int | None,
    pt: CoefficientPoint,
    a: int | None = None,
    b: int | None = None,
) -> SingularityReport:
    kind = normalize_family(kind)
    n = family_rank(kind, n, a, b)
    if kind == "A":
        return classify_A(n, pt)
    if kind == "B":
        return classify_B(n, pt)
    if kind == "C":
        return classify_C(n, pt)
    if kind == "D":
        return classify_D(n, pt)
    if kind == "E":
        return classify_E(n, pt)
    if kind == "F4":
        return classify_F4(pt)
    if kind == "G2":
        return classify_G2(pt)
    return classify_rank2(a, b, pt)


# ---------------------------------------------------------------------------
# Stratifications
# ---------------------------------------------------------------------------


def _eval_coeffs(poly: MultiPoly, eta: Sequence[int], p: int) -> Fp:
    return poly.evaluate({f"c{i}": Fp(e, p) for i, e in enumerate(eta, start=1)}, p)


@dataclass(frozen=True)
class Vanishes:
    poly: MultiPoly

    def holds(self, eta: Sequence[int], p: int) -> bool:
        return _eval_coeffs(self.poly, eta, p) == 0

    def __str__(self) -> str:
        return f"{self.poly} = 0"


@dataclass(frozen=True)
class NotVanishes:
    poly: MultiPoly

    def holds(self, eta: Sequence[int], p: int) -> bool:
        return _eval_coeffs(self.poly, eta, p) != 0

    def __str__(self) -> str:
        return f"{self.poly} != 0"


@dataclass(frozen=True)
class IsSquare:
    poly: MultiPoly

    def holds(self, eta: Sequence[int], p: int) -> bool:
        return bool(is_square(_eval_coeffs(self.poly, eta, p)))

    def __str__(self) -> str:
        return f"is_square({self.poly})"


@dataclass(frozen=True)
class NotSquare:
    poly: MultiPoly

    def holds(self, eta: Sequence[int], p: int) -> bool:
        return not is_square(_eval_coeffs(self.poly, eta, p))

    def __str__(self) -> str:
        return f"not is_square({self.poly})"


@dataclass(frozen=True)
class IsCube:
    poly: MultiPoly

    def holds(self, eta: Sequence[int], p: int) -> bool:
        return bool(has_cube_root(_eval_coeffs(self.poly, eta, p)))

    def __str__(self) -> str:
        return f"has_cube_root({self.poly})"


@dataclass(frozen=True)
class NotCube:
    poly: MultiPoly

    def holds(self, eta: Sequence[int], p: int) -> bool:
        return not has_cube_root(_eval_coeffs(self.poly, eta, p))

    def __str__(self) -> str:
        return f"not has_cube_root({self.poly})"


Condition = Vanishes | NotVanishes | IsSquare | NotSquare | IsCube | NotCube


@dataclass(frozen=True)
class StratumDescriptor:
    name: str
    conditions: tuple[Condition, ...]
    verdict: Verdict
    singularity_type: str | None = None
    case: str | None = None

    def contains(self, eta: Sequence[int], p: int) -> bool:
        return all(c.holds(eta, p) for c in self.conditions)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "conditions": [str(c) for c in self.conditions] or ["true"],
            "verdict": self.verdict.value,
            "singularity_type": self.singularity_type,
            "case": self.case,
        }


def _split(poly: MultiPoly, singular: StratumDescriptor) -> list[StratumDescriptor]:
    """The given stratum on V(poly) and a Regular stratum on its complement."""
    return [singular, StratumDescriptor("S2", (NotVanishes(poly),), Verdict.REGULAR)]


def stratify(
    kind: str,
    n: int | None,
    p: int,
    a: int | None = None,
    b: int | None = None,
) -> list[StratumDescriptor]:
    """Strata of the coefficient torus over F_p along which the verdict is constant."""
    kind = normalize_family(kind)
    n = family_rank(kind, n, a, b)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    reg = VarRegistry.build((), [f"c{i}" for i in range(1, n + 1)])
    lam = lambda k: lambda_term(k, reg)  # noqa: E731
    c = lambda i: reg.var(f"c{i}")  # noqa: E731
    regular = [StratumDescriptor("S1", (), Verdict.REGULAR)]

    if kind == "A":
        if n == 1:
            f = c(1) + 1
            return _split(f, StratumDescriptor("S1", (Vanishes(f),), Verdict.TWO_LINES, "A1"))
        if n % 2 == 0:
            return regular
        f = lam(n) - _sign((n + 1) // 2)
        return _split(f, StratumDescriptor("S1", (Vanishes(f),), Verdict.ISOLATED, "A1"))
    if kind == "B":
        if n % 2 == 1:
            f = lam(n) - _sign((n - 1) // 2 + 1)
            return _split(f, StratumDescriptor("S1", (Vanishes(f),), Verdict.ISOLATED, "A1"))
        if p == 2:
            return [
                StratumDescriptor("S1", (IsSquare(lam(n - 1)),), Verdict.ISOLATED, "A1"),
                StratumDescriptor("S2", (NotSquare(lam(n - 1)),), Verdict.REGULAR),
            ]
        return regular
    if kind == "C":
        f = lam(n - 2) * lam(n) + 1
        if p != 2:
            if n % 2 == 0:
                return regular
            return _split(f, StratumDescriptor("S1", (Vanishes(f),), Verdict.ISOLATED, "A1"))
        sq, nsq = IsSquare(-c(n)), NotSquare(-c(n))
        if n % 2 == 0:
            return [
                StratumDescriptor("S1", (sq,), Verdict.C_SPECIAL, case="2c"),
                StratumDescriptor("S2", (nsq,), Verdict.REGULAR),
            ]
        return [
            StratumDescriptor("S1", (sq, Vanishes(f)), Verdict.C_SPECIAL, case="2b"),
            StratumDescriptor("S2", (sq, NotVanishes(f)), Verdict.C_SPECIAL, case="2c"),
            StratumDescriptor("S3", (nsq,), Verdict.REGULAR),
        ]
    if kind == "D":
        if n % 2 == 1:
            return [StratumDescriptor("S1", (), Verdict.D_COMPONENTS, case="c")]
        f = lam(3) - 1 if n == 4 else lam(n - 1) - _sign((n - 2) // 2 + 1)
        return [
            StratumDescriptor("S1", (Vanishes(f),), Verdict.D_COMPONENTS, case="a" if n == 4 else "b"),
            StratumDescriptor("S2", (NotVanishes(f),), Verdict.D_COMPONENTS, case="c"),
        ]
    if kind == "E":
        if (n - 3) % 2 == 1:
            return regular
        f = lam(n - 2) - _sign((n - 3) // 2 + 1)
        return _split(f, StratumDescriptor("S1", (Vanishes(f),), Verdict.E7_SURFACE))
    if kind == "F4":
        return regular
    if kind == "G2":
        if p != 3:
            return regular
        return [
            StratumDescriptor("S1", (IsCube(c(1)),), Verdict.ISOLATED, "A2"),
            StratumDescriptor("S2", (NotCube(c(1)),), Verdict.REGULAR),
        ]
    if a == 0:
        f1, f2 = c(1) + 1, c(2) + 1
        return [
            StratumDescriptor("S1", (Vanishes(f1), Vanishes(f2)), Verdict.FOUR_PLANES),
            StratumDescriptor("S2", (Vanishes(f1), NotVanishes(f2)), Verdict.TWO_SURFACES),
            StratumDescriptor("S3", (NotVanishes(f1), Vanishes(f2)), Verdict.TWO_SURFACES),
            StratumDescriptor("S4", (NotVanishes(f1), NotVanishes(f2)), Verdict.REGULAR),
        ]
    singular = a % p == 0 or b % p == 0
    return [StratumDescriptor("S1", (), Verdict.RANK_TWO if singular else Verdict.REGULAR)]


def locate_stratum(strata: Sequence[StratumDescriptor], pt: CoefficientPoint) -> StratumDescriptor:
    hits = [s for s in strata if s.contains(pt.eta, pt.p)]
    if len(hits) != 1:
        raise ValueError(f"{pt.eta} lies in {len(hits)} strata")
    return hits[0]
