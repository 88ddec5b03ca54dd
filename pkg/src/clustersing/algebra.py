"""Exact sparse multivariate Laurent polynomials and prime-field scalars.

Polynomials live over a :class:`VarRegistry`, an ordered list of variable
names with a per-variable invertibility flag.  Terms are stored as a map from
dense exponent tuples to Python integers, so arithmetic is exact.  Only
invertible variables may carry negative exponents.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence, Union

Exponent = tuple[int, ...]


class RegistryMismatchError(ValueError):
    """Raised when two polynomials over different registries are combined."""


class NonUnitImageError(ValueError):
    """Raised when an invertible variable is substituted by a non-unit."""


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Prime field scalars
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fp:
    """An element of the prime field F_p, stored as a reduced residue."""

    residue: int
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other: "Fp | int") -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        return NotImplemented

    def __add__(self, other: "Fp | int") -> "Fp":
        o = self._coerce(other)
        return Fp(self.residue + o.residue, self.p)

    __radd__ = __add__

    def __sub__(self, other: "Fp | int") -> "Fp":
        o = self._coerce(other)
        return Fp(self.residue - o.residue, self.p)

    def __rsub__(self, other: int) -> "Fp":
        return self._coerce(other) - self

    def __mul__(self, other: "Fp | int") -> "Fp":
        o = self._coerce(other)
        return Fp(self.residue * o.residue, self.p)

    __rmul__ = __mul__

    def __neg__(self) -> "Fp":
        return Fp(-self.residue, self.p)

    def inverse(self) -> "Fp":
        if self.residue == 0:
            raise ZeroDivisionError(f"0 has no inverse in F_{self.p}")
        return Fp(pow(self.residue, -1, self.p), self.p)

    def __truediv__(self, other: "Fp | int") -> "Fp":
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int) -> "Fp":
        if e < 0:
            return self.inverse() ** (-e)
        return Fp(pow(self.residue, e, self.p), self.p)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Fp):
            return self.p == other.p and self.residue == other.residue
        if isinstance(other, int):
            return (other - self.residue) % self.p == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.residue, self.p))

    def __bool__(self) -> bool:
        return self.residue != 0

    def __int__(self) -> int:
        return self.residue

    def __repr__(self) -> str:
        return f"Fp({self.residue}, {self.p})"


class RootWitness(NamedTuple):
    """Answer of a root-existence predicate; truthy iff a root exists."""

    exists: bool
    root: Fp | None

    def __bool__(self) -> bool:
        return self.exists


def _kth_root(a: Fp, k: int) -> RootWitness:
    for r in range(a.p):
        if pow(r, k, a.p) == a.residue:
            return RootWitness(True, Fp(r, a.p))
    return RootWitness(False, None)


def is_square(a: Fp) -> RootWitness:
    """Exhaustive square-root search; the witness is the smallest residue."""
    return _kth_root(a, 2)


def has_cube_root(a: Fp) -> RootWitness:
    """Exhaustive cube-root search; the witness is the smallest residue."""
    return _kth_root(a, 3)


# ---------------------------------------------------------------------------
# Registries
# ---------------------------------------------------------------------------


class VarRegistry:
    """Ordered variable names with invertibility flags; immutable."""

    __slots__ = ("names", "invertible", "_index")

    def __init__(self, names: Sequence[str], invertible: Iterable[bool] | None = None):
        names = tuple(names)
        flags = tuple(bool(f) for f in invertible) if invertible is not None else (False,) * len(names)
        if len(flags) != len(names):
            raise ValueError("one invertibility flag per variable is required")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name in names:
            if not _NAME_RE.fullmatch(name):
                raise ValueError(f"invalid variable name {name!r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "invertible", flags)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, key, value):
        raise AttributeError("VarRegistry is immutable")

    @classmethod
    def build(cls, plain: Sequence[str] = (), units: Sequence[str] = ()) -> "VarRegistry":
        """Registry with the ``plain`` variables first, then the invertible ones."""
        return cls(tuple(plain) + tuple(units), [False] * len(plain) + [True] * len(units))

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def is_invertible(self, name: str) -> bool:
        return self.invertible[self.index(name)]

    @property
    def units(self) -> tuple[str, ...]:
        return tuple(n for n, f in zip(self.names, self.invertible) if f)

    @property
    def plain(self) -> tuple[str, ...]:
        return tuple(n for n, f in zip(self.names, self.invertible) if not f)

    def extend(self, names: Sequence[str], invertible: Iterable[bool] | None = None) -> "VarRegistry":
        flags = tuple(invertible) if invertible is not None else (False,) * len(names)
        return VarRegistry(self.names + tuple(names), self.invertible + tuple(flags))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VarRegistry):
            return NotImplemented
        return self.names == other.names and self.invertible == other.invertible

    def __hash__(self) -> int:
        return hash((self.names, self.invertible))

    def __repr__(self) -> str:
        marks = ", ".join(n + ("*" if f else "") for n, f in zip(self.names, self.invertible))
        return f"VarRegistry({marks})"

    # convenience constructors for elements
    def var(self, name: str) -> "MultiPoly":
        return MultiPoly.var(self, name)

    def vars(self, *names: str) -> list["MultiPoly"]:
        return [MultiPoly.var(self, n) for n in names]

    def const(self, c: int) -> "MultiPoly":
        return MultiPoly.constant(self, c)


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*'*")

Scalar = Union[int, "Fp"]


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse Laurent polynomial with integer coefficients.

    Equality is structural: same registry and same term map.  Instances are
    immutable and hashable.
    """

    __slots__ = ("registry", "_terms", "_hash")

    def __init__(self, registry: VarRegistry, terms: Mapping[Exponent, int] | None = None):
        clean: dict[Exponent, int] = {}
        nv = len(registry)
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nv:
                raise ValueError(f"exponent vector {exps} does not match {nv} variables")
            if coeff == 0:
                continue
            for e, inv, name in zip(exps, registry.invertible, registry.names):
                if e < 0 and not inv:
                    raise ValueError(f"negative exponent on non-invertible variable {name}")
            clean[exps] = clean.get(exps, 0) + int(coeff)
        object.__setattr__(self, "registry", registry)
        object.__setattr__(self, "_terms", {k: v for k, v in clean.items() if v != 0})
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, registry: VarRegistry, terms: dict[Exponent, int]) -> "MultiPoly":
        # trusted fast path: terms already canonical
        obj = object.__new__(cls)
        object.__setattr__(obj, "registry", registry)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, key, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, registry: VarRegistry) -> "MultiPoly":
        return cls._raw(registry, {})

    @classmethod
    def constant(cls, registry: VarRegistry, c: int) -> "MultiPoly":
        return cls._raw(registry, {(0,) * len(registry): int(c)} if c else {})

    @classmethod
    def one(cls, registry: VarRegistry) -> "MultiPoly":
        return cls.constant(registry, 1)

    @classmethod
    def var(cls, registry: VarRegistry, name: str) -> "MultiPoly":
        exps = [0] * len(registry)
        exps[registry.index(name)] = 1
        return cls._raw(registry, {tuple(exps): 1})

    @classmethod
    def monomial(cls, registry: VarRegistry, powers: Mapping[str, int], coeff: int = 1) -> "MultiPoly":
        exps = [0] * len(registry)
        for name, e in powers.items():
            exps[registry.index(name)] += e
        return cls(registry, {tuple(exps): coeff})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * len(self.registry), 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit_monomial(self) -> bool:
        """True iff the polynomial is +-1 times a monomial in invertible variables."""
        if len(self._terms) != 1:
            return False
        (exps, coeff), = self._terms.items()
        if coeff not in (1, -1):
            return False
        return all(e == 0 or inv for e, inv in zip(exps, self.registry.invertible))

    def variables(self) -> tuple[str, ...]:
        """Names of the variables that occur with a nonzero exponent."""
        used = [False] * len(self.registry)
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(n for n, u in zip(self.registry.names, used) if u)

    def degree(self, name: str | None = None) -> int:
        """Total degree (or degree in ``name``); ``-1`` for the zero polynomial."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        i = self.registry.index(name)
        return max(e[i] for e in self._terms)

    def homogeneous_part(self, max_degree: int) -> "MultiPoly":
        """Terms whose total degree in the non-invertible variables is at most ``max_degree``."""
        inv = self.registry.invertible
        keep = {
            k: v
            for k, v in self._terms.items()
            if sum(e for e, f in zip(k, inv) if not f) <= max_degree
        }
        return MultiPoly._raw(self.registry, keep)

    def coefficients(self) -> list[int]:
        return list(self._terms.values())

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.registry != other.registry:
            raise RegistryMismatchError(f"{self.registry!r} vs {other.registry!r}")

    def _lift(self, other: "MultiPoly | int") -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return MultiPoly.constant(self.registry, other)
        return NotImplemented

    def __add__(self, other: "MultiPoly | int") -> "MultiPoly":
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for k, v in o._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return MultiPoly._raw(self.registry, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.registry, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "MultiPoly | int") -> "MultiPoly":
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: int) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other: "MultiPoly | int") -> "MultiPoly":
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        out: dict[Exponent, int] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in o._terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                s = out.get(k, 0) + v1 * v2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return MultiPoly._raw(self.registry, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MultiPoly":
        if e < 0:
            return self.inverse() ** (-e)
        result = MultiPoly.one(self.registry)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "MultiPoly":
        """Inverse of a unit monomial; any other input raises."""
        if not self.is_unit_monomial():
            raise NonUnitImageError(f"{self} is not a unit monomial")
        (exps, coeff), = self._terms.items()
        return MultiPoly._raw(self.registry, {tuple(-e for e in exps): coeff})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            return self._terms == ({(0,) * len(self.registry): other} if other else {})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.registry == other.registry and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.registry, frozenset(self._terms.items()))))
        return self._hash

    # -- calculus and substitution ----------------------------------------

    def partial(self, name: str) -> "MultiPoly":
        """Formal partial derivative; negative exponents follow the power rule."""
        i = self.registry.index(name)
        out: dict[Exponent, int] = {}
        for k, v in self._terms.items():
            e = k[i]
            if e == 0:
                continue
            nk = k[:i] + (e - 1,) + k[i + 1 :]
            out[nk] = out.get(nk, 0) + v * e
        return MultiPoly._raw(self.registry, {k: v for k, v in out.items() if v})

    def substitute(
        self,
        mapping: Mapping[str, "MultiPoly"],
        target: VarRegistry | None = None,
    ) -> "MultiPoly":
        """Simultaneously replace variables by polynomials over ``target``.

        Variables missing from ``mapping`` go to the same-named variable of
        ``target`` (which defaults to this polynomial's registry).  Invertible
        variables must map to unit monomials.
        """
        target = target or self.registry
        reg = self.registry
        images: list[MultiPoly | None] = []
        for i, name in enumerate(reg.names):
            img = mapping.get(name)
            if img is None:
                if name in target:
                    img = MultiPoly.var(target, name)
                    if reg.invertible[i] and not target.invertible[target.index(name)]:
                        raise NonUnitImageError(f"{name} is invertible but not in the target")
                else:
                    img = None
            else:
                if img.registry != target:
                    raise RegistryMismatchError(f"image of {name} lives over {img.registry!r}")
                if reg.invertible[i] and not img.is_unit_monomial():
                    raise NonUnitImageError(f"image of invertible {name} is {img}, not a unit monomial")
            images.append(img)

        power_cache: dict[tuple[int, int], MultiPoly] = {}

        def power(i: int, e: int) -> MultiPoly:
            key = (i, e)
            if key not in power_cache:
                img = images[i]
                if img is None:
                    raise KeyError(f"variable {reg.names[i]!r} has no image in {target!r}")
                power_cache[key] = img ** e
            return power_cache[key]

        result = MultiPoly.zero(target)
        for k, v in self._terms.items():
            term = MultiPoly.constant(target, v)
            for i, e in enumerate(k):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def rename(self, renaming: Mapping[str, str], target: VarRegistry) -> "MultiPoly":
        return self.substitute({a: MultiPoly.var(target, b) for a, b in renaming.items()}, target)

    def to_registry(self, target: VarRegistry) -> "MultiPoly":
        """Re-embed by variable name; fails if a used variable is missing."""
        out: dict[Exponent, int] = {}
        idx = []
        for name in self.registry.names:
            idx.append(target.index(name) if name in target else None)
        for k, v in self._terms.items():
            nk = [0] * len(target)
            for i, e in enumerate(k):
                if e:
                    j = idx[i]
                    if j is None:
                        raise KeyError(f"variable {self.registry.names[i]!r} missing from target")
                    nk[j] = e
            out[tuple(nk)] = v
        return MultiPoly(target, out)

    # -- evaluation over F_p ------------------------------------------------

    def evaluate(self, point: Mapping[str, Scalar], p: int | None = None) -> Fp:
        """Value at ``point`` in F_p; every occurring variable must be assigned."""
        if p is None:
            fps = [v for v in point.values() if isinstance(v, Fp)]
            if not fps:
                raise ValueError("prime not given and no F_p value in the point")
            p = fps[0].p
        reg = self.registry
        vals: list[Fp | None] = []
        for name, inv in zip(reg.names, reg.invertible):
            if name in point:
                v = point[name]
                v = v if isinstance(v, Fp) else Fp(int(v), p)
                if v.p != p:
                    raise ValueError(f"value of {name} lives in F_{v.p}, expected F_{p}")
                if inv and not v:
                    raise ZeroDivisionError(f"invertible variable {name} assigned 0")
                vals.append(v)
            else:
                vals.append(None)
        total = 0
        for k, c in self._terms.items():
            t = c % p
            for i, e in enumerate(k):
                if e:
                    v = vals[i]
                    if v is None:
                        raise KeyError(f"missing assignment for {reg.names[i]!r}")
                    t = t * pow(v.residue, e, p) % p
            total += t
        return Fp(total, p)

    def specialize(self, values: Mapping[str, int], p: int) -> "MultiPoly":
        """Substitute residues for some variables and reduce coefficients into [0, p).

        The result stays over the same registry; specialized variables no longer occur.
        """
        reg = self.registry
        fixed = {reg.index(n): int(v) % p for n, v in values.items() if n in reg}
        for i, v in fixed.items():
            if reg.invertible[i] and v == 0:
                raise ZeroDivisionError(f"invertible variable {reg.names[i]} assigned 0")
        out: dict[Exponent, int] = {}
        for k, c in self._terms.items():
            c %= p
            nk = list(k)
            for i, v in fixed.items():
                e = k[i]
                if e:
                    c = c * pow(v, e, p) % p
                    nk[i] = 0
            if c:
                key = tuple(nk)
                out[key] = (out.get(key, 0) + c) % p
        return MultiPoly._raw(reg, {k: v for k, v in out.items() if v})

    def is_zero_mod(self, p: int) -> bool:
        return all(v % p == 0 for v in self._terms.values())

    # -- text form ----------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponent, int]]:
        return sorted(self._terms.items(), key=lambda kv: kv[0], reverse=True)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = self.registry.names
        pieces: list[str] = []
        for exps, coeff in self.sorted_terms():
            factors = []
            for n, e in zip(names, exps):
                if e == 1:
                    factors.append(n)
                elif e:
                    factors.append(f"{n}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            sign = "-" if coeff < 0 else "+"
            if not pieces:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f"{sign} {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    @classmethod
    def parse(cls, text: str, registry: VarRegistry) -> "MultiPoly":
        """Inverse of ``str``: parse the stable text form over ``registry``."""
        text = text.strip()
        if text == "0":
            return cls.zero(registry)
        if not text.startswith("-"):
            text = "+ " + text
        else:
            text = "- " + text[1:]
        chunks = re.findall(r"([+-])\s*([^+\-\s][^\s]*|\d+)", text)
        result = cls.zero(registry)
        for sign, body in chunks:
            coeff = 1
            powers: dict[str, int] = {}
            for factor in body.split("*"):
                if re.fullmatch(r"\d+", factor):
                    coeff *= int(factor)
                    continue
                if "^" in factor:
                    name, e = factor.split("^", 1)
                    powers[name] = powers.get(name, 0) + int(e)
                else:
                    powers[factor] = powers.get(factor, 0) + 1
            result = result + cls.monomial(registry, powers, coeff if sign == "+" else -coeff)
        return result
