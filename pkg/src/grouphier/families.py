"""Element types, multiplication laws and finite views for each group family.

Every non-abelian family here is a split or twisted extension of an abelian
"rotation" part by a single bit: an element is a pair ``(c, b)`` standing for
``c * t**b`` where ``t`` inverts every rotation. The law is

    (c1, b1)(c2, b2) = (c1 + (-1)**b1 * c2 [+ z if b1 = b2 = 1], b1 xor b2)

and the ``z`` term (the central involution, angle 1/2) appears only in the
quaternionic families, where ``t**2 = z``.

Truncations of locally finite groups are genuine subgroups; windows of the
infinite groups (D-infinity, Q-infinity) are finite vertex sets only and are
built with ``closed=False``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .algebra import (
    DEFAULT_FREE_RANK,
    HALF,
    INFINITE,
    ZERO,
    FiniteGroupView,
    RationalAngle,
    ToralParam,
    angle_add,
    angle_neg,
    is_dyadic,
    parse_toral,
    toral_inv,
    toral_mul,
    toral_order,
)
from .errors import BadParamError, FamilyMismatchError

# -- elements --


@dataclass(frozen=True, slots=True)
class CyclicElem:
    angle: RationalAngle

    def __str__(self):
        return f"c({self.angle})"


@dataclass(frozen=True, slots=True)
class DihedralElem:
    """``r**i s**flip`` in D_{2m}, with the rotation written as the angle i/m."""

    angle: RationalAngle
    flip: int = 0

    def __str__(self):
        return f"c({self.angle})*s" if self.flip else f"c({self.angle})"


@dataclass(frozen=True, slots=True)
class DicyclicElem:
    """``h**i x**jpart`` in Q_{4m}, with the rotation written as the angle i/(2m)."""

    angle: RationalAngle
    jpart: int = 0

    def __str__(self):
        return f"c({self.angle})*x" if self.jpart else f"c({self.angle})"


@dataclass(frozen=True, slots=True)
class LocallyDihedralElem:
    angle: RationalAngle
    flip: int = 0

    def __post_init__(self):
        if not is_dyadic(self.angle):
            raise BadParamError(f"non-dyadic angle {self.angle} in locally dihedral group")

    def __str__(self):
        return f"c({self.angle})*s" if self.flip else f"c({self.angle})"


@dataclass(frozen=True, slots=True)
class LocallyQuaternionElem:
    angle: RationalAngle
    jpart: int = 0

    def __post_init__(self):
        if not is_dyadic(self.angle):
            raise BadParamError(f"non-dyadic angle {self.angle} in locally quaternion group")

    def __str__(self):
        return f"c({self.angle})*x" if self.jpart else f"c({self.angle})"


@dataclass(frozen=True, slots=True)
class InfiniteDihedralElem:
    """``r**shift t**flip`` in D-infinity."""

    shift: int
    flip: int = 0

    def __str__(self):
        return f"r({self.shift})*t" if self.flip else f"r({self.shift})"


@dataclass(frozen=True, slots=True)
class InfiniteQuaternionElem:
    """``x_a j**jpart`` in Q-infinity, with ``a`` a :class:`ToralParam`."""

    param: ToralParam
    jpart: int = 0

    def __str__(self):
        body = f"c({self.param})"
        return body + "*j" if self.jpart else body


@dataclass(frozen=True, slots=True)
class ProductElem:
    left: "GroupElement"
    right: "GroupElement"

    def __str__(self):
        return f"({self.left},{self.right})"


GroupElement = Union[
    CyclicElem,
    DihedralElem,
    DicyclicElem,
    LocallyDihedralElem,
    LocallyQuaternionElem,
    InfiniteDihedralElem,
    InfiniteQuaternionElem,
    ProductElem,
]

DIHEDRAL_TYPES = (DihedralElem, LocallyDihedralElem)
QUATERNION_TYPES = (DicyclicElem, LocallyQuaternionElem)

TORAL_HALF = ToralParam(HALF, (0,) * DEFAULT_FREE_RANK)


def _toral_half(rank: int) -> ToralParam:
    if rank == DEFAULT_FREE_RANK:
        return TORAL_HALF
    return ToralParam(HALF, (0,) * rank)


# -- group law --


def _same_family(x, y):
    if type(x) is not type(y):
        raise FamilyMismatchError(f"cannot combine {type(x).__name__} with {type(y).__name__}")


def elem_mul(x: GroupElement, y: GroupElement) -> GroupElement:
    _same_family(x, y)
    cls = type(x)
    if cls is CyclicElem:
        return CyclicElem(angle_add(x.angle, y.angle))
    if cls in DIHEDRAL_TYPES:
        c2 = angle_neg(y.angle) if x.flip else y.angle
        return cls(angle_add(x.angle, c2), x.flip ^ y.flip)
    if cls in QUATERNION_TYPES:
        c2 = angle_neg(y.angle) if x.jpart else y.angle
        c = angle_add(x.angle, c2)
        if x.jpart and y.jpart:
            c = angle_add(c, HALF)
        return cls(c, x.jpart ^ y.jpart)
    if cls is InfiniteDihedralElem:
        s2 = -y.shift if x.flip else y.shift
        return InfiniteDihedralElem(x.shift + s2, x.flip ^ y.flip)
    if cls is InfiniteQuaternionElem:
        b = toral_inv(y.param) if x.jpart else y.param
        a = toral_mul(x.param, b)
        if x.jpart and y.jpart:
            a = toral_mul(a, _toral_half(a.rank))
        return InfiniteQuaternionElem(a, x.jpart ^ y.jpart)
    if cls is ProductElem:
        return ProductElem(elem_mul(x.left, y.left), elem_mul(x.right, y.right))
    raise FamilyMismatchError(f"unknown element type {cls.__name__}")


def elem_identity(x: GroupElement) -> GroupElement:
    """Identity of the family ``x`` belongs to."""
    cls = type(x)
    if cls is CyclicElem:
        return CyclicElem(ZERO)
    if cls in DIHEDRAL_TYPES or cls in QUATERNION_TYPES:
        return cls(ZERO, 0)
    if cls is InfiniteDihedralElem:
        return InfiniteDihedralElem(0, 0)
    if cls is InfiniteQuaternionElem:
        return InfiniteQuaternionElem(ToralParam(ZERO, (0,) * x.param.rank), 0)
    if cls is ProductElem:
        return ProductElem(elem_identity(x.left), elem_identity(x.right))
    raise FamilyMismatchError(f"unknown element type {cls.__name__}")


def elem_inv(x: GroupElement) -> GroupElement:
    cls = type(x)
    if cls is CyclicElem:
        return CyclicElem(angle_neg(x.angle))
    if cls in DIHEDRAL_TYPES:
        return x if x.flip else cls(angle_neg(x.angle), 0)
    if cls in QUATERNION_TYPES:
        # (c,1)(c+1/2,1) = (c - c - 1/2 + 1/2, 0)
        return cls(angle_add(x.angle, HALF), 1) if x.jpart else cls(angle_neg(x.angle), 0)
    if cls is InfiniteDihedralElem:
        return x if x.flip else InfiniteDihedralElem(-x.shift, 0)
    if cls is InfiniteQuaternionElem:
        if x.jpart:
            return InfiniteQuaternionElem(toral_mul(x.param, _toral_half(x.param.rank)), 1)
        return InfiniteQuaternionElem(toral_inv(x.param), 0)
    if cls is ProductElem:
        return ProductElem(elem_inv(x.left), elem_inv(x.right))
    raise FamilyMismatchError(f"unknown element type {cls.__name__}")


def elem_order(x: GroupElement):
    """Order of ``x`` from closed forms; ``INFINITE`` for elements of infinite order."""
    cls = type(x)
    if cls is CyclicElem:
        return x.angle.den
    if cls in DIHEDRAL_TYPES:
        return 2 if x.flip else x.angle.den
    if cls in QUATERNION_TYPES:
        return 4 if x.jpart else x.angle.den
    if cls is InfiniteDihedralElem:
        if x.flip:
            return 2
        return 1 if x.shift == 0 else INFINITE
    if cls is InfiniteQuaternionElem:
        return 4 if x.jpart else toral_order(x.param)
    if cls is ProductElem:
        a, b = elem_order(x.left), elem_order(x.right)
        if a == INFINITE or b == INFINITE:
            return INFINITE
        return a * b // math.gcd(a, b)
    raise FamilyMismatchError(f"unknown element type {cls.__name__}")


def elem_pow(x: GroupElement, k: int) -> GroupElement:
    if k < 0:
        x, k = elem_inv(x), -k
    result = elem_identity(x)
    base = x
    while k:
        if k & 1:
            result = elem_mul(result, base)
        base = elem_mul(base, base)
        k >>= 1
    return result


def is_identity(x: GroupElement) -> bool:
    return x == elem_identity(x)


def rotation_part(x: GroupElement):
    """The abelian coordinate and the bit of a two-coset family element."""
    cls = type(x)
    if cls in DIHEDRAL_TYPES:
        return x.angle, x.flip
    if cls in QUATERNION_TYPES:
        return x.angle, x.jpart
    if cls is InfiniteDihedralElem:
        return x.shift, x.flip
    if cls is InfiniteQuaternionElem:
        return x.param, x.jpart
    if cls is CyclicElem:
        return x.angle, 0
    raise FamilyMismatchError(f"{cls.__name__} has no rotation/coset split")


# -- family specs and views --


def _angles_dividing(n: int) -> list[RationalAngle]:
    """All angles with denominator dividing ``n``, ordered by (den, num)."""
    return sorted((RationalAngle.of(i, n) for i in range(n)), key=RationalAngle.sort_key)


def _check_positive(name, value):
    if not isinstance(value, int) or value < 1:
        raise BadParamError(f"{name} must be a positive integer, got {value!r}")


def _view(spec, elements, identity, closed=True):
    return FiniteGroupView(elements, elem_mul, identity, closed=closed, name=str(spec), label=str)


@dataclass(frozen=True)
class Cyclic:
    n: int

    def __post_init__(self):
        _check_positive("n", self.n)

    def __str__(self):
        return f"cyclic:{self.n}"

    def build(self):
        return _view(self, [CyclicElem(a) for a in _angles_dividing(self.n)], CyclicElem(ZERO))


@dataclass(frozen=True)
class PruferTrunc:
    """The cyclic subgroup of order 2**k of the Prufer 2-group."""

    k: int

    def __post_init__(self):
        _check_positive("k", self.k)

    def __str__(self):
        return f"prufer:{self.k}"

    def build(self):
        return _view(self, [CyclicElem(a) for a in _angles_dividing(2**self.k)], CyclicElem(ZERO))


def _two_coset(spec, cls, rotations):
    elems = [cls(a, 0) for a in rotations] + [cls(a, 1) for a in rotations]
    return _view(spec, elems, cls(ZERO, 0))


@dataclass(frozen=True)
class Dihedral:
    """Dihedral group of order 2m."""

    m: int

    def __post_init__(self):
        _check_positive("m", self.m)

    def __str__(self):
        return f"dihedral:{self.m}"

    def build(self):
        return _two_coset(self, DihedralElem, _angles_dividing(self.m))


@dataclass(frozen=True)
class Dicyclic:
    """Dicyclic group Q_{4m}; rotations are angles with denominator dividing 2m."""

    m: int

    def __post_init__(self):
        _check_positive("m", self.m)

    def __str__(self):
        return f"dicyclic:{self.m}"

    def build(self):
        return _two_coset(self, DicyclicElem, _angles_dividing(2 * self.m))


@dataclass(frozen=True)
class GenQuaternion:
    """Generalised quaternion group of order 2**(n+1), i.e. ``Dicyclic(2**(n-1))``."""

    n: int

    def __post_init__(self):
        _check_positive("n", self.n)
        if self.n < 2:
            raise BadParamError("generalised quaternion level must be >= 2")

    def __str__(self):
        return f"genq:{self.n}"

    def build(self):
        return _two_coset(self, DicyclicElem, _angles_dividing(2**self.n))


@dataclass(frozen=True)
class LocallyQuaternionTrunc:
    """Level-n subgroup of the locally quaternion group, isomorphic to Q_{2**(n+1)}."""

    n: int

    def __post_init__(self):
        _check_positive("n", self.n)

    def __str__(self):
        return f"lq:{self.n}"

    def build(self):
        return _two_coset(self, LocallyQuaternionElem, _angles_dividing(2**self.n))


@dataclass(frozen=True)
class LocallyDihedralTrunc:
    """Level-n subgroup of the locally dihedral group, isomorphic to D_{2**(n+1)}."""

    n: int

    def __post_init__(self):
        _check_positive("n", self.n)

    def __str__(self):
        return f"ld:{self.n}"

    def build(self):
        return _two_coset(self, LocallyDihedralElem, _angles_dividing(2**self.n))


@dataclass(frozen=True)
class Product:
    left: "FamilySpec"
    right: "FamilySpec"

    def __str__(self):
        return f"prod({self.left},{self.right})"

    def build(self):
        lv, rv = build_family(self.left), build_family(self.right)
        lv.require_closed()
        rv.require_closed()
        elems = [ProductElem(a, b) for a in lv.elements for b in rv.elements]
        return _view(self, elems, ProductElem(lv.identity, rv.identity))


@dataclass(frozen=True)
class InfiniteDihedralWindow:
    shifts: tuple[int, ...]

    def __post_init__(self):
        shifts = tuple(sorted(set(self.shifts)))
        if len(shifts) != len(self.shifts):
            raise BadParamError("window shifts must be distinct")
        if 0 not in shifts:
            raise BadParamError("window must contain the identity shift 0")
        object.__setattr__(self, "shifts", shifts)

    @classmethod
    def default(cls, n: int) -> InfiniteDihedralWindow:
        """Shifts ``0 .. 2**n - 1``, matching the rotation count of ``ld:n``."""
        _check_positive("n", n)
        return cls(tuple(range(2**n)))

    def __str__(self):
        s = self.shifts
        if s == tuple(range(s[0], s[-1] + 1)):
            return f"dinf:{s[0]}..{s[-1]}"
        return "dinf:" + ",".join(str(v) for v in s)

    def build(self):
        elems = [InfiniteDihedralElem(i, 0) for i in self.shifts]
        elems += [InfiniteDihedralElem(i, 1) for i in self.shifts]
        return _view(self, elems, InfiniteDihedralElem(0, 0), closed=False)


def default_qinf_params(rank: int = DEFAULT_FREE_RANK) -> tuple[ToralParam, ...]:
    """Identity, some torsion, a free generator g with g^2 and g^3, and an independent h."""
    if rank < 2:
        raise BadParamError("the default Q-infinity window needs free rank >= 2")

    def free(*coords):
        return tuple(coords) + (0,) * (rank - len(coords))

    g = ToralParam(ZERO, free(1))
    return (
        ToralParam(ZERO, free()),
        ToralParam(HALF, free()),
        ToralParam(RationalAngle(1, 4), free()),
        ToralParam(RationalAngle(1, 3), free()),
        g,
        g.scale(2),
        g.scale(3),
        ToralParam(ZERO, free(0, 1)),
        toral_mul(g, ToralParam(HALF, free())),
    )


@dataclass(frozen=True)
class InfiniteQuaternionWindow:
    """Window ``{x_a j**b : a in params, b in {0, 1}}``; parameter order is kept as given."""

    params: tuple[ToralParam, ...]
    source: str = ""

    def __post_init__(self):
        params = tuple(self.params)
        object.__setattr__(self, "params", params)
        if not params:
            raise BadParamError("empty Q-infinity window")
        if len(set(params)) != len(params):
            raise BadParamError("window parameters must be distinct")
        ranks = {p.rank for p in params}
        if len(ranks) != 1:
            raise BadParamError(f"mixed free ranks in window: {sorted(ranks)}")
        if not any(p.angle.is_zero and p.is_torsion for p in params):
            raise BadParamError("window must contain the identity parameter")

    @classmethod
    def default(cls) -> InfiniteQuaternionWindow:
        return cls(default_qinf_params(), source="default")

    def __str__(self):
        if self.source:
            return f"qinf:{self.source}"
        return "qinf:" + ";".join(str(p) for p in self.params)

    def build(self):
        rank = self.params[0].rank
        elems = [InfiniteQuaternionElem(p, 0) for p in self.params]
        elems += [InfiniteQuaternionElem(p, 1) for p in self.params]
        ident = InfiniteQuaternionElem(ToralParam(ZERO, (0,) * rank), 0)
        return _view(self, elems, ident, closed=False)


FamilySpec = Union[
    Cyclic,
    Dihedral,
    Dicyclic,
    GenQuaternion,
    Product,
    PruferTrunc,
    LocallyQuaternionTrunc,
    LocallyDihedralTrunc,
    InfiniteDihedralWindow,
    InfiniteQuaternionWindow,
]


def build_family(spec) -> FiniteGroupView:
    if isinstance(spec, str):
        spec = parse_family(spec)
    try:
        build = spec.build
    except AttributeError:
        raise BadParamError(f"not a family spec: {spec!r}") from None
    return build()


# -- mini-language --

SIMPLE_FAMILIES = {
    "cyclic": Cyclic,
    "dihedral": Dihedral,
    "dicyclic": Dicyclic,
    "genq": GenQuaternion,
    "lq": LocallyQuaternionTrunc,
    "ld": LocallyDihedralTrunc,
    "prufer": PruferTrunc,
}

_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")


def _split_top_level(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise BadParamError(f"unbalanced parentheses in {text!r}")
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth:
        raise BadParamError(f"unbalanced parentheses in {text!r}")
    parts.append(text[start:])
    return parts


def parse_shifts(text: str) -> tuple[int, ...]:
    m = _RANGE.match(text.strip())
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if hi < lo:
            raise BadParamError(f"empty range {text!r}")
        return tuple(range(lo, hi + 1))
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise BadParamError(f"bad shift list {text!r}") from None


def read_param_file(path) -> tuple[ToralParam, ...]:
    """One parameter per line as ``num/den f1 f2``; ``#`` starts a comment."""
    params = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                params.append(parse_toral(line))
    return tuple(params)


def parse_family(text: str):
    """Parse the family mini-language, e.g. ``genq:3``, ``dinf:0..7``, ``prod(cyclic:2,cyclic:3)``."""
    text = text.strip()
    if text.startswith("prod(") and text.endswith(")"):
        parts = _split_top_level(text[5:-1])
        if len(parts) != 2:
            raise BadParamError(f"prod takes two families: {text!r}")
        return Product(parse_family(parts[0]), parse_family(parts[1]))
    name, sep, arg = text.partition(":")
    if not sep or not arg:
        raise BadParamError(f"expected <family>:<param>, got {text!r}")
    if name in SIMPLE_FAMILIES:
        try:
            value = int(arg)
        except ValueError:
            raise BadParamError(f"{name} takes an integer, got {arg!r}") from None
        return SIMPLE_FAMILIES[name](value)
    if name == "dinf":
        return InfiniteDihedralWindow(parse_shifts(arg))
    if name == "qinf":
        if arg == "default":
            return InfiniteQuaternionWindow.default()
        if arg.startswith("@"):
            try:
                params = read_param_file(arg[1:])
            except OSError as exc:
                raise BadParamError(f"cannot read parameter file: {exc}") from None
            except ValueError as exc:
                raise BadParamError(f"bad parameter file: {exc}") from None
            return InfiniteQuaternionWindow(params, source=arg)
        try:
            params = tuple(parse_toral(p) for p in arg.split(";"))
        except ValueError as exc:
            raise BadParamError(f"bad Q-infinity parameters {arg!r}: {exc}") from None
        return InfiniteQuaternionWindow(params)
    raise BadParamError(f"unknown family {name!r}")


def family_size(spec) -> int:
    """Element count of a family spec, computed without building it."""
    if isinstance(spec, str):
        spec = parse_family(spec)
    if isinstance(spec, Cyclic):
        return spec.n
    if isinstance(spec, Dihedral):
        return 2 * spec.m
    if isinstance(spec, Dicyclic):
        return 4 * spec.m
    if isinstance(spec, PruferTrunc):
        return 2**spec.k
    if isinstance(spec, (GenQuaternion, LocallyQuaternionTrunc, LocallyDihedralTrunc)):
        return 2 ** (spec.n + 1)
    if isinstance(spec, Product):
        return family_size(spec.left) * family_size(spec.right)
    if isinstance(spec, InfiniteDihedralWindow):
        return 2 * len(spec.shifts)
    if isinstance(spec, InfiniteQuaternionWindow):
        return 2 * len(spec.params)
    raise BadParamError(f"not a family spec: {spec!r}")
