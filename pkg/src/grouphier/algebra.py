"""Exact arithmetic on Q/Z and Q/Z + Z^k, and generic finite-group machinery.

Angles are elements of Q/Z kept in lowest terms with ``0 <= num < den``, so
structural equality is group equality. A :class:`ToralParam` adds a free
integer vector and stands in for the multiplicative parameter ``a`` of the
diagonal elements of the infinite quaternion group: the angle ``q`` encodes
``exp(2*pi*i*q)`` and each free coordinate an independent element of
infinite order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .errors import BadParamError, MismatchedRankError, NotClosedError, WindowNotClosedError

INFINITE = math.inf

DEFAULT_FREE_RANK = 2


@dataclass(frozen=True, slots=True)
class RationalAngle:
    """An element of Q/Z in canonical form."""

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1 or not 0 <= self.num < self.den or math.gcd(self.num, self.den) != 1:
            raise BadParamError(f"non-canonical angle {self.num}/{self.den}")

    @classmethod
    def of(cls, num: int, den: int = 1) -> RationalAngle:
        """Reduce ``num/den`` mod 1 to canonical form."""
        if den == 0:
            raise BadParamError("zero denominator")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = math.gcd(num, den)
        # already canonical; skip __post_init__ validation on this hot path
        obj = object.__new__(cls)
        object.__setattr__(obj, "num", num // g)
        object.__setattr__(obj, "den", den // g)
        return obj

    def __add__(self, other: RationalAngle) -> RationalAngle:
        return angle_add(self, other)

    def __neg__(self) -> RationalAngle:
        return angle_neg(self)

    def __sub__(self, other: RationalAngle) -> RationalAngle:
        return angle_add(self, angle_neg(other))

    def scale(self, m: int) -> RationalAngle:
        return RationalAngle.of(m * self.num, self.den)

    @property
    def is_zero(self) -> bool:
        return self.num == 0

    def sort_key(self):
        return (self.den, self.num)

    def __str__(self):
        return f"{self.num}/{self.den}"


ZERO = RationalAngle(0, 1)
HALF = RationalAngle(1, 2)


def angle_add(x: RationalAngle, y: RationalAngle) -> RationalAngle:
    den = x.den * y.den // math.gcd(x.den, y.den)
    return RationalAngle.of(x.num * (den // x.den) + y.num * (den // y.den), den)


def angle_neg(x: RationalAngle) -> RationalAngle:
    if x.num == 0:
        return x
    return RationalAngle(x.den - x.num, x.den)


def angle_order(x: RationalAngle) -> int:
    """Additive order in Q/Z, which is the reduced denominator."""
    return x.den


def is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def is_dyadic(x: RationalAngle) -> bool:
    return is_power_of_two(x.den)


def dyadic(num: int, k: int) -> RationalAngle:
    """The dyadic angle ``num / 2**k``; ``dyadic(1, m)`` is the Prufer generator g_m."""
    if k < 0:
        raise BadParamError(f"negative dyadic exponent {k}")
    return RationalAngle.of(num, 2**k)


def parse_angle(text: str) -> RationalAngle:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return RationalAngle.of(int(num), int(den))
    return RationalAngle.of(int(text), 1)


@dataclass(frozen=True, slots=True)
class ToralParam:
    """An element of Q/Z + Z^k, written additively."""

    angle: RationalAngle
    free: tuple[int, ...] = (0,) * DEFAULT_FREE_RANK

    def __post_init__(self):
        if not isinstance(self.free, tuple):
            object.__setattr__(self, "free", tuple(self.free))

    @classmethod
    def torsion(cls, num: int, den: int = 1, rank: int = DEFAULT_FREE_RANK) -> ToralParam:
        return cls(RationalAngle.of(num, den), (0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.free)

    @property
    def is_torsion(self) -> bool:
        return not any(self.free)

    def __add__(self, other: ToralParam) -> ToralParam:
        return toral_mul(self, other)

    def __neg__(self) -> ToralParam:
        return toral_inv(self)

    def __sub__(self, other: ToralParam) -> ToralParam:
        return toral_mul(self, toral_inv(other))

    def scale(self, m: int) -> ToralParam:
        return ToralParam(self.angle.scale(m), tuple(m * v for v in self.free))

    def sort_key(self):
        return (self.free, self.angle.sort_key())

    def __str__(self):
        return f"{self.angle}|{','.join(str(v) for v in self.free)}"


def _check_rank(x: ToralParam, y: ToralParam):
    if len(x.free) != len(y.free):
        raise MismatchedRankError(f"free ranks differ: {len(x.free)} vs {len(y.free)}")


def toral_mul(x: ToralParam, y: ToralParam) -> ToralParam:
    """Group law of the parameter group (written as multiplication of x_a, x_b)."""
    _check_rank(x, y)
    return ToralParam(angle_add(x.angle, y.angle), tuple(a + b for a, b in zip(x.free, y.free)))


def toral_inv(x: ToralParam) -> ToralParam:
    return ToralParam(angle_neg(x.angle), tuple(-v for v in x.free))


def toral_order(x: ToralParam):
    if not x.is_torsion:
        return INFINITE
    return angle_order(x.angle)


def parse_toral(text: str, rank: int = DEFAULT_FREE_RANK) -> ToralParam:
    """Parse ``"num/den f1 f2"`` (or ``"num/den|f1,f2"``); missing free coordinates are zero."""
    parts = text.replace("|", " ").replace(",", " ").split()
    if not parts:
        raise BadParamError("empty parameter")
    free = [int(p) for p in parts[1:]]
    if len(free) > rank:
        raise MismatchedRankError(f"{len(free)} free coordinates given, rank is {rank}")
    free += [0] * (rank - len(free))
    return ToralParam(parse_angle(parts[0]), tuple(free))


# -- two-generator cyclicity in Q/Z + Z^k --


def _content(v: Sequence[int]) -> int:
    g = 0
    for a in v:
        g = math.gcd(g, a)
    return g


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = _content(v)
    w = [a // g for a in v]
    first = next(a for a in w if a)
    if first < 0:
        w = [-a for a in w]
    return tuple(w)


def free_rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over Q of at most two integer vectors."""
    nonzero = [v for v in vectors if any(v)]
    if not nonzero:
        return 0
    if len(nonzero) == 1:
        return 1
    v1, v2 = nonzero
    for i in range(len(v1)):
        for j in range(i + 1, len(v1)):
            if v1[i] * v2[j] - v1[j] * v2[i]:
                return 2
    return 1


def kernel_generator(v1: Sequence[int], v2: Sequence[int]) -> tuple[int, int]:
    """Primitive generator of the kernel of ``(m1, m2) -> m1*v1 + m2*v2`` for rank-1 input.

    The first nonzero coordinate of the result is positive.
    """
    if not any(v1):
        return (1, 0)
    if not any(v2):
        return (0, 1)
    w = _primitive(v1)
    i = next(k for k, a in enumerate(w) if a)
    c1, c2 = v1[i] // w[i], v2[i] // w[i]
    g = math.gcd(c1, c2)
    u = (c2 // g, -c1 // g)
    if u[0] < 0 or (u[0] == 0 and u[1] < 0):
        u = (-u[0], -u[1])
    return u


def cyclic_two_gen_abelian(x: ToralParam, y: ToralParam) -> bool:
    """Whether the subgroup of Q/Z + Z^k generated by ``x`` and ``y`` is cyclic."""
    _check_rank(x, y)
    r = free_rank([x.free, y.free])
    if r == 2:
        return False
    if r == 0:
        # Q/Z is locally cyclic
        return True
    u1, u2 = kernel_generator(x.free, y.free)
    return angle_add(x.angle.scale(u1), y.angle.scale(u2)).is_zero


# -- generic finite groups --


class FiniteGroupView:
    """A finite list of group elements together with the group law.

    ``closed`` is False for windows of infinite groups: such a view is a vertex
    set, not a subgroup, and subgroup-only operations refuse it.
    """

    def __init__(
        self,
        elements: Iterable[Hashable],
        multiply: Callable,
        identity: Hashable,
        closed: bool = True,
        name: str = "",
        label: Callable[[Hashable], str] = str,
    ):
        self.elements = tuple(elements)
        self.multiply = multiply
        self.identity = identity
        self.closed = closed
        self.name = name
        self._label = label
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise BadParamError(f"{name}: duplicate elements")
        if identity not in self.index:
            raise BadParamError(f"{name}: identity missing from view")
        self.labels = tuple(label(x) for x in self.elements)
        if len(set(self.labels)) != len(self.labels):
            raise BadParamError(f"{name}: duplicate labels")
        self._table = None
        self._orders = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        kind = "truncation" if self.closed else "window"
        return f"<FiniteGroupView {self.name!r} {kind} |{len(self)}|>"

    def label(self, x) -> str:
        return self._label(x)

    def require_closed(self):
        if not self.closed:
            raise WindowNotClosedError(f"{self.name} is a window, not a subgroup")

    @property
    def table(self) -> list[list[int]]:
        """Cayley table on element indices (closed views only)."""
        if self._table is None:
            self.require_closed()
            idx = self.index
            table = []
            for a in self.elements:
                row = []
                for b in self.elements:
                    c = self.multiply(a, b)
                    if c not in idx:
                        raise NotClosedError(f"{self.name}: product leaves the view")
                    row.append(idx[c])
                table.append(row)
            self._table = table
        return self._table

    @property
    def orders(self) -> list[int]:
        """Element orders by brute-force powering in the Cayley table."""
        if self._orders is None:
            table = self.table
            e = self.index[self.identity]
            orders = []
            for i in range(len(self.elements)):
                k, p = 1, i
                while p != e:
                    p = table[p][i]
                    k += 1
                orders.append(k)
            self._orders = orders
        return self._orders

    def order_of(self, x) -> int:
        return self.orders[self.index[x]]

    def powers_of(self, x) -> frozenset:
        """The cyclic subgroup generated by ``x``, as a set of elements."""
        table = self.table
        i = self.index[x]
        e = self.index[self.identity]
        out = {e}
        p = i
        while p != e:
            out.add(p)
            p = table[p][i]
        return frozenset(self.elements[k] for k in out)


def subgroup_closure(view: FiniteGroupView, gens: Iterable) -> frozenset:
    """Smallest subset of ``view`` containing ``gens`` and closed under the law."""
    view.require_closed()
    table = view.table
    try:
        gen_idx = sorted({view.index[g] for g in gens})
    except KeyError as exc:
        raise BadParamError(f"generator {exc.args[0]!r} not in {view.name}") from None
    seen = {view.index[view.identity], *gen_idx}
    work = list(seen)
    while work:
        a = work.pop()
        row = table[a]
        for g in gen_idx:
            c = row[g]
            if c not in seen:
                seen.add(c)
                work.append(c)
    return frozenset(view.elements[i] for i in seen)


def is_cyclic_subgroup(view: FiniteGroupView, s: Iterable) -> bool:
    """True iff the closed subset ``s`` contains an element of order ``|s|``."""
    s = frozenset(s)
    if view.identity not in s:
        raise NotClosedError("subset lacks the identity")
    members = sorted(view.index[x] for x in s)
    table = view.table
    # spot check: products with a few fixed members stay inside
    probe = members[: min(3, len(members))]
    idx_set = set(members)
    for a in members:
        for b in probe:
            if table[a][b] not in idx_set:
                raise NotClosedError("subset is not closed under multiplication")
    orders = view.orders
    n = len(members)
    return any(orders[i] == n for i in members)
