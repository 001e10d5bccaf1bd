"""Power, enhanced power and commuting graphs on finite views.

The adjacency predicates use closed forms per family, so they also work on
windows of the infinite groups. The ``generic_*`` predicates compute the same
relations from a view's Cayley table (power enumeration and subgroup
closure); they only apply to subgroup-closed views and serve as oracles for
the closed forms.
"""

from __future__ import annotations

import enum
import functools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .algebra import (
    HALF,
    INFINITE,
    FiniteGroupView,
    RationalAngle,
    ToralParam,
    angle_add,
    angle_neg,
    cyclic_two_gen_abelian,
    is_cyclic_subgroup,
    subgroup_closure,
    toral_inv,
    toral_mul,
)
from .errors import BadParamError, LabelMismatchError, TooLargeError, UnknownLabelError
from .families import (
    DIHEDRAL_TYPES,
    QUATERNION_TYPES,
    CyclicElem,
    InfiniteDihedralElem,
    InfiniteQuaternionElem,
    ProductElem,
    _same_family,
    elem_identity,
    elem_mul,
    elem_order,
    rotation_part,
)


class Kind(str, enum.Enum):
    POW = "pow"
    EPOW = "epow"
    COM = "com"

    def __str__(self):
        return self.value


# -- closed-form adjacency --


def _divides(a: int, b: int) -> bool:
    return b % a == 0


def _toral_in_cyclic(b: ToralParam, a: ToralParam) -> bool:
    """Whether ``b`` is an integer multiple of ``a`` in Q/Z + Z^k."""
    if a.is_torsion:
        return b.is_torsion and _divides(b.angle.den, a.angle.den)
    i = next(k for k, v in enumerate(a.free) if v)
    if b.free[i] % a.free[i]:
        return False
    k = b.free[i] // a.free[i]
    if any(k * u != v for u, v in zip(a.free, b.free)):
        return False
    return a.angle.scale(k) == b.angle


def _is_central_torsion(p: ToralParam) -> bool:
    # the parameters +1 and -1
    return p.is_torsion and p.angle.den <= 2


@functools.lru_cache(maxsize=8192)
def _element_powers(x) -> frozenset:
    """Cyclic subgroup of a finite-order element, by repeated multiplication."""
    if elem_order(x) == INFINITE:
        raise BadParamError(f"{x} has infinite order; no finite power enumeration")
    e = elem_identity(x)
    out = {e}
    p = x
    while p != e:
        out.add(p)
        p = elem_mul(p, x)
    return frozenset(out)


def _killed_by_two(a) -> bool:
    if isinstance(a, RationalAngle):
        return a.den <= 2
    if isinstance(a, int):
        return a == 0
    return _is_central_torsion(a)


def _minus(a, b):
    if isinstance(a, RationalAngle):
        return angle_add(a, angle_neg(b))
    if isinstance(a, int):
        return a - b
    return toral_mul(a, toral_inv(b))


def adj_com(x, y) -> bool:
    _same_family(x, y)
    cls = type(x)
    if cls is CyclicElem:
        return True
    if cls is ProductElem:
        return adj_com(x.left, y.left) and adj_com(x.right, y.right)
    # two-coset families: the flip inverts rotations, so a rotation commutes
    # with a flipped element iff it has order <= 2, and two flipped elements
    # commute iff their rotation parts differ by such an element
    a, fa = rotation_part(x)
    b, fb = rotation_part(y)
    if not (fa or fb):
        return True
    if fa and fb:
        return _killed_by_two(_minus(a, b))
    return _killed_by_two(b if fa else a)


def adj_pow(x, y) -> bool:
    """True iff one of ``x``, ``y`` is a power of the other."""
    _same_family(x, y)
    cls = type(x)
    if cls is CyclicElem:
        return _divides(x.angle.den, y.angle.den) or _divides(y.angle.den, x.angle.den)
    e = elem_identity(x)
    if x == e or y == e:
        return True
    if cls in DIHEDRAL_TYPES:
        if x.flip or y.flip:
            return False
        return _divides(x.angle.den, y.angle.den) or _divides(y.angle.den, x.angle.den)
    if cls in QUATERNION_TYPES:
        if x.jpart and y.jpart:
            return y.angle == x.angle + HALF
        if x.jpart or y.jpart:
            rot = y if x.jpart else x
            return rot.angle == HALF
        return _divides(x.angle.den, y.angle.den) or _divides(y.angle.den, x.angle.den)
    if cls is InfiniteDihedralElem:
        if x.flip or y.flip:
            return False
        m, n = x.shift, y.shift
        return m % n == 0 or n % m == 0
    if cls is InfiniteQuaternionElem:
        if x.jpart and y.jpart:
            return y.param == x.param + ToralParam(HALF, (0,) * x.param.rank)
        if x.jpart or y.jpart:
            rot = y if x.jpart else x
            return _is_central_torsion(rot.param)
        return _toral_in_cyclic(x.param, y.param) or _toral_in_cyclic(y.param, x.param)
    if cls is ProductElem:
        return x in _element_powers(y) or y in _element_powers(x)
    raise BadParamError(f"no power-graph rule for {cls.__name__}")


def adj_epow(x, y) -> bool:
    """True iff ``x`` and ``y`` generate a cyclic subgroup."""
    _same_family(x, y)
    cls = type(x)
    if cls is CyclicElem:
        return True
    e = elem_identity(x)
    if x == e or y == e:
        return True
    if not adj_com(x, y):
        return False
    if cls in DIHEDRAL_TYPES:
        return not (x.flip or y.flip)
    if cls in QUATERNION_TYPES:
        # commuting pairs here lie in a common <h> or <c x>
        return True
    if cls is InfiniteDihedralElem:
        return not (x.flip or y.flip)
    if cls is InfiniteQuaternionElem:
        if x.jpart or y.jpart:
            return True
        return cyclic_two_gen_abelian(x.param, y.param)
    if cls is ProductElem:
        # commuting x, y: |<x,y>| = |x||y| / |<x> & <y>|, and <x,y> is cyclic
        # iff that equals its exponent lcm(|x|, |y|)
        common = len(_element_powers(x) & _element_powers(y))
        return common == math.gcd(elem_order(x), elem_order(y))
    raise BadParamError(f"no enhanced-power-graph rule for {cls.__name__}")


PREDICATES = {Kind.POW: adj_pow, Kind.EPOW: adj_epow, Kind.COM: adj_com}


# -- view-based oracles --


def generic_adj_pow(view: FiniteGroupView, x, y) -> bool:
    return x in view.powers_of(y) or y in view.powers_of(x)


def generic_adj_epow(view: FiniteGroupView, x, y) -> bool:
    return is_cyclic_subgroup(view, subgroup_closure(view, [x, y]))


def generic_adj_com(view: FiniteGroupView, x, y) -> bool:
    t, i, j = view.table, view.index[x], view.index[y]
    return t[i][j] == t[j][i]


GENERIC_PREDICATES = {Kind.POW: generic_adj_pow, Kind.EPOW: generic_adj_epow, Kind.COM: generic_adj_com}


# -- graphs --


@dataclass(frozen=True, eq=False)
class HierarchyGraph:
    """A finite simple graph with labelled vertices.

    ``kind`` is None for graphs that were not built from a group (for
    example reconstructions from a decomposition signature).
    """

    kind: Optional[Kind]
    labels: tuple[str, ...]
    adj: np.ndarray
    family: str = ""
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = np.array(self.adj, dtype=bool)
        n = len(self.labels)
        if adj.shape != (n, n):
            raise BadParamError(f"adjacency shape {adj.shape} does not match {n} labels")
        if (adj != adj.T).any() or adj.diagonal().any():
            raise BadParamError("adjacency must be symmetric with empty diagonal")
        adj.flags.writeable = False
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "adj", adj)
        index = {lab: i for i, lab in enumerate(self.labels)}
        if len(index) != n:
            raise BadParamError("vertex labels must be distinct")
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"<HierarchyGraph {self.kind} {self.family!r} |V|={len(self)} |E|={self.n_edges}>"

    @property
    def n_edges(self) -> int:
        return int(self.adj.sum()) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges as index pairs ``(i, j)`` with ``i < j``, lexicographically sorted."""
        i, j = np.nonzero(np.triu(self.adj, 1))
        return [(int(a), int(b)) for a, b in zip(i, j)]

    def degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def has_edge(self, a: str, b: str) -> bool:
        return bool(self.adj[self.index_of(a), self.index_of(b)])

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabelError(label) from None


def build_graph(view: FiniteGroupView, kind) -> HierarchyGraph:
    kind = Kind(kind)
    pred = PREDICATES[kind]
    elems = view.elements
    n = len(elems)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        x = elems[i]
        for j in range(i + 1, n):
            if pred(x, elems[j]):
                adj[i, j] = adj[j, i] = True
    return HierarchyGraph(kind, view.labels, adj, family=view.name)


def build_graph_generic(view: FiniteGroupView, kind) -> HierarchyGraph:
    """Same graph as :func:`build_graph`, computed from the Cayley table only."""
    kind = Kind(kind)
    pred = GENERIC_PREDICATES[kind]
    elems = view.elements
    n = len(elems)
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if pred(view, elems[i], elems[j]):
                adj[i, j] = adj[j, i] = True
    return HierarchyGraph(kind, view.labels, adj, family=view.name)


def _same_labels(g1: HierarchyGraph, g2: HierarchyGraph):
    if g1.labels != g2.labels:
        raise LabelMismatchError("graphs have different vertex label lists")


def edge_set_equal(g1: HierarchyGraph, g2: HierarchyGraph) -> bool:
    _same_labels(g1, g2)
    return bool((g1.adj == g2.adj).all())


def edge_subset(g1: HierarchyGraph, g2: HierarchyGraph) -> bool:
    """True iff every edge of ``g1`` is an edge of ``g2``."""
    _same_labels(g1, g2)
    return not (g1.adj & ~g2.adj).any()


def edge_difference(g1: HierarchyGraph, g2: HierarchyGraph) -> list[tuple[str, str]]:
    """Edges of ``g1`` missing from ``g2``, as label pairs in sorted index order."""
    _same_labels(g1, g2)
    i, j = np.nonzero(np.triu(g1.adj & ~g2.adj, 1))
    return [(g1.labels[a], g1.labels[b]) for a, b in zip(i, j)]


def universal_vertices(g: HierarchyGraph) -> list[str]:
    deg = g.degrees()
    return [g.labels[i] for i in range(len(g)) if deg[i] == len(g) - 1]


def induced_subgraph(g: HierarchyGraph, vertices: Iterable[str]) -> HierarchyGraph:
    wanted = {g.index_of(v) for v in vertices}
    keep = sorted(wanted)
    sub = g.adj[np.ix_(keep, keep)]
    return HierarchyGraph(g.kind, [g.labels[i] for i in keep], sub, family=g.family)


# -- join-of-cliques recognition --


@dataclass(frozen=True)
class DecompositionSignature:
    """``u`` universal vertices joined to a disjoint union of cliques of the given sizes."""

    u: int
    cliques: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cliques", tuple(sorted(self.cliques, reverse=True)))

    @property
    def n_vertices(self) -> int:
        return self.u + sum(self.cliques)

    def __str__(self):
        return f"({self.u}, {{{', '.join(map(str, self.cliques))}}})"

    def as_dict(self) -> dict:
        return {"u": self.u, "cliques": list(self.cliques)}


def _decompose(g: HierarchyGraph):
    """Universal vertex indices and clique components of the rest, or None."""
    n = len(g)
    adj = g.adj
    deg = g.degrees()
    universal = [i for i in range(n) if deg[i] == n - 1]
    rest = [i for i in range(n) if deg[i] != n - 1]
    seen = set()
    components = []
    for start in rest:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for b in np.flatnonzero(adj[a]):
                b = int(b)
                if b not in seen and deg[b] != n - 1:
                    seen.add(b)
                    comp.append(b)
                    queue.append(b)
        comp.sort()
        # a component of size k is a clique iff each member has k-1 neighbours in it
        sub = adj[np.ix_(comp, comp)]
        if (sub.sum(axis=1) != len(comp) - 1).any():
            return None
        components.append(comp)
    return universal, components


def decomposition_signature(g: HierarchyGraph) -> Optional[DecompositionSignature]:
    """Signature of ``g`` as a join of a complete graph with a union of cliques.

    Returns None (not recognized) when some component left after removing the
    universal vertices is not a clique.
    """
    parts = _decompose(g)
    if parts is None:
        return None
    universal, components = parts
    return DecompositionSignature(len(universal), tuple(len(c) for c in components))


def join_of_cliques(u: int, cliques: Iterable[int]) -> HierarchyGraph:
    """The graph ``(K_a1 + K_a2 + ...) join K_u`` with synthetic labels."""
    cliques = list(cliques)
    labels = [f"u{i}" for i in range(u)]
    blocks = []
    for k, size in enumerate(cliques):
        start = len(labels)
        labels += [f"k{k}.{i}" for i in range(size)]
        blocks.append(range(start, start + size))
    n = len(labels)
    adj = np.zeros((n, n), dtype=bool)
    adj[:u, :] = True
    adj[:, :u] = True
    for block in blocks:
        adj[block.start : block.stop, block.start : block.stop] = True
    np.fill_diagonal(adj, False)
    return HierarchyGraph(None, labels, adj)


# -- isomorphism --

DEFAULT_BACKTRACK_LIMIT = 16


@dataclass(frozen=True)
class IsomorphismResult:
    isomorphic: bool
    method: str
    mapping: Optional[dict] = None

    def __bool__(self):
        return self.isomorphic


def backtrack_isomorphism(g1: HierarchyGraph, g2: HierarchyGraph, max_vertices=DEFAULT_BACKTRACK_LIMIT):
    """Vertex map ``label -> label`` from ``g1`` onto ``g2`` preserving adjacency, or None.

    Plain backtracking over degree classes; refuses graphs above ``max_vertices``.
    """
    n = len(g1)
    if n != len(g2):
        return None
    if max_vertices is not None and n > max_vertices:
        raise TooLargeError(f"backtracking isomorphism on {n} vertices exceeds limit {max_vertices}")
    d1, d2 = g1.degrees(), g2.degrees()
    if sorted(d1.tolist()) != sorted(d2.tolist()):
        return None
    a1, a2 = g1.adj, g2.adj
    # most constrained first: high degree, then index
    order = sorted(range(n), key=lambda i: (-int(d1[i]), i))
    by_degree = {}
    for j in range(n):
        by_degree.setdefault(int(d2[j]), []).append(j)
    image = [-1] * n
    used = [False] * n

    def extend(pos):
        if pos == n:
            return True
        v = order[pos]
        for w in by_degree[int(d1[v])]:
            if used[w]:
                continue
            if all(a1[v, order[k]] == a2[w, image[order[k]]] for k in range(pos)):
                image[v] = w
                used[w] = True
                if extend(pos + 1):
                    return True
                used[w] = False
                image[v] = -1
        return False

    if not extend(0):
        return None
    return {g1.labels[i]: g2.labels[image[i]] for i in range(n)}


def _signature_mapping(g1, parts1, g2, parts2) -> dict:
    u1, comps1 = parts1
    u2, comps2 = parts2
    mapping = {g1.labels[a]: g2.labels[b] for a, b in zip(u1, u2)}
    key = lambda c: (-len(c), c[0])
    for c1, c2 in zip(sorted(comps1, key=key), sorted(comps2, key=key)):
        mapping.update({g1.labels[a]: g2.labels[b] for a, b in zip(c1, c2)})
    return mapping


def graphs_isomorphic(g1: HierarchyGraph, g2: HierarchyGraph, max_vertices=DEFAULT_BACKTRACK_LIMIT) -> IsomorphismResult:
    """Decide isomorphism, preferring the decomposition-signature fast path.

    Recognition as a join of cliques is an isomorphism invariant, so when
    exactly one side is recognized the graphs differ. When neither is, fall
    back to backtracking (bounded by ``max_vertices``).
    """
    if len(g1) != len(g2) or g1.n_edges != g2.n_edges:
        return IsomorphismResult(False, "invariants")
    p1, p2 = _decompose(g1), _decompose(g2)
    if p1 is not None and p2 is not None:
        s1 = DecompositionSignature(len(p1[0]), tuple(len(c) for c in p1[1]))
        s2 = DecompositionSignature(len(p2[0]), tuple(len(c) for c in p2[1]))
        if s1 != s2:
            return IsomorphismResult(False, "signature")
        return IsomorphismResult(True, "signature", _signature_mapping(g1, p1, g2, p2))
    if (p1 is None) != (p2 is None):
        return IsomorphismResult(False, "signature")
    mapping = backtrack_isomorphism(g1, g2, max_vertices=max_vertices)
    return IsomorphismResult(mapping is not None, "backtrack", mapping)


def is_edge_preserving(g1: HierarchyGraph, g2: HierarchyGraph, mapping: dict):
    """First pair whose adjacency differs under ``mapping``, or None if it is an isomorphism."""
    idx = [g2.index_of(mapping[lab]) for lab in g1.labels]
    if len(set(idx)) != len(g1) or len(g1) != len(g2):
        raise BadParamError("mapping is not a bijection")
    a1 = g1.adj
    a2 = g2.adj[np.ix_(idx, idx)]
    diff = np.nonzero(np.triu(a1 != a2, 1))
    if len(diff[0]) == 0:
        return None
    i, j = int(diff[0][0]), int(diff[1][0])
    return (g1.labels[i], g1.labels[j])
