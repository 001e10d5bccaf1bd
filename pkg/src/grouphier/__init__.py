"""Power, enhanced power and commuting graphs on groups, with exact arithmetic."""

from .algebra import (
    INFINITE,
    FiniteGroupView,
    RationalAngle,
    ToralParam,
    angle_add,
    angle_order,
    cyclic_two_gen_abelian,
    is_cyclic_subgroup,
    subgroup_closure,
    toral_inv,
    toral_mul,
    toral_order,
)
from .families import build_family, elem_inv, elem_mul, elem_order, parse_family
from .graphs import (
    DecompositionSignature,
    HierarchyGraph,
    Kind,
    adj_com,
    adj_epow,
    adj_pow,
    build_graph,
    decomposition_signature,
    edge_set_equal,
    edge_subset,
    graphs_isomorphic,
    induced_subgraph,
    universal_vertices,
)

__version__ = "0.1.0"
