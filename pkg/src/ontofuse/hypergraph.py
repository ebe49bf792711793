"""Hypergraphs with variable-indexed tuples and their morphisms.

Hyperedges carry a set-valued arity (a subset of the name pool) and a
tuple function assigning a node to each name in the arity.  These are
the instance-side skeleton of models.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import DomainMismatch, NameSetMismatch
from .tokens import FrozenDict, Token, fdict, sorted_tokens


@dataclass(frozen=True)
class Hypergraph:
    names: frozenset
    nodes: frozenset
    hyperedges: frozenset
    arity: FrozenDict  # edge -> frozenset of names
    valuation: FrozenDict  # edge -> FrozenDict name -> node (total on arity)

    @staticmethod
    def make(names: Iterable, nodes: Iterable, edges: Mapping) -> "Hypergraph":
        """Build from edges: mapping edge token -> {name: node}."""
        arity = {e: frozenset(tup) for e, tup in edges.items()}
        val = {e: fdict(tup) for e, tup in edges.items()}
        hg = Hypergraph(frozenset(names), frozenset(nodes), frozenset(edges),
                        fdict(arity), fdict(val))
        hg.check()
        return hg

    def check(self) -> None:
        for e in self.hyperedges:
            if not self.arity[e] <= self.names:
                raise DomainMismatch(f"edge {e!r} uses names outside the pool")
            if set(self.valuation[e]) != set(self.arity[e]):
                raise DomainMismatch(f"tuple of {e!r} not total exactly on its arity")
            if any(n not in self.nodes for n in self.valuation[e].values()):
                raise DomainMismatch(f"tuple of {e!r} leaves the node set")


@dataclass(frozen=True)
class HypergraphMorphism:
    source: Hypergraph
    target: Hypergraph
    node_map: FrozenDict
    edge_map: FrozenDict
    name_map: FrozenDict

    @staticmethod
    def make(source, target, node_map: Mapping, edge_map: Mapping, name_map: Mapping) -> "HypergraphMorphism":
        return HypergraphMorphism(source, target, fdict(node_map), fdict(edge_map), fdict(name_map))


def hypergraph_morphism_valid(m: HypergraphMorphism) -> tuple[bool, Optional[tuple]]:
    """Check arity and tuple preservation; returns (ok, first counterexample)."""
    if set(m.node_map) != set(m.source.nodes) or \
            any(v not in m.target.nodes for v in m.node_map.values()):
        raise DomainMismatch("node map not total source nodes -> target nodes")
    if set(m.edge_map) != set(m.source.hyperedges) or \
            any(v not in m.target.hyperedges for v in m.edge_map.values()):
        raise DomainMismatch("edge map not total source edges -> target edges")
    if set(m.name_map) != set(m.source.names) or \
            any(v not in m.target.names for v in m.name_map.values()):
        raise DomainMismatch("name map not total source names -> target names")
    for e in sorted_tokens(m.source.hyperedges):
        image = m.edge_map[e]
        if m.target.arity[image] != frozenset(m.name_map[x] for x in m.source.arity[e]):
            return False, ("arity", e)
        for x in sorted_tokens(m.source.arity[e]):
            if m.target.valuation[image][m.name_map[x]] != m.node_map[m.source.valuation[e][x]]:
                return False, ("tuple", e, x)
    return True, None


def identity_hypergraph_morphism(h: Hypergraph) -> HypergraphMorphism:
    return HypergraphMorphism.make(h, h, {n: n for n in h.nodes},
                                   {e: e for e in h.hyperedges}, {x: x for x in h.names})


def hypergraph_product(a: Hypergraph, b: Hypergraph) -> tuple[Hypergraph, HypergraphMorphism, HypergraphMorphism]:
    """Pairwise product over a shared name pool.

    Hyperedges pair only edges of equal arity, so the projection tuples
    are well-defined.  Returns (product, left projection, right projection).
    """
    if a.names != b.names:
        raise NameSetMismatch(f"name pools differ: {sorted_tokens(a.names)} vs {sorted_tokens(b.names)}")
    nodes = [(x, y) for x in sorted_tokens(a.nodes) for y in sorted_tokens(b.nodes)]
    edges = {}
    for e in sorted_tokens(a.hyperedges):
        for f in sorted_tokens(b.hyperedges):
            if a.arity[e] == b.arity[f]:
                edges[(e, f)] = {x: (a.valuation[e][x], b.valuation[f][x]) for x in a.arity[e]}
    prod = Hypergraph.make(a.names, nodes, edges)
    proj_a = HypergraphMorphism.make(prod, a, {p: p[0] for p in nodes},
                                     {ef: ef[0] for ef in edges}, {x: x for x in a.names})
    proj_b = HypergraphMorphism.make(prod, b, {p: p[1] for p in nodes},
                                     {ef: ef[1] for ef in edges}, {x: x for x in b.names})
    return prod, proj_a, proj_b


def sub_hypergraph_check(sub: Hypergraph, sup: Hypergraph) -> bool:
    """True iff sub is a tuple-closed restriction of sup."""
    if not (sub.nodes <= sup.nodes and sub.hyperedges <= sup.hyperedges
            and sub.names <= sup.names):
        return False
    for e in sub.hyperedges:
        if sub.arity[e] != sup.arity[e] or dict(sub.valuation[e]) != dict(sup.valuation[e]):
            return False
        if any(n not in sub.nodes for n in sub.valuation[e].values()):
            return False
    return True
