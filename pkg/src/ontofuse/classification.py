"""Classifications, infomorphisms, and their power/sum/quotient constructions.

A classification relates a finite set of instance tokens to a finite set
of type tokens through an incidence relation.  Infomorphisms are the
contravariant morphisms between classifications: types map forward,
instances map backward, tied together by the fundamental condition.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import DomainMismatch, RespectViolation
from .tokens import FrozenDict, Token, fdict, ltag, rtag, sorted_tokens, token_key


@dataclass(frozen=True)
class Classification:
    instances: frozenset
    types: frozenset
    incidence: frozenset  # of (instance, type) pairs

    @staticmethod
    def make(instances: Iterable, types: Iterable, incidence: Iterable) -> "Classification":
        return Classification(frozenset(instances), frozenset(types),
                              frozenset((i, t) for i, t in incidence))

    def classifies(self, instance: Token, type_: Token) -> bool:
        return (instance, type_) in self.incidence

    def intent(self, instance: Token) -> frozenset:
        return frozenset(t for t in self.types if (instance, t) in self.incidence)

    def extent(self, type_: Token) -> frozenset:
        return frozenset(i for i in self.instances if (i, type_) in self.incidence)


@dataclass(frozen=True)
class Infomorphism:
    source: Classification
    target: Classification
    type_map: FrozenDict  # source.types -> target.types
    instance_map: FrozenDict  # target.instances -> source.instances

    @staticmethod
    def make(source, target, type_map: Mapping, instance_map: Mapping) -> "Infomorphism":
        return Infomorphism(source, target, fdict(type_map), fdict(instance_map))


@dataclass(frozen=True)
class ClassificationInvariant:
    """A subset of instances plus generator pairs of a type endorelation."""

    instance_subset: frozenset
    type_relation: frozenset  # generator pairs; closure computed on use

    @staticmethod
    def make(instance_subset: Iterable, type_relation: Iterable) -> "ClassificationInvariant":
        return ClassificationInvariant(frozenset(instance_subset),
                                       frozenset((a, b) for a, b in type_relation))


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    violations: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


def validate_classification(c: Classification) -> ValidityReport:
    """Report every incidence pair whose endpoints are unknown tokens."""
    violations = []
    for (i, t) in sorted_tokens(c.incidence):
        if i not in c.instances:
            violations.append(("unknown-instance", i, t))
        if t not in c.types:
            violations.append(("unknown-type", i, t))
    return ValidityReport(not violations, tuple(violations))


def infomorphism_valid(f: Infomorphism) -> tuple[bool, Optional[tuple]]:
    """Check the fundamental condition; returns (ok, first witnessing pair).

    Raises DomainMismatch if either map is not total on its domain or
    leaves its codomain; that is an error distinct from condition failure.
    """
    if set(f.type_map) != set(f.source.types):
        raise DomainMismatch("type map is not total on source types")
    if any(v not in f.target.types for v in f.type_map.values()):
        raise DomainMismatch("type map leaves target types")
    if set(f.instance_map) != set(f.target.instances):
        raise DomainMismatch("instance map is not total on target instances")
    if any(v not in f.source.instances for v in f.instance_map.values()):
        raise DomainMismatch("instance map leaves source instances")
    for b in sorted_tokens(f.target.instances):
        for alpha in sorted_tokens(f.source.types):
            if f.source.classifies(f.instance_map[b], alpha) != \
                    f.target.classifies(b, f.type_map[alpha]):
                return False, (b, alpha)
    return True, None


def identity_infomorphism(c: Classification) -> Infomorphism:
    return Infomorphism.make(c, c, {t: t for t in c.types}, {i: i for i in c.instances})


def compose_infomorphisms(f: Infomorphism, g: Infomorphism) -> Infomorphism:
    """Composite f;g — types forward through f then g, instances backward."""
    if f.target is not g.source and f.target != g.source:
        raise DomainMismatch("infomorphisms not composable")
    return Infomorphism.make(
        f.source, g.target,
        {t: g.type_map[f.type_map[t]] for t in f.type_map},
        {b: f.instance_map[g.instance_map[b]] for b in g.instance_map})


def power_classification(s: Iterable) -> Classification:
    """Subsets of s classified by membership: X classifies alpha iff alpha in X."""
    elems = sorted_tokens(set(s))
    instances = [frozenset(c) for n in range(len(elems) + 1)
                 for c in itertools.combinations(elems, n)]
    incidence = [(x, a) for x in instances for a in x]
    return Classification.make(instances, elems, incidence)


def classification_sum(a: Classification, b: Classification) -> tuple[Classification, Infomorphism, Infomorphism]:
    """Tagged type union, instance product; returns (sum, left inj, right inj)."""
    types = [ltag(t) for t in a.types] + [rtag(t) for t in b.types]
    instances = [(x, y) for x in sorted_tokens(a.instances) for y in sorted_tokens(b.instances)]
    incidence = []
    for (x, y) in instances:
        incidence.extend(((x, y), ltag(t)) for t in a.types if a.classifies(x, t))
        incidence.extend(((x, y), rtag(t)) for t in b.types if b.classifies(y, t))
    s = Classification.make(instances, types, incidence)
    inj_a = Infomorphism.make(a, s, {t: ltag(t) for t in a.types}, {p: p[0] for p in instances})
    inj_b = Infomorphism.make(b, s, {t: rtag(t) for t in b.types}, {p: p[1] for p in instances})
    return s, inj_a, inj_b


def equivalence_closure(elements: Iterable, pairs: Iterable) -> dict:
    """Reflexive-symmetric-transitive closure as an element -> class map.

    Classes are canonically named by the sorted tuple of their members.
    """
    parent: dict = {e: e for e in elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (p, q) in pairs:
        if p not in parent or q not in parent:
            raise DomainMismatch(f"relation pair ({p!r}, {q!r}) mentions unknown element")
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[rp] = rq
    groups: dict = {}
    for e in parent:
        groups.setdefault(find(e), []).append(e)
    out = {}
    for members in groups.values():
        # singleton classes keep their member's name, so the empty
        # relation quotients to the identity on the nose
        cls = members[0] if len(members) == 1 else tuple(sorted_tokens(members))
        for m in members:
            out[m] = cls
    return out


def class_groups(cls: Mapping) -> list[list]:
    """Member groups of an element -> class map."""
    groups: dict = {}
    for e, c in cls.items():
        groups.setdefault(c, []).append(e)
    return list(groups.values())


def classification_quotient(c: Classification, j: ClassificationInvariant) -> tuple[Classification, Infomorphism]:
    """Quotient types by the closure of j's relation, keep j's instances.

    Raises RespectViolation if some retained instance distinguishes two
    related types.
    """
    if not j.instance_subset <= c.instances:
        raise DomainMismatch("invariant instance subset not contained in instances")
    cls = equivalence_closure(c.types, j.type_relation)
    for members in class_groups(cls):
        for a in sorted_tokens(j.instance_subset):
            hits = {c.classifies(a, t) for t in members}
            if len(hits) > 1:
                pos = next(t for t in members if c.classifies(a, t))
                neg = next(t for t in members if not c.classifies(a, t))
                raise RespectViolation(a, pos, neg)
    types = frozenset(cls.values())
    incidence = frozenset((a, cls[t]) for (a, t) in c.incidence if a in j.instance_subset)
    q = Classification(frozenset(j.instance_subset), types, incidence)
    canon = Infomorphism.make(c, q, dict(cls), {a: a for a in j.instance_subset})
    return q, canon
