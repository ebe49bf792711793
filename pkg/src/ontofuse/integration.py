"""End-to-end ontology integration: alignment, fusion, and the practical path.

Alignment builds the W-shaped diagram: community logics, portals,
portal links, a mediating theory with theoretical links into the
portals' theories, and the derived logical links obtained by the free
adjunction.  Unification fuses the diagram: quotient of the portal sum
by the invariant the logical links induce.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import AgreementFailure, DomainMismatch, EdgeInvalid
from .language import LanguageEndorelation, identity_language_morphism
from .logic import (Logic, LogicMorphism, compose_logic_morphisms, counit,
                    fiber, free_logic, free_to_mediating, fusion,
                    identity_logic_morphism, is_sound, logic_morphism_valid,
                    logic_sum, restrict_logic, transpose)
from .model import Model, fdict
from .theory import (DEFAULT_BUDGET, Theory, TheoryMorphism,
                     identity_theory_morphism, theory_morphism_valid,
                     theory_quotient, theory_sum)
from .tokens import ltag, rtag, sorted_tokens


@dataclass(frozen=True)
class AlignmentDiagram:
    community_left: Logic
    community_right: Logic
    portal_left: Logic
    portal_right: Logic
    portal_link_left: LogicMorphism  # L1 => P1
    portal_link_right: LogicMorphism  # L2 => P2
    mediating_theory: Theory
    theoretical_link_left: TheoryMorphism  # T => th(P1)
    theoretical_link_right: TheoryMorphism  # T => th(P2)
    logical_link_left: LogicMorphism  # log(T) => P1, derived
    logical_link_right: LogicMorphism  # log(T) => P2, derived


@dataclass(frozen=True)
class IntegrationResult:
    fused: Logic
    canonical: LogicMorphism  # sum => fused
    injection_left: LogicMorphism  # P1 => fused
    injection_right: LogicMorphism  # P2 => fused
    final_left: LogicMorphism  # L1 => fused
    final_right: LogicMorphism  # L2 => fused


def build_alignment(l1: Logic, l2: Logic, p1: Logic, p2: Logic,
                    link1: LogicMorphism, link2: LogicMorphism,
                    t: Theory, g1: TheoryMorphism, g2: TheoryMorphism,
                    bound: int, budget: int = DEFAULT_BUDGET) -> AlignmentDiagram:
    """Validate every edge and derive the logical links by transposition."""
    for l, name in ((l1, "left community"), (l2, "right community"),
                    (p1, "left portal"), (p2, "right portal")):
        if not is_sound(l):
            raise EdgeInvalid(name, "not sound")
    for link, src, tgt, name in ((link1, l1, p1, "left portal link"),
                                 (link2, l2, p2, "right portal link")):
        if link.source != src or link.target != tgt:
            raise EdgeInvalid(name, "endpoints do not match the diagram")
        verdict = logic_morphism_valid(link, bound, budget)
        if not verdict:
            raise EdgeInvalid(name, verdict.detail)
    for g, p, name in ((g1, p1, "left alignment link"), (g2, p2, "right alignment link")):
        if g.source != t or g.target != p.theory:
            raise EdgeInvalid(name, "endpoints do not match the diagram")
        verdict = theory_morphism_valid(g, bound, budget)
        if not verdict:
            raise EdgeInvalid(name, verdict.detail or verdict.per_axiom)
    k1 = transpose(g1, p1)
    k2 = transpose(g2, p2)
    for k, name in ((k1, "left logical link"), (k2, "right logical link")):
        verdict = logic_morphism_valid(k, bound, budget)
        if not verdict:
            raise EdgeInvalid(name, verdict.detail)
    return AlignmentDiagram(l1, l2, p1, p2, link1, link2, t, g1, g2, k1, k2)


def unify(d: AlignmentDiagram) -> IntegrationResult:
    """Fusion of the alignment diagram, with the final integration opspan."""
    fused, q, v1, v2 = fusion(d.logical_link_left, d.logical_link_right)
    return IntegrationResult(
        fused, q, v1, v2,
        compose_logic_morphisms(d.portal_link_left, v1),
        compose_logic_morphisms(d.portal_link_right, v2))


def trivial_integration(l1: Logic, l2: Logic, bound: int = 2,
                        budget: int = DEFAULT_BUDGET) -> IntegrationResult:
    """The 'nothing' extreme: empty alignment; the fused logic is the sum."""
    t = Theory.make(_empty_language(), ())
    g1 = TheoryMorphism(_empty_morphism_into(l1.theory), t, l1.theory)
    g2 = TheoryMorphism(_empty_morphism_into(l2.theory), t, l2.theory)
    d = build_alignment(l1, l2, l1, l2, identity_logic_morphism(l1),
                        identity_logic_morphism(l2), t, g1, g2, bound, budget)
    return unify(d)


def self_integration(l: Logic, bound: int = 2,
                     budget: int = DEFAULT_BUDGET) -> IntegrationResult:
    """The 'everything' extreme: full identity alignment of l with itself."""
    g = identity_theory_morphism(l.theory)
    d = build_alignment(l, l, l, l, identity_logic_morphism(l),
                        identity_logic_morphism(l), l.theory, g, g, bound, budget)
    return unify(d)


def _empty_language():
    from .language import TypeLanguage
    return TypeLanguage.make((), (), {}, {})


def _empty_morphism_into(t: Theory):
    from .language import LanguageMorphism
    return LanguageMorphism.make(_empty_language(), t.language, {}, {}, {})


# --- the practical alternative ----------------------------------------------

@dataclass(frozen=True)
class PracticalReport:
    mediating_logic: Logic  # the common fiber L@C
    free_to_mediating: LogicMorphism  # log(T) => L@C
    comparison: LogicMorphism  # free fusion => C fusion, identity on types
    fusion_theory: Theory  # th(L1) +_T th(L2), recomputed independently
    universe: frozenset  # of the fused logic, relabelled back to C


def practical_integrate(l1: Logic, l2: Logic, c: Iterable, t: Theory,
                        g1: TheoryMorphism, g2: TheoryMorphism, bound: int,
                        budget: int = DEFAULT_BUDGET) -> tuple[IntegrationResult, PracticalReport]:
    """Restrict both communities to C, check the fiber agreement, fuse over it.

    The three agreements: the mediating universe is C, the mediating
    theory is t, and both fiber images of the restricted portals are the
    same logic.  The fused logic is relabelled along the diagonal so its
    universe is literally C.
    """
    c = frozenset(c)
    if not c <= l1.model.entities & l2.model.entities:
        raise DomainMismatch("C must be a subset of both universes")
    p1, link1 = restrict_logic(l1, c)
    p2, link2 = restrict_logic(l2, c)
    if g1.source != t or g2.source != t:
        raise DomainMismatch("alignment links must start at the mediating theory")
    if g1.target != p1.theory or g2.target != p2.theory:
        raise DomainMismatch("alignment links must target the community theories")
    fib1 = fiber(g1, p1)
    fib2 = fiber(g2, p2)
    _check_agreement(fib1, fib2)
    k = fib1  # the mediating logic L@C
    m1 = LogicMorphism.make(k, p1, g1.language_morphism,
                            {e: e for e in p1.model.entities},
                            {tok: tok for tok in p1.model.tuples})
    m2 = LogicMorphism.make(k, p2, g2.language_morphism,
                            {e: e for e in p2.model.entities},
                            {tok: tok for tok in p2.model.tuples})
    fused, q, v1, v2 = fusion(m1, m2)
    # instances that agree are exactly the diagonal pairs; relabel (x, x) -> x
    entity_relabel = {p: p[0] for p in fused.model.entities}
    tuple_relabel = {p: p[0] for p in fused.model.tuples}
    if any(p[0] != p[1] for p in fused.model.entities) or \
            any(p[0] != p[1] for p in fused.model.tuples):
        raise AgreementFailure("fused instances are not diagonal pairs")
    fused = _relabel_logic(fused, entity_relabel, tuple_relabel)
    q = _retarget(q, fused, entity_relabel, tuple_relabel)
    v1 = _retarget(v1, fused, entity_relabel, tuple_relabel)
    v2 = _retarget(v2, fused, entity_relabel, tuple_relabel)
    result = IntegrationResult(fused, q, v1, v2,
                               compose_logic_morphisms(link1, v1),
                               compose_logic_morphisms(link2, v2))
    # structural claims: fusion theory and universe
    fusion_th = _fusion_theory(l1.theory, l2.theory, t, g1, g2)
    if fused.theory != fusion_th:
        raise AgreementFailure("fused theory differs from the fusion of the theories")
    if fused.model.entities != c:
        raise AgreementFailure("fused universe differs from C")
    # free-logic path and its comparison morphism into the C-fusion
    km = free_to_mediating(t, k)
    k1 = transpose(g1, p1)
    k2 = transpose(g2, p2)
    free_fused, _, _, _ = fusion(k1, k2)
    comparison = _free_fusion_comparison(free_fused, fused, entity_relabel, tuple_relabel)
    verdict = logic_morphism_valid(comparison, bound, budget)
    if not verdict:
        raise AgreementFailure(f"comparison morphism invalid: {verdict.detail!r}")
    report = PracticalReport(k, km, comparison, fusion_th, fused.model.entities)
    return result, report


def _check_agreement(fib1: Logic, fib2: Logic) -> None:
    """Exact structural equality of the two fiber logics, first difference named."""
    if fib1 == fib2:
        return
    m1, m2 = fib1.model, fib2.model
    for field, a, b in (("entities", m1.entities, m2.entities),
                        ("entity incidence", m1.entity_incidence, m2.entity_incidence),
                        ("tuples", m1.tuples, m2.tuples),
                        ("relation incidence", m1.relation_incidence, m2.relation_incidence)):
        if a != b:
            diff = sorted_tokens(a ^ b)[0]
            raise AgreementFailure(f"{field} differ at {diff!r}")
    raise AgreementFailure("fiber logics differ structurally")


def _fusion_theory(t1: Theory, t2: Theory, t: Theory,
                   g1: TheoryMorphism, g2: TheoryMorphism) -> Theory:
    """th(L1) +_T th(L2): quotient of the sum by the alignment-induced relation."""
    s, _, _ = theory_sum(t1, t2)
    lm1, lm2 = g1.language_morphism, g2.language_morphism
    rel = LanguageEndorelation.make(
        entity_pairs=[(ltag(lm1.entity_map[a]), rtag(lm2.entity_map[a]))
                      for a in t.language.entity_types],
        relation_pairs=[(ltag(lm1.relation_map[r]), rtag(lm2.relation_map[r]))
                        for r in t.language.relation_types],
        variable_pairs=[(ltag(lm1.var_map[x]), rtag(lm2.var_map[x]))
                        for x in t.language.variables])
    q, _ = theory_quotient(s, rel)
    return q


def _relabel_logic(l: Logic, entity_map: Mapping, tuple_map: Mapping) -> Logic:
    m = l.model
    model = Model(m.language,
                  frozenset(entity_map[e] for e in m.entities),
                  frozenset((entity_map[e], a) for (e, a) in m.entity_incidence),
                  frozenset(tuple_map[t] for t in m.tuples),
                  fdict({tuple_map[t]: m.tuple_arity[t] for t in m.tuples}),
                  fdict({tuple_map[t]: fdict({x: entity_map[e] for x, e in m.tuple_valuation[t].items()})
                         for t in m.tuples}),
                  frozenset((tuple_map[t], r) for (t, r) in m.relation_incidence))
    return Logic(l.theory, model,
                 frozenset(entity_map[e] for e in l.normal_entities),
                 frozenset(tuple_map[t] for t in l.normal_tuples))


def _retarget(f: LogicMorphism, new_target: Logic, entity_relabel: Mapping,
              tuple_relabel: Mapping) -> LogicMorphism:
    return LogicMorphism.make(
        f.source, new_target, f.language_morphism,
        {entity_relabel[e]: f.entity_map[e] for e in f.entity_map},
        {tuple_relabel[t]: f.tuple_map[t] for t in f.tuple_map})


def _free_fusion_comparison(free_fused: Logic, c_fused: Logic,
                            entity_relabel: Mapping, tuple_relabel: Mapping) -> LogicMorphism:
    """Identity on types, the diagonal function on instances in C."""
    if free_fused.language != c_fused.language:
        raise AgreementFailure("free fusion and C fusion have different type languages")
    diag_entities = {e: (e, e) for e in c_fused.model.entities}
    diag_tuples = {t: (t, t) for t in c_fused.model.tuples}
    missing = [p for p in diag_entities.values() if p not in free_fused.model.entities]
    missing += [p for p in diag_tuples.values() if p not in free_fused.model.tuples]
    if missing:
        raise AgreementFailure(f"diagonal instance {missing[0]!r} missing from the free fusion")
    return LogicMorphism.make(free_fused, c_fused,
                              identity_language_morphism(c_fused.language),
                              diag_entities, diag_tuples)
