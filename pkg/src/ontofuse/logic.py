"""Logics (theory + model + normal instances) and their calculus.

This layer carries the integration machinery: soundness, free logics
and the adjunction (counit, transpose), sums, dual quotients, fusion
pushouts, restriction to a sub-universe, and fiber reclassification
along a theory morphism.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import BudgetExceeded, DomainMismatch, SoundnessViolation
from .language import (Expression, LanguageMorphism, TypeLanguage,
                       compose_language_morphisms, identity_language_morphism,
                       free_vars)
from .model import (Model, ModelDualInvariant, ModelMorphism,
                    compose_model_morphisms, fdict, holds, model_dual_quotient,
                    model_morphism_valid, model_sum, token_satisfies)
from .theory import (DEFAULT_BUDGET, MorphismVerdict, Theory, TheoryMorphism,
                     identity_theory_morphism, theory_morphism_valid,
                     theory_quotient, theory_sum)
from .tokens import Token, ltag, rtag, sorted_tokens


@dataclass(frozen=True)
class Logic:
    theory: Theory
    model: Model
    normal_entities: frozenset
    normal_tuples: frozenset

    @staticmethod
    def make(theory: Theory, model: Model, normal_entities: Optional[Iterable] = None,
             normal_tuples: Optional[Iterable] = None) -> "Logic":
        """Normal subsets default to everything (a sound logic)."""
        ne = model.entities if normal_entities is None else frozenset(normal_entities)
        nt = model.tuples if normal_tuples is None else frozenset(normal_tuples)
        l = Logic(theory, model, ne, nt)
        l.check()
        return l

    def check(self) -> None:
        if self.theory.language != self.model.language:
            raise DomainMismatch("theory and model do not share a language")
        if not self.normal_entities <= self.model.entities:
            raise DomainMismatch("normal entities exceed the universe")
        if not self.normal_tuples <= self.model.tuples:
            raise DomainMismatch("normal tuples exceed the tuples")
        for t in self.normal_tuples:
            if any(v not in self.normal_entities
                   for v in self.model.tuple_valuation[t].values()):
                raise DomainMismatch(f"normal tuple {t!r} has an abnormal component")

    @property
    def language(self) -> TypeLanguage:
        return self.theory.language

    @property
    def universe(self) -> frozenset:
        return self.model.entities


def is_sound(l: Logic) -> bool:
    """Sound iff every entity and every tuple is normal."""
    return l.normal_entities == l.model.entities and l.normal_tuples == l.model.tuples


def sound_part(l: Logic) -> Logic:
    """Throw away abnormal instances; restrict both classifications."""
    m = l.model
    entities = l.normal_entities
    tuples = frozenset(t for t in l.normal_tuples
                       if all(v in entities for v in m.tuple_valuation[t].values()))
    restricted = Model(m.language, entities,
                       frozenset(p for p in m.entity_incidence if p[0] in entities),
                       tuples,
                       fdict({t: m.tuple_arity[t] for t in tuples}),
                       fdict({t: m.tuple_valuation[t] for t in tuples}),
                       frozenset(p for p in m.relation_incidence if p[0] in tuples))
    return Logic(l.theory, restricted, entities, tuples)


def normality_holds(l: Logic) -> bool:
    """Do the normal instances satisfy the axioms?  Evaluated in the sound part."""
    sp = sound_part(l)
    from .model import satisfies
    return all(satisfies(sp.model, a) for a in l.theory.axioms)


# --- morphisms -------------------------------------------------------------

@dataclass(frozen=True)
class LogicMorphism:
    """One language morphism shared by the theory and model aspects."""

    source: Logic
    target: Logic
    language_morphism: LanguageMorphism
    entity_map: Mapping  # target entities -> source entities
    tuple_map: Mapping  # target tuples -> source tuples

    @staticmethod
    def make(source, target, language_morphism, entity_map: Mapping,
             tuple_map: Mapping) -> "LogicMorphism":
        return LogicMorphism(source, target, language_morphism,
                             fdict(entity_map), fdict(tuple_map))

    def theory_aspect(self) -> TheoryMorphism:
        return TheoryMorphism(self.language_morphism, self.source.theory, self.target.theory)

    def model_aspect(self) -> ModelMorphism:
        return ModelMorphism(self.language_morphism, self.source.model,
                             self.target.model, self.entity_map, self.tuple_map)


def identity_logic_morphism(l: Logic) -> LogicMorphism:
    return LogicMorphism.make(l, l, identity_language_morphism(l.language),
                              {e: e for e in l.model.entities},
                              {t: t for t in l.model.tuples})


def compose_logic_morphisms(f: LogicMorphism, g: LogicMorphism) -> LogicMorphism:
    if f.target != g.source:
        raise DomainMismatch("logic morphisms not composable")
    return LogicMorphism.make(
        f.source, g.target,
        compose_language_morphisms(f.language_morphism, g.language_morphism),
        {b: f.entity_map[g.entity_map[b]] for b in g.entity_map},
        {t: f.tuple_map[g.tuple_map[t]] for t in g.tuple_map})


def logic_morphism_valid(f: LogicMorphism, max_entities: int,
                         budget: int = DEFAULT_BUDGET) -> MorphismVerdict:
    """Theory aspect (bound-qualified) and model aspect verdicts, conjoined."""
    tv = theory_morphism_valid(f.theory_aspect(), max_entities, budget)
    if not tv:
        return MorphismVerdict(False, tv.per_axiom, ("theory", tv.detail))
    ok, why = model_morphism_valid(f.model_aspect())
    if not ok:
        return MorphismVerdict(False, tv.per_axiom, ("model", why))
    return MorphismVerdict(True, tv.per_axiom)


# --- free logic and the adjunction -----------------------------------------

def free_tuple_tokens(lang: TypeLanguage) -> list[tuple]:
    """All (X, R) pairs: X a variable subset, R relation types with arity within X."""
    out = []
    variables = sorted_tokens(lang.variables)
    for n in range(len(variables) + 1):
        for xs in itertools.combinations(variables, n):
            x_set = frozenset(xs)
            fitting = [r for r in sorted_tokens(lang.relation_types)
                       if lang.arity[r] <= x_set]
            for k in range(len(fitting) + 1):
                for rs in itertools.combinations(fitting, k):
                    out.append((x_set, frozenset(rs)))
    return out


def free_signature(lang: TypeLanguage, x_set: frozenset, rels: frozenset) -> dict:
    """Coordinate at x: the signature sorts of the members whose arity covers x."""
    return {x: frozenset(lang.reference[x] for r in rels if x in lang.arity[r])
            for x in x_set}


def free_logic(t: Theory, budget: int = DEFAULT_BUDGET, strict: bool = False) -> Logic:
    """The logic freely generated over a theory.

    Entity instances are the subsets of the entity types (classified by
    membership); relation instances are the (X, R) pairs with the
    signature-coordinate valuation.  Tuples failing an applicable axiom
    are marked abnormal and the sound part is returned.
    """
    lang = t.language
    if strict:
        for alpha in sorted_tokens(lang.entity_types):
            covered = any(len(lang.arity[r]) == 1 and
                          lang.reference[next(iter(lang.arity[r]))] == alpha
                          for r in lang.relation_types)
            if not covered:
                raise DomainMismatch(f"strict mode: sort {alpha!r} has no unary relation type")
    n_entities = 2 ** len(lang.entity_types)
    if n_entities > budget:
        raise BudgetExceeded(f"power classification would have {n_entities} instances")
    elems = sorted_tokens(lang.entity_types)
    entities = [frozenset(c) for n in range(len(elems) + 1)
                for c in itertools.combinations(elems, n)]
    incidence = [(x, a) for x in entities for a in x]
    tokens = free_tuple_tokens(lang)
    if len(tokens) > budget:
        raise BudgetExceeded(f"free model would have {len(tokens)} tuples")
    arity = {tok: tok[0] for tok in tokens}
    valuation = {tok: fdict(free_signature(lang, tok[0], tok[1])) for tok in tokens}
    rel_inc = [(tok, r) for tok in tokens for r in tok[1]]
    model = Model(lang, frozenset(entities), frozenset(incidence), frozenset(tokens),
                  fdict(arity), fdict(valuation), frozenset(rel_inc))
    logic = Logic(t, model, model.entities,
                  frozenset(tok for tok in tokens if _tuple_conforms(model, t, tok)))
    return sound_part(logic)


def _tuple_conforms(model: Model, t: Theory, token: tuple) -> bool:
    arity = model.tuple_arity[token]
    return all(holds(model, model.tuple_valuation[token], a)
               for a in t.axioms if free_vars(model.language, a) <= arity)


def counit(l: Logic) -> LogicMorphism:
    """Canonical morphism from the free logic over th(l) back to l.

    Identity on types; an entity goes to its intent, a tuple to the pair
    of its arity and the set of relation types that classify it.
    """
    if not is_sound(l):
        raise SoundnessViolation("counit requires a sound logic")
    free = free_logic(l.theory)
    entity_map = {e: l.model.entity_intent(e) for e in l.model.entities}
    tuple_map = {}
    for t in l.model.tuples:
        tok = (l.model.tuple_arity[t],
               frozenset(r for r in l.language.relation_types
                         if l.model.tuple_classifies(t, r)))
        if tok not in free.model.tuples:
            raise SoundnessViolation(f"image token {tok!r} was abnormal in the free logic")
        tuple_map[t] = tok
    return LogicMorphism.make(free, l, identity_language_morphism(l.language),
                              entity_map, tuple_map)


def transpose(g: TheoryMorphism, l: Logic) -> LogicMorphism:
    """Adjoint transpose: lift g : T => th(l) to free_logic(T) => l.

    Types via g; an entity of l goes to the set of mediating entity types
    whose image classifies it, a tuple to (varMap-preimage arity, the
    mediating relation types whose image classifies it).
    """
    if g.target != l.theory:
        raise DomainMismatch("transpose target theory must be the logic's theory")
    if not is_sound(l):
        raise SoundnessViolation("transpose requires a sound logic")
    free = free_logic(g.source)
    lm = g.language_morphism
    entity_map = {e: frozenset(a for a in g.source.language.entity_types
                               if l.model.entity_classifies(e, lm.entity_map[a]))
                  for e in l.model.entities}
    tuple_map = {}
    for t in l.model.tuples:
        x_set = frozenset(x for x in g.source.language.variables
                          if lm.var_map[x] in l.model.tuple_arity[t])
        rels = frozenset(r for r in g.source.language.relation_types
                         if g.source.language.arity[r] <= x_set
                         and _image_classifies(l.model, t, lm.relation_map[r]))
        tok = (x_set, rels)
        if tok not in free.model.tuples:
            raise SoundnessViolation(f"image token {tok!r} was abnormal in the free logic")
        tuple_map[t] = tok
    return LogicMorphism.make(free, l, lm, entity_map, tuple_map)


def _image_classifies(model: Model, t: Token, image) -> bool:
    if image in model.language.relation_types:
        return model.tuple_classifies(t, image)
    return token_satisfies(model, t, image)


# --- sums, quotients, fusion -----------------------------------------------

def logic_sum(l1: Logic, l2: Logic) -> tuple[Logic, LogicMorphism, LogicMorphism]:
    """Sum of theories and of models; a pair is normal iff both halves are."""
    st, ti1, ti2 = theory_sum(l1.theory, l2.theory)
    sm, mi1, mi2 = model_sum(l1.model, l2.model)
    normal_entities = frozenset(p for p in sm.entities
                                if p[0] in l1.normal_entities and p[1] in l2.normal_entities)
    normal_tuples = frozenset(p for p in sm.tuples
                              if p[0] in l1.normal_tuples and p[1] in l2.normal_tuples)
    s = Logic(st, sm, normal_entities, normal_tuples)
    nu1 = LogicMorphism.make(l1, s, ti1.language_morphism, mi1.entity_map, mi1.tuple_map)
    nu2 = LogicMorphism.make(l2, s, ti2.language_morphism, mi2.entity_map, mi2.tuple_map)
    return s, nu1, nu2


LogicDualInvariant = ModelDualInvariant  # the theory part shares the type relation


def logic_dual_quotient(l: Logic, j: ModelDualInvariant) -> tuple[Logic, LogicMorphism]:
    """Quotient the model and the theory by the same dual invariant."""
    qm, m_canon = model_dual_quotient(l.model, j)
    qt, t_canon = theory_quotient(l.theory, j.type_relation)
    q = Logic(qt, qm,
              l.normal_entities & qm.entities,
              l.normal_tuples & qm.tuples)
    canon = LogicMorphism.make(l, q, t_canon.language_morphism,
                               m_canon.entity_map, m_canon.tuple_map)
    return q, canon


def fusion_invariant(f0: LogicMorphism, f1: LogicMorphism,
                     s: Logic) -> ModelDualInvariant:
    """The dual invariant a span induces on the sum of its targets.

    Instances: the pairs on which the two backward instance maps agree
    (entities and tuples separately).  Types: tagged pairs linked by a
    type of the common source.
    """
    from .language import LanguageEndorelation
    if f0.source != f1.source:
        raise DomainMismatch("fusion requires a common source logic")
    lm0, lm1 = f0.language_morphism, f1.language_morphism
    for lm in (lm0, lm1):
        if any(isinstance(v, Expression) for v in lm.relation_map.values()):
            raise DomainMismatch("fusion requires non-refinement alignment links")
    entities = frozenset(p for p in s.model.entities
                         if f0.entity_map[p[0]] == f1.entity_map[p[1]])
    tuples = frozenset(p for p in s.model.tuples
                       if f0.tuple_map[p[0]] == f1.tuple_map[p[1]])
    src = f0.source.language
    rel = LanguageEndorelation.make(
        entity_pairs=[(ltag(lm0.entity_map[a]), rtag(lm1.entity_map[a]))
                      for a in src.entity_types],
        relation_pairs=[(ltag(lm0.relation_map[r]), rtag(lm1.relation_map[r]))
                        for r in src.relation_types],
        variable_pairs=[(ltag(lm0.var_map[x]), rtag(lm1.var_map[x]))
                        for x in src.variables])
    return ModelDualInvariant(entities, tuples, rel)


def fusion(f0: LogicMorphism, f1: LogicMorphism) -> tuple[Logic, LogicMorphism, LogicMorphism, LogicMorphism]:
    """Pushout of a span: quotient of the sum by the induced invariant.

    Returns (fused, canonical q, injection from f0.target, injection
    from f1.target); the injections are the sum injections composed
    with q.
    """
    for f in (f0, f1):
        if not (is_sound(f.source) and is_sound(f.target)):
            raise SoundnessViolation("fusion requires sound logics throughout")
    s, nu0, nu1 = logic_sum(f0.target, f1.target)
    j = fusion_invariant(f0, f1, s)
    fused, q = logic_dual_quotient(s, j)
    return fused, q, compose_logic_morphisms(nu0, q), compose_logic_morphisms(nu1, q)


# --- restriction and fibers ------------------------------------------------

def restrict_logic(l: Logic, c: Iterable) -> tuple[Logic, LogicMorphism]:
    """l@C: keep the entities of C and the tuples valued inside C.

    The portal morphism l => l@C is the identity on types and the
    inclusion on instances.
    """
    c = frozenset(c)
    if not c <= l.model.entities:
        raise DomainMismatch("restriction set is not a subset of the universe")
    m = l.model
    tuples = frozenset(t for t in m.tuples
                       if all(v in c for v in m.tuple_valuation[t].values()))
    restricted = Model(m.language, c,
                       frozenset(p for p in m.entity_incidence if p[0] in c),
                       tuples,
                       fdict({t: m.tuple_arity[t] for t in tuples}),
                       fdict({t: m.tuple_valuation[t] for t in tuples}),
                       frozenset(p for p in m.relation_incidence if p[0] in tuples))
    out = Logic(l.theory, restricted, c & l.normal_entities, tuples & l.normal_tuples)
    portal = LogicMorphism.make(l, out, identity_language_morphism(l.language),
                                {e: e for e in c}, {t: t for t in tuples})
    return out, portal


def fiber(g: TheoryMorphism, p: Logic) -> Logic:
    """Inverse-image reclassification of p along g: same instances, theory g.source.

    An instance is classified by a mediating type exactly when p
    classifies it by the type's image; tuple arities are re-indexed by
    the varMap preimage.
    """
    if g.target != p.theory:
        raise DomainMismatch("fiber requires g's target to be the logic's theory")
    if not is_sound(p):
        raise SoundnessViolation("fiber requires a sound logic")
    lm = g.language_morphism
    lang = g.source.language
    m = p.model
    incidence = frozenset((e, a) for e in m.entities for a in lang.entity_types
                          if m.entity_classifies(e, lm.entity_map[a]))
    arity, valuation = {}, {}
    for t in m.tuples:
        pre = frozenset(x for x in lang.variables if lm.var_map[x] in m.tuple_arity[t])
        arity[t] = pre
        valuation[t] = fdict({x: m.tuple_valuation[t][lm.var_map[x]] for x in pre})
    rel_inc = frozenset((t, r) for t in m.tuples for r in lang.relation_types
                        if lang.arity[r] <= arity[t]
                        and _image_classifies(m, t, lm.relation_map[r]))
    model = Model(lang, m.entities, incidence, m.tuples,
                  fdict(arity), fdict(valuation), rel_inc)
    model.check()
    return Logic(g.source, model, m.entities, m.tuples)


def free_to_mediating(t: Theory, l_at_c: Logic) -> LogicMorphism:
    """The counit formula aimed at a mediating fiber logic with theory t."""
    if l_at_c.theory != t:
        raise DomainMismatch("mediating logic must have the given theory")
    return transpose(identity_theory_morphism(t), l_at_c)
