"""Finite first-order models over a type language, with lax satisfaction.

A model pairs an entity classification with a relation classification
over one language.  Relation instances are abstract tuple tokens, each
carrying a variable-set arity and a valuation into the entities; the
common case (built by :meth:`Model.from_extents`) uses well-sorted
assignments as their own tokens, with incidence derived by the lax rule
"the restriction of the tuple lies in the extent".  Keeping tokens
abstract matters because the free model over a theory has relation
instances that share a valuation but differ in incidence.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .errors import DomainMismatch, LaxViolation, NameSetMismatch
from .hypergraph import Hypergraph
from .language import (And, Atomic, Exists, Expression, Forall, Implies,
                       LanguageEndorelation, LanguageMorphism, Not, Or, Subst,
                       TypeLanguage, free_vars, language_morphism_valid,
                       language_quotient, language_sum, identity_language_morphism,
                       compose_language_morphisms)
from .classification import Classification, class_groups, equivalence_closure
from .errors import IncompatibleQuotient, RespectViolation
from .tokens import FrozenDict, Token, fdict, ltag, rtag, sorted_tokens


Assignment = FrozenDict  # variables -> entities, finite domain


def assignment(m: Mapping) -> Assignment:
    return fdict(m)


def restrict(t: Mapping, domain: Iterable) -> Assignment:
    return fdict({x: t[x] for x in domain})


@dataclass(frozen=True)
class Model:
    language: TypeLanguage
    entities: frozenset
    entity_incidence: frozenset  # (entity, entity type)
    tuples: frozenset  # tuple tokens
    tuple_arity: FrozenDict  # token -> frozenset of variables
    tuple_valuation: FrozenDict  # token -> Assignment over its arity
    relation_incidence: frozenset  # (token, relation type)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_extents(language: TypeLanguage, entities: Iterable,
                     entity_incidence: Iterable, extents: Mapping,
                     extra_tuples: Iterable = ()) -> "Model":
        """Build a model whose tuples are the extent assignments themselves.

        ``extents`` maps relation types to iterables of assignments with
        domain exactly the relation's arity.  ``extra_tuples`` adds
        further well-sorted assignments as hyperedges; incidence is the
        lax derived one throughout.
        """
        ext = {rho: frozenset(fdict(t) for t in extents.get(rho, ()))
               for rho in language.relation_types}
        tokens = set(itertools.chain(*ext.values()))
        tokens.update(fdict(t) for t in extra_tuples)
        arity = {t: frozenset(t) for t in tokens}
        valuation = {t: t for t in tokens}
        incidence = set()
        for t in tokens:
            for rho in language.relation_types:
                if language.arity[rho] <= arity[t] and \
                        restrict(t, language.arity[rho]) in ext[rho]:
                    incidence.add((t, rho))
        m = Model(language, frozenset(entities), frozenset(tuple(p) for p in entity_incidence),
                  frozenset(tokens), fdict(arity), fdict(valuation), frozenset(incidence))
        m.check()
        return m

    @staticmethod
    def empty(language: TypeLanguage) -> "Model":
        return Model.from_extents(language, (), (), {})

    def check(self, well_sorted: bool = True) -> None:
        """Structural sanity; pass well_sorted=False to skip sort membership.

        Free models (and their sums and quotients) legitimately value
        uncovered coordinates outside their sort's extent.
        """
        for (e, a) in self.entity_incidence:
            if e not in self.entities or a not in self.language.entity_types:
                raise DomainMismatch(f"entity incidence pair ({e!r}, {a!r}) out of range")
        for t in self.tuples:
            if not self.tuple_arity[t] <= self.language.variables:
                raise DomainMismatch(f"tuple {t!r} indexed by unknown variables")
            if set(self.tuple_valuation[t]) != set(self.tuple_arity[t]):
                raise DomainMismatch(f"tuple {t!r} valuation not total on its arity")
            if not well_sorted:
                continue
            for x, e in self.tuple_valuation[t].items():
                if not self.entity_classifies(e, self.language.reference[x]):
                    raise DomainMismatch(f"tuple {t!r} ill-sorted at {x!r}")
        for (t, rho) in self.relation_incidence:
            if t not in self.tuples or rho not in self.language.relation_types:
                raise DomainMismatch(f"relation incidence pair ({t!r}, {rho!r}) out of range")
            if not self.language.arity[rho] <= self.tuple_arity[t]:
                raise DomainMismatch(f"{t!r} classified by {rho!r} of larger arity")

    # -- views -------------------------------------------------------------

    def entity_classifies(self, e: Token, a: Token) -> bool:
        return (e, a) in self.entity_incidence

    def entity_extent(self, a: Token) -> frozenset:
        return frozenset(e for e in self.entities if (e, a) in self.entity_incidence)

    def entity_intent(self, e: Token) -> frozenset:
        return frozenset(a for a in self.language.entity_types if (e, a) in self.entity_incidence)

    def relation_extent(self, rho: Token) -> frozenset:
        """Extent as assignments with domain exactly arity(rho), from incidence."""
        out = set()
        for (t, r) in self.relation_incidence:
            if r == rho:
                out.add(restrict(self.tuple_valuation[t], self.language.arity[rho]))
        return frozenset(out)

    def tuple_classifies(self, t: Token, rho: Token) -> bool:
        return (t, rho) in self.relation_incidence

    def entity_classification(self) -> Classification:
        return Classification(self.entities, self.language.entity_types, self.entity_incidence)

    def relation_classification(self) -> Classification:
        return Classification(self.tuples, self.language.relation_types, self.relation_incidence)

    def instance_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.language.variables, self.entities, self.tuples,
                          self.tuple_arity, self.tuple_valuation)

    def well_sorted_assignments(self, domain: Iterable) -> list[Assignment]:
        """All assignments with the given domain, each value in its sort's extent."""
        dom = sorted_tokens(set(domain))
        pools = [sorted_tokens(self.entity_extent(self.language.reference[x])) for x in dom]
        return [fdict(zip(dom, combo)) for combo in itertools.product(*pools)]


# --- satisfaction ----------------------------------------------------------

def holds(m: Model, t: Mapping, e: Expression) -> bool:
    """Lax satisfaction: evaluate e under the restriction of assignment t."""
    fv = free_vars(m.language, e)
    if not fv <= set(t):
        raise LaxViolation(f"assignment domain {sorted_tokens(t)} lacks {sorted_tokens(fv - set(t))}")
    return _eval(m, dict(t), e)


def _eval(m: Model, t: dict, e: Expression) -> bool:
    if isinstance(e, Atomic):
        return restrict(t, m.language.arity[e.relation]) in m.relation_extent(e.relation)
    if isinstance(e, Not):
        return not _eval(m, t, e.body)
    if isinstance(e, And):
        return _eval(m, t, e.left) and _eval(m, t, e.right)
    if isinstance(e, Or):
        return _eval(m, t, e.left) or _eval(m, t, e.right)
    if isinstance(e, Implies):
        return (not _eval(m, t, e.left)) or _eval(m, t, e.right)
    if isinstance(e, (Exists, Forall)):
        pool = m.entity_extent(m.language.reference[e.var])
        results = (_eval(m, {**t, e.var: c}, e.body) for c in sorted_tokens(pool))
        return any(results) if isinstance(e, Exists) else all(results)
    if isinstance(e, Subst):
        inner = {y: t[e.mapping[y]] for y in free_vars(m.language, e.body)}
        return _eval(m, inner, e.body)
    raise TypeError(f"not an expression: {e!r}")


def satisfies(m: Model, e: Expression) -> bool:
    """True iff e holds under every well-sorted assignment on its free variables."""
    return all(holds(m, t, e) for t in m.well_sorted_assignments(free_vars(m.language, e)))


# --- morphisms -------------------------------------------------------------

@dataclass(frozen=True)
class ModelMorphism:
    """Types forward via the language morphism, instances backward."""

    language_morphism: LanguageMorphism
    source: Model
    target: Model
    entity_map: FrozenDict  # target.entities -> source.entities
    tuple_map: FrozenDict  # target.tuples -> source.tuples

    @staticmethod
    def make(language_morphism, source, target, entity_map: Mapping,
             tuple_map: Mapping) -> "ModelMorphism":
        return ModelMorphism(language_morphism, source, target,
                             fdict(entity_map), fdict(tuple_map))


def token_satisfies(m: Model, t: Token, e: Expression) -> bool:
    """Lax expression incidence for a tuple token (atomics use incidence)."""
    if isinstance(e, Atomic):
        return m.tuple_classifies(t, e.relation)
    fv = free_vars(m.language, e)
    if not fv <= m.tuple_arity[t]:
        return False
    return holds(m, m.tuple_valuation[t], e)


def model_morphism_valid(f: ModelMorphism) -> tuple[bool, Optional[tuple]]:
    """Infomorphism conditions on both classifications plus arity coherence.

    Arity coherence pins the image tuple's arity to the varMap preimage
    of the target tuple's arity (and its varMap image to the reachable
    part of the target arity); point valuations are not compared, which
    is what lets intent-style morphisms such as the counit be morphisms.
    """
    ok, why = language_morphism_valid(f.language_morphism)
    if not ok:
        return False, ("language", why)
    lm = f.language_morphism
    if lm.source != f.source.language or lm.target != f.target.language:
        raise DomainMismatch("language morphism does not connect the models' languages")
    if set(f.entity_map) != set(f.target.entities) or \
            any(v not in f.source.entities for v in f.entity_map.values()):
        raise DomainMismatch("entity map not total target -> source entities")
    if set(f.tuple_map) != set(f.target.tuples) or \
            any(v not in f.source.tuples for v in f.tuple_map.values()):
        raise DomainMismatch("tuple map not total target -> source tuples")
    for b in sorted_tokens(f.target.entities):
        for alpha in sorted_tokens(f.source.language.entity_types):
            if f.source.entity_classifies(f.entity_map[b], alpha) != \
                    f.target.entity_classifies(b, lm.entity_map[alpha]):
                return False, ("entity", b, alpha)
    var_image = frozenset(lm.var_map.values())
    for t in sorted_tokens(f.target.tuples):
        s = f.tuple_map[t]
        t_arity = f.target.tuple_arity[t]
        preimage = frozenset(x for x in lm.source.variables if lm.var_map[x] in t_arity)
        if f.source.tuple_arity[s] != preimage:
            return False, ("arity-preimage", t)
        if frozenset(lm.var_map[x] for x in f.source.tuple_arity[s]) != t_arity & var_image:
            return False, ("arity-image", t)
        for rho in sorted_tokens(f.source.language.relation_types):
            img = lm.relation_map[rho]
            target_side = f.target.tuple_classifies(t, img) \
                if img in lm.target.relation_types \
                else token_satisfies(f.target, t, img)
            if f.source.tuple_classifies(s, rho) != target_side:
                return False, ("relation", t, rho)
    return True, None


def identity_model_morphism(m: Model) -> ModelMorphism:
    return ModelMorphism.make(identity_language_morphism(m.language), m, m,
                              {e: e for e in m.entities}, {t: t for t in m.tuples})


def compose_model_morphisms(f: ModelMorphism, g: ModelMorphism) -> ModelMorphism:
    """Composite f;g from f.source to g.target (instances pulled back through g then f)."""
    if f.target != g.source:
        raise DomainMismatch("model morphisms not composable")
    return ModelMorphism.make(
        compose_language_morphisms(f.language_morphism, g.language_morphism),
        f.source, g.target,
        {b: f.entity_map[g.entity_map[b]] for b in g.entity_map},
        {t: f.tuple_map[g.tuple_map[t]] for t in g.tuple_map})


# --- sums and dual quotients ----------------------------------------------

def model_sum(a: Model, b: Model) -> tuple[Model, ModelMorphism, ModelMorphism]:
    """Sum over a shared variable pool: tagged language, product instances.

    Hyperedges pair tuples of equal (untagged) arity; both tags of a
    shared variable value the product pair, keeping the product
    well-sorted against the tagged reference.
    """
    if a.language.variables != b.language.variables:
        raise NameSetMismatch("summed models must share a variable pool")
    lang, inj1, inj2 = language_sum(a.language, b.language)
    entities = [(x, y) for x in sorted_tokens(a.entities) for y in sorted_tokens(b.entities)]
    incidence = []
    for (x, y) in entities:
        incidence.extend(((x, y), ltag(al)) for al in a.entity_intent(x))
        incidence.extend(((x, y), rtag(al)) for al in b.entity_intent(y))
    tuples, arity, valuation, rel_inc = [], {}, {}, []
    for t1 in sorted_tokens(a.tuples):
        for t2 in sorted_tokens(b.tuples):
            if a.tuple_arity[t1] != b.tuple_arity[t2]:
                continue
            tok = (t1, t2)
            tuples.append(tok)
            pairs = {x: (a.tuple_valuation[t1][x], b.tuple_valuation[t2][x])
                     for x in a.tuple_arity[t1]}
            arity[tok] = frozenset(itertools.chain(
                (ltag(x) for x in pairs), (rtag(x) for x in pairs)))
            valuation[tok] = fdict({**{ltag(x): v for x, v in pairs.items()},
                                    **{rtag(x): v for x, v in pairs.items()}})
            rel_inc.extend((tok, ltag(r)) for r in a.language.relation_types
                           if a.tuple_classifies(t1, r))
            rel_inc.extend((tok, rtag(r)) for r in b.language.relation_types
                           if b.tuple_classifies(t2, r))
    s = Model(lang, frozenset(entities), frozenset(incidence), frozenset(tuples),
              fdict(arity), fdict(valuation), frozenset(rel_inc))
    s.check(well_sorted=False)
    nu1 = ModelMorphism.make(inj1, a, s, {p: p[0] for p in entities},
                             {tok: tok[0] for tok in tuples})
    nu2 = ModelMorphism.make(inj2, b, s, {p: p[1] for p in entities},
                             {tok: tok[1] for tok in tuples})
    return s, nu1, nu2


@dataclass(frozen=True)
class ModelDualInvariant:
    """Retained instances plus a type-language endorelation."""

    entity_subset: frozenset
    tuple_subset: frozenset
    type_relation: LanguageEndorelation

    @staticmethod
    def make(entity_subset: Iterable, tuple_subset: Iterable,
             type_relation: LanguageEndorelation) -> "ModelDualInvariant":
        return ModelDualInvariant(frozenset(entity_subset), frozenset(tuple_subset),
                                  type_relation)

    @staticmethod
    def identity(m: Model) -> "ModelDualInvariant":
        return ModelDualInvariant(m.entities, m.tuples, LanguageEndorelation.make())


def model_dual_quotient(a: Model, j: ModelDualInvariant) -> tuple[Model, ModelMorphism]:
    """Quotient language and classifications, keep j's instances (tuple-closed).

    Tuples referencing dropped entities are dropped (sub-hypergraph
    closure).  Raises RespectViolation when a retained instance
    distinguishes two identified types, IncompatibleQuotient when a
    retained tuple values two merged variables differently.
    """
    if not j.entity_subset <= a.entities or not j.tuple_subset <= a.tuples:
        raise DomainMismatch("invariant subsets exceed the model's instances")
    lang, canon = language_quotient(a.language, j.type_relation)
    var_cls = {x: canon.var_map[x] for x in a.language.variables}
    ent_cls = {al: canon.entity_map[al] for al in a.language.entity_types}
    rel_cls = {r: canon.relation_map[r] for r in a.language.relation_types}
    entities = j.entity_subset
    tuples = [t for t in sorted_tokens(j.tuple_subset)
              if all(v in entities for v in a.tuple_valuation[t].values())]
    # respect conditions
    ent_groups = class_groups(ent_cls)
    rel_groups = class_groups(rel_cls)
    for e in sorted_tokens(entities):
        for cls in ent_groups:
            hits = {a.entity_classifies(e, al) for al in cls}
            if len(hits) > 1:
                pos = next(al for al in cls if a.entity_classifies(e, al))
                neg = next(al for al in cls if not a.entity_classifies(e, al))
                raise RespectViolation(e, pos, neg)
    for t in tuples:
        for cls in rel_groups:
            applicable = [r for r in cls if a.language.arity[r] <= a.tuple_arity[t]]
            hits = {a.tuple_classifies(t, r) for r in applicable}
            if len(hits) > 1:
                pos = next(r for r in applicable if a.tuple_classifies(t, r))
                neg = next(r for r in applicable if not a.tuple_classifies(t, r))
                raise RespectViolation(t, pos, neg)
    arity, valuation = {}, {}
    for t in tuples:
        arity[t] = frozenset(var_cls[x] for x in a.tuple_arity[t])
        val = {}
        for x in a.tuple_arity[t]:
            prior = val.setdefault(var_cls[x], a.tuple_valuation[t][x])
            if prior != a.tuple_valuation[t][x]:
                raise IncompatibleQuotient(x, var_cls[x],
                                           f"tuple {t!r} values merged variables differently")
        valuation[t] = fdict(val)
    incidence = frozenset((e, ent_cls[al]) for (e, al) in a.entity_incidence if e in entities)
    rel_inc = frozenset((t, rel_cls[r]) for (t, r) in a.relation_incidence if t in set(tuples))
    q = Model(lang, frozenset(entities), incidence, frozenset(tuples),
              fdict(arity), fdict(valuation), rel_inc)
    q.check(well_sorted=False)
    morphism = ModelMorphism.make(canon, a, q, {e: e for e in entities},
                                  {t: t for t in tuples})
    return q, morphism
