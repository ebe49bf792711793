"""First-order type languages, their morphisms, and the expression algebra.

A type language has variables, entity types, relation types with
set-valued arities, and one global reference function from variables to
entity types; the signature of a relation type is the restriction of
reference to its arity.  Expressions are the usual first-order
connectives and quantifiers over atomic relation types, plus
variable-for-variable substitution.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .errors import CaptureError, DomainMismatch, IncompatibleQuotient
from .classification import equivalence_closure
from .tokens import FrozenDict, Token, fdict, ltag, rtag, sorted_tokens, token_key


@dataclass(frozen=True)
class TypeLanguage:
    variables: frozenset
    entity_types: frozenset
    relation_types: frozenset
    reference: FrozenDict  # variables -> entity_types
    arity: FrozenDict  # relation_types -> frozenset of variables

    @staticmethod
    def make(variables: Iterable, entity_types: Iterable, reference: Mapping,
             arity: Mapping) -> "TypeLanguage":
        lang = TypeLanguage(frozenset(variables), frozenset(entity_types),
                            frozenset(arity), fdict(reference),
                            fdict({r: frozenset(v) for r, v in arity.items()}))
        lang.check()
        return lang

    def check(self) -> None:
        if set(self.reference) != set(self.variables):
            raise DomainMismatch("reference not total on variables")
        if any(v not in self.entity_types for v in self.reference.values()):
            raise DomainMismatch("reference leaves entity types")
        for rho in self.relation_types:
            if not self.arity[rho] <= self.variables:
                raise DomainMismatch(f"arity of {rho!r} uses unknown variables")

    def signature(self, rho: Token) -> FrozenDict:
        """Reference restricted to the relation type's arity."""
        return fdict({x: self.reference[x] for x in self.arity[rho]})


# --- Expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Expression:
    pass


@dataclass(frozen=True)
class Atomic(Expression):
    relation: Token


@dataclass(frozen=True)
class Not(Expression):
    body: Expression


@dataclass(frozen=True)
class And(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Or(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Implies(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Exists(Expression):
    var: Token
    body: Expression


@dataclass(frozen=True)
class Forall(Expression):
    var: Token
    body: Expression


@dataclass(frozen=True)
class Subst(Expression):
    mapping: FrozenDict  # variables -> variables, defined on free vars of body
    body: Expression

    @staticmethod
    def make(mapping: Mapping, body: Expression) -> "Subst":
        return Subst(fdict(mapping), body)


_BINARY = (And, Or, Implies)
_QUANT = (Exists, Forall)


def free_vars(lang: TypeLanguage, e: Expression) -> frozenset:
    """Free variables, clause by clause; Subst takes the image of the body's."""
    if isinstance(e, Atomic):
        return lang.arity[e.relation]
    if isinstance(e, Not):
        return free_vars(lang, e.body)
    if isinstance(e, _BINARY):
        return free_vars(lang, e.left) | free_vars(lang, e.right)
    if isinstance(e, _QUANT):
        return free_vars(lang, e.body) - {e.var}
    if isinstance(e, Subst):
        return frozenset(e.mapping[x] for x in free_vars(lang, e.body))
    raise TypeError(f"not an expression: {e!r}")


def well_formed(lang: TypeLanguage, e: Expression) -> bool:
    """All mentioned tokens belong to lang; Subst maps cover free vars sort-preservingly."""
    if isinstance(e, Atomic):
        return e.relation in lang.relation_types
    if isinstance(e, Not):
        return well_formed(lang, e.body)
    if isinstance(e, _BINARY):
        return well_formed(lang, e.left) and well_formed(lang, e.right)
    if isinstance(e, _QUANT):
        return e.var in lang.variables and well_formed(lang, e.body)
    if isinstance(e, Subst):
        if not well_formed(lang, e.body):
            return False
        fv = free_vars(lang, e.body)
        if not fv <= set(e.mapping):
            return False
        return all(e.mapping[x] in lang.variables
                   and lang.reference[e.mapping[x]] == lang.reference[x] for x in fv)
    return False


def expression_depth(e: Expression) -> int:
    if isinstance(e, Atomic):
        return 1
    if isinstance(e, (Not, Subst)):
        return 1 + expression_depth(e.body)
    if isinstance(e, _BINARY):
        return 1 + max(expression_depth(e.left), expression_depth(e.right))
    if isinstance(e, _QUANT):
        return 1 + expression_depth(e.body)
    raise TypeError(f"not an expression: {e!r}")


def enumerate_expressions(lang: TypeLanguage, depth: int,
                          include_subst: bool = False) -> list[Expression]:
    """All well-formed expressions up to the given constructor depth.

    Substitutions are omitted by default: every Subst over a depth-bounded
    body is semantically a relabelling and they blow up the count.
    """
    if depth < 1:
        raise ValueError("depth bound must be >= 1")
    by_depth: list[list[Expression]] = [[]]
    by_depth.append([Atomic(r) for r in sorted_tokens(lang.relation_types)])
    for d in range(2, depth + 1):
        prev = [e for level in by_depth[1:d] for e in level]
        exact = by_depth[d - 1]
        level: list[Expression] = []
        level.extend(Not(e) for e in exact)
        for ctor in _BINARY:
            # at least one side at depth d-1
            level.extend(ctor(a, b) for a in exact for b in prev)
            level.extend(ctor(a, b) for a in prev for b in exact if expression_depth(a) < d - 1)
        for x in sorted_tokens(lang.variables):
            level.extend(ctor(x, e) for ctor in _QUANT for e in exact)
        if include_subst:
            for e in exact:
                fv = sorted_tokens(free_vars(lang, e))
                sorts = [sorted_tokens(v for v in lang.variables
                                       if lang.reference[v] == lang.reference[x]) for x in fv]
                for combo in itertools.product(*sorts):
                    level.append(Subst.make(dict(zip(fv, combo)), e))
        by_depth.append(level)
    return [e for level in by_depth[1:] for e in level]


# --- Morphisms -------------------------------------------------------------

@dataclass(frozen=True)
class LanguageMorphism:
    source: TypeLanguage
    target: TypeLanguage
    var_map: FrozenDict
    entity_map: FrozenDict
    relation_map: FrozenDict  # relation type -> relation type, or Expression when refinement
    refinement: bool = False

    @staticmethod
    def make(source, target, var_map: Mapping, entity_map: Mapping,
             relation_map: Mapping, refinement: bool = False) -> "LanguageMorphism":
        return LanguageMorphism(source, target, fdict(var_map), fdict(entity_map),
                                fdict(relation_map), refinement)


def identity_language_morphism(lang: TypeLanguage) -> LanguageMorphism:
    return LanguageMorphism.make(lang, lang, {x: x for x in lang.variables},
                                 {a: a for a in lang.entity_types},
                                 {r: r for r in lang.relation_types})


def compose_language_morphisms(m1: LanguageMorphism, m2: LanguageMorphism) -> LanguageMorphism:
    if m1.target != m2.source:
        raise DomainMismatch("language morphisms not composable")
    rel = {}
    for r, img in m1.relation_map.items():
        if img in m1.target.relation_types:
            rel[r] = m2.relation_map[img]
        else:
            rel[r] = translate_expression(m2, img)
    return LanguageMorphism.make(
        m1.source, m2.target,
        {x: m2.var_map[m1.var_map[x]] for x in m1.var_map},
        {a: m2.entity_map[m1.entity_map[a]] for a in m1.entity_map},
        rel, refinement=m1.refinement or m2.refinement)


def language_morphism_valid(m: LanguageMorphism) -> tuple[bool, Optional[tuple]]:
    """Reference and arity preservation; returns (ok, first counterexample)."""
    if set(m.var_map) != set(m.source.variables) or \
            any(v not in m.target.variables for v in m.var_map.values()):
        raise DomainMismatch("variable map not total source -> target variables")
    if set(m.entity_map) != set(m.source.entity_types) or \
            any(v not in m.target.entity_types for v in m.entity_map.values()):
        raise DomainMismatch("entity map not total source -> target entity types")
    if set(m.relation_map) != set(m.source.relation_types):
        raise DomainMismatch("relation map not total on source relation types")
    for r, img in m.relation_map.items():
        # an Expression may itself be a target relation type (expression
        # languages); only unrecognized expressions need the refinement flag
        if img in m.target.relation_types:
            continue
        if isinstance(img, Expression):
            if not m.refinement:
                raise DomainMismatch(f"relation {r!r} maps to an expression without the refinement flag")
            if not well_formed(m.target, img):
                raise DomainMismatch(f"image of {r!r} is not well-formed over the target")
        else:
            raise DomainMismatch(f"relation map leaves target relation types at {r!r}")
    for x in sorted_tokens(m.source.variables):
        if m.target.reference[m.var_map[x]] != m.entity_map[m.source.reference[x]]:
            return False, ("reference", x)
    for r in sorted_tokens(m.source.relation_types):
        img = m.relation_map[r]
        image_arity = m.target.arity[img] if img in m.target.relation_types \
            else free_vars(m.target, img)
        if image_arity != frozenset(m.var_map[x] for x in m.source.arity[r]):
            return False, ("arity", r)
    return True, None


def translate_expression(m: LanguageMorphism, e: Expression) -> Expression:
    """Homomorphic replacement of an expression along a language morphism.

    Raises CaptureError when the variable map identifies a binder with a
    free variable of its scope.
    """
    if isinstance(e, Atomic):
        img = m.relation_map[e.relation]
        if img in m.target.relation_types:
            return Atomic(img)
        return img
    if isinstance(e, Not):
        return Not(translate_expression(m, e.body))
    if isinstance(e, _BINARY):
        return type(e)(translate_expression(m, e.left), translate_expression(m, e.right))
    if isinstance(e, _QUANT):
        clashes = {x for x in free_vars(m.source, e.body) - {e.var}
                   if m.var_map[x] == m.var_map[e.var]}
        if clashes:
            raise CaptureError(f"binder {e.var!r} captures {sorted_tokens(clashes)} under translation")
        return type(e)(m.var_map[e.var], translate_expression(m, e.body))
    if isinstance(e, Subst):
        body = translate_expression(m, e.body)
        mapping: dict = {}
        for x, y in e.mapping.items():
            prior = mapping.setdefault(m.var_map[x], m.var_map[y])
            if prior != m.var_map[y]:
                raise CaptureError(f"substitution slots collide at {m.var_map[x]!r}")
        return Subst.make(mapping, body)
    raise TypeError(f"not an expression: {e!r}")


def expression_language(lang: TypeLanguage, depth: int) -> tuple[TypeLanguage, LanguageMorphism]:
    """Language whose relation types are expressions up to a depth bound."""
    exprs = enumerate_expressions(lang, depth)
    out = TypeLanguage(lang.variables, lang.entity_types, frozenset(exprs),
                       lang.reference, fdict({e: free_vars(lang, e) for e in exprs}))
    embed = LanguageMorphism.make(lang, out, {x: x for x in lang.variables},
                                  {a: a for a in lang.entity_types},
                                  {r: Atomic(r) for r in lang.relation_types})
    return out, embed


def language_sum(l1: TypeLanguage, l2: TypeLanguage) -> tuple[TypeLanguage, LanguageMorphism, LanguageMorphism]:
    """Tagged disjoint union componentwise; returns (sum, left inj, right inj)."""
    variables = [ltag(x) for x in l1.variables] + [rtag(x) for x in l2.variables]
    entity_types = [ltag(a) for a in l1.entity_types] + [rtag(a) for a in l2.entity_types]
    reference = {ltag(x): ltag(l1.reference[x]) for x in l1.variables}
    reference.update({rtag(x): rtag(l2.reference[x]) for x in l2.variables})
    arity = {ltag(r): frozenset(ltag(x) for x in l1.arity[r]) for r in l1.relation_types}
    arity.update({rtag(r): frozenset(rtag(x) for x in l2.arity[r]) for r in l2.relation_types})
    s = TypeLanguage(frozenset(variables), frozenset(entity_types), frozenset(arity),
                     fdict(reference), fdict(arity))
    inj1 = LanguageMorphism.make(l1, s, {x: ltag(x) for x in l1.variables},
                                 {a: ltag(a) for a in l1.entity_types},
                                 {r: ltag(r) for r in l1.relation_types})
    inj2 = LanguageMorphism.make(l2, s, {x: rtag(x) for x in l2.variables},
                                 {a: rtag(a) for a in l2.entity_types},
                                 {r: rtag(r) for r in l2.relation_types})
    return s, inj1, inj2


@dataclass(frozen=True)
class LanguageEndorelation:
    """Generator pairs on entity types, relation types, and variables."""

    entity_pairs: frozenset
    relation_pairs: frozenset
    variable_pairs: frozenset

    @staticmethod
    def make(entity_pairs: Iterable = (), relation_pairs: Iterable = (),
             variable_pairs: Iterable = ()) -> "LanguageEndorelation":
        return LanguageEndorelation(frozenset(tuple(p) for p in entity_pairs),
                                    frozenset(tuple(p) for p in relation_pairs),
                                    frozenset(tuple(p) for p in variable_pairs))


def language_quotient(lang: TypeLanguage, j: LanguageEndorelation) -> tuple[TypeLanguage, LanguageMorphism]:
    """Quotient componentwise by the closures of j; classes are sorted tuples.

    Raises IncompatibleQuotient when related variables have unrelated
    references or related relation types have arities that do not land on
    the same set of variable classes.
    """
    var_cls = equivalence_closure(lang.variables, j.variable_pairs)
    ent_cls = equivalence_closure(lang.entity_types, j.entity_pairs)
    rel_cls = equivalence_closure(lang.relation_types, j.relation_pairs)
    reference = {}
    for x in lang.variables:
        ref = ent_cls[lang.reference[x]]
        prior = reference.setdefault(var_cls[x], ref)
        if prior != ref:
            other = next(y for y in var_cls[x] if ent_cls[lang.reference[y]] == prior)
            raise IncompatibleQuotient(x, other, "merged variables have unrelated references")
    arity = {}
    for r in lang.relation_types:
        ar = frozenset(var_cls[x] for x in lang.arity[r])
        prior = arity.setdefault(rel_cls[r], ar)
        if prior != ar:
            other = next(s for s in rel_cls[r] if frozenset(var_cls[x] for x in lang.arity[s]) == prior)
            raise IncompatibleQuotient(r, other, "merged relation types have incompatible arities")
    q = TypeLanguage(frozenset(var_cls.values()), frozenset(ent_cls.values()),
                     frozenset(rel_cls.values()), fdict(reference), fdict(arity))
    canon = LanguageMorphism.make(lang, q, dict(var_cls), dict(ent_cls), dict(rel_cls))
    return q, canon
