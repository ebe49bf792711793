"""Named-form documents: the textual ontology format.

A document is an ordered sequence of named top-level forms (language,
theory, model, logic, theory-morphism, logic-morphism, alignment) with
unique names and resolved cross-references.  The serializer is
canonical: sets are sorted, maps are sorted by key, and the layout is
fixed, so serialize(parse(serialize(d))) == serialize(d).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import OntofuseError
from .language import (And, Atomic, Exists, Expression, Forall, Implies,
                       LanguageMorphism, Not, Or, Subst, TypeLanguage)
from .logic import Logic, LogicMorphism
from .model import Model, fdict
from .sexpr import is_symbol, parse_all, write_all
from .theory import Theory, TheoryMorphism
from .tokens import FrozenDict, sorted_tokens


class FormError(OntofuseError):
    """A malformed or unresolvable top-level form."""

    def __init__(self, form: str, message: str):
        super().__init__(f"form {form}: {message}")
        self.form = form


# --- structured tokens -------------------------------------------------------

_RESERVED = {"set", "tuple", "map"}


def render_token(t):
    if isinstance(t, str):
        return t
    if isinstance(t, frozenset):
        return ["set"] + [render_token(x) for x in sorted_tokens(t)]
    if isinstance(t, FrozenDict):
        return ["map"] + [[render_token(k), render_token(t[k])]
                          for k in sorted_tokens(t)]
    if isinstance(t, tuple):
        return ["tuple"] + [render_token(x) for x in t]
    raise FormError("token", f"cannot render token {t!r}")


def parse_token(v):
    if is_symbol(v):
        return v
    if not v or not is_symbol(v[0]) or v[0] not in _RESERVED:
        raise FormError("token", f"expected a token, got {v!r}")
    head, args = v[0], v[1:]
    if head == "set":
        return frozenset(parse_token(a) for a in args)
    if head == "tuple":
        return tuple(parse_token(a) for a in args)
    pairs = []
    for a in args:
        if is_symbol(a) or len(a) != 2:
            raise FormError("token", f"map entry must be a pair, got {a!r}")
        pairs.append((parse_token(a[0]), parse_token(a[1])))
    return fdict(pairs)


# --- expressions --------------------------------------------------------------

_BINARY_HEADS = {"and": And, "or": Or, "implies": Implies}
_QUANT_HEADS = {"exists": Exists, "forall": Forall}


def render_expression(e: Expression):
    if isinstance(e, Atomic):
        return ["atom", render_token(e.relation)]
    if isinstance(e, Not):
        return ["not", render_expression(e.body)]
    if isinstance(e, (And, Or, Implies)):
        head = {And: "and", Or: "or", Implies: "implies"}[type(e)]
        return [head, render_expression(e.left), render_expression(e.right)]
    if isinstance(e, (Exists, Forall)):
        head = "exists" if isinstance(e, Exists) else "forall"
        return [head, render_token(e.var), render_expression(e.body)]
    if isinstance(e, Subst):
        pairs = [[render_token(x), render_token(e.mapping[x])]
                 for x in sorted_tokens(e.mapping)]
        return ["subst", pairs, render_expression(e.body)]
    raise FormError("expression", f"cannot render {e!r}")


def parse_expression(v):
    if is_symbol(v) or not v or not is_symbol(v[0]):
        raise FormError("expression", f"expected an expression, got {v!r}")
    head, args = v[0], v[1:]
    if head == "atom" and len(args) == 1:
        return Atomic(parse_token(args[0]))
    if head == "not" and len(args) == 1:
        return Not(parse_expression(args[0]))
    if head in _BINARY_HEADS and len(args) == 2:
        return _BINARY_HEADS[head](parse_expression(args[0]), parse_expression(args[1]))
    if head in _QUANT_HEADS and len(args) == 2:
        return _QUANT_HEADS[head](parse_token(args[0]), parse_expression(args[1]))
    if head == "subst" and len(args) == 2 and not is_symbol(args[0]):
        mapping = {}
        for p in args[0]:
            if is_symbol(p) or len(p) != 2:
                raise FormError("expression", f"subst entry must be a pair, got {p!r}")
            mapping[parse_token(p[0])] = parse_token(p[1])
        return Subst.make(mapping, parse_expression(args[1]))
    raise FormError("expression", f"unknown expression form {v!r}")


# --- documents ----------------------------------------------------------------

_FORM_KINDS = ("language", "theory", "model", "logic",
               "theory-morphism", "logic-morphism", "alignment")


@dataclass(frozen=True)
class Alignment:
    """Universe, mediating theory, and the two theoretical links, by value."""

    universe: frozenset
    mediating_theory: Theory
    left_link: TheoryMorphism
    right_link: TheoryMorphism


@dataclass
class Document:
    order: list = field(default_factory=list)  # (kind, name) in source order
    objects: dict = field(default_factory=dict)  # name -> object
    kinds: dict = field(default_factory=dict)  # name -> kind

    def add(self, kind: str, name: str, obj) -> None:
        if name in self.objects:
            raise FormError(name, "duplicate form name")
        self.order.append((kind, name))
        self.objects[name] = obj
        self.kinds[name] = kind

    def get(self, name: str, kind: str = None):
        if name not in self.objects:
            raise FormError(name, "unresolved reference")
        if kind is not None and self.kinds[name] != kind:
            raise FormError(name, f"expected a {kind}, found a {self.kinds[name]}")
        return self.objects[name]


def _clauses(name: str, body) -> dict:
    out = {}
    for clause in body:
        if is_symbol(clause) or not clause or not is_symbol(clause[0]):
            raise FormError(name, f"expected a (key ...) clause, got {clause!r}")
        if clause[0] in out:
            raise FormError(name, f"duplicate clause {clause[0]}")
        out[clause[0]] = clause[1:]
    return out


def _pairs(name: str, items, what: str):
    out = []
    for p in items:
        if is_symbol(p) or len(p) != 2:
            raise FormError(name, f"{what} entry must be a pair, got {p!r}")
        out.append((parse_token(p[0]), parse_token(p[1])))
    return out


def _parse_language(name: str, body) -> TypeLanguage:
    c = _clauses(name, body)
    relations = {}
    for r in c.get("relations", ()):
        if is_symbol(r) or len(r) != 2 or is_symbol(r[1]):
            raise FormError(name, f"relation entry must be (R (vars...)), got {r!r}")
        relations[parse_token(r[0])] = frozenset(parse_token(x) for x in r[1])
    return TypeLanguage.make(
        [parse_token(x) for x in c.get("variables", ())],
        [parse_token(a) for a in c.get("entity-types", ())],
        dict(_pairs(name, c.get("reference", ()), "reference")),
        relations)


def _parse_theory(name: str, body, doc: Document) -> Theory:
    c = _clauses(name, body)
    lang = doc.get(_one(name, c, "language"), "language")
    return Theory.make(lang, [parse_expression(a) for a in c.get("axioms", ())])


def _one(name: str, clauses: dict, key: str) -> str:
    if key not in clauses or len(clauses[key]) != 1 or not is_symbol(clauses[key][0]):
        raise FormError(name, f"expected exactly one symbol in ({key} ...)")
    return clauses[key][0]


def _parse_model(name: str, body, doc: Document) -> Model:
    c = _clauses(name, body)
    lang = doc.get(_one(name, c, "language"), "language")
    entities = [parse_token(e) for e in c.get("entities", ())]
    incidence = _pairs(name, c.get("incidence", ()), "incidence")
    if "tuples" in c or "relation-incidence" in c:
        tuples, arity, valuation = [], {}, {}
        for entry in c.get("tuples", ()):
            if is_symbol(entry) or len(entry) != 3:
                raise FormError(name, f"tuple entry must be (TOKEN (arity ...) (valuation ...)), got {entry!r}")
            tok = parse_token(entry[0])
            sub = _clauses(name, entry[1:])
            tuples.append(tok)
            arity[tok] = frozenset(parse_token(x) for x in sub.get("arity", ()))
            valuation[tok] = fdict(_pairs(name, sub.get("valuation", ()), "valuation"))
        rel_inc = _pairs(name, c.get("relation-incidence", ()), "relation-incidence")
        m = Model(lang, frozenset(entities), frozenset(incidence), frozenset(tuples),
                  fdict(arity), fdict(valuation), frozenset(rel_inc))
        m.check(well_sorted=False)
        return m
    extents = {}
    for entry in c.get("extents", ()):
        if is_symbol(entry) or not entry:
            raise FormError(name, f"extent entry must be (R assignments...), got {entry!r}")
        rho = parse_token(entry[0])
        extents[rho] = [fdict(_pairs(name, a, "assignment")) for a in entry[1:]]
    extra = [fdict(_pairs(name, a, "assignment")) for a in c.get("extra-tuples", ())]
    return Model.from_extents(lang, entities, incidence, extents, extra)


def _parse_logic(name: str, body, doc: Document) -> Logic:
    c = _clauses(name, body)
    theory = doc.get(_one(name, c, "theory"), "theory")
    model = doc.get(_one(name, c, "model"), "model")
    ne = [parse_token(e) for e in c["normal-entities"]] if "normal-entities" in c else None
    nt = [parse_token(t) for t in c["normal-tuples"]] if "normal-tuples" in c else None
    return Logic.make(theory, model, ne, nt)


def _parse_language_maps(name: str, c: dict, source: TypeLanguage,
                         target: TypeLanguage, refinement: bool) -> LanguageMorphism:
    rel = {}
    for p in c.get("relations", ()):
        if is_symbol(p) or len(p) != 2:
            raise FormError(name, f"relation map entry must be a pair, got {p!r}")
        img = p[1]
        if not is_symbol(img) and img and img[0] == "expr":
            if len(img) != 2:
                raise FormError(name, "expected (expr EXPRESSION)")
            rel[parse_token(p[0])] = parse_expression(img[1])
        else:
            rel[parse_token(p[0])] = parse_token(img)
    return LanguageMorphism.make(
        source, target,
        dict(_pairs(name, c.get("variables", ()), "variable map")),
        dict(_pairs(name, c.get("entity-types", ()), "entity map")),
        rel, refinement=refinement)


def _parse_theory_morphism(name: str, body, doc: Document) -> TheoryMorphism:
    c = _clauses(name, body)
    source = doc.get(_one(name, c, "source"), "theory")
    target = doc.get(_one(name, c, "target"), "theory")
    lm = _parse_language_maps(name, c, source.language, target.language,
                              refinement="refinement" in c)
    return TheoryMorphism.make(lm, source, target)


def _parse_logic_morphism(name: str, body, doc: Document) -> LogicMorphism:
    c = _clauses(name, body)
    source = doc.get(_one(name, c, "source"), "logic")
    target = doc.get(_one(name, c, "target"), "logic")
    lm = _parse_language_maps(name, c, source.language, target.language,
                              refinement="refinement" in c)
    return LogicMorphism.make(
        source, target, lm,
        dict(_pairs(name, c.get("entity-map", ()), "entity map")),
        dict(_pairs(name, c.get("tuple-map", ()), "tuple map")))


def _parse_alignment(name: str, body, doc: Document) -> Alignment:
    c = _clauses(name, body)
    t = doc.get(_one(name, c, "mediating-theory"), "theory")
    g1 = doc.get(_one(name, c, "left-link"), "theory-morphism")
    g2 = doc.get(_one(name, c, "right-link"), "theory-morphism")
    if g1.source != t or g2.source != t:
        raise FormError(name, "alignment links must start at the mediating theory")
    return Alignment(frozenset(parse_token(e) for e in c.get("universe", ())),
                     t, g1, g2)


_PARSERS = {
    "language": lambda name, body, doc: _parse_language(name, body),
    "theory": _parse_theory,
    "model": _parse_model,
    "logic": _parse_logic,
    "theory-morphism": _parse_theory_morphism,
    "logic-morphism": _parse_logic_morphism,
    "alignment": _parse_alignment,
}


def parse_document(text: str) -> Document:
    doc = Document()
    for form in parse_all(text):
        if is_symbol(form) or len(form) < 2 or not is_symbol(form[0]) or not is_symbol(form[1]):
            raise FormError("document", f"top-level form must be (kind name ...), got {form!r}")
        kind, name = form[0], form[1]
        if kind not in _FORM_KINDS:
            raise FormError(name, f"unknown form kind {kind}")
        doc.add(kind, name, _PARSERS[kind](name, form[2:], doc))
    return doc


# --- rendering ----------------------------------------------------------------

def _render_pairs(key: str, pairs) -> list:
    return [key] + [[render_token(a), render_token(b)] for (a, b) in pairs]


def _render_assignment(a) -> list:
    return [[render_token(x), render_token(a[x])] for x in sorted_tokens(a)]


def render_language(name: str, lang: TypeLanguage) -> list:
    return ["language", name,
            ["variables"] + [render_token(x) for x in sorted_tokens(lang.variables)],
            ["entity-types"] + [render_token(a) for a in sorted_tokens(lang.entity_types)],
            _render_pairs("reference", [(x, lang.reference[x])
                                        for x in sorted_tokens(lang.variables)]),
            ["relations"] + [[render_token(r),
                              [render_token(x) for x in sorted_tokens(lang.arity[r])]]
                             for r in sorted_tokens(lang.relation_types)]]


def render_theory(name: str, t: Theory, language_name: str) -> list:
    return ["theory", name, ["language", language_name],
            ["axioms"] + [render_expression(a) for a in sorted_tokens(t.axioms)]]


def _extent_faithful(m: Model) -> bool:
    """Does from_extents on the derived extents rebuild this exact model?"""
    try:
        rebuilt = Model.from_extents(
            m.language, m.entities, m.entity_incidence,
            {rho: m.relation_extent(rho) for rho in m.language.relation_types},
            extra_tuples=[t for t in m.tuples
                          if isinstance(t, FrozenDict) and m.tuple_valuation[t] == t])
    except OntofuseError:
        return False
    return rebuilt == m


def render_model(name: str, m: Model, language_name: str) -> list:
    out = ["model", name, ["language", language_name],
           ["entities"] + [render_token(e) for e in sorted_tokens(m.entities)],
           _render_pairs("incidence", sorted_tokens(m.entity_incidence))]
    if _extent_faithful(m):
        extents = ["extents"]
        for rho in sorted_tokens(m.language.relation_types):
            rows = sorted_tokens(m.relation_extent(rho))
            extents.append([render_token(rho)] + [_render_assignment(a) for a in rows])
        out.append(extents)
        extra = [t for t in sorted_tokens(m.tuples)
                 if not any(t in m.relation_extent(rho)
                            for rho in m.language.relation_types)]
        if extra:
            out.append(["extra-tuples"] + [_render_assignment(t) for t in extra])
        return out
    tuples = ["tuples"]
    for t in sorted_tokens(m.tuples):
        tuples.append([render_token(t),
                       ["arity"] + [render_token(x) for x in sorted_tokens(m.tuple_arity[t])],
                       _render_pairs("valuation", [(x, m.tuple_valuation[t][x])
                                                   for x in sorted_tokens(m.tuple_arity[t])])])
    out.append(tuples)
    out.append(_render_pairs("relation-incidence", sorted_tokens(m.relation_incidence)))
    return out


def render_logic(name: str, l: Logic, theory_name: str, model_name: str) -> list:
    out = ["logic", name, ["theory", theory_name], ["model", model_name]]
    if l.normal_entities != l.model.entities:
        out.append(["normal-entities"] +
                   [render_token(e) for e in sorted_tokens(l.normal_entities)])
    if l.normal_tuples != l.model.tuples:
        out.append(["normal-tuples"] +
                   [render_token(t) for t in sorted_tokens(l.normal_tuples)])
    return out


def _render_language_maps(lm: LanguageMorphism) -> list:
    rel = ["relations"]
    for r in sorted_tokens(lm.relation_map):
        img = lm.relation_map[r]
        rendered = ["expr", render_expression(img)] if isinstance(img, Expression) \
            else render_token(img)
        rel.append([render_token(r), rendered])
    out = [_render_pairs("variables", [(x, lm.var_map[x]) for x in sorted_tokens(lm.var_map)]),
           _render_pairs("entity-types", [(a, lm.entity_map[a])
                                          for a in sorted_tokens(lm.entity_map)]),
           rel]
    if lm.refinement:
        out.append(["refinement"])
    return out


def render_theory_morphism(name: str, g: TheoryMorphism,
                           source_name: str, target_name: str) -> list:
    return ["theory-morphism", name, ["source", source_name], ["target", target_name]] + \
        _render_language_maps(g.language_morphism)


def render_logic_morphism(name: str, f: LogicMorphism,
                          source_name: str, target_name: str) -> list:
    return ["logic-morphism", name, ["source", source_name], ["target", target_name]] + \
        _render_language_maps(f.language_morphism) + \
        [_render_pairs("entity-map", [(e, f.entity_map[e])
                                      for e in sorted_tokens(f.entity_map)]),
         _render_pairs("tuple-map", [(t, f.tuple_map[t])
                                     for t in sorted_tokens(f.tuple_map)])]


def render_alignment(name: str, a: Alignment, theory_name: str,
                     left_link_name: str, right_link_name: str) -> list:
    return ["alignment", name,
            ["universe"] + [render_token(e) for e in sorted_tokens(a.universe)],
            ["mediating-theory", theory_name],
            ["left-link", left_link_name], ["right-link", right_link_name]]


def serialize_document(doc: Document) -> str:
    """Canonical text for a document; cross-reference names are recovered
    by identity of the referenced objects within the document."""
    forms = []
    for kind, name in doc.order:
        obj = doc.objects[name]
        if kind == "language":
            forms.append(render_language(name, obj))
        elif kind == "theory":
            forms.append(render_theory(name, obj, _name_of(doc, obj.language, "language")))
        elif kind == "model":
            forms.append(render_model(name, obj, _name_of(doc, obj.language, "language")))
        elif kind == "logic":
            forms.append(render_logic(name, obj, _name_of(doc, obj.theory, "theory"),
                                      _name_of(doc, obj.model, "model")))
        elif kind == "theory-morphism":
            forms.append(render_theory_morphism(name, obj,
                                                _name_of(doc, obj.source, "theory"),
                                                _name_of(doc, obj.target, "theory")))
        elif kind == "logic-morphism":
            forms.append(render_logic_morphism(name, obj,
                                               _name_of(doc, obj.source, "logic"),
                                               _name_of(doc, obj.target, "logic")))
        elif kind == "alignment":
            forms.append(render_alignment(
                name, obj, _name_of(doc, obj.mediating_theory, "theory"),
                _name_of(doc, obj.left_link, "theory-morphism"),
                _name_of(doc, obj.right_link, "theory-morphism")))
    return write_all(forms)


def _name_of(doc: Document, obj, kind: str) -> str:
    for k, name in doc.order:
        if k == kind and doc.objects[name] == obj:
            return name
    raise FormError(kind, f"no {kind} form holds the referenced object")
