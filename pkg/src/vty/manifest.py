"""Line-oriented manifest files tying calculi, components and registries together.

A manifest is plain text: single-line directives plus brace-delimited
blocks, one entry per line, comments with #. The serializer emits a
canonical form (fixed section order, sorted formula lists) that parses
back to an equal manifest, and serializing a canonically produced file
reproduces it byte for byte.

Grammar, by example:

    signature p q
    bounds depth=3 atoms=20 enum=1000000 size=10000

    rule mp {
      premise a
      premise (-> a b)
      conclude b
    }
    rule sub substitution

    calculus L1 {
      depth 2
      atoms r
      axiom p
      schema P1 (-> a (-> b a))
      use mp
    }

    map f identity
    map g renaming {
      rename a p
      domain (-> a a)
    }
    map h table {
      pair p q
      domain p
    }

    component K1 {
      calculus L1
      axiom-map f
      theorem-map f
      theorem p
    }

    prevariety PV {
      quasi
      component K1
      auto
    }

    witness W {
      prevariety PV
      indices 1 2
      calculus CORE
      axiom-map f
      theorem-map f
      theorem p
    }

    axiom-decl UNIVERSALITY "one-line statement"
    class T "Turing machines" {
      status UNIVERSALITY satisfied citation "source text"
      status TOTALITY violated exec-positive witness_id 3
      status COMPOSITION unknown
    }
    theorem-rec thm {
      statement "claim text"
      depends UNIVERSALITY
      source "source text"
    }

A prevariety block either says `auto` (or gives no triad lines at all),
letting the loader assemble the axiom, rule and theorem unions from the
components, or claims the triad explicitly with `axiom`, `rule-ref` and
`theorem` lines for the checker to verify.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .calculus import (
    AxiomSchema,
    Calculus,
    DEFAULT_SIZE_CAP,
    InferenceRule,
    SchemaRule,
    SubstitutionRule,
)
from .errors import FormulaParseError, ManifestError, UnresolvedReferenceError
from .formulas import ATOM_NAME, Formula, formula_key, format_formula, parse_formula_tokens
from .lex import LexError, Token, tokenize_line
from .machines import DEFAULT_ENUMERATION_CAP
from .projection import (
    AxiomDeclaration,
    AxiomStatus,
    CITATION,
    ClassProfile,
    EXEC_EXHAUSTIVE,
    EXEC_POSITIVE,
    Evidence,
    SATISFIED,
    TheoremRecord,
    UNKNOWN,
    VIOLATED,
)
from .semantics import DEFAULT_ATOM_CAP
from .varieties import (
    Component,
    FormulaMap,
    Prevariety,
    VarietyWitness,
    assemble_prevariety,
)
from .witnesses import WITNESSES


@dataclass(frozen=True)
class Bounds:
    depth: int = 3
    atoms: int = DEFAULT_ATOM_CAP
    enum: int = DEFAULT_ENUMERATION_CAP
    size: int = DEFAULT_SIZE_CAP

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("depth bound must be nonnegative")
        if min(self.atoms, self.enum, self.size) < 1:
            raise ValueError("atoms, enum and size bounds must be positive")

    def to_dict(self) -> dict:
        return {"depth": self.depth, "atoms": self.atoms,
                "enum": self.enum, "size": self.size}


# --- declaration layer -------------------------------------------------------
# Parse products stay close to the text; resolution into live calculus
# and variety objects happens on demand so a manifest with a bad
# reference still parses far enough to report the precise line.


@dataclass(frozen=True)
class RuleDef:
    name: str
    kind: str  # "schema" or "substitution"
    premises: tuple[Formula, ...] = ()
    conclusion: Formula | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CalculusDef:
    calculus_id: str
    depth: int | None = None
    atoms: tuple[str, ...] = ()
    axioms: tuple[Formula, ...] = ()
    schemas: tuple[tuple[str, Formula], ...] = ()
    use: tuple[str, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class MapDef:
    map_id: str
    kind: str  # "identity", "renaming" or "table"
    renames: tuple[tuple[str, str], ...] = ()
    pairs: tuple[tuple[Formula, Formula], ...] = ()
    domain: tuple[Formula, ...] | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ComponentDef:
    component_id: str
    calculus_ref: str = ""
    axiom_map_ref: str = ""
    theorem_map_ref: str = ""
    theorems: tuple[Formula, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PrevarietyDef:
    prevariety_id: str
    component_refs: tuple[str, ...] = ()
    quasi: bool = False
    auto: bool = False
    axioms: tuple[Formula, ...] = ()
    rule_refs: tuple[str, ...] = ()
    theorems: tuple[Formula, ...] = ()
    line: int = field(default=0, compare=False)

    def is_auto(self) -> bool:
        return self.auto or not (self.axioms or self.rule_refs or self.theorems)


@dataclass(frozen=True)
class WitnessDef:
    witness_id: str
    prevariety_ref: str = ""
    indices: tuple[int, ...] = ()
    calculus_ref: str = ""
    axiom_map_ref: str = ""
    theorem_map_ref: str = ""
    theorems: tuple[Formula, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AxiomDeclDef:
    axiom_id: str
    statement: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class ClassDef:
    class_id: str
    display_name: str
    statuses: tuple[tuple[str, str, Evidence | None], ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TheoremRecDef:
    theorem_id: str
    statement: str = ""
    depends: tuple[str, ...] = ()
    source: str = ""
    unconditional: bool = False
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Manifest:
    source: str = field(default="<manifest>", compare=False)
    signature: tuple[str, ...] = ()
    bounds: Bounds = Bounds()
    rules: tuple[RuleDef, ...] = ()
    calculi: tuple[CalculusDef, ...] = ()
    maps: tuple[MapDef, ...] = ()
    components: tuple[ComponentDef, ...] = ()
    prevarieties: tuple[PrevarietyDef, ...] = ()
    witnesses: tuple[WitnessDef, ...] = ()
    axiom_decls: tuple[AxiomDeclDef, ...] = ()
    classes: tuple[ClassDef, ...] = ()
    theorem_recs: tuple[TheoremRecDef, ...] = ()

    # -- lookup helpers --

    def _find(self, entries, key, wanted, kind, ref_line):
        for entry in entries:
            if key(entry) == wanted:
                return entry
        raise UnresolvedReferenceError(
            f"unknown {kind} {wanted!r}", self.source, ref_line
        )

    def rule_def(self, name: str, ref_line: int = 0) -> RuleDef:
        return self._find(self.rules, lambda r: r.name, name, "rule", ref_line)

    def rule_object(self, name: str, ref_line: int = 0) -> InferenceRule:
        d = self.rule_def(name, ref_line)
        if d.kind == "substitution":
            return SubstitutionRule(d.name)
        assert d.conclusion is not None
        return SchemaRule(d.name, d.premises, d.conclusion)

    def calculus(self, calculus_id: str, ref_line: int = 0) -> Calculus:
        d = self._find(self.calculi, lambda c: c.calculus_id, calculus_id,
                       "calculus", ref_line)
        use = d.use if d.use else tuple(r.name for r in self.rules)
        rules = tuple(self.rule_object(name, d.line) for name in use)
        return Calculus(
            d.calculus_id,
            axioms=frozenset(d.axioms),
            schemas=tuple(AxiomSchema(sid, pattern) for sid, pattern in d.schemas),
            rules=rules,
            closure_depth=self.bounds.depth if d.depth is None else d.depth,
            signature_atoms=frozenset(self.signature) | frozenset(d.atoms),
        )

    def formula_map(self, map_id: str, ref_line: int = 0) -> FormulaMap:
        d = self._find(self.maps, lambda m: m.map_id, map_id, "map", ref_line)
        domain = None if d.domain is None else frozenset(d.domain)
        if d.kind == "identity":
            return FormulaMap.identity(d.map_id)
        if d.kind == "renaming":
            return FormulaMap(d.map_id, renaming=tuple(sorted(d.renames)), domain=domain)
        return FormulaMap.table_map(d.map_id, d.pairs, domain=domain)

    def component(self, component_id: str, ref_line: int = 0) -> Component:
        d = self._find(self.components, lambda c: c.component_id, component_id,
                       "component", ref_line)
        return Component(
            d.component_id,
            self.calculus(d.calculus_ref, d.line),
            self.formula_map(d.axiom_map_ref, d.line),
            self.formula_map(d.theorem_map_ref, d.line),
            frozenset(d.theorems),
        )

    def default_prevariety_id(self) -> str:
        if not self.prevarieties:
            raise ManifestError("the manifest declares no prevariety",
                                self.source, 0)
        return self.prevarieties[0].prevariety_id

    def prevariety(self, prevariety_id: str | None = None) -> Prevariety:
        wanted = prevariety_id or self.default_prevariety_id()
        d = self._find(self.prevarieties, lambda p: p.prevariety_id, wanted,
                       "prevariety", 0)
        components = tuple(self.component(ref, d.line) for ref in d.component_refs)
        if d.is_auto():
            return assemble_prevariety(components, quasi=d.quasi,
                                       size_cap=self.bounds.size)
        rules = frozenset(self.rule_object(name, d.line) for name in d.rule_refs)
        return Prevariety(frozenset(d.axioms), rules, frozenset(d.theorems),
                          components, d.quasi)

    def prevariety_witnesses(self, prevariety_id: str | None = None) -> tuple[VarietyWitness, ...]:
        wanted = prevariety_id or self.default_prevariety_id()
        out = []
        for d in self.witnesses:
            if d.prevariety_ref != wanted:
                continue
            out.append(VarietyWitness(
                d.witness_id,
                d.indices,
                self.calculus(d.calculus_ref, d.line),
                self.formula_map(d.axiom_map_ref, d.line),
                self.formula_map(d.theorem_map_ref, d.line),
                frozenset(d.theorems),
            ))
        return tuple(out)

    def registry(self) -> tuple[tuple[ClassProfile, ...], tuple[TheoremRecord, ...],
                                dict[str, AxiomDeclaration]]:
        declarations = {
            d.axiom_id: AxiomDeclaration(d.axiom_id, d.statement)
            for d in self.axiom_decls
        }
        profiles = tuple(
            ClassProfile(c.class_id, c.display_name, {
                axiom_id: AxiomStatus(status, evidence)
                for axiom_id, status, evidence in c.statuses
            })
            for c in self.classes
        )
        theorems = tuple(
            TheoremRecord(t.theorem_id, t.statement, frozenset(t.depends),
                          t.source, t.unconditional)
            for t in self.theorem_recs
        )
        return profiles, theorems, declarations

    # -- validation --

    def validate(self) -> None:
        """Check every cross-reference and constructible object.

        Raises ManifestError naming the offending line. Does not run any
        closure; resolution errors that need proof search surface later.
        """
        self._check_unique("rule", [(r.name, r.line) for r in self.rules])
        self._check_unique("calculus", [(c.calculus_id, c.line) for c in self.calculi])
        self._check_unique("map", [(m.map_id, m.line) for m in self.maps])
        self._check_unique("component", [(c.component_id, c.line) for c in self.components])
        self._check_unique("prevariety", [(p.prevariety_id, p.line) for p in self.prevarieties])
        self._check_unique("witness", [(w.witness_id, w.line) for w in self.witnesses])
        self._check_unique("axiom-decl", [(a.axiom_id, a.line) for a in self.axiom_decls])
        self._check_unique("class", [(c.class_id, c.line) for c in self.classes])
        self._check_unique("theorem-rec", [(t.theorem_id, t.line) for t in self.theorem_recs])
        for rule in self.rules:
            self._build(lambda: self.rule_object(rule.name, rule.line), rule.line)
        for calc in self.calculi:
            self._build(lambda: self.calculus(calc.calculus_id, calc.line), calc.line)
        for map_def in self.maps:
            self._build(lambda: self.formula_map(map_def.map_id, map_def.line),
                        map_def.line)
        for comp in self.components:
            self._build(lambda: self.component(comp.component_id, comp.line), comp.line)
        for pv in self.prevarieties:
            if pv.auto and (pv.axioms or pv.rule_refs or pv.theorems):
                raise ManifestError(
                    f"prevariety {pv.prevariety_id!r} says auto but also claims "
                    "an explicit union", self.source, pv.line)
            for ref in pv.component_refs:
                self.component(ref, pv.line)
            for name in pv.rule_refs:
                self.rule_object(name, pv.line)
        declared = {p.prevariety_id: p for p in self.prevarieties}
        for wit in self.witnesses:
            if wit.prevariety_ref not in declared:
                raise UnresolvedReferenceError(
                    f"unknown prevariety {wit.prevariety_ref!r}", self.source, wit.line)
            width = len(declared[wit.prevariety_ref].component_refs)
            if not wit.indices or list(wit.indices) != sorted(set(wit.indices)):
                raise ManifestError(
                    f"witness {wit.witness_id!r} needs strictly increasing indices",
                    self.source, wit.line)
            if wit.indices[0] < 1 or wit.indices[-1] > width:
                raise ManifestError(
                    f"witness {wit.witness_id!r} index out of range 1..{width}",
                    self.source, wit.line)
            self.calculus(wit.calculus_ref, wit.line)
            self.formula_map(wit.axiom_map_ref, wit.line)
            self.formula_map(wit.theorem_map_ref, wit.line)
        axiom_ids = {a.axiom_id for a in self.axiom_decls}
        for cls in self.classes:
            for axiom_id, status, evidence in cls.statuses:
                if axiom_id not in axiom_ids:
                    raise UnresolvedReferenceError(
                        f"class {cls.class_id!r} scores undeclared axiom {axiom_id!r}",
                        self.source, cls.line)
                self._build(lambda: AxiomStatus(status, evidence), cls.line)
                if evidence is not None and evidence.witness_id is not None \
                        and evidence.witness_id not in WITNESSES:
                    raise UnresolvedReferenceError(
                        f"unknown executable witness {evidence.witness_id!r}",
                        self.source, cls.line)
        for rec in self.theorem_recs:
            for dep in rec.depends:
                if dep not in axiom_ids:
                    raise UnresolvedReferenceError(
                        f"theorem {rec.theorem_id!r} depends on undeclared "
                        f"axiom {dep!r}", self.source, rec.line)
            self._build(
                lambda: TheoremRecord(rec.theorem_id, rec.statement,
                                      frozenset(rec.depends), rec.source,
                                      rec.unconditional),
                rec.line)

    def _check_unique(self, kind: str, named: list[tuple[str, int]]) -> None:
        seen: dict[str, int] = {}
        for name, line in named:
            if name in seen:
                raise ManifestError(f"duplicate {kind} {name!r}", self.source, line)
            seen[name] = line

    def _build(self, thunk, line: int) -> None:
        try:
            thunk()
        except UnresolvedReferenceError:
            raise
        except (ValueError, AssertionError) as exc:
            raise ManifestError(str(exc), self.source, line) from exc

    # -- canonical text --

    def to_text(self) -> str:
        blocks: list[list[str]] = []
        if self.signature:
            blocks.append(["signature " + " ".join(sorted(self.signature))])
        b = self.bounds
        blocks.append([f"bounds depth={b.depth} atoms={b.atoms} "
                       f"enum={b.enum} size={b.size}"])
        for rule in self.rules:
            blocks.append(_rule_lines(rule))
        for calc in self.calculi:
            blocks.append(_calculus_lines(calc))
        for map_def in self.maps:
            blocks.append(_map_lines(map_def))
        for comp in self.components:
            blocks.append(_component_lines(comp))
        for pv in self.prevarieties:
            blocks.append(_prevariety_lines(pv))
        for wit in self.witnesses:
            blocks.append(_witness_lines(wit))
        for decl in self.axiom_decls:
            blocks.append([f"axiom-decl {decl.axiom_id} {_quote(decl.statement)}"])
        for cls in self.classes:
            blocks.append(_class_lines(cls))
        for rec in self.theorem_recs:
            blocks.append(_theorem_rec_lines(rec))
        return "\n\n".join("\n".join(lines) for lines in blocks) + "\n"


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _sorted_texts(formulas: Iterable[Formula]) -> list[str]:
    return sorted((format_formula(f) for f in formulas))


def _rule_lines(rule: RuleDef) -> list[str]:
    if rule.kind == "substitution":
        return [f"rule {rule.name} substitution"]
    lines = [f"rule {rule.name} {{"]
    for premise in rule.premises:
        lines.append(f"  premise {format_formula(premise)}")
    assert rule.conclusion is not None
    lines.append(f"  conclude {format_formula(rule.conclusion)}")
    lines.append("}")
    return lines


def _calculus_lines(calc: CalculusDef) -> list[str]:
    lines = [f"calculus {calc.calculus_id} {{"]
    if calc.depth is not None:
        lines.append(f"  depth {calc.depth}")
    if calc.atoms:
        lines.append("  atoms " + " ".join(sorted(calc.atoms)))
    for text in _sorted_texts(calc.axioms):
        lines.append(f"  axiom {text}")
    for schema_id, pattern in calc.schemas:
        lines.append(f"  schema {schema_id} {format_formula(pattern)}")
    if calc.use:
        lines.append("  use " + " ".join(calc.use))
    lines.append("}")
    return lines


def _map_lines(map_def: MapDef) -> list[str]:
    if map_def.kind == "identity":
        return [f"map {map_def.map_id} identity"]
    lines = [f"map {map_def.map_id} {map_def.kind} {{"]
    if map_def.kind == "renaming":
        for old, new in sorted(map_def.renames):
            lines.append(f"  rename {old} {new}")
    else:
        ordered = sorted(map_def.pairs, key=lambda p: formula_key(p[0]))
        for source, target in ordered:
            lines.append(f"  pair {format_formula(source)} {format_formula(target)}")
    if map_def.domain is not None:
        for text in _sorted_texts(map_def.domain):
            lines.append(f"  domain {text}")
    lines.append("}")
    return lines


def _component_lines(comp: ComponentDef) -> list[str]:
    lines = [f"component {comp.component_id} {{"]
    lines.append(f"  calculus {comp.calculus_ref}")
    lines.append(f"  axiom-map {comp.axiom_map_ref}")
    lines.append(f"  theorem-map {comp.theorem_map_ref}")
    for text in _sorted_texts(comp.theorems):
        lines.append(f"  theorem {text}")
    lines.append("}")
    return lines


def _prevariety_lines(pv: PrevarietyDef) -> list[str]:
    lines = [f"prevariety {pv.prevariety_id} {{"]
    if pv.quasi:
        lines.append("  quasi")
    for ref in pv.component_refs:
        lines.append(f"  component {ref}")
    if pv.auto:
        lines.append("  auto")
    for text in _sorted_texts(pv.axioms):
        lines.append(f"  axiom {text}")
    if pv.rule_refs:
        lines.append("  rule-ref " + " ".join(sorted(pv.rule_refs)))
    for text in _sorted_texts(pv.theorems):
        lines.append(f"  theorem {text}")
    lines.append("}")
    return lines


def _witness_lines(wit: WitnessDef) -> list[str]:
    lines = [f"witness {wit.witness_id} {{"]
    lines.append(f"  prevariety {wit.prevariety_ref}")
    lines.append("  indices " + " ".join(str(i) for i in wit.indices))
    lines.append(f"  calculus {wit.calculus_ref}")
    lines.append(f"  axiom-map {wit.axiom_map_ref}")
    lines.append(f"  theorem-map {wit.theorem_map_ref}")
    for text in _sorted_texts(wit.theorems):
        lines.append(f"  theorem {text}")
    lines.append("}")
    return lines


_STATUS_WORDS = {SATISFIED: "satisfied", VIOLATED: "violated", UNKNOWN: "unknown"}


def _class_lines(cls: ClassDef) -> list[str]:
    lines = [f"class {cls.class_id} {_quote(cls.display_name)} {{"]
    for axiom_id, status, evidence in cls.statuses:
        parts = [f"  status {axiom_id} {_STATUS_WORDS[status]}"]
        if evidence is not None:
            if evidence.kind == CITATION:
                parts.append(f"citation {_quote(evidence.citation or '')}")
            elif evidence.kind == EXEC_POSITIVE:
                parts.append(f"exec-positive {evidence.witness_id} {evidence.suite_size}")
            else:
                parts.append(f"exec-exhaustive {evidence.witness_id} "
                             f"{_quote(evidence.domain or '')}")
        lines.append(" ".join(parts))
    lines.append("}")
    return lines


def _theorem_rec_lines(rec: TheoremRecDef) -> list[str]:
    lines = [f"theorem-rec {rec.theorem_id} {{"]
    lines.append(f"  statement {_quote(rec.statement)}")
    if rec.depends:
        lines.append("  depends " + " ".join(sorted(rec.depends)))
    lines.append(f"  source {_quote(rec.source)}")
    if rec.unconditional:
        lines.append("  unconditional")
    lines.append("}")
    return lines


def registry_manifest(
    profiles: Sequence[ClassProfile],
    theorems: Sequence[TheoremRecord],
    declarations: Mapping[str, AxiomDeclaration],
    *,
    bounds: Bounds = Bounds(),
) -> Manifest:
    """A registry-only manifest from live profile objects."""
    return Manifest(
        bounds=bounds,
        axiom_decls=tuple(
            AxiomDeclDef(d.axiom_id, d.statement) for d in declarations.values()
        ),
        classes=tuple(
            ClassDef(p.class_id, p.display_name, tuple(
                (axiom_id, status.status, status.evidence)
                for axiom_id, status in p.statuses.items()
            ))
            for p in profiles
        ),
        theorem_recs=tuple(
            TheoremRecDef(t.theorem_id, t.statement, tuple(sorted(t.dependencies)),
                          t.source, t.unconditional)
            for t in theorems
        ),
    )


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines = text.splitlines()
        self.signature: tuple[str, ...] = ()
        self.bounds: Bounds | None = None
        self.rules: list[RuleDef] = []
        self.calculi: list[CalculusDef] = []
        self.maps: list[MapDef] = []
        self.components: list[ComponentDef] = []
        self.prevarieties: list[PrevarietyDef] = []
        self.witnesses: list[WitnessDef] = []
        self.axiom_decls: list[AxiomDeclDef] = []
        self.classes: list[ClassDef] = []
        self.theorem_recs: list[TheoremRecDef] = []

    def fail(self, message: str, line: int, col: int = 0):
        raise ManifestError(message, self.source, line, col)

    def parse(self) -> Manifest:
        block: tuple[str, list[Token], int] | None = None
        body: list[tuple[int, list[Token]]] = []
        for lineno, raw in enumerate(self.lines, start=1):
            try:
                tokens = tokenize_line(raw)
            except LexError as exc:
                self.fail(exc.message, lineno, exc.col)
            if not tokens:
                continue
            if block is not None:
                if len(tokens) == 1 and tokens[0].kind == "RBRACE":
                    kind, header, start = block
                    self._finish_block(kind, header, start, body)
                    block, body = None, []
                elif any(t.kind in ("LBRACE", "RBRACE") for t in tokens):
                    self.fail("braces may not nest", lineno, tokens[0].col)
                else:
                    body.append((lineno, tokens))
                continue
            if tokens[-1].kind == "LBRACE":
                keyword = self._word(tokens, 0, lineno, "a block keyword")
                block = (keyword, tokens[:-1], lineno)
                continue
            self._top_level(tokens, lineno)
        if block is not None:
            self.fail(f"unclosed {block[0]} block", block[2])
        manifest = Manifest(
            source=self.source,
            signature=self.signature,
            bounds=self.bounds or Bounds(),
            rules=tuple(self.rules),
            calculi=tuple(self.calculi),
            maps=tuple(self.maps),
            components=tuple(self.components),
            prevarieties=tuple(self.prevarieties),
            witnesses=tuple(self.witnesses),
            axiom_decls=tuple(self.axiom_decls),
            classes=tuple(self.classes),
            theorem_recs=tuple(self.theorem_recs),
        )
        manifest.validate()
        return manifest

    # -- token helpers --

    def _word(self, tokens: list[Token], i: int, lineno: int, what: str) -> str:
        if i >= len(tokens):
            col = tokens[-1].col + len(tokens[-1].text) if tokens else 0
            self.fail(f"expected {what}", lineno, col)
        if tokens[i].kind != "WORD":
            self.fail(f"expected {what}, found {tokens[i].text!r}",
                      lineno, tokens[i].col)
        return tokens[i].text

    def _string(self, tokens: list[Token], i: int, lineno: int, what: str) -> str:
        if i >= len(tokens) or tokens[i].kind != "STRING":
            col = tokens[i].col if i < len(tokens) else (
                tokens[-1].col + len(tokens[-1].text) if tokens else 0)
            self.fail(f"expected a quoted {what}", lineno, col)
        return tokens[i].text

    def _int(self, tokens: list[Token], i: int, lineno: int, what: str) -> int:
        word = self._word(tokens, i, lineno, what)
        if not word.isdigit():
            self.fail(f"expected {what}, found {word!r}", lineno, tokens[i].col)
        return int(word)

    def _atom_name(self, tokens: list[Token], i: int, lineno: int) -> str:
        word = self._word(tokens, i, lineno, "an atom name")
        if not ATOM_NAME.match(word):
            self.fail(f"bad atom name {word!r}", lineno, tokens[i].col)
        return word

    def _formula(self, tokens: list[Token], i: int, lineno: int) -> tuple[Formula, int]:
        try:
            return parse_formula_tokens(tokens, i)
        except FormulaParseError as exc:
            self.fail(exc.message, lineno, exc.col)

    def _one_formula(self, tokens: list[Token], i: int, lineno: int) -> Formula:
        formula, nxt = self._formula(tokens, i, lineno)
        self._done(tokens, nxt, lineno)
        return formula

    def _done(self, tokens: list[Token], i: int, lineno: int) -> None:
        if i < len(tokens):
            self.fail(f"unexpected trailing {tokens[i].text!r}", lineno, tokens[i].col)

    # -- single-line directives --

    def _top_level(self, tokens: list[Token], lineno: int) -> None:
        keyword = self._word(tokens, 0, lineno, "a directive")
        if keyword == "signature":
            if self.signature:
                self.fail("signature given twice", lineno)
            names = [self._atom_name(tokens, i, lineno) for i in range(1, len(tokens))]
            if not names:
                self.fail("signature needs at least one atom", lineno)
            self.signature = tuple(names)
        elif keyword == "bounds":
            if self.bounds is not None:
                self.fail("bounds given twice", lineno)
            self.bounds = self._parse_bounds(tokens, lineno)
        elif keyword == "rule":
            name = self._word(tokens, 1, lineno, "a rule name")
            marker = self._word(tokens, 2, lineno, "the word substitution")
            if marker != "substitution":
                self.fail(f"expected substitution, found {marker!r}",
                          lineno, tokens[2].col)
            self._done(tokens, 3, lineno)
            self.rules.append(RuleDef(name, "substitution", line=lineno))
        elif keyword == "map":
            map_id = self._word(tokens, 1, lineno, "a map id")
            kind = self._word(tokens, 2, lineno, "a map kind")
            if kind != "identity":
                self.fail("only identity maps fit on one line; "
                          "renaming and table maps need a block", lineno, tokens[2].col)
            self._done(tokens, 3, lineno)
            self.maps.append(MapDef(map_id, "identity", line=lineno))
        elif keyword == "axiom-decl":
            axiom_id = self._word(tokens, 1, lineno, "an axiom id")
            statement = self._string(tokens, 2, lineno, "statement")
            self._done(tokens, 3, lineno)
            self.axiom_decls.append(AxiomDeclDef(axiom_id, statement, line=lineno))
        else:
            self.fail(f"unknown directive {keyword!r}", lineno, tokens[0].col)

    def _parse_bounds(self, tokens: list[Token], lineno: int) -> Bounds:
        values: dict[str, int] = {}
        for tok in tokens[1:]:
            if tok.kind != "WORD" or "=" not in tok.text:
                self.fail("bounds entries look like depth=3", lineno, tok.col)
            key, _, raw = tok.text.partition("=")
            if key not in ("depth", "atoms", "enum", "size"):
                self.fail(f"unknown bound {key!r}", lineno, tok.col)
            if key in values:
                self.fail(f"bound {key!r} given twice", lineno, tok.col)
            if not raw.isdigit():
                self.fail(f"bound {key!r} needs an integer", lineno, tok.col)
            values[key] = int(raw)
        try:
            return Bounds(**values)
        except ValueError as exc:
            self.fail(str(exc), lineno)

    # -- blocks --

    def _finish_block(self, kind: str, header: list[Token], start: int,
                      body: list[tuple[int, list[Token]]]) -> None:
        handlers = {
            "rule": self._finish_rule,
            "calculus": self._finish_calculus,
            "map": self._finish_map,
            "component": self._finish_component,
            "prevariety": self._finish_prevariety,
            "witness": self._finish_witness,
            "class": self._finish_class,
            "theorem-rec": self._finish_theorem_rec,
        }
        if kind not in handlers:
            self.fail(f"unknown block keyword {kind!r}", start)
        handlers[kind](header, start, body)

    def _finish_rule(self, header, start, body) -> None:
        name = self._word(header, 1, start, "a rule name")
        self._done(header, 2, start)
        premises: list[Formula] = []
        conclusion: Formula | None = None
        for lineno, tokens in body:
            key = self._word(tokens, 0, lineno, "premise or conclude")
            if key == "premise":
                premises.append(self._one_formula(tokens, 1, lineno))
            elif key == "conclude":
                if conclusion is not None:
                    self.fail("conclude given twice", lineno)
                conclusion = self._one_formula(tokens, 1, lineno)
            else:
                self.fail(f"unknown rule entry {key!r}", lineno, tokens[0].col)
        if conclusion is None:
            self.fail(f"rule {name!r} never concludes", start)
        self.rules.append(RuleDef(name, "schema", tuple(premises), conclusion,
                                  line=start))

    def _finish_calculus(self, header, start, body) -> None:
        calculus_id = self._word(header, 1, start, "a calculus id")
        self._done(header, 2, start)
        depth: int | None = None
        atoms: list[str] = []
        axioms: list[Formula] = []
        schemas: list[tuple[str, Formula]] = []
        use: list[str] = []
        for lineno, tokens in body:
            key = self._word(tokens, 0, lineno, "a calculus entry")
            if key == "depth":
                if depth is not None:
                    self.fail("depth given twice", lineno)
                depth = self._int(tokens, 1, lineno, "a depth")
                self._done(tokens, 2, lineno)
            elif key == "atoms":
                for i in range(1, len(tokens)):
                    atoms.append(self._atom_name(tokens, i, lineno))
            elif key == "axiom":
                axioms.append(self._one_formula(tokens, 1, lineno))
            elif key == "schema":
                schema_id = self._word(tokens, 1, lineno, "a schema id")
                formula, nxt = self._formula(tokens, 2, lineno)
                self._done(tokens, nxt, lineno)
                schemas.append((schema_id, formula))
            elif key == "use":
                for i in range(1, len(tokens)):
                    use.append(self._word(tokens, i, lineno, "a rule name"))
            else:
                self.fail(f"unknown calculus entry {key!r}", lineno, tokens[0].col)
        self.calculi.append(CalculusDef(
            calculus_id, depth, tuple(atoms), tuple(axioms), tuple(schemas),
            tuple(use), line=start))

    def _finish_map(self, header, start, body) -> None:
        map_id = self._word(header, 1, start, "a map id")
        kind = self._word(header, 2, start, "renaming or table")
        self._done(header, 3, start)
        if kind not in ("renaming", "table"):
            self.fail(f"unknown map kind {kind!r}", start)
        renames: list[tuple[str, str]] = []
        pairs: list[tuple[Formula, Formula]] = []
        domain: list[Formula] = []
        saw_domain = False
        for lineno, tokens in body:
            key = self._word(tokens, 0, lineno, "a map entry")
            if key == "rename" and kind == "renaming":
                old = self._atom_name(tokens, 1, lineno)
                new = self._atom_name(tokens, 2, lineno)
                self._done(tokens, 3, lineno)
                renames.append((old, new))
            elif key == "pair" and kind == "table":
                source, nxt = self._formula(tokens, 1, lineno)
                target, nxt = self._formula(tokens, nxt, lineno)
                self._done(tokens, nxt, lineno)
                pairs.append((source, target))
            elif key == "domain":
                saw_domain = True
                domain.append(self._one_formula(tokens, 1, lineno))
            else:
                self.fail(f"unknown {kind} map entry {key!r}", lineno, tokens[0].col)
        self.maps.append(MapDef(
            map_id, kind, tuple(renames), tuple(pairs),
            tuple(domain) if saw_domain else None, line=start))

    def _finish_component(self, header, start, body) -> None:
        component_id = self._word(header, 1, start, "a component id")
        self._done(header, 2, start)
        refs = {"calculus": "", "axiom-map": "", "theorem-map": ""}
        theorems: list[Formula] = []
        for lineno, tokens in body:
            key = self._word(tokens, 0, lineno, "a component entry")
            if key in refs:
                if refs[key]:
                    self.fail(f"{key} given twice", lineno)
                refs[key] = self._word(tokens, 1, lineno, f"a {key} id")
                self._done(tokens, 2, lineno)
            elif key == "theorem":
                theorems.append(self._one_formula(tokens, 1, lineno))
            else:
                self.fail(f"unknown component entry {key!r}", lineno, tokens[0].col)
        for key, value in refs.items():
            if not value:
                self.fail(f"component {component_id!r} never names its {key}", start)
        self.components.append(ComponentDef(
            component_id, refs["calculus"], refs["axiom-map"], refs["theorem-map"],
            tuple(theorems), line=start))

    def _finish_prevariety(self, header, start, body) -> None:
        prevariety_id = self._word(header, 1, start, "a prevariety id")
        self._done(header, 2, start)
        component_refs: list[str] = []
        quasi = False
        auto = False
        axioms: list[Formula] = []
        rule_refs: list[str] = []
        theorems: list[Formula] = []
        for lineno, tokens in body:
            key = self._word(tokens, 0, lineno, "a prevariety entry")
            if key == "component":
                component_refs.append(self._word(tokens, 1, lineno, "a component id"))
                self._done(tokens, 2, lineno)
            elif key == "quasi":
                self._done(tokens, 1, lineno)
                quasi = True
            elif key == "auto":
                self._done(tokens, 1, lineno)
                auto = True
            elif key == "axiom":
                axioms.append(self._one_formula(tokens, 1, lineno))
            elif key == "rule-ref":
                for i in range(1, len(tokens)):
                    rule_refs.append(self._word(tokens, i, lineno, "a rule name"))
            elif key == "theorem":
                theorems.append(self._one_formula(tokens, 1, lineno))
            else:
                self.fail(f"unknown prevariety entry {key!r}", lineno, tokens[0].col)
        if not component_refs:
            self.fail(f"prevariety {prevariety_id!r} lists no components", start)
        self.prevarieties.append(PrevarietyDef(
            prevariety_id, tuple(component_refs), quasi, auto,
            tuple(axioms), tuple(rule_refs), tuple(theorems), line=start))

    def _finish_witness(self, header, start, body) -> None:
        witness_id = self._word(header, 1, start, "a witness id")
        self._done(header, 2, start)
        refs = {"prevariety": "", "calculus": "", "axiom-map": "", "theorem-map": ""}
        indices: list[int] = []
        theorems: list[Formula] = []
        for lineno, tokens in body:
            key = self._word(tokens, 0, lineno, "a witness entry")
            if key in refs:
                if refs[key]:
                    self.fail(f"{key} given twice", lineno)
                refs[key] = self._word(tokens, 1, lineno, f"a {key} id")
                self._done(tokens, 2, lineno)
            elif key == "indices":
                if indices:
                    self.fail("indices given twice", lineno)
                for i in range(1, len(tokens)):
                    indices.append(self._int(tokens, i, lineno, "an index"))
            elif key == "theorem":
                theorems.append(self._one_formula(tokens, 1, lineno))
            else:
                self.fail(f"unknown witness entry {key!r}", lineno, tokens[0].col)
        for key, value in refs.items():
            if not value:
                self.fail(f"witness {witness_id!r} never names its {key}", start)
        self.witnesses.append(WitnessDef(
            witness_id, refs["prevariety"], tuple(indices), refs["calculus"],
            refs["axiom-map"], refs["theorem-map"], tuple(theorems), line=start))

    _STATUS_BY_WORD = {word: status for status, word in _STATUS_WORDS.items()}

    def _finish_class(self, header, start, body) -> None:
        class_id = self._word(header, 1, start, "a class id")
        display_name = self._string(header, 2, start, "display name")
        self._done(header, 3, start)
        statuses: list[tuple[str, str, Evidence | None]] = []
        for lineno, tokens in body:
            key = self._word(tokens, 0, lineno, "status")
            if key != "status":
                self.fail(f"unknown class entry {key!r}", lineno, tokens[0].col)
            axiom_id = self._word(tokens, 1, lineno, "an axiom id")
            word = self._word(tokens, 2, lineno, "satisfied, violated or unknown")
            if word not in self._STATUS_BY_WORD:
                self.fail(f"unknown status {word!r}", lineno, tokens[2].col)
            status = self._STATUS_BY_WORD[word]
            evidence: Evidence | None = None
            if len(tokens) > 3:
                evidence = self._parse_evidence(tokens, 3, lineno)
            statuses.append((axiom_id, status, evidence))
        self.classes.append(ClassDef(class_id, display_name, tuple(statuses),
                                     line=start))

    def _parse_evidence(self, tokens: list[Token], i: int, lineno: int) -> Evidence:
        kind = self._word(tokens, i, lineno, "an evidence kind")
        try:
            if kind == "citation":
                text = self._string(tokens, i + 1, lineno, "citation")
                self._done(tokens, i + 2, lineno)
                return Evidence(CITATION, citation=text)
            if kind == "exec-positive":
                witness_id = self._word(tokens, i + 1, lineno, "a witness id")
                size = self._int(tokens, i + 2, lineno, "a suite size")
                self._done(tokens, i + 3, lineno)
                return Evidence(EXEC_POSITIVE, witness_id=witness_id, suite_size=size)
            if kind == "exec-exhaustive":
                witness_id = self._word(tokens, i + 1, lineno, "a witness id")
                domain = self._string(tokens, i + 2, lineno, "domain description")
                self._done(tokens, i + 3, lineno)
                return Evidence(EXEC_EXHAUSTIVE, witness_id=witness_id, domain=domain)
        except ValueError as exc:
            self.fail(str(exc), lineno)
        self.fail(f"unknown evidence kind {kind!r}", lineno, tokens[i].col)

    def _finish_theorem_rec(self, header, start, body) -> None:
        theorem_id = self._word(header, 1, start, "a theorem id")
        self._done(header, 2, start)
        statement = ""
        source = ""
        depends: list[str] = []
        unconditional = False
        for lineno, tokens in body:
            key = self._word(tokens, 0, lineno, "a theorem entry")
            if key == "statement":
                statement = self._string(tokens, 1, lineno, "statement")
                self._done(tokens, 2, lineno)
            elif key == "source":
                source = self._string(tokens, 1, lineno, "source")
                self._done(tokens, 2, lineno)
            elif key == "depends":
                for i in range(1, len(tokens)):
                    depends.append(self._word(tokens, i, lineno, "an axiom id"))
            elif key == "unconditional":
                self._done(tokens, 1, lineno)
                unconditional = True
            else:
                self.fail(f"unknown theorem entry {key!r}", lineno, tokens[0].col)
        if not statement:
            self.fail(f"theorem-rec {theorem_id!r} needs a statement", start)
        self.theorem_recs.append(TheoremRecDef(
            theorem_id, statement, tuple(depends), source, unconditional,
            line=start))


def parse_manifest(text: str, source: str = "<manifest>") -> Manifest:
    return _Parser(text, source).parse()


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    return parse_manifest(path.read_text(encoding="utf-8"), source=str(path))


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    Path(path).write_text(manifest.to_text(), encoding="utf-8")
