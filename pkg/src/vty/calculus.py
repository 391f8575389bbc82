"""Hilbert-style calculi with bounded forward closure and checkable proofs.

Theorem sets here are intensional: a theorem set is always a calculus
plus a depth bound, never a bare set of formulas. Depth counts rule
applications in a tree-shaped derivation. Instance axioms and schema
instances cost zero; a rule application costs one plus the cost of its
premise derivations. ``closure(c, d)`` returns exactly the formulas
with a derivation of cost at most ``d``.

Schema instantiation is restricted to the subformula closure of the
instance axioms, the goals passed in, and the calculus's declared
signature atoms. The restriction keeps instance sets finite; reports
elsewhere label theorem sets with the depth they were computed at.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import DepthExplosionError
from .formulas import (
    Atom,
    Formula,
    Implies,
    Not,
    atoms,
    formula_key,
    match_pattern,
    subformula_closure,
    substitute,
)

DEFAULT_SIZE_CAP = 10_000

Substitution = tuple[tuple[str, Formula], ...]


def _freeze_substitution(mapping: Mapping[str, Formula]) -> Substitution:
    return tuple(sorted(mapping.items()))


@dataclass(frozen=True)
class SchemaRule:
    """An inference rule given by premise and conclusion patterns.

    Every atom occurring in the patterns is a metavariable. A rule is
    well formed only if the conclusion introduces no metavariable of
    its own, so a match of the premises determines the conclusion.
    """

    name: str
    premises: tuple[Formula, ...]
    conclusion: Formula

    def __post_init__(self) -> None:
        if not self.premises:
            raise ValueError(f"rule {self.name!r} needs at least one premise")
        premise_vars: set[str] = set()
        for premise in self.premises:
            premise_vars.update(atoms(premise))
        loose = atoms(self.conclusion) - premise_vars
        if loose:
            raise ValueError(
                f"rule {self.name!r} conclusion uses unbound metavariables {sorted(loose)}"
            )


@dataclass(frozen=True)
class SubstitutionRule:
    """The built-in rule: from a theorem infer any substitution instance.

    Instances range over the restricted instantiation domain, like
    schema instances do.
    """

    name: str = "sub"


InferenceRule = SchemaRule | SubstitutionRule


@dataclass(frozen=True)
class AxiomSchema:
    schema_id: str
    pattern: Formula


@dataclass(frozen=True)
class Calculus:
    calculus_id: str
    axioms: frozenset[Formula] = frozenset()
    schemas: tuple[AxiomSchema, ...] = ()
    rules: tuple[InferenceRule, ...] = ()
    closure_depth: int = 3
    signature_atoms: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.closure_depth < 0:
            raise ValueError("closure depth must be nonnegative")
        names = [rule.name for rule in self.rules]
        if len(names) != len(set(names)):
            raise ValueError(f"calculus {self.calculus_id!r} has duplicate rule names")
        ids = [schema.schema_id for schema in self.schemas]
        if len(ids) != len(set(ids)):
            raise ValueError(f"calculus {self.calculus_id!r} has duplicate schema ids")

    def rule(self, name: str) -> InferenceRule | None:
        for rule in self.rules:
            if rule.name == name:
                return rule
        return None

    def schema(self, schema_id: str) -> AxiomSchema | None:
        for schema in self.schemas:
            if schema.schema_id == schema_id:
                return schema
        return None


# --- proof objects ---------------------------------------------------------


@dataclass(frozen=True)
class AxiomStep:
    pass


@dataclass(frozen=True)
class SchemaStep:
    schema_id: str
    substitution: Substitution


@dataclass(frozen=True)
class RuleStep:
    rule_name: str
    premises: tuple[int, ...]
    substitution: Substitution


Justification = AxiomStep | SchemaStep | RuleStep


@dataclass(frozen=True)
class ProofStep:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class Proof:
    steps: tuple[ProofStep, ...]

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def rule_applications(self) -> int:
        return sum(1 for step in self.steps if isinstance(step.justification, RuleStep))


@dataclass(frozen=True)
class ProofCheck:
    valid: bool
    step: int | None = None
    reason: str | None = None
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "VALID" if self.valid else "INVALID"


def check_proof(calculus: Calculus, proof: Proof) -> ProofCheck:
    """Revalidate a proof step by step against the calculus.

    The checker accepts any correct proof; it does not re-impose the
    closure engine's instantiation restriction.
    """
    if not proof.steps:
        return ProofCheck(False, None, "EMPTY_PROOF", "a proof needs at least one step")
    for index, step in enumerate(proof.steps):
        just = step.justification
        if isinstance(just, AxiomStep):
            if step.formula not in calculus.axioms:
                return ProofCheck(False, index, "UNKNOWN_AXIOM", formula_key(step.formula))
        elif isinstance(just, SchemaStep):
            schema = calculus.schema(just.schema_id)
            if schema is None:
                return ProofCheck(False, index, "UNKNOWN_SCHEMA", just.schema_id)
            if substitute(schema.pattern, dict(just.substitution)) != step.formula:
                return ProofCheck(
                    False, index, "SCHEMA_MISMATCH",
                    f"substitution does not produce {formula_key(step.formula)}",
                )
        elif isinstance(just, RuleStep):
            rule = calculus.rule(just.rule_name)
            if rule is None:
                return ProofCheck(False, index, "UNKNOWN_RULE", just.rule_name)
            if any(p < 0 or p >= index for p in just.premises):
                return ProofCheck(False, index, "BAD_PREMISE", "premise index out of range")
            cited = [proof.steps[p].formula for p in just.premises]
            mapping = dict(just.substitution)
            if isinstance(rule, SubstitutionRule):
                if len(cited) != 1:
                    return ProofCheck(False, index, "BAD_PREMISE", "substitution takes one premise")
                if substitute(cited[0], mapping) != step.formula:
                    return ProofCheck(
                        False, index, "CONCLUSION_MISMATCH",
                        "substitution instance does not match the step formula",
                    )
            else:
                if len(cited) != len(rule.premises):
                    return ProofCheck(
                        False, index, "BAD_PREMISE",
                        f"rule {rule.name!r} takes {len(rule.premises)} premises",
                    )
                for pattern, formula in zip(rule.premises, cited):
                    if substitute(pattern, mapping) != formula:
                        return ProofCheck(
                            False, index, "BAD_PREMISE",
                            f"{formula_key(formula)} does not match {formula_key(pattern)}",
                        )
                if substitute(rule.conclusion, mapping) != step.formula:
                    return ProofCheck(
                        False, index, "CONCLUSION_MISMATCH",
                        "rule conclusion does not match the step formula",
                    )
        else:
            return ProofCheck(False, index, "UNKNOWN_JUSTIFICATION", repr(just))
    return ProofCheck(True)


# --- bounded closure -------------------------------------------------------


@dataclass(frozen=True)
class _Derivation:
    kind: str  # axiom | schema | rule
    cost: int
    ref: str = ""  # schema id or rule name
    substitution: Substitution = ()
    premises: tuple[Formula, ...] = ()


@dataclass(frozen=True)
class ClosureEntry:
    formula: Formula
    cost: int
    proof: Proof


@dataclass(frozen=True)
class ClosureResult:
    calculus_id: str
    depth: int
    domain_size: int
    entries: tuple[ClosureEntry, ...]
    _index: dict[Formula, ClosureEntry] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        self._index.update({entry.formula: entry for entry in self.entries})

    def formulas(self) -> frozenset[Formula]:
        return frozenset(self._index)

    def __contains__(self, formula: Formula) -> bool:
        return formula in self._index

    def entry_for(self, formula: Formula) -> ClosureEntry | None:
        return self._index.get(formula)

    def proof_for(self, formula: Formula) -> Proof | None:
        entry = self._index.get(formula)
        return entry.proof if entry else None


def instantiation_domain(calculus: Calculus, goals: Iterable[Formula] = ()) -> frozenset[Formula]:
    seeds: set[Formula] = set(calculus.axioms)
    seeds.update(goals)
    seeds.update(Atom(name) for name in calculus.signature_atoms)
    return subformula_closure(seeds)


def closure(
    calculus: Calculus,
    depth: int | None = None,
    *,
    goals: Iterable[Formula] = (),
    size_cap: int = DEFAULT_SIZE_CAP,
) -> ClosureResult:
    """All formulas derivable with at most ``depth`` rule applications.

    Deterministic: the result is sorted by formula text and ties in
    derivation choice are broken by the same ordering.
    """
    if depth is None:
        depth = calculus.closure_depth
    if depth < 0:
        raise ValueError("depth must be nonnegative")

    domain = instantiation_domain(calculus, goals)
    domain_sorted = tuple(sorted(domain, key=formula_key))
    best: dict[Formula, _Derivation] = {}

    def admit(formula: Formula, derivation: _Derivation) -> bool:
        existing = best.get(formula)
        if existing is not None and existing.cost <= derivation.cost:
            return False
        best[formula] = derivation
        if len(best) > size_cap:
            raise DepthExplosionError(calculus.calculus_id, size_cap)
        return True

    for formula in sorted(calculus.axioms, key=formula_key):
        admit(formula, _Derivation("axiom", 0))
    for schema in calculus.schemas:
        names = sorted(atoms(schema.pattern))
        _guard_instantiation(calculus, len(domain_sorted), len(names), size_cap)
        for values in itertools.product(domain_sorted, repeat=len(names)):
            mapping = dict(zip(names, values))
            instance = substitute(schema.pattern, mapping)
            admit(
                instance,
                _Derivation("schema", 0, schema.schema_id, _freeze_substitution(mapping)),
            )

    changed = True
    while changed:
        changed = False
        for rule in calculus.rules:
            if isinstance(rule, SchemaRule):
                if _apply_schema_rule(rule, best, depth, admit):
                    changed = True
            else:
                if _apply_substitution_rule(
                    rule, best, depth, domain_sorted, admit, calculus, size_cap
                ):
                    changed = True

    entries = []
    for formula in sorted(best, key=formula_key):
        derivation = best[formula]
        entries.append(ClosureEntry(formula, derivation.cost, _build_proof(formula, best)))
    return ClosureResult(calculus.calculus_id, depth, len(domain), tuple(entries))


def _guard_instantiation(calculus: Calculus, domain_size: int, var_count: int, size_cap: int) -> None:
    if var_count and domain_size**var_count > size_cap:
        raise DepthExplosionError(
            calculus.calculus_id,
            size_cap,
            f"{domain_size}^{var_count} instantiation candidates",
        )


def _apply_schema_rule(rule, best, depth, admit) -> bool:
    known = [(formula, best[formula]) for formula in sorted(best, key=formula_key)]
    changed = False

    def extend(premise_index: int, bindings: dict[str, Formula],
               used: tuple[Formula, ...], cost_sum: int) -> None:
        nonlocal changed
        if premise_index == len(rule.premises):
            conclusion = substitute(rule.conclusion, bindings)
            derivation = _Derivation(
                "rule", cost_sum + 1, rule.name, _freeze_substitution(bindings), used
            )
            if admit(conclusion, derivation):
                changed = True
            return
        pattern = rule.premises[premise_index]
        for formula, derivation in known:
            total = cost_sum + derivation.cost
            if total + 1 > depth:
                continue
            extended = match_pattern(pattern, formula, bindings)
            if extended is None:
                continue
            extend(premise_index + 1, extended, used + (formula,), total)

    if depth >= 1:
        extend(0, {}, (), 0)
    return changed


def _apply_substitution_rule(rule, best, depth, domain_sorted, admit, calculus, size_cap) -> bool:
    known = [(formula, best[formula]) for formula in sorted(best, key=formula_key)]
    changed = False
    for formula, derivation in known:
        if derivation.cost + 1 > depth:
            continue
        names = sorted(atoms(formula))
        if not names:
            continue
        _guard_instantiation(calculus, len(domain_sorted), len(names), size_cap)
        for values in itertools.product(domain_sorted, repeat=len(names)):
            mapping = dict(zip(names, values))
            result = substitute(formula, mapping)
            new = _Derivation(
                "rule", derivation.cost + 1, rule.name,
                _freeze_substitution(mapping), (formula,),
            )
            if admit(result, new):
                changed = True
    return changed


def _build_proof(target: Formula, best: dict[Formula, _Derivation]) -> Proof:
    order: list[Formula] = []
    index: dict[Formula, int] = {}

    def visit(formula: Formula) -> None:
        if formula in index:
            return
        for premise in best[formula].premises:
            visit(premise)
        index[formula] = len(order)
        order.append(formula)

    visit(target)
    steps: list[ProofStep] = []
    for formula in order:
        derivation = best[formula]
        just: Justification
        if derivation.kind == "axiom":
            just = AxiomStep()
        elif derivation.kind == "schema":
            just = SchemaStep(derivation.ref, derivation.substitution)
        else:
            just = RuleStep(
                derivation.ref,
                tuple(index[premise] for premise in derivation.premises),
                derivation.substitution,
            )
        steps.append(ProofStep(formula, just))
    return Proof(tuple(steps))


def proves(
    calculus: Calculus,
    goal: Formula,
    depth: int | None = None,
    *,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Proof | None:
    """A proof of the goal within the depth bound, or None.

    None means unknown at this bound, never refutation: bounded search
    cannot refute.
    """
    result = closure(calculus, depth, goals=(goal,), size_cap=size_cap)
    return result.proof_for(goal)


@lru_cache(maxsize=512)
def theorem_formulas(calculus: Calculus, depth: int, size_cap: int = DEFAULT_SIZE_CAP) -> frozenset[Formula]:
    """Formula set of ``closure`` without proof objects, memoized."""
    return closure(calculus, depth, size_cap=size_cap).formulas()


# --- presets ---------------------------------------------------------------


def modus_ponens() -> SchemaRule:
    a, b = Atom("a"), Atom("b")
    return SchemaRule("mp", (a, Implies(a, b)), b)


def hilbert_schemas() -> tuple[AxiomSchema, ...]:
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    return (
        AxiomSchema("P1", Implies(a, Implies(b, a))),
        AxiomSchema("P2", Implies(Implies(a, Implies(b, c)),
                                  Implies(Implies(a, b), Implies(a, c)))),
        AxiomSchema("P3", Implies(Implies(Not(a), Not(b)), Implies(b, a))),
    )


PRESET_NAMES = ("hilbert", "mp", "empty")


def base_calculus(name: str, *, closure_depth: int = 3) -> Calculus:
    """Named proof-system presets.

    hilbert: the three standard implication and negation schemas with
    modus ponens. mp: modus ponens alone. empty: no rules at all.
    """
    if name == "hilbert":
        return Calculus("hilbert", schemas=hilbert_schemas(),
                        rules=(modus_ponens(),), closure_depth=closure_depth)
    if name == "mp":
        return Calculus("mp", rules=(modus_ponens(),), closure_depth=closure_depth)
    if name == "empty":
        return Calculus("empty", closure_depth=closure_depth)
    raise ValueError(f"unknown calculus preset {name!r}; choose from {PRESET_NAMES}")


def with_axioms(base: Calculus, axioms: Iterable[Formula], *, calculus_id: str | None = None) -> Calculus:
    """The base calculus extended with extra instance axioms."""
    merged = frozenset(base.axioms) | frozenset(axioms)
    return Calculus(
        calculus_id or base.calculus_id,
        axioms=merged,
        schemas=base.schemas,
        rules=base.rules,
        closure_depth=base.closure_depth,
        signature_atoms=base.signature_atoms,
    )
