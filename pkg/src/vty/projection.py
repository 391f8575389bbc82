"""Projective inference over a curated registry of algorithm classes.

A theorem proved from named class axioms projects onto every registered
class whose profile satisfies all of the theorem's dependencies. The
profiles are curated data with evidence attached; the projection itself
is a mechanical partition, not a proof search.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .calculus import (
    Calculus,
    DEFAULT_SIZE_CAP,
    Proof,
    base_calculus,
    proves,
    with_axioms,
)
from .errors import SubsetCapExceededError, UndeclaredAxiomError
from .formulas import Formula, formula_key
from .semantics import DEFAULT_ATOM_CAP, check_consistency, entails
from .witnesses import WITNESSES

SATISFIED = "SATISFIED"
VIOLATED = "VIOLATED"
UNKNOWN = "UNKNOWN"

CITATION = "CITATION"
EXEC_POSITIVE = "EXEC_POSITIVE"
EXEC_EXHAUSTIVE = "EXEC_EXHAUSTIVE"

DEFAULT_SUBSET_CAP = 12


@dataclass(frozen=True)
class AxiomDeclaration:
    axiom_id: str
    statement: str


@dataclass(frozen=True)
class Evidence:
    kind: str  # CITATION, EXEC_POSITIVE or EXEC_EXHAUSTIVE
    citation: str | None = None
    witness_id: str | None = None
    suite_size: int | None = None
    domain: str | None = None

    def __post_init__(self) -> None:
        if self.kind == CITATION:
            if not self.citation:
                raise ValueError("citation evidence needs citation text")
        elif self.kind == EXEC_POSITIVE:
            if not self.witness_id or self.suite_size is None:
                raise ValueError("exec-positive evidence needs a witness id and suite size")
        elif self.kind == EXEC_EXHAUSTIVE:
            if not self.witness_id or self.domain is None:
                raise ValueError("exec-exhaustive evidence needs a witness id and a domain")
        else:
            raise ValueError(f"unknown evidence kind {self.kind!r}")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.citation is not None:
            out["citation"] = self.citation
        if self.witness_id is not None:
            out["witness"] = self.witness_id
        if self.suite_size is not None:
            out["suite_size"] = self.suite_size
        if self.domain is not None:
            out["domain"] = self.domain
        return out


@dataclass(frozen=True)
class AxiomStatus:
    status: str  # SATISFIED, VIOLATED or UNKNOWN
    evidence: Evidence | None = None

    def __post_init__(self) -> None:
        if self.status not in (SATISFIED, VIOLATED, UNKNOWN):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status != UNKNOWN and self.evidence is None:
            raise ValueError("a resolved status needs evidence")
        if self.status == UNKNOWN and self.evidence is not None:
            raise ValueError("an unknown status carries no evidence")


@dataclass(frozen=True, eq=False)
class ClassProfile:
    class_id: str
    display_name: str
    statuses: Mapping[str, AxiomStatus]

    def status_of(self, axiom_id: str) -> AxiomStatus:
        return self.statuses.get(axiom_id, AxiomStatus(UNKNOWN))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassProfile):
            return NotImplemented
        return (
            self.class_id == other.class_id
            and self.display_name == other.display_name
            and dict(self.statuses) == dict(other.statuses)
        )


@dataclass(frozen=True)
class TheoremRecord:
    theorem_id: str
    statement: str
    dependencies: frozenset[str]
    source: str
    unconditional: bool = False

    def __post_init__(self) -> None:
        if not self.unconditional and not self.dependencies:
            raise ValueError(
                f"theorem {self.theorem_id!r} needs dependencies or the unconditional flag"
            )


def validate_registry(
    profiles: Sequence[ClassProfile],
    declarations: Mapping[str, AxiomDeclaration],
    *,
    run_exec: bool = False,
) -> None:
    """Reject undeclared axiom ids and dangling witness references.

    With run_exec, executable evidence is run and must pass.
    """
    for profile in profiles:
        for axiom_id, status in profile.statuses.items():
            if axiom_id not in declarations:
                raise UndeclaredAxiomError(axiom_id)
            evidence = status.evidence
            if evidence is not None and evidence.witness_id is not None:
                if evidence.witness_id not in WITNESSES:
                    raise KeyError(
                        f"class {profile.class_id!r} cites unknown witness "
                        f"{evidence.witness_id!r}"
                    )
                if run_exec and not WITNESSES[evidence.witness_id].run().passed:
                    raise AssertionError(
                        f"witness {evidence.witness_id!r} failed for class "
                        f"{profile.class_id!r}"
                    )


@dataclass(frozen=True)
class ProjectionEntry:
    class_id: str
    display_name: str
    detail: str

    def to_dict(self) -> dict:
        return {"class": self.class_id, "name": self.display_name, "detail": self.detail}


@dataclass(frozen=True)
class ProjectionReport:
    theorem_id: str
    corollaries: tuple[ProjectionEntry, ...]
    not_applicable: tuple[ProjectionEntry, ...]
    unknown: tuple[ProjectionEntry, ...]

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "corollaries": [e.to_dict() for e in self.corollaries],
            "not_applicable": [e.to_dict() for e in self.not_applicable],
            "unknown": [e.to_dict() for e in self.unknown],
        }


def project(
    theorem: TheoremRecord,
    profiles: Sequence[ClassProfile],
    declarations: Mapping[str, AxiomDeclaration],
) -> ProjectionReport:
    """Partition the registry by the theorem's dependencies.

    Every dependency satisfied gives a corollary; any dependency
    violated rules the class out; anything else stays unknown. The
    registry order is preserved in each part.
    """
    for axiom_id in sorted(theorem.dependencies):
        if axiom_id not in declarations:
            raise UndeclaredAxiomError(axiom_id)
    corollaries: list[ProjectionEntry] = []
    not_applicable: list[ProjectionEntry] = []
    unknown: list[ProjectionEntry] = []
    for profile in profiles:
        if theorem.unconditional:
            corollaries.append(ProjectionEntry(
                profile.class_id, profile.display_name,
                f"for {profile.display_name}: {theorem.statement}",
            ))
            continue
        statuses = {d: profile.status_of(d).status for d in sorted(theorem.dependencies)}
        if all(s == SATISFIED for s in statuses.values()):
            corollaries.append(ProjectionEntry(
                profile.class_id, profile.display_name,
                f"for {profile.display_name}: {theorem.statement}",
            ))
        elif any(s == VIOLATED for s in statuses.values()):
            blockers = sorted(d for d, s in statuses.items() if s == VIOLATED)
            not_applicable.append(ProjectionEntry(
                profile.class_id, profile.display_name,
                "violates " + ", ".join(blockers),
            ))
        else:
            open_ids = sorted(d for d, s in statuses.items() if s == UNKNOWN)
            unknown.append(ProjectionEntry(
                profile.class_id, profile.display_name,
                "unresolved " + ", ".join(open_ids),
            ))
    return ProjectionReport(
        theorem.theorem_id, tuple(corollaries), tuple(not_applicable), tuple(unknown)
    )


# --- axioms-to-theorem relation ---------------------------------------------


@dataclass(frozen=True)
class RelationReport:
    consistent_with: str  # YES or NO, exact by truth table
    sufficient: str       # YES or UNKNOWN, bounded proof search cannot refute
    irreducible: str      # YES, NO or UNKNOWN
    depth: int
    base: str
    semantically_entailed: bool
    reducible_to: tuple[str, ...] | None = None
    proof: Proof | None = None

    def to_dict(self) -> dict:
        out = {
            "consistent_with": self.consistent_with,
            "sufficient": self.sufficient,
            "irreducible": self.irreducible,
            "depth": self.depth,
            "base": self.base,
            "semantically_entailed": self.semantically_entailed,
        }
        if self.reducible_to is not None:
            out["reducible_to"] = list(self.reducible_to)
        if self.sufficient == "UNKNOWN" and not self.semantically_entailed:
            out["note"] = "the truth table already rules out entailment"
        return out


def _resolve_base(base: Calculus | str) -> Calculus:
    return base if isinstance(base, Calculus) else base_calculus(base)


def classify_relation(
    axioms: Iterable[Formula],
    goal: Formula,
    base: Calculus | str = "hilbert",
    depth: int = 3,
    *,
    atom_cap: int = DEFAULT_ATOM_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> RelationReport:
    """Consistency, bounded sufficiency, and exact subset irreducibility.

    Sufficiency is one-sided: a proof gives YES, absence of one within
    the depth gives UNKNOWN. Irreducibility is exact relative to the
    same depth bound: once sufficiency holds, every proper subset is
    retried at that depth.
    """
    axiom_list = sorted(set(axioms), key=formula_key)
    base_calc = _resolve_base(base)
    consistent = check_consistency([*axiom_list, goal], atom_cap).consistent
    proof = proves(with_axioms(base_calc, axiom_list), goal, depth, size_cap=size_cap)
    entailed = entails(axiom_list, goal, atom_cap)
    if proof is None:
        return RelationReport(
            "YES" if consistent else "NO", "UNKNOWN", "UNKNOWN",
            depth, base_calc.calculus_id, entailed,
        )
    if len(axiom_list) > subset_cap:
        raise SubsetCapExceededError(len(axiom_list), subset_cap)
    reducible_to: tuple[str, ...] | None = None
    for width in range(len(axiom_list)):
        for combo in itertools.combinations(axiom_list, width):
            if proves(with_axioms(base_calc, combo), goal, depth, size_cap=size_cap):
                reducible_to = tuple(formula_key(f) for f in combo)
                break
        if reducible_to is not None:
            break
    return RelationReport(
        "YES" if consistent else "NO", "YES",
        "NO" if reducible_to is not None else "YES",
        depth, base_calc.calculus_id, entailed,
        reducible_to, proof,
    )


def minimal_axiom_subsets(
    axioms: Iterable[Formula],
    goal: Formula,
    base: Calculus | str = "hilbert",
    depth: int = 3,
    *,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> tuple[frozenset[Formula], ...]:
    """All minimal sufficient subsets at the depth bound, as an antichain.

    Exhaustive over subsets in increasing size; supersets of a found
    subset are skipped, so no result contains another.
    """
    axiom_list = sorted(set(axioms), key=formula_key)
    if len(axiom_list) > subset_cap:
        raise SubsetCapExceededError(len(axiom_list), subset_cap)
    base_calc = _resolve_base(base)
    minimal: list[frozenset[Formula]] = []
    for width in range(len(axiom_list) + 1):
        for combo in itertools.combinations(axiom_list, width):
            candidate = frozenset(combo)
            if any(found <= candidate for found in minimal):
                continue
            if proves(with_axioms(base_calc, combo), goal, depth, size_cap=size_cap):
                minimal.append(candidate)
    minimal.sort(key=lambda s: (len(s), tuple(sorted(formula_key(f) for f in s))))
    return tuple(minimal)


# --- registry matrix ---------------------------------------------------------


CELL_MARKS = {"corollary": "C", "not_applicable": "-", "unknown": "?"}


@dataclass(frozen=True)
class MatrixReport:
    classes: tuple[str, ...]
    theorems: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]  # rows by class, columns by theorem

    def to_dict(self) -> dict:
        return {
            "classes": list(self.classes),
            "theorems": list(self.theorems),
            "cells": [list(row) for row in self.cells],
            "legend": dict(CELL_MARKS),
        }

    def to_text(self) -> str:
        width = max((len(c) for c in self.classes), default=5)
        header = " " * (width + 2) + "  ".join(
            f"{t}" for t in self.theorems
        )
        lines = [header]
        for class_id, row in zip(self.classes, self.cells):
            marks = "  ".join(
                CELL_MARKS[cell].center(len(theorem))
                for cell, theorem in zip(row, self.theorems)
            )
            lines.append(f"{class_id.ljust(width + 2)}{marks}")
        lines.append("legend: C corollary, - not applicable, ? unknown")
        return "\n".join(lines)


def registry_report(
    profiles: Sequence[ClassProfile],
    theorems: Sequence[TheoremRecord],
    declarations: Mapping[str, AxiomDeclaration],
) -> MatrixReport:
    """Class-by-theorem matrix in declared order, cell values from project."""
    columns = tuple(theorem.theorem_id for theorem in theorems)
    rows = []
    by_class: dict[str, dict[str, str]] = {p.class_id: {} for p in profiles}
    for theorem in theorems:
        report = project(theorem, profiles, declarations)
        for entry in report.corollaries:
            by_class[entry.class_id][theorem.theorem_id] = "corollary"
        for entry in report.not_applicable:
            by_class[entry.class_id][theorem.theorem_id] = "not_applicable"
        for entry in report.unknown:
            by_class[entry.class_id][theorem.theorem_id] = "unknown"
    for profile in profiles:
        rows.append(tuple(by_class[profile.class_id][t] for t in columns))
    return MatrixReport(
        tuple(p.class_id for p in profiles), columns, tuple(rows)
    )
