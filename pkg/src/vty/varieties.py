"""Prevarieties and varieties of logical components, with exact checks.

A component is a calculus together with two formula maps and a
designated theorem subset. A prevariety is the component list plus the
union triad it claims to assemble: axiom union, rule union, theorem
union. Checks recompute the unions extensionally over finite
materialized sets and report every mismatch element by element.

Theorem sets are always bounded closures, so every equality that
mentions them is verified up to the component's depth and reported as
such.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .calculus import (
    Calculus,
    DEFAULT_SIZE_CAP,
    InferenceRule,
    theorem_formulas,
)
from .errors import MapUndefinedError
from .formulas import Formula, formula_key, rename_atoms
from .semantics import DEFAULT_ATOM_CAP, ConsistencyVerdict, check_consistency

DEFAULT_COMPONENT_SUBSET_CAP = 4096


@dataclass(frozen=True)
class FormulaMap:
    """A partial formula-to-formula map: an atom renaming or a finite table.

    Renamings extend homomorphically over connectives and leave unmapped
    atoms fixed. Tables map listed formulas only. An optional domain
    restriction narrows either kind. Applying a map outside its domain
    raises; it is never a silent identity.
    """

    map_id: str
    renaming: tuple[tuple[str, str], ...] | None = None
    table: tuple[tuple[Formula, Formula], ...] | None = None
    domain: frozenset[Formula] | None = None

    def __post_init__(self) -> None:
        if (self.renaming is None) == (self.table is None):
            raise ValueError("a formula map is either a renaming or a table")
        if self.table is not None:
            sources = [source for source, _ in self.table]
            if len(sources) != len(set(sources)):
                raise ValueError(f"map {self.map_id!r} lists a source formula twice")

    @classmethod
    def identity(cls, map_id: str = "identity") -> FormulaMap:
        return cls(map_id, renaming=())

    @classmethod
    def renaming_map(
        cls, map_id: str, mapping: Mapping[str, str],
        domain: Iterable[Formula] | None = None,
    ) -> FormulaMap:
        pairs = tuple(sorted(mapping.items()))
        dom = frozenset(domain) if domain is not None else None
        return cls(map_id, renaming=pairs, domain=dom)

    @classmethod
    def table_map(
        cls, map_id: str, pairs: Mapping[Formula, Formula] | Iterable[tuple[Formula, Formula]],
        domain: Iterable[Formula] | None = None,
    ) -> FormulaMap:
        items = pairs.items() if isinstance(pairs, Mapping) else pairs
        frozen = tuple(sorted(items, key=lambda pair: formula_key(pair[0])))
        dom = frozenset(domain) if domain is not None else None
        return cls(map_id, table=frozen, domain=dom)

    def defined_on(self, formula: Formula) -> bool:
        if self.domain is not None and formula not in self.domain:
            return False
        if self.table is not None:
            return any(source == formula for source, _ in self.table)
        return True

    def apply(self, formula: Formula, context: str = "") -> Formula:
        if not self.defined_on(formula):
            raise MapUndefinedError(self.map_id, formula_key(formula), context)
        if self.table is not None:
            for source, target in self.table:
                if source == formula:
                    return target
            raise MapUndefinedError(self.map_id, formula_key(formula), context)
        return rename_atoms(formula, dict(self.renaming or ()))

    def image(self, formulas: Iterable[Formula]) -> frozenset[Formula]:
        """Image over the defined part of the input set."""
        return frozenset(self.apply(f) for f in formulas if self.defined_on(f))

    def image_total(self, formulas: Iterable[Formula], context: str = "") -> frozenset[Formula]:
        """Image requiring every input to be in the domain."""
        return frozenset(self.apply(f, context) for f in formulas)


@dataclass(frozen=True)
class Component:
    component_id: str
    calculus: Calculus
    axiom_map: FormulaMap
    theorem_map: FormulaMap
    designated_theorems: frozenset[Formula]


@dataclass(frozen=True)
class Prevariety:
    """Component list plus the union triad it claims to assemble."""

    axioms: frozenset[Formula]
    rules: frozenset[InferenceRule]
    theorems: frozenset[Formula]
    components: tuple[Component, ...]
    quasi: bool = False


@dataclass(frozen=True)
class VarietyWitness:
    """A covering calculus for one index tuple, with its two projections.

    The axiom projection must send every axiom of the covering calculus
    into the axiom-image intersection of the tuple; the theorem
    projection must send the theorem subset (theorems of the covering
    calculus) into the designated-theorem-image intersection.
    """

    witness_id: str
    indices: tuple[int, ...]  # 1-based component positions, strictly increasing
    calculus: Calculus
    axiom_projection: FormulaMap
    theorem_projection: FormulaMap
    theorem_subset: frozenset[Formula]

    def __post_init__(self) -> None:
        if not self.indices:
            raise ValueError("a witness covers at least one component index")
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("witness indices must be strictly increasing")


def component_axiom_set(component: Component, *, size_cap: int = DEFAULT_SIZE_CAP) -> frozenset[Formula]:
    """Instance axioms plus schema instances over the restricted domain."""
    return theorem_formulas(component.calculus, 0, size_cap)


def component_theorem_set(component: Component, *, size_cap: int = DEFAULT_SIZE_CAP) -> frozenset[Formula]:
    """Bounded theorem set at the component's own closure depth."""
    return theorem_formulas(component.calculus, component.calculus.closure_depth, size_cap)


def assemble_prevariety(
    components: Sequence[Component],
    *,
    quasi: bool = False,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> Prevariety:
    """Union the component images into the triad.

    Raises MapUndefinedError when a map misses a required input; the
    error names the component and the formula.
    """
    axioms: set[Formula] = set()
    rules: set[InferenceRule] = set()
    theorems: set[Formula] = set()
    for component in components:
        axiom_set = component_axiom_set(component, size_cap=size_cap)
        axioms.update(
            component.axiom_map.image_total(
                axiom_set, f"assembling axioms of component {component.component_id!r}"
            )
        )
        rules.update(component.calculus.rules)
        theorems.update(
            component.theorem_map.image_total(
                component.designated_theorems,
                f"assembling theorems of component {component.component_id!r}",
            )
        )
    return Prevariety(
        frozenset(axioms), frozenset(rules), frozenset(theorems),
        tuple(components), quasi,
    )


# --- reports ---------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    code: str
    component_id: str | None = None
    equation: str | None = None  # A, H or M when a union equation is involved
    subject: str | None = None   # formula text, rule name or index tuple
    message: str = ""

    def sort_key(self) -> tuple:
        return (
            self.code,
            self.component_id or "",
            self.equation or "",
            self.subject or "",
            self.message,
        )

    def to_dict(self) -> dict:
        return {
            "code": self.code,
            "component": self.component_id,
            "equation": self.equation,
            "subject": self.subject,
            "message": self.message,
        }


@dataclass(frozen=True)
class TupleRecord:
    indices: tuple[int, ...]
    axiom_intersection: tuple[str, ...]
    theorem_intersection: tuple[str, ...]
    status: str  # vacuous | witnessed | self-witnessed | missing | invalid
    witness_id: str | None = None
    axiom_projection_surjective: bool | None = None
    theorem_projection_surjective: bool | None = None

    def to_dict(self) -> dict:
        return {
            "indices": list(self.indices),
            "axiom_intersection": list(self.axiom_intersection),
            "theorem_intersection": list(self.theorem_intersection),
            "status": self.status,
            "witness": self.witness_id,
            "axiom_projection_surjective": self.axiom_projection_surjective,
            "theorem_projection_surjective": self.theorem_projection_surjective,
        }


@dataclass(frozen=True)
class StructureReport:
    kind: str  # prevariety | variety | bijective-prevariety | bijective-variety
    verdict: str  # PASS | FAIL
    equations: tuple[tuple[str, str], ...]  # (name, OK | MISMATCH) pairs
    diagnostics: tuple[Diagnostic, ...]
    depth_bounds: tuple[tuple[str, int], ...]
    tuples: tuple[TupleRecord, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "equations": {name: status for name, status in self.equations},
            "diagnostics": [d.to_dict() for d in self.diagnostics],
            "depth_bounds": {cid: depth for cid, depth in self.depth_bounds},
            "tuples": [record.to_dict() for record in self.tuples],
            "notes": list(self.notes),
        }


def _depth_bounds(pv: Prevariety) -> tuple[tuple[str, int], ...]:
    return tuple(
        (c.component_id, c.calculus.closure_depth) for c in pv.components
    )


def _texts(formulas: Iterable[Formula]) -> tuple[str, ...]:
    return tuple(sorted(formula_key(f) for f in formulas))


def check_prevariety(pv: Prevariety, *, size_cap: int = DEFAULT_SIZE_CAP) -> StructureReport:
    """Verify the three union equations and the component invariants."""
    diagnostics: list[Diagnostic] = []
    expected_axioms: set[Formula] = set()
    expected_rules: set[InferenceRule] = set()
    expected_theorems: set[Formula] = set()

    for component in pv.components:
        cid = component.component_id
        axiom_set = component_axiom_set(component, size_cap=size_cap)
        for formula in sorted(axiom_set, key=formula_key):
            if not component.axiom_map.defined_on(formula):
                diagnostics.append(Diagnostic(
                    "MAP_UNDEFINED", cid, "A", formula_key(formula),
                    f"axiom map {component.axiom_map.map_id!r} misses an axiom",
                ))
            else:
                expected_axioms.add(component.axiom_map.apply(formula))
        expected_rules.update(component.calculus.rules)
        theorem_set = component_theorem_set(component, size_cap=size_cap)
        for formula in sorted(component.designated_theorems, key=formula_key):
            if not component.theorem_map.defined_on(formula):
                diagnostics.append(Diagnostic(
                    "MAP_UNDEFINED", cid, "M", formula_key(formula),
                    f"theorem map {component.theorem_map.map_id!r} misses a designated theorem",
                ))
            else:
                expected_theorems.add(component.theorem_map.apply(formula))
            if not pv.quasi and formula not in theorem_set:
                diagnostics.append(Diagnostic(
                    "NOT_A_THEOREM", cid, "M", formula_key(formula),
                    f"not provable within depth {component.calculus.closure_depth}",
                ))

    equations = []
    for name, claimed, expected, code in (
        ("A", pv.axioms, expected_axioms, "AXIOM_UNION_MISMATCH"),
        ("M", pv.theorems, expected_theorems, "THEOREM_UNION_MISMATCH"),
    ):
        status = "OK"
        for formula in sorted(claimed - expected, key=formula_key):
            status = "MISMATCH"
            diagnostics.append(Diagnostic(
                code, None, name, formula_key(formula),
                "claimed in the union but contributed by no component",
            ))
        for formula in sorted(expected - claimed, key=formula_key):
            status = "MISMATCH"
            diagnostics.append(Diagnostic(
                code, None, name, formula_key(formula),
                "contributed by a component but missing from the union",
            ))
        equations.append((name, status))

    rule_status = "OK"
    claimed_rules = {rule.name: rule for rule in sorted(pv.rules, key=lambda r: r.name)}
    expected_by_name = {rule.name: rule for rule in sorted(expected_rules, key=lambda r: r.name)}
    for name in sorted(set(claimed_rules) | set(expected_by_name)):
        claimed = claimed_rules.get(name)
        expected = expected_by_name.get(name)
        if claimed == expected:
            continue
        rule_status = "MISMATCH"
        if expected is None:
            message = "claimed in the union but contributed by no component"
        elif claimed is None:
            message = "contributed by a component but missing from the union"
        else:
            message = "rule content differs between the union and the components"
        diagnostics.append(Diagnostic("RULE_UNION_MISMATCH", None, "H", name, message))
    equations.insert(1, ("H", rule_status))

    diagnostics.sort(key=Diagnostic.sort_key)
    verdict = "PASS" if not diagnostics else "FAIL"
    notes = ()
    if pv.quasi:
        notes = ("quasi mode: designated theorems are not required to be provable",)
    return StructureReport(
        "prevariety", verdict, tuple(equations), tuple(diagnostics),
        _depth_bounds(pv), notes=notes,
    )


def _component_images(pv: Prevariety, size_cap: int):
    """Per 1-based index: axiom image, bounded-theorem image, designated image."""
    axiom_images: dict[int, frozenset[Formula]] = {}
    theorem_images: dict[int, frozenset[Formula]] = {}
    designated_images: dict[int, frozenset[Formula]] = {}
    for position, component in enumerate(pv.components, start=1):
        axiom_images[position] = component.axiom_map.image(
            component_axiom_set(component, size_cap=size_cap)
        )
        theorem_images[position] = component.theorem_map.image(
            component_theorem_set(component, size_cap=size_cap)
        )
        designated_images[position] = component.theorem_map.image(
            component.designated_theorems
        )
    return axiom_images, theorem_images, designated_images


def _self_witness(position: int, component: Component) -> VarietyWitness:
    return VarietyWitness(
        f"self:{component.component_id}",
        (position,),
        component.calculus,
        component.axiom_map,
        component.theorem_map,
        component.designated_theorems,
    )


def _intersect(images: Mapping[int, frozenset[Formula]], indices: tuple[int, ...]) -> frozenset[Formula]:
    result: frozenset[Formula] | None = None
    for index in indices:
        result = images[index] if result is None else result & images[index]
    return result if result is not None else frozenset()


def _validate_witness(
    witness: VarietyWitness,
    axiom_intersection: frozenset[Formula],
    designated_intersection: frozenset[Formula],
    size_cap: int,
) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    tuple_text = str(witness.indices)
    covering_axioms = theorem_formulas(witness.calculus, 0, size_cap)
    for formula in sorted(covering_axioms, key=formula_key):
        if not witness.axiom_projection.defined_on(formula):
            diagnostics.append(Diagnostic(
                "WITNESS_MAP_UNDEFINED", witness.witness_id, None, formula_key(formula),
                f"axiom projection misses a covering axiom for tuple {tuple_text}",
            ))
            continue
        image = witness.axiom_projection.apply(formula)
        if image not in axiom_intersection:
            diagnostics.append(Diagnostic(
                "WITNESS_AXIOM_OUTSIDE_INTERSECTION", witness.witness_id, None,
                formula_key(formula),
                f"projects to {formula_key(image)} outside the axiom intersection of {tuple_text}",
            ))
    covering_theorems = theorem_formulas(
        witness.calculus, witness.calculus.closure_depth, size_cap
    )
    for formula in sorted(witness.theorem_subset, key=formula_key):
        if formula not in covering_theorems:
            diagnostics.append(Diagnostic(
                "WITNESS_THEOREM_UNPROVED", witness.witness_id, None, formula_key(formula),
                f"not provable in the covering calculus within depth "
                f"{witness.calculus.closure_depth}",
            ))
        if not witness.theorem_projection.defined_on(formula):
            diagnostics.append(Diagnostic(
                "WITNESS_MAP_UNDEFINED", witness.witness_id, None, formula_key(formula),
                f"theorem projection misses a subset member for tuple {tuple_text}",
            ))
            continue
        image = witness.theorem_projection.apply(formula)
        if image not in designated_intersection:
            diagnostics.append(Diagnostic(
                "WITNESS_THEOREM_OUTSIDE_INTERSECTION", witness.witness_id, None,
                formula_key(formula),
                f"projects to {formula_key(image)} outside the theorem intersection of {tuple_text}",
            ))
    return diagnostics


def check_variety(
    pv: Prevariety,
    k: int,
    witnesses: Sequence[VarietyWitness] = (),
    *,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> StructureReport:
    """Witness verification for every index tuple of length up to ``k``.

    A tuple whose axiom and theorem image intersections are both empty
    passes vacuously. Single-index tuples fall back to the component
    itself as an implicit self witness when none is supplied. All other
    nonvacuous tuples need an explicit witness; verification never
    searches for one.
    """
    if k < 1:
        raise ValueError("tuple width k must be at least 1")
    base = check_prevariety(pv, size_cap=size_cap)
    if not base.passed:
        return StructureReport(
            "variety", "FAIL", base.equations,
            base.diagnostics + (Diagnostic(
                "PREVARIETY_FAILED", None, None, None,
                "the union equations must pass before witness checks run",
            ),),
            base.depth_bounds, notes=base.notes,
        )

    axiom_images, theorem_images, designated_images = _component_images(pv, size_cap)
    by_tuple: dict[tuple[int, ...], VarietyWitness] = {}
    diagnostics: list[Diagnostic] = []
    for witness in witnesses:
        if witness.indices in by_tuple:
            diagnostics.append(Diagnostic(
                "DUPLICATE_WITNESS", witness.witness_id, None, str(witness.indices),
                "another witness already covers this tuple",
            ))
            continue
        by_tuple[witness.indices] = witness

    records: list[TupleRecord] = []
    count = len(pv.components)
    for width in range(1, min(k, count) + 1):
        for indices in itertools.combinations(range(1, count + 1), width):
            axiom_intersection = _intersect(axiom_images, indices)
            theorem_intersection = _intersect(theorem_images, indices)
            designated_intersection = _intersect(designated_images, indices)
            if not axiom_intersection and not theorem_intersection:
                records.append(TupleRecord(
                    indices, (), (), "vacuous",
                ))
                continue
            witness = by_tuple.get(indices)
            status = "witnessed"
            if witness is None and width == 1:
                witness = _self_witness(indices[0], pv.components[indices[0] - 1])
                status = "self-witnessed"
            if witness is None:
                diagnostics.append(Diagnostic(
                    "MISSING_WITNESS", None, None, str(indices),
                    "nonempty intersections but no witness supplied for this tuple",
                ))
                records.append(TupleRecord(
                    indices, _texts(axiom_intersection), _texts(theorem_intersection),
                    "missing",
                ))
                continue
            problems = _validate_witness(
                witness, axiom_intersection, designated_intersection, size_cap
            )
            covering_axioms = theorem_formulas(witness.calculus, 0, size_cap)
            axiom_image = witness.axiom_projection.image(covering_axioms)
            theorem_image = witness.theorem_projection.image(witness.theorem_subset)
            records.append(TupleRecord(
                indices, _texts(axiom_intersection), _texts(theorem_intersection),
                status if not problems else "invalid",
                witness.witness_id,
                axiom_image == axiom_intersection,
                theorem_image == designated_intersection,
            ))
            diagnostics.extend(problems)

    diagnostics.sort(key=Diagnostic.sort_key)
    verdict = "PASS" if not diagnostics else "FAIL"
    notes = (
        f"checked index tuples of width 1..{min(k, count)}",
        "theorem intersections computed on bounded closures at each component's depth",
    )
    if pv.quasi:
        notes = notes + ("quasi mode: designated theorems are not required to be provable",)
    return StructureReport(
        "variety", verdict, base.equations, tuple(diagnostics),
        base.depth_bounds, tuple(records), notes,
    )


def check_bijective_variety(
    pv: Prevariety,
    mode: str,
    k: int = 1,
    witnesses: Sequence[VarietyWitness] = (),
    *,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> StructureReport:
    """Injectivity checks, plus full closure equality in variety mode.

    mode "prevariety": the union equations must hold and both maps of
    every component must be injective on their materialized domains.
    mode "variety": additionally every designated theorem set must
    equal the bounded closure of its calculus, and the width-k witness
    condition of ``check_variety`` must hold.
    """
    if mode not in ("prevariety", "variety"):
        raise ValueError(f"mode must be 'prevariety' or 'variety', not {mode!r}")
    kind = f"bijective-{mode}"
    if mode == "variety":
        base = check_variety(pv, k, witnesses, size_cap=size_cap)
    else:
        base = check_prevariety(pv, size_cap=size_cap)
    diagnostics = list(base.diagnostics)

    for component in pv.components:
        cid = component.component_id
        axiom_set = component_axiom_set(component, size_cap=size_cap)
        diagnostics.extend(_injectivity(
            component.axiom_map, axiom_set, cid, "axiom map"
        ))
        diagnostics.extend(_injectivity(
            component.theorem_map, component.designated_theorems, cid, "theorem map"
        ))
        if mode == "variety":
            theorem_set = component_theorem_set(component, size_cap=size_cap)
            for formula in sorted(theorem_set - component.designated_theorems, key=formula_key):
                diagnostics.append(Diagnostic(
                    "THEOREMS_NOT_CLOSED", cid, "M", formula_key(formula),
                    f"provable at depth {component.calculus.closure_depth} "
                    "but not designated",
                ))
            for formula in sorted(component.designated_theorems - theorem_set, key=formula_key):
                diagnostics.append(Diagnostic(
                    "THEOREMS_NOT_CLOSED", cid, "M", formula_key(formula),
                    "designated but outside the bounded closure",
                ))

    diagnostics.sort(key=Diagnostic.sort_key)
    verdict = "PASS" if not diagnostics else "FAIL"
    notes = base.notes + (
        "bijectivity is checked as injectivity on the materialized domain; "
        "every map is onto its own image by construction",
    )
    if mode == "variety":
        notes = notes + ("designated theorem sets compared with closures up to each depth",)
    return StructureReport(
        kind, verdict, base.equations, tuple(diagnostics),
        base.depth_bounds, base.tuples, notes,
    )


def _injectivity(
    formula_map: FormulaMap, domain: frozenset[Formula], cid: str, label: str
) -> list[Diagnostic]:
    seen: dict[Formula, Formula] = {}
    diagnostics: list[Diagnostic] = []
    for formula in sorted(domain, key=formula_key):
        if not formula_map.defined_on(formula):
            continue  # undefined entries are reported by the prevariety check
        image = formula_map.apply(formula)
        if image in seen and seen[image] != formula:
            diagnostics.append(Diagnostic(
                "NOT_BIJECTIVE", cid, None,
                f"{formula_key(seen[image])}, {formula_key(formula)}",
                f"{label} {formula_map.map_id!r} sends both to {formula_key(image)}",
            ))
        else:
            seen.setdefault(image, formula)
    return diagnostics


def component_membership(
    pv: Prevariety, query: Formula, *, size_cap: int = DEFAULT_SIZE_CAP
) -> tuple[str, ...]:
    """Ids of the components whose designated image contains the query."""
    hits = []
    for component in pv.components:
        image = component.theorem_map.image(component.designated_theorems)
        if query in image:
            hits.append(component.component_id)
    return tuple(sorted(hits))


# --- knowledge-base consistency --------------------------------------------


@dataclass(frozen=True)
class ComponentConsistency:
    component_id: str
    verdict: str
    formula_count: int
    atom_count: int

    def to_dict(self) -> dict:
        return {
            "component": self.component_id,
            "verdict": self.verdict,
            "formulas": self.formula_count,
            "atoms": self.atom_count,
        }


@dataclass(frozen=True)
class KnowledgeConsistencyReport:
    components: tuple[ComponentConsistency, ...]
    global_verdict: str
    global_witness_kind: str | None
    locally_consistent_globally_inconsistent: bool
    minimal_inconsistent_sets: tuple[tuple[str, ...], ...]
    notes: tuple[str, ...] = ()

    @property
    def pairs(self) -> tuple[tuple[str, ...], ...]:
        return tuple(s for s in self.minimal_inconsistent_sets if len(s) == 2)

    def to_dict(self) -> dict:
        return {
            "components": [c.to_dict() for c in self.components],
            "global": self.global_verdict,
            "global_witness": self.global_witness_kind,
            "locally_consistent_globally_inconsistent":
                self.locally_consistent_globally_inconsistent,
            "minimal_inconsistent_sets": [list(s) for s in self.minimal_inconsistent_sets],
            "pairs": [list(s) for s in self.pairs],
            "notes": list(self.notes),
        }


def consistency_report(
    pv: Prevariety,
    *,
    atom_cap: int = DEFAULT_ATOM_CAP,
    size_cap: int = DEFAULT_SIZE_CAP,
    subset_cap: int = DEFAULT_COMPONENT_SUBSET_CAP,
) -> KnowledgeConsistencyReport:
    """Per-component and global satisfiability, with minimal bad subsets.

    The hallmark situation, every component consistent while the pooled
    set is not, is detected and flagged. Minimal inconsistent component
    subsets are found by exhaustive subset search in increasing size;
    supersets of a known inconsistent subset are skipped.
    """
    contributions: dict[str, frozenset[Formula]] = {}
    rows: list[ComponentConsistency] = []
    for component in pv.components:
        pooled = component.axiom_map.image(
            component_axiom_set(component, size_cap=size_cap)
        ) | component.theorem_map.image(component.designated_theorems)
        contributions[component.component_id] = pooled
        verdict = check_consistency(pooled, atom_cap)
        rows.append(ComponentConsistency(
            component.component_id, verdict.verdict, len(pooled), verdict.atom_count
        ))

    global_set = pv.axioms | pv.theorems
    global_verdict = check_consistency(global_set, atom_cap)
    all_locally_consistent = all(row.verdict == "CONSISTENT" for row in rows)
    flag = all_locally_consistent and not global_verdict.consistent

    ids = [component.component_id for component in pv.components]
    minimal: list[tuple[str, ...]] = []
    notes: list[str] = []
    for row in rows:
        if row.verdict == "INCONSISTENT":
            minimal.append((row.component_id,))
    examined = 0
    truncated = False
    for width in range(2, len(ids) + 1):
        for combo in itertools.combinations(ids, width):
            examined += 1
            if examined > subset_cap:
                truncated = True
                break
            if any(set(found) <= set(combo) for found in minimal):
                continue
            pooled = frozenset().union(*(contributions[cid] for cid in combo))
            if not check_consistency(pooled, atom_cap).consistent:
                minimal.append(combo)
        if truncated:
            break
    if truncated:
        notes.append(f"subset search truncated after {subset_cap} candidates")
    notes.append("per-component sets are the pooled axiom and theorem images")

    return KnowledgeConsistencyReport(
        tuple(rows),
        global_verdict.verdict,
        global_verdict.witness_kind,
        flag,
        tuple(minimal),
        tuple(notes),
    )
