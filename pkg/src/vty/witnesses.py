"""Executable witnesses backing evidence entries in the class registry.

Each witness is a named, deterministic check over the machine modules.
Evidence of kind EXEC_POSITIVE or EXEC_EXHAUSTIVE must reference one of
these ids; validation can run the witness and require it to pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import automata, machines


@dataclass(frozen=True)
class WitnessOutcome:
    witness_id: str
    passed: bool
    details: dict


@dataclass(frozen=True)
class ExecutableWitness:
    witness_id: str
    description: str
    runner: Callable[[], WitnessOutcome]

    def run(self) -> WitnessOutcome:
        return self.runner()


def _rm_universal_differential() -> WitnessOutcome:
    report = machines.universality_evidence()
    return WitnessOutcome("rm_universal_differential", report["all_agree"], report)


def _rm_self_loop_diverges() -> WitnessOutcome:
    loop = machines.RegisterMachine(1, (machines.Inc(0, 0),))
    fuels = (10, 100, 1000)
    outcomes = {
        fuel: machines.run_machine(loop, 0, fuel).outcome for fuel in fuels
    }
    passed = all(outcome == machines.OUT_OF_FUEL for outcome in outcomes.values())
    return WitnessOutcome(
        "rm_self_loop_diverges", passed,
        {"machine": machines.format_machine(loop), "outcomes": {str(k): v for k, v in outcomes.items()}},
    )


def _dfa_totality_exhaustive() -> WitnessOutcome:
    report = automata.totality_evidence()
    passed = report["all_terminated"] and report["steps_equal_word_length"]
    return WitnessOutcome("dfa_totality_exhaustive", passed, report)


WITNESSES: dict[str, ExecutableWitness] = {
    witness.witness_id: witness
    for witness in (
        ExecutableWitness(
            "rm_universal_differential",
            "code-driven interpretation agrees with direct runs on randomized programs",
            _rm_universal_differential,
        ),
        ExecutableWitness(
            "rm_self_loop_diverges",
            "a one-instruction self loop runs out of fuel at every tried bound",
            _rm_self_loop_diverges,
        ),
        ExecutableWitness(
            "dfa_totality_exhaustive",
            "every small automaton consumes exactly one step per symbol on every short word",
            _dfa_totality_exhaustive,
        ),
    )
}


def run_witness(witness_id: str) -> WitnessOutcome:
    if witness_id not in WITNESSES:
        raise KeyError(f"unknown witness {witness_id!r}")
    return WITNESSES[witness_id].run()
