"""Register machines: interpreter, integer codes, and Fixed Output search.

Machine model. A program is a list of instructions addressed 0 to
len-1; the address equal to the program length is the halt address.

    INC r k        add one to register r, jump to k
    DECJZ r kz kp  if register r is zero jump to kz, else subtract one
                   and jump to kp
    HALT           stop

Input goes into register 0, every other register starts at zero, and
the output is register 0 at the halt. Running costs one fuel unit per
executed instruction; reaching the halt address or a HALT instruction
costs nothing.

Text format, bit for bit, one instruction per line with single spaces
and 0-based decimal addresses::

    INC 0 1
    DECJZ 1 4 2
    HALT

Integer codes. The pairing function is the Cantor pairing
pair(x, y) = (x + y) (x + y + 1) / 2 + y, with unpair its inverse.
Instructions code as pair(opcode, payload) with opcodes INC=0,
DECJZ=1, HALT=2 and payloads

    INC r k        pair(r, k)
    DECJZ r kz kp  pair(r, pair(kz, kp))
    HALT           0

A program codes as a pairing-built list: the empty program is 0 and
prepending an instruction with code h to a program with code t gives
pair(h, t) + 1. Decoding rejects HALT payloads other than zero and any
program whose jump targets fall outside 0..len; the register count of
a decoded machine is one more than the largest register index used, or
one for the empty program.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DecodeError, EnumerationCapExceededError

DEFAULT_ENUMERATION_CAP = 1_000_000

HALTED = "HALT"
OUT_OF_FUEL = "OUT_OF_FUEL"


@dataclass(frozen=True)
class Inc:
    register: int
    target: int


@dataclass(frozen=True)
class DecJz:
    register: int
    target_if_zero: int
    target_if_positive: int


@dataclass(frozen=True)
class Halt:
    pass


Instruction = Inc | DecJz | Halt


@dataclass(frozen=True)
class RegisterMachine:
    registers: int
    program: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        if self.registers < 1:
            raise ValueError("a machine needs at least register 0")
        halt_address = len(self.program)
        for address, instr in enumerate(self.program):
            if isinstance(instr, Inc):
                used, targets = instr.register, (instr.target,)
            elif isinstance(instr, DecJz):
                used = instr.register
                targets = (instr.target_if_zero, instr.target_if_positive)
            else:
                continue
            if not 0 <= used < self.registers:
                raise ValueError(f"instruction {address} uses register {used}")
            for target in targets:
                if not 0 <= target <= halt_address:
                    raise ValueError(f"instruction {address} jumps to {target}")


@dataclass(frozen=True)
class Trace:
    outcome: str  # HALT or OUT_OF_FUEL
    output: int | None
    steps: int
    log: tuple[tuple[int, tuple[int, ...]], ...] | None = None


def run_machine(
    machine: RegisterMachine, input_value: int, fuel: int, *, record_log: bool = False
) -> Trace:
    """Small-step run. Deterministic: equal arguments give equal traces."""
    if input_value < 0:
        raise ValueError("input must be a nonnegative integer")
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    registers = [0] * machine.registers
    registers[0] = input_value
    program = machine.program
    halt_address = len(program)
    pc = 0
    steps = 0
    log: list[tuple[int, tuple[int, ...]]] | None = [] if record_log else None
    while True:
        if pc == halt_address or isinstance(program[pc], Halt):
            return Trace(HALTED, registers[0], steps, tuple(log) if log is not None else None)
        if steps == fuel:
            return Trace(OUT_OF_FUEL, None, steps, tuple(log) if log is not None else None)
        instr = program[pc]
        if log is not None:
            log.append((pc, tuple(registers)))
        steps += 1
        if isinstance(instr, Inc):
            registers[instr.register] += 1
            pc = instr.target
        else:
            if registers[instr.register] == 0:
                pc = instr.target_if_zero
            else:
                registers[instr.register] -= 1
                pc = instr.target_if_positive


# --- text format ------------------------------------------------------------


def format_machine(machine: RegisterMachine) -> str:
    lines = []
    for instr in machine.program:
        if isinstance(instr, Inc):
            lines.append(f"INC {instr.register} {instr.target}")
        elif isinstance(instr, DecJz):
            lines.append(
                f"DECJZ {instr.register} {instr.target_if_zero} {instr.target_if_positive}"
            )
        else:
            lines.append("HALT")
    return "\n".join(lines)


def parse_machine(text: str) -> RegisterMachine:
    """Parse the text format. Blank lines and # comments are skipped."""
    program: list[Instruction] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "INC" and len(parts) == 3:
                program.append(Inc(int(parts[1]), int(parts[2])))
            elif parts[0] == "DECJZ" and len(parts) == 4:
                program.append(DecJz(int(parts[1]), int(parts[2]), int(parts[3])))
            elif parts[0] == "HALT" and len(parts) == 1:
                program.append(Halt())
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {number}: bad instruction {line!r}") from None
    return machine_from_program(tuple(program))


def machine_from_program(program: Sequence[Instruction]) -> RegisterMachine:
    highest = -1
    for instr in program:
        if isinstance(instr, (Inc, DecJz)):
            highest = max(highest, instr.register)
    return RegisterMachine(max(highest + 1, 1), tuple(program))


# --- integer codes ----------------------------------------------------------


def pair(x: int, y: int) -> int:
    if x < 0 or y < 0:
        raise ValueError("pairing is defined on nonnegative integers")
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    if z < 0:
        raise ValueError("pairing is defined on nonnegative integers")
    s = (math.isqrt(8 * z + 1) - 1) // 2
    y = z - s * (s + 1) // 2
    return s - y, y


OPCODE_INC = 0
OPCODE_DECJZ = 1
OPCODE_HALT = 2


def encode_instruction(instr: Instruction) -> int:
    if isinstance(instr, Inc):
        return pair(OPCODE_INC, pair(instr.register, instr.target))
    if isinstance(instr, DecJz):
        return pair(
            OPCODE_DECJZ,
            pair(instr.register, pair(instr.target_if_zero, instr.target_if_positive)),
        )
    return pair(OPCODE_HALT, 0)


def decode_instruction(code: int) -> Instruction:
    opcode, payload = unpair(code)
    if opcode == OPCODE_INC:
        register, target = unpair(payload)
        return Inc(register, target)
    if opcode == OPCODE_DECJZ:
        register, rest = unpair(payload)
        target_if_zero, target_if_positive = unpair(rest)
        return DecJz(register, target_if_zero, target_if_positive)
    if opcode == OPCODE_HALT:
        if payload != 0:
            raise DecodeError(f"HALT carries payload {payload}, expected 0")
        return Halt()
    raise DecodeError(f"opcode {opcode} is outside the instruction set")


def encode_program(program: Sequence[Instruction]) -> int:
    code = 0
    for instr in reversed(program):
        code = pair(encode_instruction(instr), code) + 1
    return code


def decode_program(code: int) -> tuple[Instruction, ...]:
    if code < 0:
        raise DecodeError("program codes are nonnegative")
    program: list[Instruction] = []
    while code:
        head, code = unpair(code - 1)
        program.append(decode_instruction(head))
    return tuple(program)


def encode_machine(machine: RegisterMachine) -> int:
    """Program code alone; the register count is recovered on decode."""
    return encode_program(machine.program)


def decode_machine(code: int) -> RegisterMachine:
    program = decode_program(code)
    try:
        return machine_from_program(program)
    except ValueError as exc:
        raise DecodeError(str(exc)) from None


# --- universal interpretation ----------------------------------------------


def universal_run(program_code: int, input_value: int, fuel: int) -> Trace:
    trace, _ = universal_run_stats(program_code, input_value, fuel)
    return trace


def universal_run_stats(program_code: int, input_value: int, fuel: int) -> tuple[Trace, int]:
    """Interpret a program code directly, fetching instructions from the code.

    The simulated step count matches ``run_machine`` on the decoded
    machine at the same fuel; the second result counts the bookkeeping
    micro operations (list-cell visits and unpairings) the interpreter
    spent, from which an overhead factor can be measured.
    """
    if input_value < 0:
        raise ValueError("input must be a nonnegative integer")
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    micro = 0

    # Loading pass: measure the program and size the register file.
    length = 0
    highest = -1
    rest = program_code
    if rest < 0:
        raise DecodeError("program codes are nonnegative")
    while rest:
        head, rest = unpair(rest - 1)
        micro += 1
        instr = decode_instruction(head)
        micro += 2
        if isinstance(instr, (Inc, DecJz)):
            highest = max(highest, instr.register)
        length += 1
    try:
        RegisterMachine(max(highest + 1, 1), decode_program(program_code))
    except ValueError as exc:
        raise DecodeError(str(exc)) from None

    registers = [0] * max(highest + 1, 1)
    registers[0] = input_value
    pc = 0
    steps = 0
    while True:
        if pc == length:
            return Trace(HALTED, registers[0], steps), micro
        # Fetch instruction pc by walking the encoded list.
        rest = program_code
        for _ in range(pc):
            _, rest = unpair(rest - 1)
            micro += 1
        head, _ = unpair(rest - 1)
        micro += 1
        instr = decode_instruction(head)
        micro += 2
        if isinstance(instr, Halt):
            return Trace(HALTED, registers[0], steps), micro
        if steps == fuel:
            return Trace(OUT_OF_FUEL, None, steps), micro
        steps += 1
        if isinstance(instr, Inc):
            registers[instr.register] += 1
            pc = instr.target
        else:
            if registers[instr.register] == 0:
                pc = instr.target_if_zero
            else:
                registers[instr.register] -= 1
                pc = instr.target_if_positive


def random_machine(
    rng: random.Random, max_instructions: int = 6, max_registers: int = 3
) -> RegisterMachine:
    length = rng.randint(0, max_instructions)
    program: list[Instruction] = []
    for _ in range(length):
        kind = rng.randrange(3)
        if kind == 0:
            program.append(Inc(rng.randrange(max_registers), rng.randint(0, length)))
        elif kind == 1:
            program.append(DecJz(
                rng.randrange(max_registers), rng.randint(0, length), rng.randint(0, length)
            ))
        else:
            program.append(Halt())
    return RegisterMachine(max_registers, tuple(program))


def universality_evidence(
    samples: int = 100,
    seed: int = 20260817,
    *,
    max_instructions: int = 6,
    max_registers: int = 3,
    max_input: int = 20,
    fuel: int = 200,
) -> dict:
    """Differential suite: the code interpreter against the direct one.

    Agreement is exact on outcome, output, and step count. The mean
    overhead factor (micro operations per simulated step) is measured,
    not assumed.
    """
    rng = random.Random(seed)
    agreements = 0
    micro_total = 0
    steps_total = 0
    for _ in range(samples):
        machine = random_machine(rng, max_instructions, max_registers)
        code = encode_machine(machine)
        input_value = rng.randint(0, max_input)
        direct = run_machine(machine, input_value, fuel)
        simulated, micro = universal_run_stats(code, input_value, fuel)
        if (direct.outcome, direct.output, direct.steps) == (
            simulated.outcome, simulated.output, simulated.steps
        ):
            agreements += 1
        micro_total += micro
        steps_total += simulated.steps
    factor = round(micro_total / steps_total, 3) if steps_total else None
    return {
        "samples": samples,
        "seed": seed,
        "agreements": agreements,
        "all_agree": agreements == samples,
        "fuel": fuel,
        "mean_overhead_factor": factor,
    }


# --- Fixed Output search -----------------------------------------------------


@dataclass(frozen=True)
class WorldBounds:
    """A finite world of machines and inputs for exhaustive search."""

    max_instructions: int
    max_registers: int
    inputs: tuple[int, ...]
    fuel: int

    def __post_init__(self) -> None:
        if self.max_instructions < 0 or self.max_registers < 1 or self.fuel < 1:
            raise ValueError("bounds must be positive")
        if not self.inputs:
            raise ValueError("the world needs at least one input")


def _instruction_options(registers: int, length: int) -> list[Instruction]:
    options: list[Instruction] = []
    for register in range(registers):
        for target in range(length + 1):
            options.append(Inc(register, target))
    for register in range(registers):
        for target_if_zero in range(length + 1):
            for target_if_positive in range(length + 1):
                options.append(DecJz(register, target_if_zero, target_if_positive))
    options.append(Halt())
    return options


def count_machines(max_instructions: int, max_registers: int) -> int:
    total = 0
    for length in range(max_instructions + 1):
        per_slot = (
            max_registers * (length + 1)
            + max_registers * (length + 1) ** 2
            + 1
        )
        total += per_slot**length if length else 1
    return total


def enumerate_machines(max_instructions: int, max_registers: int) -> Iterator[RegisterMachine]:
    """Canonical order: by length, then lexicographic in the option list."""
    for length in range(max_instructions + 1):
        options = _instruction_options(max_registers, length)
        for combo in itertools.product(options, repeat=length):
            yield RegisterMachine(max_registers, combo)


@dataclass(frozen=True)
class OutputHit:
    machine: RegisterMachine
    input_value: int
    steps: int


@dataclass(frozen=True)
class BruteResult:
    bounds: WorldBounds
    target: int
    runs: int
    hits: tuple[OutputHit, ...]

    def hit_pairs(self) -> frozenset[tuple[RegisterMachine, int]]:
        return frozenset((hit.machine, hit.input_value) for hit in self.hits)


def fixed_output_brute(
    bounds: WorldBounds, target: int, *, enumeration_cap: int = DEFAULT_ENUMERATION_CAP
) -> BruteResult:
    """Every (machine, input) in the world that halts with the target output.

    The run count is computed up front; a world larger than the cap is
    refused rather than sampled.
    """
    machine_count = count_machines(bounds.max_instructions, bounds.max_registers)
    runs = machine_count * len(bounds.inputs)
    if runs > enumeration_cap:
        raise EnumerationCapExceededError(runs, enumeration_cap)
    inputs = tuple(sorted(bounds.inputs))
    hits: list[OutputHit] = []
    for machine in enumerate_machines(bounds.max_instructions, bounds.max_registers):
        for input_value in inputs:
            trace = run_machine(machine, input_value, bounds.fuel)
            if trace.outcome == HALTED and trace.output == target:
                hits.append(OutputHit(machine, input_value, trace.steps))
    return BruteResult(bounds, target, runs, tuple(hits))


@dataclass(frozen=True)
class Recognition:
    target: int
    found: bool
    input_value: int | None = None
    fuel: int | None = None
    stages: int = 0
    probes: int = 0

    @property
    def verdict(self) -> str:
        return "YES" if self.found else "UNKNOWN"


def fixed_output_recognize(
    machine: RegisterMachine,
    target: int,
    fuel_schedule: Sequence[int],
    *,
    max_input: int | None = None,
) -> Recognition:
    """Dovetail inputs against the fuel schedule; YES answers replay.

    Stage s runs inputs 0..s (clipped to max_input) at fuel schedule[s].
    The first hit in that fixed diagonal order is returned, so the
    certificate is reproducible; exhausting the schedule means unknown,
    never no.
    """
    if not fuel_schedule:
        raise ValueError("the fuel schedule must not be empty")
    if any(f < 1 for f in fuel_schedule):
        raise ValueError("fuel values must be positive")
    if any(b >= a for a, b in zip(fuel_schedule[1:], fuel_schedule)):
        raise ValueError("the fuel schedule must be strictly increasing")
    probes = 0
    for stage, fuel in enumerate(fuel_schedule):
        top = stage if max_input is None else min(stage, max_input)
        for input_value in range(top + 1):
            probes += 1
            trace = run_machine(machine, input_value, fuel)
            if trace.outcome == HALTED and trace.output == target:
                return Recognition(target, True, input_value, fuel, stage + 1, probes)
    return Recognition(target, False, None, None, len(fuel_schedule), probes)
