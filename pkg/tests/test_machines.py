import random

import pytest
from hypothesis import given, settings, strategies as st

from vty.errors import DecodeError, EnumerationCapExceededError
from vty.machines import (
    BruteResult,
    DecJz,
    Halt,
    Inc,
    RegisterMachine,
    WorldBounds,
    count_machines,
    decode_instruction,
    decode_machine,
    decode_program,
    encode_instruction,
    encode_machine,
    encode_program,
    enumerate_machines,
    fixed_output_brute,
    fixed_output_recognize,
    format_machine,
    machine_from_program,
    pair,
    parse_machine,
    random_machine,
    run_machine,
    universal_run,
    universal_run_stats,
    universality_evidence,
    unpair,
)

from oracle_tools import mini_run


def machine(*program):
    return machine_from_program(program)


class TestRunner:
    def test_empty_program_halts_at_once(self):
        trace = run_machine(machine(), 7, 10)
        assert (trace.outcome, trace.output, trace.steps) == ("HALT", 7, 0)

    def test_single_increment(self):
        trace = run_machine(machine(Inc(0, 1)), 0, 10)
        assert (trace.outcome, trace.output, trace.steps) == ("HALT", 1, 1)

    def test_halting_consumes_no_fuel(self):
        trace = run_machine(machine(Inc(0, 1)), 5, 1)
        assert trace.outcome == "HALT"
        assert trace.steps == 1
        assert trace.output == 6

    def test_zero_fuel_still_recognizes_a_halted_machine(self):
        assert run_machine(machine(), 3, 0).outcome == "HALT"
        trace = run_machine(machine(Inc(0, 0)), 3, 0)
        assert (trace.outcome, trace.output, trace.steps) == ("OUT_OF_FUEL", None, 0)

    def test_self_loop_runs_out_of_fuel(self):
        trace = run_machine(machine(DecJz(0, 0, 0)), 0, 25)
        assert (trace.outcome, trace.steps) == ("OUT_OF_FUEL", 25)

    def test_decjz_branches_both_ways(self):
        move = machine(DecJz(0, 2, 1), Inc(1, 0))
        trace = run_machine(move, 4, 100, record_log=True)
        assert trace.outcome == "HALT"
        assert trace.output == 0
        assert trace.steps == 9
        assert len(trace.log) == 9
        assert trace.log[0] == (0, (4, 0))
        assert trace.log[-1] == (0, (0, 4))

    def test_negative_arguments_are_rejected(self):
        with pytest.raises(ValueError):
            run_machine(machine(), -1, 5)
        with pytest.raises(ValueError):
            run_machine(machine(), 1, -5)

    def test_determinism(self):
        rng = random.Random(99)
        for _ in range(20):
            m = random_machine(rng)
            value = rng.randint(0, 30)
            assert run_machine(m, value, 60) == run_machine(m, value, 60)

    @given(st.integers(0, 2 ** 30))
    @settings(max_examples=60, deadline=None)
    def test_more_fuel_never_changes_a_halting_run(self, seed):
        rng = random.Random(seed)
        m = random_machine(rng)
        value = rng.randint(0, 20)
        fuel = rng.randint(0, 40)
        first = run_machine(m, value, fuel)
        second = run_machine(m, value, fuel + rng.randint(1, 40))
        if first.outcome == "HALT":
            assert (second.outcome, second.output, second.steps) == (
                "HALT", first.output, first.steps
            )
        else:
            assert second.steps >= first.steps


class TestMachineValidation:
    def test_register_bound(self):
        with pytest.raises(ValueError):
            RegisterMachine(1, (Inc(1, 0),))

    def test_jump_bound(self):
        with pytest.raises(ValueError):
            RegisterMachine(1, (Inc(0, 2),))
        RegisterMachine(1, (Inc(0, 1),))  # one past the end is the halt address

    def test_at_least_one_register(self):
        with pytest.raises(ValueError):
            RegisterMachine(0, ())

    def test_register_count_is_inferred(self):
        assert machine(Inc(2, 0)).registers == 3
        assert machine().registers == 1


class TestTextFormat:
    def test_round_trip(self):
        rng = random.Random(20260817)
        for _ in range(40):
            m = random_machine(rng)
            text = format_machine(m)
            parsed = parse_machine(text)
            assert parsed.program == m.program

    def test_comments_and_blank_lines_are_skipped(self):
        text = "# header\n\nINC 0 1   # bump\n\nHALT\n"
        assert parse_machine(text).program == (Inc(0, 1), Halt())

    def test_bad_line_is_located(self):
        with pytest.raises(ValueError) as err:
            parse_machine("INC 0 1\nWAT 3\n")
        assert "line 2" in str(err.value)
        with pytest.raises(ValueError):
            parse_machine("INC 0\n")
        with pytest.raises(ValueError):
            parse_machine("HALT 0\n")

    def test_parsed_jumps_are_validated(self):
        with pytest.raises(ValueError):
            parse_machine("INC 0 9\n")


class TestAdder:
    def test_adds_the_two_halves_of_a_paired_input(self, data_dir):
        text = (data_dir / "adder.rm").read_text()
        adder = parse_machine(text)
        assert adder.registers == 4
        for x in range(5):
            for y in range(5):
                trace = run_machine(adder, pair(x, y), 10_000)
                assert trace.outcome == "HALT"
                assert trace.output == x + y

    def test_agrees_with_the_reference_interpreter(self, data_dir):
        text = (data_dir / "adder.rm").read_text()
        adder = parse_machine(text)
        rng = random.Random(5)
        for _ in range(25):
            value = rng.randint(0, 120)
            fuel = rng.choice((10, 100, 10_000))
            trace = run_machine(adder, value, fuel)
            assert mini_run(text, value, fuel) == (trace.outcome, trace.output, trace.steps)


class TestPairing:
    def test_diagonal_order(self):
        table = [((0, 0), 0), ((1, 0), 1), ((0, 1), 2), ((2, 0), 3), ((1, 1), 4), ((0, 2), 5)]
        for (x, y), code in table:
            assert pair(x, y) == code
            assert unpair(code) == (x, y)

    @given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
    @settings(max_examples=80)
    def test_round_trip(self, x, y):
        assert unpair(pair(x, y)) == (x, y)

    @given(st.integers(0, 10 ** 9))
    @settings(max_examples=80)
    def test_every_code_is_some_pair(self, z):
        x, y = unpair(z)
        assert x >= 0 and y >= 0
        assert pair(x, y) == z

    def test_bijective_on_a_box(self):
        codes = {pair(x, y) for x in range(50) for y in range(50)}
        assert len(codes) == 2500

    def test_negative_arguments_are_rejected(self):
        with pytest.raises(ValueError):
            pair(-1, 0)
        with pytest.raises(ValueError):
            unpair(-1)


class TestEncoding:
    def instructions(self):
        return [
            Inc(0, 0), Inc(3, 7), DecJz(0, 0, 0), DecJz(2, 5, 1), Halt(),
        ]

    def test_instruction_round_trip(self):
        for instr in self.instructions():
            assert decode_instruction(encode_instruction(instr)) == instr

    def test_program_round_trip(self):
        rng = random.Random(20260817)
        for _ in range(40):
            program = random_machine(rng).program
            assert decode_program(encode_program(program)) == program

    def test_empty_program_is_code_zero(self):
        assert encode_program(()) == 0
        assert decode_program(0) == ()

    def test_machine_round_trip_infers_registers(self):
        wide = RegisterMachine(3, (Inc(0, 1),))
        decoded = decode_machine(encode_machine(wide))
        assert decoded.registers == 1
        assert decoded.program == wide.program
        narrow = machine(DecJz(2, 0, 1))
        assert decode_machine(encode_machine(narrow)) == narrow

    def test_halt_payload_must_be_zero(self):
        with pytest.raises(DecodeError) as err:
            decode_instruction(pair(2, 1))
        assert "HALT carries payload 1" in str(err.value)

    def test_unknown_opcode(self):
        with pytest.raises(DecodeError) as err:
            decode_instruction(pair(3, 0))
        assert "opcode 3" in str(err.value)

    def test_negative_program_code(self):
        with pytest.raises(DecodeError):
            decode_program(-1)

    def test_invalid_jump_surfaces_as_decode_error(self):
        code = pair(encode_instruction(Inc(0, 5)), 0) + 1
        with pytest.raises(DecodeError):
            decode_machine(code)


class TestUniversalInterpreter:
    def test_agrees_with_the_direct_runner(self):
        rng = random.Random(20260817)
        for _ in range(60):
            m = random_machine(rng)
            code = encode_machine(m)
            value = rng.randint(0, 25)
            fuel = rng.randint(0, 80)
            direct = run_machine(m, value, fuel)
            simulated = universal_run(code, value, fuel)
            assert (direct.outcome, direct.output, direct.steps) == (
                simulated.outcome, simulated.output, simulated.steps
            )

    def test_micro_operations_are_counted(self):
        code = encode_machine(machine(Inc(0, 1)))
        trace, micro = universal_run_stats(code, 0, 10)
        assert trace.outcome == "HALT"
        assert micro > 0

    def test_bad_codes_are_rejected(self):
        bad = pair(encode_instruction(Inc(0, 5)), 0) + 1
        with pytest.raises(DecodeError):
            universal_run(bad, 0, 10)
        with pytest.raises(DecodeError):
            universal_run(-3, 0, 10)

    def test_evidence_summary_is_reproducible(self):
        evidence = universality_evidence(samples=100, seed=20260817)
        assert evidence == {
            "samples": 100,
            "seed": 20260817,
            "agreements": 100,
            "all_agree": True,
            "fuel": 200,
            "mean_overhead_factor": 3.739,
        }


class TestWorldEnumeration:
    def test_bounds_are_validated(self):
        with pytest.raises(ValueError):
            WorldBounds(-1, 1, (0,), 5)
        with pytest.raises(ValueError):
            WorldBounds(1, 0, (0,), 5)
        with pytest.raises(ValueError):
            WorldBounds(1, 1, (), 5)
        with pytest.raises(ValueError):
            WorldBounds(1, 1, (0,), 0)

    @pytest.mark.parametrize("instructions,registers", [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2)])
    def test_count_matches_enumeration(self, instructions, registers):
        machines = list(enumerate_machines(instructions, registers))
        assert len(machines) == count_machines(instructions, registers)
        assert len(set(machines)) == len(machines)

    def test_known_counts(self):
        assert count_machines(1, 1) == 8
        assert count_machines(2, 2) == 639
        assert count_machines(3, 1) == 9438


class TestFixedOutputBrute:
    def tiny_world(self):
        return WorldBounds(1, 1, (0,), 4)

    def test_tiny_world_has_one_way_to_make_one(self):
        result = fixed_output_brute(self.tiny_world(), 1)
        assert result.runs == 8
        assert len(result.hits) == 1
        hit = result.hits[0]
        assert hit.machine.program == (Inc(0, 1),)
        assert hit.input_value == 0
        assert hit.steps == 1

    def test_target_zero_includes_the_empty_machine(self):
        result = fixed_output_brute(self.tiny_world(), 0)
        assert machine() in {hit.machine for hit in result.hits}

    def test_enumeration_cap(self):
        with pytest.raises(EnumerationCapExceededError):
            fixed_output_brute(WorldBounds(3, 2, (0, 1), 5), 1, enumeration_cap=100)

    def test_hit_pairs_view(self):
        result = fixed_output_brute(self.tiny_world(), 1)
        assert result.hit_pairs() == frozenset({(machine(Inc(0, 1)), 0)})


class TestFixedOutputRecognize:
    def test_yes_certificate_replays(self):
        m = machine(Inc(0, 1))
        recognition = fixed_output_recognize(m, 1, [2, 4, 8])
        assert recognition.verdict == "YES"
        assert recognition.found
        trace = run_machine(m, recognition.input_value, recognition.fuel)
        assert trace.outcome == "HALT"
        assert trace.output == 1

    def test_divergent_machine_stays_unknown(self):
        recognition = fixed_output_recognize(machine(DecJz(0, 0, 0)), 1, [1, 2, 4, 8])
        assert recognition.verdict == "UNKNOWN"
        assert not recognition.found
        assert recognition.input_value is None
        assert recognition.stages == 4
        assert recognition.probes == 1 + 2 + 3 + 4

    def test_slow_halting_needs_a_later_stage(self):
        # Count down from 6, then halt with 0: needs fuel 7 and input 6.
        m = machine(DecJz(0, 1, 0))
        recognition = fixed_output_recognize(m, 0, [1, 2, 30])
        assert recognition.verdict == "YES"
        assert recognition.input_value == 0
        assert recognition.fuel == 1
        found_late = fixed_output_recognize(machine(DecJz(0, 1, 0), Inc(1, 0)), 0, [1, 2, 3])
        assert found_late.stages <= 3

    def test_max_input_clips_the_diagonal(self):
        recognition = fixed_output_recognize(
            machine(DecJz(0, 0, 0)), 1, [1, 2, 3, 4], max_input=1
        )
        assert recognition.probes == 1 + 2 + 2 + 2

    def test_schedule_validation(self):
        m = machine()
        with pytest.raises(ValueError):
            fixed_output_recognize(m, 0, [])
        with pytest.raises(ValueError):
            fixed_output_recognize(m, 0, [0, 1])
        with pytest.raises(ValueError):
            fixed_output_recognize(m, 0, [3, 3])
        with pytest.raises(ValueError):
            fixed_output_recognize(m, 0, [4, 2])

    def test_unknown_is_never_claimed_as_no(self):
        # Halts with the target only beyond every scheduled fuel value.
        m = machine(DecJz(0, 1, 0))
        short = fixed_output_recognize(m, 0, [1], max_input=0)
        assert short.verdict == "YES"  # input 0 halts in one step
        counting = machine(Inc(1, 1), DecJz(1, 2, 1))
        verdicts = {
            fixed_output_recognize(counting, 9, [s + 1 for s in range(n)]).verdict
            for n in (1, 3, 6)
        }
        assert verdicts <= {"YES", "UNKNOWN"}

    @given(st.integers(0, 2 ** 30))
    @settings(max_examples=40, deadline=None)
    def test_extending_the_schedule_preserves_yes(self, seed):
        rng = random.Random(seed)
        m = random_machine(rng, max_instructions=3, max_registers=1)
        target = rng.randint(0, 3)
        schedule = [2, 5, 9]
        first = fixed_output_recognize(m, target, schedule, max_input=2)
        extended = fixed_output_recognize(m, target, schedule + [20, 50], max_input=2)
        if first.found:
            assert extended.found
            assert extended.input_value == first.input_value
            assert extended.fuel == first.fuel
