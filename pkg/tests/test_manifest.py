import pytest

from vty.errors import ManifestError, UnresolvedReferenceError
from vty.formulas import parse_formula
from vty.manifest import (
    Bounds,
    load_manifest,
    parse_manifest,
    registry_manifest,
    save_manifest,
)
from vty.seed import seed_axiom_declarations, seed_registry, seed_theorems
from vty.varieties import check_prevariety, check_variety

DATA_FILES = (
    "bijective_modes.vty",
    "inconsistent_kb.vty",
    "seed_registry.vty",
    "shared_core.vty",
    "shared_core_nowitness.vty",
)

MINIMAL = """\
signature p q

rule mp {
  premise a
  premise (-> a b)
  conclude b
}

calculus L {
  depth 2
  axiom (-> p q)
  axiom p
  use mp
}

map ident identity

component C {
  calculus L
  axiom-map ident
  theorem-map ident
  theorem q
}

prevariety PV {
  component C
  auto
}
"""


def failing(text, match):
    with pytest.raises(ManifestError) as err:
        parse_manifest(text)
    assert match in str(err.value)
    return err.value


class TestCanonicalText:
    @pytest.mark.parametrize("name", DATA_FILES)
    def test_shipped_files_are_canonical(self, data_dir, name):
        text = (data_dir / name).read_text()
        manifest = parse_manifest(text, source=name)
        assert manifest.to_text() == text

    @pytest.mark.parametrize("name", DATA_FILES)
    def test_reparsing_canonical_text_is_identity(self, data_dir, name):
        manifest = load_manifest(data_dir / name)
        again = parse_manifest(manifest.to_text(), source=manifest.source)
        assert again.to_text() == manifest.to_text()

    def test_noncanonical_input_is_normalized(self):
        scrambled = MINIMAL.replace("signature p q", "signature q p")
        manifest = parse_manifest(scrambled)
        assert "signature p q" in manifest.to_text()
        assert manifest.to_text() == parse_manifest(manifest.to_text()).to_text()

    def test_default_bounds_are_spelled_out(self):
        manifest = parse_manifest(MINIMAL)
        assert manifest.bounds == Bounds()
        assert "bounds depth=3 atoms=20 enum=1000000 size=10000" in manifest.to_text()

    def test_save_and_load_round_trip(self, tmp_path):
        manifest = parse_manifest(MINIMAL)
        target = tmp_path / "world.vty"
        save_manifest(manifest, target)
        assert load_manifest(target).to_text() == manifest.to_text()

    def test_strings_are_escaped(self):
        manifest = parse_manifest('axiom-decl AX "quote \\" and slash \\\\"\n')
        assert manifest.axiom_decls[0].statement == 'quote " and slash \\'
        text = manifest.to_text()
        assert parse_manifest(text).axiom_decls[0].statement == 'quote " and slash \\'


class TestParseErrors:
    def test_unknown_directive_names_itself(self):
        err = failing("widget w\n", "unknown directive 'widget'")
        assert err.line == 1

    def test_location_format(self):
        with pytest.raises(ManifestError) as err:
            parse_manifest("\nwidget w\n", source="world.vty")
        assert str(err.value).startswith("world.vty:2:1: ")

    def test_lex_error_is_located(self):
        err = failing("signature p!\n", "")
        assert err.line == 1
        assert err.col > 0

    def test_signature_needs_atoms(self):
        failing("signature\n", "signature needs at least one atom")
        failing("signature P\n", "bad atom name 'P'")
        failing("signature p\nsignature q\n", "signature given twice")

    def test_bounds_errors(self):
        failing("bounds depth\n", "bounds entries look like depth=3")
        failing("bounds width=3\n", "unknown bound 'width'")
        failing("bounds depth=3 depth=4\n", "bound 'depth' given twice")
        failing("bounds depth=x\n", "bound 'depth' needs an integer")
        failing("bounds depth=1\nbounds depth=2\n", "bounds given twice")

    def test_unclosed_block(self):
        err = failing("rule mp {\n  premise a\n", "unclosed rule block")
        assert err.line == 1

    def test_nested_braces(self):
        failing("rule mp {\n  rule inner {\n", "braces may not nest")

    def test_trailing_tokens(self):
        failing("map m identity extra\n", "unexpected trailing 'extra'")

    def test_substitution_is_the_only_line_rule(self):
        failing("rule s frobnicate\n", "expected substitution, found 'frobnicate'")

    def test_only_identity_maps_fit_on_one_line(self):
        failing("map m renaming\n", "renaming and table maps need a block")


class TestValidation:
    def test_duplicate_ids(self):
        failing(MINIMAL + "\nmap ident identity\n", "duplicate map 'ident'")
        failing(
            MINIMAL.replace("map ident identity",
                            "map ident identity\n\nprevariety PV {\n  component C\n  auto\n}"),
            "duplicate prevariety 'PV'",
        )

    def test_unresolved_calculus(self):
        text = MINIMAL.replace("calculus L\n", "calculus GONE\n")
        with pytest.raises(UnresolvedReferenceError) as err:
            parse_manifest(text)
        assert "unknown calculus 'GONE'" in str(err.value)

    def test_unresolved_map(self):
        text = MINIMAL.replace("axiom-map ident\n", "axiom-map gone\n")
        with pytest.raises(UnresolvedReferenceError):
            parse_manifest(text)

    def test_unresolved_component(self):
        text = MINIMAL.replace("component C\n", "component GONE\n")
        with pytest.raises(UnresolvedReferenceError):
            parse_manifest(text)

    def test_unresolved_rule_use(self):
        text = MINIMAL.replace("use mp", "use contraction")
        with pytest.raises(UnresolvedReferenceError):
            parse_manifest(text)

    def test_auto_conflicts_with_explicit_union(self):
        text = MINIMAL.replace("  component C\n  auto\n", "  component C\n  auto\n  axiom p\n")
        failing(text, "says auto but also claims an explicit union")

    def test_witness_indices_must_increase(self):
        witness = (
            "\nwitness W {\n  prevariety PV\n  indices 1 1\n  calculus L\n"
            "  axiom-map ident\n  theorem-map ident\n}\n"
        )
        failing(MINIMAL + witness, "strictly increasing indices")

    def test_witness_indices_must_be_in_range(self):
        witness = (
            "\nwitness W {\n  prevariety PV\n  indices 2\n  calculus L\n"
            "  axiom-map ident\n  theorem-map ident\n}\n"
        )
        failing(MINIMAL + witness, "index out of range 1..1")

    def test_witness_needs_a_known_prevariety(self):
        witness = (
            "\nwitness W {\n  prevariety GONE\n  indices 1\n  calculus L\n"
            "  axiom-map ident\n  theorem-map ident\n}\n"
        )
        with pytest.raises(UnresolvedReferenceError):
            parse_manifest(MINIMAL + witness)

    def test_class_requires_declared_axioms(self):
        text = 'class X "X" {\n  status NOPE satisfied citation "book"\n}\n'
        with pytest.raises(UnresolvedReferenceError) as err:
            parse_manifest(text)
        assert "undeclared axiom 'NOPE'" in str(err.value)

    def test_class_evidence_witness_must_exist(self):
        text = (
            'axiom-decl AX "says"\n\n'
            'class X "X" {\n  status AX satisfied exec-positive nope 3\n}\n'
        )
        with pytest.raises(UnresolvedReferenceError) as err:
            parse_manifest(text)
        assert "unknown executable witness 'nope'" in str(err.value)

    def test_theorem_rec_dependencies_must_be_declared(self):
        text = (
            'axiom-decl AX "says"\n\n'
            'theorem-rec t {\n  statement "holds"\n  depends AX MISSING\n'
            '  source "notes"\n}\n'
        )
        with pytest.raises(UnresolvedReferenceError) as err:
            parse_manifest(text)
        assert "undeclared axiom 'MISSING'" in str(err.value)

    def test_bad_component_objects_fail_at_their_line(self):
        text = MINIMAL.replace("depth 2", "depth 2\n  axiom p\n  axiom p")
        manifest = parse_manifest(text)  # duplicate axiom lines collapse in a set
        assert manifest.calculus("L").axioms == frozenset({parse_formula("p"), parse_formula("(-> p q)")})


class TestResolution:
    def test_shared_core_resolves_and_checks(self, data_dir):
        manifest = load_manifest(data_dir / "shared_core.vty")
        pv = manifest.prevariety("SHARED")
        assert len(pv.components) == 2
        assert check_prevariety(pv).passed
        witnesses = manifest.prevariety_witnesses("SHARED")
        assert [w.witness_id for w in witnesses] == ["W12"]
        assert check_variety(pv, 2, witnesses).passed

    def test_missing_witness_file_fails_width_two(self, data_dir):
        manifest = load_manifest(data_dir / "shared_core_nowitness.vty")
        pv = manifest.prevariety()
        report = check_variety(pv, 2, manifest.prevariety_witnesses())
        assert not report.passed
        assert any(d.code == "MISSING_WITNESS" for d in report.diagnostics)

    def test_default_prevariety_requires_exactly_one(self, data_dir):
        manifest = load_manifest(data_dir / "shared_core.vty")
        assert manifest.default_prevariety_id() == "SHARED"
        registry_only = parse_manifest('axiom-decl AX "says"\n')
        with pytest.raises(ManifestError):
            registry_only.default_prevariety_id()

    def test_explicit_union_is_used_verbatim(self, data_dir):
        manifest = load_manifest(data_dir / "inconsistent_kb.vty")
        pv = manifest.prevariety("KB")
        assert pv.axioms == frozenset({parse_formula("p"), parse_formula("(not p)")})
        assert check_prevariety(pv).passed

    def test_calculus_depth_defaults_to_bounds(self):
        text = MINIMAL.replace("  depth 2\n", "")
        manifest = parse_manifest(text)
        assert manifest.calculus("L").closure_depth == manifest.bounds.depth

    def test_signature_atoms_feed_the_calculus(self):
        manifest = parse_manifest(MINIMAL)
        calc = manifest.calculus("L")
        assert {"p", "q"} <= set(calc.signature_atoms)


class TestSeedRegistryManifest:
    def test_packaged_file_matches_the_seed_objects(self, data_dir):
        generated = registry_manifest(
            seed_registry(), seed_theorems(), seed_axiom_declarations(),
        )
        packaged = (data_dir / "seed_registry.vty").read_text()
        assert generated.to_text() == packaged

    def test_registry_resolution_equals_seed_objects(self, data_dir):
        manifest = load_manifest(data_dir / "seed_registry.vty")
        profiles, theorems, declarations = manifest.registry()
        assert list(profiles) == list(seed_registry())
        assert list(theorems) == list(seed_theorems())
        assert dict(declarations) == dict(seed_axiom_declarations())
