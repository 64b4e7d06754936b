import pytest

import oracle
from conftest import EDGE
from refann.errors import CodeFragmentNotEnumerable
from refann.index import build_index
from refann.ingest import ChangeKind, CommitSnapshot, FileChange
from refann.model import CommitRef, ElementType, RevisionSide, TextRange

ET = ElementType

# hand-enumerated per corpus file
EXPECTED_COUNTS = {
    "Calculator.java": {ET.CLASS_DECLARATION: 1, ET.METHOD_DECLARATION: 3,
                        ET.METHOD_INVOCATION: 3, ET.VARIABLE_DECLARATION: 1,
                        ET.PARAMETER_DECLARATION: 3, ET.FIELD_DECLARATION: 0},
    "Customer.java": {ET.CLASS_DECLARATION: 1, ET.METHOD_DECLARATION: 2,
                      ET.FIELD_DECLARATION: 3, ET.PARAMETER_DECLARATION: 1,
                      ET.METHOD_INVOCATION: 0, ET.VARIABLE_DECLARATION: 0},
    "Shapes.java": {ET.CLASS_DECLARATION: 2, ET.METHOD_DECLARATION: 3,
                    ET.FIELD_DECLARATION: 2},
    "Loops.java": {ET.METHOD_DECLARATION: 2, ET.METHOD_INVOCATION: 3,
                   ET.VARIABLE_DECLARATION: 4, ET.PARAMETER_DECLARATION: 2},
    "Chained.java": {ET.METHOD_INVOCATION: 6, ET.FIELD_DECLARATION: 1},
    "Nested.java": {ET.CLASS_DECLARATION: 2, ET.METHOD_DECLARATION: 3,
                    ET.VARIABLE_DECLARATION: 1},
    "Params.java": {ET.PARAMETER_DECLARATION: 5, ET.METHOD_INVOCATION: 3,
                    ET.VARIABLE_DECLARATION: 2},
    "Statics.java": {ET.METHOD_DECLARATION: 3, ET.METHOD_INVOCATION: 1,
                     ET.VARIABLE_DECLARATION: 0, ET.FIELD_DECLARATION: 1},
    "Strings.java": {ET.FIELD_DECLARATION: 1, ET.PARAMETER_DECLARATION: 1,
                     ET.METHOD_INVOCATION: 0},
    "Events.java": {ET.FIELD_DECLARATION: 2, ET.METHOD_INVOCATION: 2,
                    ET.VARIABLE_DECLARATION: 1},
    "Generics.java": {ET.VARIABLE_DECLARATION: 2, ET.METHOD_INVOCATION: 1},
    "Ledger.java": {ET.METHOD_INVOCATION: 3, ET.VARIABLE_DECLARATION: 1,
                    ET.FIELD_DECLARATION: 2},
    "Inventory.java": {ET.FIELD_DECLARATION: 1, ET.METHOD_DECLARATION: 2},
    "Conditions.java": {ET.VARIABLE_DECLARATION: 1, ET.METHOD_INVOCATION: 0},
}


class TestEnumeration:
    @pytest.mark.parametrize("file,expected",
                             sorted(EXPECTED_COUNTS.items()))
    def test_hand_enumerated_counts(self, corpus_index, file, expected):
        for etype, count in expected.items():
            got = corpus_index.elements_of_type(etype, file)
            assert len(got) == count, f"{file} {etype.value}"

    def test_code_fragment_not_enumerable(self, corpus_index):
        with pytest.raises(CodeFragmentNotEnumerable):
            corpus_index.elements_of_type(ET.CODE_FRAGMENT)

    def test_unknown_file_filter_empty(self, corpus_index):
        assert corpus_index.elements_of_type(
            ET.METHOD_DECLARATION, "NotChanged.java") == []

    def test_sorted_by_path_then_start(self, corpus_index):
        els = corpus_index.elements_of_type(ET.METHOD_DECLARATION)
        keys = [(e.range.path, e.range.start) for e in els]
        assert keys == sorted(keys)

    def test_names_present_for_declarations(self, corpus_index):
        for etype in (ET.CLASS_DECLARATION, ET.METHOD_DECLARATION,
                      ET.FIELD_DECLARATION, ET.VARIABLE_DECLARATION,
                      ET.PARAMETER_DECLARATION, ET.IDENTIFIER):
            for el in corpus_index.elements_of_type(etype):
                assert el.name, f"{etype.value} without a name"


class TestIdentifierOracle:
    def test_identifier_set_equals_token_scan(self, corpus, corpus_index):
        for file, text in corpus.items():
            got = {(e.range.start_line, e.range.start_col,
                    e.range.end_line, e.range.end_col, e.name)
                   for e in corpus_index.elements_of_type(ET.IDENTIFIER, file)}
            want = {(line, start, line, end, name)
                    for name, line, start, end in oracle.scan_identifiers(text)}
            assert got == want, file

    def test_identifiers_named_total(self, corpus_index, corpus):
        # Inventory.java uses `total` four times (decl + three usages)
        els = corpus_index.identifiers_named("total")
        inv = [e for e in els if e.range.path == "Inventory.java"]
        assert len(inv) == 4
        assert len(oracle.identifiers_named(corpus["Inventory.java"], "total")) == 4

    def test_identifiers_named_unknown(self, corpus_index):
        assert corpus_index.identifiers_named("doesNotOccurAnywhere") == []

    def test_identifiers_named_scoped_to_method(self, corpus_index):
        method = next(
            e for e in corpus_index.elements_of_type(
                ET.METHOD_DECLARATION, "Loops.java")
            if e.name == "sum")
        scoped = corpus_index.identifiers_named("total", method.range)
        assert len(scoped) == 4
        everywhere = [e for e in corpus_index.identifiers_named("total")
                      if e.range.path == "Loops.java"]
        assert len(everywhere) == 8


class TestPointLookup:
    def test_click_method_name_not_class(self, corpus_index):
        method = next(
            e for e in corpus_index.elements_of_type(
                ET.METHOD_DECLARATION, "Customer.java")
            if e.name == "describe")
        point = (method.range.start_line, method.range.start_col + 7)
        got = corpus_index.element_at(ET.METHOD_DECLARATION,
                                      "Customer.java", *point)
        assert got == method
        cls = corpus_index.element_at(ET.CLASS_DECLARATION,
                                      "Customer.java", *point)
        assert cls.name == "Customer"

    def test_nested_invocation_resolves_inner(self, corpus_index):
        # twice(negate(doubled)): a point inside `negate` hits the inner call
        calls = corpus_index.elements_of_type(ET.METHOD_INVOCATION,
                                              "Calculator.java")
        inner = next(c for c in calls if c.name == "negate")
        got = corpus_index.element_at(
            ET.METHOD_INVOCATION, "Calculator.java",
            inner.range.start_line, inner.range.start_col)
        assert got == inner

    def test_whitespace_point_returns_none(self, corpus_index):
        assert corpus_index.element_at(
            ET.METHOD_DECLARATION, "Customer.java", 7, 1) is None

    def test_minimality_against_linear_scan(self, corpus_index, corpus):
        for file, text in corpus.items():
            lines = text.split("\n")
            for etype in (ET.METHOD_DECLARATION, ET.METHOD_INVOCATION,
                          ET.CLASS_DECLARATION):
                ranges = [e.range for e in
                          corpus_index.elements_of_type(etype, file)]
                # probe every fourth position to keep runtime modest
                for line_no, line in enumerate(lines, start=1):
                    for col in range(1, len(line) + 1, 4):
                        got = corpus_index.element_at(etype, file, line_no, col)
                        want = oracle.minimal_containing(ranges, line_no, col)
                        got_range = got.range if got else None
                        assert got_range == want, (file, etype, line_no, col)


class TestEnclosing:
    def test_statement_range_resolves_to_method(self, corpus_index):
        # `total = total + quantity;` inside Inventory.add
        rng = TextRange("Inventory.java", 5, 9, 5, 33)
        method = corpus_index.enclosing(rng, ET.METHOD_DECLARATION)
        assert method is not None and method.name == "add"

    def test_range_spanning_methods_has_no_container(self, corpus_index):
        methods = corpus_index.elements_of_type(ET.METHOD_DECLARATION,
                                                "Inventory.java")
        spanning = TextRange(
            "Inventory.java",
            methods[0].range.start_line, methods[0].range.start_col,
            methods[1].range.end_line, methods[1].range.end_col)
        assert corpus_index.enclosing(spanning, ET.METHOD_DECLARATION) is None

    def test_strict_containment(self, corpus_index):
        method = corpus_index.elements_of_type(
            ET.METHOD_DECLARATION, "Inventory.java")[0]
        assert corpus_index.enclosing(
            method.range, ET.METHOD_DECLARATION) is None

    def test_enclosing_method_field_consistency(self, corpus_index):
        for file in corpus_index.files.values():
            for el in file.elements:
                if el.enclosing_method is not None:
                    got = corpus_index.enclosing(el.range,
                                                 ET.METHOD_DECLARATION)
                    assert got is not None
                    assert got.range == el.enclosing_method


class TestEnumerationLookupAgreement:
    def test_element_at_start_returns_element_or_nested(self, corpus_index):
        for etype in (ET.METHOD_DECLARATION, ET.METHOD_INVOCATION,
                      ET.FIELD_DECLARATION, ET.VARIABLE_DECLARATION,
                      ET.PARAMETER_DECLARATION, ET.IDENTIFIER):
            for el in corpus_index.elements_of_type(etype):
                got = corpus_index.element_at(
                    etype, el.range.path,
                    el.range.start_line, el.range.start_col)
                assert got is not None
                assert el.range.contains(got.range)


class TestFailureIsolation:
    def make_snapshot(self, files):
        return CommitSnapshot(
            commit=CommitRef("edge", "edge-1"),
            files=tuple(
                FileChange(kind=ChangeKind.ADDED, path_after=name,
                           content_after=text)
                for name, text in files.items()),
        )

    def test_empty_file_yields_no_elements(self):
        # an empty file carries no content change; pair it with a real one
        snap = self.make_snapshot({"A.java": "class A {}\n"})
        index = build_index(snap, RevisionSide.AFTER)
        assert index.files["A.java"].ok
        assert index.elements_of_type(ET.METHOD_DECLARATION, "A.java") == []

    def test_broken_file_is_isolated(self):
        broken = (EDGE / "Broken.java").read_text()
        good = (EDGE.parent / "corpus" / "Customer.java").read_text()
        snap = self.make_snapshot({"Broken.java": broken,
                                   "Customer.java": good})
        index = build_index(snap, RevisionSide.AFTER)
        assert index.unindexed == ["Broken.java"]
        assert len(index.elements_of_type(
            ET.FIELD_DECLARATION, "Customer.java")) == 3

    def test_unknown_extension_unindexed(self):
        snap = self.make_snapshot({"notes.txt": "hello world\n"})
        index = build_index(snap, RevisionSide.AFTER)
        assert index.unindexed == ["notes.txt"]

    def test_deterministic_rebuild(self, corpus_snapshot):
        a = build_index(corpus_snapshot, RevisionSide.AFTER)
        b = build_index(corpus_snapshot, RevisionSide.AFTER)
        for file in a.files:
            assert [e for e in a.files[file].elements] == \
                [e for e in b.files[file].elements]

    def test_no_duplicate_ranges_per_type(self, corpus_index):
        for file in corpus_index.files.values():
            seen = set()
            for el in file.elements:
                key = (el.element_type, el.range)
                assert key not in seen
                seen.add(key)
