import pytest
from hypothesis import given
from hypothesis import strategies as st

from refann.errors import (
    BuiltinOverwrite,
    DuplicateName,
    InvalidSchema,
    UnknownType,
)
from refann.model import (
    AutofillKind,
    AutofillRule,
    CodeElement,
    ElementType,
    ParameterSchema,
    RefactoringTypeDefinition,
    RevisionSide,
    TextRange,
    TypeRegistry,
)

B, A = RevisionSide.BEFORE, RevisionSide.AFTER


def rng(sl, sc, el, ec, path="A.java"):
    return TextRange(path=path, start_line=sl, start_col=sc,
                     end_line=el, end_col=ec)


class TestTextRange:
    def test_start_must_precede_end(self):
        with pytest.raises(ValueError):
            rng(3, 5, 3, 5)
        with pytest.raises(ValueError):
            rng(4, 1, 3, 1)

    def test_path_rules(self):
        with pytest.raises(ValueError):
            rng(1, 1, 1, 2, path="")
        with pytest.raises(ValueError):
            rng(1, 1, 1, 2, path="a/../b.java")
        with pytest.raises(ValueError):
            rng(1, 1, 1, 2, path="a\\b.java")

    def test_containment(self):
        outer = rng(1, 1, 10, 1)
        inner = rng(2, 3, 4, 7)
        assert outer.contains(inner)
        assert outer.strictly_contains(inner)
        assert not outer.strictly_contains(outer)
        assert inner.contains_point(2, 3)
        assert not inner.contains_point(4, 7)  # end-exclusive

    positions = st.tuples(st.integers(1, 50), st.integers(1, 50))

    @given(positions, positions)
    def test_ordering_is_strict_total(self, p, q):
        # a range exists iff start < end; position order is the tuple order
        if p < q:
            r = TextRange("F.java", p[0], p[1], q[0], q[1])
            assert r.start < r.end
        elif p == q or p > q:
            with pytest.raises(ValueError):
                TextRange("F.java", p[0], p[1], q[0], q[1])

    def test_json_round_trip(self):
        r = rng(2, 3, 4, 7)
        assert TextRange.from_json(r.to_json()) == r


class TestCodeElement:
    def test_enclosing_method_must_contain_range(self):
        with pytest.raises(ValueError):
            CodeElement(
                element_type=ElementType.IDENTIFIER,
                range=rng(5, 1, 5, 4),
                side=B,
                name="x",
                enclosing_method=rng(1, 1, 3, 2),
            )


def custom_type(name="InlineTemp"):
    return RefactoringTypeDefinition(
        name=name,
        before=(ParameterSchema("temp", B, ElementType.VARIABLE_DECLARATION),),
        after=(ParameterSchema("replacements", A, ElementType.IDENTIFIER,
                               multiple=True, required=False),),
    )


class TestRegistry:
    def test_predefined_types_alphabetical_and_stable(self, registry):
        names = [d.name for d in registry.predefined()]
        assert names == ["ExtractMethod", "MoveClass", "MoveField",
                         "RenameVariable"]
        assert names == [d.name for d in registry.predefined()]

    def test_extract_method_schema(self, registry):
        em = registry.lookup("ExtractMethod")
        assert [p.name for p in em.before] == ["extracted code"]
        assert [p.name for p in em.after] == ["extracted method", "invocation"]
        inv = em.find(A, "invocation")
        assert inv.element_type is ElementType.METHOD_INVOCATION

    def test_move_field_has_reference_autofill(self, registry):
        mf = registry.lookup("MoveField")
        refs = mf.find(B, "references")
        assert refs.multiple and not refs.required
        assert refs.autofill.kind is AutofillKind.REFERENCE
        assert refs.autofill.follows == "moved field"

    def test_register_and_lookup_round_trip(self):
        registry = TypeRegistry()
        defn = custom_type()
        registry.register(defn)
        assert registry.lookup("InlineTemp") == defn

    def test_register_duplicate(self):
        registry = TypeRegistry()
        registry.register(custom_type())
        with pytest.raises(DuplicateName):
            registry.register(custom_type())

    def test_builtin_overwrite_rejected(self):
        registry = TypeRegistry()
        with pytest.raises(BuiltinOverwrite):
            registry.register(custom_type(name="MoveField"))

    def test_unknown_type(self, registry):
        with pytest.raises(UnknownType):
            registry.lookup("NoSuchType")

    def test_empty_schema_rejected(self):
        registry = TypeRegistry()
        with pytest.raises(InvalidSchema):
            registry.register(RefactoringTypeDefinition(
                name="Nothing", before=(), after=()))

    def test_autofill_must_resolve(self):
        bad = RefactoringTypeDefinition(
            name="Bad",
            before=(ParameterSchema(
                "refs", B, ElementType.IDENTIFIER, multiple=True,
                autofill=AutofillRule(AutofillKind.REFERENCE, "ghost")),),
            after=(),
        )
        with pytest.raises(InvalidSchema):
            TypeRegistry().register(bad)

    def test_reference_autofill_target_constraints(self):
        bad = RefactoringTypeDefinition(
            name="Bad",
            before=(
                ParameterSchema("field", B, ElementType.FIELD_DECLARATION),
                ParameterSchema(
                    "refs", B, ElementType.FIELD_DECLARATION, multiple=True,
                    autofill=AutofillRule(AutofillKind.REFERENCE, "field")),
            ),
            after=(),
        )
        with pytest.raises(InvalidSchema):
            TypeRegistry().register(bad)

    def test_schema_closure_for_all_registered(self, registry):
        for defn in registry.all():
            for p in defn.all_parameters():
                if p.autofill:
                    assert (defn.find(B, p.autofill.follows)
                            or defn.find(A, p.autofill.follows))


class TestTypeJson:
    def test_round_trip(self):
        defn = custom_type()
        again = RefactoringTypeDefinition.from_json(defn.to_json())
        assert again == defn

    def test_unknown_keys_rejected(self):
        data = custom_type().to_json()
        data["extra"] = 1
        with pytest.raises(InvalidSchema):
            RefactoringTypeDefinition.from_json(data)

    def test_registry_round_trip_structural(self, registry):
        for defn in registry.predefined():
            reparsed = RefactoringTypeDefinition.from_json(defn.to_json())
            fresh = TypeRegistry()
            registered = fresh.register(
                RefactoringTypeDefinition(
                    name=reparsed.name + "Copy", before=tuple(
                        type(p)(p.name, p.side, p.element_type, p.multiple,
                                p.required, p.autofill) for p in reparsed.before),
                    after=reparsed.after))
            assert fresh.lookup(registered.name) == registered
