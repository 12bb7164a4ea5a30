import pytest
from hypothesis import given, strategies as st

from iotcompose.vocab import (
    TermKind,
    Vocabulary,
    VocabularyError,
    classify_term,
    is_subclass_of,
    load_vocabulary,
)
from oracles import transitive_closure

MYONT = "http://iot.foi.hr/ontologies/ThingAsAServiceOntology.owl#"


def test_bundled_sensor_edge(vocab):
    assert (MYONT + "Sensor", MYONT + "PhysicalObject") in vocab.subclass_edges


def test_sensor_is_physical_object_but_not_conversely(vocab):
    assert is_subclass_of(vocab, MYONT + "Sensor", MYONT + "PhysicalObject")
    assert not is_subclass_of(vocab, MYONT + "PhysicalObject", MYONT + "Sensor")


def test_subclass_is_reflexive_even_for_unknown_terms(vocab):
    assert is_subclass_of(vocab, "http://x/Y", "http://x/Y")
    assert is_subclass_of(vocab, MYONT + "Sensor", MYONT + "Sensor")


def test_empty_file():
    v = load_vocabulary("")
    assert v == Vocabulary()
    assert not v.classes and not v.properties and not v.subclass_edges


def test_redeclaring_a_class_is_idempotent():
    once = load_vocabulary("prefix myont <http://o#>\nmyont:Sensor class\n")
    twice = load_vocabulary("prefix myont <http://o#>\nmyont:Sensor class\nmyont:Sensor class\n")
    assert once == twice


@pytest.mark.parametrize("term,kind", [
    ("myont.SemanticWebThing", TermKind.CLASS),
    ("myont:SemanticWebThing", TermKind.CLASS),
    ("myont:hasResources", TermKind.PROPERTY),
    ("myont.hasResources", TermKind.PROPERTY),
    ("nosuch:Thing", TermKind.UNKNOWN),
    ("myont:NoSuchTerm", TermKind.UNKNOWN),
    ("", TermKind.UNKNOWN),
    ("thingId", TermKind.PROPERTY),
    (f"<{MYONT}Sensor>", TermKind.CLASS),
    (f"{MYONT}Actuator", TermKind.CLASS),
])
def test_classify(vocab, term, kind):
    assert classify_term(vocab, term) is kind


def test_context_prefix_overrides_vocabulary(vocab):
    ctx = {"myont": "http://elsewhere/#"}
    assert classify_term(vocab, "myont:Sensor", ctx) is TermKind.UNKNOWN
    assert classify_term(vocab, "ex:Sensor", {"ex": MYONT}) is TermKind.CLASS


def test_compact_and_full_forms_classify_alike(vocab):
    for iri in vocab.classes | vocab.properties:
        local = iri[len(MYONT):] if iri.startswith(MYONT) else None
        if local is None:
            continue
        for compact in (f"myont:{local}", f"myont.{local}"):
            assert classify_term(vocab, vocab.expand(compact)) is classify_term(vocab, iri)
            assert classify_term(vocab, compact) is classify_term(vocab, iri)


def test_subclass_matches_closure_on_bundled_file(vocab):
    closure = transitive_closure(vocab.classes, vocab.subclass_edges)
    for a in vocab.classes:
        for b in vocab.classes:
            assert is_subclass_of(vocab, a, b) == ((a, b) in closure), (a, b)


@st.composite
def dag_files(draw):
    n = draw(st.integers(1, 8))
    names = [f"ex:C{i}" for i in range(n)]
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1]),
                         max_size=15))
    lines = ["prefix ex <http://ex.org/#>"] + [f"{c} class" for c in names]
    lines += [f"{names[a]} subClassOf {names[b]}" for a, b in edges]
    return "\n".join(lines)


@given(dag_files())
def test_subclass_matches_closure_on_random_dags(text):
    v = load_vocabulary(text)
    closure = transitive_closure(v.classes, v.subclass_edges)
    for a in v.classes:
        for b in v.classes:
            assert is_subclass_of(v, a, b) == ((a, b) in closure)
    for child, parent in v.subclass_edges:
        assert child in v.classes and parent in v.classes


def test_edge_endpoints_become_classes():
    v = load_vocabulary("prefix ex <http://e#>\nex:A subClassOf ex:B\n")
    assert v.classes == {"http://e#A", "http://e#B"}


@pytest.mark.parametrize("text,line", [
    ("prefix ex <http://e#>\nex:A frobnicates ex:B\n", 2),
    ("ex:A class\n", 1),
    ("prefix ex\n", 1),
    ("prefix ex <http://e#>\nprefix ex <http://f#>\n", 2),
    ("prefix ex <http://e#>\nprefix ey <http://e#>\n", 2),
])
def test_syntax_errors_report_line(text, line):
    with pytest.raises(VocabularyError) as info:
        load_vocabulary(text)
    assert info.value.line == line


def test_cycle_rejected():
    with pytest.raises(VocabularyError, match="cycle"):
        load_vocabulary("prefix ex <http://e#>\nex:A subClassOf ex:B\nex:B subClassOf ex:C\nex:C subClassOf ex:A\n")


def test_class_and_property_clash_rejected():
    with pytest.raises(VocabularyError):
        load_vocabulary("prefix ex <http://e#>\nex:A class\nex:A property\n")


def test_comments_and_hash_inside_iri():
    v = load_vocabulary("# header\nprefix ex <http://e.org/o#>  # trailing\nex:A class # note\n")
    assert v.classes == {"http://e.org/o#A"}


def test_full_iri_terms():
    v = load_vocabulary("<http://e#A> subClassOf <http://e#B>\n")
    assert is_subclass_of(v, "http://e#A", "http://e#B")
