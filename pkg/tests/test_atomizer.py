import pytest
from hypothesis import given, strategies as st

from iotcompose.atomizer import (
    AtomizationMode,
    atomize_cloud,
    atomize_thing,
    build_problem,
    normalize_symbol,
    thing_symbol,
)
from iotcompose.shop_syntax import PAtom, Problem, print_problem, tokens_of
from iotcompose.symbols import SymbolError
from iotcompose.thing_model import (
    CloudOperation,
    CloudServiceDescription,
    Direction,
    IoValueSpec,
    ResourceKind,
    ResourceSpec,
    ThingDescription,
)
from conftest import REFERENCE_PROBLEM

GENERAL, COMPAT = AtomizationMode.GENERAL, AtomizationMode.PAPER_COMPAT


def _reference_atoms():
    """State atoms of the reference problem file, split per thing."""
    from iotcompose.shop_syntax import parse_problem

    state = parse_problem(REFERENCE_PROBLEM.read_text("utf-8")).initial_state
    return state[:13], state[13:]


@pytest.mark.parametrize("raw,sym", [
    ("Arduino Yun with temperature sensor", "Arduino_Yun_with_temperature_sensor"),
    ("02 long LED", "long_LED"),
    ("X", "X"),
    ("  spaced\tout\n", "spaced_out"),
    ("a(b);c", "a_b__c"),
    ("2341", "2341"),
    ("12 34 x", "x"),
    ("?q", "_q"),
])
def test_normalize_symbol(raw, sym):
    assert normalize_symbol(raw) == sym


@pytest.mark.parametrize("raw", ["", "   "])
def test_normalize_empty(raw):
    with pytest.raises(SymbolError):
        normalize_symbol(raw)


def test_thing_symbol():
    assert thing_symbol("2341") == "SemanticWebThing_2341"


@given(st.text(min_size=1))
def test_normalized_symbols_are_atom_safe(raw):
    try:
        sym = normalize_symbol(raw)
    except SymbolError:
        return
    assert sym and not any(c.isspace() or c in "();" for c in sym)
    assert not sym.startswith("?")
    assert tokens_of(f"(p {sym})") == ["(", "p", sym, ")"]


def test_arduino_paper_compat_exact(arduino):
    expected, _ = _reference_atoms()
    assert tuple(atomize_thing(arduino, COMPAT)) == expected


def test_littlebits_paper_compat_exact(littlebits):
    _, expected = _reference_atoms()
    assert tuple(atomize_thing(littlebits, COMPAT)) == expected


def test_littlebits_general_adds_input_atoms(littlebits):
    general = atomize_thing(littlebits, GENERAL)
    compat = atomize_thing(littlebits, COMPAT)
    extra = [a for a in general if a not in compat]
    assert extra == [
        PAtom("InputName", ("Actuator", "long_LED", "input_voltage")),
        PAtom("InputDescription", ("Actuator", "long_LED", "input_voltage_in_percentage")),
        PAtom("InputUnit", ("Actuator", "long_LED", "percent")),
    ]
    assert len(general) == 11


@pytest.mark.parametrize("which", ["arduino", "littlebits"])
def test_compat_subset_of_general(request, which):
    d = request.getfixturevalue(which)
    assert set(atomize_thing(d, COMPAT)) <= set(atomize_thing(d, GENERAL))


def test_deterministic(arduino, littlebits):
    for d in (arduino, littlebits):
        for mode in AtomizationMode:
            assert atomize_thing(d, mode) == atomize_thing(d, mode)


def test_cloud_atoms(cloud):
    assert atomize_cloud(cloud) == [
        PAtom("CloudService", ("AzureBlobMock",)),
        PAtom("serviceName", ("AzureBlobMock", "Azure_Blob_Mock")),
        PAtom("hasOperation", ("AzureBlobMock", "putObject")),
        PAtom("modelReference", ("putObject", "StorageService")),
    ]


def test_cloud_without_operations_or_references():
    assert len(atomize_cloud(CloudServiceDescription("S", "S"))) == 2
    c = CloudServiceDescription("S", "S", (CloudOperation("b", (), ()), CloudOperation("a", (), ())))
    assert atomize_cloud(c)[2:] == [PAtom("hasOperation", ("S", "b")), PAtom("hasOperation", ("S", "a"))]


def test_full_iri_model_reference():
    c = CloudServiceDescription("S", "S", (CloudOperation("op", (), (), "<http://x.org/o#Blob>"),))
    assert atomize_cloud(c)[-1] == PAtom("modelReference", ("op", "Blob"))


def test_build_problem_matches_reference_tokens(arduino, littlebits):
    task = PAtom.parse("(composeIoTServices DS18B20 long_LED)")
    p = build_problem("problem", "iot", [arduino, littlebits], [], [task], COMPAT)
    assert tokens_of(print_problem(p)) == tokens_of(REFERENCE_PROBLEM.read_text("utf-8"))


def test_build_problem_empty():
    assert build_problem("p", "d") == Problem("p", "d")


def test_build_problem_with_cloud(arduino, littlebits, cloud):
    task = PAtom.parse("(composeSensorToCloud DS18B20 putObject)")
    p = build_problem("problem", "iot", [arduino, littlebits], [cloud], [task], COMPAT)
    assert len(p.initial_state) == 25
    assert p.task_list == (task,)


names = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=12).filter(
    lambda s: any(c.isalnum() for c in s) and not s.strip().isdigit()
)


@st.composite
def descriptions(draw):
    def io(direction):
        return IoValueSpec(direction, draw(names), draw(names | st.just("")), draw(names))

    resources = []
    for _ in range(draw(st.integers(0, 3))):
        kind = draw(st.sampled_from(list(ResourceKind)))
        direction = {ResourceKind.SENSOR: Direction.OUTPUT, ResourceKind.ACTUATOR: Direction.INPUT}.get(
            kind, draw(st.sampled_from(list(Direction))))
        resources.append(ResourceSpec(kind, draw(names), draw(names | st.just("")),
                                      draw(st.none() | st.just(io(direction)))))
    pairs = st.lists(st.tuples(names, names), max_size=3)
    return ThingDescription(draw(names), draw(names | st.just("")), draw(names | st.just("")),
                            tuple(resources), tuple(draw(pairs)), tuple(draw(pairs)))


@given(descriptions(), st.sampled_from(list(AtomizationMode)))
def test_random_descriptions_give_ground_atoms(d, mode):
    try:
        atoms = atomize_thing(d, mode)
    except SymbolError:
        return
    assert all(a.is_ground for a in atoms)
    assert atoms == atomize_thing(d, mode)
    assert set(atomize_thing(d, COMPAT)) <= set(atomize_thing(d, GENERAL))
    assert atoms[0] == PAtom("SemanticWebThing", (thing_symbol(d.thing_id),))
