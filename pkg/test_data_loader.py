import os

import pytest

from backend.errors import (AxiomViolation, InstanceTooLarge, InvalidContext, MissingElement, MissingParameter,
                            ProblemFileError, ProblemSyntaxError, UnknownElement, UnknownName, UnknownParameter)
from backend.soft_mapping import SoftMapping
from backend.soft_topology import SoftTopology
from frontend.modules.data_loader import find_examples, parse_problem, parse_text
from frontend.modules.serializer import instance_problem, serialize_problem

HEADER = """\
[context]
universe: h1 h2
parameters: e1 e2

[set F1]
e1: h1
e2:

[set F2]
e1: h2
e2:
"""


def _parse(*lines, validate=True, max_soft_sets=2 ** 16):
    return parse_text(HEADER + "\n".join(lines) + "\n", validate=validate, max_soft_sets=max_soft_sets)


def test_find_examples(examples_dir):
    files = find_examples(os.path.dirname(examples_dir))
    assert [os.path.basename(f) for f in files] == [f"example{n}.soft" for n in range(1, 8)]


@pytest.mark.parametrize("number", range(1, 8))
def test_examples_parse(load_example, number):
    problem = load_example(number)
    assert problem.topologies
    assert problem.maps
    assert problem.context.parameters == ("e1", "e2")


def test_example3_second_context(load_example):
    problem = load_example(3)
    assert list(problem.contexts) == ["X", "Y"]
    assert problem.contexts["Y"].universe == ("y1", "y2", "y3")
    assert problem.contexts["Y"].parameters == ("e1", "e2")
    assert problem.set_contexts["G1"] == "Y"
    assert problem.topology("tau_prime").context.name == "Y"


def test_example4_directives(load_example):
    problem = load_example(4)
    assert len(problem.topology("tau")) == 2
    assert len(problem.topology("tau_prime")) == 64
    assert problem.topology_decls["tau_prime"].directive == "discrete"


def test_example7_has_literal_reading(load_example):
    problem = load_example(7)
    assert set(problem.topologies) == {"tau", "tau_prime", "tau_literal"}
    assert problem.mapping("f").target == "tau_prime"


def test_members_keep_declaration_order(load_example):
    problem = load_example(1)
    names = [problem.name_of(a) for a in problem.members("tau_prime")]
    assert names == ["null", "absolute", "G1", "G2"]


def test_name_of_prefers_declared_name(load_example):
    problem = load_example(2)
    # F1 и G1 совпадают, побеждает первое объявление
    assert problem.name_of(problem.soft_set("G1")) == "F1"


def test_default_topology_and_mapping(load_example):
    problem = load_example(1)
    assert problem.topology() is problem.topology("tau")
    assert problem.mapping().name == "f"
    with pytest.raises(UnknownName):
        problem.topology("sigma")
    with pytest.raises(UnknownName):
        problem.mapping("g")
    with pytest.raises(UnknownName):
        problem.soft_set("F9")


def test_axiom_violation_points_at_header():
    with pytest.raises(AxiomViolation) as info:
        _parse("", "[topology tau]", "null absolute F1 F2")
    assert info.value.line == 13
    assert info.value.report.witness("axiom") == "union"


def test_invalid_topology_kept_without_validation():
    problem = _parse("", "[topology tau]", "null absolute F1 F2", validate=False)
    assert "tau" in problem.topology_decls
    assert "tau" not in problem.topologies
    assert problem.topology_report("tau").witness("axiom") == "union"
    with pytest.raises(AxiomViolation):
        problem.topology("tau")


def test_unknown_set_in_topology_has_column():
    with pytest.raises(UnknownName) as info:
        _parse("", "[topology tau]", "null absolute F1 F9")
    assert (info.value.line, info.value.column) == (14, 18)
    assert "строка 14, позиция 18" in str(info.value)


def test_set_from_other_context_in_topology():
    text = HEADER + "\n[context Y]\nuniverse: a\n\n[topology sigma over Y]\nnull absolute F1\n"
    with pytest.raises(UnknownName) as info:
        parse_text(text)
    assert info.value.line == 17


def test_empty_universe():
    with pytest.raises(InvalidContext) as info:
        parse_text("# пустой X\n[context]\nuniverse:\nparameters: e1\n")
    assert info.value.line == 2


def test_missing_context():
    with pytest.raises(ProblemSyntaxError):
        parse_text("# только комментарий\n")


def test_missing_parameters_in_first_context():
    with pytest.raises(ProblemSyntaxError):
        parse_text("[context]\nuniverse: a b\n")


def test_second_context_inherits_or_repeats_parameters():
    problem = _parse("", "[context Y]", "universe: a", "parameters: e1 e2")
    assert problem.contexts["Y"].parameters == ("e1", "e2")
    with pytest.raises(ProblemSyntaxError) as info:
        _parse("", "[context Y]", "universe: a", "parameters: z9")
    assert info.value.line == 13


def test_discrete_directive_respects_budget():
    problem = _parse("", "[topology tau]", "discrete", max_soft_sets=16)
    assert len(problem.topology("tau")) == 16
    with pytest.raises(InstanceTooLarge) as info:
        _parse("", "[topology tau]", "discrete", max_soft_sets=8)
    assert info.value.line == 13


def test_missing_parameter_in_set():
    with pytest.raises(MissingParameter) as info:
        _parse("", "[set F3]", "e1: h1 h2")
    assert info.value.line == 13


def test_unknown_parameter_and_element_in_set():
    with pytest.raises(UnknownParameter) as info:
        _parse("", "[set F3]", "e1: h1", "e3: h2")
    assert info.value.line == 15
    with pytest.raises(UnknownElement) as info:
        _parse("", "[set F3]", "e1: h1 h9", "e2:")
    assert (info.value.line, info.value.column) == (14, 1)


@pytest.mark.parametrize("lines", [
    ["[sets F3]"],
    ["[set]"],
    ["[set F3", "e1:"],
    ["[set F3]", "e1 h1", "e2:"],
    ["[set F3]", "e1: h1", "e1: h2", "e2:"],
    ["[set null]", "e1:", "e2:"],
    ["[set F1]", "e1:", "e2:"],
    ["[topology tau]", "discrete F1"],
    ["[context X over Y]", "universe: a"],
])
def test_syntax_errors(lines):
    with pytest.raises(ProblemSyntaxError):
        _parse("", *lines)


def test_line_outside_section():
    with pytest.raises(ProblemSyntaxError) as info:
        parse_text("universe: a\n[context]\nuniverse: a\nparameters: e\n")
    assert info.value.line == 1


def test_map_missing_element():
    with pytest.raises(MissingElement) as info:
        _parse("", "[topology tau]", "indiscrete", "", "[map f]", "source: tau", "target: tau", "h1 -> h1")
    assert info.value.line == 16


def test_map_unknown_element_and_topology():
    with pytest.raises(UnknownElement) as info:
        _parse("", "[topology tau]", "indiscrete", "", "[map f]", "source: tau", "target: tau",
               "h1 -> h1", "h2 -> h7")
    assert info.value.line == 20
    with pytest.raises(UnknownName):
        _parse("", "[map f]", "source: tau", "target: tau", "h1 -> h1", "h2 -> h2")


def test_map_requires_source_and_target():
    with pytest.raises(ProblemSyntaxError):
        _parse("", "[topology tau]", "indiscrete", "", "[map f]", "source: tau", "h1 -> h1", "h2 -> h2")


def test_parse_problem_file_errors(tmp_path):
    with pytest.raises(ProblemFileError):
        parse_problem(str(tmp_path / "missing.soft"))
    broken = tmp_path / "broken.soft"
    broken.write_bytes(b"[context]\nuniverse: \xff\xfe\n")
    with pytest.raises(ProblemFileError):
        parse_problem(str(broken))


@pytest.mark.parametrize("number", range(1, 8))
def test_serialized_examples_parse_back(load_example, number):
    problem = load_example(number)
    text = serialize_problem(problem)
    again = parse_text(text)
    assert again.sets == problem.sets
    assert again.set_contexts == problem.set_contexts
    assert {n: t.open_masks for n, t in again.topologies.items()} == \
        {n: t.open_masks for n, t in problem.topologies.items()}
    assert again.maps["f"].mapping.images == problem.maps["f"].mapping.images
    assert serialize_problem(again) == text


def test_instance_problem_renames_clashing_context(load_example):
    problem = load_example(6)
    tau, tau_prime = problem.topology("tau"), problem.topology("tau_prime")
    f = problem.mapping().mapping
    renamed = tau_prime.context.with_universe(tau_prime.context.universe, "X")
    clash = SoftTopology.from_masks(renamed, tau_prime.open_masks)
    built = instance_problem(tau, clash, SoftMapping(f.source, renamed, f.images))
    assert list(built.contexts) == ["X", "Y"]
    again = parse_text(serialize_problem(built))
    assert again.topology("tau_prime").open_masks == tau_prime.open_masks
    assert again.mapping().mapping.as_dict() == {"h1": "a", "h2": "b", "h3": "b"}
