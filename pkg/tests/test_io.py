import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braceybe import io
from braceybe.braces import BraceAxiomError, enumerate_braces, rump_brace, trivial_brace
from braceybe.corpus import corpus
from braceybe.groups import cyclic_group
from braceybe.solutions import construct_solution

CENSUS = [B for n in range(1, 9) for B in enumerate_braces(n)]
CONFIGS = [e.config for e in corpus(6)]


def test_trivial_z4_round_trip(tmp_path):
    B = trivial_brace(cyclic_group(4))
    path = tmp_path / "z4.json"
    io.write_brace(B, path)
    assert io.parse_brace(path) == B
    text = path.read_text()
    io.write_brace(io.parse_brace(path), path)
    assert path.read_text() == text


def test_rump_generated_then_reparsed(tmp_path):
    B = rump_brace(3, 2, 1)
    path = tmp_path / "r.json"
    io.write_brace(B, path, {"construction": "rump"})
    C = io.parse_brace(path)
    assert (C.add.table == B.add.table).all() and (C.mul.table == B.mul.table).all()


def test_meta_is_ignored_for_equality():
    B = rump_brace(3, 2, 1)
    assert io.brace_from_obj(json.loads(io.brace_to_text(B, {"x": 1}))) == B


@given(st.sampled_from(CENSUS))
@settings(max_examples=30, deadline=None)
def test_brace_round_trip(B):
    text = io.brace_to_text(B)
    C = io.brace_from_obj(io.load_json(text))
    assert C == B and io.brace_to_text(C) == text


@given(st.sampled_from(CONFIGS))
@settings(max_examples=40, deadline=None)
def test_solution_and_config_round_trip(cfg):
    s = construct_solution(cfg)
    text = io.solution_to_text(s)
    t = io.solution_from_obj(io.load_json(text))
    assert t == s and io.solution_to_text(t) == text
    ctext = io.config_to_text(cfg)
    back = io.config_from_obj(io.load_json(ctext))
    assert back.key() == cfg.key() and back.brace == cfg.brace
    assert io.config_to_text(back) == ctext


def test_group_round_trip(tmp_path):
    G = cyclic_group(6)
    path = tmp_path / "g.json"
    io.write_group(G, path)
    assert io.parse_group(path) == G


def test_config_with_brace_path(tmp_path):
    B = rump_brace(3, 2, 1)
    io.write_brace(B, tmp_path / "b.json")
    cfg = next(c for c in CONFIGS if c.brace.order == 3)
    (tmp_path / "c.json").write_text(
        json.dumps({"brace": "b.json", "orbits": [1], "families": [[[0]]]})
    )
    parsed = io.parse_config(tmp_path / "c.json")
    assert parsed.brace == B and parsed.reps == (1,)
    assert cfg.brace.order == 3


@pytest.mark.parametrize(
    "doc, where",
    [
        ('{"order": 2, "add": [[0, 1], [1]], "mul": [[0, 1], [1, 0]]}', "add row 1"),
        ('{"order": 2, "add": [[0, 1], [1, 0]]}', "mul"),
        ('{"order": 2, "add": [[0, 1], [1, 5]], "mul": [[0, 1], [1, 0]]}', "add row 1"),
        ('{"order": "2", "add": [], "mul": []}', "order"),
        ('{"order": 2, "add": [[0, 1], [1, true]], "mul": [[0, 1], [1, 0]]}', "add row 1[1]"),
        ('{\n "order": 2,\n "add": [', "line 3"),
    ],
)
def test_malformed_brace_files(doc, where):
    with pytest.raises(io.FormatError) as err:
        io.brace_from_obj(io.load_json(doc))
    assert err.value.where.startswith(where)


def test_axiom_violation_passes_through():
    doc = {"order": 4, "add": cyclic_group(4).table.tolist(), "mul": [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 1, 0], [3, 2, 0, 1]]}
    with pytest.raises(BraceAxiomError):
        io.brace_from_obj(doc)


def test_malformed_solution_and_config():
    with pytest.raises(io.FormatError):
        io.solution_from_obj({"size": 2, "labels": ["a", "b"], "sigma": [[0, 0], [0, 1]]})
    with pytest.raises(io.FormatError):
        io.solution_from_obj({"size": 2, "labels": ["a"], "sigma": [[0, 1], [0, 1]]})
    B = trivial_brace(cyclic_group(3))
    with pytest.raises(io.FormatError) as err:
        io.config_from_obj({"orbits": [1], "families": [[[0, 1]]]}, B)
    assert err.value.where == "families[0][0]"
    with pytest.raises(io.FormatError):
        io.config_from_obj({"orbits": [1, 2], "families": [[[0]]]}, B)
