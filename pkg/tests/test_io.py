import re

import pytest
from hypothesis import given

from strategies import l_posets, perturbed_systems
from isw.approx import check_approx, identity
from isw.errors import ParseError
from isw.fixtures import FIXTURES, bfly, bfly_poset, flat2, flat2_poset, term
from isw.function_space import materialize_exponent
from isw.io import (cache_name, export_dot, parse_mapping, parse_mapping_header, parse_poset, parse_system,
                    read_exponent_sidecar, serialize_mapping, serialize_poset, serialize_system, write_exponent)
from isw.posets import info_from_domain, order_iso
from isw.states import enumerate_states

TERM_TEXT = """\
system TERM
delta delta
tokens delta
con delta : {} {delta}
entail (delta ; ) -> delta
entail (delta ; delta) -> delta
"""


def test_term_text_parses_to_term():
    assert parse_system(TERM_TEXT) == term()
    assert serialize_system(term()) == TERM_TEXT


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_fixture_roundtrip(name):
    s = FIXTURES[name]()
    assert parse_system(serialize_system(s)) == s


def test_data_files_match_fixtures(data_dir):
    for f in ("term", "flat2", "bfly"):
        assert parse_system((data_dir / f"{f}.isw").read_text()) == FIXTURES[f.upper()]()
    assert info_from_domain(parse_poset((data_dir / "flat2.poset").read_text())) == flat2()
    assert order_iso(parse_poset((data_dir / "butterfly.poset").read_text()), bfly_poset()) is not None


@given(perturbed_systems())
def test_roundtrip_on_random_systems(sys):
    assert parse_system(serialize_system(sys)) == sys


@given(l_posets())
def test_poset_roundtrip(p):
    q = parse_poset(serialize_poset(p))
    assert q.elems == p.elems and q.leq == p.leq and q.bottom == p.bottom


def test_comments_and_blank_lines_are_ignored():
    text = "# header\n\n" + TERM_TEXT.replace("tokens delta", "tokens delta   # one token")
    assert parse_system(text) == term()


def test_token_before_declaration():
    with pytest.raises(ParseError) as e:
        parse_system("system X\ndelta d\ntokens a\n")
    assert (e.value.line, e.value.col) == (2, 7)
    with pytest.raises(ParseError) as e:
        parse_system("system X\ncon a : {}\ntokens a\n")
    assert e.value.line == 2


def test_parse_errors_carry_location():
    bad = TERM_TEXT.replace("con delta : {} {delta}", "con delta : {} {zeta}")
    with pytest.raises(ParseError) as e:
        parse_system(bad)
    assert e.value.line == 4 and e.value.col == bad.splitlines()[3].index("zeta") + 1
    with pytest.raises(ParseError) as e:
        parse_system(TERM_TEXT + "frobnicate x\n")
    assert e.value.line == 7 and e.value.col == 1
    with pytest.raises(ParseError):
        parse_system(TERM_TEXT.replace("tokens delta", "tokens del$ta"))


def test_poset_parse_errors():
    with pytest.raises(ParseError):
        parse_poset("poset P\nbottom b\nelems b x\nle x b\n")
    with pytest.raises(ParseError):
        parse_poset("poset P\nbottom z\nelems b x\n")


def test_mapping_roundtrip(data_dir):
    f = flat2()
    text = (data_dir / "swap.map").read_text()
    assert parse_mapping_header(text) == ("swap", "FLAT2", "FLAT2")
    h = parse_mapping(text, f, f)
    assert check_approx(h).ok
    assert parse_mapping(serialize_mapping(h), f, f) == h
    idm = parse_mapping((data_dir / "id_flat2.map").read_text(), f, f)
    assert idm == identity(f)


def test_mapping_rejects_inconsistent_pairs():
    f = flat2()
    with pytest.raises(ParseError):
        parse_mapping("map m : FLAT2 -> FLAT2\nrel (a ; b) -> bot\n", f, f)


@pytest.mark.parametrize("sys,nodes,edges", [(term(), 1, 0), (flat2(), 3, 2), (bfly(), 5, 6)],
                         ids=lambda x: getattr(x, "name", str(x)))
def test_dot_export_counts(sys, nodes, edges):
    dot = export_dot(enumerate_states(sys))
    assert dot.startswith("digraph")
    assert len(re.findall(r"^\s+s\d+ \[label=", dot, re.M)) == nodes
    assert len(re.findall(r"->", dot)) == edges
    assert dot == export_dot(enumerate_states(sys))


def test_exponent_cache_roundtrip(tmp_path):
    ex = materialize_exponent(term(), flat2())
    path = tmp_path / cache_name(term(), flat2())
    assert path.name == "TERM__to__FLAT2.isw"
    p, side = write_exponent(ex, path)
    assert parse_system(p.read_text()) == ex.system
    got = read_exponent_sidecar(side)
    assert sorted(got) == sorted(ex.names)
    for name, cls in zip(ex.names, ex.classes):
        assert got[name] == cls
