import pytest

from skewalg.errors import ParseError, ValidationError
from skewalg.workspace import fixture_path, parse_text, parse_workspace, serialize

BASE = """[field]
p: 32003

[algebra A2]
vertices: 1 2
arrows: a:1->2
"""


def test_empty_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("")
    ws = parse_workspace(path)
    assert not ws.algebras and not ws.modules and not ws.brauer
    assert serialize(ws) == ""


@pytest.mark.parametrize("name", ["swap", "kron", "gentle", "brauer"])
def test_round_trip(name):
    text = fixture_path(name).read_text()
    ws = parse_text(text)
    out = serialize(ws)
    ws2 = parse_text(out)
    assert serialize(ws2) == out
    assert list(ws2.modules) == list(ws.modules)
    for k, m in ws.modules.items():
        assert (ws2.modules[k].act == m.act).all()
    for k, f in ws.morphisms.items():
        assert (ws2.morphisms[k].map == f.map).all()
    for k, (g, d) in ws.brauer.items():
        g2, d2 = ws2.brauer[k]
        assert (g2.iota, g2.sigma, g2.m, d2.d) == (g.iota, g.sigma, g.m, d.d)


def test_kron_contents(kron_ws):
    assert list(kron_ws.algebras) == ["KRON"]
    assert list(kron_ws.groups) == ["Z2"] and list(kron_ws.actions) == ["swap_ab"]
    assert len(kron_ws.modules) >= 6 and len(kron_ws.morphisms) >= 4 and len(kron_ws.functors) >= 5


def test_shipped_fixture_sizes(swap_ws, gentle_ws):
    for ws in (swap_ws, gentle_ws):
        assert len(ws.modules) >= 6 and len(ws.morphisms) >= 4 and len(ws.functors) >= 5
    assert list(gentle_ws.universes) == ["IND"]


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_text(BASE + "\n[module S1]\nalgebra A2\n")
    assert exc.value.line == 9 and exc.value.col == 1
    with pytest.raises(ParseError) as exc:
        parse_text("[bogus x]\n")
    assert exc.value.line == 1
    with pytest.raises(ParseError):
        parse_text(BASE + "\n[module M]\nalgebra: A2\ndims: 1:1 2:1\narrow a: [[1]\n")


def test_iota_invariant():
    text = "[brauer B]\nhalf_edges: a b c\niota: (a b c)\nsigma: ()\nm: 1 1 1\nd: 0 0 0\n"
    with pytest.raises(ValidationError, match="iota\\^2"):
        parse_text(text)


def test_unknown_reference():
    with pytest.raises(ValidationError, match="unknown"):
        parse_text(BASE + "\n[module M]\nalgebra: B\ndims: 1:1\n")


def test_duplicate_name():
    with pytest.raises(ValidationError, match="unique"):
        parse_text(BASE + "\n[module M]\nalgebra: A2\ndims: 1:1\n\n[module M]\nalgebra: A2\ndims: 2:1\n")


def test_non_homomorphism_rejected():
    text = BASE + """
[module S1]
algebra: A2
dims: 1:1 2:0

[module P1]
algebra: A2
dims: 1:1 2:1
arrow a: [[1]]

[morphism bad]
source: S1
target: P1
map: [[0],[1]]
"""
    with pytest.raises(ValidationError, match="bad"):
        parse_text(text)


def test_field_override():
    ws = parse_text(BASE, p=7)
    assert ws.fs.p == 7
    with pytest.raises(ValidationError):
        parse_text(BASE, p=8)
