from itertools import product

import numpy as np
import pytest

from skewalg.errors import AlgebraMismatch, NotAHomomorphism
from skewalg.exactfield import FieldSpec
from skewalg.morphcat import (MorphismObject, h_adjunction_check, h_pushdown, h_restrict, h_stabilizer,
                              h_twist, hhom_space, identity_object, is_square, verify_gstab,
                              verify_gstab_part3, verify_hgcm)
from skewalg.quivalg import Quiver, RelationSet, path_basis
from skewalg.repcat import FDModule, hom_space, zero_module

from oracles import gf_rank, hhom_dim_q

FS = FieldSpec()
P = FS.p


@pytest.fixture(scope="module")
def a2():
    A = path_basis(Quiver(("1", "2"), (("a", "1", "2"),)), RelationSet(), name="A2")
    S1 = FDModule.from_representation(A, {"1": 1}, {}, "S1")
    S2 = FDModule.from_representation(A, {"2": 1}, {}, "S2")
    P1 = FDModule.from_representation(A, {"1": 1, "2": 1}, {"a": [[1]]}, "P1")
    inc = MorphismObject(S2, P1, hom_space(S2, P1).basis[0], "inc")
    top = MorphismObject(P1, S1, hom_space(P1, S1).basis[0], "top")
    return A, {"S1": S1, "S2": S2, "P1": P1}, inc, top


def activate(ws):
    b = next(iter(ws.bundles.values()))
    b.base.group_action = b.action
    return b


def test_object_validation(a2):
    A, m, inc, top = a2
    with pytest.raises(NotAHomomorphism):
        MorphismObject(m["P1"], m["S2"], np.array([[1, 0]]))
    assert inc.is_mono() and not top.is_mono()


def test_hhom_a2(a2):
    A, m, inc, top = a2
    assert hhom_space(inc, top).dim == hhom_dim_q(inc, top) == 2
    idP = identity_object(m["P1"])
    assert hhom_space(idP, identity_object(m["S1"])).dim == hom_space(m["P1"], m["S1"]).dim
    z = MorphismObject(zero_module(A), m["P1"], np.zeros((2, 0), dtype=np.int64))
    assert hhom_space(z, inc).dim == hom_space(m["P1"], m["P1"]).dim


@pytest.mark.parametrize("fixture", ["swap_ws", "kron_ws", "gentle_ws"])
def test_hhom_matches_oracle(fixture, request):
    ws = request.getfixturevalue(fixture)
    objs = list(ws.morphisms.values())
    for f, h in product(objs, repeat=2):
        H = hhom_space(f, h)
        assert H.dim == hhom_dim_q(f, h), (f.name, h.name)
        assert all(is_square(x, f, h) for x in H.basis)


def test_hhom_mismatch(a2, kron_ws):
    _, _, inc, _ = a2
    with pytest.raises(AlgebraMismatch):
        hhom_space(inc, kron_ws.morphisms["S2_P1"])


def test_h_pushdown_kron(kron_ws):
    b = activate(kron_ws)
    f = kron_ws.morphisms["S2_P1"]
    F = h_pushdown(b, f)
    assert (F.source.dim, F.target.dim) == (2, 6)
    assert gf_rank(F.map, P) == b.group.order * f.rank() == 2
    idF = h_pushdown(b, identity_object(f.source))
    assert np.array_equal(idF.map, np.eye(2, dtype=np.int64))


@pytest.mark.parametrize("fixture", ["swap_ws", "kron_ws", "gentle_ws"])
def test_monos_stay_monos(fixture, request):
    ws = request.getfixturevalue(fixture)
    b = activate(ws)
    for f in ws.morphisms.values():
        assert h_pushdown(b, f).rank() == b.group.order * f.rank()


def test_h_twist(swap_ws):
    activate(swap_ws)
    f = swap_ws.morphisms["S1_0"]
    t = h_twist((1,), f)
    assert t.source.dimension_vector() == (0, 1)
    assert np.array_equal(h_twist((1,), t).source.act, f.source.act)
    assert np.array_equal(h_twist((0,), f).map, f.map)


def test_gstab_examples(swap_ws, kron_ws):
    b = activate(swap_ws)
    f = swap_ws.morphisms["S1_0"]
    r = verify_gstab(b, f)
    assert r.passed
    assert h_restrict(b, h_pushdown(b, f)).source.dimension_vector() == (1, 1)
    b = activate(kron_ws)
    r = verify_gstab(b, kron_ws.morphisms["S1_0"])
    assert r.passed and len(r.part1) == 2


@pytest.mark.parametrize("fixture", ["swap_ws", "kron_ws", "gentle_ws"])
def test_gstab_all(fixture, request):
    ws = request.getfixturevalue(fixture)
    b = activate(ws)
    for f in ws.morphisms.values():
        assert verify_gstab(b, f).passed, f.name
    for f1, f2, g, w in verify_gstab_part3(b, list(ws.morphisms.values())):
        assert g is not None, (f1.name, f2.name)


def test_hgcm_examples(swap_ws, kron_ws):
    b = activate(kron_ws)
    f = kron_ws.morphisms["S1_0"]
    r = verify_hgcm(b, f, f)
    assert r.branch.startswith("IV") and r.lhs == r.rhs == 2
    b = activate(swap_ws)
    r = verify_hgcm(b, swap_ws.morphisms["S1_0"], swap_ws.morphisms["S2_0"])
    assert r.branch.startswith(("I:", "III:")) and r.lhs == r.rhs == 1


def test_hgcm_case_coverage(swap_ws, kron_ws, gentle_ws):
    cases = set()
    for ws in (swap_ws, kron_ws, gentle_ws):
        b = activate(ws)
        stabs = {}
        objs = list(ws.morphisms.values())
        for f, h in product(objs, repeat=2):
            r = verify_hgcm(b, f, h, stabs=stabs)
            assert r.status == "pass", (f.name, h.name, r)
            cases.add(r.branch.split(":")[0])
    assert cases == {"I", "II", "III", "IV"}


def test_h_stabilizer(kron_ws):
    activate(kron_ws)
    # the swap moves the a-image of S2 in P1 to the b-image, and End(P1) = K
    assert h_stabilizer(kron_ws.morphisms["S2_P1"]) == [(0,)]
    assert h_stabilizer(kron_ws.morphisms["S1_0"]) == [(0,), (1,)]


@pytest.mark.parametrize("fixture", ["swap_ws", "kron_ws"])
def test_h_adjunction(fixture, request):
    ws = request.getfixturevalue(fixture)
    b = activate(ws)
    objs = list(ws.morphisms.values())
    for f, h in product(objs, repeat=2):
        r = h_adjunction_check(b, f, h_pushdown(b, h), seed=2)
        assert r.passed, (f.name, h.name, r.witnesses)


def test_h_adjunction_mono(kron_ws):
    b = activate(kron_ws)
    f = kron_ws.morphisms["S2_P1"]
    r = h_adjunction_check(b, f, h_pushdown(b, f))
    assert r.passed and r.mono_checked
