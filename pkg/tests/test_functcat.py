from itertools import product

import pytest

from skewalg.errors import AlgebraMismatch, ClassificationInconclusive
from skewalg.functcat import (FPFunctor, evaluate, exactness_at, f_twist, faithfulness_rank,
                              functor_stabilizer, functors_isomorphic, nat_trans_space, phi,
                              phi_pointwise, phi_pointwise_rows, representable, sfm_check, verify_gcf,
                              yoneda_square_rows)
from skewalg.morphcat import MorphismObject, identity_object
from skewalg.quivalg import Quiver, RelationSet, path_basis
from skewalg.repcat import (FDModule, Iso, NonIso, decompose, hom_space, module_stabilizer,
                            pushdown_full)
from skewalg.suites import skew_fixture_modules

from oracles import hom_dim_q


@pytest.fixture(scope="module")
def a2():
    A = path_basis(Quiver(("1", "2"), (("a", "1", "2"),)), RelationSet(), name="A2")
    S1 = FDModule.from_representation(A, {"1": 1}, {}, "S1")
    S2 = FDModule.from_representation(A, {"2": 1}, {}, "S2")
    P1 = FDModule.from_representation(A, {"1": 1, "2": 1}, {"a": [[1]]}, "P1")
    inc = MorphismObject(S2, P1, hom_space(S2, P1).basis[0], "inc")
    return A, {"S1": S1, "S2": S2, "P1": P1}, FPFunctor(inc, "t")


def activate(ws):
    b = next(iter(ws.bundles.values()))
    b.base.group_action = b.action
    return b


def test_a2_values(a2):
    A, m, t = a2
    # the presentation is mono, so t(X) = dim Hom(X, P1) - dim Hom(X, S2)
    for name, x in m.items():
        expect = hom_dim_q(x, m["P1"]) - hom_dim_q(x, m["S2"])
        assert evaluate(t, x).dim == expect
    assert [evaluate(t, m[k]).dim for k in ("S1", "S2", "P1")] == [0, 0, 1]


def test_a2_nat(a2):
    A, m, t = a2
    # t is nonzero only at P1 among the three indecomposables, so Nat(t, t) = End(t(P1))
    assert nat_trans_space(t, t).dim == 1
    zero = FPFunctor(identity_object(m["P1"]), "0")
    assert all(evaluate(zero, x).dim == 0 for x in m.values())
    assert nat_trans_space(zero, t).dim == 0 and nat_trans_space(t, zero).dim == 0


def test_representable_and_yoneda(a2, kron_ws):
    A, m, _ = a2
    for x, y in product(m.values(), repeat=2):
        assert evaluate(representable(y), x).dim == hom_space(x, y).dim
    mods = list(kron_ws.modules.values())
    for x, y in product(mods, repeat=2):
        assert nat_trans_space(representable(x), representable(y)).dim == hom_dim_q(x, y)


def test_evaluate_mismatch(a2, kron_ws):
    _, _, t = a2
    with pytest.raises(AlgebraMismatch):
        evaluate(t, kron_ws.modules["S1"])


def test_phi_examples(kron_ws, swap_ws):
    b = activate(kron_ws)
    t = representable(kron_ws.modules["S1"])
    FS1 = pushdown_full(b, kron_ws.modules["S1"])
    assert evaluate(phi(b, t), FS1).dim == 2
    r = phi_pointwise(b, t, FS1, list(kron_ws.modules.values()))
    assert (r.branch, r.lhs, r.rhs) == ("pushdown", 2, 2)
    # phi(Hom(-, M)) = Hom(-, F M)
    for m in kron_ws.modules.values():
        for x in (pushdown_full(b, y) for y in kron_ws.modules.values()):
            assert evaluate(phi(b, representable(m)), x).dim == hom_space(x, pushdown_full(b, m)).dim
    b = activate(swap_ws)
    t = representable(swap_ws.modules["S1"])
    simple = pushdown_full(b, swap_ws.modules["S1"])
    r = phi_pointwise(b, t, simple, list(swap_ws.modules.values()))
    assert r.lhs == r.rhs == evaluate(t, swap_ws.modules["S1"]).dim + evaluate(t, swap_ws.modules["S2"]).dim


def test_phi_summand_case(kron_ws):
    b = activate(kron_ws)
    parts = decompose(pushdown_full(b, kron_ws.modules["S1"]))
    assert len(parts) == 2
    t = representable(kron_ws.modules["S1"])
    for s in parts:
        r = phi_pointwise(b, t, s.module, list(kron_ws.modules.values()))
        assert (r.branch, r.lhs, r.rhs) == ("summand", 1, 1)


def test_classification_inconclusive(kron_ws):
    b = activate(kron_ws)
    x = pushdown_full(b, kron_ws.modules["P1"])
    with pytest.raises(ClassificationInconclusive):
        phi_pointwise(b, representable(kron_ws.modules["S1"]), x, [kron_ws.modules["S1"]])


@pytest.mark.parametrize("fixture", ["swap_ws", "kron_ws", "gentle_ws"])
def test_phi_pointwise_all(fixture, request):
    ws = request.getfixturevalue(fixture)
    b = activate(ws)
    xbars = skew_fixture_modules(b, list(ws.modules.values()))
    for t in ws.functors.values():
        for row in phi_pointwise_rows(b, t, xbars):
            assert row.status == "pass", row
        for x in xbars:
            assert exactness_at(b, t, x).passed
    for t1, t2 in product(ws.functors.values(), repeat=2):
        rank, n = faithfulness_rank(b, t1, t2)
        assert rank == n


def test_gcf_examples(kron_ws, swap_ws):
    b = activate(kron_ws)
    t = representable(kron_ws.modules["S1"])
    stabs = {id(t): functor_stabilizer(t)}
    r = verify_gcf(b, t, t, stabs)
    assert (r.branch, r.lhs, r.rhs) == ("G_T1T2=G", 2, 2)
    b = activate(swap_ws)
    t1, t2 = representable(swap_ws.modules["S1"]), representable(swap_ws.modules["S2"])
    stabs = {id(t1): functor_stabilizer(t1), id(t2): functor_stabilizer(t2)}
    r = verify_gcf(b, t1, t2, stabs)
    assert (r.branch, r.lhs, r.rhs) == ("G_T1!=G", 1, 1)


def test_functor_twist_iso(swap_ws):
    activate(swap_ws)
    t1 = representable(swap_ws.modules["S1"])
    t2 = representable(swap_ws.modules["S2"])
    r = functors_isomorphic(f_twist((1,), t1), t2)
    assert isinstance(r, Iso)
    assert isinstance(functors_isomorphic(t1, t2), NonIso)


def test_sfm_counterexample_zero_functor(swap_ws):
    """coker Hom(-, id) vanishes, so it is stable even though S1 is not."""
    activate(swap_ws)
    t = FPFunctor(identity_object(swap_ws.modules["S1"]), "zero")
    assert module_stabilizer(swap_ws.modules["S1"]) == [(0,)]
    assert functor_stabilizer(t) == [(0,), (1,)]
    r = sfm_check(t)
    assert (r.lhs, r.rhs, r.status) == (1, 0, "fail")


def test_sfm_counterexample_kron_inclusion(kron_ws):
    """S2 -> P1 onto the a-image: both modules are stable, the functor is not."""
    activate(kron_ws)
    mods = kron_ws.modules
    f = MorphismObject(mods["S2"], mods["P1"], kron_ws.morphisms["S2_P1"].map, "S2_P1")
    t = FPFunctor(f, "Tia")
    assert module_stabilizer(mods["S2"]) == module_stabilizer(mods["P1"]) == [(0,), (1,)]
    tt = f_twist((1,), t)
    dims = tuple(nat_trans_space(x, y).dim for x, y in ((t, t), (t, tt), (tt, t), (tt, tt)))
    assert dims == (1, 0, 0, 1)
    assert isinstance(functors_isomorphic(t, tt), NonIso)
    assert functor_stabilizer(t) == [(0,)]
    # its values agree pointwise with the twist at every fixture module
    for m in mods.values():
        assert evaluate(t, m).dim == evaluate(tt, m).dim
    assert sfm_check(t).status == "fail"


@pytest.mark.parametrize("fixture", ["swap_ws", "kron_ws", "gentle_ws"])
def test_shipped_functors_satisfy_sfm(fixture, request):
    ws = request.getfixturevalue(fixture)
    activate(ws)
    for t in ws.functors.values():
        assert sfm_check(t).status == "pass", t.name


def test_yoneda_square(kron_ws):
    b = activate(kron_ws)
    xbars = skew_fixture_modules(b, list(kron_ws.modules.values()))
    for name in ("S2_P1", "id_S1", "Z_S1"):
        for row in yoneda_square_rows(b, kron_ws.morphisms[name], xbars):
            assert row.status == "pass", row
    ident = yoneda_square_rows(b, kron_ws.morphisms["id_S1"], xbars)
    assert all(r.lhs == r.rhs == 0 for r in ident)
