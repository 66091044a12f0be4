import pytest

from sskg.action import (ActionAutomaton, fixes_all_paths, faithfulness_report, is_pseudo_free,
                         nucleus_closure, trivial_action, validate_action)
from sskg.groups import FiniteGroup, FreeAbelianGroup
from sskg.kgraph import Edge, Skeleton
from sskg.spec_io import build_odometer

from conftest import CORPUS_NAMES, load


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_corpus_actions_validate(name):
    sk, a = load(name)
    assert validate_action(a, sk).ok


def test_odometer_action_adds_one_with_carry():
    sk, a = build_odometer([2, 3])
    one = (1,)
    mu = sk.path(["x1_1", "x1_1", "x1_0"], "v")
    img, res = a.act_on_path(one, mu)
    assert img.edges == ("x1_0", "x1_0", "x1_1")
    assert res == (0,)
    img, res = a.act_on_path(one, sk.path(["x1_1", "x1_1"], "v"))
    assert img.edges == ("x1_0", "x1_0") and res == (1,)


def test_inverse_generator_undoes_generator():
    sk, a = build_odometer([2, 4])
    for p in [(1, 1), (2, 1), (0, 2)]:
        for mu in sk.enumerate_paths("v", p):
            img, res = a.act_on_path((1,), mu)
            back, res2 = a.act_on_path((-1,), img)
            assert back == mu
            assert a.group.mul(res, res2) == (0,) or a.group.mul(res2, res) == (0,)


def test_wrong_carry_breaks_square_compatibility():
    sk, good = build_odometer([2, 3])
    em = {}
    for (gi, e), (img, _) in good.edge_map.items():
        em[(gi, e)] = (img, (1,) if e.endswith("_0") else (0,))
    rep = validate_action(ActionAutomaton(good.group, sk, em), sk)
    assert "square_compatibility" in rep.kinds()


def test_color_changing_action_is_rejected():
    sk, good = build_odometer([2, 2])
    em = dict(good.edge_map)
    em[(0, "x1_0")] = ("x2_1", (0,))
    rep = validate_action(ActionAutomaton(good.group, sk, em), sk)
    assert "color" in rep.kinds()


def test_missing_image_is_incomplete():
    sk, good = build_odometer([2])
    em = dict(good.edge_map)
    del em[(0, "x1_0")]
    rep = validate_action(ActionAutomaton(good.group, sk, em), sk)
    assert "incomplete" in rep.kinds()


def test_odometer_nucleus_is_small():
    _, a = build_odometer([2, 4, 8])
    nuc = nucleus_closure(a)
    assert not nuc.cap_exceeded
    assert nuc.elements == {(0,), (1,), (-1,)}


def test_doubling_restriction_exceeds_nucleus_cap():
    sk = Skeleton(1, ["v"], [Edge("e", 1, "v", "v")])
    a = ActionAutomaton(FreeAbelianGroup(1), sk, {(0, "e"): ("e", (2,))})
    nuc = nucleus_closure(a, cap=50)
    assert nuc.cap_exceeded
    assert len(nuc) == 50
    assert is_pseudo_free(a, nucleus=nuc).value == "unknown"


def test_trivial_z2_is_pseudo_free_but_not_strongly_locally_faithful():
    sk, a = load("trivial_z2")
    assert is_pseudo_free(a, sk).value == "yes"
    rep = faithfulness_report(a, sk)
    assert rep["strongly_locally_faithful"].value == "no"
    assert rep["locally_faithful"].value == "no"
    assert rep["fv"].value == "yes"


def test_trivial_restriction_is_not_pseudo_free():
    sk = Skeleton(1, ["v"], [Edge("x", 1, "v", "v"), Edge("y", 1, "v", "v")])
    a = trivial_action(sk, FiniteGroup.cyclic(2), restriction_is_self=False)
    v = is_pseudo_free(a, sk)
    assert v.value == "no"
    assert v.witness["path"].edges in {("x",), ("y",)}


@pytest.mark.parametrize("n", [[2], [2, 3], [2, 4]])
def test_odometers_are_pseudo_free_and_strongly_locally_faithful(n):
    sk, a = build_odometer(n)
    assert is_pseudo_free(a, sk).value == "yes"
    rep = faithfulness_report(a, sk)
    assert rep["strongly_locally_faithful"].value == "yes"
    assert not fixes_all_paths(a, (1,), "v")


def test_odometer_2_3_worked_actions():
    sk, a = build_odometer([2, 3])
    img, res = a.act_on_path((1,), sk.edge_path("x1_1"))
    assert img.edges == ("x1_0",) and res == (1,)
    img, res = a.act_on_path((1,), sk.path(["x1_0", "x1_1"], "v"))
    assert img.edges == ("x1_1", "x1_1") and res == (0,)


def test_generator_moves_every_color_one_edge():
    sk, a = build_odometer([2, 3])
    rep = faithfulness_report(a, sk)
    p = rep["strongly_locally_faithful"].witness["[1]@v"]
    assert sum(p) == 1
    assert all(a.act_on_path((1,), mu)[0] != mu for mu in sk.enumerate_paths("v", tuple(p)))
