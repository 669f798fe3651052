"""AR solving, chi, and the position-model transformations."""

import json
import random

import pytest

from mucheck import formula as F
from mucheck.corpus import (all_ar_models, all_sentences, random_model,
                            random_sentences)
from mucheck.formula import dual, parse, render
from mucheck.game import ELOISE, EvalGame, GameLimitError
from mucheck.kripke import KripkeModel, generate_family, load_model
from mucheck.reduction import (VocabularyError, ar_winning_set,
                               build_position_model, chi, reduce_mc,
                               solve_ar)
from mucheck.semantics import OMEGA, eval_standard


def test_chi_round_trip():
    c = chi()
    assert F.parse(render(c)) == c
    assert c.size == 12
    assert chi() is chi()  # built once


def test_chi_defines_ar_on_two_state_models():
    for m in all_ar_models(2):
        assert ar_winning_set(m) == eval_standard(m, chi())


def test_dual_chi_complements_winning_set():
    for m in list(all_ar_models(2))[::3]:
        full = frozenset(m.states)
        assert eval_standard(m, dual(chi())) == full - ar_winning_set(m)


def test_solve_ar_micro_examples():
    m = KripkeModel(["s0", "s1"], [("s0", "s1")],
                    {"p_B": ["s1"], "q_B": ["s0"]})
    assert solve_ar(m, "s0") is True
    loop = KripkeModel(["s0"], [("s0", "s0")], {"p_B": [], "q_B": []})
    assert solve_ar(loop, "s0") is False
    dead = KripkeModel(["s0"], [], {"p_B": [], "q_B": []})
    assert solve_ar(dead, "s0") is True
    assert "s0" in eval_standard(dead, chi())


def test_solve_ar_vocabulary_violation(m1):
    with pytest.raises(VocabularyError):
        solve_ar(m1, "a")


def test_reduce_literal_examples(m1):
    reduced = build_position_model(m1, "a", parse("p"), 1)
    assert reduced.positions == 1
    m = reduced.model
    assert m.states_true("p_B") == frozenset()
    assert m.states_true("q_B") == frozenset({reduced.root})
    assert solve_ar(m, reduced.root) is False

    reduced = build_position_model(m1, "b", parse("p"), 1)
    assert reduced.model.states_true("p_B") == {reduced.root}
    assert solve_ar(reduced.model, reduced.root) is True


def test_reduce_afp_matches_game(m1, afp):
    reduced = build_position_model(m1, "a", afp, 2)
    assert solve_ar(reduced.model, reduced.root) is True
    winner, _ = EvalGame(m1, "a", afp, 2).solve()
    assert winner == ELOISE
    reduced1 = build_position_model(m1, "a", afp, 1)
    assert solve_ar(reduced1.model, reduced1.root) is False


def test_reduce_mc_examples(m1, afp, phi_star):
    reduced = reduce_mc(m1, "a", afp)
    assert solve_ar(reduced.model, reduced.root) is True
    reduced = reduce_mc(m1, "a", parse("mu X. X"))
    assert solve_ar(reduced.model, reduced.root) is False
    star3 = generate_family("starN", 3)
    reduced = reduce_mc(star3, "w_0", phi_star)
    assert solve_ar(reduced.model, reduced.root) \
        == ("w_0" in eval_standard(star3, phi_star))


def test_reduction_sweep_small():
    rng = random.Random(71)
    corpus = [s for s in all_sentences(4, 1)][::9] \
        + random_sentences(8, 14, 7, 2)
    for _ in range(6):
        m = random_model(rng, rng.randint(1, 2))
        for s in corpus:
            std = eval_standard(m, s)
            for w in m.states:
                for gamma in (1, 2, OMEGA):
                    red = build_position_model(m, w, s, gamma)
                    winner, _ = EvalGame(m, w, s, gamma).solve()
                    assert solve_ar(red.model, red.root) \
                        == (winner == ELOISE)
                red = reduce_mc(m, w, s)
                assert solve_ar(red.model, red.root) == (w in std)


def test_reduced_model_export_loadable(m1, afp, tmp_path):
    reduced = build_position_model(m1, "a", afp, 2)
    path = tmp_path / "red.json"
    reduced.save(path)
    data = json.loads(path.read_text())
    assert set(data) == {"states", "edges", "val", "root", "backmap"}
    again = load_model(path.read_bytes())
    assert set(again.valuation) == {"p_B", "q_B"}
    assert solve_ar(again, data["root"]) is True
    # back-map points each exported state at its game position
    entry = data["backmap"][data["root"]]
    assert entry["state"] == "a" and entry["node"] == "r"
    assert entry["clocks"] == {}


def test_reduced_names_are_stable(m1, afp):
    a = build_position_model(m1, "a", afp, 2)
    b = build_position_model(m1, "a", afp, 2)
    assert a.model == b.model and a.root == b.root
    assert a.root == "a|r|"


def test_reduced_graph_acyclic(m1, afp):
    reduced = build_position_model(m1, "a", afp, 3)
    index = {w: i for i, w in enumerate(reduced.model.states)}
    # DFS cycle check over the exported edges
    succ = {w: [] for w in reduced.model.states}
    for src, dst in reduced.model.relation:
        succ[src].append(dst)
    state = {}

    def visit(w):
        state[w] = "grey"
        for v in succ[w]:
            if state.get(v) == "grey":
                raise AssertionError("cycle in reduced model")
            if v not in state:
                visit(v)
        state[w] = "black"

    visit(reduced.root)
    assert index is not None


def test_tree_mode_unfolds(m1, afp):
    dag = build_position_model(m1, "a", afp, 2)
    tree = build_position_model(m1, "a", afp, 2, tree=True)
    assert tree.root == "t"
    assert tree.positions >= dag.positions
    in_deg = {}
    for _src, dst in tree.model.relation:
        in_deg[dst] = in_deg.get(dst, 0) + 1
    assert all(v == 1 for v in in_deg.values())  # a tree
    assert solve_ar(tree.model, tree.root) == solve_ar(dag.model, dag.root)


def test_tree_mode_respects_cap(m1, phi_star):
    with pytest.raises(GameLimitError):
        build_position_model(m1, "a", phi_star, 3, tree=True,
                             max_positions=40)


def test_ar_grid_family_solves():
    m = generate_family("ar-grid", 3)
    want = ar_winning_set(m)
    assert want == eval_standard(m, chi())
