"""The agreement harness itself: self-tests and counterexample machinery."""

from mucheck import compare, corpus, semantics
from mucheck.semantics import OMEGA


def small_sentences():
    return corpus.all_sentences(3, 1)[::4] + corpus.random_sentences(6, 1, 7, 2)


def test_main_sweep_all_pass():
    tallies = compare.run_main_sweep(small_sentences(), max_states=2,
                                     gammas=(1, 2, OMEGA), workers=1)
    for name, tally in tallies.items():
        assert tally.failures == 0, name
        assert tally.instances > 0, name


def test_broken_bounded_engine_is_caught(monkeypatch):
    """Harness self-test: a deliberately wrong engine must produce failures
    and a counterexample."""
    real = semantics.eval_bounded

    def broken(model, sent, bound, node=0, assignment=None):
        out = real(model, sent, bound, node, assignment)
        if bound == 2:  # flip one state's verdict
            first = model.states[0]
            return out ^ frozenset({first})
        return out

    monkeypatch.setattr(semantics, "eval_bounded", broken)
    tallies = compare.run_main_sweep(small_sentences()[:10], max_states=1,
                                     gammas=(2,), workers=1)
    tally = tallies["game-vs-bounded"]
    assert tally.failures > 0
    assert tally.cex is not None
    assert tally.cex["property"] == "game-vs-bounded"


def test_broken_game_rule_is_caught(monkeypatch):
    from mucheck.game import EvalGame, _WON_A, _WON_E
    from mucheck import formula as F
    real = EvalGame._status

    def broken(self, ipos):
        st = real(self, ipos)
        if self._kind[ipos[1]] == F.NEGPROP:  # negated literals lie
            return _WON_E if st == _WON_A else _WON_A if st == _WON_E else st
        return st

    monkeypatch.setattr(EvalGame, "_status", broken)
    tallies = compare.run_main_sweep(small_sentences()[:12], max_states=1,
                                     gammas=(1, 2), workers=1)
    assert tallies["game-vs-bounded"].failures > 0


def test_minimizer_shrinks_counterexample(monkeypatch):
    real = semantics.eval_bounded

    def broken(model, sent, bound, node=0, assignment=None):
        out = real(model, sent, bound, node, assignment)
        if bound == 2:
            return out ^ frozenset({model.states[0]})
        return out

    monkeypatch.setattr(semantics, "eval_bounded", broken)
    tallies = compare.run_main_sweep(small_sentences()[:10], max_states=2,
                                     gammas=(2,), workers=1)
    cex = tallies["game-vs-bounded"].cex
    assert cex is not None
    smaller = compare.minimize_counterexample(cex)
    assert len(smaller["model"]["edges"]) <= len(cex["model"]["edges"])
    # the minimized instance still reproduces the disagreement
    assert not compare._recheck(smaller)


def test_ar_sweep_small():
    tallies = compare.run_ar_sweep(max_states=2, workers=1)
    for name in ("ar-chi", "fbounded-chi", "fbounded-decrements"):
        assert tallies[name].failures == 0
        assert tallies[name].instances > 0


def test_mode_sweep_small():
    sents = corpus.all_sentences(2, 1)
    tallies = compare.run_mode_sweep(sents, max_states=2, gammas=(1, 2),
                                     workers=1)
    assert tallies["greedy-exhaustive"].failures == 0
    assert tallies["canonical-fullmap"].failures == 0


def test_fullmap_winner_matches_solver(m1, afp):
    from mucheck.game import EvalGame
    for gamma in (1, 2, 3):
        for w in m1.states:
            assert compare.fullmap_winner(m1, w, afp, gamma) \
                == EvalGame(m1, w, afp, gamma).solve("exhaustive")[0]


def test_normalize_checks_pass():
    sents = corpus.random_sentences(6, 2, 8, 2)
    models = [corpus.random_model(__import__("random").Random(4), 2)]
    tallies = compare.run_normalize_checks(sents, models)
    assert tallies["normalize-soundness"].failures == 0


def test_sampled_larger_models_deterministic():
    sents = small_sentences()[:6]
    a = compare.run_main_sweep(sents, max_states=4, gammas=(1, 2),
                               workers=1, seed=7, samples_per_size=5)
    b = compare.run_main_sweep(sents, max_states=4, gammas=(1, 2),
                               workers=1, seed=7, samples_per_size=5)
    for name in a:
        assert (a[name].instances, a[name].failures) \
            == (b[name].instances, b[name].failures)
        assert a[name].failures == 0


def test_broken_engine_fails_compare_cli(monkeypatch, capsys):
    from mucheck.cli import main
    real = semantics.eval_bounded

    def broken(model, sent, bound, node=0, assignment=None):
        out = real(model, sent, bound, node, assignment)
        if bound == 2:
            return out ^ frozenset({model.states[0]})
        return out

    monkeypatch.setattr(semantics, "eval_bounded", broken)
    code = main(["compare", "--max-states", "1", "--max-nodes", "2",
                 "--random-count", "2", "--gammas", "2",
                 "--ar-max-states", "1", "--workers", "1"])
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL" in out and "counterexample" in out


def test_run_compare_report_and_budget():
    report = compare.run_compare(max_states=1, max_nodes=2, random_count=4,
                                 gammas=(1, 2), ar_max_states=1,
                                 mode_max_nodes=1, mode_random=2,
                                 mode_extra_models=1, workers=1)
    assert report.all_passed()
    text = report.format_text()
    assert "game-vs-bounded" in text
    data = report.to_json_dict()
    assert data["all_passed"] is True
    # an exhausted budget yields a partial report
    partial = compare.run_compare(max_states=1, max_nodes=2, random_count=4,
                                  gammas=(1, 2), ar_max_states=1,
                                  mode_max_nodes=1, mode_random=2,
                                  mode_extra_models=1, workers=1,
                                  budget=0.0)
    assert partial.caps_hit
