"""Alternating reachability: the fixed sentence chi, the AR game solver,
and the transformations turning model-checking instances into AR instances
over the evaluation game's position graph.

An AR model speaks the vocabulary {p_B, q_B}.  Player B moves at q_B
states, wins on reaching a p_B state, a stuck player loses, and infinite
play favors A.  The exported position models label a game position with
p_B when it is a true literal and with q_B when its formula is a
disjunction, a diamond, a mu-binder, a mu-label, or a false literal, which
makes the AR game on the export play out exactly like the evaluation
game.
"""

import json

from . import formula as F
from .game import DEFAULT_MAX_POSITIONS, EvalGame, GameLimitError
from .kripke import KripkeModel
from .semantics import check_bound

P_B = "p_B"
Q_B = "q_B"

_CHI_TEXT = "mu X. (p_B | (q_B & <> X) | (! q_B & [] X))"
_CHI = None


class VocabularyError(Exception):
    """An AR model used propositions outside {p_B, q_B}."""


def chi():
    """The AR-defining sentence mu X.(p_B | (q_B & <>X) | (!q_B & []X))."""
    global _CHI
    if _CHI is None:
        _CHI = F.parse(_CHI_TEXT)
    return _CHI


def check_ar_vocabulary(model):
    extra = set(model.valuation) - {P_B, Q_B}
    if extra:
        raise VocabularyError(
            f"AR models only carry p_B and q_B, found {sorted(extra)}")


def ar_winning_set(model):
    """States from which B wins the alternating reachability game.

    Least fixed point of one backward step: p_B states win outright, q_B
    states win with some winning successor, other states win when they
    have no successor (the stuck mover is A) or when every successor wins.
    """
    check_ar_vocabulary(model)
    n = model.card
    succ = model._succ
    p_mask = model._val_mask.get(P_B, 0)
    q_mask = model._val_mask.get(Q_B, 0)
    preds = [[] for _ in range(n)]
    remaining = [0] * n
    for i in range(n):
        remaining[i] = len(succ[i])
        for j in succ[i]:
            preds[j].append(i)
    win = [False] * n
    queue = []
    for i in range(n):
        if p_mask >> i & 1 or (not q_mask >> i & 1 and not succ[i]):
            win[i] = True
            queue.append(i)
    head = 0
    while head < len(queue):
        j = queue[head]
        head += 1
        for i in preds[j]:
            if win[i]:
                continue
            if q_mask >> i & 1:
                win[i] = True
                queue.append(i)
            else:
                remaining[i] -= 1
                if remaining[i] == 0:
                    win[i] = True
                    queue.append(i)
    return frozenset(model.states[i] for i in range(n) if win[i])


def solve_ar(model, state):
    """True when B wins the AR game on (model, state)."""
    model.state_index(state)
    return state in ar_winning_set(model)


class ReducedModel:
    """An AR model over evaluation-game positions, plus the root position
    and a back-map from exported state names to position data."""

    __slots__ = ("model", "root", "backmap")

    def __init__(self, model, root, backmap):
        self.model = model
        self.root = root
        self.backmap = backmap

    @property
    def positions(self):
        return len(self.model.states)

    def to_json_dict(self):
        data = self.model.to_json_dict()
        data["root"] = self.root
        data["backmap"] = self.backmap
        return data

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")

    def __repr__(self):
        return f"ReducedModel({self.positions} positions, root={self.root!r})"


def _position_valuation(game, graph):
    """p_B / q_B flags per explored position."""
    kind = game.sentence.kind
    p_flags = []
    q_flags = []
    for si, node, _clocks in graph.pos_list:
        k = kind[node]
        if k == F.PROP or k == F.NEGPROP:
            true_here = game._val[game.sentence.name[node]] >> si & 1
            if k == F.NEGPROP:
                true_here = not true_here
            p_flags.append(bool(true_here))
            q_flags.append(not true_here)
        else:
            p_flags.append(False)
            q_flags.append(k == F.OR or k == F.DIAMOND or k == F.MU
                           or (k == F.LABEL and game._rf_is_mu[node]))
    return p_flags, q_flags


def build_position_model(model, state, sentence, bound, tree=False,
                         max_positions=DEFAULT_MAX_POSITIONS):
    """The AR instance of the bounded evaluation game (M, state, phi, bound).

    States are the reachable canonical game positions (a DAG); with
    ``tree`` set the DAG is unfolded into the full game tree, which only
    suits tiny instances.  The exported file is loadable as an ordinary
    model; the extra keys give the root position and the back-map.
    """
    check_bound(bound)
    game = EvalGame(model, state, sentence, bound, max_positions)
    graph = game._explore([state])
    graph.topo_order()  # rejects cyclic graphs
    p_flags, q_flags = _position_valuation(game, graph)
    paths = game.index.node_path

    def describe(ipos):
        si, node, clocks = ipos
        return {
            "state": model.states[si],
            "node": paths[node],
            "clocks": {game.sentence.name[b]: v for b, v in
                       zip(game.index.active_ancestors[node], clocks)},
        }

    if not tree:
        names = []
        for si, node, clocks in graph.pos_list:
            names.append(f"{model.states[si]}|{paths[node]}|"
                         + ",".join(map(str, clocks)))
        edges = []
        for i, row in enumerate(graph.succs):
            for j in row:
                edges.append((names[i], names[j]))
        val = {P_B: [names[i] for i in range(len(names)) if p_flags[i]],
               Q_B: [names[i] for i in range(len(names)) if q_flags[i]]}
        reduced = KripkeModel(names, edges, val)
        backmap = {names[i]: describe(graph.pos_list[i])
                   for i in range(len(names))}
        root = names[graph.pos_id[(model.state_index(state), 0, ())]]
        return ReducedModel(reduced, root, backmap)

    # Unfold the DAG into the game tree; names follow the move path.
    root_id = graph.pos_id[(model.state_index(state), 0, ())]
    names = []
    tree_pos = []
    edges = []
    stack = [(root_id, "t")]
    while stack:
        i, name = stack.pop()
        if len(names) >= max_positions:
            raise GameLimitError(
                f"position cap {max_positions} exceeded while unfolding")
        names.append(name)
        tree_pos.append(i)
        for k, j in enumerate(graph.succs[i]):
            child = f"{name}.{k}"
            edges.append((name, child))
            stack.append((j, child))
    val = {P_B: [nm for nm, i in zip(names, tree_pos) if p_flags[i]],
           Q_B: [nm for nm, i in zip(names, tree_pos) if q_flags[i]]}
    reduced = KripkeModel(names, edges, val)
    backmap = {nm: describe(graph.pos_list[i])
               for nm, i in zip(names, tree_pos)}
    return ReducedModel(reduced, "t", backmap)


def reduce_mc(model, state, sentence, tree=False,
              max_positions=DEFAULT_MAX_POSITIONS):
    """The unbounded model-checking instance as an AR instance.

    On a finite model, clock values up to card(M) already decide every
    fixpoint, so the export uses the bound max(1, card(M)).
    """
    return build_position_model(model, state, sentence,
                                max(1, model.card), tree, max_positions)
