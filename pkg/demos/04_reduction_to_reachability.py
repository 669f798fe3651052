# Model checking as alternating reachability.
#
# The game positions of any instance form a finite acyclic model over the
# vocabulary {p_B, q_B}; player B (Eloise) moves at q_B positions and
# wins on reaching p_B.  One fixed sentence, chi, defines the winning set
# of every such game, so checking any sentence reduces to checking chi on
# the exported position model.
#
# Run as: python demos/04_reduction_to_reachability.py

import json

from mucheck import (ELOISE, EvalGame, ar_winning_set, build_position_model,
                     chi, eval_standard, generate_family, load_model, parse,
                     reduce_mc, render, solve_ar)

print("chi =", render(chi()))

# ---------------------------------------------------------------------------
# The AR game on a hand-made arena: B moves at q_B states and must reach
# a p_B state; endless play favors A.

arena = load_model(json.dumps({
    "states": ["s0", "s1", "s2"],
    "edges": [["s0", "s1"], ["s0", "s2"], ["s1", "s0"], ["s2", "s2"]],
    "val": {"p_B": ["s1"], "q_B": ["s0"]},
}))
print("AR winning set:", sorted(ar_winning_set(arena)))
print("chi agrees:    ", sorted(eval_standard(arena, chi())))

# ---------------------------------------------------------------------------
# Reducing a bounded instance: the exported states are the game
# positions, named state|node-path|clocks.

m1 = load_model('{"states": ["a", "b"], "edges": [["a", "b"], ["b", "b"]],'
                ' "val": {"p": ["b"]}}')
afp = parse("mu X. (p | []X)")

reduced = build_position_model(m1, "a", afp, 2)
print(f"\nbounded instance -> {reduced.positions} positions, "
      f"root {reduced.root}")
print("B wins the reduced game:", solve_ar(reduced.model, reduced.root))
winner, _ = EvalGame(m1, "a", afp, 2).solve()
print("matches the game winner:", winner == ELOISE)

# ---------------------------------------------------------------------------
# Reducing an unbounded instance instantiates the bound at card(M), which
# already decides every fixpoint on a finite model.

star = generate_family("starN", 3)
phi = parse("nu X. [] mu Y. (<>Y | (p & X))")
reduced = reduce_mc(star, "w_0", phi)
print(f"\nunbounded instance -> {reduced.positions} positions")
print("B wins:", solve_ar(reduced.model, reduced.root),
      "| standard verdict:", "w_0" in eval_standard(star, phi))

# The export stays a perfectly ordinary model file: evaluating chi on it
# with the standard engine closes the loop.
again = load_model(json.dumps(reduced.to_json_dict()))
print("chi on the exported file:",
      reduced.root in eval_standard(again, chi()))
