# The semantic spectrum: standard, clock-bounded, two-counter, and free.
#
# Run as: python demos/03_semantics_spectrum.py

from mucheck import (OMEGA, approximant, eval_bounded, eval_standard,
                     f_value, generate_family, load_model, parse,
                     solve_fbounded, solve_free)

m1 = load_model('{"states": ["a", "b"], "edges": [["a", "b"], ["b", "b"]],'
                ' "val": {"p": ["b"]}}')
afp = parse("mu X. (p | []X)")

# ---------------------------------------------------------------------------
# Fixpoint approximants: the iterates of the binder's operator.  The
# least-fixpoint chain grows from the empty set and freezes once stable.

print("approximant chain for the eventually-p binder on m1:")
for step in range(4):
    states = sorted(approximant(m1, afp, 0, OMEGA, step))
    print(f"  step {step}: {states}")

# ---------------------------------------------------------------------------
# Bounded semantics truncates that chain.  On a finite model the omega
# bound (any finite clock) already equals the standard semantics, and so
# does the bound card(M).

print("\nbound 1:", sorted(eval_bounded(m1, afp, 1)))
print("bound 2:", sorted(eval_bounded(m1, afp, 2)))
print("omega:  ", sorted(eval_bounded(m1, afp, OMEGA)))
print("standard:", sorted(eval_standard(m1, afp)))

# On the dagger family the distance to p grows with n, so small bounds
# lose states one by one.
dagger = generate_family("daggerN", 6)
for bound in (2, 4, OMEGA):
    got = sorted(eval_bounded(dagger, afp, bound), key=dagger.state_index)
    print(f"daggerN(6) under bound {bound!s:>5}: {got}")

# ---------------------------------------------------------------------------
# The two-counter game: one budget per player, spent on loop returns.
# Budgets start at card(M)^k * size(formula).

print("\ntwo-counter budget f =", f_value(m1, afp, 1))
verdict, strategy = solve_fbounded(m1, "a", afp, 1)
print("two-counter verdict at a:", verdict,
      f"(strategy on {len(strategy)} positions)")

# ---------------------------------------------------------------------------
# Free semantics: no clocks at all.  Only literals and stuck players end
# the game, so self-referential formulas can leave both players without a
# winning strategy.

print("\nfree verdicts:")
for text, state in (("mu X. X", "a"), ("p", "b"), ("mu X. (p | []X)", "a")):
    print(f"  {text!r} at {state}: {solve_free(m1, state, parse(text))}")
