# Formulas and models: the two inputs every engine consumes.
#
# Run as: python demos/01_formulas_and_models.py

from mucheck import (dual, generate_family, load_model, normalize, parse,
                     render, build_index)

# ---------------------------------------------------------------------------
# Parsing and rendering.
#
# The grammar is plain ASCII: mu/nu binders with a dot, <> and [] for the
# modalities, | & for the connectives, ! only on propositions.  Binder
# scope extends as far right as possible.

afp = parse("mu X. (p | []X)")
print("parsed:   ", render(afp))

nested = parse("nu X. [] mu Y. (<>Y | (p & X))")
print("nested:   ", render(nested))
print("round trip holds:", parse(render(nested)) == nested)

# Free labels are rejected unless you opt in for library use.
try:
    parse("mu X. Y")
except Exception as exc:
    print("free label:", exc)

# ---------------------------------------------------------------------------
# Normalization and duality.
#
# Binder names must be distinct before the game engines index a sentence;
# normalize renames later binders with numeric suffixes.

clashing = parse("(mu X. p | X) & (mu X. q | X)")
print("normalized:", render(normalize(clashing)))

print("dual of afp:", render(dual(afp)))
print("dual is an involution:", dual(dual(afp)) == afp)

# ---------------------------------------------------------------------------
# The syntax index: reference formulas and binder ancestry.

idx = build_index(nested)
for node, rf in sorted(idx.rf.items()):
    print(f"label at {idx.node_path[node]} refers to the binder at "
          f"{idx.node_path[rf]}")

# ---------------------------------------------------------------------------
# Models come from JSON or from the generated families.

m1 = load_model('{"states": ["a", "b"], "edges": [["a", "b"], ["b", "b"]],'
                ' "val": {"p": ["b"]}}')
print("loaded m1:", m1.states, "successors of a:", m1.successors("a"))

star = generate_family("starN", 3)
print("starN(3): ", star.states)
print("  hub edges:", [e for e in star.relation if e[0] == "w_0"])

dagger = generate_family("daggerN", 3)
print("daggerN(3) moves p to:", sorted(dagger.states_true("p")))
