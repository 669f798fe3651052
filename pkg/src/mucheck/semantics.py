"""Compositional semantics: standard fixed points and clock-bounded iterates.

The standard engine computes least/greatest fixed points by plain Kleene
iteration until stabilization and serves as the oracle for everything
else.  The bounded engine runs each fixpoint operator for at most a given
number of steps; the bound ``OMEGA`` admits every finite clock value,
which on a finite model collapses to ``max(1, card(M))`` steps because
every monotone operator on the model's powerset stabilizes within
``card(M)`` iterations.
"""

from . import formula as F


class _Omega:
    """The bound admitting all finite clock values."""

    __slots__ = ()

    def __repr__(self):
        return "omega"


OMEGA = _Omega()


class BoundError(Exception):
    """Raised for malformed clock bounds."""


class UnboundLabelError(Exception):
    """A free label was evaluated without an assignment for it."""


def check_bound(bound):
    if bound is OMEGA:
        return
    if isinstance(bound, bool) or not isinstance(bound, int) or bound < 1:
        raise BoundError(f"clock bound must be a positive integer or OMEGA, "
                         f"got {bound!r}")


def bound_iterations(bound, model):
    """Number of operator iterations the bound allows on ``model``."""
    check_bound(bound)
    if bound is OMEGA:
        return max(1, model.card)
    return bound


def parse_bound(text):
    """Read a bound from CLI text: a positive integer or 'omega' / 'w'."""
    if text in ("omega", "w"):
        return OMEGA
    try:
        value = int(text)
    except ValueError:
        raise BoundError(f"invalid clock bound {text!r}") from None
    check_bound(value)
    return value


def format_bound(bound):
    return "omega" if bound is OMEGA else str(bound)


def _env_from_assignment(model, assignment):
    if not assignment:
        return {}
    from .kripke import check_assignment
    check_assignment(model, assignment)
    return {name: model.states_to_mask(ws) for name, ws in assignment.items()}


def _eval_mask(model, sent, node, env, iters):
    """Evaluate the subformula at ``node`` to a state bitmask.

    ``env`` maps label names to masks.  ``iters`` is None for the standard
    semantics (iterate fixpoints until stable) or the maximum number of
    iterations under a finite bound.
    """
    kind = sent.kind[node]
    if kind == F.PROP:
        return model._val_mask.get(sent.name[node], 0)
    if kind == F.NEGPROP:
        return model._full_mask & ~model._val_mask.get(sent.name[node], 0)
    if kind == F.LABEL:
        try:
            return env[sent.name[node]]
        except KeyError:
            raise UnboundLabelError(
                f"no assignment for free label {sent.name[node]!r}") from None
    kids = sent.children[node]
    if kind == F.OR:
        return (_eval_mask(model, sent, kids[0], env, iters)
                | _eval_mask(model, sent, kids[1], env, iters))
    if kind == F.AND:
        return (_eval_mask(model, sent, kids[0], env, iters)
                & _eval_mask(model, sent, kids[1], env, iters))
    if kind == F.DIAMOND:
        target = _eval_mask(model, sent, kids[0], env, iters)
        out = 0
        for i, m in enumerate(model._succ_mask):
            if m & target:
                out |= 1 << i
        return out
    if kind == F.BOX:
        target = _eval_mask(model, sent, kids[0], env, iters)
        out = 0
        for i, m in enumerate(model._succ_mask):
            if not (m & ~target):
                out |= 1 << i
        return out
    # Mu / Nu: iterate the operator A |-> [[body]](X := A).
    name = sent.name[node]
    body = kids[0]
    current = 0 if kind == F.MU else model._full_mask
    remaining = -1 if iters is None else iters
    inner = dict(env)
    while remaining != 0:
        inner[name] = current
        updated = _eval_mask(model, sent, body, inner, iters)
        if updated == current:
            break
        current = updated
        if remaining > 0:
            remaining -= 1
    return current


def eval_standard(model, sent, node=0, assignment=None):
    """States satisfying the subformula at ``node`` (standard semantics)."""
    env = _env_from_assignment(model, assignment)
    return model.mask_to_states(_eval_mask(model, sent, node, env, None))


def eval_bounded(model, sent, bound, node=0, assignment=None):
    """States satisfying the subformula at ``node`` under a clock bound.

    Every fixpoint operator (at this node and below) runs for at most
    ``bound`` iterations; ``OMEGA`` runs to stabilization, which a finite
    model reaches within ``card(M)`` steps.
    """
    iters = bound_iterations(bound, model)
    env = _env_from_assignment(model, assignment)
    return model.mask_to_states(_eval_mask(model, sent, node, env, iters))


def approximant(model, sent, binder, bound, steps, assignment=None):
    """The ``steps``-th iterate of the bounded operator at a Mu/Nu node.

    Starts from the empty set for Mu and the full state set for Nu and
    applies the operator exactly ``steps`` times (no early stop), with the
    operator itself evaluated under ``bound``.
    """
    kind = sent.kind[binder]
    if kind not in F.BINDER_KINDS:
        raise ValueError("approximant requires a Mu or Nu node")
    if steps < 0:
        raise ValueError("approximant step count must be nonnegative")
    iters = bound_iterations(bound, model)
    env = _env_from_assignment(model, assignment)
    name = sent.name[binder]
    body = sent.children[binder][0]
    current = 0 if kind == F.MU else model._full_mask
    for _ in range(steps):
        env[name] = current
        current = _eval_mask(model, sent, body, env, iters)
    return model.mask_to_states(current)
