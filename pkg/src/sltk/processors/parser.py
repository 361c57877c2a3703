"""Greedy arc-standard dependency parsing.

Transitions over a (stack, buffer, arcs) state with the artificial root at
index 0 sitting at the stack bottom:

* ``SHIFT`` — move the first buffer token onto the stack;
* ``LEFT:<label>`` — attach the second-topmost stack token to the topmost
  one and pop it;
* ``RIGHT:<label>`` — attach the topmost stack token to the one below it
  and pop it.

A terminal state is ``stack == [0]`` with an empty buffer, at which point
every token has exactly one head and the arcs form a projective tree.  The
static oracle turns a gold projective tree into the transition sequence
that rebuilds it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from sltk.errors import ToolkitError

SHIFT = "SHIFT"
LEFT = "LEFT"
RIGHT = "RIGHT"


@dataclass
class ParserState:
    n_tokens: int
    stack: list[int] = field(default_factory=lambda: [0])
    buffer: list[int] = field(default_factory=list)
    arcs: list[tuple[int, int, str]] = field(default_factory=list)  # (head, dep, label)

    @classmethod
    def initial(cls, n_tokens: int) -> "ParserState":
        return cls(n_tokens, [0], list(range(1, n_tokens + 1)))

    @property
    def terminal(self) -> bool:
        return self.stack == [0] and not self.buffer

    def valid_transitions(self) -> list[str]:
        out = []
        if len(self.stack) >= 2:
            if self.stack[-2] != 0:
                out.append(LEFT)
            out.append(RIGHT)
        if self.buffer:
            out.append(SHIFT)
        return out

    def apply(self, transition: str) -> None:
        kind, _, label = transition.partition(":")
        if kind == SHIFT:
            self.stack.append(self.buffer.pop(0))
        elif kind == LEFT:
            dep = self.stack.pop(-2)
            self.arcs.append((self.stack[-1], dep, label))
        elif kind == RIGHT:
            dep = self.stack.pop()
            self.arcs.append((self.stack[-1], dep, label))
        else:
            raise ValueError(f"unknown transition {transition!r}")


def parser_oracle(heads: list[int], labels: list[str] | None = None) -> list[str]:
    """Static oracle: transition sequence reproducing the gold tree.

    ``heads[i]`` is the head (0 = root) of token ``i + 1``.  Raises
    ``E_NONPROJECTIVE`` when no transition sequence can rebuild the tree.
    """
    n = len(heads)
    labels = labels or ["dep"] * n
    head_of = {i + 1: heads[i] for i in range(n)}
    label_of = {i + 1: labels[i] for i in range(n)}
    n_deps = {i: 0 for i in range(n + 1)}
    for h in heads:
        n_deps[h] = n_deps.get(h, 0) + 1

    state = ParserState.initial(n)
    attached = {i: 0 for i in range(n + 1)}
    sequence: list[str] = []
    while not state.terminal:
        action = None
        if len(state.stack) >= 2:
            s0, s1 = state.stack[-1], state.stack[-2]
            if s1 != 0 and head_of[s1] == s0 and attached[s1] == n_deps[s1]:
                action = f"{LEFT}:{label_of[s1]}"
                attached[s0] += 1
            elif head_of[s0] == s1 and attached[s0] == n_deps[s0]:
                action = f"{RIGHT}:{label_of[s0]}"
                attached[s1] += 1
        if action is None:
            if not state.buffer:
                raise ToolkitError("E_NONPROJECTIVE",
                                   f"gold tree {heads} has no arc-standard derivation")
            action = SHIFT
        state.apply(action)
        sequence.append(action)
    return sequence


def apply_transitions(n_tokens: int, transitions: list[str]) -> list[tuple[int, int, str]]:
    state = ParserState.initial(n_tokens)
    for t in transitions:
        state.apply(t)
    if not state.terminal:
        raise ValueError("transition sequence does not reach a terminal state")
    return state.arcs
