from collections.abc import Sequence

import numpy as np

from buchi_rl.ltl.models import (
    Always,
    And,
    Atom,
    Eventually,
    Implies,
    LassoWord,
    Letter,
    LtlFormula,
    Next,
    Not,
    Or,
    TrueConst,
    Until,
)


def _until(word: LassoWord, hold: list[bool], goal: list[bool]) -> list[bool]:
    # Least fixpoint of  v[i] = goal[i] or (hold[i] and v[succ(i)]).
    n = len(word)
    start = len(word.stem)
    value = [False] * n
    for _ in range(2):
        for i in range(n - 1, start - 1, -1):
            value[i] = goal[i] or (hold[i] and value[word.successor(i)])
    for i in range(start - 1, -1, -1):
        value[i] = goal[i] or (hold[i] and value[i + 1])
    return value


def _evaluate(f: LtlFormula, word: LassoWord) -> list[bool]:
    n = len(word)
    letters = word.stem + word.loop
    match f:
        case TrueConst():
            return [True] * n
        case Atom(name):
            return [name in x for x in letters]
        case Not(operand):
            return [not v for v in _evaluate(operand, word)]
        case And(left, right):
            lhs, rhs = _evaluate(left, word), _evaluate(right, word)
            return [a and b for a, b in zip(lhs, rhs)]
        case Or(left, right):
            lhs, rhs = _evaluate(left, word), _evaluate(right, word)
            return [a or b for a, b in zip(lhs, rhs)]
        case Implies(left, right):
            lhs, rhs = _evaluate(left, word), _evaluate(right, word)
            return [(not a) or b for a, b in zip(lhs, rhs)]
        case Next(operand):
            inner = _evaluate(operand, word)
            return [inner[word.successor(i)] for i in range(n)]
        case Until(left, right):
            return _until(word, _evaluate(left, word), _evaluate(right, word))
        case Eventually(operand):
            return _until(word, [True] * n, _evaluate(operand, word))
        case Always(operand):
            negated = [not v for v in _evaluate(operand, word)]
            return [not v for v in _until(word, [True] * n, negated)]
    raise TypeError(f"not an LTL formula: {f!r}")


def lasso_satisfies(f: LtlFormula, w: LassoWord) -> bool:
    """Whether the infinite word stem·loop^ω satisfies `f`."""
    return _evaluate(f, w)[0]


def shift(w: LassoWord, k: int = 1) -> LassoWord:
    """The suffix of `w` starting at position `k`."""
    for _ in range(k):
        if w.stem:
            w = LassoWord(w.stem[1:], w.loop)
        else:
            w = LassoWord((), w.loop[1:] + w.loop[:1])
    return w


def random_letter(rng: np.random.Generator, ap: Sequence[str]) -> Letter:
    mask = rng.random(len(ap)) < 0.5
    return frozenset(p for p, keep in zip(ap, mask) if keep)


def random_lasso(
    rng: np.random.Generator,
    ap: Sequence[str],
    max_stem: int = 6,
    max_loop: int = 6,
) -> LassoWord:
    stem_len = int(rng.integers(0, max_stem + 1))
    loop_len = int(rng.integers(1, max_loop + 1))
    stem = tuple(random_letter(rng, ap) for _ in range(stem_len))
    loop = tuple(random_letter(rng, ap) for _ in range(loop_len))
    return LassoWord(stem, loop)
