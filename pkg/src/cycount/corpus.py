"""
Shipped tangle corpus: the standard closed fronts, identity words, a
battery of basic letters, and seeded random valid words.
"""

from __future__ import annotations

import itertools
import random

from .complexes import GradedPointSet, deg_reduce
from .tangles import (
    TangleWord,
    apply_letter,
    enumerate_set_rulings,
    identity_word,
    make_letter,
    word_from_ops,
)


def unknot_word(m: int = 0) -> TangleWord:
    """Standard front of the graded unknot: one left cusp, one right cusp."""
    return word_from_ops(m, (), [("L", 1, -1), ("R", 1)])


def hopf_word(k: int = 0, m: int = 0) -> TangleWord:
    """Hopf link front; the grading of the lower component is shifted by k."""
    return word_from_ops(
        m, (), [("L", 1, -1), ("L", 1, k), ("X", 2), ("X", 2), ("R", 1), ("R", 1)]
    )


def stacked_unknots_word(m: int = 0) -> TangleWord:
    """Two disjoint unknots stacked in one connected span of the front."""
    return word_from_ops(m, (), [("L", 1, -1), ("L", 1, 3), ("R", 1), ("R", 1)])


def trefoil_word(m: int = 0) -> TangleWord:
    """Right-handed Legendrian trefoil in plat position (three crossings)."""
    return word_from_ops(
        m,
        (),
        [("L", 1, -1), ("L", 1, 0), ("X", 2), ("X", 2), ("X", 2), ("R", 1), ("R", 1)],
    )


def basic_letter_words(m: int, max_strands: int = 6, max_gap: int = 3,
                       vectors_per_case: int = 2):
    """Single-letter words covering every (kind, strand count, position, gap).

    Crossings are parameterized by the degree gap l of the two crossing
    strands; for each combination the remaining strand degrees are chosen
    deterministically to maximize the number of boundary rulings (most
    rulings = strongest check), with a window of representative degrees.
    """
    window = range(0, 2 * m) if m > 0 else range(-1, 3)
    words = []
    for n in range(2, max_strands + 1):
        pool = list(itertools.product(window, repeat=n - 2))
        for k in range(1, n):
            gaps = range(-max_gap, max_gap + 1)
            if m > 0:
                gaps = range(0, min(2 * m, 2 * max_gap + 1))
            for gap in gaps:
                candidates = []
                for rest in pool:
                    degs = list(rest[: k - 1]) + [gap, 0] + list(rest[k - 1 :])
                    # place the crossing strands at degrees (gap, 0)
                    pts = GradedPointSet(m, tuple(degs))
                    candidates.append((len(enumerate_set_rulings(pts)), degs))
                candidates.sort(key=lambda t: (-t[0], t[1]))
                for count, degs in candidates[:vectors_per_case]:
                    if count == 0:
                        continue
                    words.append(word_from_ops(m, degs, [("X", k)]))
        # cusps: representative degree vectors around each position
        for n_local, kind in ((n, "R"), (n - 2, "L")):
            if kind == "R":
                for i in range(1, n):
                    degs = _cusp_degrees(m, n, i)
                    words.append(word_from_ops(m, degs, [("R", i)]))
            else:
                if n_local < 0:
                    continue
                for i in range(1, n_local + 2):
                    degs = _plain_degrees(m, n_local)
                    words.append(word_from_ops(m, degs, [("L", i, 0)]))
    return words


def _cusp_degrees(m: int, n: int, i: int):
    """Degrees admitting a right cusp at i, alternating elsewhere for rulings."""
    degs = []
    for j in range(1, n + 1):
        degs.append(1 if j % 2 else 0)
    degs[i - 1], degs[i] = 1, 0
    return tuple(degs)


def _plain_degrees(m: int, n: int):
    return tuple(1 if j % 2 else 0 for j in range(1, n + 1))


def random_words(
    count: int = 200,
    max_len: int = 12,
    m_choices=(0, 1, 2),
    seed: int = 20240,
    max_strands: int = 6,
):
    """Seeded stream of random valid words (open or closed)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = rng.choice(m_choices)
        n0 = rng.choice([0, 2, 3, 4])
        degs = tuple(rng.randrange(0, 2 * m) if m else rng.randint(-2, 2) for _ in range(n0))
        cur = GradedPointSet(m, degs)
        ops = []
        ok = True
        for _ in range(rng.randint(1, max_len)):
            n = len(cur)
            choices = []
            if n + 2 <= max_strands:
                choices.append("L")
            if n >= 2:
                choices.extend(["X", "X", "R"])
            if not choices:
                ok = False
                break
            kind = rng.choice(choices)
            if kind == "L":
                pos = rng.randint(1, n + 1)
                a = rng.randrange(0, 2 * m) if m else rng.randint(-2, 2)
                op = ("L", pos, a)
            elif kind == "X":
                pos = rng.randint(1, n - 1)
                op = ("X", pos)
            else:
                pos = rng.randint(1, n - 1)
                try:
                    apply_letter(cur, "R", pos)
                except Exception:
                    continue
                op = ("R", pos)
            try:
                cur = apply_letter(cur, op[0], op[1], op[2] if len(op) > 2 else None)
            except Exception:
                continue
            ops.append(op)
        if ok and ops:
            out.append(word_from_ops(m, degs, ops))
    return out


def identity_words(m_choices=(0, 1, 2)):
    words = []
    for m in m_choices:
        words.append(identity_word(m, (0, -1)))
        words.append(identity_word(m, (1, 0, 0, -1)))
        words.append(identity_word(m, ()))
    return words
