#!/usr/bin/env python3
"""Ruling polynomials of closed fronts and transfer matrices of open tangles.

A front is a word of basic letters read left to right.  Rulings are
graded pairings of strands that may switch at equal-degree crossings;
the ruling polynomial collects z^{switches - right cusps} over all of
them.  The same combinatorics factors through letter-by-letter transfer
matrices over Z[z^{+-1}], which is what makes long words cheap.
"""

from cycount import corpus
from cycount.tangles import (
    enumerate_tangle_rulings,
    parse_tangle,
    ruling_polynomial,
    ruling_transfer,
    word_from_ops,
)

print("== closed fronts ==")
for name, word in [
    ("unknot", corpus.unknot_word()),
    ("hopf k=0", corpus.hopf_word(0, 0)),
    ("hopf k=1 (Z/4)", corpus.hopf_word(1, 2)),
    ("trefoil", corpus.trefoil_word()),
    ("two stacked unknots", corpus.stacked_unknots_word()),
]:
    print(f"{name:22s} P(z) = {ruling_polynomial(word)}")

print()
print("== the same values through the tangle DSL ==")
src = """
mod 0
left:
L 1 -1
L 1 0
X 2
X 2
X 2
R 1
R 1
"""
trefoil = parse_tangle(src)
for tr in enumerate_tangle_rulings(trefoil):
    print(f"  ruling with switches at letters {tr.switches}")
print("polynomial:", ruling_polynomial(trefoil))

print()
print("== an open tangle: one equal-degree crossing ==")
word = word_from_ops(0, (1, 0, 0, -1), [("X", 2)])
mat = ruling_transfer(word)
print("rows (rulings of the left boundary):", [r.pairs for r in mat.rows])
print("cols (rulings of the right boundary):", [c.pairs for c in mat.cols])
for i, row in enumerate(mat.entries):
    print(" ", [str(e) for e in row])
print("the z entry marks the switch; the 1 entries are return/departure")
