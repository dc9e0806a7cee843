"""
Acceptance suites: one function per criterion, shared by the CLI and the
test suite.  Each returns a SuiteResult with pass/fail, a detail line,
and the first counterexample when one exists.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import corpus, fq
from .augcount import (
    global_object_oracle,
    link_invariant,
    verify_main_theorem,
)
from .complexes import (
    GradedPointSet,
    Ruling,
    barannikov_form,
    classify_to_ruling,
    deg_eq,
)
from .hall import (
    HallElement,
    check_associativity,
    heart_embedding_check,
    twist_reading_check,
)
from .instances import (
    aut_order_formula,
    build_root_nilpotent,
    build_stable_nakayama,
    classical_hall_numbers,
    cone_oracle_projective_model,
    normalize_partition,
    partition_size,
)
from .laurent import LaurentPoly
from .quadext import QuadExt, eval_z
from .tangles import (
    enumerate_set_rulings,
    enumerate_tangle_rulings,
    ruling_polynomial,
    ruling_transfer,
)


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str
    counterexample: dict | None = None
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(*a, **kw):
        t0 = time.time()
        res = fn(*a, **kw)
        res.seconds = time.time() - t0
        return res

    return wrapper


@_timed
def suite_unknot(q_list=(2, 3, 5)) -> SuiteResult:
    """Criterion 1: unknot invariant, evaluation identity, census."""
    w = corpus.unknot_word()
    for q in q_list:
        want = QuadExt.sqrt_q_pow(q, 1) / QuadExt.rational(q, q - 1)
        inv = link_invariant(w, q)
        if inv != want or inv != eval_z(LaurentPoly.z_pow(-1), q):
            return SuiteResult(
                "unknot", False, f"invariant mismatch at q={q}",
                {"q": q, "got": inv.to_string(), "want": want.to_string()},
            )
        if ruling_polynomial(w) != LaurentPoly.z_pow(-1):
            return SuiteResult("unknot", False, "ruling polynomial is not z^-1")
        census = global_object_oracle(w, q)
        if census.as_multiset() != [(q - 1, 1, 1)] or census.total != inv:
            return SuiteResult(
                "unknot", False, f"census mismatch at q={q}",
                {"q": q, "census": census.as_multiset()},
            )
    return SuiteResult("unknot", True, f"q in {tuple(q_list)}: value, census, eval agree")


@_timed
def suite_hopf_k0(q_list=(2, 3, 5), census_q=(2, 3)) -> SuiteResult:
    """Criterion 2: Hopf link with k = 0."""
    w = corpus.hopf_word(0, 0)
    for q in q_list:
        want = QuadExt.rational(q, Fraction(q * q - q + 1, (q - 1) ** 2))
        inv = link_invariant(w, q)
        if inv != want:
            return SuiteResult(
                "hopf-k0", False, f"invariant mismatch at q={q}",
                {"q": q, "got": inv.to_string(), "want": want.to_string()},
            )
    for q in census_q:
        census = global_object_oracle(w, q)
        want_rows: dict = {}
        for aut, gam, mult in [((q - 1) ** 2, 0, 1), (q - 1, 0, q)]:
            want_rows[(aut, gam)] = want_rows.get((aut, gam), 0) + mult
        got_rows: dict = {}
        for aut, gam, mult in census.as_multiset():
            got_rows[(aut, gam)] = got_rows.get((aut, gam), 0) + mult
        if got_rows != want_rows or census.total != link_invariant(w, q):
            return SuiteResult(
                "hopf-k0", False, f"census mismatch at q={q}",
                {"q": q, "census": census.as_multiset()},
            )
    return SuiteResult("hopf-k0", True, "value (q^2-q+1)/(q-1)^2 and paper census")


@_timed
def suite_hopf_nonzero(q_list=(2, 3, 5), census_q=(2, 3), m_list=(1, 2, 3)) -> SuiteResult:
    """Criterion 3: Hopf with k != 0: value q/(q-1)^2 and gamma regimes."""
    checked = 0
    for m in m_list:
        for k in range(1, 2 * m):
            w = corpus.hopf_word(k, m)
            for q in q_list:
                want = QuadExt.rational(q, Fraction(q, (q - 1) ** 2))
                if link_invariant(w, q) != want:
                    return SuiteResult(
                        "hopf-nonzero", False, f"invariant mismatch k={k} m={m} q={q}"
                    )
            if k % (2 * m):
                want_gamma = 6 if (m == 1 and k % (2 * m) in (1, 2 * m - 1)) else (
                    4 if k % (2 * m) in (1, 2 * m - 1) else 2
                )
                for q in census_q:
                    census = global_object_oracle(w, q)
                    if (
                        len(census.rows) != 1
                        or census.rows[0].gamma != want_gamma
                        or census.total != link_invariant(w, q)
                    ):
                        return SuiteResult(
                            "hopf-nonzero", False,
                            f"gamma regime mismatch k={k} m={m} q={q}",
                            {"census": census.as_multiset(), "want_gamma": want_gamma},
                        )
            checked += 1
    return SuiteResult(
        "hopf-nonzero", True, f"{checked} (k, m) pairs: q/(q-1)^2 and gamma regimes"
    )


@_timed
def suite_basic_tangles(q_list=(2, 3), m_list=(0, 1, 2), max_strands=6, max_gap=3) -> SuiteResult:
    """Criterion 4: the object-counting functor agrees with the evaluated
    ruling functor on every basic letter of the battery."""
    words = 0
    entries = 0
    for m in m_list:
        for w in corpus.basic_letter_words(m, max_strands=max_strands, max_gap=max_gap):
            rep = verify_main_theorem(w, q_list)
            words += 1
            entries += rep.checked
            if not rep.ok:
                return SuiteResult(
                    "basic-tangles", False,
                    f"mismatch on {[(t.kind, t.pos) for t in w.letters]} m={m}",
                    rep.failures[0],
                )
    return SuiteResult(
        "basic-tangles", True, f"{words} letters, {entries} matrix entries, exact"
    )


@_timed
def suite_transfer(count=200, max_len=12, seed=20240) -> SuiteResult:
    """Criterion 5: transfer matrices match the direct ruling sweep."""
    words = list(corpus.random_words(count=count, max_len=max_len, seed=seed))
    words += [corpus.unknot_word(m) for m in (0, 1, 2)]
    words += [corpus.hopf_word(k, m) for m in (0, 1, 2) for k in (0, 1)]
    words += [corpus.trefoil_word(0)] + corpus.identity_words()
    for w in words:
        rt = ruling_transfer(w)
        agg: dict = {}
        for tr in enumerate_tangle_rulings(w):
            key = (tr.left, tr.right)
            agg[key] = agg.get(key, LaurentPoly.zero()) + LaurentPoly.z_pow(
                tr.switch_count - w.right_cusp_count()
            )
        for i, r in enumerate(rt.rows):
            for j, c in enumerate(rt.cols):
                if rt.entries[i][j] != agg.get((r, c), LaurentPoly.zero()):
                    return SuiteResult(
                        "transfer", False, "transfer/enumeration mismatch",
                        {"word": [(t.kind, t.pos) for t in w.letters]},
                    )
    return SuiteResult("transfer", True, f"{len(words)} words, exact agreement")


def _degree_windows(m):
    if m == 0:
        return [0, 1, 2, -1]
    return list(range(2 * m))


@_timed
def suite_barannikov(q_list=(2, 3), m_list=(0, 1, 2), max_points=4) -> SuiteResult:
    """Criterion 6: round-trip and exhaustive Barannikov census."""
    sets = 0
    objects = 0
    for m in m_list:
        window = _degree_windows(m)
        for n in range(0, max_points + 1, 2):
            for degs in itertools.product(window, repeat=n):
                if n and m == 0 and min(degs) != 0:
                    continue  # classes are shift-invariant; anchor at 0
                pts = GradedPointSet(m, degs)
                rulings = enumerate_set_rulings(pts)
                sets += 1
                for q in q_list:
                    for rho in rulings:
                        if classify_to_ruling(barannikov_form(rho, pts, q)) != rho:
                            return SuiteResult(
                                "barannikov", False, f"round-trip failure {degs} {rho}"
                            )
                    res = _barannikov_census(pts, q)
                    objects += res[0]
                    if res[1] is not None:
                        return SuiteResult(
                            "barannikov", False, f"census failure {degs} q={q}",
                            res[1],
                        )
    return SuiteResult(
        "barannikov", True, f"{sets} graded sets, {objects} minimal objects classified"
    )


def _barannikov_census(pts, q):
    """Every minimal object classifies to a ruling and lies in the orbit of
    its normal form; orbits are enumerated by flag-group BFS."""
    from .augcount import _flag_group_generators

    n = len(pts)
    m = pts.m
    degs = pts.degrees
    positions = [
        (i, j) for j in range(n) for i in range(j) if deg_eq(degs[i], degs[j] + 1, m)
    ]
    valid: dict[bytes, np.ndarray] = {}
    for values in itertools.product(range(q), repeat=len(positions)):
        d = np.zeros((n, n), dtype=np.int64)
        for (i, j), v in zip(positions, values):
            d[i, j] = v
        if np.any((d @ d) % q) or 2 * fq.rank(d, q) != n:
            continue
        valid[d.tobytes()] = d
    rulings = enumerate_set_rulings(pts)
    if not valid and not rulings:
        return 0, None
    # group by classification
    by_rho: dict = {}
    eye = np.eye(n, dtype=np.int64)
    flag = tuple(eye[:, : k + 1] for k in range(n - 1))
    from .complexes import FlaggedComplex

    for key, d in valid.items():
        x = FlaggedComplex(q, m, degs, d, (flag,), (pts,), validate=False)
        rho = classify_to_ruling(x)
        by_rho.setdefault(rho, set()).add(key)
    if set(by_rho) != set(rulings):
        return len(valid), {"reason": "classification misses rulings"}
    gens = _flag_group_generators(degs, m, q)
    for rho, keys in by_rho.items():
        seed = barannikov_form(rho, pts, q).d.tobytes()
        orbit = {seed}
        frontier = [valid[seed]]
        while frontier:
            d = frontier.pop()
            for g, ginv in gens:
                d2 = ((g @ d @ ginv) % q).tobytes()
                if d2 not in orbit:
                    orbit.add(d2)
                    frontier.append(valid[d2])
        if orbit != keys:
            return len(valid), {
                "reason": "a classification class is not a single orbit",
                "rho": rho.pairs,
            }
    return len(valid), None


@_timed
def suite_hall_associativity(q_list=(2, 3), nakayama_m=(3, 4)) -> SuiteResult:
    """Criterion 7: exact associativity on both instances."""
    total = 0
    for q in q_list:
        for N in nakayama_m:
            M = build_stable_nakayama(q, N)
            rep = check_associativity(M, M.indecomposables(), dim_bound=24)
            total += rep.checked
            if not rep.ok:
                return SuiteResult(
                    "hall-associativity", False, f"nakayama N={N} q={q}",
                    rep.failures[0],
                )
    M = build_root_nilpotent(2)
    gens = [M.stalk(p, d) for p in [(1,), (2,)] for d in (0, 1)]
    rep = check_associativity(M, gens, dim_bound=6)
    total += rep.checked
    if not rep.ok:
        return SuiteResult("hall-associativity", False, "root-nilpotent q=2", rep.failures[0])
    return SuiteResult("hall-associativity", True, f"{total} ordered triples associate")


def _partitions(n, maxp=None):
    if n == 0:
        yield ()
        return
    maxp = n if maxp is None else maxp
    for p in range(min(n, maxp), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


def heart_oracle(model, q):
    """Twisted classical Hall coefficients from brute-force submodule counts."""

    def oracle(z, x):
        lz, lx = z[0], x[0]
        twist = QuadExt.sqrt_q_pow(
            q, model.heart_hom_dim(lz, lx) - model.heart_ext_dim(lz, lx)
        )
        out = {}
        for y in _partitions(partition_size(lz) + partition_size(lx)):
            g = classical_hall_numbers(q, lz, lx, y)
            if not g:
                continue
            coef = QuadExt.rational(
                q,
                Fraction(
                    g * aut_order_formula(lz, q) * aut_order_formula(lx, q),
                    aut_order_formula(y, q),
                ),
            )
            out[(normalize_partition(y), ())] = coef * twist
        return out

    return oracle


@_timed
def suite_heart(q_list=(2, 3), max_size=4) -> SuiteResult:
    """Criterion 8: heart embedding against the classical Hall oracle."""
    parts = [p for n in range(1, max_size) for p in _partitions(n)]
    pairs_checked = 0
    for q in q_list:
        M = build_root_nilpotent(q)
        pairs = [
            (M.stalk(a, 0), M.stalk(b, 0))
            for a in parts
            for b in parts
            if partition_size(a) + partition_size(b) <= max_size
        ]
        rep = heart_embedding_check(M, pairs, heart_oracle(M, q))
        pairs_checked += rep.checked
        if not rep.ok:
            return SuiteResult("heart", False, f"q={q}", rep.failures[0])
    return SuiteResult(
        "heart", True, f"{pairs_checked} heart pairs match; d_0 vanishes throughout"
    )


@_timed
def suite_twist(q_list=(2, 3)) -> SuiteResult:
    """Criterion 9: twist of the CY reading on both instances."""
    total = 0
    M = build_root_nilpotent(2)
    gens = [M.stalk(p, d) for p in [(1,), (2,)] for d in (0, 1)]
    rep = twist_reading_check(M, [(z, x) for z in gens for x in gens], 1, 3)
    total += rep.checked
    if not rep.ok:
        return SuiteResult("twist", False, "root-nilpotent n=1 vs 3", rep.failures[0])
    for q in q_list:
        M = build_stable_nakayama(q, 3)
        g2 = M.indecomposables()
        rep = twist_reading_check(M, [(z, x) for z in g2 for x in g2], -1, -3)
        total += rep.checked
        if not rep.ok:
            return SuiteResult("twist", False, f"nakayama q={q} n=-1 vs -3", rep.failures[0])
    return SuiteResult("twist", True, f"{total} pairs twist by q^(k/2)<z,x>")


@_timed
def suite_cone_oracle(q=2) -> SuiteResult:
    """Criterion 10: six-term cone formula vs the literal mapping cone."""
    M = build_root_nilpotent(q)
    parts = [(1,), (2,), (1, 1), (2, 1)]
    stalks = [M.stalk(p, d) for p in parts for d in (0, 1)]
    checked = 0
    for z in stalks:
        for x in stalks:
            for delta in M.ext1_elements(z, x):
                checked += 1
                if M.cone(delta) != cone_oracle_projective_model(q, 5, delta):
                    return SuiteResult(
                        "cone-oracle", False, f"cone mismatch {z} {x}",
                        {"z": z, "x": x},
                    )
    import random

    rng = random.Random(11)
    mixed = [((1,), (1,)), ((2,), (1,)), ((1, 1), (1,)), ((1,), (2, 1))]
    for _ in range(60):
        z = rng.choice(mixed)
        x = rng.choice(mixed)
        deltas = list(M.ext1_elements(z, x))
        delta = rng.choice(deltas)
        checked += 1
        if M.cone(delta) != cone_oracle_projective_model(q, 6, delta):
            return SuiteResult("cone-oracle", False, "mixed-class cone mismatch")
    return SuiteResult("cone-oracle", True, f"{checked} extension elements agree")


ALL_SUITES = {
    "unknot": suite_unknot,
    "hopf-k0": suite_hopf_k0,
    "hopf-nonzero": suite_hopf_nonzero,
    "basic-tangles": suite_basic_tangles,
    "transfer": suite_transfer,
    "barannikov": suite_barannikov,
    "hall-associativity": suite_hall_associativity,
    "heart": suite_heart,
    "twist": suite_twist,
    "cone-oracle": suite_cone_oracle,
}


def run_suites(names=None, seed=20240):
    names = list(ALL_SUITES) if not names or names == ["all"] else names
    results = []
    for name in names:
        if name not in ALL_SUITES:
            raise KeyError(name)
        if name == "transfer":
            results.append(ALL_SUITES[name](seed=seed))
        else:
            results.append(ALL_SUITES[name]())
    return results
