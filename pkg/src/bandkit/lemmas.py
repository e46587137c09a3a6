"""Brute-force verification of structural facts over a band catalogue.

Each check runs over every catalogue band up to a given order and records
the first counterexample it meets. A check never raises on a malformed
table: exceptions become failures with the exception text as witness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import islice

from .catalog import BandCatalog
from .core import BandMap, FiniteBand, generate_subband, iter_morphisms
from .errors import BandError
from .green import compute_green, partition_ids
from .homogeneity import is_homogeneous
from .structure import mclean_decompose, reconstruct_strong_semilattice, spined_decompose
from .varieties import variety_profile

MORPHISMS_PER_PAIR = 6
MORPHISM_TARGET_MAX_ORDER = 3
HOMOGENEITY_CHECK_MAX_ORDER = 5


@dataclass
class CheckResult:
    name: str
    description: str
    passed: bool = True
    checked: int = 0
    witness: str | None = None
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        s = f"{status} {self.name}: {self.description} [{self.checked} bands, {self.seconds:.2f}s]"
        if self.witness:
            s += f" witness: {self.witness}"
        return s


@dataclass
class LemmaReport:
    max_order: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        return [r.line() for r in self.results]

    def by_name(self, name: str) -> CheckResult:
        return next(r for r in self.results if r.name == name)


def _natural_leq(B):
    t = B.table
    return lambda e, f: t[e][f] == e and t[f][e] == e


def check_closure_order(B: FiniteBand):
    """If every element of M lies above every element of N, the same holds
    for the subbands they generate. Checking N = (common lower set of M)
    covers every N, since closures are monotone."""
    leq = _natural_leq(B)
    n = B.size
    for mask in range(1, 1 << n):
        M = [e for e in range(n) if mask >> e & 1]
        lower = [f for f in range(n) if all(leq(f, m) for m in M)]
        if not lower:
            continue
        gm = generate_subband(B, M)
        gn = generate_subband(B, lower)
        for x in gm:
            for y in gn:
                if not leq(y, x):
                    return f"M={M} N={lower}: {y} not <= {x}"
    return None


def check_two_generated(B: FiniteBand):
    t = B.table
    for e in range(B.size):
        for f in range(e + 1, B.size):
            closure = set(generate_subband(B, (e, f)))
            ef, fe = t[e][f], t[f][e]
            words = {e, f, ef, fe, t[ef][e], t[fe][f]}
            if len(closure) > 6 or not closure <= words:
                return f"<{e},{f}> = {sorted(closure)}"
    return None


def check_class_products(B: FiniteBand):
    """Products of D-classes land in the class of the product of the classes.

    D is computed from ``efe = e, fef = f`` directly on the table, so the
    check also works on corrupted (non-band) tables.
    """
    t = B.table
    n = B.size

    def d_rel(e, f):
        return t[t[e][f]][e] == e and t[t[f][e]][f] == f

    D = partition_ids(n, d_rel)
    for e in range(n):
        for f in range(n):
            if d_rel(e, f) != (D[e] == D[f]):
                return f"D not an equivalence at ({e},{f})"
    rep = {}
    for e, c in enumerate(D):
        rep.setdefault(c, e)
    for x in range(n):
        for y in range(n):
            if D[t[x][y]] != D[t[rep[D[x]]][rep[D[y]]]]:
                return f"{x}*{y}={t[x][y]} outside class of B_{D[x]} B_{D[y]}"
    return None


def check_normal_iff_strong(B: FiniteBand):
    normal = variety_profile(B).N
    try:
        reconstruct_strong_semilattice(B)
        ok = True
    except BandError:
        ok = False
    if ok != normal:
        return f"normal={normal} but reconstruction {'succeeded' if ok else 'failed'}"
    return None


def check_regular_iff_spined(B: FiniteBand):
    regular = variety_profile(B).G
    try:
        spined_decompose(B)
        ok = True
    except BandError:
        ok = False
    if ok != regular:
        return f"regular={regular} but spined decomposition {'succeeded' if ok else 'failed'}"
    return None


def check_r_below(B: FiniteBand):
    """For f in a class strictly below the class of e: f <_r e iff f R efe."""
    g = compute_green(B)
    t = B.table
    for e in range(B.size):
        for f in range(B.size):
            a, b = g.D[e], g.D[f]
            if a == b or not g.class_leq[b, a]:
                continue
            efe = t[t[e][f]][e]
            if bool(g.leq_r[f, e]) != (g.R[f] == g.R[efe]):
                return f"e={e} f={f}"
    return None


def morphism_decomposes(theta: BandMap) -> str | None:
    """A morphism maps D-classes into D-classes, the induced class map is a
    semilattice morphism, and each class restriction is rectangular."""
    B, C = theta.source, theta.target
    gb, gc = compute_green(B), compute_green(C)
    dec_b, dec_c = mclean_decompose(B), mclean_decompose(C)
    pi = {}
    for x in range(B.size):
        a, b = gb.D[x], gc.D[theta(x)]
        if pi.setdefault(a, b) != b:
            return f"class {a} split across {pi[a]} and {b}"
    for a in range(dec_b.Y.size):
        for b in range(dec_b.Y.size):
            if pi[dec_b.Y.table[a][b]] != dec_c.Y.table[pi[a]][pi[b]]:
                return f"induced map not a morphism at ({a},{b})"
    for a, mem in enumerate(dec_b.members):
        for x in mem:
            for y in mem:
                if theta(B.table[x][y]) != C.table[theta(x)][theta(y)]:
                    return f"restriction to class {a} not a morphism"
    return None


def check_morphism_decomposition(B: FiniteBand, targets):
    for C in list(targets) + [B]:
        for f in islice(iter_morphisms(B, C), MORPHISMS_PER_PAIR):
            w = morphism_decomposes(BandMap(B, C, f))
            if w:
                return f"{f}: {w}"
    return None


def check_homogeneous_iff_rectangular(B: FiniteBand, cached: str | None = None):
    if cached is not None:
        homog = cached == "true"
    else:
        homog = is_homogeneous(B).ok
    rect = mclean_decompose(B).Y.size == 1
    if homog != rect:
        return f"homogeneous={homog} rectangular={rect}"
    return None


CHECKS = [
    ("closure-order", "M >= N implies <M> >= <N>"),
    ("two-generated", "|<e,f>| <= 6 and <e,f> within {e,f,ef,fe,efe,fef}"),
    ("class-products", "B_alpha B_beta within B_(alpha beta)"),
    ("normal-iff-strong", "xyzx=xzyx iff strong semilattice reconstruction succeeds"),
    ("regular-iff-spined", "zxzyz=zxyz iff spined decomposition succeeds"),
    ("r-below", "f <_r e iff f R efe for f strictly below the class of e"),
    ("morphism-decomposition", "morphisms split as class maps over a semilattice morphism"),
    ("homogeneous-iff-rectangular", "finite homogeneous bands are exactly rectangular"),
]


def verify_lemma_suite(catalog: BandCatalog, max_order: int) -> LemmaReport:
    report = LemmaReport(max_order)
    entries = [(n, i, B) for n, i, B in catalog.entries() if n <= max_order]
    targets = [B for n, i, B in catalog.entries() if n <= MORPHISM_TARGET_MAX_ORDER]
    for name, desc in CHECKS:
        res = CheckResult(name, desc)
        start = time.perf_counter()
        for n, i, B in entries:
            if name == "homogeneous-iff-rectangular" and n > HOMOGENEITY_CHECK_MAX_ORDER:
                continue
            try:
                if name == "closure-order":
                    w = check_closure_order(B)
                elif name == "two-generated":
                    w = check_two_generated(B)
                elif name == "class-products":
                    w = check_class_products(B)
                elif name == "normal-iff-strong":
                    w = check_normal_iff_strong(B)
                elif name == "regular-iff-spined":
                    w = check_regular_iff_spined(B)
                elif name == "r-below":
                    w = check_r_below(B)
                elif name == "morphism-decomposition":
                    w = check_morphism_decomposition(B, targets)
                else:
                    cached = catalog.props.get((n, i), {}).get("homogeneous")
                    w = check_homogeneous_iff_rectangular(B, cached)
            except Exception as exc:  # corrupted tables must surface as failures
                w = f"error: {exc!r}"
            res.checked += 1
            if w:
                res.passed = False
                res.witness = f"band {n}/{i}: {w}"
                break
        res.seconds = time.perf_counter() - start
        report.results.append(res)
    return report
