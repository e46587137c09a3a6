"""Random valid strong-semilattice data for tests."""

import random

from bandkit.constructors import validate_strong_spec
from bandkit.enumeration import enumerate_semilattices
from bandkit.errors import TransitivityViolation
from bandkit.structure import StrongSemilatticeSpec


def _rect_map(rng, src, dst):
    (n, m), (n2, m2) = src, dst
    if rng.random() < 0.3:
        f = [rng.randrange(n2)] * n
        g = [rng.randrange(m2)] * m
    else:
        f = [rng.randrange(n2) for _ in range(n)]
        g = [rng.randrange(m2) for _ in range(m)]
    return tuple(f[i] * m2 + g[j] for i in range(n) for j in range(m))


def random_strong_spec(rng: random.Random, max_total: int = 12, max_classes: int = 4):
    """Draw (Y, dims, psi) with total order <= max_total, retrying on
    transitivity clashes."""
    while True:
        k = rng.randint(1, max_classes)
        Y = rng.choice(enumerate_semilattices(k))
        budget = max_total - k
        dims = []
        for _ in range(k):
            while True:
                n, m = rng.randint(1, 3), rng.randint(1, 3)
                if n * m - 1 <= budget:
                    break
            budget -= n * m - 1
            dims.append((n, m))
        leq = lambda b, a: Y.table[a][b] == b  # noqa: E731
        psi = {}
        # labels of enumerated semilattices are a linear extension, so
        # visiting pairs by decreasing distance lets composites be reused
        pairs = sorted(((a, b) for a in range(k) for b in range(k) if leq(b, a)), key=lambda p: p[0] - p[1])
        for a, b in pairs:
            if a == b:
                psi[(a, b)] = tuple(range(dims[a][0] * dims[a][1]))
                continue
            mids = [c for c in range(k) if c not in (a, b) and leq(c, a) and leq(b, c)]
            if mids:
                c = max(mids)
                p, q = psi[(a, c)], psi[(c, b)]
                psi[(a, b)] = tuple(q[x] for x in p)
            else:
                psi[(a, b)] = _rect_map(rng, dims[a], dims[b])
        spec = StrongSemilatticeSpec(Y, tuple(dims), psi)
        try:
            validate_strong_spec(spec)
        except TransitivityViolation:
            continue
        return spec
