"""Identities and membership in the named varieties of bands."""

from __future__ import annotations

import re
from dataclasses import dataclass, fields

import numpy as np

from .core import FiniteBand

VARIABLES = "xyzuv"


@dataclass(frozen=True)
class Identity:
    lhs: str
    rhs: str

    def __post_init__(self):
        for side in (self.lhs, self.rhs):
            if not side or any(c not in VARIABLES for c in side):
                raise ValueError(f"bad identity side {side!r}")

    @property
    def variables(self) -> str:
        return "".join(dict.fromkeys(self.lhs + self.rhs))

    def __str__(self):
        return f"{self.lhs}={self.rhs}"


def parse_identity(text: str) -> Identity:
    """Parse ``"xyzx=xzyx"``; whitespace is ignored."""
    s = re.sub(r"\s+", "", text)
    if s.count("=") != 1:
        raise ValueError(f"identity needs exactly one '=': {text!r}")
    lhs, rhs = s.split("=")
    return Identity(lhs, rhs)


def _evaluate(t: np.ndarray, word: str, assign: dict) -> np.ndarray:
    acc = assign[word[0]]
    for c in word[1:]:
        acc = t[acc, assign[c]]
    return acc


def counterexample(B: FiniteBand, identity: Identity) -> dict | None:
    """First assignment (in lexicographic order) violating the identity."""
    n = B.size
    vs = identity.variables
    if n == 0:
        return None
    grids = np.meshgrid(*([np.arange(n)] * len(vs)), indexing="ij")
    assign = {v: g.ravel() for v, g in zip(vs, grids)}
    lhs = _evaluate(B.array, identity.lhs, assign)
    rhs = _evaluate(B.array, identity.rhs, assign)
    bad = np.flatnonzero(lhs != rhs)
    if not len(bad):
        return None
    i = bad[0]
    return {v: int(assign[v][i]) for v in vs}


def satisfies_identity(B: FiniteBand, identity: Identity | str) -> bool:
    if isinstance(identity, str):
        identity = parse_identity(identity)
    return counterexample(B, identity) is None


DEFINING_IDENTITIES = {
    "Trivial": "x=y",
    "LZ": "xy=x",
    "RZ": "xy=y",
    "RB": "xyx=x",
    "SL": "xy=yx",
    "LN": "xyz=xzy",
    "RN": "xyz=yxz",
    "N": "xyzx=xzyx",
    "LG": "xyx=xy",
    "RG": "xyx=yx",
    "G": "zxzyz=zxyz",
}

# Containments among the named varieties (sub, super).
INCLUSIONS = (
    ("Trivial", "LZ"),
    ("Trivial", "RZ"),
    ("Trivial", "SL"),
    ("LZ", "RB"),
    ("RZ", "RB"),
    ("LZ", "LN"),
    ("RZ", "RN"),
    ("SL", "LN"),
    ("SL", "RN"),
    ("RB", "N"),
    ("LN", "N"),
    ("RN", "N"),
    ("LN", "LG"),
    ("RN", "RG"),
    ("N", "G"),
    ("LG", "G"),
    ("RG", "G"),
)


@dataclass(frozen=True)
class VarietyProfile:
    Trivial: bool
    LZ: bool
    RZ: bool
    RB: bool
    SL: bool
    LN: bool
    RN: bool
    N: bool
    LG: bool
    RG: bool
    G: bool

    def as_dict(self) -> dict[str, bool]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def violated_inclusions(self) -> list[tuple[str, str]]:
        d = self.as_dict()
        return [(a, b) for a, b in INCLUSIONS if d[a] and not d[b]]


def variety_profile(B: FiniteBand) -> VarietyProfile:
    flags = {
        name: satisfies_identity(B, parse_identity(text))
        for name, text in DEFINING_IDENTITIES.items()
    }
    prof = VarietyProfile(**flags)
    broken = prof.violated_inclusions()
    if broken:
        raise AssertionError(f"variety inclusions violated: {broken}")
    return prof
