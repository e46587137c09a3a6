"""Persistent catalogue of small bands.

File format (UTF-8, line oriented)::

    BANDCAT v1
    minor 1
    meta <key> <value>
    <blank>
    band <order> <id>
    <order lines of space-separated indices>
    prop <key> <value>
    <blank>

``minor`` is optional and absent in minor version 0 files, whose ``prop``
lines are ignored and recomputed on load.
"""

from __future__ import annotations

import datetime as _dt
import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .core import FiniteBand, validate_table
from .enumeration import enumerate_bands
from .errors import BandError, CorruptEntry, FormatVersionMismatch
from .green import compute_green
from .homogeneity import is_homogeneous
from .structure import mclean_decompose
from .varieties import variety_profile

log = logging.getLogger(__name__)

FORMAT_MAJOR = 1
FORMAT_MINOR = 1
HOMOGENEITY_MAX_ORDER = 6


def _ids(xs):
    return " ".join(map(str, xs))


def analysis_props(B: FiniteBand, homogeneity: bool = True) -> dict[str, str]:
    """Cached analyses of one band, rendered as catalogue property strings."""
    g = compute_green(B)
    dec = mclean_decompose(B)
    prof = variety_profile(B)
    props = {
        "R": _ids(g.R),
        "L": _ids(g.L),
        "D": _ids(g.D),
        "Y": ";".join(_ids(r) for r in dec.Y.table),
        "dims": " ".join(f"{n}x{m}" for n, m in dec.class_dims),
        "varieties": ",".join(k for k, v in prof.as_dict().items() if v) or "-",
    }
    if homogeneity:
        props["homogeneous"] = "true" if is_homogeneous(B).ok else "false"
    return props


@dataclass
class BandCatalog:
    bands: dict[int, list[FiniteBand]] = field(default_factory=dict)
    props: dict[tuple[int, int], dict[str, str]] = field(default_factory=dict)
    meta: dict[str, str] = field(default_factory=dict)

    def orders(self) -> list[int]:
        return sorted(self.bands)

    def all_bands(self, max_order: int | None = None):
        for n in self.orders():
            if max_order is None or n <= max_order:
                yield from self.bands[n]

    def entries(self):
        for n in self.orders():
            for i, B in enumerate(self.bands[n]):
                yield n, i, B

    def counts(self) -> dict[int, int]:
        return {n: len(bs) for n, bs in sorted(self.bands.items())}

    def __eq__(self, other):
        if not isinstance(other, BandCatalog):
            return NotImplemented
        return self.bands == other.bands and self.props == other.props


def build_catalog(max_order: int, homogeneity_max_order: int = HOMOGENEITY_MAX_ORDER) -> BandCatalog:
    cat = BandCatalog(meta={
        "generator": f"bandkit-{__version__}",
        "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    })
    for n in range(1, max_order + 1):
        bands = enumerate_bands(n)
        cat.bands[n] = bands
        for i, B in enumerate(bands):
            cat.props[(n, i)] = analysis_props(B, homogeneity=n <= homogeneity_max_order)
        log.info("order %d: %d bands", n, len(bands))
    return cat


def catalog_store(cat: BandCatalog, path) -> None:
    lines = [f"BANDCAT v{FORMAT_MAJOR}", f"minor {FORMAT_MINOR}"]
    for k, v in sorted(cat.meta.items()):
        lines.append(f"meta {k} {v}")
    lines.append("")
    for n, i, B in cat.entries():
        lines.append(f"band {n} {i}")
        lines.extend(_ids(row) for row in B.table)
        for k, v in cat.props.get((n, i), {}).items():
            lines.append(f"prop {k} {v}")
        lines.append("")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_entries(path):
    """Parse a catalogue-format file into ``(minor, meta, entries)``.

    Each entry is ``(order, id, band, props)``; tables are validated.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if not lines or not lines[0].startswith("BANDCAT v"):
        raise FormatVersionMismatch(lines[0] if lines else "")
    version = lines[0][len("BANDCAT v"):].strip()
    if version != str(FORMAT_MAJOR):
        raise FormatVersionMismatch(version)
    pos = 1
    minor = 0
    meta: dict[str, str] = {}
    while pos < len(lines) and lines[pos].strip():
        head, _, rest = lines[pos].partition(" ")
        if head == "minor":
            minor = int(rest)
        elif head == "meta":
            k, _, v = rest.partition(" ")
            meta[k] = v
        pos += 1
    if minor > FORMAT_MINOR:
        raise FormatVersionMismatch(f"{FORMAT_MAJOR}.{minor}")

    entries = []
    while pos < len(lines):
        if not lines[pos].strip():
            pos += 1
            continue
        parts = lines[pos].split()
        try:
            if parts[0] != "band" or len(parts) != 3:
                raise ValueError(lines[pos])
            n, idx = int(parts[1]), int(parts[2])
            rows = []
            for r in range(n):
                rows.append([int(v) for v in lines[pos + 1 + r].split()])
            B = validate_table(n, rows)
        except (ValueError, IndexError, BandError):
            raise CorruptEntry(len(entries)) from None
        pos += 1 + n
        props = {}
        while pos < len(lines) and lines[pos].startswith("prop "):
            _, k, *v = lines[pos].split(" ", 2)
            props[k] = v[0] if v else ""
            pos += 1
        entries.append((n, idx, B, props))
    return minor, meta, entries


def catalog_load(path) -> BandCatalog:
    minor, meta, entries = read_entries(path)
    cat = BandCatalog(meta=meta)
    for entry, (n, idx, B, props) in enumerate(entries):
        bucket = cat.bands.setdefault(n, [])
        if idx != len(bucket):
            raise CorruptEntry(entry)
        bucket.append(B)
        if minor < FORMAT_MINOR:
            props = analysis_props(B, homogeneity=n <= HOMOGENEITY_MAX_ORDER)
        cat.props[(n, idx)] = props
    return cat
