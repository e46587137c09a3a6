import pytest

from bandkit.catalog import BandCatalog, build_catalog, catalog_load, catalog_store
from bandkit.errors import CorruptEntry, FormatVersionMismatch


@pytest.fixture(scope="module")
def small():
    return build_catalog(4, homogeneity_max_order=4)


def test_round_trip(small, tmp_path):
    p = tmp_path / "cat.txt"
    catalog_store(small, p)
    back = catalog_load(p)
    assert back.counts() == small.counts()
    assert [B.table for B in back.all_bands()] == [B.table for B in small.all_bands()]
    assert back.props == small.props


def test_truncated_file(small, tmp_path):
    p = tmp_path / "cat.txt"
    catalog_store(small, p)
    lines = p.read_text().split("\n")
    last = max(i for i, line in enumerate(lines) if line.startswith("band "))
    # keep the header of the last entry and only one row of its table
    p.write_text("\n".join(lines[: last + 2]) + "\n")
    with pytest.raises(CorruptEntry) as e:
        catalog_load(p)
    assert e.value.args == (sum(small.counts().values()) - 1,)


def test_non_band_entry(tmp_path):
    p = tmp_path / "cat.txt"
    p.write_text("BANDCAT v1\nminor 1\n\nband 2 0\n0 0\n0 0\n")
    with pytest.raises(CorruptEntry) as e:
        catalog_load(p)
    assert e.value.args == (0,)


def test_version_mismatch(tmp_path):
    p = tmp_path / "cat.txt"
    p.write_text("BANDCAT v2\n\n")
    with pytest.raises(FormatVersionMismatch):
        catalog_load(p)
    p.write_text("BANDCAT v1\nminor 9\n\n")
    with pytest.raises(FormatVersionMismatch):
        catalog_load(p)


def test_minor_zero_recomputes(small, tmp_path):
    p = tmp_path / "cat.txt"
    lines = ["BANDCAT v1", ""]
    for n, i, B in small.entries():
        lines.append(f"band {n} {i}")
        lines += [" ".join(map(str, r)) for r in B.table]
        lines.append("prop varieties bogus")
        lines.append("")
    p.write_text("\n".join(lines))
    back = catalog_load(p)
    assert back.props == small.props


def test_empty_catalog():
    assert BandCatalog().counts() == {}
