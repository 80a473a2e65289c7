"""
Tests for the bundled example catalog: every fixture loads and produces the
verdicts it is registered with.
"""

import pytest

from acr.analysis import LocalAcr, analyze
from acr.catalog import NETWORKS_DIR, catalog, get_network, list_networks, resolve
from acr.parser import parse_points


ENTRIES = catalog.list_entries()


def test_catalog_lists_every_fixture():
    names = catalog.get_names()
    assert names == sorted(names)
    files = {entry.filename for entry in ENTRIES}
    on_disk = {path.name for path in NETWORKS_DIR.iterdir() if path.suffix in (".crn", ".mat")}
    assert files == on_disk


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.name)
def test_entry_produces_registered_verdicts(entry):
    document = entry.load()
    assert document.source == str(entry.path)
    report = analyze(document.system)
    assert report.local_acr_species() == entry.local_acr
    if entry.nondegeneracy is not None:
        assert report.nondegeneracy.value == entry.nondegeneracy


@pytest.mark.parametrize("entry", [e for e in ENTRIES if e.points_file], ids=lambda e: e.name)
def test_points_files_parse(entry):
    system = entry.load().system
    points = parse_points((NETWORKS_DIR / entry.points_file).read_text(), system)
    assert points
    for point in points:
        assert len(point.k) == system.r
        assert len(point.x) == system.n


def test_symbolic_entry_is_conditional():
    report = analyze(get_network("idhkp-idh-symbolic").load().system)
    assert report.verdict("X4").local_acr is LocalAcr.CONDITIONAL


def test_get_network_unknown_name():
    with pytest.raises(KeyError) as excinfo:
        get_network("no-such-network")
    assert "shinar-feinberg" in str(excinfo.value)


def test_list_networks():
    assert "convex-rays" in list_networks()
    described = list_networks(include_descriptions=True)
    assert "IDHKP" in described["idhkp-idh"]


def test_resolve(tmp_path):
    assert resolve("dimerization") == NETWORKS_DIR / "dimerization.crn"
    other = tmp_path / "mine.crn"
    assert resolve(other) == other
    assert resolve(str(other)) == other
