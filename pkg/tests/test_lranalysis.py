import pytest

from lrgroups.cosetenum import conjugate_test, enumerate_cosets
from lrgroups.lranalysis import (
    CertificateError,
    compute_X,
    seven_at_check,
    self_duality_verdict,
)
from lrgroups.registry import LR_ADMITTING, NAMES, get_amalgam

X_STRUCTURE = {
    "S4": ["V4"],
    "C3xS4": ["V4"],
    "C3xS4star": ["V4"],
    "S3xS4": ["C2^3", "V4", "V4", "V4"],
    "4AT": ["D4"],
    "7AT": ["D4"],
}


@pytest.mark.parametrize("name", NAMES)
def test_x_classes(name, get_report):
    rep = get_report(name)
    assert sorted(x.structure() for x in rep.x_classes) == X_STRUCTURE[name]
    # each computed class is one of the listed representatives, and all are hit
    assert sorted(x.named for x in rep.x_classes) == sorted(get_amalgam(name).x_classes)


@pytest.mark.parametrize("name", LR_ADMITTING)
def test_table1_row(name, get_report):
    rep = get_report(name)
    assert rep.matches_table1()
    assert rep.unique
    assert rep.normaliser_index == 2
    assert rep.checks["maximal_matches_table"]
    assert rep.checks["normaliser_matches_table"]
    assert rep.checks["all_lr_below_maximal"]
    for c in rep.lr_classes:
        assert c.table.check() == []
        assert rep.orbit_counts[c.table.key()] == {"L": 1, "B": 2, "R": 2}


def test_s3xs4_lr_classes(get_report):
    rep = get_report("S3xS4")
    # computed: the maximal class at index 18 and three classes at index 36
    assert sorted(c.index for c in rep.lr_classes) == [18, 36, 36, 36]
    assert [c.index for c in rep.maximal] == [18]
    assert rep.lr_class_count == {"found": 4, "named": 2}
    a = get_amalgam("S3xS4").presentation.word("a")
    small = [c for c in rep.lr_classes if c.index == 36]
    assert sorted(sum(c.table.trace(k, a) == k for k in range(36)) for c in small) == [0, 6, 12]


def test_maximal_group_tables(get_report):
    # table index equals |L : G_v|
    for name in LR_ADMITTING:
        assert get_report(name).checks["index_equals_vertex_stabiliser_index"]


def test_normaliser_words_are_in_normaliser(get_report):
    # every listed N generator normalises G: G^w = G
    for name in LR_ADMITTING:
        spec = get_amalgam(name)
        named = enumerate_cosets(spec.presentation, spec.words(spec.lr_group))
        gens = spec.words(spec.lr_group)
        for w in spec.words(spec.normaliser):
            Gw = enumerate_cosets(spec.presentation, [g.conj(w) for g in gens])
            assert Gw.rows == named.rows


def test_seven_at(get_report):
    rep = get_report("7AT")
    cert = rep.certificate
    assert cert["pass"] and cert["index"] == 1
    assert cert["rho_h"] == "(1 2)(3 4)"
    assert all(cert["identities"].values())
    assert rep.matches_table1()
    assert rep.to_json()["maximal_lr_group"] == "NONE"


def test_seven_at_failure_raises(get_amalgam, monkeypatch):
    am = get_amalgam("7AT")
    spec = am.spec
    monkeypatch.setitem(spec.constants, "alpha", "pc")
    with pytest.raises(CertificateError):
        seven_at_check(am)


@pytest.mark.parametrize("name", LR_ADMITTING)
def test_self_duality(name, get_report):
    v = self_duality_verdict(get_report(name))
    assert v["verdict"] == "self-dual"
    assert v["witness"] is not None


def test_report_json_schema(get_report):
    j = get_report("S4").to_json()
    assert j["schema"] == 1
    assert j["maximal_lr_group"] == get_amalgam("S4").lr_group
    assert j["normaliser_index"] == 2
    assert j["unique_up_to_conjugacy"] is True
    assert j["self_dual"] == "self-dual"
