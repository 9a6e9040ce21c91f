import pytest
from hypothesis import given, strategies as st

from coassure.catalog import (
    Catalog,
    Domain,
    ReqType,
    Requirement,
    SecurityClass,
    catalog_to_doc,
    load_catalog,
    parse_catalog,
    validate_catalog,
)
from coassure.errors import ModelError, NotFoundError, ParseError
from coassure.machine import STATE_GROUPS


def test_seed_catalog_counts(catalog):
    assert catalog.safety_count == 6
    assert {r.id for r in catalog.safety_requirements()} == {
        "A2.6", "A2.13a", "A2.13b", "A2.13c", "A2.14", "A2.15",
    }
    assert set(catalog.class_ids()) == {"FPT_SSP", "FPT_STM", "FRU_PRS", "FRU_RSA"}


def test_empty_catalog_is_valid():
    catalog = load_catalog({"requirements": [], "classes": []})
    assert catalog.requirements == ()
    assert catalog.classes == ()
    assert validate_catalog(catalog).findings == []


def test_duplicate_id_names_offender():
    entry = {"id": "A2.14", "domain": "safety", "standard": "s", "title": "t",
             "req_type": "ResourceUse"}
    with pytest.raises(ModelError, match="A2.14"):
        load_catalog({"requirements": [entry, dict(entry)], "classes": []})


def test_seed_catalog_validates_clean(catalog):
    assert validate_catalog(catalog).findings == []


def test_dangling_member_is_error(catalog):
    doc = catalog_to_doc(catalog)
    doc["classes"][0]["members"] = ["NOPE"]
    report = validate_catalog(parse_catalog(doc))
    assert not report.ok
    assert any("NOPE" in f.element_id for f in report.errors)


def test_unclassed_security_requirement_warns():
    doc = {
        "requirements": [
            {"id": "SR1", "domain": "security", "standard": "s", "title": "t"},
        ],
        "classes": [],
    }
    catalog = load_catalog(doc)  # warnings do not block loading
    report = validate_catalog(catalog)
    assert report.ok
    assert [f.element_id for f in report.warnings] == ["SR1"]


def test_lookup(catalog):
    cls = catalog.lookup("FPT_STM")
    assert isinstance(cls, SecurityClass) and cls.name == "Time stamps"
    req = catalog.lookup("A2.13a")
    assert isinstance(req, Requirement) and req.title == "Guaranteed maximum time"
    with pytest.raises(NotFoundError):
        catalog.lookup("ZZZ")


def test_safety_requirement_without_type_rejected():
    doc = {"requirements": [
        {"id": "X1", "domain": "safety", "standard": "s", "title": "t"}], "classes": []}
    with pytest.raises(ModelError, match="X1"):
        load_catalog(doc)


def test_unknown_keys_rejected():
    with pytest.raises(ParseError, match="bogus"):
        load_catalog({"requirements": [], "classes": [], "bogus": 1})
    with pytest.raises(ParseError):
        load_catalog({"requirements": [
            {"id": "a", "domain": "safety", "standard": "s", "title": "t",
             "req_type": "Timing", "extra": 1}], "classes": []})


def test_bad_domain_and_type_are_parse_errors():
    with pytest.raises(ParseError, match="domain"):
        load_catalog({"requirements": [
            {"id": "a", "domain": "other", "standard": "s", "title": "t"}], "classes": []})
    with pytest.raises(ParseError, match="req_type"):
        load_catalog({"requirements": [
            {"id": "a", "domain": "safety", "standard": "s", "title": "t",
             "req_type": "timing"}], "classes": []})


def test_class_member_must_be_security_requirement():
    doc = {
        "requirements": [
            {"id": "S1", "domain": "safety", "standard": "s", "title": "t",
             "req_type": "Timing"},
        ],
        "classes": [{"id": "C1", "name": "c", "members": ["S1"]}],
    }
    with pytest.raises(ModelError, match="S1"):
        load_catalog(doc)


def test_id_collision_across_requirements_and_classes():
    doc = {
        "requirements": [
            {"id": "X", "domain": "security", "standard": "s", "title": "t"},
        ],
        "classes": [{"id": "X", "name": "c", "members": []}],
    }
    with pytest.raises(ModelError, match="X"):
        load_catalog(doc)


def test_roundtrip_stability(catalog):
    doc = catalog_to_doc(catalog)
    again = load_catalog(doc)
    assert again.requirements == catalog.requirements
    assert again.classes == catalog.classes
    assert catalog_to_doc(again) == doc


def test_seven_types_partitioned_exactly():
    assert len(ReqType) == 7
    partition = [t for group in STATE_GROUPS.values() for t in group]
    assert len(partition) == 7
    assert set(partition) == set(ReqType)


# -- property tests -----------------------------------------------------------

_token = st.text(alphabet="ABCDEFGHabcdefgh0123456789._", min_size=1, max_size=8)


@st.composite
def catalogs(draw):
    n_safety = draw(st.integers(0, 5))
    n_security = draw(st.integers(0, 5))
    ids = draw(st.lists(_token, min_size=n_safety + n_security,
                        max_size=n_safety + n_security, unique=True))
    reqs = []
    for i in range(n_safety):
        reqs.append(Requirement(
            id=f"S-{ids[i]}", domain=Domain.SAFETY, standard="std", title="t",
            req_type=draw(st.sampled_from(list(ReqType)))))
    sec_ids = []
    for i in range(n_safety, n_safety + n_security):
        rid = f"Q-{ids[i]}"
        sec_ids.append(rid)
        reqs.append(Requirement(id=rid, domain=Domain.SECURITY, standard="std", title="t"))
    n_classes = draw(st.integers(0, 3))
    classes = []
    for j in range(n_classes):
        members = draw(st.lists(st.sampled_from(sec_ids), unique=True)) if sec_ids else []
        classes.append(SecurityClass(class_id=f"C{j}", name=f"class {j}",
                                     members=tuple(members)))
    return Catalog(tuple(reqs), tuple(classes))


@given(catalogs())
def test_property_roundtrip(cat):
    doc = catalog_to_doc(cat)
    again = parse_catalog(doc)
    assert again.requirements == cat.requirements
    assert again.classes == cat.classes


@given(catalogs())
def test_property_load_accepts_iff_no_error_findings(cat):
    doc = catalog_to_doc(cat)
    report = validate_catalog(parse_catalog(doc))
    if report.ok:
        load_catalog(doc)
    else:
        with pytest.raises(ModelError):
            load_catalog(doc)
