import pytest

from coassure.claims import (
    ClaimRegistry,
    Confidence,
    StmClaim,
    StmFactor,
    claims_from_doc,
    claims_to_doc,
    load_claims,
    model_element_ids,
)
from coassure.errors import ModelError, NotFoundError, ParseError
from coassure.seeds import seed_claims


def registry_for(catalog=None, links=None, network=None) -> ClaimRegistry:
    return ClaimRegistry(model_element_ids(catalog, links, network))


def test_add_table_claims(catalog):
    registry = registry_for(catalog)
    registry.add_claim(StmClaim(
        "c1", StmFactor.PEOPLE, Confidence.PRIMARY,
        "Practitioners are sufficiently competent to perform the methodologies."))
    registry.add_claim(StmClaim(
        "c2", StmFactor.TOOLS, Confidence.PRIMARY,
        "BBN is sufficient for the purpose of modelling the interactions between requirements"))
    assert len(registry) == 2


def test_unknown_element_rejected(catalog):
    registry = registry_for(catalog)
    with pytest.raises(NotFoundError, match="X9"):
        registry.add_claim(StmClaim(
            "c1", StmFactor.PEOPLE, Confidence.PRIMARY, "text", attached_to=("X9",)))


def test_duplicate_claim_id_rejected(catalog):
    registry = registry_for(catalog)
    claim = StmClaim("c1", StmFactor.PEOPLE, Confidence.PRIMARY, "text")
    registry.add_claim(claim)
    with pytest.raises(ModelError):
        registry.add_claim(claim)


def test_attachment_to_catalog_and_network_elements(catalog, links_and_params, network):
    table, _ = links_and_params
    registry = registry_for(catalog, table, network)
    registry.add_claim(StmClaim(
        "c1", StmFactor.CONCEPTUAL, Confidence.PRIMARY, "text",
        attached_to=("A2.13a", "FPT_STM", "S1-indicator", "FPT_STM->Timing")))
    assert len(registry) == 1


def test_supports_must_resolve(catalog):
    registry = registry_for(catalog)
    registry.add_claim(StmClaim("c1", StmFactor.PEOPLE, Confidence.PRIMARY, "text"))
    registry.add_claim(StmClaim(
        "c2", StmFactor.PROCESS, Confidence.SECONDARY, "text", supports="c1"))
    with pytest.raises(NotFoundError):
        registry.add_claim(StmClaim(
            "c3", StmFactor.PROCESS, Confidence.SECONDARY, "text", supports="c9"))


def test_empty_registry_coverage():
    report = ClaimRegistry().coverage_report()
    assert len(report.factors) == 5
    assert all(f.total == 0 for f in report.factors)
    assert report.uncovered == tuple(StmFactor)
    assert report.total == 0


def test_table_claims_coverage(catalog):
    registry = registry_for(catalog)
    for claim in seed_claims():
        registry.add_claim(claim)
    report = registry.coverage_report()
    by_factor = {f.factor: f for f in report.factors}
    assert (by_factor[StmFactor.PEOPLE].primary, by_factor[StmFactor.PEOPLE].secondary) == (1, 0)
    assert (by_factor[StmFactor.PROCESS].primary, by_factor[StmFactor.PROCESS].secondary) == (0, 1)
    assert (by_factor[StmFactor.STRUCTURE].primary, by_factor[StmFactor.STRUCTURE].secondary) == (0, 1)
    assert (by_factor[StmFactor.TOOLS].primary, by_factor[StmFactor.TOOLS].secondary) == (1, 0)
    assert report.uncovered == (StmFactor.CONCEPTUAL,)

    registry.add_claim(StmClaim(
        "c9", StmFactor.CONCEPTUAL, Confidence.SECONDARY,
        "Shared mental models are communicated at each synchronisation point"))
    assert registry.coverage_report().uncovered == ()


def test_coverage_counts_sum_to_registry_size(catalog):
    registry = registry_for(catalog)
    for claim in seed_claims():
        registry.add_claim(claim)
    report = registry.coverage_report()
    assert report.total == len(registry)


def test_factor_order_is_deterministic():
    report = ClaimRegistry().coverage_report()
    assert [f.factor for f in report.factors] == list(StmFactor)


def test_claims_roundtrip():
    claims = seed_claims()
    doc = claims_to_doc(claims)
    assert claims_from_doc(doc) == claims


def test_load_claims_into_registry(catalog):
    registry = load_claims(claims_to_doc(seed_claims()), registry_for(catalog))
    assert len(registry) == 4


def test_claims_doc_validation():
    with pytest.raises(ParseError):
        claims_from_doc({"not": "a list"})
    with pytest.raises(ParseError):
        claims_from_doc([{"id": "a", "factor": "Vibes", "confidence": "Primary", "text": "t"}])
    with pytest.raises(ParseError):
        claims_from_doc([{"id": "a", "factor": "People", "confidence": "Primary",
                          "text": "t", "huh": 1}])
