import json
from pathlib import Path

import pytest

from coassure.bbn import build_network
from coassure.catalog import load_catalog
from coassure.links import compile_network_spec
from coassure.seeds import seed_catalog, seed_links

SEED_SCENARIO_STM = {"evidence": {"FPT_STM": "violated"}}


@pytest.fixture(scope="session")
def catalog():
    return seed_catalog()


@pytest.fixture(scope="session")
def links_and_params():
    return seed_links()


@pytest.fixture(scope="session")
def network(catalog, links_and_params):
    table, params = links_and_params
    return build_network(compile_network_spec(catalog, table, params))


@pytest.fixture(scope="session")
def extended_catalog():
    """Seed catalog plus one safety requirement per remaining type group."""
    from coassure.catalog import catalog_to_doc

    doc = catalog_to_doc(seed_catalog())
    doc["requirements"] += [
        {"id": "A2.F1", "domain": "safety", "standard": "IEC 61508-3 Table A.2",
         "title": "Failure assertion programming", "req_type": "FailureBehaviour"},
        {"id": "A2.F2", "domain": "safety", "standard": "IEC 61508-3 Table A.2",
         "title": "Fault detection", "req_type": "FailureDetection"},
        {"id": "A2.R1", "domain": "safety", "standard": "IEC 61508-3 Table A.2",
         "title": "Backward recovery", "req_type": "Recovery"},
        {"id": "A2.C1", "domain": "safety", "standard": "IEC 61508-3 Table A.2",
         "title": "Communication integrity", "req_type": "Communication"},
        {"id": "A2.T1", "domain": "safety", "standard": "IEC 61508-3 Table A.2",
         "title": "Trusted interfaces", "req_type": "Trust"},
    ]
    return load_catalog(doc)


@pytest.fixture()
def seed_files(tmp_path):
    """Seed model written to disk for CLI runs: (catalog_path, links_path)."""
    from coassure.catalog import catalog_to_doc
    from coassure.links import links_to_doc

    table, params = seed_links()
    catalog_path = tmp_path / "catalog.json"
    links_path = tmp_path / "links.json"
    catalog_path.write_text(json.dumps(catalog_to_doc(seed_catalog())), "utf-8")
    links_path.write_text(json.dumps(links_to_doc(table, params)), "utf-8")
    return catalog_path, links_path


def write_json(path: Path, doc) -> Path:
    path.write_text(json.dumps(doc), "utf-8")
    return path


# -- acceptance summary ------------------------------------------------------

_acceptance_results: list[tuple[str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__ == "test_acceptance":
        _acceptance_results.append((item.name, report.outcome.upper()))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance_results:
        status = "PASS" if outcome == "PASSED" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
