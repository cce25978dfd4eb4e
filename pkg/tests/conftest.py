import importlib.resources
import json
from pathlib import Path

import pytest

from argudas.ingest import ingest_records
from argudas.mapping import load_alignment, load_thresholds
from argudas.model import Annotation, AnnotationId, ExpressionRange, ResourceId, TheilerStage
from argudas.ontology import AnatomyGraph, load_ontology
from argudas.schemes import load_scheme_catalog
from argudas.store import Store

DATA_DIR = Path(str(importlib.resources.files("argudas"))) / "data"
DEMO_DIR = DATA_DIR / "demo"


def make_annotation(
    local="x1",
    resource="EMAGE",
    gene="bmp4",
    tissue="future brain",
    stage=15,
    level="weak",
    direct=True,
    probe_info=None,
    technique=None,
    source_url=None,
    derived_from=None,
    extra=(),
):
    return Annotation(
        id=AnnotationId(ResourceId.parse(resource), local),
        gene=gene,
        tissue=tissue,
        stage=TheilerStage(stage),
        level=ExpressionRange.from_label(level),
        direct=direct,
        probe_info=probe_info,
        technique=technique,
        source_url=source_url,
        derived_from=derived_from,
        extra=tuple(extra),
    )


def graph_from_edges(stage, edges, extra_nodes=()):
    nodes = {t for edge in edges for t in edge} | set(extra_nodes)
    return AnatomyGraph.build(stage, [(t, t) for t in sorted(nodes)], edges)


def build_demo_store():
    store = Store()
    for name in ("ontology_ts14.json", "ontology_ts15.json", "ontology_ts28.json"):
        store.add_ontology(load_ontology(DEMO_DIR / name))
    store.alignment = load_alignment(DEMO_DIR / "alignment.json")
    store.thresholds = load_thresholds(DEMO_DIR / "thresholds.json")
    store.catalog = load_scheme_catalog(DATA_DIR / "default_schemes.json")
    with open(DEMO_DIR / "annotations.json", encoding="utf-8") as fh:
        records = json.load(fh)
    report = ingest_records(records, store, locator="demo")
    return store, report


@pytest.fixture()
def demo_store():
    store, _ = build_demo_store()
    return store


@pytest.fixture()
def demo_store_with_report():
    return build_demo_store()


@pytest.fixture()
def default_catalog():
    return load_scheme_catalog(DATA_DIR / "default_schemes.json")


@pytest.fixture()
def review_catalog():
    return load_scheme_catalog(DATA_DIR / "expert_review_scores.json")


def build_stress_store():
    """Twelve direct annotations under two deep part-of chains joined at a root.

    Every tissue in chain one is a part of the next (depth five below the
    root), same for chain two, so each direct annotation yields five
    propagated copies and the root collects all twelve.
    """
    chain_one = ["c1-depth5", "c1-depth4", "c1-depth3", "c1-depth2", "c1-depth1"]
    chain_two = ["c2-depth5", "c2-depth4", "c2-depth3", "c2-depth2", "c2-depth1"]
    edges = []
    for chain in (chain_one, chain_two):
        for child, parent in zip(chain, chain[1:]):
            edges.append({"child": child, "parent": parent})
        edges.append({"child": chain[-1], "parent": "organism"})
    nodes = [{"id": t, "name": t} for t in chain_one + chain_two + ["organism"]]

    store = Store()
    from argudas.ontology import parse_ontology

    store.add_ontology(parse_ontology({"stage": 20, "nodes": nodes, "edges": edges}))
    store.catalog = load_scheme_catalog(DATA_DIR / "default_schemes.json")

    records = []
    for i in range(6):
        records.append(
            {
                "resource": "EMAGE" if i % 2 == 0 else "GXD",
                "id": f"s1-{i}",
                "gene": "bmp4",
                "stage": 20,
                "tissue": "c1-depth5",
                "level": "weak",
                "probe_info": True,
                "technique": "wholemount in situ",
            }
        )
        records.append(
            {
                "resource": "GXD" if i % 2 == 0 else "EMAGE",
                "id": f"s2-{i}",
                "gene": "bmp4",
                "stage": 20,
                "tissue": "c2-depth5",
                "level": "weak",
                "probe_info": True,
                "technique": "section in situ",
            }
        )
    report = ingest_records(records, store, locator="stress")
    assert report.loaded == 12 and not report.excluded
    return store


@pytest.fixture()
def stress_store():
    return build_stress_store()
