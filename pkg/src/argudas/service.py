"""HTTP facade over a loaded store.

Read endpoints serve annotation summaries, argue reports, and the scheme
catalog; the single write endpoint records expert scores.  All handlers
work against the store snapshot they start with, so concurrent reads are
consistent.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .argumentation import (
    Argument,
    ArgueResult,
    AttributeReport,
    Label,
    annotation_summary,
    run_argue,
)
from .errors import BadStage, EmptyCatalog, MissingScore, UnknownScheme
from .model import InterpretationProfile, Mode, Query, TheilerStage
from .schemes import aggregate_confidence, agreement_report
from .store import Store


def _indicator(tick: bool) -> str:
    return "tick" if tick else "cross"


def report_to_dict(report: AttributeReport, expanded: bool) -> dict:
    payload = {
        "level_layer": [
            {
                "gene": g.gene,
                "tissue": g.tissue,
                "stage": g.stage,
                "label": g.label,
                "level": g.level.label if g.level is not None else None,
                "annotations": list(g.annotation_ids),
                "attributes": [
                    {"name": a.name, "indicator": _indicator(a.tick)} for a in g.attributes
                ],
            }
            for g in report.groups
        ]
    }
    if expanded:
        payload["annotation_layer"] = {
            annotation_id: [
                {"name": e.name, "indicator": _indicator(e.tick), "scheme": e.scheme_id}
                for e in entries
            ]
            for annotation_id, entries in report.annotation_layer.items()
        }
    return payload


def argument_to_dict(argument: Argument, label: Label) -> dict:
    claim: dict = {"kind": argument.claim.kind.value}
    if argument.claim.level is not None:
        claim["level"] = argument.claim.level.label
    if argument.claim.annotation is not None:
        claim["annotation"] = str(argument.claim.annotation)
    gene, tissue, stage = argument.claim.subject
    claim["subject"] = {"gene": gene, "tissue": tissue, "stage": int(stage)}
    return {
        "id": argument.id,
        "scheme": argument.rule_id,
        "grounding": [str(g) for g in argument.grounding],
        "claim": claim,
        "confidence": argument.confidence,
        "status": label.value,
    }


def argue_result_to_dict(result: ArgueResult, expanded: bool, legacy: bool) -> dict:
    payload = report_to_dict(result.report, expanded)
    if legacy:
        payload["arguments"] = [
            argument_to_dict(a, result.labelling[a.id]) for a in result.arguments
        ]
        payload["attacks"] = sorted([list(pair) for pair in result.attacks.attacks])
    return payload


def _parse_stage_param(raw: Optional[str]) -> Optional[TheilerStage]:
    if raw is None or raw == "":
        return None
    try:
        return TheilerStage(int(raw))
    except (ValueError, BadStage):
        raise HTTPException(status_code=400, detail=f"stage must be an integer in 1..28, got {raw!r}")


class ArgueRequest(BaseModel):
    gene: Optional[str] = None
    tissue: Optional[str] = None
    stage: Optional[int] = None
    mode: str = "presence"
    prefer_direct: bool = False
    legacy_evaluation: bool = False
    expanded: bool = False


class ScorePost(BaseModel):
    expert: str
    value: str


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="argudas", version="0.1.0")

    @app.get("/api/annotations")
    def get_annotations(
        gene: Optional[str] = None,
        tissue: Optional[str] = None,
        stage: Optional[str] = None,
    ) -> dict:
        if gene is None and tissue is None:
            raise HTTPException(status_code=400, detail="at least one of gene/tissue is required")
        parsed_stage = _parse_stage_param(stage)
        query = Query(gene=gene, tissue=tissue, stage=parsed_stage)
        rows = annotation_summary(query, store.all_annotations())
        return {
            "rows": [
                {
                    "gene": r.gene,
                    "tissue": r.tissue,
                    "stage": r.stage,
                    "resource": r.resource,
                    "id": r.local_id,
                    "level": r.level,
                    "direct": r.direct,
                    "source_url": r.source_url,
                }
                for r in rows
            ],
            "ingest": {
                "loaded": len(store.direct),
                "derived": len(store.derived),
                "excluded": [
                    {"record": ref, "reason": reason} for ref, reason in store.excluded
                ],
            },
        }

    @app.post("/api/argue")
    def post_argue(request: ArgueRequest) -> dict:
        try:
            mode = Mode.parse(request.mode)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        if request.gene is None and request.tissue is None:
            raise HTTPException(status_code=400, detail="at least one of gene/tissue is required")
        stage = None
        if request.stage is not None:
            try:
                stage = TheilerStage(request.stage)
            except BadStage as exc:
                raise HTTPException(status_code=400, detail=str(exc))
        if request.tissue is not None and not store.known_tissue(
            request.tissue, int(stage) if stage is not None else None
        ):
            raise HTTPException(status_code=404, detail=f"unknown tissue {request.tissue!r}")
        profile = InterpretationProfile(mode=mode, prefer_direct=request.prefer_direct)
        query = Query(gene=request.gene, tissue=request.tissue, stage=stage, profile=profile)
        result = run_argue(query, store.all_annotations(), store.rules())
        return argue_result_to_dict(result, request.expanded, request.legacy_evaluation)

    @app.get("/api/schemes")
    def get_schemes() -> list:
        payload = []
        for scheme in store.catalog:
            entry = {
                "id": scheme.id,
                "description": scheme.description,
                "polarity": scheme.polarity.value,
                "scope": scheme.scope.value,
                "critical_questions": list(scheme.critical_questions),
                "scores": {expert: s.symbol for expert, s in sorted(scheme.scores.items())},
            }
            if scheme.scores:
                confidence = aggregate_confidence(scheme.scores)
                entry["confidence"] = {
                    "ordinal": confidence.ordinal,
                    "enabled": confidence.enabled,
                }
            payload.append(entry)
        return payload

    @app.post("/api/schemes/{scheme_id}/scores")
    def post_score(scheme_id: str, body: ScorePost) -> dict:
        try:
            score = store.record_score(scheme_id, body.expert, body.value)
        except UnknownScheme as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            "scheme": scheme_id,
            "expert": body.expert,
            "value": score.symbol,
            "ordinal": score.ordinal,
        }

    @app.get("/api/schemes/report")
    def get_schemes_report(
        expert_a: Optional[str] = None, expert_b: Optional[str] = None
    ) -> dict:
        if expert_a is None or expert_b is None:
            experts = sorted({e for s in store.catalog for e in s.scores})
            if len(experts) != 2:
                raise HTTPException(
                    status_code=400,
                    detail="expert_a and expert_b are required unless exactly two experts scored",
                )
            expert_a, expert_b = experts
        try:
            report = agreement_report(store.catalog, expert_a, expert_b)
        except (EmptyCatalog, MissingScore) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {
            "expert_a": expert_a,
            "expert_b": expert_b,
            "exact": report.exact,
            "similar": report.similar,
            "disagree": report.disagree,
            "broad_agreement": round(report.broad_agreement, 4),
        }

    return app
