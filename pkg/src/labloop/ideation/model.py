"""Research idea data model and its on-disk document format.

An idea bundles the prompt context, the retrieved related works, the
hypothesis, and the experiment plan, plus the prompt-template version and
provider id so every idea is attributable to the prompts that produced it.
Serialization is lossless and deterministic (sorted keys, fixed indent).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..corpus import ProblemFrame, PromptContext, RelatedWork, ResearchPaper

IDEA_FORMAT = "labloop-idea/1"


@dataclass
class Hypothesis:
    method: str
    rationale: str

    def __post_init__(self):
        if not self.method.strip() or not self.rationale.strip():
            raise ValueError("hypothesis method and rationale must be non-empty")


@dataclass
class PlanStage:
    number: int
    title: str
    body: str = ""


@dataclass
class ExperimentPlan:
    design: list[PlanStage]
    rationale: str
    raw: str


@dataclass
class ResearchIdea:
    context: PromptContext
    related: list[RelatedWork]
    hypothesis: Hypothesis
    plan: ExperimentPlan
    template_version: str = ""
    provider_id: str = ""

    def to_dict(self) -> dict:
        return {
            "format": IDEA_FORMAT,
            "template_version": self.template_version,
            "provider_id": self.provider_id,
            "context": {
                "paper": {
                    "title": self.context.paper.title,
                    "abstract": self.context.paper.abstract,
                    "introduction": self.context.paper.introduction,
                    "related_work": self.context.paper.related_work,
                    "extra_sections": dict(self.context.paper.extra_sections),
                    "source_id": self.context.paper.source_id,
                },
                "frame": {
                    "tasks": list(self.context.frame.tasks),
                    "gaps": list(self.context.frame.gaps),
                    "keywords": list(self.context.frame.keywords),
                },
                "char_budget": self.context.char_budget,
            },
            "related": [
                {
                    "title": work.title,
                    "abstract": work.abstract,
                    "year": work.year,
                    "source_id": work.source_id,
                    "relevance": work.relevance,
                }
                for work in self.related
            ],
            "hypothesis": {
                "method": self.hypothesis.method,
                "rationale": self.hypothesis.rationale,
            },
            "plan": {
                "design": [
                    {"number": s.number, "title": s.title, "body": s.body}
                    for s in self.plan.design
                ],
                "rationale": self.plan.rationale,
                "raw": self.plan.raw,
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def from_dict(cls, data: dict) -> "ResearchIdea":
        for field_name in ("context", "related", "hypothesis", "plan"):
            if field_name not in data:
                raise ValueError(f"idea document missing field {field_name!r}")
        context_data = data["context"]
        for field_name in ("paper", "frame"):
            if field_name not in context_data:
                raise ValueError(f"idea document missing field 'context.{field_name}'")
        paper_data = dict(context_data["paper"])
        context = PromptContext(
            paper=ResearchPaper(
                title=paper_data.get("title", ""),
                abstract=paper_data.get("abstract", ""),
                introduction=paper_data.get("introduction", ""),
                related_work=paper_data.get("related_work", ""),
                extra_sections=dict(paper_data.get("extra_sections", {})),
                source_id=paper_data.get("source_id", ""),
            ),
            frame=ProblemFrame(
                tasks=list(context_data["frame"].get("tasks", [])),
                gaps=list(context_data["frame"].get("gaps", [])),
                keywords=list(context_data["frame"].get("keywords", [])),
            ),
            char_budget=context_data.get("char_budget", 24_000),
        )
        hypothesis_data = data["hypothesis"]
        for field_name in ("method", "rationale"):
            if field_name not in hypothesis_data:
                raise ValueError(f"idea document missing field 'hypothesis.{field_name}'")
        plan_data = data["plan"]
        for field_name in ("design", "rationale", "raw"):
            if field_name not in plan_data:
                raise ValueError(f"idea document missing field 'plan.{field_name}'")
        return cls(
            context=context,
            related=[
                RelatedWork(
                    title=w["title"],
                    abstract=w.get("abstract", ""),
                    year=w.get("year", 0),
                    source_id=w.get("source_id", ""),
                    relevance=w.get("relevance", 0.0),
                )
                for w in data["related"]
            ],
            hypothesis=Hypothesis(
                method=hypothesis_data["method"],
                rationale=hypothesis_data["rationale"],
            ),
            plan=ExperimentPlan(
                design=[
                    PlanStage(number=s["number"], title=s["title"], body=s.get("body", ""))
                    for s in plan_data["design"]
                ],
                rationale=plan_data["rationale"],
                raw=plan_data["raw"],
            ),
            template_version=data.get("template_version", ""),
            provider_id=data.get("provider_id", ""),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ResearchIdea":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ValueError(f"idea file is not valid JSON: {exc}") from exc
        return cls.from_dict(data)
