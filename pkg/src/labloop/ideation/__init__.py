from .generate import (
    TEMPLATE_VERSION,
    assemble_idea,
    generate_hypothesis,
    generate_plan,
    parse_hypothesis,
    parse_plan,
    refine_idea,
)
from .model import ExperimentPlan, Hypothesis, IDEA_FORMAT, PlanStage, ResearchIdea

__all__ = [
    "TEMPLATE_VERSION",
    "IDEA_FORMAT",
    "Hypothesis",
    "PlanStage",
    "ExperimentPlan",
    "ResearchIdea",
    "parse_hypothesis",
    "parse_plan",
    "generate_hypothesis",
    "generate_plan",
    "assemble_idea",
    "refine_idea",
]
