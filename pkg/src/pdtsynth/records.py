"""Dataset row types produced by generation and scoring."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class MethodKind(Enum):
    WORD_REVIEW = "word-review"
    REVIEW_WORD = "review-word"
    SUPPLY_WORD = "supply-word"


CONFIDENCE_LEVELS = ("low", "medium", "high")

SCORING_COMPLETE = "complete"
SCORING_BASE_ADJUST = "base-adjust"


def _check_score(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}={value} outside [0, 1]")


@dataclass(frozen=True, kw_only=True)
class GenerationRecord:
    id: int
    method: MethodKind
    target_score: float
    offered_words: Optional[tuple[str, ...]] = None
    word: str
    word_valid: bool
    review: str
    model_claimed_score: Optional[float] = None
    prompt_tokens: int
    completion_tokens: int
    latency_ms: int
    retries_used: int = 0
    extras: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.id < 1:
            raise ValueError("record id must be >= 1")
        _check_score("target_score", self.target_score)
        if not self.review:
            raise ValueError("review must be non-empty")
        if self.method is MethodKind.WORD_REVIEW:
            if self.offered_words is None or len(self.offered_words) != 10:
                raise ValueError("word-review records carry exactly 10 offered words")
        if self.method is MethodKind.SUPPLY_WORD:
            if self.model_claimed_score is None or self.model_claimed_score != self.target_score:
                raise ValueError("supply-word records must claim the target score")
        for name in ("prompt_tokens", "completion_tokens", "latency_ms", "retries_used"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True, kw_only=True)
class ScoredRecord(GenerationRecord):
    evaluated_score: float
    base_score: Optional[float] = None
    adjusted_score: Optional[float] = None
    confidence: str
    explanation: str
    abs_diff: float
    scoring_model: str
    scoring_prompt: str

    def __post_init__(self) -> None:
        super().__post_init__()
        _check_score("evaluated_score", self.evaluated_score)
        if self.confidence not in CONFIDENCE_LEVELS:
            raise ValueError(f"confidence must be one of {CONFIDENCE_LEVELS}")
        if self.scoring_prompt not in (SCORING_COMPLETE, SCORING_BASE_ADJUST):
            raise ValueError(f"unknown scoring prompt kind {self.scoring_prompt!r}")
        if self.scoring_prompt == SCORING_BASE_ADJUST:
            if self.base_score is None or self.adjusted_score is None:
                raise ValueError("base-adjust records carry base and adjusted scores")
            if self.evaluated_score != self.adjusted_score:
                raise ValueError("base-adjust evaluated score must equal the adjusted score")
        if self.abs_diff != abs(self.target_score - self.evaluated_score):
            raise ValueError("abs_diff must equal |target - evaluated| exactly")
