"""The three review-synthesis methods and batch orchestration.

Every batch derives one child RNG per record from the run seed, so outputs
are identical no matter how many workers execute the batch. Reply parsing
first honors the structured format suffix; when a model ignores it, a
heuristic fallback looks for the first vocabulary member and treats the
longest remaining chunk as the review.
"""

from __future__ import annotations

import random
import re
import threading
from concurrent.futures import FIRST_EXCEPTION, ThreadPoolExecutor, wait
from dataclasses import dataclass
from typing import Optional

from . import prompts
from .errors import AuthError, PipelineStalled, ProviderError, ScriptExhausted, UnparseableReply
from .provider import ChatRequest
from .records import GenerationRecord, MethodKind
from .words import PdtWord, WordList, sample, validate_choice

DEFAULT_PRODUCT = "software product"
DEFAULT_GEN_TEMPERATURE = 1.0
DEFAULT_MAX_OUTPUT_TOKENS = 1024
WORD_RETRY_LIMIT = 3  # resends for invalid words or unparseable replies
STALL_LIMIT = 10

_SCORE_RE = re.compile(r"(?<![\w.])(?:1(?:\.0{1,2})?|0(?:\.\d{1,2})?|\.\d{1,2})(?![\w.])")


def record_rng(seed: int, record_id: int) -> random.Random:
    """Child RNG for one record; stable regardless of batch parallelism."""
    return random.Random(f"{seed}:{record_id}")


@dataclass(frozen=True)
class RecordPlan:
    """Pre-drawn inputs for one record: what the batch will ask before any
    provider traffic happens."""

    id: int
    method: MethodKind
    target_score: Optional[float]  # None for supply-word (model assigns it)
    offered_words: Optional[tuple[PdtWord, ...]]  # word-review only
    supplied_word: Optional[PdtWord]  # supply-word only


def _draw_plan(method: MethodKind, word_list: WordList, record_id: int, rng: random.Random) -> RecordPlan:
    if method is MethodKind.WORD_REVIEW:
        target = round(rng.uniform(0.0, 1.0), 2)
        offered = tuple(sample(word_list, 10, rng))
        return RecordPlan(record_id, method, target, offered, None)
    if method is MethodKind.REVIEW_WORD:
        target = round(rng.uniform(0.0, 1.0), 2)
        return RecordPlan(record_id, method, target, None, None)
    word = sample(word_list, 1, rng)[0]
    return RecordPlan(record_id, method, None, None, word)


def plan_records(method: MethodKind, n: int, seed: int, word_list: WordList) -> list[RecordPlan]:
    """Deterministic per-record draws for a batch (dry-run view of run_batch)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [_draw_plan(method, word_list, i, record_rng(seed, i)) for i in range(1, n + 1)]


def build_system_prompt(plan: RecordPlan, product: str) -> str:
    if plan.method is MethodKind.WORD_REVIEW:
        words = ", ".join(w.text for w in plan.offered_words)
        return prompts.WORD_REVIEW_PROMPT.format(product=product, words=words) + "\n" + prompts.WORD_REVIEW_FORMAT
    if plan.method is MethodKind.REVIEW_WORD:
        raise ValueError("review-word prompt needs the full word list; use _review_word_system")
    return (
        prompts.SUPPLY_WORD_PROMPT.format(product=product, word=plan.supplied_word.text)
        + "\n"
        + prompts.SUPPLY_WORD_FORMAT
    )


def _review_word_system(word_list: WordList, product: str) -> str:
    words = ", ".join(word_list.texts())
    return prompts.REVIEW_WORD_PROMPT.format(product=product, words=words) + "\n" + prompts.REVIEW_WORD_FORMAT


# --- reply parsing -----------------------------------------------------------


def _labeled_parts(text: str) -> dict[str, str]:
    parts: dict[str, str] = {}
    for chunk in text.split("|||"):
        m = re.match(r"\s*(WORD|REVIEW|SCORE)\s*:\s*(.*)", chunk, re.DOTALL | re.IGNORECASE)
        if m and m.group(1).upper() not in parts:
            parts[m.group(1).upper()] = m.group(2).strip()
    return parts


def _first_member_match(text: str, candidates: list[str]) -> Optional[tuple[int, int, str]]:
    """Earliest vocabulary member in text; longer word wins position ties."""
    best: Optional[tuple[int, int, str]] = None
    for cand in candidates:
        m = re.search(r"\b" + re.escape(cand) + r"\b", text, re.IGNORECASE)
        if m is None:
            continue
        key = (m.start(), -len(cand))
        if best is None or key < (best[0], -len(best[2])):
            best = (m.start(), m.end(), cand)
    return best


def parse_word_review_reply(text: str, candidates: list[str]) -> Optional[tuple[str, str]]:
    """Extract (word, review); None when nothing usable is present."""
    parts = _labeled_parts(text)
    if "WORD" in parts and parts.get("REVIEW"):
        return parts["WORD"], parts["REVIEW"]
    hit = _first_member_match(text, candidates)
    if hit is None:
        return None
    start, end, cand = hit
    before = text[:start].strip(" \t\r\n\"'`:;,.-|")
    after = text[end:].strip(" \t\r\n\"'`:;,.-|")
    review = after if len(after) >= len(before) else before
    if not review:
        return None
    return cand, review


def parse_supply_word_reply(text: str) -> Optional[tuple[float, str]]:
    """Extract (score, review); score is the first in-range number."""
    parts = _labeled_parts(text)
    score: Optional[float] = None
    if "SCORE" in parts:
        m = _SCORE_RE.search(parts["SCORE"])
        if m:
            score = float(m.group(0))
    if score is None:
        m = _SCORE_RE.search(text)
        if m is None:
            return None
        score = float(m.group(0))
        if parts.get("REVIEW"):
            review = parts["REVIEW"]
        else:
            remainder = (text[: m.start()] + text[m.end():]).strip(" \t\r\n\"'`:;,.-|")
            remainder = re.sub(r"(?i)\bSCORE\b\s*[:\-]?\s*", "", remainder).strip()
            review = remainder
    else:
        review = parts.get("REVIEW", "").strip()
        if not review:
            remainder = re.sub(r"(?i)\bSCORE\s*:\s*[\d.]+", "", text).strip(" \t\r\n\"'`:;,.-|")
            review = remainder
    if not 0.0 <= score <= 1.0 or not review:
        return None
    return round(score, 2), review


# --- single-record generation ------------------------------------------------


@dataclass(frozen=True)
class GenSettings:
    model: str = "gpt-4o-mini"
    temperature: float = DEFAULT_GEN_TEMPERATURE
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS


def _generate_word_method(
    plan: RecordPlan,
    word_list: WordList,
    product: str,
    provider,
    settings: GenSettings,
) -> GenerationRecord:
    """Shared path for word-review and review-word records."""
    if plan.method is MethodKind.WORD_REVIEW:
        system = build_system_prompt(plan, product)
        candidates = [w.text for w in plan.offered_words]
        valid_pool = word_list  # validity is membership in the full list
    else:
        system = _review_word_system(word_list, product)
        candidates = word_list.texts()
        valid_pool = word_list
    req = ChatRequest(
        model=settings.model,
        system_prompt=system,
        user_prompt=f"{plan.target_score:.2f}",
        temperature=settings.temperature,
        max_output_tokens=settings.max_output_tokens,
    )
    prompt_tokens = completion_tokens = latency_ms = 0
    last_word = ""
    last_review = ""
    for attempt in range(WORD_RETRY_LIMIT + 1):
        resp = provider.complete(req)  # identical request on every resend
        prompt_tokens += resp.prompt_tokens
        completion_tokens += resp.completion_tokens
        latency_ms += resp.latency_ms
        parsed = parse_word_review_reply(resp.text, candidates)
        if parsed is None:
            last_word, last_review = "", ""
            continue
        word, review = parsed
        last_word, last_review = word, review
        valid, canonical = validate_choice(valid_pool, word)
        if valid:
            return GenerationRecord(
                id=plan.id,
                method=plan.method,
                target_score=plan.target_score,
                offered_words=tuple(candidates) if plan.method is MethodKind.WORD_REVIEW else None,
                word=canonical.text,
                word_valid=True,
                review=review,
                prompt_tokens=prompt_tokens,
                completion_tokens=completion_tokens,
                latency_ms=latency_ms,
                retries_used=attempt,
            )
    if not last_review:
        raise UnparseableReply(f"record {plan.id}: no parseable reply after {WORD_RETRY_LIMIT} retries")
    return GenerationRecord(
        id=plan.id,
        method=plan.method,
        target_score=plan.target_score,
        offered_words=tuple(candidates) if plan.method is MethodKind.WORD_REVIEW else None,
        word=last_word.strip(" \"'"),
        word_valid=False,
        review=last_review,
        prompt_tokens=prompt_tokens,
        completion_tokens=completion_tokens,
        latency_ms=latency_ms,
        retries_used=WORD_RETRY_LIMIT,
    )


def _generate_supply_word(
    plan: RecordPlan,
    product: str,
    provider,
    settings: GenSettings,
) -> GenerationRecord:
    req = ChatRequest(
        model=settings.model,
        system_prompt=build_system_prompt(plan, product),
        user_prompt=plan.supplied_word.text,
        temperature=settings.temperature,
        max_output_tokens=settings.max_output_tokens,
    )
    prompt_tokens = completion_tokens = latency_ms = 0
    for attempt in range(WORD_RETRY_LIMIT + 1):
        resp = provider.complete(req)
        prompt_tokens += resp.prompt_tokens
        completion_tokens += resp.completion_tokens
        latency_ms += resp.latency_ms
        parsed = parse_supply_word_reply(resp.text)
        if parsed is None:
            continue
        score, review = parsed
        return GenerationRecord(
            id=plan.id,
            method=MethodKind.SUPPLY_WORD,
            target_score=score,
            word=plan.supplied_word.text,
            word_valid=True,
            review=review,
            model_claimed_score=score,
            prompt_tokens=prompt_tokens,
            completion_tokens=completion_tokens,
            latency_ms=latency_ms,
            retries_used=attempt,
        )
    raise UnparseableReply(f"record {plan.id}: no score in [0,1] after {WORD_RETRY_LIMIT} retries")


def _generate(plan: RecordPlan, word_list: WordList, product: str, provider, settings: GenSettings) -> GenerationRecord:
    if plan.method is MethodKind.SUPPLY_WORD:
        return _generate_supply_word(plan, product, provider, settings)
    return _generate_word_method(plan, word_list, product, provider, settings)


def gen_word_review(
    word_list: WordList,
    target: float,
    product: str,
    provider,
    rng: random.Random,
    settings: GenSettings = GenSettings(),
    record_id: int = 1,
) -> GenerationRecord:
    """Offer 10 sampled words for the target score; validate the pick."""
    if not 0.0 <= target <= 1.0:
        raise ValueError(f"target {target} outside [0, 1]")
    offered = tuple(sample(word_list, 10, rng))
    plan = RecordPlan(record_id, MethodKind.WORD_REVIEW, target, offered, None)
    return _generate_word_method(plan, word_list, product, provider, settings)


def gen_review_word(
    word_list: WordList,
    target: float,
    product: str,
    provider,
    settings: GenSettings = GenSettings(),
    record_id: int = 1,
) -> GenerationRecord:
    """Generate the review first, then pick a word from the full list."""
    if not 0.0 <= target <= 1.0:
        raise ValueError(f"target {target} outside [0, 1]")
    plan = RecordPlan(record_id, MethodKind.REVIEW_WORD, target, None, None)
    return _generate_word_method(plan, word_list, product, provider, settings)


def gen_supply_word(
    word_list: WordList,
    product: str,
    provider,
    rng: random.Random,
    settings: GenSettings = GenSettings(),
    record_id: int = 1,
) -> GenerationRecord:
    """Supply one sampled word; the model assigns the sentiment score."""
    word = sample(word_list, 1, rng)[0]
    plan = RecordPlan(record_id, MethodKind.SUPPLY_WORD, None, None, word)
    return _generate_supply_word(plan, product, provider, settings)


# --- batch -------------------------------------------------------------------


class _StallCounter:
    def __init__(self, limit: int):
        self._limit = limit
        self._count = 0
        self._lock = threading.Lock()

    def failure(self) -> int:
        with self._lock:
            self._count += 1
            return self._count

    def success(self) -> None:
        with self._lock:
            self._count = 0

    @property
    def limit(self) -> int:
        return self._limit


def _run_one(plan, word_list, product, provider, settings, stall: _StallCounter) -> GenerationRecord:
    while True:
        try:
            rec = _generate(plan, word_list, product, provider, settings)
        except (AuthError, ScriptExhausted):
            raise
        except (ProviderError, UnparseableReply) as exc:
            n = stall.failure()
            if n >= stall.limit:
                raise PipelineStalled(f"{n} consecutive provider failures; last: {exc}") from exc
            continue
        stall.success()
        return rec


def run_batch(
    method: MethodKind,
    n: int,
    seed: int,
    provider,
    product: str = DEFAULT_PRODUCT,
    word_list: Optional[WordList] = None,
    settings: GenSettings = GenSettings(),
    parallelism: int = 4,
    stall_limit: int = STALL_LIMIT,
) -> list[GenerationRecord]:
    """Generate n records with gapless ids 1..n, emitted in id order."""
    from .words import load  # deferred to keep module import light

    if word_list is None:
        word_list = load("builtin")
    plans = plan_records(method, n, seed, word_list)
    stall = _StallCounter(stall_limit)
    workers = 1 if getattr(provider, "serial", False) else max(1, parallelism)
    if workers == 1:
        return [_run_one(p, word_list, product, provider, settings, stall) for p in plans]
    results: list[Optional[GenerationRecord]] = [None] * n
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(_run_one, p, word_list, product, provider, settings, stall): idx
            for idx, p in enumerate(plans)
        }
        done, not_done = wait(futures, return_when=FIRST_EXCEPTION)
        first_error = None
        for fut in done:
            exc = fut.exception()
            if exc is not None and first_error is None:
                first_error = exc
        if first_error is not None:
            for fut in not_done:
                fut.cancel()
            raise first_error
        for fut, idx in futures.items():
            results[idx] = fut.result()
    return results  # type: ignore[return-value]
