"""PDT reaction-card vocabulary: loading, sampling, membership validation.

The builtin list ships as a data file in the same ``word,polarity`` format
accepted for user-supplied lists, so paper-scale runs and custom vocabularies
go through one code path.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .errors import DuplicateWord, EmptyList, KTooLarge, MalformedLine

POLARITIES = ("positive", "negative", "neutral")

# Characters LLMs like to wrap word choices in.
_TRIM_CHARS = "\"'`“”‘’.,;: \t\r\n"


@dataclass(frozen=True)
class PdtWord:
    """One vocabulary entry; ``text`` keeps the canonical casing."""

    text: str
    polarity: str

    def __post_init__(self) -> None:
        if not self.text or self.text != self.text.strip():
            raise MalformedLine(f"word text must be non-empty and trimmed: {self.text!r}")
        if self.polarity not in POLARITIES:
            raise MalformedLine(f"unknown polarity {self.polarity!r} for {self.text!r}")


class WordList:
    """Immutable, case-insensitively unique collection of PdtWords."""

    def __init__(self, words: Iterable[PdtWord], source: str = "memory"):
        self.words: tuple[PdtWord, ...] = tuple(words)
        self.source = source
        if not self.words:
            raise EmptyList(f"word list from {source!r} is empty")
        self._by_folded: dict[str, PdtWord] = {}
        for w in self.words:
            key = w.text.casefold()
            if key in self._by_folded:
                raise DuplicateWord(f"duplicate word (case-insensitive): {w.text!r} in {source!r}")
            self._by_folded[key] = w

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def texts(self) -> list[str]:
        return [w.text for w in self.words]

    def polarity_counts(self) -> dict[str, int]:
        counts = {p: 0 for p in POLARITIES}
        for w in self.words:
            counts[w.polarity] += 1
        return counts


def _parse_lines(lines: Iterable[str], source: str) -> WordList:
    words: list[PdtWord] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise MalformedLine(f"{source}:{lineno}: expected 'word,polarity', got {line!r}")
        text, polarity = parts[0].strip(), parts[1].strip().lower()
        if not text or polarity not in POLARITIES:
            raise MalformedLine(f"{source}:{lineno}: expected 'word,polarity', got {line!r}")
        words.append(PdtWord(text, polarity))
    return WordList(words, source=source)


def load(path_or_builtin: str | Path = "builtin") -> WordList:
    """Load a word list from a file, or the builtin 118-word set."""
    if str(path_or_builtin) == "builtin":
        data = resources.files("pdtsynth.data").joinpath("pdt_words.txt").read_text("utf-8")
        return _parse_lines(data.splitlines(), source="builtin")
    path = Path(path_or_builtin)
    with open(path, encoding="utf-8") as fh:
        return _parse_lines(fh, source=str(path))


def sample(word_list: WordList, k: int, rng: random.Random) -> list[PdtWord]:
    """Draw k distinct words uniformly without replacement."""
    if k < 1 or k > len(word_list):
        raise KTooLarge(f"k={k} outside 1..{len(word_list)}")
    return rng.sample(list(word_list.words), k)


def validate_choice(word_list: WordList, candidate: str) -> tuple[bool, Optional[PdtWord]]:
    """Membership test tolerant of quotes/whitespace noise in LLM output.

    Returns (valid, canonical entry or None).
    """
    cleaned = candidate.strip(_TRIM_CHARS)
    hit = word_list._by_folded.get(cleaned.casefold())
    return (hit is not None), hit
