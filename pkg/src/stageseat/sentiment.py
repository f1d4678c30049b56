"""Deterministic lexicon-and-rules sentiment scorer.

A token with a valence gets adjusted by two independent rules before it
is summed:

* negation: any negator within the 3 preceding tokens multiplies the
  valence by -0.75 (the nearest negator counts once);
* modifiers: the nearest preceding non-negator token, if it is an
  intensifier or downtoner, multiplies the valence by its factor.

The raw sum s is squashed to a compound score s / sqrt(s^2 + 15) in
(-1, 1) and labelled positive / negative / neutral with an inclusive
+-0.05 neutral band.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import FormatError

NEGATION_FACTOR = -0.75
NEGATION_WINDOW = 3
NORMALIZATION_ALPHA = 15.0
POSITIVE_THRESHOLD = 0.05
NEGATIVE_THRESHOLD = -0.05

_TOKEN_SPLIT = re.compile(r"[^a-z0-9']+")
_CONTRACTION = re.compile(r"(?<=[a-z])n't$")


@dataclass
class Lexicon:
    valences: dict[str, float] = field(default_factory=dict)
    negators: set[str] = field(default_factory=set)
    intensifiers: dict[str, float] = field(default_factory=dict)
    downtoners: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class SentimentScore:
    raw_sum: float
    compound: float
    label: str
    hit_count: int


@dataclass(frozen=True)
class AggregateSentiment:
    n_reviews: int
    n_positive: int
    n_negative: int
    n_neutral: int
    mean_compound: float


def tokenize(text: str) -> list[str]:
    """Lowercase, split on non [a-z0-9'], break the "n't" suffix out."""
    out: list[str] = []
    for raw in _TOKEN_SPLIT.split(text.lower()):
        if not raw:
            continue
        m = _CONTRACTION.search(raw)
        if m:
            stem = raw[: m.start()]
            if stem:
                out.append(stem)
            out.append("n't")
        else:
            out.append(raw)
    return out


def load_lexicon(source: IO[bytes] | IO[str]) -> Lexicon:
    """Parse TSV lines "token<TAB>kind<TAB>value"; later lines win."""
    lex = Lexicon()
    for line_no, line in enumerate(source, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise FormatError(line_no, f"expected 3 tab-separated fields, got {len(parts)}")
        token, kind, raw_value = parts[0].strip().lower(), parts[1].strip(), parts[2].strip()
        if not token:
            raise FormatError(line_no, "empty token")
        if kind == "negator":
            _drop(lex, token)
            lex.negators.add(token)
            continue
        try:
            value = float(raw_value)
        except ValueError:
            raise FormatError(line_no, f"bad numeric value {raw_value!r}") from None
        if kind == "valence":
            if not -4.0 <= value <= 4.0:
                raise FormatError(line_no, f"valence {value} outside [-4, 4]")
            _drop(lex, token)
            lex.valences[token] = value
        elif kind == "intensifier":
            if value <= 1.0:
                raise FormatError(line_no, f"intensifier multiplier {value} must be > 1")
            _drop(lex, token)
            lex.intensifiers[token] = value
        elif kind == "downtoner":
            if not 0.0 < value < 1.0:
                raise FormatError(line_no, f"downtoner multiplier {value} must be in (0, 1)")
            _drop(lex, token)
            lex.downtoners[token] = value
        else:
            raise FormatError(line_no, f"unknown kind {kind!r}")
    return lex


def _drop(lex: Lexicon, token: str):
    # A later entry of any kind replaces whatever kind the token had before.
    lex.valences.pop(token, None)
    lex.negators.discard(token)
    lex.intensifiers.pop(token, None)
    lex.downtoners.pop(token, None)


def score_text(lex: Lexicon, text: str) -> SentimentScore:
    tokens = tokenize(text)
    raw_sum = 0.0
    hits = 0
    for i, tok in enumerate(tokens):
        v = lex.valences.get(tok)
        if v is None:
            continue
        hits += 1
        window = tokens[max(0, i - NEGATION_WINDOW): i]
        # Modifier: nearest preceding non-negator token in the window.
        for prev in reversed(window):
            if prev in lex.negators:
                continue
            if prev in lex.intensifiers:
                v *= lex.intensifiers[prev]
            elif prev in lex.downtoners:
                v *= lex.downtoners[prev]
            break
        if any(t in lex.negators for t in window):
            v *= NEGATION_FACTOR
        raw_sum += v
    compound = normalize(raw_sum)
    return SentimentScore(raw_sum=raw_sum, compound=compound,
                          label=classify(compound), hit_count=hits)


def normalize(raw_sum: float) -> float:
    return raw_sum / math.sqrt(raw_sum * raw_sum + NORMALIZATION_ALPHA)


def classify(compound: float) -> str:
    if compound >= POSITIVE_THRESHOLD:
        return "positive"
    if compound <= NEGATIVE_THRESHOLD:
        return "negative"
    return "neutral"


def aggregate_reviews(scores: Iterable[SentimentScore]) -> AggregateSentiment:
    scores = list(scores)
    counts = {"positive": 0, "negative": 0, "neutral": 0}
    for s in scores:
        counts[s.label] += 1
    mean = sum(s.compound for s in scores) / len(scores) if scores else 0.0
    return AggregateSentiment(
        n_reviews=len(scores),
        n_positive=counts["positive"],
        n_negative=counts["negative"],
        n_neutral=counts["neutral"],
        mean_compound=mean,
    )


def load_seed_lexicon() -> Lexicon:
    """The lexicon shipped with the package (lexicon/seed.tsv)."""
    import importlib.resources

    ref = importlib.resources.files("stageseat").joinpath("lexicon/seed.tsv")
    with ref.open("rb") as fh:
        return load_lexicon(fh)
