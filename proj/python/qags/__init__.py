"""Question-answering based factual consistency scoring for summaries."""

from ._core import (
    AllGenerationsFailed,
    AnswerCandidate,
    BackendError,
    BackendRefused,
    BackendUnavailable,
    DegenerateInput,
    HttpBackend,
    ProtocolError,
    QaBackend,
    QagsError,
    QgBackend,
    ScoringConfig,
    ScriptedBackend,
    SpanMatchQa,
    TemplateQg,
    exact_match,
    extract_candidates,
    human_score,
    krippendorff_alpha,
    normalize_answer,
    pearson,
    score,
    score_batch,
    token_f1,
    tokenize,
)

__all__ = [
    "AllGenerationsFailed",
    "AnswerCandidate",
    "BackendError",
    "BackendRefused",
    "BackendUnavailable",
    "DegenerateInput",
    "HttpBackend",
    "ProtocolError",
    "QaBackend",
    "QagsError",
    "QgBackend",
    "ScoringConfig",
    "ScriptedBackend",
    "SpanMatchQa",
    "TemplateQg",
    "exact_match",
    "extract_candidates",
    "human_score",
    "krippendorff_alpha",
    "normalize_answer",
    "pearson",
    "score",
    "score_batch",
    "token_f1",
    "tokenize",
]
