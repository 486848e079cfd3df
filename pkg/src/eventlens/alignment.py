"""Cross-lingual word alignment and span projection.

Alignment needs no parallel training data: token embeddings from a shared
multilingual space are compared by cosine similarity and matched by
iterated argmax agreement. Anchor/argument spans are then carried into the
translation through the resulting token pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import EventLensError, Span
from .tokenization import Subword, is_punctuation_text

DEFAULT_ITERATIONS = 2
DEFAULT_ALPHA = 0.9


@dataclass(frozen=True)
class Alignment:
    """Set of (source token index, target token index) pairs."""

    pairs: frozenset[tuple[int, int]]

    def targets_for(self, source_indices: Sequence[int]) -> list[int]:
        wanted = set(source_indices)
        return sorted(j for i, j in self.pairs if i in wanted)


def similarity_matrix(
    src_vectors: np.ndarray,
    tgt_vectors: np.ndarray,
    src_tokens: Sequence[str] | None = None,
    tgt_tokens: Sequence[str] | None = None,
) -> np.ndarray:
    """Pairwise cosine similarity, rows = source tokens, cols = target."""
    src = np.asarray(src_vectors, dtype=float)
    tgt = np.asarray(tgt_vectors, dtype=float)
    if src.ndim != 2 or tgt.ndim != 2 or src.shape[1] != tgt.shape[1]:
        raise ValueError("embedding matrices must be 2-D with equal dimension")

    def _norms(matrix: np.ndarray, tokens: Sequence[str] | None, side: str) -> np.ndarray:
        norms = np.linalg.norm(matrix, axis=1)
        for idx in np.nonzero(norms == 0.0)[0]:
            name = tokens[idx] if tokens is not None else f"#{idx}"
            raise EventLensError(f"zero-norm embedding for {side} token {name!r}")
        return norms

    src_norms = _norms(src, src_tokens, "source")
    tgt_norms = _norms(tgt, tgt_tokens, "target")
    return (src @ tgt.T) / np.outer(src_norms, tgt_norms)


def argmax_intersection(matrix: np.ndarray) -> set[tuple[int, int]]:
    """Pairs where row and column argmax agree; ties go to the lowest index."""
    m = np.asarray(matrix, dtype=float)
    if m.size == 0:
        return set()
    row_best = m.argmax(axis=1)
    col_best = m.argmax(axis=0)
    return {
        (i, j) for i, j in enumerate(row_best) if col_best[j] == i
    }


def itermax(
    matrix: np.ndarray,
    iterations: int = DEFAULT_ITERATIONS,
    alpha: float = DEFAULT_ALPHA,
) -> Alignment:
    """Iterated argmax-agreement alignment.

    Each round rebuilds the similarity matrix: cells whose source and
    target are both aligned already are zeroed, cells with exactly one
    aligned endpoint are discounted by ``alpha``, and the argmax
    agreement of the result joins the alignment. Stops early once a round
    adds nothing.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    m = np.asarray(matrix, dtype=float)
    pairs: set[tuple[int, int]] = set()
    aligned_rows: set[int] = set()
    aligned_cols: set[int] = set()
    for _ in range(iterations):
        adjusted = m.copy()
        if aligned_rows or aligned_cols:
            row_mask = np.zeros(m.shape[0], dtype=bool)
            row_mask[sorted(aligned_rows)] = True
            col_mask = np.zeros(m.shape[1], dtype=bool)
            col_mask[sorted(aligned_cols)] = True
            adjusted[row_mask[:, None] & col_mask[None, :]] = 0.0
            adjusted[row_mask[:, None] ^ col_mask[None, :]] *= alpha
        added = False
        for i, j in argmax_intersection(adjusted):
            # Cells zeroed above can win an all-zero row/column argmax;
            # such pairs are artifacts, not matches.
            if i in aligned_rows and j in aligned_cols:
                continue
            if (i, j) not in pairs:
                pairs.add((i, j))
                added = True
        if not added:
            break
        aligned_rows = {i for i, _ in pairs}
        aligned_cols = {j for _, j in pairs}
    return Alignment(frozenset(pairs))


def _covering_token_range(tokens: Sequence[Subword], span: Span) -> list[int]:
    return [i for i, tok in enumerate(tokens) if tok.span.overlaps(span)]


def project_span(
    span: Span,
    src_tokens: Sequence[Subword],
    tgt_tokens: Sequence[Subword],
    alignment: Alignment,
) -> Span | None:
    """Carry a source span into the target via aligned token pairs.

    The target span runs from the first to the last target token aligned
    to any source token under the span; None when nothing is aligned.
    """
    source_indices = _covering_token_range(src_tokens, span)
    targets = alignment.targets_for(source_indices)
    if not targets:
        return None
    return Span(tgt_tokens[targets[0]].span.start, tgt_tokens[targets[-1]].span.end)


def pool_subwords_to_words(
    tokens: Sequence[Subword], vectors: np.ndarray
) -> tuple[list[Subword], np.ndarray]:
    """Mean-pool subword vectors per word, giving word-level alignment units.

    Tokens without a word index (scriptio-continua) and punctuation-only
    tokens stay as their own units, so projected spans never swallow a
    neighbouring period or comma.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.shape[0] != len(tokens):
        raise ValueError("one vector per token required")
    units: list[Subword] = []
    pooled: list[np.ndarray] = []
    group: list[int] = []

    def _flush():
        if not group:
            return
        first, last = tokens[group[0]], tokens[group[-1]]
        text = "".join(tokens[i].text for i in group)
        units.append(
            Subword(text, Span(first.span.start, last.span.end), first.word_index)
        )
        pooled.append(vectors[group].mean(axis=0))

    current: int | None = None
    for i, tok in enumerate(tokens):
        if tok.word_index is None or is_punctuation_text(tok.text):
            _flush()
            group = []
            current = None
            units.append(tok)
            pooled.append(vectors[i])
        elif tok.word_index != current or not group:
            _flush()
            group = [i]
            current = tok.word_index
        else:
            group.append(i)
    _flush()
    return units, np.array(pooled)
