"""Provider contracts isolating every learned component, plus the
deterministic rule-based implementations used by tests and the
demo-without-models mode.

A provider is any object with the right methods and an ``identity`` string
(recorded in outputs for provenance). The rule scorers read a three-section
rules file and emit +5/-5 score matrices, so the whole pipeline runs
byte-reproducibly with no model weights.
"""

from __future__ import annotations

import hashlib
import math
import re
import unicodedata
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .core import EventLensError, Ontology, Sentence
from .extraction import (
    ArgumentInput,
    LabelScoreMatrix,
    OUTSIDE,
    QASpanScores,
    SPAN_TAGS,
    bio_tagset,
)
from .relations import LABEL_COREF, LABEL_NONE, LABEL_RELATED, PairScores
from .tokenization import Subword, is_punctuation_text

MATCH = 5.0
MISMATCH = -5.0
NULL_HIT = 10.0
NULL_MISS = -10.0

QUESTION_RE = re.compile(r"<s> (When|Where) did the (.*?) happen\? </s>")


class EmbeddingProvider(Protocol):
    identity: str

    def vectors(self, tokens: Sequence[str]) -> np.ndarray: ...


class TranslationProvider(Protocol):
    identity: str

    def translate(self, text: str, source_language: str) -> str: ...


class CacProvider(Protocol):
    """Cross-lingual alignment confidence: likelihood that foreign text
    conveys the same meaning as the English text, in [0, 1]."""

    identity: str

    def cac(self, english: str, foreign: str) -> float: ...


class PairScorer(Protocol):
    identity: str

    def score_pairs(
        self,
        anchor_texts: Sequence[str],
        anchor_types: Sequence[str],
        sentence: Sentence,
    ) -> PairScores: ...


@dataclass
class ProviderRegistry:
    """Every pluggable slot of the pipeline; all must be populated."""

    subword_tokenizer: object
    anchor_scorer: object
    argument_scorer: object
    pair_scorer: object
    qa_scorer: object
    embeddings: object
    translation: object
    cac: object

    def __post_init__(self):
        for name, value in vars(self).items():
            if value is None:
                raise ValueError(f"provider slot {name!r} is not populated")

    def provenance(self) -> dict[str, str]:
        return {name: getattr(value, "identity", "?") for name, value in vars(self).items()}


def strip_edge_punctuation(word: str) -> str:
    chars = list(word)
    while chars and unicodedata.category(chars[0]).startswith("P"):
        chars.pop(0)
    while chars and unicodedata.category(chars[-1]).startswith("P"):
        chars.pop()
    return "".join(chars)


def normalize_word(word: str) -> str:
    """Case-fold and strip punctuation from both ends for rule matching."""
    return strip_edge_punctuation(word).casefold()


def normalize_phrase(text: str) -> tuple[str, ...]:
    return tuple(normalize_word(w) for w in text.split() if normalize_word(w))


class RulesError(ValueError):
    pass


@dataclass(frozen=True)
class RuleSet:
    """Parsed rules file: triggers, argument phrases, and relations.

    Sections (tab-separated):
      [triggers]   trigger_word <TAB> event_type
      [arguments]  anchor <TAB> role <TAB> argument_phrase
                   (role may also be the pseudo-role "when" or "where",
                   which drives the question-answering scorer)
      [relations]  anchor <TAB> anchor <TAB> related-event|coreference
    """

    triggers: dict[str, str]
    arguments: dict[tuple[str, str], tuple[str, ...]]
    relations: dict[tuple[str, str], str]


def load_rules(path: str, ontology: Ontology | None = None) -> RuleSet:
    triggers: dict[str, str] = {}
    arguments: dict[tuple[str, str], tuple[str, ...]] = {}
    relations: dict[tuple[str, str], str] = {}
    section = None
    valid_roles = None
    if ontology is not None:
        valid_roles = set(ontology.argument_roles) | {"when", "where"}

    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1]
                if section not in ("triggers", "arguments", "relations"):
                    raise RulesError(f"{path}:{lineno}: unknown section {section!r}")
                continue
            fields = line.split("\t")
            if section == "triggers" and len(fields) == 2:
                key = normalize_word(fields[0])
                etype = fields[1].strip()
                if ontology is not None and etype not in ontology.event_types:
                    raise RulesError(f"{path}:{lineno}: unknown event type {etype!r}")
                if triggers.get(key, etype) != etype:
                    raise RulesError(f"{path}:{lineno}: conflicting rule for {key!r}")
                triggers[key] = etype
            elif section == "arguments" and len(fields) == 3:
                anchor, role, phrase = fields
                role = role.strip()
                if valid_roles is not None and role not in valid_roles:
                    raise RulesError(f"{path}:{lineno}: unknown role {role!r}")
                key = (normalize_word(anchor), role)
                value = normalize_phrase(phrase)
                if not value:
                    raise RulesError(f"{path}:{lineno}: empty argument phrase")
                if arguments.get(key, value) != value:
                    raise RulesError(f"{path}:{lineno}: conflicting rule for {key}")
                arguments[key] = value
            elif section == "relations" and len(fields) == 3:
                a, b, label = normalize_word(fields[0]), normalize_word(fields[1]), fields[2].strip()
                if label not in (LABEL_RELATED, LABEL_COREF):
                    raise RulesError(f"{path}:{lineno}: unknown relation label {label!r}")
                key = (a, b)
                if relations.get(key, label) != label:
                    raise RulesError(f"{path}:{lineno}: conflicting rule for {key}")
                relations[key] = label
            else:
                raise RulesError(f"{path}:{lineno}: malformed rule line {line!r}")
    return RuleSet(triggers, arguments, relations)


def _word_units(tokens: Sequence[Subword]) -> list[tuple[str, list[int]]]:
    """(word text, member token indices); lone units for unindexed tokens."""
    units: list[tuple[str, list[int]]] = []
    current: int | None = None
    for i, tok in enumerate(tokens):
        if tok.word_index is None:
            units.append((tok.text, [i]))
            current = None
        elif current is not None and tok.word_index == current:
            units[-1] = (units[-1][0] + tok.text, units[-1][1] + [i])
        else:
            units.append((tok.text, [i]))
            current = tok.word_index
    return units


def _trim_punctuation_tokens(tokens: Sequence[Subword], members: list[int]) -> list[int]:
    trimmed = list(members)
    while trimmed and is_punctuation_text(tokens[trimmed[0]].text):
        trimmed.pop(0)
    while trimmed and is_punctuation_text(tokens[trimmed[-1]].text):
        trimmed.pop()
    return trimmed or list(members)


def find_phrase_windows(
    tokens: Sequence[Subword], phrase: tuple[str, ...]
) -> list[tuple[int, int]]:
    """Token ranges (first, last) where the normalized words match the phrase.

    Edge tokens that are pure punctuation (a clitic period chunk, say) are
    trimmed so marked spans align with the matched words.
    """
    units = _word_units(tokens)
    words = [normalize_word(text) for text, _ in units]
    hits = []
    for start in range(len(words) - len(phrase) + 1):
        if tuple(words[start : start + len(phrase)]) == phrase:
            members = [i for _, idx in units[start : start + len(phrase)] for i in idx]
            members = _trim_punctuation_tokens(tokens, members)
            hits.append((members[0], members[-1]))
    return hits


class RuleAnchorScorer:
    """Marks B/I tags on words whose text matches a trigger rule."""

    def __init__(self, rules: RuleSet, ontology: Ontology):
        self.rules = rules
        self.tags = bio_tagset(sorted(ontology.event_types))
        self.tag_index = {t: k for k, t in enumerate(self.tags)}
        self.identity = "rule-anchor"

    def score_anchors(
        self, tokens: Sequence[Subword], sentence: Sentence
    ) -> LabelScoreMatrix:
        wanted = [OUTSIDE] * len(tokens)
        for text, members in _word_units(tokens):
            etype = self.rules.triggers.get(normalize_word(text))
            if etype is None:
                continue
            marked = _trim_punctuation_tokens(tokens, members)
            wanted[marked[0]] = f"B-{etype}"
            for i in marked[1:]:
                wanted[i] = f"I-{etype}"
        scores = np.full((len(tokens), len(self.tags)), MISMATCH)
        for row, tag in enumerate(wanted):
            scores[row, self.tag_index[tag]] = MATCH
        return LabelScoreMatrix(self.tags, scores)


class RuleArgumentScorer:
    """Marks B/I tags on phrase occurrences named by (anchor, role) rules."""

    def __init__(self, rules: RuleSet):
        self.rules = rules
        self.identity = "rule-argument"

    def score_arguments(
        self,
        query: ArgumentInput,
        role: str,
        event_type: str,
        tokens: Sequence[Subword],
        sentence: Sentence,
    ) -> LabelScoreMatrix:
        wanted = [OUTSIDE] * len(tokens)
        phrase = self.rules.arguments.get((normalize_word(query.anchor_text), role))
        if phrase:
            for first, last in find_phrase_windows(tokens, phrase):
                wanted[first] = "B"
                for i in range(first + 1, last + 1):
                    wanted[i] = "I"
        scores = np.full((len(query.tokens), len(SPAN_TAGS)), MISMATCH)
        tag_index = {t: k for k, t in enumerate(SPAN_TAGS)}
        for pos, orig in enumerate(query.sentence_token_index):
            tag = wanted[orig] if orig is not None else OUTSIDE
            scores[pos, tag_index[tag]] = MATCH
        return LabelScoreMatrix(SPAN_TAGS, scores)


class RulePairScorer:
    """Scores anchor pairs from (anchor, anchor) -> relation rules.

    Coreference rules apply symmetrically; related-event rules score the
    rule's direction and leave the reverse direction at none.
    """

    def __init__(self, rules: RuleSet):
        self.rules = rules
        self.identity = "rule-pair"

    def score_pairs(
        self,
        anchor_texts: Sequence[str],
        anchor_types: Sequence[str],
        sentence: Sentence,
    ) -> PairScores:
        words = [normalize_word(t) for t in anchor_texts]
        table = {}
        for i in range(len(words)):
            for j in range(len(words)):
                if i == j:
                    continue
                label = LABEL_NONE
                forward = self.rules.relations.get((words[i], words[j]))
                backward = self.rules.relations.get((words[j], words[i]))
                if forward == LABEL_COREF or backward == LABEL_COREF:
                    label = LABEL_COREF
                elif forward == LABEL_RELATED:
                    label = LABEL_RELATED
                table[(i, j)] = {
                    name: (MATCH if name == label else MISMATCH)
                    for name in (LABEL_NONE, LABEL_RELATED, LABEL_COREF)
                }
        return PairScores(table)


class RuleQAScorer:
    """Answers when/where questions from (anchor, when|where) rules."""

    def __init__(self, rules: RuleSet):
        self.rules = rules
        self.identity = "rule-qa"

    def score_question(
        self, question: str, tokens: Sequence[Subword], sentence: Sentence
    ) -> QASpanScores:
        match = QUESTION_RE.search(question)
        n = len(tokens)
        start = np.full(n, MISMATCH)
        end = np.full(n, MISMATCH)
        if match:
            kind = match.group(1).lower()
            anchor = normalize_word(match.group(2))
            phrase = self.rules.arguments.get((anchor, kind))
            if phrase:
                windows = find_phrase_windows(tokens, phrase)
                if windows:
                    first, last = windows[0]
                    start[first] = MATCH
                    end[last] = MATCH
                    return QASpanScores(start, end, NULL_MISS)
        return QASpanScores(start, end, NULL_HIT)


@dataclass(frozen=True)
class RuleScorerSet:
    anchor_scorer: RuleAnchorScorer
    argument_scorer: RuleArgumentScorer
    pair_scorer: RulePairScorer
    qa_scorer: RuleQAScorer


def load_rule_scorer(rules_file: str, ontology: Ontology) -> RuleScorerSet:
    """Build the full deterministic scorer set from one rules file."""
    rules = load_rules(rules_file, ontology)
    return RuleScorerSet(
        anchor_scorer=RuleAnchorScorer(rules, ontology),
        argument_scorer=RuleArgumentScorer(rules),
        pair_scorer=RulePairScorer(rules),
        qa_scorer=RuleQAScorer(rules),
    )


def hashed_embeddings(token: str, dimension: int) -> np.ndarray:
    """Deterministic pseudo-random unit vector seeded by the token bytes.

    Identical tokens get identical vectors, which makes identity-translated
    alignment fixtures self-checking.
    """
    if dimension < 8:
        raise ValueError("embedding dimension must be >= 8")
    digest = hashlib.sha256(token.encode("utf-8")).digest()
    seed = int.from_bytes(digest[:8], "big")
    rng = np.random.default_rng(seed)
    vec = rng.standard_normal(dimension)
    norm = np.linalg.norm(vec)
    if norm == 0.0:  # astronomically unlikely; reseed deterministically
        rng = np.random.default_rng(seed + 1)
        vec = rng.standard_normal(dimension)
        norm = np.linalg.norm(vec)
    return vec / norm


class HashedEmbeddingProvider:
    def __init__(self, dimension: int = 64):
        if dimension < 8:
            raise ValueError("embedding dimension must be >= 8")
        self.dimension = dimension
        self.identity = f"hashed-embeddings:{dimension}"

    def vectors(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            return np.zeros((0, self.dimension))
        return np.stack([hashed_embeddings(t, self.dimension) for t in tokens])


class FileEmbeddingProvider:
    """Embedding fixtures from a text file: the first line declares the
    dimension, then one `token<TAB>v1 v2 ...` entry per line (UTF-8).
    Unknown tokens are an error naming the token — fixtures are meant to be
    complete for their test."""

    def __init__(self, table: dict[str, np.ndarray], dimension: int, identity: str = "file-embeddings"):
        self.table = table
        self.dimension = dimension
        self.identity = identity

    @classmethod
    def load(cls, path: str) -> "FileEmbeddingProvider":
        table: dict[str, np.ndarray] = {}
        with open(path, encoding="utf-8") as f:
            header = f.readline().strip()
            try:
                dimension = int(header)
            except ValueError as exc:
                raise ValueError(f"{path}:1: dimension header expected, got {header!r}") from exc
            for lineno, line in enumerate(f, 2):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                try:
                    token, values = line.split("\t")
                    vector = np.array([float(v) for v in values.split()], dtype=float)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad embedding line") from exc
                if vector.shape != (dimension,):
                    raise ValueError(
                        f"{path}:{lineno}: expected {dimension} values, got {vector.shape[0]}"
                    )
                table[token] = vector
        return cls(table, dimension, identity=f"file-embeddings:{path}")

    def vectors(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            return np.zeros((0, self.dimension))
        rows = []
        for token in tokens:
            if token not in self.table:
                raise EventLensError(f"no fixture embedding for token {token!r}")
            rows.append(self.table[token])
        return np.stack(rows)


class IdentityTranslationProvider:
    """Test stub: the "translation" is the source text itself."""

    identity = "identity-translation"

    def translate(self, text: str, source_language: str) -> str:
        return text


class DictionaryTranslationProvider:
    """Word-by-word glossing from a `foreign<TAB>english` dictionary file."""

    def __init__(self, mapping: dict[str, str], identity: str = "dictionary-translation"):
        self.mapping = {k.casefold(): v for k, v in mapping.items()}
        self.identity = identity

    @classmethod
    def load(cls, path: str) -> "DictionaryTranslationProvider":
        mapping = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    foreign, english = line.split("\t")
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad dictionary line") from exc
                mapping[foreign] = english
        return cls(mapping)

    def translate(self, text: str, source_language: str) -> str:
        out = []
        for word in text.split():
            core = normalize_word(word)
            out.append(self.mapping.get(core, word))
        return " ".join(out)


def _clamped_cosine(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(min(max(float(a @ b) / (na * nb), 0.0), 1.0))


class EmbeddingCosineCac:
    """Reference cac: cosine of mean word-embedding vectors, clamped to [0,1]."""

    def __init__(self, embeddings: EmbeddingProvider):
        self.embeddings = embeddings
        self.identity = f"cosine-cac({embeddings.identity})"

    def cac(self, english: str, foreign: str) -> float:
        e_words = [normalize_word(w) for w in english.split() if normalize_word(w)]
        f_words = [normalize_word(w) for w in foreign.split() if normalize_word(w)]
        if not e_words or not f_words:
            return 0.0
        e_vec = np.asarray(self.embeddings.vectors(e_words)).mean(axis=0)
        f_vec = np.asarray(self.embeddings.vectors(f_words)).mean(axis=0)
        return _clamped_cosine(e_vec, f_vec)


class TableCac:
    """Table-driven cac fixture: exact (english, foreign) lookups."""

    def __init__(self, table: dict[tuple[str, str], float], default: float = 0.0):
        self.table = {(e.casefold(), f.casefold()): v for (e, f), v in table.items()}
        self.default = default
        self.identity = "table-cac"

    @classmethod
    def load(cls, path: str, default: float = 0.0) -> "TableCac":
        table = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                try:
                    english, foreign, value = line.split("\t")
                    table[(english, foreign)] = float(value)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad cac line {line!r}") from exc
        return cls(table, default)

    def cac(self, english: str, foreign: str) -> float:
        value = self.table.get((english.casefold(), foreign.casefold()), self.default)
        if math.isnan(value) or not 0.0 <= value <= 1.0:
            raise ValueError(f"cac value out of range for ({english!r}, {foreign!r})")
        return value
