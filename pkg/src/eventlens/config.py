"""Application configuration: one JSON file selects providers, data files,
and numeric settings for the pipeline, index, and service.

Relative paths are resolved against the config file's directory. See the
README for the full schema.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .core import EventLensError, Ontology, load_ontology
from .indexing import DEFAULT_BETA, Gazetteer, TrafficLightThresholds
from .pipeline import Pipeline
from .providers import (
    DictionaryTranslationProvider,
    EmbeddingCosineCac,
    FileEmbeddingProvider,
    HashedEmbeddingProvider,
    IdentityTranslationProvider,
    ProviderRegistry,
    TableCac,
    load_rule_scorer,
)
from .queries import load_stopwords
from .summarize import load_category_table
from .tokenization import DEFAULT_SCRIPTIO_CONTINUA, LabelStats, RuleSubwordTokenizer

CONFIG_FORMAT_VERSION = 1


@dataclass
class AppContext:
    """Everything the CLI and service need, built from one config file."""

    ontology: Ontology
    registry: ProviderRegistry
    pipeline: Pipeline
    label_stats: LabelStats
    gazetteer: Gazetteer
    categories: dict[str, str]
    stopwords: frozenset[str]
    beta: float = DEFAULT_BETA
    thresholds: TrafficLightThresholds = field(default_factory=TrafficLightThresholds)
    supported_languages: frozenset[str] | None = None


def _resolve(base_dir: str, path: str | None) -> str | None:
    if path is None:
        return None
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


def load_context(config_path: str) -> AppContext:
    with open(config_path, encoding="utf-8") as f:
        raw = json.load(f)
    if raw.get("format_version") != CONFIG_FORMAT_VERSION:
        raise EventLensError(
            f"unsupported config format_version: {raw.get('format_version')!r}"
        )
    base_dir = os.path.dirname(os.path.abspath(config_path))
    providers = raw.get("providers", {})

    ontology = load_ontology(_resolve(base_dir, raw["ontology"]))

    stats_path = _resolve(base_dir, raw.get("label_stats"))
    label_stats = LabelStats.load(stats_path) if stats_path else LabelStats({"O": 1})

    tokenizer_cfg = providers.get("tokenizer", {"kind": "rule", "chunk": 3})
    if tokenizer_cfg.get("kind") != "rule":
        raise EventLensError(f"unknown tokenizer provider: {tokenizer_cfg!r}")
    tokenizer = RuleSubwordTokenizer(chunk=int(tokenizer_cfg.get("chunk", 3)))

    scorers_cfg = providers.get("scorers", {"kind": "rules"})
    if scorers_cfg.get("kind") == "rules":
        rules_path = _resolve(base_dir, scorers_cfg.get("path") or raw.get("rules"))
        if rules_path is None:
            raise EventLensError("rule scorers need a rules file path")
        scorers = load_rule_scorer(rules_path, ontology)
        anchor_scorer = scorers.anchor_scorer
        argument_scorer = scorers.argument_scorer
        pair_scorer = scorers.pair_scorer
        qa_scorer = scorers.qa_scorer
    elif scorers_cfg.get("kind") == "remote":
        from .remote import RemoteProviderClient, RemoteScorerSet

        client = RemoteProviderClient(scorers_cfg["argv"])
        remote = RemoteScorerSet(client)
        anchor_scorer = remote.anchor_scorer
        argument_scorer = remote.argument_scorer
        pair_scorer = remote.pair_scorer
        qa_scorer = remote.qa_scorer
    else:
        raise EventLensError(f"unknown scorer provider: {scorers_cfg!r}")

    embeddings_cfg = providers.get("embeddings", {"kind": "hashed", "dimension": 64})
    if embeddings_cfg.get("kind") == "hashed":
        embeddings = HashedEmbeddingProvider(int(embeddings_cfg.get("dimension", 64)))
    elif embeddings_cfg.get("kind") == "file":
        embeddings = FileEmbeddingProvider.load(_resolve(base_dir, embeddings_cfg["path"]))
    else:
        raise EventLensError(f"unknown embedding provider: {embeddings_cfg!r}")

    translation_cfg = providers.get("translation", {"kind": "identity"})
    if translation_cfg.get("kind") == "identity":
        translation = IdentityTranslationProvider()
    elif translation_cfg.get("kind") == "dictionary":
        translation = DictionaryTranslationProvider.load(
            _resolve(base_dir, translation_cfg["path"])
        )
    elif translation_cfg.get("kind") == "none":
        translation = _NoTranslation()
    else:
        raise EventLensError(f"unknown translation provider: {translation_cfg!r}")

    cac_cfg = providers.get("cac", {"kind": "cosine"})
    if cac_cfg.get("kind") == "cosine":
        cac = EmbeddingCosineCac(embeddings)
    elif cac_cfg.get("kind") == "table":
        cac = TableCac.load(
            _resolve(base_dir, cac_cfg["path"]), float(cac_cfg.get("default", 0.0))
        )
    else:
        raise EventLensError(f"unknown cac provider: {cac_cfg!r}")

    registry = ProviderRegistry(
        subword_tokenizer=tokenizer,
        anchor_scorer=anchor_scorer,
        argument_scorer=argument_scorer,
        pair_scorer=pair_scorer,
        qa_scorer=qa_scorer,
        embeddings=embeddings,
        translation=translation,
        cac=cac,
    )

    itermax_cfg = raw.get("itermax", {})
    scriptio = frozenset(raw.get("scriptio_continua", DEFAULT_SCRIPTIO_CONTINUA))
    pipeline = Pipeline(
        ontology=ontology,
        registry=registry,
        label_stats=label_stats,
        scriptio_continua=scriptio,
        itermax_iterations=int(itermax_cfg.get("iterations", 2)),
        itermax_alpha=float(itermax_cfg.get("alpha", 0.9)),
    )

    gaz_path = _resolve(base_dir, raw.get("gazetteer"))
    gazetteer = Gazetteer.load(gaz_path) if gaz_path else Gazetteer()

    categories_path = _resolve(base_dir, raw.get("categories"))
    categories = load_category_table(categories_path) if categories_path else {}

    lights = raw.get("traffic_lights", {})
    thresholds = TrafficLightThresholds(
        green=float(lights.get("green", 0.5)), yellow=float(lights.get("yellow", 0.25))
    )

    languages = raw.get("languages")
    return AppContext(
        ontology=ontology,
        registry=registry,
        pipeline=pipeline,
        label_stats=label_stats,
        gazetteer=gazetteer,
        categories=categories,
        stopwords=load_stopwords(_resolve(base_dir, raw.get("stopwords"))),
        beta=float(raw.get("beta", DEFAULT_BETA)),
        thresholds=thresholds,
        supported_languages=frozenset(languages) if languages else None,
    )


class _NoTranslation:
    """Placeholder when no translation backend is deployed."""

    identity = "no-translation"
    unavailable = True

    def translate(self, text: str, source_language: str) -> str:
        raise EventLensError("no translation provider configured")
