"""End-to-end pipeline: ingest through annotation, embeddings, similarity,
entity overlap, polarity, and rendered reports, in one deterministic run.

Every output is a pure function of (corpus, config), so two runs over the
same inputs produce byte-identical files.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from pathlib import Path

from . import corpus as corpus_mod
from . import entities as ent_mod
from . import polarity as pol_mod
from . import report
from .annotation import annotate_corpus, load_annotations, save_annotations
from .config import RunConfig, serialize_config
from .embedding import embed_annotations, load_embeddings, save_embeddings
from .entities import AliasMap, load_aliases_csv
from .providers import (
    FixtureChatProvider,
    HashedEmbeddingProvider,
    HttpChatProvider,
    HttpEmbeddingProvider,
    SyntheticChatProvider,
)
from .similarity import org_vectors, windowed_max_similarity

logger = logging.getLogger(__name__)

SIMILARITY_COLUMNS = (
    "org_x", "org_y", "tag", "n_embedded", "match_rate",
    "median_matched", "median_all", "ci_low", "ci_high",
)
JACCARD_COLUMNS = ("org_x", "org_y", "global_jaccard", "windowed_median", "n_days")
POLARITY_COLUMNS = (
    "org", "entity", "period", "n_pos", "n_neg", "n_total", "ps", "delta_ps",
)
ORG_COLUMNS = ("org", "micro_ps", "macro_ps", "n_entities")


def build_chat_provider(cfg: RunConfig):
    if cfg.provider_kind == "synthetic":
        return SyntheticChatProvider(model_name=cfg.provider_model)
    if cfg.provider_kind == "fixtures":
        if not cfg.provider_fixtures_dir:
            raise ValueError("provider_fixtures_dir is required for fixtures provider")
        return FixtureChatProvider(cfg.provider_fixtures_dir, model_name=cfg.provider_model)
    return HttpChatProvider(
        cfg.provider_config(), api_key=cfg.api_key, seed=cfg.analysis.seed
    )


def build_embedding_provider(cfg: RunConfig):
    if cfg.embedding_kind == "hashed":
        return HashedEmbeddingProvider(dim=cfg.embedding_dim)
    return HttpEmbeddingProvider(
        cfg.embedding_endpoint, dim=cfg.embedding_dim, seed=cfg.analysis.seed
    )


def load_alias_map(cfg: RunConfig) -> AliasMap:
    if cfg.aliases_file:
        return load_aliases_csv(cfg.aliases_file)
    logger.info("no aliases file configured; treating every entity as political")
    return AliasMap.empty()


def _org_pairs(corpus: corpus_mod.Corpus) -> list[tuple[str, str]]:
    """Ordered org pairs within each country, in sorted order."""
    by_country: dict[str, list[str]] = {}
    for org in corpus.orgs():
        country = next(
            (a.country for a in corpus.by_org(org)), ""
        )
        by_country.setdefault(country, []).append(org)
    pairs = []
    for country in sorted(by_country):
        orgs = sorted(by_country[country])
        pairs.extend(
            (x, y) for x, y in itertools.permutations(orgs, 2)
        )
    return pairs


@dataclass(frozen=True)
class PipelineSummary:
    n_articles: int
    n_rejections: int
    n_annotations: int
    n_similarity_results: int
    n_org_reports: int
    out_dir: Path


def run_all(cfg: RunConfig, store_dir: str | Path, out_dir: str | Path) -> PipelineSummary:
    """Execute every pipeline stage, writing all artifacts under out_dir."""
    store = Path(store_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "run_config.txt").write_text(serialize_config(cfg), encoding="utf-8")

    # Ingest: either a configured raw input file, or a pre-built store.
    n_rejections = 0
    if cfg.input_file:
        result = corpus_mod.ingest(cfg.input_file, (cfg.date_from, cfg.date_to))
        corpus_mod.write_store(result, store)
        corpus = result.corpus
        n_rejections = len(result.rejections)
        logger.info("ingested %d articles (%d rejected)", len(corpus), n_rejections)
    else:
        corpus = corpus_mod.load_store(store)
        logger.info("loaded %d articles from store", len(corpus))

    # Annotate (cache under the configured cache dir), then embed.
    annotations_path = store / "annotations.jsonl"
    chat = build_chat_provider(cfg)
    annotations = annotate_corpus(corpus, chat, cfg.provider_config())
    save_annotations(annotations, annotations_path)
    annotations = load_annotations(annotations_path)

    embedder = build_embedding_provider(cfg)
    embeddings_path = store / "embeddings.jsonl"
    embeddings = embed_annotations(annotations, embedder)
    save_embeddings(embeddings, embeddings_path, dim=embedder.dim, provider_name=embedder.name)
    embeddings, _ = load_embeddings(embeddings_path)

    aliases = load_alias_map(cfg)
    pairs = _org_pairs(corpus)

    # Topical similarity per pair and tag.
    sim_dir = out / "similarity"
    sim_dir.mkdir(exist_ok=True)
    sim_rows = []
    for org_x, org_y in pairs:
        for tag in ("claim", "what", "why"):
            res = windowed_max_similarity(
                org_vectors(corpus, embeddings, org_x, tag),
                org_vectors(corpus, embeddings, org_y, tag),
                cfg.analysis,
                org_x=org_x,
                org_y=org_y,
                tag=tag,
            )
            report.export_table(
                [res.to_json_dict()], "json", sim_dir / f"{org_x}-{org_y}-{tag}.json"
            )
            sim_rows.append(
                {
                    "org_x": org_x, "org_y": org_y, "tag": tag,
                    "n_embedded": res.n_embedded, "match_rate": res.match_rate,
                    "median_matched": res.median_matched, "median_all": res.median_all,
                    "ci_low": None if res.ci is None else res.ci[0],
                    "ci_high": None if res.ci is None else res.ci[1],
                }
            )
    report.export_table(sim_rows, "csv", out / "similarity.csv", SIMILARITY_COLUMNS)

    # Entity overlap per pair: one global top-k scalar plus the windowed
    # distribution.
    ent_dir = out / "entities"
    ent_dir.mkdir(exist_ok=True)
    js_rows = []
    mentions = {
        org: ent_mod.org_mentions(corpus, annotations, aliases, org)
        for org in corpus.orgs()
    }
    for org_x, org_y in pairs:
        set_x = ent_mod.top_k_entities(
            [annotations[a.id] for a in corpus.by_org(org_x) if a.id in annotations],
            aliases, cfg.top_k_entities, org=org_x,
        )
        set_y = ent_mod.top_k_entities(
            [annotations[a.id] for a in corpus.by_org(org_y) if a.id in annotations],
            aliases, cfg.top_k_entities, org=org_y,
        )
        global_js = ent_mod.jaccard(set_x.names(), set_y.names())
        windowed = ent_mod.windowed_jaccard(
            mentions[org_x], mentions[org_y],
            cfg.top_k_entities, cfg.analysis.window_days,
            org_x=org_x, org_y=org_y,
        )
        report.export_table(
            [
                {
                    "org_x": org_x, "org_y": org_y,
                    "top_k": cfg.top_k_entities,
                    "window_days": cfg.analysis.window_days,
                    "global_jaccard": global_js,
                    "windowed_median": windowed.median,
                    "windowed_days": [d.isoformat() for d in windowed.days],
                    "windowed_values": list(windowed.values),
                }
            ],
            "json",
            ent_dir / f"{org_x}-{org_y}.json",
        )
        js_rows.append(
            {
                "org_x": org_x, "org_y": org_y, "global_jaccard": global_js,
                "windowed_median": windowed.median, "n_days": len(windowed.days),
            }
        )
    report.export_table(js_rows, "csv", out / "entities.csv", JACCARD_COLUMNS)

    # Polarity per organization: ranked entities plus aggregates.
    pol_rows: list[dict] = []
    org_rows: list[dict] = []
    chart_rows: list[dict] = []
    for org in corpus.orgs():
        try:
            org_result = pol_mod.org_polarity(
                corpus, annotations, aliases, org,
                top_k=cfg.top_k_polarity, prec=cfg.precisions,
                min_support=cfg.min_support,
            )
        except ValueError as exc:
            logger.warning("skipping polarity for %s: %s", org, exc)
            continue
        org_rows.append(
            {
                "org": org, "micro_ps": org_result.micro_ps,
                "macro_ps": org_result.macro_ps,
                "n_entities": len(org_result.entities),
            }
        )
        pol_rows.extend(pol_mod.polarity_rows(org_result.entities))
        for r in org_result.entities[: cfg.top_k_polarity]:
            chart_rows.append(
                {
                    "org": org, "entity": r.counts.entity,
                    "ps": r.ps, "delta_ps": r.delta_ps,
                }
            )
    report.export_table(pol_rows, "csv", out / "polarity.csv", POLARITY_COLUMNS)
    report.export_table(pol_rows, "json", out / "polarity.json")
    report.export_table(org_rows, "csv", out / "org_polarity.csv", ORG_COLUMNS)

    charts = out / "charts"
    charts.mkdir(exist_ok=True)
    svg = report.render_polarity_chart(chart_rows, title="Entity polarity by organization")
    (charts / "polarity.svg").write_text(svg, encoding="utf-8")

    return PipelineSummary(
        n_articles=len(corpus),
        n_rejections=n_rejections,
        n_annotations=len(annotations),
        n_similarity_results=len(sim_rows),
        n_org_reports=len(org_rows),
        out_dir=out,
    )
