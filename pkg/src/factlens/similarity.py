"""Windowed maximum topical similarity between organizations.

For each article of organization X, the candidate set is every Y article
within +/-w days; only the maximum cosine similarity over that set is
kept. Maxima above the threshold tau enter the reported distribution;
its median gets a bootstrap percentile confidence interval (resampling
with replacement at a fixed sample fraction, seeded PCG64 generator).
"""

from __future__ import annotations

import datetime as dt
import logging
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .config import AnalysisConfig
from .corpus import Corpus
from .embedding import TagEmbedding, cosine
from .seeds import derive_seed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatedVector:
    article_id: str
    date: dt.date
    vector: np.ndarray | None


@dataclass(frozen=True)
class MatchRecord:
    article_id: str
    best_match_id: str | None
    max_sim: float | None


@dataclass(frozen=True)
class SimilarityResult:
    org_x: str
    org_y: str
    tag: str
    window_days: int
    tau: float
    per_article: tuple[MatchRecord, ...]
    matched_values: tuple[float, ...]
    median_matched: float | None
    median_all: float | None
    ci: tuple[float, float] | None
    match_rate: float
    n_embedded: int
    flags: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "org_x": self.org_x,
            "org_y": self.org_y,
            "tag": self.tag,
            "window_days": self.window_days,
            "tau": self.tau,
            "per_article": [
                {
                    "article_id": m.article_id,
                    "best_match_id": m.best_match_id,
                    "max_sim": m.max_sim,
                }
                for m in self.per_article
            ],
            "matched_values": list(self.matched_values),
            "median_matched": self.median_matched,
            "median_all": self.median_all,
            "ci_low": None if self.ci is None else self.ci[0],
            "ci_high": None if self.ci is None else self.ci[1],
            "match_rate": self.match_rate,
            "n_embedded": self.n_embedded,
            "flags": list(self.flags),
        }


def org_vectors(
    corpus: Corpus,
    embeddings: Mapping[tuple[str, str], TagEmbedding],
    org: str,
    tag: str,
) -> list[DatedVector]:
    """Dated tag vectors for one organization, corpus order preserved."""
    out = []
    for article in corpus.by_org(org):
        emb = embeddings.get((article.id, tag))
        vector = None if emb is None or emb.absent else emb.vector
        out.append(DatedVector(article.id, article.published_at, vector))
    return out


def bootstrap_median_ci(
    values: Sequence[float],
    cfg: AnalysisConfig,
    seed: int | None = None,
) -> tuple[float, float]:
    """Percentile bootstrap CI for the median, deterministic given the seed.

    Each resample draws ceil(fraction * n) observations with replacement;
    the interval is the (alpha/2, 1 - alpha/2) percentiles of the
    resample medians.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot bootstrap an empty sample")
    n = arr.size
    m = max(1, math.ceil(cfg.bootstrap_fraction * n))
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    medians = np.empty(cfg.bootstrap_resamples, dtype=np.float64)
    # Chunked fill; the draw sequence is identical to one big call.
    chunk = 2000
    done = 0
    while done < cfg.bootstrap_resamples:
        take = min(chunk, cfg.bootstrap_resamples - done)
        idx = rng.integers(0, n, size=(take, m))
        medians[done : done + take] = np.median(arr[idx], axis=1)
        done += take
    alpha = 1.0 - cfg.confidence_level
    lo, hi = np.percentile(medians, [100.0 * alpha / 2.0, 100.0 * (1.0 - alpha / 2.0)])
    return float(lo), float(hi)


def windowed_max_similarity(
    xs: Sequence[DatedVector],
    ys: Sequence[DatedVector],
    cfg: AnalysisConfig,
    org_x: str = "X",
    org_y: str = "Y",
    tag: str = "claim",
) -> SimilarityResult:
    """Per-X-article maximum cosine similarity against Y within the window.

    Ties on the maximum resolve to the smallest Y article id. Maxima
    strictly above tau form matched_values; match_rate is their share of
    X articles that have an embedding.
    """
    flags: list[str] = []
    x_present = [x for x in xs if x.vector is not None]
    y_present = sorted(
        (y for y in ys if y.vector is not None), key=lambda y: (y.date, y.article_id)
    )
    if not x_present or not y_present:
        flags.append("empty:no_embedded_articles")
        return SimilarityResult(
            org_x, org_y, tag, cfg.window_days, cfg.tau,
            per_article=(), matched_values=(), median_matched=None,
            median_all=None, ci=None, match_rate=0.0,
            n_embedded=len(x_present), flags=tuple(flags),
        )

    y_ordinals = np.array([y.date.toordinal() for y in y_present], dtype=np.int64)
    records: list[MatchRecord] = []
    all_maxima: list[float] = []
    for x in x_present:
        day = x.date.toordinal()
        lo = int(np.searchsorted(y_ordinals, day - cfg.window_days, side="left"))
        hi = int(np.searchsorted(y_ordinals, day + cfg.window_days, side="right"))
        best_sim: float | None = None
        best_id: str | None = None
        for j in range(lo, hi):
            sim = cosine(x.vector, y_present[j].vector)
            if (
                best_sim is None
                or sim > best_sim
                or (sim == best_sim and y_present[j].article_id < best_id)
            ):
                best_sim = sim
                best_id = y_present[j].article_id
        records.append(MatchRecord(x.article_id, best_id, best_sim))
        if best_sim is not None:
            all_maxima.append(best_sim)

    matched = [s for s in all_maxima if s > cfg.tau]
    match_rate = len(matched) / len(x_present)
    median_all = float(np.median(all_maxima)) if all_maxima else None
    median_matched = float(np.median(matched)) if matched else None
    if not all_maxima:
        flags.append("empty:no_candidates_in_window")
    ci = None
    if matched:
        ci = bootstrap_median_ci(
            matched, cfg, seed=derive_seed(cfg.seed, f"bootstrap:{org_x}:{org_y}:{tag}")
        )
    return SimilarityResult(
        org_x=org_x,
        org_y=org_y,
        tag=tag,
        window_days=cfg.window_days,
        tau=cfg.tau,
        per_article=tuple(records),
        matched_values=tuple(matched),
        median_matched=median_matched,
        median_all=median_all,
        ci=ci,
        match_rate=match_rate,
        n_embedded=len(x_present),
        flags=tuple(flags),
    )
