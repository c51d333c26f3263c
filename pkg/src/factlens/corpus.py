"""Corpus loading: JSON-lines article records -> validated, sorted Corpus.

One record per line with fields id, org, country, published_at (ISO
YYYY-MM-DD), title, body and optional url. Invalid or out-of-range records
are skipped and reported in a rejection list; duplicate ids keep the first
occurrence in file order. Iteration order is total: sorted by
(published_at, id).
"""

from __future__ import annotations

import datetime as dt
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

logger = logging.getLogger(__name__)

# Well-known organizations and their country; org remains an open string.
KNOWN_ORGS = {
    "PolitiFact": "USA",
    "Snopes": "USA",
    "CheckYourFact": "USA",
    "AltNews": "India",
    "Boom": "India",
    "OpIndia": "India",
}

_REQUIRED_FIELDS = ("id", "org", "country", "published_at", "title", "body")


@dataclass(frozen=True, slots=True)
class Article:
    id: str
    org: str
    country: str
    published_at: dt.date
    title: str
    body: str
    url: str | None = None


@dataclass(frozen=True)
class Corpus:
    """Immutable, deterministically ordered collection of articles."""

    articles: tuple[Article, ...]
    date_range: tuple[dt.date, dt.date]

    def __len__(self) -> int:
        return len(self.articles)

    def __iter__(self) -> Iterator[Article]:
        return iter(self.articles)

    def orgs(self) -> list[str]:
        return sorted({a.org for a in self.articles})

    def by_org(self, org: str) -> list[Article]:
        return [a for a in self.articles if a.org == org]

    def get(self, article_id: str) -> Article | None:
        for a in self.articles:
            if a.id == article_id:
                return a
        return None


@dataclass(frozen=True, slots=True)
class Rejection:
    line_no: int
    article_id: str | None
    reason: str


@dataclass(frozen=True)
class IngestResult:
    corpus: Corpus
    rejections: tuple[Rejection, ...]


class CorpusError(Exception):
    """Fatal corpus problem (unreadable file, bad date range)."""


def _parse_record(raw: dict, date_range: tuple[dt.date, dt.date]) -> Article:
    """Validate one decoded record; raises ValueError with a reason."""
    for field in _REQUIRED_FIELDS:
        if field not in raw:
            raise ValueError(f"missing field '{field}'")
    for field in ("id", "org", "country", "title", "body"):
        if not isinstance(raw[field], str):
            raise ValueError(f"field '{field}' is not a string")
    if not raw["id"]:
        raise ValueError("empty id")
    if not raw["body"].strip():
        raise ValueError("empty body")
    try:
        published = dt.date.fromisoformat(raw["published_at"])
    except (TypeError, ValueError):
        raise ValueError(f"invalid date {raw['published_at']!r}") from None
    start, end = date_range
    if not (start <= published <= end):
        raise ValueError(f"date {published.isoformat()} outside range")
    url = raw.get("url")
    if url is not None and not isinstance(url, str):
        raise ValueError("field 'url' is not a string")
    return Article(
        id=raw["id"],
        org=raw["org"],
        country=raw["country"],
        published_at=published,
        title=raw["title"],
        body=raw["body"],
        url=url,
    )


def ingest(path: str | Path, date_range: tuple[dt.date, dt.date]) -> IngestResult:
    """Load a JSON-lines corpus file, keeping valid in-range records.

    Every input line becomes either one Article or one Rejection, so
    ``len(corpus) + len(rejections)`` equals the number of lines.
    """
    path = Path(path)
    start, end = date_range
    if start > end:
        raise CorpusError(f"date range start {start} after end {end}")
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc

    articles: dict[str, Article] = {}
    rejections: list[Rejection] = []
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            rejections.append(Rejection(line_no, None, "blank line"))
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            rejections.append(Rejection(line_no, None, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(raw, dict):
            rejections.append(Rejection(line_no, None, "record is not an object"))
            continue
        try:
            article = _parse_record(raw, date_range)
        except ValueError as exc:
            rid = raw.get("id") if isinstance(raw.get("id"), str) else None
            rejections.append(Rejection(line_no, rid, str(exc)))
            continue
        if article.id in articles:
            rejections.append(Rejection(line_no, article.id, "duplicate id"))
            continue
        articles[article.id] = article

    ordered = tuple(sorted(articles.values(), key=lambda a: (a.published_at, a.id)))
    for r in rejections:
        logger.info("rejected line %d (%s): %s", r.line_no, r.article_id or "-", r.reason)
    return IngestResult(Corpus(ordered, date_range), tuple(rejections))


def org_counts(corpus: Corpus, by_year: bool = False) -> dict:
    """Article counts per org, or per (org, year) when by_year is set.

    Only observed cells appear; absent cells are implicitly zero.
    """
    counts: dict = {}
    for a in corpus:
        key = (a.org, a.published_at.year) if by_year else a.org
        counts[key] = counts.get(key, 0) + 1
    return counts


def canonical_record(article: Article) -> str:
    """Canonical single-line JSON form of one article."""
    return json.dumps(
        {
            "id": article.id,
            "org": article.org,
            "country": article.country,
            "published_at": article.published_at.isoformat(),
            "title": article.title,
            "body": article.body,
            "url": article.url,
        },
        ensure_ascii=False,
        separators=(",", ":"),
    )


def serialize_corpus(corpus: Corpus) -> str:
    """Canonical JSON-lines re-serialization; ingest of this text is a fixed point."""
    return "".join(canonical_record(a) + "\n" for a in corpus)


def write_store(
    result: IngestResult, store_dir: str | Path
) -> tuple[Path, Path]:
    """Persist a canonical corpus plus rejection log into a store directory."""
    store = Path(store_dir)
    store.mkdir(parents=True, exist_ok=True)
    corpus_path = store / "corpus.jsonl"
    corpus_path.write_text(serialize_corpus(result.corpus), encoding="utf-8")
    start, end = result.corpus.date_range
    (store / "meta.json").write_text(
        json.dumps({"date_from": start.isoformat(), "date_to": end.isoformat()}) + "\n",
        encoding="utf-8",
    )
    rejects_path = store / "rejections.log"
    with rejects_path.open("w", encoding="utf-8") as fh:
        for r in result.rejections:
            fh.write(
                json.dumps(
                    {"line": r.line_no, "id": r.article_id, "reason": r.reason},
                    ensure_ascii=False,
                )
                + "\n"
            )
    return corpus_path, rejects_path


def load_store(store_dir: str | Path) -> Corpus:
    """Load the canonical corpus written by :func:`write_store`."""
    store = Path(store_dir)
    meta_path = store / "meta.json"
    if not meta_path.exists():
        raise CorpusError(f"store {store} has no meta.json (run ingest first)")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    date_range = (
        dt.date.fromisoformat(meta["date_from"]),
        dt.date.fromisoformat(meta["date_to"]),
    )
    result = ingest(store / "corpus.jsonl", date_range)
    if result.rejections:
        raise CorpusError(
            f"store corpus is not canonical: {len(result.rejections)} bad lines"
        )
    return result.corpus


def write_corpus_file(articles: Iterable[Article], path: str | Path) -> None:
    """Write articles as a JSON-lines corpus file (input format of ingest)."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for a in articles:
            fh.write(canonical_record(a) + "\n")
