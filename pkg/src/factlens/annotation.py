"""Per-article annotation: three prompt passes with caching and repair.

Each article yields claim sentences, what/why sentences, and an
entity -> sentiment map. Raw responses are cached byte-equal on disk
keyed by (template id, rendered prompt, model) and re-parsed on read, so
a warm run never touches the provider and parses identically.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

from . import parsing, prompts
from .corpus import Article, Corpus
from .providers import (
    ChatProvider,
    ProviderCallError,
    ProviderConfig,
    ProviderUnreachableError,
    cache_key,
)

logger = logging.getLogger(__name__)

TAG_NAMES = ("claim", "what", "why", "entities")


@dataclass(frozen=True)
class Annotation:
    article_id: str
    claim: tuple[str, ...] = ()
    what: tuple[str, ...] = ()
    why: tuple[str, ...] = ()
    entities: Mapping[str, str] = field(default_factory=dict)
    failed_tags: tuple[str, ...] = ()
    flags: tuple[str, ...] = ()

    def sentences(self, tag: str) -> tuple[str, ...]:
        if tag not in ("claim", "what", "why"):
            raise ValueError(f"unknown sentence tag {tag!r}")
        return getattr(self, tag)

    def to_json_dict(self) -> dict:
        return {
            "article_id": self.article_id,
            "claim": list(self.claim),
            "what": list(self.what),
            "why": list(self.why),
            "entities": dict(self.entities),
            "failed_tags": list(self.failed_tags),
            "flags": list(self.flags),
        }

    @classmethod
    def from_json_dict(cls, raw: dict) -> "Annotation":
        return cls(
            article_id=raw["article_id"],
            claim=tuple(raw.get("claim", [])),
            what=tuple(raw.get("what", [])),
            why=tuple(raw.get("why", [])),
            entities=dict(raw.get("entities", {})),
            failed_tags=tuple(raw.get("failed_tags", [])),
            flags=tuple(raw.get("flags", [])),
        )


class ResponseCache:
    """Disk cache of raw provider responses, one JSON file per cache key."""

    def __init__(self, cache_dir: str | Path):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.cache_dir / f"{key}.json"

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            response = payload["response"]
        except (OSError, ValueError, KeyError, TypeError):
            logger.warning("cache entry %s is corrupt; refetching", key)
            return None
        return response if isinstance(response, str) else None

    def put(self, key: str, response: str) -> None:
        self._path(key).write_text(
            json.dumps({"response": response}, ensure_ascii=False), encoding="utf-8"
        )


def _normalize_ws(text: str) -> str:
    return " ".join(text.split())


def _verbatim_flags(sentences: Iterable[str], body: str, tag: str) -> list[str]:
    haystack = _normalize_ws(body)
    return [
        f"{tag}:not_verbatim"
        for s in sentences
        if _normalize_ws(s) not in haystack
    ]


def _fetch(
    article: Article,
    template_id: str,
    provider: ChatProvider,
    cache: ResponseCache | None,
) -> str:
    prompt = prompts.render_prompt(template_id, article.body)
    key = cache_key(template_id, prompt, provider.model_name)
    if cache is not None:
        cached = cache.get(key)
        if cached is not None:
            return cached
    response = provider.complete(prompt, template_id)
    if cache is not None:
        cache.put(key, response)
    return response


def extract_claim(
    article: Article, provider: ChatProvider, cache: ResponseCache | None = None
) -> parsing.ParsedTag:
    """Claim sentences for one article; failure is recorded, not raised."""
    try:
        raw = _fetch(article, prompts.CLAIM, provider, cache)
    except ProviderCallError as exc:
        logger.warning("claim call failed for %s: %s", article.id, exc)
        return parsing.ParsedTag(failed=True, flags=["claim:provider_error"])
    parsed = parsing.parse_claim_response(raw)
    if parsed.failed:
        logger.warning("unparseable claim response for %s: %r", article.id, raw[:200])
    else:
        parsed.flags.extend(_verbatim_flags(parsed.value, article.body, "claim"))
    return parsed


def extract_what_why(
    article: Article, provider: ChatProvider, cache: ResponseCache | None = None
) -> parsing.ParsedTag:
    """What/why sentence lists for one article."""
    try:
        raw = _fetch(article, prompts.WHAT_WHY, provider, cache)
    except ProviderCallError as exc:
        logger.warning("what/why call failed for %s: %s", article.id, exc)
        return parsing.ParsedTag(failed=True, flags=["what_why:provider_error"])
    parsed = parsing.parse_what_why_response(raw)
    if parsed.failed:
        logger.warning("unparseable what/why response for %s: %r", article.id, raw[:200])
    else:
        for tag in ("what", "why"):
            parsed.flags.extend(_verbatim_flags(parsed.value[tag], article.body, tag))
    return parsed


def tag_entities(
    article: Article, provider: ChatProvider, cache: ResponseCache | None = None
) -> parsing.ParsedTag:
    """Entity -> sentiment map for one article, labels normalized."""
    try:
        raw = _fetch(article, prompts.ENTITIES, provider, cache)
    except ProviderCallError as exc:
        logger.warning("entity call failed for %s: %s", article.id, exc)
        return parsing.ParsedTag(failed=True, flags=["entities:provider_error"])
    parsed = parsing.parse_entities_response(raw)
    if parsed.failed:
        logger.warning("unparseable entity response for %s: %r", article.id, raw[:200])
    return parsed


def annotate_article(
    article: Article, provider: ChatProvider, cache: ResponseCache | None = None
) -> Annotation:
    failed: list[str] = []
    flags: list[str] = []

    claim_tag = extract_claim(article, provider, cache)
    claim = tuple(claim_tag.value) if not claim_tag.failed else ()
    if claim_tag.failed:
        failed.append("claim")
    flags.extend(claim_tag.flags)

    ww_tag = extract_what_why(article, provider, cache)
    if ww_tag.failed:
        failed.extend(["what", "why"])
        what: tuple[str, ...] = ()
        why: tuple[str, ...] = ()
    else:
        what = tuple(ww_tag.value["what"])
        why = tuple(ww_tag.value["why"])
    flags.extend(ww_tag.flags)

    ent_tag = tag_entities(article, provider, cache)
    entities = dict(ent_tag.value) if not ent_tag.failed else {}
    if ent_tag.failed:
        failed.append("entities")
    flags.extend(ent_tag.flags)

    return Annotation(
        article_id=article.id,
        claim=claim,
        what=what,
        why=why,
        entities=entities,
        failed_tags=tuple(failed),
        flags=tuple(flags),
    )


def annotate_corpus(
    corpus: Corpus,
    provider: ChatProvider,
    config: ProviderConfig | None = None,
) -> dict[str, Annotation]:
    """Annotate every article; deterministic given the cache or a mock.

    A per-call failure marks only that tag failed; an unreachable
    provider aborts the run with all completed cache entries preserved.
    """
    cache = None
    if config is not None and config.cache_dir is not None:
        cache = ResponseCache(config.cache_dir)
    annotations: dict[str, Annotation] = {}
    for article in corpus:
        try:
            annotations[article.id] = annotate_article(article, provider, cache)
        except ProviderUnreachableError:
            logger.error(
                "provider unreachable at article %s; aborting with %d done",
                article.id,
                len(annotations),
            )
            raise
    return annotations


def save_annotations(annotations: Mapping[str, Annotation], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for article_id in sorted(annotations):
            fh.write(
                json.dumps(annotations[article_id].to_json_dict(), ensure_ascii=False)
                + "\n"
            )


def load_annotations(path: str | Path) -> dict[str, Annotation]:
    annotations: dict[str, Annotation] = {}
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            ann = Annotation.from_json_dict(json.loads(line))
            annotations[ann.article_id] = ann
    return annotations


def with_entities(annotation: Annotation, entities: Mapping[str, str]) -> Annotation:
    """Copy an annotation with a replaced entity map (fixture helper)."""
    return replace(annotation, entities=dict(entities))
