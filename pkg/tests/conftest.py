import datetime as dt

import pytest

from factlens.annotation import Annotation
from factlens.corpus import Article, Corpus
from factlens.providers import (
    HashedEmbeddingProvider,
    ProviderCallError,
    ProviderUnreachableError,
    SyntheticChatProvider,
)


def make_article(
    article_id: str,
    org: str = "PolitiFact",
    date: dt.date = dt.date(2020, 6, 1),
    body: str = "A post claimed that Joe Biden signed a secret order. "
    "It spread because a parody account was mistaken for a real one.",
    country: str = "USA",
) -> Article:
    return Article(
        id=article_id,
        org=org,
        country=country,
        published_at=date,
        title=f"Fact check {article_id}",
        body=body,
    )


def make_corpus(articles, date_range=(dt.date(2018, 1, 1), dt.date(2023, 12, 31))) -> Corpus:
    ordered = tuple(sorted(articles, key=lambda a: (a.published_at, a.id)))
    return Corpus(ordered, date_range)


def make_annotation(article_id: str, entities: dict[str, str], **kwargs) -> Annotation:
    return Annotation(article_id=article_id, entities=entities, **kwargs)


class ScriptedChatProvider:
    """Returns one canned response per template id; fails where told to."""

    def __init__(self, responses: dict[str, str], fail: set[str] = frozenset(),
                 unreachable: bool = False, model_name: str = "mock-scripted"):
        self.responses = responses
        self.fail = set(fail)
        self.unreachable = unreachable
        self.model_name = model_name
        self.calls = 0

    def complete(self, prompt: str, template_id: str) -> str:
        self.calls += 1
        if self.unreachable:
            raise ProviderUnreachableError("scripted outage")
        if template_id in self.fail:
            raise ProviderCallError(f"scripted failure for {template_id}")
        return self.responses[template_id]


@pytest.fixture
def hashed_provider():
    return HashedEmbeddingProvider(dim=64)


@pytest.fixture
def synthetic_provider():
    return SyntheticChatProvider()
