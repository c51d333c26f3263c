"""Annotate articles offline with deterministic mock providers.

Three prompt passes per article produce claim sentences, what/why
sentences, and an entity -> sentiment map. Responses are cached on disk
keyed by (template id, rendered prompt, model), so a second run makes
zero provider calls. A fixture-directory mock shows the same flow with
hand-written responses.
"""

from pathlib import Path

from factlens import prompts
from factlens.annotation import annotate_corpus
from factlens.corpus import Corpus
from factlens.providers import (
    FixtureChatProvider,
    ProviderConfig,
    SyntheticChatProvider,
    write_fixture,
)
from factlens.synthetic import make_articles

out = Path("demo_output/02_annotation")
out.mkdir(parents=True, exist_ok=True)

articles = sorted(make_articles(3, seed=2), key=lambda a: (a.published_at, a.id))
corpus = Corpus(
    tuple(articles),
    (min(a.published_at for a in articles), max(a.published_at for a in articles)),
)

provider = SyntheticChatProvider()
config = ProviderConfig(cache_dir=out / "cache")

annotations = annotate_corpus(corpus, provider, config)
print(f"cold run: {provider.calls} provider calls for {len(annotations)} articles")

warm = SyntheticChatProvider()
annotate_corpus(corpus, warm, config)
print(f"warm run: {warm.calls} provider calls (cache hits bypass the provider)")

sample = annotations[corpus.articles[0].id]
print(f"\nannotation for {sample.article_id}:")
print(f"  claim: {list(sample.claim)}")
print(f"  what:  {list(sample.what)}")
print(f"  why:   {list(sample.why)}")
print(f"  entities: {dict(sample.entities)}")
print(f"  failed tags: {list(sample.failed_tags)} flags: {list(sample.flags)}")

# The fixture mock replays canned responses from files keyed by cache key.
body = "A chain mail claimed the Moon Treaty was secretly repealed. It spread because of reposts."
fixtures = out / "fixtures"
write_fixture(fixtures, prompts.CLAIM, body, '["A chain mail claimed the Moon Treaty was secretly repealed."]')
write_fixture(fixtures, prompts.WHAT_WHY, body, '{"what":["A chain mail claimed the Moon Treaty was secretly repealed."],"why":["It spread because of reposts."]}')
write_fixture(fixtures, prompts.ENTITIES, body, '{"Moon Treaty":"neutral"}')

from factlens.corpus import Article
import datetime as dt

article = Article("fx-1", "Snopes", "USA", dt.date(2021, 7, 1), "moon", body)
fixture_corpus = Corpus((article,), (dt.date(2021, 1, 1), dt.date(2021, 12, 31)))
fixture_provider = FixtureChatProvider(fixtures)
fixture_annotations = annotate_corpus(fixture_corpus, fixture_provider)
print(f"\nfixture-mock annotation: {fixture_annotations['fx-1'].entities}")
print("a missing fixture file behaves like a permanently failed provider call,")
print("which marks only that tag as failed and leaves the rest intact.")
