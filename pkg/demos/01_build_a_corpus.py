"""Build and inspect a corpus store.

Generates a synthetic six-organization corpus, ingests it with date-range
validation, and shows what the store keeps: canonically sorted articles,
per-organization counts, and a rejection log for anything malformed.
"""

import datetime as dt
import json
from pathlib import Path

from factlens.corpus import ingest, org_counts, write_store
from factlens.synthetic import make_articles
from factlens.corpus import write_corpus_file

out = Path("demo_output/01_corpus")
out.mkdir(parents=True, exist_ok=True)

# A corpus file is JSON-lines, one article per line.
articles = make_articles(240, seed=1)
corpus_file = out / "articles.jsonl"
write_corpus_file(articles, corpus_file)

# Slip in two bad records so the rejection log has something to say.
with corpus_file.open("a", encoding="utf-8") as fh:
    fh.write("this line is not JSON\n")
    fh.write(json.dumps({
        "id": "stale-1", "org": "Snopes", "country": "USA",
        "published_at": "2015-01-01", "title": "too old", "body": "x.",
    }) + "\n")

result = ingest(corpus_file, (dt.date(2018, 1, 1), dt.date(2023, 12, 31)))
print(f"ingested {len(result.corpus)} articles, rejected {len(result.rejections)}")
for rejection in result.rejections:
    print(f"  line {rejection.line_no}: {rejection.reason}")

print("\narticles per organization:")
for org, count in sorted(org_counts(result.corpus).items()):
    print(f"  {org:<14} {count}")

print("\narticles per (organization, year), first few cells:")
by_year = org_counts(result.corpus, by_year=True)
for key in sorted(by_year)[:6]:
    print(f"  {key}: {by_year[key]}")

corpus_path, rejects_path = write_store(result, out / "store")
print(f"\nstore written: {corpus_path}")
print(f"rejection log: {rejects_path}")
print("iteration order is total: sorted by (published_at, id), so re-ingesting")
print("the store's canonical corpus.jsonl reproduces this exact corpus.")
