"""The whole pipeline in one call, mirroring `factlens run-all`.

Ingest -> annotate (cached) -> embed -> similarity -> entity overlap ->
polarity -> rendered reports, all deterministic: running this script
twice produces byte-identical artifacts.
"""

import time
from pathlib import Path

from factlens.config import load_config
from factlens.corpus import write_corpus_file
from factlens.pipeline import run_all
from factlens.synthetic import make_articles, write_alias_csv

base = Path("demo_output/06_pipeline")
base.mkdir(parents=True, exist_ok=True)

write_corpus_file(make_articles(500, seed=6), base / "articles.jsonl")
write_alias_csv(base / "aliases.csv")
(base / "run.cfg").write_text(
    f"input_file = {base / 'articles.jsonl'}\n"
    f"aliases_file = {base / 'aliases.csv'}\n"
    f"cache_dir = {base / 'cache'}\n"
    "seed = 7\n"
    "min_support = 3\n"
)

cfg = load_config(base / "run.cfg", env={})
start = time.monotonic()
summary = run_all(cfg, base / "store", base / "out")
elapsed = time.monotonic() - start

print(f"pipeline finished in {elapsed:.2f}s")
print(f"  articles:            {summary.n_articles}")
print(f"  annotations:         {summary.n_annotations}")
print(f"  similarity results:  {summary.n_similarity_results}")
print(f"  org polarity reports:{summary.n_org_reports}")

print("\nartifacts:")
for path in sorted(summary.out_dir.rglob("*")):
    if path.is_file():
        print(f"  {path.relative_to(base)}")

print("\nthe same run from the CLI:")
print(f"  factlens run-all --store {base / 'store'} --config {base / 'run.cfg'} "
      f"--out {base / 'out'}")
