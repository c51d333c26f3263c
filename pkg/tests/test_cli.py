import json

import pytest
from click.testing import CliRunner

from factlens import prompts
from factlens.cli import main
from factlens.corpus import write_corpus_file
from factlens.providers import write_fixture
from factlens.synthetic import make_articles, write_alias_csv


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def workspace(tmp_path):
    articles = make_articles(60, seed=3)
    write_corpus_file(articles, tmp_path / "input.jsonl")
    write_alias_csv(tmp_path / "aliases.csv")
    (tmp_path / "run.cfg").write_text(
        f"input_file = {tmp_path / 'input.jsonl'}\n"
        f"aliases_file = {tmp_path / 'aliases.csv'}\n"
        f"cache_dir = {tmp_path / 'cache'}\n"
        "min_support = 1\n"
    )
    return tmp_path


def invoke(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


def test_ingest_annotate_embed_flow(runner, workspace):
    store = workspace / "store"
    result = invoke(
        runner,
        ["ingest", "--input", str(workspace / "input.jsonl"),
         "--from", "2018-01-01", "--to", "2023-12-31", "--out", str(store)],
    )
    assert "ingested 60 articles" in result.output
    assert (store / "corpus.jsonl").exists()
    assert (store / "rejections.log").exists()

    result = invoke(runner, ["annotate", "--store", str(store),
                             "--cache", str(workspace / "cache")])
    assert "annotated 60 articles" in result.output
    assert (store / "annotations.jsonl").exists()

    result = invoke(runner, ["embed", "--store", str(store)])
    assert (store / "embeddings.jsonl").exists()

    out_file = workspace / "sim.json"
    result = invoke(
        runner,
        ["similarity", "--store", str(store), "--tag", "claim",
         "--orgs", "PolitiFact,Snopes", "--window", "15", "--tau", "0.75",
         "--seed", "1", "--resamples", "200",
         "--out", str(out_file), "--per-article-csv", str(workspace / "sim.csv")],
    )
    payload = json.loads(out_file.read_text())
    assert payload[0]["org_x"] == "PolitiFact"
    assert (workspace / "sim.csv").read_text().startswith("article_id,")

    ent_file = workspace / "ent.json"
    invoke(
        runner,
        ["entities", "--store", str(store), "--aliases", str(workspace / "aliases.csv"),
         "--top-k", "100", "--window", "15", "--orgs", "PolitiFact,Snopes",
         "--out", str(ent_file)],
    )
    assert json.loads(ent_file.read_text())[0]["top_k"] == 100

    pol_file = workspace / "pol.csv"
    result = invoke(
        runner,
        ["polarity", "--store", str(store), "--aliases", str(workspace / "aliases.csv"),
         "--top-k", "5", "--min-support", "1", "--out", str(pol_file)],
    )
    assert "micro=" in result.output
    header = pol_file.read_text().splitlines()[0]
    assert header == "org,entity,period,n_pos,n_neg,n_total,ps,delta_ps"

    svg_file = workspace / "chart.svg"
    invoke(
        runner,
        ["report", "--inputs", str(pol_file), "--format", "svg", "--out", str(svg_file)],
    )
    assert svg_file.read_text().startswith("<svg")


def test_annotate_with_fixture_mock(runner, tmp_path):
    body = "Somebody claimed something. It spread because of a chain letter."
    (tmp_path / "input.jsonl").write_text(
        json.dumps(
            {
                "id": "a1", "org": "Snopes", "country": "USA",
                "published_at": "2020-05-05", "title": "t", "body": body,
            }
        )
        + "\n"
    )
    store = tmp_path / "store"
    invoke(
        CliRunner(),
        ["ingest", "--input", str(tmp_path / "input.jsonl"), "--out", str(store)],
    )
    fixtures = tmp_path / "fixtures"
    fixtures.mkdir()
    model = "gpt-3.5-turbo"  # must match the configured model name
    write_fixture(fixtures, prompts.CLAIM, body, '["Somebody claimed something."]', model)
    write_fixture(fixtures, prompts.WHAT_WHY, body,
                  '{"what":["Somebody claimed something."],"why":[]}', model)
    write_fixture(fixtures, prompts.ENTITIES, body, '{"Somebody":"neutral"}', model)
    result = invoke(
        runner,
        ["annotate", "--store", str(store), "--cache", str(tmp_path / "cache"),
         "--mock", str(fixtures)],
    )
    assert "annotated 1 articles" in result.output
    ann = json.loads((store / "annotations.jsonl").read_text())
    assert ann["claim"] == ["Somebody claimed something."]
    assert ann["failed_tags"] == []


def test_run_all_and_print_config(runner, workspace):
    result = invoke(
        runner,
        ["run-all", "--store", str(workspace / "store"),
         "--config", str(workspace / "run.cfg"),
         "--out", str(workspace / "out"), "--print-config"],
    )
    assert "window_days = 15" in result.output
    assert not (workspace / "out" / "polarity.csv").exists()

    result = invoke(
        runner,
        ["run-all", "--store", str(workspace / "store"),
         "--config", str(workspace / "run.cfg"), "--out", str(workspace / "out")],
    )
    assert "pipeline done" in result.output
    for name in ("polarity.csv", "similarity.csv", "entities.csv",
                 "org_polarity.csv", "charts/polarity.svg", "run_config.txt"):
        assert (workspace / "out" / name).exists(), name


def test_run_all_on_prebuilt_store(runner, workspace):
    """Without input_file, run-all consumes a store built by `ingest`."""
    store = workspace / "store"
    invoke(runner, ["ingest", "--input", str(workspace / "input.jsonl"), "--out", str(store)])
    (workspace / "prebuilt.cfg").write_text(
        f"aliases_file = {workspace / 'aliases.csv'}\n"
        f"cache_dir = {workspace / 'cache'}\n"
        "min_support = 1\n"
    )
    result = invoke(
        runner,
        ["run-all", "--store", str(store), "--config", str(workspace / "prebuilt.cfg"),
         "--out", str(workspace / "out2")],
    )
    assert "pipeline done" in result.output
    assert (workspace / "out2" / "polarity.csv").exists()


def test_run_all_missing_store_is_clean_error(runner, tmp_path):
    (tmp_path / "empty.cfg").write_text("")
    result = runner.invoke(
        main,
        ["run-all", "--store", str(tmp_path / "nostore"),
         "--config", str(tmp_path / "empty.cfg"), "--out", str(tmp_path / "out")],
    )
    assert result.exit_code != 0
    assert "ingest" in result.output  # points at the missing ingest step


def test_similarity_cross_geography_warns(runner, workspace):
    store = workspace / "store"
    invoke(runner, ["ingest", "--input", str(workspace / "input.jsonl"), "--out", str(store)])
    invoke(runner, ["annotate", "--store", str(store), "--cache", str(workspace / "cache")])
    invoke(runner, ["embed", "--store", str(store)])
    result = runner.invoke(
        main,
        ["similarity", "--store", str(store), "--tag", "claim",
         "--orgs", "PolitiFact,Boom", "--resamples", "50",
         "--out", str(workspace / "x.json")],
        catch_exceptions=False,
    )
    assert result.exit_code == 0
    assert "cross-geography" in result.stderr


def test_ingest_bad_date_is_clean_error(runner, tmp_path):
    (tmp_path / "i.jsonl").write_text("{}\n")
    result = runner.invoke(
        main,
        ["ingest", "--input", str(tmp_path / "i.jsonl"), "--from", "nope",
         "--out", str(tmp_path / "s")],
    )
    assert result.exit_code != 0
    assert "--from" in result.output
