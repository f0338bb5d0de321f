import json

import pytest

from copyflock.cli import main
from copyflock.synth import BotnetSpec, ScenarioSpec, generate


@pytest.fixture(scope="module")
def scenario(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("scenario")
    spec = ScenarioSpec(
        seed=21,
        duration_seconds=2 * 86_400,
        background_users=25,
        background_tweets=300,
        botnets=(
            BotnetSpec("red", size=5, campaigns=15, max_delay_seconds=90),
            BotnetSpec("blue", size=4, campaigns=12, mutation_rate=0.1),
        ),
    )
    return generate(spec, out_dir)


def run(*argv):
    return main([str(a) for a in argv])


class TestUsage:
    def test_no_arguments_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_missing_input_exits_1(self, tmp_path, capsys):
        code = run("detect", "--corpus", tmp_path / "absent.ndjson", "--out", tmp_path / "e.ndjson")
        assert code == 1
        assert "missing input" in capsys.readouterr().err


class TestDetect(object):
    def test_writes_events_and_manifest(self, scenario, tmp_path):
        out = tmp_path / "events.ndjson"
        assert run("detect", "--corpus", scenario.corpus, "--out", out) == 0
        assert out.exists()
        manifest = json.loads((tmp_path / "events.ndjson.manifest.json").read_text())
        assert manifest["command"] == "detect"
        assert manifest["config"]["jaccard_threshold"] == 0.70
        assert "corpus.ndjson" in manifest["inputs"]
        assert "events.ndjson" in manifest["outputs"]
        assert "workers" not in manifest["config"]

    def test_config_file_overrides_flags(self, scenario, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"jaccard_threshold": 0.9}), encoding="utf-8")
        out = tmp_path / "ev.ndjson"
        assert run(
            "detect", "--corpus", scenario.corpus, "--out", out,
            "--jaccard-threshold", "0.5", "--config", cfg_path,
        ) == 0
        manifest = json.loads((tmp_path / "ev.ndjson.manifest.json").read_text())
        assert manifest["config"]["jaccard_threshold"] == 0.9

    def test_unknown_config_key(self, scenario, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps({"jacard": 0.9}), encoding="utf-8")
        code = run("detect", "--corpus", scenario.corpus, "--out", tmp_path / "x", "--config", cfg_path)
        assert code == 1


class TestSweeps:
    def test_sweep_jaccard_writes_tables(self, scenario, tmp_path):
        out = tmp_path / "sweep"
        assert run(
            "sweep-jaccard", "--corpus", scenario.corpus, "--out", out,
            "--thresholds", "0.5,0.6,0.7,0.8,0.9",
        ) == 0
        user_tables = sorted(out.glob("user_cdf_*.tsv"))
        pair_tables = sorted(out.glob("pair_cdf_*.tsv"))
        assert len(user_tables) == 5 and len(pair_tables) == 5
        summary = (out / "summary.tsv").read_text().splitlines()
        assert len(summary) == 6

    def test_sweep_window_ordering_column(self, scenario, tmp_path):
        out = tmp_path / "window.tsv"
        assert run(
            "sweep-window", "--corpus", scenario.corpus, "--out", out, "--window-sizes", "5,10"
        ) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("window_minutes")
        assert len(lines) == 3


class TestGraphCommands:
    def test_graph_filter_export_chain(self, scenario, tmp_path):
        events = tmp_path / "events.ndjson"
        run("detect", "--corpus", scenario.corpus, "--out", events)
        graph = tmp_path / "graph.graphml"
        assert run("graph", "--corpus", scenario.corpus, "--events", events, "--out", graph) == 0
        filtered = tmp_path / "filtered.graphml"
        assert run(
            "filter", "--graph", graph, "--out", filtered, "--copy-pct", "5", "--min-tweets", "5"
        ) == 0
        tsv = tmp_path / "filtered.tsv"
        assert run("export", "--graph", filtered, "--format", "tsv", "--out", tsv) == 0
        assert tsv.read_text().splitlines()[0] == "source_id\ttarget_id\tweight"

    def test_communities_and_evolve(self, scenario, tmp_path):
        events = tmp_path / "events.ndjson"
        run("detect", "--corpus", scenario.corpus, "--out", events)
        g = tmp_path / "g.graphml"
        run("graph", "--corpus", scenario.corpus, "--events", events, "--out", g)
        comm = tmp_path / "communities.tsv"
        assert run("communities", "--graph", g, "--out", comm, "--seed", "5") == 0
        assert comm.read_text().splitlines()[0] == "account_id\tcommunity_id"


class TestLayersTrendsFeatures:
    def test_layers_report(self, scenario, tmp_path):
        out = tmp_path / "layers.json"
        argv = ["layers", "--exemplars", scenario.exemplars, "--bots", scenario.bots, "--out", out]
        for kind, path in scenario.layer_files.items():
            argv += ["--layer", f"{kind}={path}"]
        assert run(*argv) == 0
        report = json.loads(out.read_text())
        assert set(report["layers"]) == set(scenario.layer_files)
        assert set(report["engagement"]) == set(scenario.layer_files)
        for frac in report["engagement"].values():
            assert 0.0 <= frac <= 1.0

    def test_trends_report(self, scenario, tmp_path):
        out = tmp_path / "trends.json"
        assert run(
            "trends", "--corpus", scenario.corpus, "--bots", scenario.bots,
            "--snapshots", scenario.snapshots, "--out", out,
        ) == 0
        report = json.loads(out.read_text())
        agg = report["aggregates"]
        assert agg["before_only"] <= agg["trending_before"]
        assert agg["trending_any"] <= agg["posted_hashtags"]

    def test_features_outputs(self, scenario, tmp_path):
        out = tmp_path / "features"
        argv = [
            "features", "--corpus", scenario.corpus, "--accounts", scenario.accounts,
            "--bots", scenario.bots, "--out", out,
            "--layer", f"follow={scenario.layer_files['follow']}",
        ]
        assert run(*argv) == 0
        assert (out / "features.tsv").exists()
        assert (out / "ranking.tsv").exists()
        assert (out / "feature_definitions.tsv").exists()
        assert (out / "creation_histogram.tsv").exists()
        assert list(out.glob("cdf_*.tsv"))


class TestSynthCommand:
    def test_spec_file(self, tmp_path):
        spec = {
            "seed": 3,
            "duration_seconds": 86_400,
            "background_users": 10,
            "background_tweets": 50,
            "botnets": [{"name": "n", "size": 3, "campaigns": 4}],
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec), encoding="utf-8")
        out = tmp_path / "scenario"
        assert run("synth", "--spec", spec_path, "--out", out) == 0
        assert (out / "corpus.ndjson").exists()
        assert (out / "manifest.json").exists()


class TestPipeline:
    def test_composability_with_stepwise_runs(self, scenario, tmp_path):
        pipe = tmp_path / "pipe"
        assert run(
            "pipeline", "--corpus", scenario.corpus, "--out", pipe,
            "--min-tweets", "5", "--single-period",
        ) == 0
        events = tmp_path / "events.ndjson"
        run("detect", "--corpus", scenario.corpus, "--out", events)
        assert events.read_bytes() == (pipe / "events.ndjson").read_bytes()

        graph = tmp_path / "g.graphml"
        run("graph", "--corpus", scenario.corpus, "--events", events, "--out", graph)
        filtered = tmp_path / "f.graphml"
        run("filter", "--graph", graph, "--out", filtered, "--copy-pct", "5", "--min-tweets", "5")
        from copyflock.copygraph import import_graph

        g_pipe, _ = import_graph(pipe / "filtered_all.graphml")
        g_step, _ = import_graph(filtered)
        assert g_pipe.edges == g_step.edges
        assert set(g_pipe.nodes) == set(g_step.nodes)

    def test_reproducible_manifests_across_workers(self, scenario, tmp_path):
        digests = []
        for workers in (1, 4):
            out = tmp_path / f"run{workers}"
            assert run(
                "pipeline", "--corpus", scenario.corpus, "--out", out,
                "--min-tweets", "5", "--single-period", "--workers", str(workers),
            ) == 0
            digests.append((out / "manifest.json").read_bytes())
        assert digests[0] == digests[1]
