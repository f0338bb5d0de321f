"""Command-line interface orchestrating the detection pipeline.

Every subcommand maps onto one library operation and writes a manifest
(config, input digests, output digests) beside its outputs. Defaults
mirror the selected operating point: 0.70 Jaccard threshold, 10-minute
windows sliding by 5, 5% copy percentage, 100 tweets per period.

A JSON config file passed via --config overrides the corresponding
command-line flags; keys use the flag names with underscores.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path

from . import __version__, botnets, features, layers, synth, trends
from .copygraph import FilterConfig, build_graph, export_graph, filter_graph, graph_stats, import_graph
from .corpus import (
    Period,
    calendar_year_periods,
    load_account_set,
    load_accounts,
    load_corpus,
)
from .detector import (
    DetectorConfig,
    detect_all,
    event_stats,
    read_events,
    sweep_jaccard,
    sweep_window,
    write_events,
)
from .manifest import build_manifest, write_manifest
from .util import cdf_at, stable_json

logger = logging.getLogger("copyflock")


# --- shared option groups ----------------------------------------------------

def add_detector_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jaccard-threshold", type=float, default=0.70)
    p.add_argument("--window-min", type=float, default=10.0, help="window length in minutes")
    p.add_argument("--slide-min", type=float, default=None, help="slide in minutes (default: window/2)")
    p.add_argument("--min-tokens", type=int, default=2)
    p.add_argument("--grouping", choices=["component", "clique"], default="component")
    p.add_argument("--include-retweets", action="store_true")
    p.add_argument("--self-copies", action="store_true")
    p.add_argument("--no-lowercase", action="store_true")
    p.add_argument("--workers", type=int, default=1)


def add_filter_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--copy-pct", type=float, default=5.0)
    p.add_argument("--min-tweets", type=int, default=100)


def add_community_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--unweighted", action="store_true")


def detector_config(args) -> DetectorConfig:
    return DetectorConfig.from_minutes(
        window_minutes=args.window_min,
        slide_minutes=args.slide_min,
        jaccard_threshold=args.jaccard_threshold,
        grouping=args.grouping,
        min_tokens=args.min_tokens,
        include_retweets=args.include_retweets,
        allow_self_copies=args.self_copies,
        lowercase=not args.no_lowercase,
    )


def apply_config_file(args) -> None:
    """Values from --config override the parsed flags."""
    if not getattr(args, "config", None):
        return
    data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ValueError(f"{args.config}: config must be a JSON object")
    for key, value in data.items():
        if not hasattr(args, key):
            raise ValueError(f"{args.config}: unknown config key {key!r}")
        setattr(args, key, value)


def _parse_period(spec: str | None) -> Period | None:
    if spec is None:
        return None
    if ":" in spec:
        label, start, end = spec.split(":")
        return Period(label, int(start), int(end))
    year = int(spec)
    from datetime import datetime, timezone

    def ys(y):
        return int(datetime(y, 1, 1, tzinfo=timezone.utc).timestamp())

    return Period(spec, ys(year), ys(year + 1))


def _finish(command: str, config: dict, inputs, outputs, manifest_path: Path) -> int:
    write_manifest(manifest_path, build_manifest(command, config, inputs, outputs))
    return 0


# --- subcommands ---------------------------------------------------------------

def cmd_detect(args) -> int:
    apply_config_file(args)
    cfg = detector_config(args)
    index = load_corpus(args.corpus)
    events = detect_all(index, cfg, workers=args.workers)
    out = Path(args.out)
    write_events(events, out)
    stats = event_stats(events)
    print(f"detect: {len(index)} tweets -> {stats.n_events} events "
          f"({stats.involved_users} users involved, {stats.n_copy_tweets} copied tweets)")
    return _finish("detect", asdict(cfg), [args.corpus], [out],
                   out.with_name(out.name + ".manifest.json"))


def cmd_sweep_jaccard(args) -> int:
    apply_config_file(args)
    cfg = detector_config(args)
    thresholds = [float(x) for x in args.thresholds.split(",") if x.strip()]
    index = load_corpus(args.corpus)
    results = sweep_jaccard(index, thresholds, cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    summary = ["threshold\tn_users\tn_user_pairs\tn_events\tn_similar_tweet_pairs"]
    for stats in results:
        tag = format(stats.threshold, "g")
        user_path = out_dir / f"user_cdf_{tag}.tsv"
        pair_path = out_dir / f"pair_cdf_{tag}.tsv"
        _write_cdf(user_path, "copied_tweets", stats.user_cdf())
        _write_cdf(pair_path, "events_per_pair", stats.pair_cdf())
        outputs.extend([user_path, pair_path])
        summary.append(
            f"{tag}\t{len(stats.copied_tweets_per_user)}\t{len(stats.events_per_user_pair)}"
            f"\t{stats.n_events}\t{stats.n_similar_tweet_pairs}"
        )
        print(f"threshold {tag}: {stats.n_events} events, "
              f"{stats.n_similar_tweet_pairs} similar pairs")
    summary_path = out_dir / "summary.tsv"
    summary_path.write_text("\n".join(summary) + "\n", encoding="utf-8")
    outputs.append(summary_path)
    config = dict(asdict(cfg), thresholds=thresholds)
    return _finish("sweep-jaccard", config, [args.corpus], outputs, out_dir / "manifest.json")


def _write_cdf(path: Path, value_name: str, table) -> None:
    lines = [f"{value_name}\tcum_fraction"]
    for value, frac in table:
        lines.append(f"{format(value, 'g')}\t{frac:.6f}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_sweep_window(args) -> int:
    apply_config_file(args)
    cfg = detector_config(args)
    sizes = [float(x) for x in args.window_sizes.split(",") if x.strip()]
    index = load_corpus(args.corpus)
    rows = sweep_window(index, sizes, cfg)
    out = Path(args.out)
    lines = ["window_minutes\tn_similar_pairs\telapsed_seconds"]
    for row in rows:
        lines.append(f"{format(row.window_minutes, 'g')}\t{row.n_similar_pairs}\t{row.elapsed_seconds:.3f}")
        print(f"window {row.window_minutes:g} min: {row.n_similar_pairs} pairs "
              f"({row.elapsed_seconds:.2f}s)")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    config = dict(asdict(cfg), window_sizes=sizes)
    del config["window_seconds"], config["slide_seconds"]
    return _finish("sweep-window", config, [args.corpus], [out],
                   out.with_name(out.name + ".manifest.json"))


def cmd_graph(args) -> int:
    apply_config_file(args)
    index = load_corpus(args.corpus)
    events = read_events(args.events)
    period = _parse_period(args.period)
    g = build_graph(events, index, period)
    out = Path(args.out)
    export_graph(g, out, fmt=args.format)
    stats = graph_stats(g)
    print(f"graph[{g.period}]: {stats.n_nodes} nodes, {stats.n_edges} edges, "
          f"{stats.n_weak_components} weak components")
    config = {"period": args.period, "format": args.format}
    return _finish("graph", config, [args.corpus, args.events], [out],
                   out.with_name(out.name + ".manifest.json"))


def cmd_filter(args) -> int:
    apply_config_file(args)
    g, communities = import_graph(args.graph)
    cfg = FilterConfig(copy_pct=args.copy_pct, min_tweets=args.min_tweets)
    filtered = filter_graph(g, cfg)
    out = Path(args.out)
    fmt = "graphml" if out.suffix.lower() == ".graphml" else "tsv"
    kept_comm = None
    if communities:
        kept_comm = {a: c for a, c in communities.items() if a in filtered.nodes}
    export_graph(filtered, out, fmt=fmt, communities=kept_comm)
    before, after = graph_stats(g), graph_stats(filtered)
    print(f"filter[{g.period}] T={cfg.copy_pct:g}% min_tweets={cfg.min_tweets}: "
          f"{before.n_nodes}->{after.n_nodes} nodes, {before.n_edges}->{after.n_edges} edges, "
          f"{after.n_weak_components} weak components")
    return _finish("filter", asdict(cfg), [args.graph], [out],
                   out.with_name(out.name + ".manifest.json"))


def cmd_communities(args) -> int:
    apply_config_file(args)
    g, _ = import_graph(args.graph)
    assignment = botnets.detect_communities(
        g, seed=args.seed, resolution=args.resolution, weighted=not args.unweighted
    )
    out = Path(args.out)
    botnets.write_assignment(assignment.communities, out)
    print(f"communities[{g.period}]: {assignment.n_communities} communities, "
          f"modularity {assignment.modularity:.4f}")
    config = {"seed": args.seed, "resolution": args.resolution, "weighted": not args.unweighted}
    return _finish("communities", config, [args.graph], [out],
                   out.with_name(out.name + ".manifest.json"))


def cmd_evolve(args) -> int:
    apply_config_file(args)
    assignment = botnets.read_assignment(args.assignment)
    graphs = []
    for path in args.graphs:
        g, _ = import_graph(path)
        graphs.append(g)
    labels = [g.period for g in graphs]
    projections = [
        botnets.project_communities(
            botnets.CommunityAssignment(assignment, 0.0), g
        )
        for g in graphs
    ]
    timeline = botnets.evolution_metrics(
        labels, graphs, projections, min_delta=args.min_delta, relative=args.relative
    )
    out = Path(args.out)
    botnets.write_timeline(timeline, out)
    print(f"evolve: {len(timeline.entries)} timeline rows over periods {', '.join(labels)}")
    config = {"min_delta": args.min_delta, "relative": args.relative}
    return _finish("evolve", config, [args.assignment, *args.graphs], [out],
                   out.with_name(out.name + ".manifest.json"))


def _parse_layer_args(pairs) -> dict[str, str]:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"--layer expects kind=path, got {pair!r}")
        kind, path = pair.split("=", 1)
        out[kind] = path
    return out


def cmd_layers(args) -> int:
    apply_config_file(args)
    layer_paths = _parse_layer_args(args.layer)
    if not layer_paths:
        raise ValueError("no layers given; use --layer kind=path")
    exemplars = layers.load_exemplars(args.exemplars)
    bots = load_account_set(args.bots)
    report = {"layers": {}, "engagement": {}}
    graphs = []
    inputs = [args.exemplars, args.bots]
    for kind in sorted(layer_paths):
        g = layers.load_layer(layer_paths[kind], kind)
        graphs.append(g)
        inputs.append(layer_paths[kind])
        assignment = layers.cluster_layer(g, seed=args.seed, resolution=args.resolution)
        clusters = layers.classify_clusters(assignment, exemplars, bots, k=args.top_k)
        report["layers"][kind] = {
            "n_nodes": len(g.nodes),
            "n_edges": g.n_edges,
            "n_clusters": assignment.n_communities,
            "modularity": assignment.modularity,
            "report": clusters.as_dict(),
        }
        top = clusters.top[0] if clusters.top else None
        print(f"layer {kind}: {len(g.nodes)} nodes, {assignment.n_communities} clusters"
              + (f", top cluster has {top.bot_count} bots" if top else ""))
    report["engagement"] = layers.bot_engagement(graphs, bots)
    out = Path(args.out)
    out.write_text(stable_json(report), encoding="utf-8")
    config = {"seed": args.seed, "resolution": args.resolution, "top_k": args.top_k}
    return _finish("layers", config, inputs, [out], out.with_name(out.name + ".manifest.json"))


def cmd_trends(args) -> int:
    apply_config_file(args)
    index = load_corpus(args.corpus)
    bots = load_account_set(args.bots)
    snapshots = trends.load_snapshots(args.snapshots)
    horizon = int(args.horizon_hours * 3600)
    bot_tweets = [t for t in index if t.author_id in bots]
    report = trends.trend_interaction(bot_tweets, snapshots, horizon=horizon)
    out = Path(args.out)
    out.write_text(stable_json(report.as_dict()), encoding="utf-8")
    agg = report.aggregates()
    print(f"trends: {agg['posted_hashtags']} accounts posted hashtags, "
          f"{agg['trending_any']} interacted with trends "
          f"({agg['trending_before']} before / {agg['trending_after']} after)")
    config = {"horizon_hours": args.horizon_hours}
    return _finish("trends", config, [args.corpus, args.bots, args.snapshots], [out],
                   out.with_name(out.name + ".manifest.json"))


def cmd_features(args) -> int:
    apply_config_file(args)
    index = load_corpus(args.corpus)
    accounts = {}
    inputs = [args.corpus, args.bots]
    if args.accounts:
        accounts, _ = load_accounts(args.accounts)
        inputs.append(args.accounts)
    layer_paths = _parse_layer_args(args.layer)
    layer_graphs = {}
    for kind, path in sorted(layer_paths.items()):
        layer_graphs[kind] = layers.load_layer(path, kind)
        inputs.append(path)
    bots = load_account_set(args.bots)
    table = features.compute_features(index, accounts, layer_graphs)
    if args.clear:
        clear = load_account_set(args.clear)
        inputs.append(args.clear)
    else:
        clear = set(table) - bots

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    table_path = out_dir / "features.tsv"
    features.write_feature_table(table, table_path)
    outputs.append(table_path)
    defs_path = out_dir / "feature_definitions.tsv"
    defs_path.write_text(
        "\n".join(f"{name}\t{desc}" for name, desc in sorted(features.FEATURE_DEFINITIONS.items()))
        + "\n",
        encoding="utf-8",
    )
    outputs.append(defs_path)

    ranking = features.rank_features(table, bots, clear)
    ranking_path = out_dir / "ranking.tsv"
    ranking_path.write_text(
        "feature\tks\n" + "\n".join(f"{name}\t{ks:.6f}" for name, ks in ranking) + "\n",
        encoding="utf-8",
    )
    outputs.append(ranking_path)
    wanted = args.feature or [name for name, _ in ranking[:5]]
    for name in wanted:
        cmp = features.compare_cdf(table, name, bots, clear)
        lines = ["value\tcum_bots\tcum_clear"]
        grid = sorted({v for v, _ in cmp.cdf_a} | {v for v, _ in cmp.cdf_b})
        for v in grid:
            lines.append(
                f"{format(v, 'g')}\t{cdf_at(list(cmp.cdf_a), v):.6f}\t{cdf_at(list(cmp.cdf_b), v):.6f}"
            )
        cdf_path = out_dir / f"cdf_{name}.tsv"
        cdf_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        outputs.append(cdf_path)
    if accounts:
        hist = features.creation_histogram(accounts, bots, bin_days=args.bin_days)
        hist_path = out_dir / "creation_histogram.tsv"
        hist_lines = ["bin_start\tbin_end\tcount"]
        for start, end, count in hist.bins:
            hist_lines.append(f"{start}\t{end}\t{count}")
        hist_path.write_text("\n".join(hist_lines) + "\n", encoding="utf-8")
        outputs.append(hist_path)
    print(f"features: {len(table)} accounts, top feature "
          f"{ranking[0][0]} (ks={ranking[0][1]:.3f})")
    config = {"bin_days": args.bin_days, "features": args.feature or "top5"}
    return _finish("features", config, inputs, outputs, out_dir / "manifest.json")


def cmd_synth(args) -> int:
    apply_config_file(args)
    if args.spec:
        spec = synth.ScenarioSpec.from_json(args.spec)
    else:
        spec = synth.ScenarioSpec(
            botnets=(
                synth.BotnetSpec("alpha", size=6, campaigns=30),
                synth.BotnetSpec("beta", size=4, campaigns=25, mutation_rate=0.1),
            )
        )
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    result = synth.generate(spec, args.out)
    print(f"synth: wrote scenario with {len(spec.botnets)} botnets under {result.out_dir}")
    return 0  # generate() writes its own manifest


def cmd_export(args) -> int:
    apply_config_file(args)
    g, communities = import_graph(args.graph)
    out = Path(args.out)
    export_graph(g, out, fmt=args.format, communities=communities)
    print(f"export: {g.n_nodes} nodes, {g.n_edges} edges -> {out} ({args.format})")
    return _finish("export", {"format": args.format}, [args.graph], [out],
                   out.with_name(out.name + ".manifest.json"))


def cmd_pipeline(args) -> int:
    apply_config_file(args)
    cfg = detector_config(args)
    fcfg = FilterConfig(copy_pct=args.copy_pct, min_tweets=args.min_tweets)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []

    index = load_corpus(args.corpus)
    events = detect_all(index, cfg, workers=args.workers)
    events_path = out_dir / "events.ndjson"
    write_events(events, events_path)
    outputs.append(events_path)
    stats = event_stats(events)
    print(f"pipeline: {stats.n_events} events, {stats.involved_users} users involved")

    if args.single_period:
        periods = [Period("all", index.min_timestamp, index.max_timestamp + 1)] if len(index) else []
    else:
        periods = calendar_year_periods(index)
    filtered_graphs = []
    report = {"events": stats.as_dict(), "periods": {}}
    for period in periods:
        g = build_graph(events, index, period)
        g_path = out_dir / f"graph_{period.label}.graphml"
        export_graph(g, g_path, fmt="graphml")
        outputs.append(g_path)
        filtered = filter_graph(g, fcfg)
        filtered_graphs.append(filtered)
        report["periods"][period.label] = {
            "before": graph_stats(g).as_dict(),
            "after": graph_stats(filtered).as_dict(),
        }
        print(f"  {period.label}: {g.n_nodes}->{filtered.n_nodes} nodes after filter")

    merged = botnets.merge_graphs(filtered_graphs) if filtered_graphs else None
    if merged is not None:
        assignment = botnets.detect_communities(
            merged, seed=args.seed, resolution=args.resolution, weighted=not args.unweighted
        )
        merged_path = out_dir / "merged.graphml"
        export_graph(merged, merged_path, fmt="graphml", communities=assignment.communities)
        outputs.append(merged_path)
        comm_path = out_dir / "communities.tsv"
        botnets.write_assignment(assignment.communities, comm_path)
        outputs.append(comm_path)
        for period, filtered in zip(periods, filtered_graphs):
            f_path = out_dir / f"filtered_{period.label}.graphml"
            projection = botnets.project_communities(assignment, filtered)
            export_graph(filtered, f_path, fmt="graphml", communities=projection)
            outputs.append(f_path)
        bots_path = out_dir / "bots.txt"
        bot_list = sorted(merged.nodes)
        bots_path.write_text("\n".join(bot_list) + ("\n" if bot_list else ""), encoding="utf-8")
        outputs.append(bots_path)
        report["merged"] = graph_stats(merged).as_dict()
        report["modularity"] = assignment.modularity
        report["n_communities"] = assignment.n_communities
        print(f"  merged: {merged.n_nodes} accounts in {assignment.n_communities} communities "
              f"(modularity {assignment.modularity:.4f})")
        if len(filtered_graphs) >= 2:
            projections = [
                botnets.project_communities(assignment, g) for g in filtered_graphs
            ]
            timeline = botnets.evolution_metrics(
                [p.label for p in periods], filtered_graphs, projections
            )
            timeline_path = out_dir / "timeline.tsv"
            botnets.write_timeline(timeline, timeline_path)
            outputs.append(timeline_path)

    report_path = out_dir / "report.json"
    report_path.write_text(stable_json(report), encoding="utf-8")
    outputs.append(report_path)

    config = dict(asdict(cfg), **asdict(fcfg), seed=args.seed, resolution=args.resolution,
                  weighted=not args.unweighted, single_period=args.single_period)
    return _finish("pipeline", config, [args.corpus], outputs, out_dir / "manifest.json")


# --- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="copyflock",
        description="Detect coordinated content injection in a timestamped micro-post corpus.",
    )
    parser.add_argument("--version", action="version", version=f"copyflock {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="find copy events in a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    add_detector_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("sweep-jaccard", help="threshold sensitivity sweep")
    p.add_argument("--corpus", required=True)
    p.add_argument("--thresholds", default="0.5,0.6,0.7,0.8,0.9")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    add_detector_flags(p)
    p.set_defaults(func=cmd_sweep_jaccard)

    p = sub.add_parser("sweep-window", help="window-size sensitivity sweep")
    p.add_argument("--corpus", required=True)
    p.add_argument("--window-sizes", default="2.5,5,10,15,20")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    add_detector_flags(p)
    p.set_defaults(func=cmd_sweep_window)

    p = sub.add_parser("graph", help="build the copy graph from events")
    p.add_argument("--corpus", required=True)
    p.add_argument("--events", required=True)
    p.add_argument("--period", help="calendar year (e.g. 2016) or label:start:end")
    p.add_argument("--format", choices=["tsv", "graphml"], default="graphml")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("filter", help="apply copy-percentage and activity filters")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    add_filter_flags(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("communities", help="community detection on a copy graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    add_community_flags(p)
    p.set_defaults(func=cmd_communities)

    p = sub.add_parser("evolve", help="botnet evolution over period graphs")
    p.add_argument("--assignment", required=True)
    p.add_argument("--graphs", nargs="+", required=True, help="period graphs in time order")
    p.add_argument("--out", required=True)
    p.add_argument("--min-delta", type=int, default=1)
    p.add_argument("--relative", action="store_true")
    p.add_argument("--config")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("layers", help="cluster and classify interaction layers")
    p.add_argument("--layer", action="append", metavar="KIND=PATH")
    p.add_argument("--exemplars", required=True)
    p.add_argument("--bots", required=True)
    p.add_argument("--top-k", type=int, default=3)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    add_community_flags(p)
    p.set_defaults(func=cmd_layers)

    p = sub.add_parser("trends", help="trending-topic interaction of bot accounts")
    p.add_argument("--corpus", required=True)
    p.add_argument("--bots", required=True)
    p.add_argument("--snapshots", required=True)
    p.add_argument("--horizon-hours", type=float, default=24.0)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_trends)

    p = sub.add_parser("features", help="per-account features and CDF comparisons")
    p.add_argument("--corpus", required=True)
    p.add_argument("--accounts")
    p.add_argument("--layer", action="append", metavar="KIND=PATH")
    p.add_argument("--bots", required=True)
    p.add_argument("--clear", help="clear account list (default: everyone not in --bots)")
    p.add_argument("--feature", action="append")
    p.add_argument("--bin-days", type=int, default=7)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("synth", help="generate a labeled synthetic scenario")
    p.add_argument("--spec", help="scenario spec JSON (default: small demo scenario)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("export", help="convert a graph between tsv and graphml")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", choices=["tsv", "graphml"], required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("pipeline", help="detect, build, filter, cluster and evolve in one run")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--single-period", action="store_true",
                   help="treat the whole corpus as one period instead of calendar years")
    p.add_argument("--config")
    add_detector_flags(p)
    add_filter_flags(p)
    add_community_flags(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"copyflock: missing input: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"copyflock: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
