use std::io::Write;

use citeclass::baseline::{run_baseline, BaselineConfig, SizeBasis};
use citeclass::cluster::{aggregate_to_class_graph, slm_cluster, ClusterConfig, Partition, PublicationHierarchy};
use citeclass::corpus::{build_citation_network, filter_articles, DanglingPolicy};
use citeclass::evaluation::{run_sweep, AdaptiveSweep, Labeling, SweepConfig, SweepInput};
use citeclass::io;
use log::info;
use serde_json::json;

use super::artifact::*;
use super::{with_tabs, Context};
use crate::args::{BaselineArgs, ClusterTopicsArgs, SizeBasisArg, SweepArgs};
use crate::error::CliError;

pub fn cmd_ingest(ctx: &Context) -> Result<String, CliError> {
    let manifest = ctx.manifest()?;
    let mut run = ctx.ws.begin("ingest");
    let (corpus, report) = run.ingest_corpus(&manifest)?;
    let network = build_citation_network(&filter_articles(&corpus));
    let isolated = network.isolated_count();

    run.write_external(&manifest.node_map, |w| io::write_node_map(w, &corpus))?;
    run.write(INGEST_REPORT, |w| {
        writeln!(w, "{}", with_tabs(&["item", "count"]))?;
        for (name, n) in report.counts() {
            writeln!(w, "{name}\t{n}")?;
        }
        writeln!(w, "network_nodes\t{}", network.graph.node_count())?;
        writeln!(w, "network_edges\t{}", network.graph.edge_count())?;
        writeln!(w, "isolated_articles\t{isolated}")
    })?;
    let dangling = match manifest.dangling {
        DanglingPolicy::Drop => "drop",
        DanglingPolicy::Reject => "reject",
    };
    run.commit(json!({
        "dangling": dangling,
        "year_min": manifest.year_min,
        "year_max": manifest.year_max,
        "node_map": manifest.node_map.display().to_string(),
    }))?;
    Ok(format!(
        "ingest: {} publications, {} citations, {} network edges, {isolated} isolated articles",
        report.publications,
        report.citations,
        network.graph.edge_count()
    ))
}

pub fn cmd_cluster_topics(ctx: &Context, args: &ClusterTopicsArgs) -> Result<String, CliError> {
    let manifest = ctx.manifest()?;
    let mut run = ctx.ws.begin("cluster-topics");
    let corpus = run.corpus(&manifest)?;
    let config = ClusterConfig {
        resolution: args.resolution,
        seed: ctx.stage_seed("cluster-topics"),
        max_outer_iterations: args.max_iterations,
        random_starts: args.random_starts,
        ..ClusterConfig::default()
    };
    config.validate()?;

    let full = build_citation_network(&filter_articles(&corpus));
    let network = full.without_isolated();
    info!(
        "clustering {} articles ({} isolated articles left out)",
        network.pubs.len(),
        full.isolated_count()
    );
    if network.pubs.is_empty() {
        return Err(CliError::Data("no article has a citation relation inside the corpus".into()));
    }
    let topics = slm_cluster(&network.graph, &config)?.sorted_by_size();
    let class_graph = aggregate_to_class_graph(&network.graph, &topics)?;
    let labeling = Labeling::new(network.pubs.clone(), topics.labels().to_vec())
        .map_err(|e| CliError::Internal(e.to_string()))?;

    run.write(TOPICS, |w| io::write_labeling(w, &corpus, &labeling))?;
    run.write(CLASS_GRAPH, |w| io::write_class_graph(w, &class_graph))?;
    run.commit(json!({
        "resolution": config.resolution,
        "seed": config.seed,
        "max_outer_iterations": config.max_outer_iterations,
        "quality_tolerance": config.quality_tolerance,
        "random_starts": config.random_starts,
    }))?;
    Ok(format!(
        "cluster-topics: {} topics over {} articles, {} class-graph edges",
        topics.class_count(),
        network.pubs.len(),
        class_graph.graph.edge_count()
    ))
}

pub fn cmd_baseline(ctx: &Context, args: &BaselineArgs) -> Result<String, CliError> {
    let manifest = ctx.manifest()?;
    let mut run = ctx.ws.begin("baseline");
    let corpus = run.corpus(&manifest)?;
    let topics = io::read_labeling(&run.upstream("cluster-topics", TOPICS)?, &corpus)?;
    let config = BaselineConfig {
        year: args.year,
        excluded_categories: args.exclude_category.clone(),
        size_percentile_low: args.size_window.0,
        size_percentile_high: args.size_window.1,
        size_basis: match args.size_basis {
            SizeBasisArg::Journals => SizeBasis::Journals,
            SizeBasisArg::Articles => SizeBasis::Articles,
        },
        self_citation_min: args.self_citation_min,
        overlap_threshold: args.overlap_threshold,
        seed: ctx.stage_seed("baseline"),
    };
    let result = run_baseline(&corpus, &config, topics.items())?;
    for s in &result.ladder {
        info!("{}: {} journals, {} articles", s.stage, s.journals, s.articles);
    }

    run.write(BASELINE, |w| io::write_baseline(w, &corpus, &result.classification))?;
    run.write(BASELINE_AUDIT, |w| io::write_audit(w, &result.ladder))?;
    let window = result.size_window.map(|w| json!([w.min, w.max]));
    run.commit(json!({
        "year": config.year,
        "excluded_categories": config.excluded_categories,
        "size_percentiles": [config.size_percentile_low, config.size_percentile_high],
        "size_basis": format!("{:?}", config.size_basis).to_lowercase(),
        "size_window_articles": window,
        "self_citation_min": config.self_citation_min,
        "overlap_threshold": config.overlap_threshold,
        "seed": config.seed,
        "representatives": result.representative_count(),
    }))?;
    Ok(format!(
        "baseline: {} journal classes with {} articles ({} representatives)",
        result.classification.class_count(),
        result.classification.articles.len(),
        result.representative_count()
    ))
}

pub fn cmd_sweep(ctx: &Context, args: &SweepArgs) -> Result<String, CliError> {
    let manifest = ctx.manifest()?;
    let mut run = ctx.ws.begin("sweep");
    let corpus = run.corpus(&manifest)?;
    let topics = io::read_labeling(&run.upstream("cluster-topics", TOPICS)?, &corpus)?;
    let partition = Partition::try_from_dense(topics.labels().to_vec())?;
    let class_graph = io::read_class_graph(&run.upstream("cluster-topics", CLASS_GRAPH)?, &partition)?;
    let baseline = io::read_baseline(&run.upstream("baseline", BASELINE)?, &corpus)?;

    let resolutions = match &args.resolutions {
        Some(r) => r.clone(),
        None => SweepConfig::ladder(args.ladder_start, args.ladder_step, args.ladder_count),
    };
    let config = SweepConfig {
        resolutions,
        cluster: ClusterConfig {
            seed: ctx.stage_seed("sweep"),
            max_outer_iterations: args.max_iterations,
            random_starts: args.random_starts,
            ..ClusterConfig::default()
        },
        large_class_min: args.large_class_min,
        adaptive: args.adaptive_step.map(|step| AdaptiveSweep {
            step,
            max_extra_runs: args.adaptive_max,
        }),
    };
    let baseline_labeling = baseline.labeling();
    let input = SweepInput {
        class_graph: &class_graph,
        topics: &partition,
        pubs: topics.items(),
        baseline: &baseline_labeling,
    };
    let result = run_sweep(input, &config)?;
    let hierarchy = PublicationHierarchy::from_hierarchy(topics.items(), result.selected_hierarchy());

    run.write(SWEEP_REPORT, |w| io::write_sweep_report(w, &result))?;
    run.write(HIERARCHY, |w| io::write_hierarchy(w, &corpus, &hierarchy))?;
    let best = result.selected_row().clone();
    run.commit(json!({
        "resolutions": result.rows.iter().map(|r| r.resolution).collect::<Vec<_>>(),
        "seed": config.cluster.seed,
        "max_outer_iterations": config.cluster.max_outer_iterations,
        "random_starts": config.cluster.random_starts,
        "large_class_min": config.large_class_min,
        "adaptive_step": args.adaptive_step,
        "adaptive_max": args.adaptive_max,
        "selected_resolution": best.resolution,
    }))?;
    Ok(format!(
        "sweep: {} runs, selected resolution {} with ARI {:.6} and {} specialties",
        result.rows.len(),
        best.resolution,
        best.ari,
        best.n_classes
    ))
}
