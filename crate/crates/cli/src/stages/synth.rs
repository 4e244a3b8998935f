use std::fs;
use std::path::{Path, PathBuf};

use citeclass::synth::{generate, write_corpus, write_scale_corpus, PlantSpec, ScaleSpec};
use serde_json::json;

use super::Context;
use crate::args::SynthArgs;
use crate::error::CliError;

/// Scratch directory inside the output directory, removed on drop.
struct Staging(PathBuf);

impl Staging {
    fn new(out: &Path) -> Result<Self, CliError> {
        let dir = out.join(format!(".synth.tmp.{}", std::process::id()));
        fs::create_dir_all(&dir)
            .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self(dir))
    }
}

impl Drop for Staging {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

fn staged_files(dir: &Path) -> Result<Vec<String>, CliError> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .and_then(|entries| {
            entries
                .map(|e| e.map(|e| e.file_name().to_string_lossy().into_owned()))
                .collect()
        })
        .map_err(|e| CliError::Internal(format!("cannot list {}: {e}", dir.display())))?;
    names.sort();
    Ok(names)
}

pub fn cmd_synth(ctx: &Context, args: &SynthArgs) -> Result<String, CliError> {
    let seed = ctx.stage_seed("synth");
    let staging = Staging::new(ctx.ws.dir())?;
    let mut run = ctx.ws.begin("synth");

    let (params, message) = if let Some(nodes) = args.scale_nodes {
        let spec = ScaleSpec {
            nodes,
            edges: args.scale_edges,
            journals: args.scale_journals,
            years: args.years.clone(),
            seed,
            ..ScaleSpec::default()
        };
        write_scale_corpus(&spec, &staging.0)?;
        (
            json!({
                "mode": "scale",
                "nodes": spec.nodes,
                "edges": spec.edges,
                "block": spec.block,
                "journals": spec.journals,
                "years": [spec.years.start(), spec.years.end()],
                "seed": seed,
            }),
            format!("synth: {} publications, {} citations", spec.nodes, spec.edges),
        )
    } else {
        let spec = PlantSpec {
            n_specialties: args.specialties,
            topics_per_specialty: args.topics.clone(),
            articles_per_topic: args.articles_per_topic.clone(),
            p_intra_topic: args.p_topic,
            p_intra_specialty: args.p_specialty,
            p_background: args.p_background,
            journals: args.journals,
            multidisciplinary_journals: args.multidisciplinary_journals,
            purity: args.purity,
            years: args.years.clone(),
            keywords_per_topic: args.keywords_per_topic,
            keywords_per_article: args.keywords_per_article,
            seed,
        };
        let corpus = generate(&spec)?;
        write_corpus(&corpus, &staging.0)?;
        (
            json!({
                "mode": "planted",
                "specialties": spec.n_specialties,
                "topics_per_specialty": [spec.topics_per_specialty.start(), spec.topics_per_specialty.end()],
                "articles_per_topic": [spec.articles_per_topic.start(), spec.articles_per_topic.end()],
                "p_intra_topic": spec.p_intra_topic,
                "p_intra_specialty": spec.p_intra_specialty,
                "p_background": spec.p_background,
                "journals": spec.journals,
                "multidisciplinary_journals": spec.multidisciplinary_journals,
                "purity": spec.purity,
                "years": [spec.years.start(), spec.years.end()],
                "keywords_per_topic": spec.keywords_per_topic,
                "keywords_per_article": spec.keywords_per_article,
                "seed": seed,
            }),
            format!(
                "synth: {} publications in {} topics, {} citations",
                corpus.publications.len(),
                corpus.topic_count,
                corpus.citations.len()
            ),
        )
    };
    for name in staged_files(&staging.0)? {
        run.adopt(&staging.0.join(&name), &name);
    }
    run.commit(params)?;
    Ok(format!("{message}; manifest {}", ctx.ws.path("manifest.txt").display()))
}
