use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use citeclass::analytics::{
    average_class_profile, category_case_study, class_size_stats, export_alluvial, label_classes,
    modal_interval, profile_flows, size_histogram, small_class_share, topics_per_specialty,
    yearly_class_stats, AnalyticsError, ClassLabel, Weighting,
};
use citeclass::baseline::profile_journals;
use citeclass::io::{self, tsv::for_each_row};
use log::warn;
use serde_json::json;

use super::artifact::*;
use super::{with_tabs, Context};
use crate::args::{AnalyzeArgs, CaseStudyArgs, LabelArgs};
use crate::error::CliError;

pub const CLASS_SIZES_HEADER: [&str; 10] = [
    "level",
    "weighting",
    "classes",
    "articles",
    "mean",
    "median",
    "p10",
    "p90",
    "small_threshold",
    "small_share",
];
pub const TOPIC_LABELS_HEADER: [&str; 2] = ["topic_id", "label"];
pub const SPECIALTY_LABELS_HEADER: [&str; 2] = ["specialty_id", "label"];

fn weighting_name(w: Weighting) -> &'static str {
    match w {
        Weighting::ByClass => "by_class",
        Weighting::ByArticle => "by_article",
    }
}

pub fn cmd_analyze(ctx: &Context, args: &AnalyzeArgs) -> Result<String, CliError> {
    let manifest = ctx.manifest()?;
    let mut run = ctx.ws.begin("analyze");
    let corpus = run.corpus(&manifest)?;
    let hier = io::read_hierarchy(&run.upstream("sweep", HIERARCHY)?, &corpus)?;
    let baseline = io::read_baseline(&run.upstream("baseline", BASELINE)?, &corpus)?;
    let baseline_year = ctx
        .ws
        .read_record("baseline")?
        .and_then(|r| r["params"]["year"].as_i64())
        .ok_or_else(|| CliError::Data("baseline stage record has no year; rerun `citeclass baseline`".into()))?
        as i32;
    if hier.is_empty() {
        return Err(CliError::Data("the hierarchy classifies no publications".into()));
    }
    let levels = [("topic", hier.topic_labeling()), ("specialty", hier.specialty_labeling())];

    let mut size_rows = Vec::new();
    for (level, labeling) in &levels {
        let sizes = labeling.class_sizes();
        let share = small_class_share(&sizes, args.small_threshold);
        for weighting in [Weighting::ByClass, Weighting::ByArticle] {
            let s = class_size_stats(&sizes, weighting, args.min_size)?;
            size_rows.push(format!(
                "{level}\t{}\t{}\t{}\t{:.2}\t{}\t{}\t{}\t{}\t{share:.6}",
                weighting_name(weighting),
                s.classes,
                s.articles,
                s.mean,
                s.median,
                s.p10,
                s.p90,
                args.small_threshold
            ));
        }
    }
    run.write(CLASS_SIZES, |w| {
        writeln!(w, "{}", with_tabs(&CLASS_SIZES_HEADER))?;
        size_rows.iter().try_for_each(|r| writeln!(w, "{r}"))
    })?;

    let per_specialty = topics_per_specialty(&hier, args.specialty_min, args.topic_min);
    if per_specialty.is_none() {
        warn!(
            "no specialty has {} or more articles; {TOPICS_PER_SPECIALTY} has no data row",
            args.specialty_min
        );
    }
    run.write(TOPICS_PER_SPECIALTY, |w| {
        writeln!(
            w,
            "{}",
            with_tabs(&["specialty_min", "topic_min", "specialties", "mean", "median", "mode", "p10", "p90"])
        )?;
        if let Some(d) = per_specialty {
            writeln!(
                w,
                "{}\t{}\t{}\t{:.2}\t{}\t{}\t{}\t{}",
                args.specialty_min, args.topic_min, d.count, d.mean, d.median, d.mode, d.p10, d.p90
            )?;
        }
        Ok(())
    })?;

    let years = args.years.clone().unwrap_or_else(|| {
        let ys = hier.pubs().iter().map(|&p| corpus.publication(p).year);
        let (lo, hi) = ys.fold((i32::MAX, i32::MIN), |(lo, hi), y| (lo.min(y), hi.max(y)));
        lo..=hi
    });
    let mut year_rows = Vec::new();
    for (level, labeling) in &levels {
        for row in yearly_class_stats(labeling, &corpus, years.clone()) {
            year_rows.push(match row.stats {
                Some(s) => format!(
                    "{level}\t{}\t{}\t{}\t{:.2}\t{}\t{}\t{}",
                    row.year, row.articles, s.classes, s.mean, s.median, s.p10, s.p90
                ),
                None => format!("{level}\t{}\t0\t0\t0\t0\t0\t0", row.year),
            });
        }
    }
    run.write(YEARLY, |w| {
        writeln!(
            w,
            "{}",
            with_tabs(&["level", "year", "articles", "classes", "mean", "median", "p10", "p90"])
        )?;
        year_rows.iter().try_for_each(|r| writeln!(w, "{r}"))
    })?;

    let profile = match average_class_profile(&baseline.labeling(), &levels[1].1) {
        Ok(p) => Some(p),
        Err(e @ AnalyticsError::NoMatchingSpread { .. }) => {
            warn!("{e}; the profile tables have no data rows");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let flows = profile
        .as_ref()
        .map(|p| profile_flows(p, "Journal class", "Specialty rank "))
        .unwrap_or_default();
    run.write(PROFILE, |w| {
        writeln!(w, "{}", with_tabs(&["rank", "mean_articles"]))?;
        for (i, a) in profile.iter().flat_map(|p| p.rank_averages.iter()).enumerate() {
            writeln!(w, "{}\t{a}", i + 1)?;
        }
        Ok(())
    })?;
    run.write(PROFILE_SUMMARY, |w| {
        writeln!(w, "{}", with_tabs(&["item", "value"]))?;
        if let Some(p) = &profile {
            writeln!(w, "spread\t{}", p.spread)?;
            writeln!(w, "selected_classes\t{}", p.selected_class_count())?;
            writeln!(w, "selected_mean_size\t{}", p.selected_mean_size)?;
            writeln!(w, "rank_sum\t{}", p.rank_averages.iter().sum::<f64>())?;
        }
        Ok(())
    })?;
    run.write(ALLUVIAL, |w| w.write_all(export_alluvial(&flows).as_bytes()))?;
    run.write(ALLUVIAL_TSV, |w| {
        writeln!(w, "{}", with_tabs(&["source", "amount", "target"]))?;
        flows
            .iter()
            .try_for_each(|f| writeln!(w, "{}\t{}\t{}", f.source, f.amount, f.target))
    })?;

    let journal_sizes: Vec<u64> = profile_journals(&corpus, baseline_year)
        .iter()
        .map(|p| p.size())
        .collect();
    let modal = modal_interval(&journal_sizes, args.histogram_width);
    run.write(JOURNAL_HISTOGRAM, |w| {
        writeln!(w, "{}", with_tabs(&["low", "high", "journals", "modal"]))?;
        for b in size_histogram(&journal_sizes, args.histogram_width) {
            let is_modal = modal.as_ref().is_some_and(|m| m.low == b.low);
            writeln!(w, "{}\t{}\t{}\t{}", b.low, b.high, b.count, u8::from(is_modal))?;
        }
        Ok(())
    })?;

    run.commit(json!({
        "specialty_min": args.specialty_min,
        "topic_min": args.topic_min,
        "small_threshold": args.small_threshold,
        "min_size": args.min_size,
        "years": [years.start(), years.end()],
        "baseline_year": baseline_year,
        "histogram_width": args.histogram_width,
    }))?;
    let spread = profile.map_or("none".to_string(), |p| p.spread.to_string());
    Ok(format!(
        "analyze: {} topics, {} specialties, average class spread {spread}",
        levels[0].1.class_count(),
        levels[1].1.class_count()
    ))
}

fn write_labels(w: &mut impl Write, header: &[&str], labels: &[ClassLabel]) -> std::io::Result<()> {
    writeln!(w, "{}", with_tabs(header))?;
    for l in labels {
        writeln!(w, "{}\t{}", l.class_id, l.label)?;
    }
    Ok(())
}

fn read_labels(path: &Path, header: &[&str]) -> Result<HashMap<u32, String>, CliError> {
    let mut labels = HashMap::new();
    for_each_row(path, header, |_, f| {
        let id: u32 = f[0].trim().parse().map_err(|_| format!("invalid class id {:?}", f[0]))?;
        labels.insert(id, f[1].to_string());
        Ok::<(), String>(())
    })
    .map_err(|e| CliError::Data(e.to_string()))?;
    Ok(labels)
}

pub fn cmd_label(ctx: &Context, args: &LabelArgs) -> Result<String, CliError> {
    if args.k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let manifest = ctx.manifest()?;
    let mut run = ctx.ws.begin("label");
    let corpus = run.corpus(&manifest)?;
    let hier = io::read_hierarchy(&run.upstream("sweep", HIERARCHY)?, &corpus)?;
    let topics = label_classes(&corpus, &hier.topic_labeling(), args.k);
    let specialties = label_classes(&corpus, &hier.specialty_labeling(), args.k);
    run.write(TOPIC_LABELS, |w| write_labels(w, &TOPIC_LABELS_HEADER, &topics))?;
    run.write(SPECIALTY_LABELS, |w| write_labels(w, &SPECIALTY_LABELS_HEADER, &specialties))?;
    run.commit(json!({ "k": args.k }))?;
    let unlabeled = topics.iter().chain(&specialties).filter(|l| l.label.is_empty()).count();
    Ok(format!(
        "label: {} topic and {} specialty labels, {unlabeled} classes without keywords",
        topics.len(),
        specialties.len()
    ))
}

pub fn cmd_case_study(ctx: &Context, args: &CaseStudyArgs) -> Result<String, CliError> {
    let manifest = ctx.manifest()?;
    let mut run = ctx.ws.begin("case-study");
    let corpus = run.corpus(&manifest)?;
    let hier = io::read_hierarchy(&run.upstream("sweep", HIERARCHY)?, &corpus)?;
    let specialty_labels = match run.optional_upstream("label", SPECIALTY_LABELS)? {
        Some(p) => read_labels(&p, &SPECIALTY_LABELS_HEADER)?,
        None => HashMap::new(),
    };
    let topic_labels = match run.optional_upstream("label", TOPIC_LABELS)? {
        Some(p) => read_labels(&p, &TOPIC_LABELS_HEADER)?,
        None => HashMap::new(),
    };
    let study = category_case_study(&corpus, &hier, &args.category, args.years.clone(), args.top)?;
    let label = |m: &HashMap<u32, String>, id: u32| m.get(&id).cloned().unwrap_or_default();

    run.write(CASE_SPECIALTIES, |w| {
        writeln!(
            w,
            "{}",
            with_tabs(&["rank", "specialty_id", "category_articles", "specialty_articles", "share", "label"])
        )?;
        for r in &study.specialties {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{:.6}\t{}",
                r.rank,
                r.specialty,
                r.count,
                r.total,
                r.share,
                label(&specialty_labels, r.specialty)
            )?;
        }
        Ok(())
    })?;
    run.write(CASE_TOPICS, |w| {
        writeln!(
            w,
            "{}",
            with_tabs(&["specialty_id", "rank", "topic_id", "category_articles", "topic_articles", "share", "label"])
        )?;
        for r in &study.topics {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{:.6}\t{}",
                r.specialty,
                r.rank,
                r.topic,
                r.count,
                r.total,
                r.share,
                label(&topic_labels, r.topic)
            )?;
        }
        Ok(())
    })?;
    run.commit(json!({
        "category": args.category,
        "years": [args.years.start(), args.years.end()],
        "top": args.top,
        "category_articles": study.category_articles,
    }))?;
    Ok(format!(
        "case-study: {} articles of {:?} spread over {} specialties",
        study.category_articles,
        args.category,
        study.specialties.len()
    ))
}
