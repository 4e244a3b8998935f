//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when
//! any criterion fails. Pass a substring to run only matching criteria.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use citeclass::analytics::{
    average_class_profile, class_size_stats, export_alluvial, parse_alluvial, Flow, Weighting,
};
use citeclass::baseline::{
    journal_overlap, overlap_records, profile_journals, run_baseline, BaselineConfig,
    ReferenceMultiset, SizeWindow,
};
use citeclass::cluster::{cpm_quality, slm_cluster, ClusterConfig, Partition};
use citeclass::corpus::{build_citation_network, filter_articles, load_corpus, CorpusBuilder, DocType};
use citeclass::evaluation::{adjusted_rand_index, ari_from_labels, derive_classification, Labeling};
use citeclass::io::{read_ground_truth, read_hierarchy};
use citeclass::synth::{write_scale_corpus, ScaleSpec};
use citeclass::{seed, Corpus, WeightedGraph};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

// Formula exactness for self-citation ratios and journal overlap.

fn random_journal_corpus(rng: &mut impl Rng) -> Corpus {
    let journals = rng.gen_range(3..=8);
    let n = rng.gen_range(20..=60);
    let mut b = CorpusBuilder::default();
    for i in 0..n {
        let year = if rng.gen_bool(0.7) { 2010 } else { 2009 };
        let doc = match rng.gen_range(0..10) {
            0 => DocType::Other,
            1 => DocType::Review,
            _ => DocType::Article,
        };
        let journal = format!("J{}", rng.gen_range(0..journals));
        let journal = (!rng.gen_bool(0.05)).then_some(journal.as_str());
        b.add_publication(&format!("p{i}"), year, doc, journal).unwrap();
    }
    for _ in 0..rng.gen_range(n..4 * n) {
        let (a, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let _ = b.add_citation(&format!("p{a}"), &format!("p{c}"));
    }
    b.finish().0
}

fn formula_exactness() -> Outcome {
    let mut rng = seed::rng(11);
    let mut pairs_checked = 0;
    for fixture in 0..50 {
        let corpus = random_journal_corpus(&mut rng);
        let profiles = profile_journals(&corpus, 2010);

        // Direct recomputation from the citation list.
        let mut active: BTreeMap<u32, u64> = BTreeMap::new();
        let mut own: BTreeMap<u32, u64> = BTreeMap::new();
        let mut refs: BTreeMap<u32, HashMap<u32, u64>> = BTreeMap::new();
        let mut has_articles: BTreeMap<u32, bool> = BTreeMap::new();
        for p in corpus.publications() {
            if p.year == 2010 && p.doc_type.is_article() {
                if let Some(j) = p.journal {
                    has_articles.insert(j, true);
                }
            }
        }
        for &(citing, cited) in corpus.citations() {
            let p = corpus.publication(citing);
            if p.year != 2010 || !p.doc_type.is_article() {
                continue;
            }
            let Some(j) = p.journal else { continue };
            *active.entry(j).or_default() += 1;
            if corpus.publication(cited).journal == Some(j) {
                *own.entry(j).or_default() += 1;
            }
            *refs.entry(j).or_default().entry(cited).or_default() += 1;
        }
        ensure(profiles.len() == has_articles.len(), || {
            format!("fixture {fixture}: {} profiles, expected {}", profiles.len(), has_articles.len())
        })?;
        for p in &profiles {
            let a = active.get(&p.journal).copied().unwrap_or(0);
            let expected = (a > 0).then(|| own.get(&p.journal).copied().unwrap_or(0) as f64 / a as f64);
            match (p.self_citation_ratio(), expected) {
                (None, None) => {}
                (Some(x), Some(y)) if (x - y).abs() <= 1e-12 => {}
                (x, y) => return Err(format!("fixture {fixture} journal {}: ratio {x:?} vs {y:?}", p.journal)),
            }
        }

        let records = overlap_records(&corpus, &profiles);
        let mut seen = 0;
        for (i, pa) in profiles.iter().enumerate() {
            for pb in &profiles[i + 1..] {
                let empty = HashMap::new();
                let ra = refs.get(&pa.journal).unwrap_or(&empty);
                let rb = refs.get(&pb.journal).unwrap_or(&empty);
                let m: u64 = ra.iter().map(|(c, n)| (*n).min(rb.get(c).copied().unwrap_or(0))).sum();
                let found = records
                    .iter()
                    .find(|r| r.journal_a == pa.journal && r.journal_b == pb.journal);
                if m == 0 {
                    ensure(found.is_none(), || format!("fixture {fixture}: record without shared references"))?;
                    continue;
                }
                seen += 1;
                let r = found.ok_or_else(|| format!("fixture {fixture}: missing record"))?;
                let (ta, tb) = (ra.values().sum::<u64>() as f64, rb.values().sum::<u64>() as f64);
                let y = 0.5 * (m as f64 / ta + m as f64 / tb);
                ensure(r.shared == m && (r.overlap - y).abs() <= 1e-12, || {
                    format!("fixture {fixture}: overlap {} (m {}) vs {y} (m {m})", r.overlap, r.shared)
                })?;
            }
        }
        ensure(seen == records.len(), || format!("fixture {fixture}: extra records"))?;
        pairs_checked += seen;
    }

    // One journal cites a publication four times, another twice.
    let a = ReferenceMultiset::from_cited([7, 7, 7, 7]);
    let b = ReferenceMultiset::from_cited([7, 7]);
    let r = journal_overlap(0, &a, 1, &b).map_err(|e| e.to_string())?;
    ensure(r.shared == 2 && r.overlap == 0.75, || format!("worked example gave m {} y {}", r.shared, r.overlap))?;

    let mut builder = CorpusBuilder::default();
    builder.add_publication("x", 2005, DocType::Article, Some("Z")).unwrap();
    for i in 0..4 {
        builder.add_publication(&format!("a{i}"), 2010, DocType::Article, Some("A")).unwrap();
        builder.add_citation(&format!("a{i}"), "x").unwrap();
    }
    for i in 0..2 {
        builder.add_publication(&format!("b{i}"), 2010, DocType::Article, Some("B")).unwrap();
        builder.add_citation(&format!("b{i}"), "x").unwrap();
    }
    let corpus = builder.finish().0;
    let profiles = profile_journals(&corpus, 2010);
    let recs = overlap_records(&corpus, &profiles);
    ensure(recs.len() == 1 && recs[0].shared == 2, || format!("corpus worked example gave {recs:?}"))?;

    Ok(format!("50 fixtures, {pairs_checked} journal pairs; worked example m = 2"))
}

// Adjusted Rand index against all-pairs enumeration.

fn ari_by_enumeration(a: &[u32], b: &[u32]) -> f64 {
    let (mut ss, mut sd, mut ds, mut dd) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => ss += 1,
                (true, false) => sd += 1,
                (false, true) => ds += 1,
                (false, false) => dd += 1,
            }
        }
    }
    let num = 2 * (ss * dd - sd * ds);
    let den = (ss + sd) * (sd + dd) + (ss + ds) * (ds + dd);
    if den == 0 {
        1.0
    } else {
        num as f64 / den as f64
    }
}

fn ari_oracle() -> Outcome {
    let mut rng = seed::rng(22);
    let mut worst: f64 = 0.0;
    for fixture in 0..500 {
        let n = rng.gen_range(2..=10);
        let (ka, kb) = (rng.gen_range(1..=n as u32), rng.gen_range(1..=n as u32));
        let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..ka)).collect();
        let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..kb)).collect();
        let fast = ari_from_labels(&a, &b).map_err(|e| e.to_string())?.ari;
        let slow = ari_by_enumeration(&a, &b);
        worst = worst.max((fast - slow).abs());
        ensure((fast - slow).abs() <= 1e-12, || format!("fixture {fixture}: {a:?} vs {b:?}: {fast} vs {slow}"))?;

        let own = ari_from_labels(&a, &a).map_err(|e| e.to_string())?.ari;
        ensure(own == 1.0, || format!("fixture {fixture}: ari(X, X) = {own}"))?;
        let mut names: Vec<u32> = (0..ka).map(|l| l * 13 + 5).collect();
        names.shuffle(&mut rng);
        let renamed: Vec<u32> = a.iter().map(|&l| names[l as usize]).collect();
        let again = ari_from_labels(&renamed, &b).map_err(|e| e.to_string())?.ari;
        ensure(again == fast, || format!("fixture {fixture}: relabeling changed {fast} to {again}"))?;
    }
    Ok(format!("500 pairs, largest difference {worst:.1e}"))
}

// CPM optimum against exhaustive enumeration.

fn for_each_partition(n: usize, f: &mut impl FnMut(&[u32])) {
    fn grow(labels: &mut Vec<u32>, n: usize, max: u32, f: &mut impl FnMut(&[u32])) {
        if labels.len() == n {
            f(labels);
            return;
        }
        for l in 0..=max + 1 {
            labels.push(l);
            grow(labels, n, max.max(l), f);
            labels.pop();
        }
    }
    if n == 0 {
        return;
    }
    let mut labels = vec![0];
    grow(&mut labels, n, 0, f);
}

fn unit(n: usize, edges: &[(u32, u32)]) -> WeightedGraph {
    WeightedGraph::from_edges(n, edges.iter().map(|&(a, b)| (a, b, 1.0))).unwrap()
}

fn micro_suite() -> Vec<(String, WeightedGraph)> {
    let triangles = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)];
    let mut bridged = triangles.to_vec();
    bridged.push((2, 3));
    let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut two_k4: Vec<(u32, u32)> = k4.to_vec();
    two_k4.extend(k4.iter().map(|&(a, b)| (a + 4, b + 4)));
    two_k4.push((3, 4));
    let mut suite = vec![
        ("two triangles".to_string(), unit(6, &triangles)),
        ("bridged triangles".to_string(), unit(6, &bridged)),
        ("K4".to_string(), unit(4, &k4)),
        ("bridged K4 pair".to_string(), unit(8, &two_k4)),
        ("star".to_string(), unit(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)])),
        ("path".to_string(), unit(5, &[(0, 1), (1, 2), (2, 3), (3, 4)])),
        ("four-cycle".to_string(), unit(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])),
        ("isolated nodes".to_string(), WeightedGraph::empty(3)),
        (
            "weighted star".to_string(),
            WeightedGraph::from_edges(5, [(0, 1, 3.0), (0, 2, 0.2), (0, 3, 0.7), (0, 4, 1.4)]).unwrap(),
        ),
        (
            "heavy bridge".to_string(),
            WeightedGraph::from_edges(
                6,
                [(0, 1, 0.3), (1, 2, 0.3), (0, 2, 0.3), (3, 4, 0.3), (4, 5, 0.3), (3, 5, 0.3), (2, 3, 2.5)],
            )
            .unwrap(),
        ),
    ];
    let mut rng = seed::rng(33);
    for i in 0..8 {
        let n = rng.gen_range(5..=8);
        let mut edges = Vec::new();
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                if rng.gen_bool(0.45) {
                    edges.push((a, b, (rng.gen_range(0.1..2.0f64) * 100.0).round() / 100.0));
                }
            }
        }
        suite.push((format!("random graph {i}"), WeightedGraph::from_edges(n, edges).unwrap()));
    }
    suite
}

fn cpm_optimality() -> Outcome {
    let suite = micro_suite();
    let mut cases = 0;
    for (name, g) in &suite {
        for gamma in [0.1, 0.5, 2.0] {
            let mut best = f64::NEG_INFINITY;
            for_each_partition(g.node_count(), &mut |labels| {
                let q = cpm_quality(g, &Partition::from_labels(labels), gamma).unwrap();
                best = best.max(q);
            });
            let found = slm_cluster(g, &ClusterConfig::new(gamma)).map_err(|e| e.to_string())?;
            let q = cpm_quality(g, &found, gamma).map_err(|e| e.to_string())?;
            ensure(q >= best - 1e-9, || format!("{name} at {gamma}: SLM {q}, optimum {best}"))?;
            cases += 1;
        }
    }
    Ok(format!("{} graphs x 3 resolutions = {cases} cases at the optimum", suite.len()))
}

// Pipeline runs through the command-line binary.

fn citeclass(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_citeclass"))
        .args(args)
        .output()
        .map_err(|e| format!("cannot run citeclass: {e}"))?;
    if out.status.success() {
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    } else {
        Err(format!(
            "citeclass {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

/// Calibrated parameters for the default synthetic corpus.
const TOPIC_RESOLUTION: &str = "0.003";
const LADDER: [&str; 6] = ["--ladder-start", "5e-5", "--ladder-step", "3e-4", "--ladder-count", "6"];
const SYNTH_OVERLAP: &str = "30";

/// Runs synth, ingest, cluster-topics, baseline and sweep (and, when
/// `reports`, analyze, label and case-study) under `root`.
fn run_pipeline(root: &Path, seed: u64, reports: bool) -> Result<(PathBuf, PathBuf), String> {
    let data = root.join("data");
    let run = root.join("run");
    let s = seed.to_string();
    let (d, r) = (data.to_str().unwrap(), run.to_str().unwrap());
    let manifest = data.join("manifest.txt");
    let m = manifest.to_str().unwrap();
    citeclass(&["--seed", &s, "--out", d, "synth"])?;
    let stage = |args: &[&str]| {
        let mut all = vec!["--seed", &s, "--manifest", m, "--out", r];
        all.extend_from_slice(args);
        citeclass(&all)
    };
    stage(&["ingest"])?;
    stage(&["cluster-topics", "--resolution", TOPIC_RESOLUTION])?;
    stage(&["baseline", "--overlap-threshold", SYNTH_OVERLAP])?;
    let mut sweep = vec!["sweep"];
    sweep.extend_from_slice(&LADDER);
    stage(&sweep)?;
    if reports {
        stage(&["analyze"])?;
        stage(&["label"])?;
        stage(&["case-study", "--category", "Field 0", "--years", "2010"])?;
    }
    Ok((data, run))
}

fn planted_recovery() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (data, run) = run_pipeline(tmp.path(), 1, false)?;

    let report = fs::read_to_string(run.join("sweep_report.tsv")).map_err(|e| e.to_string())?;
    let rows: Vec<Vec<String>> = report
        .lines()
        .skip(1)
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect();
    ensure(rows.len() >= 6, || format!("only {} sweep runs", rows.len()))?;
    let selected = rows
        .iter()
        .position(|r| r[8] == "1")
        .ok_or("no selected row")?;
    ensure(selected != 0 && selected != rows.len() - 1, || {
        format!("best ARI at ladder endpoint {selected}: {report}")
    })?;

    let manifest = citeclass::corpus::IngestManifest::from_file(&data.join("manifest.txt")).map_err(|e| e.to_string())?;
    let (corpus, _) = load_corpus(&manifest).map_err(|e| e.to_string())?;
    let hier = read_hierarchy(&run.join("hierarchy.tsv"), &corpus).map_err(|e| e.to_string())?;
    let (_, truth) = read_ground_truth(&data.join("ground_truth.tsv"), &corpus).map_err(|e| e.to_string())?;
    let truth = derive_classification(&truth, hier.pubs()).map_err(|e| e.to_string())?;
    let ari = adjusted_rand_index(&hier.specialty_labeling(), &truth)
        .map_err(|e| e.to_string())?
        .ari;
    ensure(ari >= 0.9, || format!("specialty ARI against ground truth {ari:.4}"))?;
    Ok(format!(
        "selected run {} of {} at resolution {}, ground-truth ARI {ari:.4}",
        selected + 1,
        rows.len(),
        rows[selected][0]
    ))
}

fn artifact_files(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut files = BTreeMap::new();
    for e in fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = e.map_err(|e| e.to_string())?.path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        if name.ends_with(".tsv") || name.ends_with(".txt") {
            files.insert(name, fs::read(&path).map_err(|e| e.to_string())?);
        }
    }
    Ok(files)
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = run_pipeline(&tmp.path().join("first"), 7, true)?;
    let second = run_pipeline(&tmp.path().join("second"), 7, true)?;
    let mut compared = 0;
    for (a, b) in [(&first.0, &second.0), (&first.1, &second.1)] {
        let (fa, fb) = (artifact_files(a)?, artifact_files(b)?);
        ensure(fa.keys().eq(fb.keys()), || format!("different file sets {:?} / {:?}", fa.keys(), fb.keys()))?;
        for (name, bytes) in &fa {
            ensure(&fb[name] == bytes, || format!("{name} differs between runs"))?;
            compared += 1;
        }
    }
    ensure(compared >= 20, || format!("only {compared} artifacts compared"))?;
    Ok(format!("{compared} artifacts byte-identical across two runs"))
}

// Baseline filter chain on an engineered corpus.

fn engineered_baseline_corpus() -> (Corpus, Vec<u32>) {
    let mut b = CorpusBuilder::default();
    let mut n = 0usize;
    let mut add = |b: &mut CorpusBuilder, year, doc, journal: &str| {
        n += 1;
        let id = format!("q{n:04}");
        b.add_publication(&id, year, doc, Some(journal)).unwrap();
        id
    };

    // Cited pool outside every studied journal.
    let pool: Vec<String> = (0..120).map(|_| add(&mut b, 2005, DocType::Article, "POOL")).collect();

    // Window journals W1..W10 with (size, own references, pool references).
    let window: [(&str, usize, usize, Vec<usize>); 10] = [
        ("W01", 2, 0, (80..90).collect()),
        ("W02", 3, 2, (90..109).collect()),
        ("W03", 5, 1, (0..9).collect()),
        ("W04", 5, 5, (8..13).collect()),
        ("W05", 5, 5, (12..17).collect()),
        ("W06", 4, 5, (20..25).collect()),
        ("W07", 6, 5, (30..35).collect()),
        ("W08", 7, 5, (40..45).collect()),
        ("W09", 8, 5, (50..55).collect()),
        ("W10", 9, 5, std::iter::once(54).chain(60..74).collect()),
    ];
    let mut w07 = Vec::new();
    let mut w06 = Vec::new();
    for (name, size, own, refs) in &window {
        let old: Vec<String> = (0..*own).map(|_| add(&mut b, 2005, DocType::Article, name)).collect();
        let articles: Vec<String> = (0..*size).map(|_| add(&mut b, 2010, DocType::Article, name)).collect();
        for cited in old.iter().chain(refs.iter().map(|&r| &pool[r])) {
            b.add_citation(&articles[0], cited).unwrap();
        }
        if *name == "W06" {
            w06 = articles.clone();
        }
        if *name == "W07" {
            w07 = articles;
        }
    }
    // Below and above the size window.
    add(&mut b, 2010, DocType::Article, "S01");
    for (i, size) in (12..=21).enumerate() {
        let name = format!("L{i:02}");
        for _ in 0..size {
            add(&mut b, 2010, DocType::Article, &name);
        }
    }
    for _ in 0..7 {
        add(&mut b, 2010, DocType::Article, "MD");
    }
    // Non-articles never count.
    add(&mut b, 2010, DocType::Other, "W01");
    add(&mut b, 2010, DocType::Other, "ED");
    b.add_journal_category("MD", "Multidisciplinary Sciences").unwrap();
    b.add_journal_category("W01", "Field").unwrap();
    let corpus = b.finish().0;

    // Topic universe: everything except two W06 articles and all of W07.
    let dropped: Vec<u32> = w06[..2]
        .iter()
        .chain(&w07)
        .map(|id| corpus.pub_index(id).unwrap())
        .collect();
    let universe: Vec<u32> = (0..corpus.publication_count() as u32)
        .filter(|p| !dropped.contains(p))
        .collect();
    (corpus, universe)
}

fn baseline_audit() -> Outcome {
    let (corpus, universe) = engineered_baseline_corpus();
    let result = run_baseline(&corpus, &BaselineConfig::default(), &universe).map_err(|e| e.to_string())?;
    let got: Vec<(&str, usize, u64)> = result.ladder.iter().map(|s| (s.stage, s.journals, s.articles)).collect();
    let expected = vec![
        ("year_slice", 22, 227),
        ("category_exclusion", 21, 220),
        ("size_window", 10, 54),
        ("self_citation", 8, 49),
        ("overlap_grouping", 6, 39),
        ("topic_intersection", 5, 31),
    ];
    ensure(got == expected, || format!("ladder {got:?}, expected {expected:?}"))?;
    ensure(result.size_window == Some(SizeWindow { min: 2, max: 9 }), || {
        format!("size window {:?}", result.size_window)
    })?;
    let chained: Vec<Vec<&str>> = result
        .grouping
        .components
        .iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.iter().map(|&j| corpus.journal_id(j)).collect())
        .collect();
    ensure(chained == vec![vec!["W03", "W04", "W05"]], || format!("groups {chained:?}"))?;
    Ok("6 stages match; W03-W04-W05 chained transitively".into())
}

// Derived classification contract.

fn derived_contract() -> Outcome {
    let mut rng = seed::rng(44);
    for fixture in 0..100 {
        let items: Vec<u32> = (0..200).filter(|_| rng.gen_bool(0.4)).collect();
        if items.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=12);
        let labels: Vec<u32> = items.iter().map(|_| rng.gen_range(0..k)).collect();
        let acplc = Labeling::new(items.clone(), labels).map_err(|e| e.to_string())?;
        let p_prime: Vec<u32> = items.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let derived = derive_classification(&acplc, &p_prime).map_err(|e| e.to_string())?;
        ensure(derived.items() == &p_prime[..], || format!("fixture {fixture}: items differ from P'"))?;
        for (i, &x) in p_prime.iter().enumerate() {
            for &y in &p_prime[i + 1..] {
                let direct = acplc.label_of(x) == acplc.label_of(y);
                ensure((derived.label_of(x) == derived.label_of(y)) == direct, || {
                    format!("fixture {fixture}: co-membership of {x} and {y} changed")
                })?;
            }
        }
        if let Some(&missing) = (0..200u32).find(|p| !items.contains(p)).as_ref() {
            let mut outside = p_prime.clone();
            outside.push(missing);
            outside.sort_unstable();
            ensure(derive_classification(&acplc, &outside).is_err(), || {
                format!("fixture {fixture}: uncovered P' accepted")
            })?;
        }
    }
    Ok("100 fixtures partition P' with co-membership preserved".into())
}

// Analytics identities.

fn profile_by_hand(baseline: &[(u32, u32)], partition: &HashMap<u32, u32>) -> (usize, Vec<f64>) {
    let mut per_class: BTreeMap<u32, BTreeMap<u32, u64>> = BTreeMap::new();
    for &(item, class) in baseline {
        *per_class.entry(class).or_default().entry(partition[&item]).or_default() += 1;
    }
    let spreads: Vec<usize> = per_class.values().map(|m| m.len()).collect();
    let spread = ((spreads.iter().sum::<usize>() as f64 / spreads.len() as f64) + 0.5).floor() as usize;
    let chosen: Vec<Vec<u64>> = per_class
        .values()
        .filter(|m| m.len() == spread)
        .map(|m| {
            let mut v: Vec<u64> = m.values().copied().collect();
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
        .collect();
    let averages = (0..spread)
        .map(|r| chosen.iter().map(|v| v[r] as f64).sum::<f64>() / chosen.len() as f64)
        .collect();
    (spread, averages)
}

fn profile_fixture(counts: &[&[u64]]) -> (Vec<(u32, u32)>, HashMap<u32, u32>) {
    let mut baseline = Vec::new();
    let mut partition = HashMap::new();
    let mut item = 0;
    let mut next_class = 0;
    for (b, spread) in counts.iter().enumerate() {
        for &n in spread.iter() {
            for _ in 0..n {
                baseline.push((item, b as u32));
                partition.insert(item, next_class);
                item += 1;
            }
            next_class += 1;
        }
    }
    (baseline, partition)
}

fn analytics_identities() -> Outcome {
    let mut rng = seed::rng(55);
    for fixture in 0..50 {
        let sizes: Vec<u64> = (0..rng.gen_range(1..80)).map(|_| rng.gen_range(1..5000)).collect();
        let s = class_size_stats(&sizes, Weighting::ByArticle, 0).map_err(|e| e.to_string())?;
        let total: u64 = sizes.iter().sum();
        let squares: u64 = sizes.iter().map(|x| x * x).sum();
        ensure(s.mean == squares as f64 / total as f64, || {
            format!("fixture {fixture}: mean {} vs {}", s.mean, squares as f64 / total as f64)
        })?;
    }
    let m = class_size_stats(&[10, 30], Weighting::ByArticle, 0).map_err(|e| e.to_string())?;
    ensure(m.median == 30.0, || format!("weighted median of {{10, 30}} is {}", m.median))?;

    let fixtures: [&[&[u64]]; 3] = [
        &[&[5, 3, 2], &[4, 4, 1], &[6, 3, 1], &[2, 1]],
        &[&[5, 3, 2], &[4, 4, 1], &[10], &[6, 2]],
        &[&[7], &[3], &[12]],
    ];
    let expected: [(usize, Vec<f64>); 3] = [
        (3, vec![5.0, 10.0 / 3.0, 4.0 / 3.0]),
        (2, vec![6.0, 2.0]),
        (1, vec![22.0 / 3.0]),
    ];
    for (i, (counts, (spread, averages))) in fixtures.iter().zip(&expected).enumerate() {
        let (baseline, partition) = profile_fixture(counts);
        let by_hand = profile_by_hand(&baseline, &partition);
        ensure(by_hand == (*spread, averages.clone()), || format!("fixture {i}: hand computation {by_hand:?}"))?;
        let b = Labeling::from_pairs(baseline.clone()).map_err(|e| e.to_string())?;
        let p = Labeling::from_pairs(partition.iter().map(|(&k, &v)| (k, v)).collect()).map_err(|e| e.to_string())?;
        let profile = average_class_profile(&b, &p).map_err(|e| e.to_string())?;
        ensure(profile.spread == *spread, || format!("fixture {i}: spread {}", profile.spread))?;
        ensure(
            profile.rank_averages.len() == averages.len()
                && profile.rank_averages.iter().zip(averages).all(|(x, y)| (x - y).abs() < 1e-12),
            || format!("fixture {i}: rank averages {:?}", profile.rank_averages),
        )?;
    }

    let flows = vec![
        Flow::new("ClassA", 12.0, "Spec1"),
        Flow::new("ClassA", 0.0, "Spec2"),
        Flow::new("Journal class", 30.9, "Specialty rank 1"),
        Flow::new("Journal class", 1.2, "Specialty rank 2"),
    ];
    let text = export_alluvial(&flows);
    ensure(
        text == "ClassA [12] Spec1\nJournal class [31] Specialty rank 1\nJournal class [1] Specialty rank 2\n",
        || format!("export {text:?}"),
    )?;
    let parsed = parse_alluvial(&text).map_err(|e| e.to_string())?;
    ensure(export_alluvial(&parsed) == text, || "alluvial text does not round-trip".into())?;
    Ok("50 mean identities, weighted median 30, 3 profiles, alluvial round trip".into())
}

// Capacity.

fn peak_rss_mib() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib / 1024)
}

fn capacity() -> Outcome {
    let budget_mib: u64 = std::env::var("CITECLASS_MEMORY_BUDGET_MIB")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(4096);
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spec = ScaleSpec::default();
    let generated = Instant::now();
    let manifest = write_scale_corpus(&spec, tmp.path()).map_err(|e| e.to_string())?;
    let generation = generated.elapsed();

    let started = Instant::now();
    let (corpus, report) = load_corpus(&manifest).map_err(|e| e.to_string())?;
    let network = build_citation_network(&filter_articles(&corpus));
    let elapsed = started.elapsed();
    ensure(report.publications == spec.nodes, || format!("{} publications loaded", report.publications))?;
    ensure(network.graph.node_count() == spec.nodes, || "network misses nodes".into())?;
    ensure(elapsed < Duration::from_secs(600), || format!("ingestion took {elapsed:?}"))?;
    let peak = peak_rss_mib().ok_or("cannot read peak memory")?;
    ensure(peak <= budget_mib, || format!("peak memory {peak} MiB exceeds the {budget_mib} MiB budget"))?;
    Ok(format!(
        "{} nodes, {} edges from {} citations in {:.1}s (generation {:.1}s), peak {peak} MiB of {budget_mib} MiB",
        network.graph.node_count(),
        network.graph.edge_count(),
        report.citations,
        elapsed.as_secs_f64(),
        generation.as_secs_f64()
    ))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    check: fn() -> Outcome,
}

fn main() {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria = [
        Criterion { name: "formula exactness", limit: Duration::from_secs(1), check: formula_exactness },
        Criterion { name: "ARI oracle", limit: Duration::from_secs(5), check: ari_oracle },
        Criterion { name: "CPM optimality", limit: Duration::from_secs(30), check: cpm_optimality },
        Criterion { name: "planted hierarchy recovery", limit: Duration::from_secs(120), check: planted_recovery },
        Criterion { name: "baseline audit ladder", limit: Duration::from_secs(60), check: baseline_audit },
        Criterion { name: "derived classification", limit: Duration::from_secs(60), check: derived_contract },
        Criterion { name: "analytics identities", limit: Duration::from_secs(60), check: analytics_identities },
        Criterion { name: "determinism", limit: Duration::from_secs(240), check: determinism },
        Criterion { name: "capacity", limit: Duration::from_secs(600), check: capacity },
    ];
    let mut failed = 0;
    let mut ran = 0;
    for c in criteria
        .iter()
        .filter(|c| filters.is_empty() || filters.iter().any(|f| c.name.contains(f.as_str())))
    {
        ran += 1;
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => Err(format!("{detail}; took longer than {:?}", c.limit)),
            other => other,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status}  {:<28} {:>8.2}s  {detail}", c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
