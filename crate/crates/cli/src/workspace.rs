//! The output directory: lock, atomic stage outputs, stage records and the
//! run log.
//!
//! Every stage leaves `<stage>.stage.json` next to its outputs:
//!
//! ```text
//! {"stage": "sweep", "params": {...},
//!  "inputs": {"topics.tsv": "<sha256>", ...},
//!  "corpus": {"<path>": "<sha256>", ...},
//!  "outputs": {"sweep_report.tsv": "<sha256>", ...}}
//! ```
//!
//! `inputs` and `outputs` name files inside the output directory; `corpus`
//! holds the corpus tables by path. A consumer re-hashes each upstream file
//! against its producer's record before reading it.

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use citeclass::corpus::{load_corpus, Corpus, IngestManifest};
use log::{debug, warn};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const RUN_LOG: &str = "run_log.jsonl";
const LOCK: &str = ".lock";

pub fn sha256_file(path: &Path) -> io::Result<String> {
    let mut hasher = Sha256::new();
    let mut f = File::open(path)?;
    io::copy(&mut f, &mut hasher)?;
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

fn write_failure(path: &Path, e: io::Error) -> CliError {
    CliError::Internal(format!("cannot write {}: {e}", path.display()))
}

/// Exclusive claim on an output directory, released on drop.
#[derive(Debug)]
struct Lock {
    path: PathBuf,
}

impl Lock {
    fn acquire(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(LOCK);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Self { path })
            }
            Err(e) if e.kind() == io::ErrorKind::AlreadyExists => Err(CliError::Data(format!(
                "{} is locked by another run ({}); remove the file if that run is no longer active",
                dir.display(),
                path.display()
            ))),
            Err(e) => Err(write_failure(&path, e)),
        }
    }
}

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

/// A locked output directory.
#[derive(Debug)]
pub struct Workspace {
    dir: PathBuf,
    force: bool,
    _lock: Lock,
}

impl Workspace {
    pub fn open(dir: &Path, force: bool) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| write_failure(dir, e))?;
        let lock = Lock::acquire(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            force,
            _lock: lock,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn record_path(&self, stage: &str) -> PathBuf {
        self.path(&format!("{stage}.stage.json"))
    }

    pub fn read_record(&self, stage: &str) -> Result<Option<Value>, CliError> {
        let path = self.record_path(stage);
        match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text)
                .map(Some)
                .map_err(|e| CliError::Data(format!("{}: unreadable stage record: {e}", path.display()))),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(CliError::Data(format!("{}: {e}", path.display()))),
        }
    }

    pub fn begin(&self, stage: &'static str) -> StageRun<'_> {
        StageRun {
            ws: self,
            stage,
            inputs: BTreeMap::new(),
            corpus: BTreeMap::new(),
            hashes: HashMap::new(),
            pending: Vec::new(),
            started: Instant::now(),
        }
    }
}

struct Pending {
    temp: PathBuf,
    target: PathBuf,
    /// Key in the record's outputs, `None` for files outside the directory.
    name: Option<String>,
}

/// One stage invocation. Outputs go to temporary files and only replace
/// their targets in [`StageRun::commit`]; dropping the run without
/// committing removes them.
pub struct StageRun<'w> {
    ws: &'w Workspace,
    stage: &'static str,
    inputs: BTreeMap<String, String>,
    corpus: BTreeMap<String, String>,
    hashes: HashMap<PathBuf, String>,
    pending: Vec<Pending>,
    started: Instant,
}

/// What a committed stage wrote.
#[derive(Debug, Clone)]
pub struct StageSummary {
    pub stage: &'static str,
    pub outputs: Vec<String>,
    pub elapsed_ms: u128,
}

impl<'w> StageRun<'w> {
    fn hash(&mut self, path: &Path) -> Result<String, CliError> {
        if let Some(h) = self.hashes.get(path) {
            return Ok(h.clone());
        }
        let h = sha256_file(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        self.hashes.insert(path.to_path_buf(), h.clone());
        Ok(h)
    }

    fn mismatch(&self, message: String) -> Result<(), CliError> {
        if self.ws.force {
            warn!("{message} (continuing because of --force)");
            Ok(())
        } else {
            Err(CliError::Data(format!("{message}; pass --force to use it anyway")))
        }
    }

    /// Checks that every file a record was computed from is unchanged.
    fn check_sources(&mut self, producer: &str, record: &Value) -> Result<(), CliError> {
        let mut sources: Vec<(PathBuf, String, String)> = Vec::new();
        for (section, in_dir) in [("inputs", true), ("corpus", false)] {
            for (name, h) in record[section].as_object().into_iter().flatten() {
                let path = if in_dir { self.ws.path(name) } else { PathBuf::from(name) };
                sources.push((path, name.clone(), h.as_str().unwrap_or_default().to_string()));
            }
        }
        for (path, name, recorded) in sources {
            if !path.exists() {
                continue;
            }
            if self.hash(&path)? != recorded {
                self.mismatch(format!(
                    "`{producer}` outputs were computed from an earlier {name}; rerun `citeclass {producer}`"
                ))?;
            }
        }
        Ok(())
    }

    /// An artifact of an earlier stage, checked against that stage's record.
    pub fn upstream(&mut self, producer: &str, name: &str) -> Result<PathBuf, CliError> {
        let path = self.ws.path(name);
        if !path.exists() {
            return Err(CliError::Data(format!(
                "missing prerequisite {}; run `citeclass {producer}` first",
                path.display()
            )));
        }
        let record = self.ws.read_record(producer)?.ok_or_else(|| {
            CliError::Data(format!(
                "{} has no `{producer}` stage record; rerun `citeclass {producer}`",
                path.display()
            ))
        })?;
        let hash = self.hash(&path)?;
        match record["outputs"][name].as_str() {
            Some(recorded) if recorded == hash => {}
            _ => self.mismatch(format!(
                "{} differs from the file `{producer}` wrote; rerun `citeclass {producer}`",
                path.display()
            ))?,
        }
        self.check_sources(producer, &record)?;
        debug!("{}: verified {name}", self.stage);
        self.inputs.insert(name.to_string(), hash);
        Ok(path)
    }

    /// Like [`StageRun::upstream`], but `None` when the artifact was never made.
    pub fn optional_upstream(&mut self, producer: &str, name: &str) -> Result<Option<PathBuf>, CliError> {
        if self.ws.path(name).exists() {
            self.upstream(producer, name).map(Some)
        } else {
            Ok(None)
        }
    }

    fn hash_corpus(&mut self, manifest: &IngestManifest) -> Result<(), CliError> {
        for p in manifest.input_paths() {
            if !p.exists() {
                return Err(CliError::Data(format!("corpus table {} does not exist", p.display())));
            }
            let h = self.hash(p)?;
            self.corpus.insert(p.display().to_string(), h);
        }
        Ok(())
    }

    /// Loads the corpus for the ingest stage itself.
    pub fn ingest_corpus(
        &mut self,
        manifest: &IngestManifest,
    ) -> Result<(Corpus, citeclass::corpus::LoadReport), CliError> {
        self.hash_corpus(manifest)?;
        Ok(load_corpus(manifest)?)
    }

    /// Loads the corpus after checking it is the one `ingest` validated.
    pub fn corpus(&mut self, manifest: &IngestManifest) -> Result<Corpus, CliError> {
        self.hash_corpus(manifest)?;
        let record = self.ws.read_record("ingest")?.ok_or_else(|| {
            CliError::Data(format!(
                "{} has no ingest record; run `citeclass ingest` first",
                self.ws.dir.display()
            ))
        })?;
        let current = self.corpus.clone();
        for (path, hash) in &current {
            if record["corpus"][path].as_str() != Some(hash.as_str()) {
                self.mismatch(format!("corpus table {path} changed since ingest; rerun `citeclass ingest`"))?;
            }
        }
        Ok(load_corpus(manifest)?.0)
    }

    /// Writes an output inside the directory.
    pub fn write<F>(&mut self, name: &str, fill: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
    {
        let target = self.ws.path(name);
        self.write_file(target, Some(name.to_string()), fill)
    }

    /// Writes an output at an arbitrary path, such as the manifest's node map.
    pub fn write_external<F>(&mut self, target: &Path, fill: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
    {
        if let Some(parent) = target.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|e| write_failure(parent, e))?;
        }
        self.write_file(target.to_path_buf(), None, fill)
    }

    fn write_file<F>(&mut self, target: PathBuf, name: Option<String>, fill: F) -> Result<(), CliError>
    where
        F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
    {
        let file_name = target
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let temp = target.with_file_name(format!(".{file_name}.tmp.{}", std::process::id()));
        // Registered before writing so a failure still cleans up.
        self.pending.push(Pending {
            temp: temp.clone(),
            target: target.clone(),
            name,
        });
        let file = File::create(&temp).map_err(|e| write_failure(&temp, e))?;
        let mut w = BufWriter::new(file);
        fill(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| write_failure(&target, e))?;
        Ok(())
    }

    /// Takes over a finished file, written elsewhere in the directory, as
    /// the output `name`.
    pub fn adopt(&mut self, staged: &Path, name: &str) {
        self.pending.push(Pending {
            temp: staged.to_path_buf(),
            target: self.ws.path(name),
            name: Some(name.to_string()),
        });
    }

    /// Moves every output into place, then writes the stage record and
    /// appends to the run log.
    pub fn commit(mut self, params: Value) -> Result<StageSummary, CliError> {
        let mut outputs = Map::new();
        let mut external = Map::new();
        for p in &self.pending {
            let h = sha256_file(&p.temp).map_err(|e| write_failure(&p.temp, e))?;
            match &p.name {
                Some(name) => outputs.insert(name.clone(), Value::String(h)),
                None => external.insert(p.target.display().to_string(), Value::String(h)),
            };
        }
        let mut record = json!({
            "stage": self.stage,
            "params": params,
            "inputs": self.inputs,
            "corpus": self.corpus,
            "outputs": outputs,
        });
        if !external.is_empty() {
            record["external_outputs"] = Value::Object(external);
        }

        let pending = std::mem::take(&mut self.pending);
        let mut written = Vec::new();
        for p in &pending {
            fs::rename(&p.temp, &p.target).map_err(|e| write_failure(&p.target, e))?;
            written.push(p.target.display().to_string());
        }
        let record_path = self.ws.record_path(self.stage);
        let record_text = serde_json::to_string_pretty(&record).expect("JSON values serialize") + "\n";
        let temp = record_path.with_extension("json.tmp");
        fs::write(&temp, record_text)
            .and_then(|_| fs::rename(&temp, &record_path))
            .map_err(|e| write_failure(&record_path, e))?;

        let elapsed_ms = self.started.elapsed().as_millis();
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut entry = record;
        entry["elapsed_ms"] = json!(elapsed_ms as u64);
        entry["timestamp"] = json!(timestamp);
        let log_path = self.ws.path(RUN_LOG);
        OpenOptions::new()
            .create(true)
            .append(true)
            .open(&log_path)
            .and_then(|mut f| writeln!(f, "{entry}"))
            .map_err(|e| write_failure(&log_path, e))?;

        Ok(StageSummary {
            stage: self.stage,
            outputs: written,
            elapsed_ms,
        })
    }
}

impl Drop for StageRun<'_> {
    fn drop(&mut self) {
        for p in &self.pending {
            let _ = fs::remove_file(&p.temp);
        }
    }
}
