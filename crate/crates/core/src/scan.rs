//! Resumable search for integer roots over coprime pairs `(p, q)`.
//!
//! Work is split by `q`. Each batch of `q` values is processed in parallel,
//! then written in `(q, p)` order, so the output does not depend on the
//! number of workers. After every batch a checkpoint records the last pair
//! written and the output length, which lets an interrupted run continue
//! and produce the same bytes as a run that was never stopped.

use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cuboid::{attempt, Cuboid, Triple};
use crate::region::{classify, covering_theorems, RegionClass};
use crate::roots::{integer_roots, UniPoly};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("checkpoint belongs to a different configuration (expected {expected}, found {found})")]
    DigestMismatch { expected: String, found: String },
    #[error("corrupted checkpoint: {0}")]
    CorruptCheckpoint(String),
    #[error("unsupported checkpoint version {0}")]
    Version(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionFilter {
    /// `1 <= p <= 59q`.
    All,
    /// Strip and remaining cone.
    Linear,
    /// The strip next to the bisector only.
    Subregion,
    /// The cone without the strip.
    Remaining,
}

impl RegionFilter {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionFilter::All => "all",
            RegionFilter::Linear => "linear",
            RegionFilter::Subregion => "subregion",
            RegionFilter::Remaining => "remaining",
        }
    }

    pub fn accepts(self, class: RegionClass) -> bool {
        match self {
            RegionFilter::All => true,
            RegionFilter::Linear => matches!(
                class,
                RegionClass::ExcludedSubregion | RegionClass::RemainingLinear
            ),
            RegionFilter::Subregion => class == RegionClass::ExcludedSubregion,
            RegionFilter::Remaining => class == RegionClass::RemainingLinear,
        }
    }

    /// Candidate `p` values for a given `q`, before coprimality and class
    /// filtering.
    pub fn p_range(self, q: u64) -> std::ops::RangeInclusive<u64> {
        match self {
            RegionFilter::Subregion => (96 * q).div_ceil(97).max(1)..=98 * q / 97,
            _ => 1..=59 * q,
        }
    }
}

impl FromStr for RegionFilter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(RegionFilter::All),
            "linear" => Ok(RegionFilter::Linear),
            "subregion" => Ok(RegionFilter::Subregion),
            "remaining" => Ok(RegionFilter::Remaining),
            _ => Err(format!("unknown region filter {s:?}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub q_min: u64,
    pub q_max: u64,
    pub region: RegionFilter,
    pub jobs: usize,
    pub seed: u64,
    pub bits: u32,
    /// Adds `elapsed_ns` to every record, which makes output
    /// nondeterministic.
    pub timing: bool,
    pub out_path: Option<PathBuf>,
    pub checkpoint_path: Option<PathBuf>,
    /// Stop cleanly once this `q` is written, as if interrupted.
    pub stop_after_q: Option<u64>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            q_min: 1,
            q_max: 50,
            region: RegionFilter::Linear,
            jobs: 1,
            seed: 0,
            bits: crate::roots::DEFAULT_BITS,
            timing: false,
            out_path: None,
            checkpoint_path: None,
            stop_after_q: None,
        }
    }
}

#[derive(Serialize)]
struct DigestInput<'a> {
    version: u32,
    q_min: u64,
    q_max: u64,
    region: &'a str,
    seed: u64,
    bits: u32,
    timing: bool,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), ScanError> {
        if self.q_min == 0 {
            return Err(ScanError::Config("q_min must be at least 1".into()));
        }
        if self.q_min > self.q_max {
            return Err(ScanError::Config("q_min exceeds q_max".into()));
        }
        if self.jobs == 0 {
            return Err(ScanError::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// Hex SHA-256 of the settings that determine the output. Worker count
    /// and paths are left out.
    pub fn digest(&self) -> String {
        let input = DigestInput {
            version: CHECKPOINT_VERSION,
            q_min: self.q_min,
            q_max: self.q_max,
            region: self.region.as_str(),
            seed: self.seed,
            bits: self.bits,
            timing: self.timing,
        };
        let bytes = serde_json::to_vec(&input).expect("plain struct");
        Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRecord {
    pub p: u64,
    pub q: u64,
    pub region: RegionClass,
    #[serde(serialize_with = "ser_bigints")]
    pub integer_roots: Vec<BigInt>,
    /// Some positive integer root meets every premise of the construction.
    pub conditions_met: bool,
    pub cuboid_hit: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cuboid: Option<Cuboid>,
    pub theorems_cover: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ns: Option<u64>,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub fn scan_pair(p: u64, q: u64, timing: bool) -> ScanRecord {
    let start = timing.then(Instant::now);
    let (bp, bq) = (BigInt::from(p), BigInt::from(q));
    let region = classify(&bp, &bq);
    let roots = integer_roots(&UniPoly::qpq(&bp, &bq)).expect("Q_pq is monic");
    let mut conditions_met = false;
    let mut cuboid = None;
    for t in roots.iter().filter(|t| t.is_positive()) {
        let a = attempt(&Triple::new(bp.clone(), bq.clone(), t.clone())).expect("positive triple");
        if a.conditions.all() {
            conditions_met = true;
            if cuboid.is_none() {
                cuboid = a.variants.into_iter().find_map(|v| v.cuboid).map(|s| s.cuboid);
            }
        }
    }
    ScanRecord {
        p,
        q,
        region,
        integer_roots: roots,
        conditions_met,
        cuboid_hit: cuboid.is_some(),
        cuboid,
        theorems_cover: covering_theorems(&bp, &bq).iter().map(|t| t.label()).collect(),
        elapsed_ns: start.map(|s| s.elapsed().as_nanos() as u64),
    }
}

/// All records for one `q`, ascending in `p`.
pub fn records_for_q(q: u64, region: RegionFilter, timing: bool) -> Vec<ScanRecord> {
    region
        .p_range(q)
        .filter(|&p| p != q && p.gcd(&q) == 1)
        .filter(|&p| region.accepts(classify(&BigInt::from(p), &BigInt::from(q))))
        .map(|p| scan_pair(p, q, timing))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cursor {
    pub q: u64,
    /// Last `p` written for this `q`, 0 if there was none.
    pub p: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub config_digest: String,
    pub completed_through: Cursor,
    pub out_bytes: u64,
    pub records: u64,
    pub integer_root_pairs: u64,
    pub hits: u64,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self, ScanError> {
        let text = fs::read_to_string(path)?;
        let c: Checkpoint =
            serde_json::from_str(&text).map_err(|e| ScanError::CorruptCheckpoint(e.to_string()))?;
        if c.version != CHECKPOINT_VERSION {
            return Err(ScanError::Version(c.version));
        }
        Ok(c)
    }

    /// Writes to a sibling file and renames it over `path`.
    pub fn store(&self, path: &Path) -> Result<(), ScanError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        {
            let mut f = File::create(&tmp)?;
            serde_json::to_writer_pretty(&mut f, self)?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanSummary {
    pub records: u64,
    pub integer_root_pairs: u64,
    pub hits: u64,
    pub completed_through: Option<Cursor>,
    /// The run reached `q_max`.
    pub finished: bool,
}

struct Progress {
    cursor: Option<Cursor>,
    bytes: u64,
    records: u64,
    integer_root_pairs: u64,
    hits: u64,
}

fn run_from<W: Write>(
    cfg: &ScanConfig,
    first_q: u64,
    out: &mut W,
    mut progress: Progress,
    mut on_batch: impl FnMut(&Progress) -> Result<(), ScanError>,
) -> Result<ScanSummary, ScanError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| ScanError::Config(e.to_string()))?;
    let last_q = cfg.stop_after_q.map_or(cfg.q_max, |s| s.min(cfg.q_max));
    let batch = (cfg.jobs * 8) as u64;
    let mut q = first_q;
    while q <= last_q {
        let end = (q + batch - 1).min(last_q);
        let qs: Vec<u64> = (q..=end).collect();
        let results: Vec<Vec<ScanRecord>> = pool.install(|| {
            qs.par_iter()
                .map(|&q| records_for_q(q, cfg.region, cfg.timing))
                .collect()
        });
        for (&qv, recs) in qs.iter().zip(&results) {
            for r in recs {
                let mut line = serde_json::to_vec(r)?;
                line.push(b'\n');
                out.write_all(&line)?;
                progress.bytes += line.len() as u64;
                progress.records += 1;
                progress.integer_root_pairs += u64::from(!r.integer_roots.is_empty());
                progress.hits += u64::from(r.cuboid_hit);
            }
            progress.cursor = Some(Cursor {
                q: qv,
                p: recs.last().map_or(0, |r| r.p),
            });
        }
        out.flush()?;
        on_batch(&progress)?;
        q = end + 1;
    }
    Ok(ScanSummary {
        records: progress.records,
        integer_root_pairs: progress.integer_root_pairs,
        hits: progress.hits,
        completed_through: progress.cursor,
        finished: progress.cursor.is_some_and(|c| c.q >= cfg.q_max),
    })
}

fn checkpoint_of(cfg: &ScanConfig, p: &Progress) -> Checkpoint {
    Checkpoint {
        version: CHECKPOINT_VERSION,
        config_digest: cfg.digest(),
        completed_through: p.cursor.unwrap_or(Cursor {
            q: cfg.q_min - 1,
            p: 0,
        }),
        out_bytes: p.bytes,
        records: p.records,
        integer_root_pairs: p.integer_root_pairs,
        hits: p.hits,
    }
}

/// Runs the scan into any writer, without checkpoints.
pub fn scan_to_writer<W: Write>(cfg: &ScanConfig, out: &mut W) -> Result<ScanSummary, ScanError> {
    cfg.validate()?;
    let progress = Progress {
        cursor: None,
        bytes: 0,
        records: 0,
        integer_root_pairs: 0,
        hits: 0,
    };
    run_from(cfg, cfg.q_min, out, progress, |_| Ok(()))
}

/// Fresh run. Output goes to `out_path` (truncated) or standard output;
/// a checkpoint is kept when `checkpoint_path` is set.
pub fn run(cfg: &ScanConfig) -> Result<ScanSummary, ScanError> {
    cfg.validate()?;
    let Some(out_path) = &cfg.out_path else {
        if cfg.checkpoint_path.is_some() {
            return Err(ScanError::Config("a checkpoint needs an output file".into()));
        }
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        return scan_to_writer(cfg, &mut lock);
    };
    let mut out = BufWriter::new(File::create(out_path)?);
    let progress = Progress {
        cursor: None,
        bytes: 0,
        records: 0,
        integer_root_pairs: 0,
        hits: 0,
    };
    let ck = cfg.checkpoint_path.clone();
    if let Some(path) = &ck {
        checkpoint_of(cfg, &progress).store(path)?;
    }
    run_from(cfg, cfg.q_min, &mut out, progress, |p| match &ck {
        Some(path) => checkpoint_of(cfg, p).store(path),
        None => Ok(()),
    })
}

/// Continues the run recorded in `checkpoint_path`. The output file is cut
/// back to the checkpointed length before new records are appended.
pub fn resume(cfg: &ScanConfig) -> Result<ScanSummary, ScanError> {
    cfg.validate()?;
    let (Some(out_path), Some(ck_path)) = (&cfg.out_path, &cfg.checkpoint_path) else {
        return Err(ScanError::Config(
            "resume needs both an output file and a checkpoint".into(),
        ));
    };
    let ck = Checkpoint::load(ck_path)?;
    let expected = cfg.digest();
    if ck.config_digest != expected {
        return Err(ScanError::DigestMismatch {
            expected,
            found: ck.config_digest,
        });
    }
    let mut file = OpenOptions::new().read(true).write(true).open(out_path)?;
    let len = file.metadata()?.len();
    if len < ck.out_bytes {
        return Err(ScanError::CorruptCheckpoint(format!(
            "output has {len} bytes, checkpoint expects {}",
            ck.out_bytes
        )));
    }
    file.set_len(ck.out_bytes)?;
    file.seek(SeekFrom::End(0))?;
    let started = ck.completed_through.q >= cfg.q_min;
    let progress = Progress {
        cursor: started.then_some(ck.completed_through),
        bytes: ck.out_bytes,
        records: ck.records,
        integer_root_pairs: ck.integer_root_pairs,
        hits: ck.hits,
    };
    let first_q = ck.completed_through.q.max(cfg.q_min - 1) + 1;
    if first_q > cfg.q_max {
        return Ok(ScanSummary {
            records: ck.records,
            integer_root_pairs: ck.integer_root_pairs,
            hits: ck.hits,
            completed_through: progress.cursor,
            finished: true,
        });
    }
    let mut out = BufWriter::new(file);
    run_from(cfg, first_q, &mut out, progress, |p| {
        checkpoint_of(cfg, p).store(ck_path)
    })
}
