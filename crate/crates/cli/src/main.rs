use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use cuboidchar::charpoly::{transform_q, TransitionMatrix};
use cuboidchar::cuboid::{attempt, Triple};
use cuboidchar::exactpoly::to_text;
use cuboidchar::expansion::{derive_complex_remainder, derive_real_remainder};
use cuboidchar::region::{classify, covering_theorems, to_bisector};
use cuboidchar::roots::{complex_roots, integer_roots, UniPoly, DEFAULT_BITS};
use cuboidchar::scan::{self, RegionFilter, ScanConfig};
use cuboidchar::verify::{run_suite, Suite, VerifyParams};

/// Exit status for a negative margin or a cuboid hit.
const FLAGGED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "cuboidchar",
    version,
    about = "Cuboid characteristic polynomial toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search coprime pairs for integer roots and cuboids.
    Scan(ScanArgs),
    /// Run a verification suite: sites, bounds, rouche or theorems.
    Verify(VerifyArgs),
    /// Certified complex roots of Q_pq, or of the bisector polynomial.
    Roots(RootsArgs),
    /// Region class of a pair and the theorems that cover it.
    Region(PairArgs),
    /// Conditions and both constructions for one triple.
    Cuboid(CuboidArgs),
    /// Write the bisector polynomial and both remainder equations to files.
    Derive(DeriveArgs),
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, env = "CUBOIDCHAR_Q_MIN", default_value_t = 1)]
    q_min: u64,
    #[arg(long, env = "CUBOIDCHAR_Q_MAX", default_value_t = 50)]
    q_max: u64,
    /// all, linear, subregion or remaining.
    #[arg(long, env = "CUBOIDCHAR_REGION", default_value = "linear")]
    region: RegionFilter,
    #[arg(long, env = "CUBOIDCHAR_JOBS", default_value_t = 1)]
    jobs: usize,
    #[arg(long, env = "CUBOIDCHAR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "CUBOIDCHAR_BITS", default_value_t = DEFAULT_BITS)]
    bits: u32,
    /// JSONL output file; standard output if omitted.
    #[arg(long, env = "CUBOIDCHAR_OUT")]
    out: Option<PathBuf>,
    #[arg(long, env = "CUBOIDCHAR_CHECKPOINT")]
    checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint instead of starting over.
    #[arg(long)]
    resume: bool,
    /// Record per-pair wall time as `elapsed_ns`.
    #[arg(long, env = "CUBOIDCHAR_TIMING")]
    timing: bool,
    /// Stop after this q, leaving a checkpoint behind.
    #[arg(long, hide = true)]
    stop_after_q: Option<u64>,
    /// Also write the records as CSV to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    #[arg(long, env = "CUBOIDCHAR_SAMPLES")]
    samples: Option<usize>,
    #[arg(long, env = "CUBOIDCHAR_SEED")]
    seed: Option<u64>,
    #[arg(long, env = "CUBOIDCHAR_BITS", default_value_t = DEFAULT_BITS)]
    bits: u32,
    #[arg(long, env = "CUBOIDCHAR_Q_MAX", default_value_t = 2000)]
    q_max: u64,
    #[arg(long, env = "CUBOIDCHAR_JOBS", default_value_t = 1)]
    jobs: usize,
    /// Values of pt for the bounds suite.
    #[arg(long = "p-tilde", value_delimiter = ',', allow_hyphen_values = true)]
    p_tilde: Vec<i64>,
    #[arg(long, env = "CUBOIDCHAR_OUT")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    p: BigInt,
    #[arg(long)]
    q: BigInt,
}

#[derive(Args)]
struct RootsArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: BigInt,
    #[arg(long)]
    q: BigInt,
    /// Read p and q as bisector coordinates pt and qt.
    #[arg(long)]
    bisector: bool,
    #[arg(long, env = "CUBOIDCHAR_BITS", default_value_t = DEFAULT_BITS)]
    bits: u32,
    /// Decimal digits printed for each coordinate.
    #[arg(long, default_value_t = 30)]
    digits: usize,
}

#[derive(Args)]
struct CuboidArgs {
    #[arg(long)]
    p: BigInt,
    #[arg(long)]
    q: BigInt,
    #[arg(long)]
    t: BigInt,
}

#[derive(Args)]
struct DeriveArgs {
    /// Directory for bisector_q.txt, f.txt and phi.txt.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Scan(a) => cmd_scan(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Roots(a) => cmd_roots(a),
        Command::Region(a) => cmd_region(a),
        Command::Cuboid(a) => cmd_cuboid(a),
        Command::Derive(a) => cmd_derive(a),
    }
}

fn cmd_scan(a: ScanArgs) -> Result<u8> {
    let cfg = ScanConfig {
        q_min: a.q_min,
        q_max: a.q_max,
        region: a.region,
        jobs: a.jobs,
        seed: a.seed,
        bits: a.bits,
        timing: a.timing,
        out_path: a.out.clone(),
        checkpoint_path: a.checkpoint,
        stop_after_q: a.stop_after_q,
    };
    let summary = if a.resume {
        scan::resume(&cfg)?
    } else {
        scan::run(&cfg)?
    };
    if let Some(csv) = a.csv {
        let src = a.out.context("--csv needs --out")?;
        write_csv(&src, &csv)?;
    }
    eprintln!("{}", serde_json::to_string(&summary)?);
    Ok(if summary.hits > 0 { FLAGGED } else { 0 })
}

fn write_csv(jsonl: &PathBuf, csv: &PathBuf) -> Result<()> {
    let text = fs::read_to_string(jsonl)?;
    let mut out = io::BufWriter::new(fs::File::create(csv)?);
    writeln!(
        out,
        "p,q,region,integer_roots,conditions_met,cuboid_hit,theorems_cover"
    )?;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line)?;
        let join = |k: &str| {
            v[k].as_array()
                .map(|a| a.iter().filter_map(|x| x.as_str()).collect::<Vec<_>>().join(" "))
                .unwrap_or_default()
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            v["p"],
            v["q"],
            v["region"].as_str().unwrap_or_default(),
            join("integer_roots"),
            v["conditions_met"],
            v["cuboid_hit"],
            join("theorems_cover"),
        )?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let defaults = VerifyParams::default();
    let samples = a.samples.unwrap_or(match a.suite {
        Suite::Sites => defaults.samples,
        _ => cuboidchar::expansion::DEFAULT_SAMPLES,
    });
    let params = VerifyParams {
        samples,
        seed: a.seed.unwrap_or(defaults.seed),
        bits: a.bits,
        q_max: a.q_max,
        jobs: a.jobs,
        p_tildes: if a.p_tilde.is_empty() {
            defaults.p_tildes
        } else {
            a.p_tilde
        },
    };
    if params.p_tildes.contains(&0) {
        bail!("pt must be nonzero");
    }
    let lines = run_suite(a.suite, &params)?;
    let mut sink: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    };
    for l in &lines {
        writeln!(sink, "{}", serde_json::to_string(&l.json)?)?;
    }
    sink.flush()?;
    let failed = lines.iter().filter(|l| !l.pass).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", lines.len());
        return Ok(FLAGGED);
    }
    Ok(0)
}

fn cmd_roots(a: RootsArgs) -> Result<u8> {
    let f = if a.bisector {
        UniPoly::bisector(&a.p, &a.q)
    } else {
        if a.p <= BigInt::from(0) || a.q <= BigInt::from(0) {
            bail!("p and q must be positive");
        }
        UniPoly::qpq(&a.p, &a.q)
    };
    let mut out = io::stdout().lock();
    for (k, r) in complex_roots(&f, a.bits)?.iter().enumerate() {
        let line = json!({
            "index": k,
            "re": r.center.re.to_decimal(a.digits),
            "im": r.center.im.to_decimal(a.digits),
            "radius": r.radius.to_f64(),
            "kind": r.kind.as_str(),
            "multiplicity": r.multiplicity,
        });
        writeln!(out, "{line}")?;
    }
    let ints: Vec<String> = integer_roots(&f)?.iter().map(ToString::to_string).collect();
    writeln!(out, "{}", json!({ "integer_roots": ints }))?;
    Ok(0)
}

fn cmd_region(a: PairArgs) -> Result<u8> {
    if a.p <= BigInt::from(0) || a.q <= BigInt::from(0) {
        bail!("p and q must be positive");
    }
    let (pt, qt) = to_bisector(&a.p, &a.q);
    let theorems: Vec<&str> = covering_theorems(&a.p, &a.q).iter().map(|t| t.label()).collect();
    let line = json!({
        "p": a.p.to_string(),
        "q": a.q.to_string(),
        "region": classify(&a.p, &a.q).as_str(),
        "p_tilde": pt.to_string(),
        "q_tilde": qt.to_string(),
        "theorems_cover": theorems,
    });
    println!("{line}");
    Ok(0)
}

fn cmd_cuboid(a: CuboidArgs) -> Result<u8> {
    let at = attempt(&Triple::new(a.p, a.q, a.t))?;
    println!("{}", serde_json::to_string_pretty(&at)?);
    Ok(if at.hit() { FLAGGED } else { 0 })
}

fn cmd_derive(a: DeriveArgs) -> Result<u8> {
    fs::create_dir_all(&a.out_dir)?;
    let q = transform_q(&TransitionMatrix::bisector());
    let real = derive_real_remainder()?;
    let complex = derive_complex_remainder()?;
    let files = [
        ("bisector_q.txt", to_text(&q)),
        ("f.txt", to_text(&real.f)),
        ("phi.txt", to_text(&complex.phi)),
    ];
    for (name, text) in files {
        let path = a.out_dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(0)
}
