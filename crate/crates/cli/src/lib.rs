//! Command-line front end: argument parsing, complex caching, and report
//! rendering for the `signvar` binary.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use signvar::cache::{self, CacheError};
use signvar::complex::DEFAULT_FACE_CAP;
use signvar::homology::{homology_ranks, HomologyReport, DEFAULT_ENTRY_CAP, DEFAULT_EXACT_LIMIT};
use signvar::identities::{corollary_ds, cross_check, dehn_sommerville, euler_parity, IdentityReport};
use signvar::partition::{partition_complex, CheckOutcome, IntervalBounds, Verdict};
use signvar::sperm::{bottom_chain, chain_of_perm, eulerian_d};
use signvar::{phi, Chain, OrderComplex, SignedPerm};

pub const DEFAULT_FIBER_CAP: usize = 10_000_000;

#[derive(Debug, Parser)]
#[command(name = "signvar", version, about = "Sign-variation complexes, their partitioning, and identity checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for cached complexes; caching is off when unset.
    #[arg(long, env = "SIGNVAR_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Maximum number of faces to enumerate.
    #[arg(long, default_value_t = DEFAULT_FACE_CAP, global = true)]
    pub cap: usize,
    /// Maximum number of faces in a fiber dump.
    #[arg(long, default_value_t = DEFAULT_FIBER_CAP, global = true)]
    pub fiber_cap: usize,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// f-, h- and flag vectors, reduced Euler characteristic and Betti numbers of Δ_{n,m}.
    Complex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Include flag f/h numbers.
        #[arg(long)]
        flag: bool,
        /// Skip the homology computation.
        #[arg(long)]
        no_homology: bool,
        /// Write the Hasse diagram of P_{n,m} in DOT format to this file.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Label a chain, given as comma-separated sign vectors, with its signed permutation.
    Phi {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        chain: String,
    },
    /// Certify the Boolean-interval partition of Δ_{n,m}.
    Partition {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Include every fiber in the report.
        #[arg(long)]
        emit_fibers: bool,
    },
    /// Table of D(n,k), the even signed permutations of [n] with k descents.
    EulerianD {
        #[arg(long)]
        n: usize,
    },
    /// Run every identity check over the parameter grid n = 1..=n-max.
    Verify {
        #[arg(long)]
        n_max: usize,
        /// Largest n for the D(n,k) symmetry checks.
        #[arg(long, default_value_t = 8)]
        ds_max: usize,
        /// Also compare rational Betti numbers with those of RP^m.
        #[arg(long)]
        with_homology: bool,
    },
    /// The saturated chain C^π and its bottom C_π for a window such as "-2,3,1,5,-4".
    Perm2chain {
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// f/h table across all (n, m) with n <= n-max.
    Sweep {
        #[arg(long)]
        n_max: usize,
    },
}

/// Rendered report plus whether any verification failed.
#[derive(Debug)]
pub struct Outcome {
    pub body: String,
    pub failed: bool,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Io(io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<signvar::Error> for CliError {
    fn from(e: signvar::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Loads `Δ_{n,m}` from the cache when possible, rebuilding (and
/// rewriting the cache) on a miss, a stale version, or corruption.
pub fn obtain_complex(opts: &GlobalOpts, n: usize, m: usize) -> CliResult<OrderComplex> {
    let Some(dir) = &opts.cache_dir else {
        return Ok(OrderComplex::build(n, m, opts.cap)?);
    };
    let path = cache::cache_file(dir, n, m);
    match cache::load(&path, n, m) {
        Ok(k) if k.face_count() <= opts.cap => return Ok(k),
        Ok(k) => {
            return Err(signvar::Error::CapExceeded { cap: opts.cap, partial: k.face_count() }.into());
        }
        Err(CacheError::Io(e)) if e.kind() == io::ErrorKind::NotFound => {}
        Err(e) if e.is_corruption() => {
            eprintln!("warning: cache file {} is corrupt ({e}); recomputing", path.display());
        }
        Err(e) => eprintln!("note: ignoring cache file {} ({e})", path.display()),
    }
    let k = OrderComplex::build(n, m, opts.cap)?;
    cache::store(&path, &k)?;
    Ok(k)
}

#[derive(Serialize)]
struct FlagRow {
    ranks: Vec<usize>,
    flag_f: u64,
    flag_h: i64,
}

#[derive(Serialize)]
struct ComplexReport {
    n: usize,
    m: usize,
    f: Vec<u64>,
    h: Vec<i64>,
    euler_reduced: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    betti: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank_mode: Option<signvar::homology::RankMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flag: Option<Vec<FlagRow>>,
}

#[derive(Serialize)]
struct PhiReport {
    n: usize,
    chain: Vec<String>,
    window: String,
    barred: String,
    blocks: Vec<Vec<i32>>,
    ell: Vec<usize>,
    descents: Vec<usize>,
}

#[derive(Serialize)]
struct FiberDump {
    bottom: Chain,
    top: Chain,
    des: usize,
    faces: Vec<Chain>,
}

#[derive(Serialize)]
struct PartitionReport {
    n: usize,
    m: usize,
    verdict: Verdict,
    theorem_applies: bool,
    face_count: usize,
    h_from_f: Vec<i64>,
    h_from_partition: Vec<u64>,
    checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fibers: Option<std::collections::BTreeMap<SignedPerm, FiberDump>>,
}

#[derive(Serialize)]
struct EulerianReport {
    n: usize,
    #[serde(rename = "D")]
    d: Vec<u64>,
}

#[derive(Serialize)]
struct Perm2ChainReport {
    window: String,
    barred: String,
    descents: Vec<usize>,
    top_chain: Chain,
    bottom_chain: Chain,
}

#[derive(Serialize)]
struct CertificateSummary {
    n: usize,
    m: usize,
    verdict: Verdict,
}

#[derive(Serialize)]
struct VerifyReport {
    n_max: usize,
    ds_max: usize,
    reports: Vec<IdentityReport>,
    certificates: Vec<CertificateSummary>,
    failed: usize,
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    m: usize,
    j: usize,
    f_j: u64,
    h_j: i64,
    #[serde(rename = "D(n,j)")]
    d: Option<u64>,
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Rows `j = 0..=n` where `f_j` counts faces with `j` vertices.
fn fh_rows(k: &OrderComplex, d: Option<&[u64]>) -> Vec<SweepRow> {
    let (f, h) = (k.f_vector(), k.h_vector());
    (0..f.len())
        .map(|j| SweepRow { n: k.n(), m: k.m(), j, f_j: f[j], h_j: h[j], d: d.map(|d| d[j]) })
        .collect()
}

fn fh_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,m,j,f_j,h_j,D(n,j)\n");
    for r in rows {
        let d = r.d.map(|d| d.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{},{}", r.n, r.m, r.j, r.f_j, r.h_j, d);
    }
    out
}

fn identity_csv(reports: &[IdentityReport]) -> String {
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::from("name,n,m,j,lhs,rhs,pass\n");
    for r in reports {
        let _ = writeln!(out, "{},{},{},{},{},{},{}", r.name, opt(r.n), opt(r.m), opt(r.j), r.lhs, r.rhs, r.pass);
    }
    out
}

fn check_params(n: usize, m: usize) -> CliResult<()> {
    if n == 0 || m >= n {
        return Err(CliError::Input(format!("need n >= 1 and 0 <= m < n (got n={n}, m={m})")));
    }
    Ok(())
}

fn theorem_applies(n: usize, m: usize) -> bool {
    m % 2 == 0 || m + 1 == n
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    if cli.global.threads > 0 {
        // a second initialization (e.g. repeated in-process runs) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.threads).build_global();
    }
    let opts = &cli.global;
    let fmt = opts.format;
    let outcome = match &cli.command {
        Command::Complex { n, m, flag, no_homology, dot } => {
            let (n, m) = (*n, *m);
            check_params(n, m)?;
            let k = obtain_complex(opts, n, m)?;
            if let Some(path) = dot {
                fs::write(path, k.poset().to_dot())?;
            }
            let hom: Option<HomologyReport> = if *no_homology {
                None
            } else {
                Some(homology_ranks(&k, DEFAULT_EXACT_LIMIT, DEFAULT_ENTRY_CAP)?)
            };
            let flag = flag.then(|| {
                k.flag_vectors()
                    .into_iter()
                    .map(|(s, e)| FlagRow {
                        ranks: (0..32).filter(|r| s & (1 << r) != 0).collect(),
                        flag_f: e.flag_f,
                        flag_h: e.flag_h,
                    })
                    .collect::<Vec<_>>()
            });
            let report = ComplexReport {
                n,
                m,
                f: k.f_vector(),
                h: k.h_vector(),
                euler_reduced: k.reduced_euler(),
                betti: hom.as_ref().map(|h| h.betti.clone()),
                rank_mode: hom.as_ref().map(|h| h.mode),
                flag,
            };
            let body = match fmt {
                Format::Json => json(&report),
                Format::Csv => {
                    let d = (m + 1 == n).then(|| eulerian_d(n)).transpose()?;
                    fh_csv(&fh_rows(&k, d.as_deref()))
                }
                Format::Text => {
                    let mut s = format!(
                        "Δ_{{{n},{m}}}\nf = ({})\nh = ({})\nreduced euler = {}\n",
                        list(&report.f),
                        list(&report.h),
                        report.euler_reduced
                    );
                    if let (Some(b), Some(mode)) = (&report.betti, report.rank_mode) {
                        let _ = writeln!(s, "reduced betti = ({}) [{mode:?}]", list(b));
                    }
                    for row in report.flag.iter().flatten() {
                        let _ = writeln!(s, "flag S={:?} f={} h={}", row.ranks, row.flag_f, row.flag_h);
                    }
                    s
                }
            };
            Outcome { body, failed: false }
        }
        Command::Phi { n, chain } => {
            let c = Chain::parse(*n, chain)?;
            let r = phi(&c);
            let report = PhiReport {
                n: *n,
                chain: c.vectors().iter().map(ToString::to_string).collect(),
                window: r.perm.to_string(),
                barred: r.perm.to_barred_string(),
                blocks: r.blocks.clone(),
                ell: r.lengths.clone(),
                descents: r.perm.descent_data().positions(),
            };
            let body = match fmt {
                Format::Json => json(&report),
                Format::Csv => format!("window,ell,descents\n\"{}\",\"{}\",\"{}\"\n", report.window, list(&report.ell), list(&report.descents)),
                Format::Text => format!("{}\n", report.window),
            };
            Outcome { body, failed: false }
        }
        Command::Partition { n, m, emit_fibers } => {
            let (n, m) = (*n, *m);
            check_params(n, m)?;
            let k = obtain_complex(opts, n, m)?;
            if *emit_fibers && k.face_count() > opts.fiber_cap {
                return Err(signvar::Error::CapExceeded { cap: opts.fiber_cap, partial: k.face_count() }.into());
            }
            let cert = partition_complex(&k, *emit_fibers);
            let applies = theorem_applies(n, m);
            let failed = applies && !cert.is_verified();
            let fibers = cert.fibers.map(|fibers| {
                fibers
                    .into_iter()
                    .map(|(p, faces)| {
                        let IntervalBounds { bottom, top, des, .. } = cert.intervals[&p].clone();
                        (p, FiberDump { bottom, top, des, faces })
                    })
                    .collect()
            });
            let report = PartitionReport {
                n,
                m,
                verdict: cert.verdict,
                theorem_applies: applies,
                face_count: cert.face_count,
                h_from_f: cert.h_from_f,
                h_from_partition: cert.h_from_partition,
                checks: cert.checks,
                fibers,
            };
            let body = match fmt {
                Format::Json => json(&report),
                Format::Csv => {
                    let mut s = String::from("n,m,j,h_from_f,h_from_partition\n");
                    for (j, (a, b)) in report.h_from_f.iter().zip(&report.h_from_partition).enumerate() {
                        let _ = writeln!(s, "{n},{m},{j},{a},{b}");
                    }
                    s
                }
                Format::Text => {
                    let mut s = format!("Δ_{{{n},{m}}}: {:?}\n", report.verdict);
                    for c in &report.checks {
                        let _ = writeln!(s, "  {}: {:?}", c.name, c.status);
                    }
                    let _ = writeln!(s, "h from f         = ({})", list(&report.h_from_f));
                    let _ = writeln!(s, "h from partition = ({})", list(&report.h_from_partition));
                    s
                }
            };
            Outcome { body, failed }
        }
        Command::EulerianD { n } => {
            let d = eulerian_d(*n)?;
            let body = match fmt {
                Format::Json => json(&EulerianReport { n: *n, d }),
                Format::Csv => {
                    let mut s = String::from("n,j,D(n,j)\n");
                    for (j, v) in d.iter().enumerate() {
                        let _ = writeln!(s, "{n},{j},{v}");
                    }
                    s
                }
                Format::Text => format!("D({n},·) = ({})\n", list(&d)),
            };
            Outcome { body, failed: false }
        }
        Command::Verify { n_max, ds_max, with_homology } => verify(opts, *n_max, *ds_max, *with_homology)?,
        Command::Perm2chain { window } => {
            let p: SignedPerm = window.parse()?;
            let report = Perm2ChainReport {
                window: p.to_string(),
                barred: p.to_barred_string(),
                descents: p.descent_data().positions(),
                top_chain: chain_of_perm(&p)?,
                bottom_chain: bottom_chain(&p)?,
            };
            let body = match fmt {
                Format::Json => json(&report),
                Format::Csv => format!(
                    "window,top_chain,bottom_chain\n\"{}\",\"{}\",\"{}\"\n",
                    report.window,
                    list(report.top_chain.vectors()),
                    list(report.bottom_chain.vectors())
                ),
                Format::Text => format!("C^pi: {}\nC_pi: {}\n", report.top_chain, report.bottom_chain),
            };
            Outcome { body, failed: false }
        }
        Command::Sweep { n_max } => {
            let mut rows = Vec::new();
            for n in 1..=*n_max {
                for m in 0..n {
                    let k = obtain_complex(opts, n, m)?;
                    let d = (m + 1 == n).then(|| eulerian_d(n)).transpose()?;
                    rows.extend(fh_rows(&k, d.as_deref()));
                }
            }
            let body = match fmt {
                Format::Json => json(&rows),
                Format::Csv | Format::Text => fh_csv(&rows),
            };
            Outcome { body, failed: false }
        }
    };
    Ok(outcome)
}

fn verify(opts: &GlobalOpts, n_max: usize, ds_max: usize, with_homology: bool) -> CliResult<Outcome> {
    if n_max == 0 {
        return Err(CliError::Input("n-max must be at least 1".into()));
    }
    let mut reports = Vec::new();
    let mut certificates = Vec::new();
    for n in 1..=n_max {
        for m in 0..n {
            if !theorem_applies(n, m) {
                continue;
            }
            let k = obtain_complex(opts, n, m)?;
            let cert = partition_complex(&k, false);
            certificates.push(CertificateSummary { n, m, verdict: cert.verdict });
            reports.extend(cross_check(&k)?);
            let negatives = k.h_vector().iter().filter(|&&h| h < 0).count() as i64;
            reports.push(IdentityReport::new("h_nonnegative", Some(n), Some(m), None, negatives, 0));
            if m + 1 == n {
                let chi = k.reduced_euler();
                reports.push(euler_parity(n, chi));
                for mut r in dehn_sommerville(&k.h_vector(), n, chi)? {
                    r.n = Some(n);
                    r.m = Some(m);
                    reports.push(r);
                }
            }
            if with_homology {
                let hom = homology_ranks(&k, DEFAULT_EXACT_LIMIT, DEFAULT_ENTRY_CAP)?;
                for (d, &b) in hom.betti.iter().enumerate() {
                    let expected = i64::from(m % 2 == 1 && d == m);
                    reports.push(IdentityReport::new("betti_rp_m", Some(n), Some(m), Some(d), b as i64, expected));
                }
            }
        }
    }
    for n in 1..=ds_max {
        reports.extend(corollary_ds(n)?);
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let report = VerifyReport { n_max, ds_max, reports, certificates, failed };
    let body = match opts.format {
        Format::Json => json(&report),
        Format::Csv => identity_csv(&report.reports),
        Format::Text => {
            let mut s = String::new();
            for c in &report.certificates {
                let _ = writeln!(s, "partition n={} m={}: {:?}", c.n, c.m, c.verdict);
            }
            for r in report.reports.iter().filter(|r| !r.pass) {
                let _ = writeln!(s, "FAIL {r:?}");
            }
            let _ = writeln!(s, "{} checks, {} failed", report.reports.len(), report.failed);
            s
        }
    };
    Ok(Outcome { body, failed: failed > 0 })
}
