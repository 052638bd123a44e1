//! Command-line front end. `run` never touches the process streams, so tests
//! can drive it directly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use shimura_core::dualgraph::{
    admissible_analysis, atkin_lehner_swap, automorphism_group, build_double, group_structure,
    quotient_by, stabilize, Admissibility, Graph, PermGroup,
};
use shimura_core::exactalg::{split_prime, zeta_at_2, NumberField};
use shimura_core::fuchsian::{
    borel_volume, check_cover, default_borel_index, elliptic_orders_scan,
    hyperelliptic_certificate, maximal_signature, weierstrass_report, Signature, SplittingTable,
    Verdict,
};
use shimura_core::hecke::{
    congruence_detect, connectivity, mod_ell_eigensystems, split_constituents, CongruenceGraph,
    CongruenceVerdict, ModEllReport,
};
use shimura_core::quatarith::{
    atkin_lehner_ranks, validate_ramification, PrimeRecord, QuaternionData,
};

use crate::census::frobenius_census;
use crate::error::{LabError, Result};
use crate::fixtures::{Fixtures, EIGENDATA};
use crate::formats::*;
use crate::ledger::{self, Status};
use crate::manifest::RunManifest;

pub const PRECISION_VAR: &str = "SHIMURA_LAB_PRECISION";
const DEFAULT_DIGITS: usize = 10;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "shimura-lab",
    version,
    about = "Shimura curve computations: signatures, dual graphs, Hecke data"
)]
struct Cli {
    /// machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,
    /// write a run manifest (input digests, assumptions, output digest) to this path
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,
    /// fixture directory used for defaults
    #[arg(long, global = true, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number fields
    #[command(subcommand)]
    Nf(NfCmd),
    /// Quaternion algebras
    #[command(subcommand)]
    Quat(QuatCmd),
    /// Fuchsian groups: signatures, elliptic orders, Weierstrass points
    #[command(subcommand)]
    Fuchsian(FuchsianCmd),
    /// Weighted dual graphs
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Hecke modules
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// End-to-end verification ledger and the Frobenius census
    #[command(subcommand)]
    Paper(PaperCmd),
}

#[derive(Subcommand, Debug)]
enum NfCmd {
    /// Degree, signature, discriminant, real places and prime splitting
    Info {
        file: PathBuf,
        #[arg(long = "prime", value_name = "P")]
        primes: Vec<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum QuatCmd {
    /// Check the ramification data against Hilbert symbols and real signs
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Group {
    Maximal,
    Unit,
}

#[derive(Subcommand, Debug)]
enum FuchsianCmd {
    /// Signature of the maximal group, or a check of a claimed signature for the unit group
    Signature {
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        quat: PathBuf,
        #[arg(long)]
        cm: PathBuf,
        #[arg(long, value_enum, default_value = "maximal")]
        group: Group,
        /// claimed signature of the unit group, e.g. "(40; 3^18, 16^1)"
        #[arg(long)]
        claim: Option<String>,
        /// index of the unit group in the maximal group
        #[arg(long, default_value_t = 2)]
        degree: u64,
        /// [H : F^x2]; defaults to 2^|S_f|
        #[arg(long)]
        index: Option<u64>,
        #[arg(long, default_value_t = 1_000_000)]
        prime_bound: u64,
    },
    /// Orders q of possible elliptic elements
    Scan {
        #[arg(long)]
        field: Option<PathBuf>,
        #[arg(long)]
        quat: PathBuf,
        #[arg(long, default_value_t = 64)]
        q_max: u64,
        /// externally supplied splitting types
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Weierstrass point bounds, optionally with the hyperellipticity certificate
    Weierstrass {
        #[arg(long)]
        genus: u64,
        #[arg(long, requires = "galois_degree")]
        cm_count: Option<u64>,
        #[arg(long, requires = "cm_count")]
        galois_degree: Option<u64>,
    },
}

#[derive(Args, Debug)]
struct GraphIn {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum GraphCmd {
    /// Bipartite double graph from Brandt data at one Hecke label
    Build {
        #[arg(long)]
        brandt: PathBuf,
        #[arg(long)]
        prime: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quotient by the side swap or by the full automorphism group
    Quotient {
        #[command(flatten)]
        g: GraphIn,
        #[arg(long, conflicts_with = "full", required_unless_present = "full")]
        swap: bool,
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Remove leaves and contract 2-valent chains
    Stabilize {
        #[command(flatten)]
        g: GraphIn,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First Betti number
    Betti {
        #[command(flatten)]
        g: GraphIn,
    },
    /// Automorphism group and its structure
    Aut {
        #[command(flatten)]
        g: GraphIn,
    },
    /// Admissibility of every automorphism
    Admissible {
        #[command(flatten)]
        g: GraphIn,
    },
    /// DOT rendering with weights as labels
    Export {
        #[command(flatten)]
        g: GraphIn,
        #[arg(long, required = true)]
        dot: bool,
    },
}

#[derive(Subcommand, Debug)]
enum HeckeCmd {
    /// Decompose the Hecke module into constituents
    Split {
        #[arg(long)]
        brandt: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// label of the involution whose signs to record
        #[arg(long)]
        al: Option<String>,
    },
    /// Simultaneous mod-ell eigensystems over F_{ell^deg}
    Eigensystems {
        #[arg(long)]
        brandt: PathBuf,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        deg: usize,
    },
    /// Decide whether two constituents are congruent mod ell
    Congruence {
        a: String,
        b: String,
        #[arg(long)]
        ell: u64,
        /// eigenvalue data; defaults to the fixture directory
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Connected components of the congruence graph
    Connect {
        #[arg(long, conflicts_with = "declared")]
        data: Option<PathBuf>,
        #[arg(long = "ell")]
        ells: Vec<u64>,
        /// declared congruences instead of eigenvalue data
        #[arg(long)]
        declared: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum PaperCmd {
    /// Run every acceptance check, one PASS/FAIL/SKIP line each
    Verify {
        #[arg(long, default_value_t = 1_000_000)]
        prime_bound: u64,
        #[arg(long, default_value_t = 10_000)]
        census_bound: u64,
    },
    /// Factorization patterns of the degree-17 polynomial mod p
    Census {
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        /// polynomial file; defaults to harbater.json in the fixture directory
        #[arg(long)]
        poly: Option<PathBuf>,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Default)]
struct Report {
    text: String,
    json: Value,
    inputs: Vec<PathBuf>,
    assumptions: Vec<String>,
    failed: bool,
}

struct Ctx {
    fixtures: Fixtures,
    digits: usize,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let ctx = match context(&cli) {
        Ok(c) => c,
        Err(e) => return failure(&e),
    };
    let report = match dispatch(&cli.cmd, &ctx) {
        Ok(r) => r,
        Err(e) => return failure(&e),
    };
    let stdout = if cli.json {
        to_json(&report.json)
    } else {
        report.text.clone()
    };
    if let Some(path) = &cli.manifest {
        let command: Vec<String> = args
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect();
        let mut assumptions = report.assumptions.clone();
        if std::env::var_os(PRECISION_VAR).is_some() {
            assumptions.push(format!("{PRECISION_VAR} = {} digits", ctx.digits));
        }
        let written = RunManifest::new(&command, &report.inputs, &assumptions, &stdout)
            .and_then(|m| write_file(path, &to_json(&m)));
        if let Err(e) = written {
            return failure(&e);
        }
    }
    Outcome {
        code: if report.failed {
            EXIT_CHECK_FAILED
        } else {
            EXIT_OK
        },
        stdout,
        stderr: String::new(),
    }
}

fn failure(e: &LabError) -> Outcome {
    Outcome {
        code: e.exit_code(),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

fn context(cli: &Cli) -> Result<Ctx> {
    let digits = match std::env::var(PRECISION_VAR) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|d| (1..=17).contains(d))
            .ok_or_else(|| {
                LabError::invalid(format!(
                    "{PRECISION_VAR} must be a digit count in 1..=17, got {s:?}"
                ))
            })?,
        Err(_) => DEFAULT_DIGITS,
    };
    let fixtures = cli
        .fixtures
        .clone()
        .map(Fixtures::new)
        .unwrap_or_else(Fixtures::shipped);
    Ok(Ctx { fixtures, digits })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| LabError::Io(path.to_path_buf(), e))
}

fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Report> {
    match cmd {
        Command::Nf(NfCmd::Info { file, primes }) => nf_info(ctx, file, primes),
        Command::Quat(QuatCmd::Validate { file }) => quat_validate(file),
        Command::Fuchsian(c) => fuchsian(ctx, c),
        Command::Graph(c) => graph(c),
        Command::Hecke(c) => hecke(ctx, c),
        Command::Paper(c) => paper(ctx, c),
    }
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    out += &line(width.iter().map(|w| "-".repeat(*w)).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

fn kv(pairs: &[(&str, String)]) -> String {
    let w = pairs
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    pairs
        .iter()
        .map(|(k, v)| format!("{k:<w$}  {v}\n"))
        .collect()
}

fn ef_text(ef: &[(u32, u32)]) -> String {
    ef.iter()
        .map(|(e, f)| format!("(e={e}, f={f})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn nf_info(ctx: &Ctx, file: &Path, primes: &[u64]) -> Result<Report> {
    let field_file: NumberFieldFile = read_json(file)?;
    let nf = field_file.build()?;
    let (r1, r2) = nf.signature();
    let digits = ctx.digits;
    let places = nf.real_roots_f64();
    let disc = nf.supplied_discriminant().map(|d| d.to_string());
    let mut splits = Vec::new();
    for &p in primes {
        splits.push((p, split_prime(&nf, p)?));
    }
    let mut text = kv(&[
        ("field", nf.name().to_string()),
        ("polynomial", nf.poly().to_string()),
        ("degree", nf.degree().to_string()),
        ("signature", format!("({r1}, {r2})")),
        ("poly discriminant", nf.poly_discriminant().to_string()),
        (
            "field discriminant",
            disc.clone().unwrap_or_else(|| "not supplied".into()),
        ),
    ]);
    if r1 > 0 {
        let rows: Vec<Vec<String>> = places
            .iter()
            .enumerate()
            .map(|(i, x)| vec![format!("v{}", i + 1), format!("{x:.digits$}")])
            .collect();
        text += "\n";
        text += &table(&["place", "root"], &rows);
    }
    if !splits.is_empty() {
        let rows: Vec<Vec<String>> = splits
            .iter()
            .map(|(p, s)| {
                let ef = s.ef();
                vec![
                    p.to_string(),
                    ef.len().to_string(),
                    ef_text(&ef),
                    s.is_unramified().to_string(),
                ]
            })
            .collect();
        text += "\n";
        text += &table(&["p", "primes", "factors", "unramified"], &rows);
    }
    let json = json!({
        "field": nf.name(),
        "poly": poly_nums(nf.poly()),
        "degree": nf.degree(),
        "signature": [r1, r2],
        "poly_discriminant": nf.poly_discriminant().to_string(),
        "field_discriminant": disc,
        "real_places": places,
        "splitting": splits.iter().map(|(p, s)| json!({
            "p": p,
            "ef": s.ef(),
            "unramified": s.is_unramified(),
        })).collect::<Vec<_>>(),
    });
    let mut assumptions = Vec::new();
    if field_file.disc.is_some() {
        assumptions.push(format!(
            "field discriminant supplied: {}",
            field_file.provenance
        ));
    }
    Ok(Report {
        text,
        json,
        inputs: vec![file.to_path_buf()],
        assumptions,
        failed: false,
    })
}

/// Field, algebra and S_f from a quaternion file, with the field optionally given separately.
fn load_quat(
    field: Option<&Path>,
    quat: &Path,
) -> Result<(
    Arc<NumberField>,
    NumberFieldFile,
    QuaternionFile,
    QuaternionData,
    Vec<PathBuf>,
)> {
    let qf: QuaternionFile = read_json(quat)?;
    let field_path = field
        .map(Path::to_path_buf)
        .unwrap_or_else(|| sibling(quat, &qf.field));
    let field_file: NumberFieldFile = read_json(&field_path)?;
    let nf = field_file.build()?;
    let q = qf.build(&nf)?;
    Ok((nf, field_file, qf, q, vec![field_path, quat.to_path_buf()]))
}

fn trust_notes(s_f: &[PrimeRecord]) -> Vec<String> {
    s_f.iter()
        .filter(|r| r.trusted)
        .map(|r| {
            format!(
                "ramification at {} trusted: {}",
                r.label,
                r.provenance.clone().unwrap_or_default()
            )
        })
        .collect()
}

fn quat_validate(file: &Path) -> Result<Report> {
    let (nf, field_file, qf, q, inputs) = load_quat(None, file)?;
    let rep = validate_ramification(&q)?;
    let real_listed: Vec<usize> = qf.ramified_real.clone();
    let real_computed: Vec<usize> = rep.real_computed.iter().map(|v| v + 1).collect();
    let ok = rep.parity_ok && rep.real_agree && rep.unlisted_split.is_empty();
    let ranks = match field_file.narrow_class_number_one {
        Some(true) => Some(atkin_lehner_ranks(&q, true)?),
        _ => None,
    };
    let place_list = |v: &[usize]| {
        v.iter()
            .map(|i| format!("v{i}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut pairs = vec![
        ("algebra", qf.name.clone()),
        ("field", nf.name().to_string()),
        ("finite ramified", rep.finite_count.to_string()),
        ("real ramified", rep.real_count.to_string()),
        ("even total", rep.parity_ok.to_string()),
        ("real places listed", place_list(&real_listed)),
        ("real places computed", place_list(&real_computed)),
    ];
    for c in &rep.confirmed {
        pairs.push((
            "confirmed",
            format!("{} (p = {}): symbol {}", c.label, c.p, c.symbol),
        ));
    }
    for (label, prov) in &rep.trusted {
        pairs.push(("trusted", format!("{label}: {prov}")));
    }
    for c in &rep.unlisted_split {
        pairs.push((
            "unlisted",
            format!("{} (p = {}): symbol {}", c.label, c.p, c.symbol),
        ));
    }
    for u in &rep.unchecked {
        pairs.push(("unchecked", u.clone()));
    }
    if let Some(r) = &ranks {
        pairs.push((
            "Atkin-Lehner ranks",
            format!("r = {}, s = {}, r+ = {}", r.r, r.s, r.r_plus),
        ));
    }
    for (i, b) in qf.order_basis_text(&nf)?.iter().enumerate() {
        pairs.push(("order basis", format!("e{} = {b}", i + 1)));
    }
    pairs.push((
        "verdict",
        if ok {
            "consistent".into()
        } else {
            "inconsistent".into()
        },
    ));
    if !ok {
        return Err(LabError::invalid(format!(
            "ramification of {} is inconsistent: parity {}, real places {}, unlisted ramified-looking primes {}",
            qf.name,
            rep.parity_ok,
            rep.real_agree,
            rep.unlisted_split.len()
        )));
    }
    let json = json!({
        "algebra": qf.name,
        "finite_count": rep.finite_count,
        "real_count": rep.real_count,
        "parity_ok": rep.parity_ok,
        "real_listed": real_listed,
        "real_computed": real_computed,
        "confirmed": rep.confirmed.iter().map(|c| json!({"label": c.label, "p": c.p, "symbol": c.symbol})).collect::<Vec<_>>(),
        "trusted": rep.trusted,
        "unchecked": rep.unchecked,
        "atkin_lehner": ranks.map(|r| json!({"r": r.r, "s": r.s, "r_plus": r.r_plus})),
        "consistent": ok,
    });
    Ok(Report {
        text: kv(&pairs),
        json,
        inputs,
        assumptions: trust_notes(&qf.primes()),
        failed: false,
    })
}

fn fuchsian(ctx: &Ctx, cmd: &FuchsianCmd) -> Result<Report> {
    match cmd {
        FuchsianCmd::Signature {
            field,
            quat,
            cm,
            group,
            claim,
            degree,
            index,
            prime_bound,
        } => {
            let (nf, _, qf, _, mut inputs) = load_quat(field.as_deref(), quat)?;
            let s_f = qf.primes();
            let records = cm_records(&read_json::<Vec<CmRecordEntry>>(cm)?)?;
            inputs.push(cm.clone());
            let idx = index.unwrap_or_else(|| default_borel_index(&s_f));
            let zeta = zeta_at_2(&nf, *prime_bound)?;
            let run = maximal_signature(&nf, &s_f, &records, idx, &zeta)?;
            let mut assumptions = trust_notes(&s_f);
            assumptions.extend(
                records
                    .iter()
                    .map(|r| format!("class number of {} = {}: {}", r.label, r.h, r.provenance)),
            );
            assumptions.push(match index {
                Some(i) => format!("[H : F^x2] = {i} given"),
                None => format!("[H : F^x2] = {idx} by default (2^|S_f|)"),
            });
            let digits = ctx.digits;
            let v = &run.volume;
            let mut pairs = vec![
                ("field", nf.name().to_string()),
                (
                    "zeta_F(2)",
                    format!(
                        "{:.digits$} (+{:.1e}, p <= {})",
                        zeta.value, zeta.error_bound, zeta.prime_bound
                    ),
                ),
                ("[H : F^x2]", idx.to_string()),
                (
                    "vol/2pi (Borel)",
                    format!("{:.digits$} +- {:.1e}", v.vol_over_2pi, v.error_bound),
                ),
                (
                    "vol/2pi (exact)",
                    v.exact.as_ref().map(|x| x.to_string()).unwrap_or_default(),
                ),
            ];
            for c in &run.counts {
                let terms: Vec<String> = c
                    .terms
                    .iter()
                    .map(|(l, i, m)| format!("{l}: index {i}, m = {m}"))
                    .collect();
                pairs.push((
                    "elliptic",
                    format!("e_{} = {} [{}]", c.q, c.count, terms.join("; ")),
                ));
            }
            let mut json = json!({
                "field": nf.name(),
                "signature": SignatureFile::from_signature(&run.signature),
                "zeta": {"value": zeta.value, "error_bound": zeta.error_bound, "prime_bound": zeta.prime_bound},
                "index_h": idx,
                "volume": {
                    "vol_over_2pi": v.vol_over_2pi,
                    "error_bound": v.error_bound,
                    "exact": v.exact.as_ref().map(|x| x.to_string()),
                },
                "elliptic": run.counts.iter().map(|c| json!({"q": c.q, "count": c.count, "terms": c.terms})).collect::<Vec<_>>(),
            });
            let text = match group {
                Group::Maximal => {
                    pairs.push(("signature", run.signature.to_string()));
                    format!("{}\n{}", run.signature, kv(&pairs))
                }
                Group::Unit => {
                    let claim = claim.as_deref().ok_or_else(|| {
                        LabError::Unsupported(
                            "elliptic counts of the unit group are not derived; pass --claim"
                                .into(),
                        )
                    })?;
                    let claimed: Signature = claim.parse()?;
                    let numeric = if idx % degree == 0 {
                        Some(borel_volume(&nf, &s_f, idx / degree, &zeta)?)
                    } else {
                        None
                    };
                    let cover = check_cover(&claimed, &run.signature, *degree, numeric.as_ref())?;
                    if !cover.numeric_ok {
                        return Err(LabError::invalid(format!(
                            "{claimed} has the right exact volume but misses the Borel value at index {}",
                            idx / degree
                        )));
                    }
                    pairs.push(("maximal signature", run.signature.to_string()));
                    pairs.push(("unit signature", claimed.to_string()));
                    pairs.push(("volume ratio", cover.ratio.to_string()));
                    json["unit"] = json!({
                        "signature": SignatureFile::from_signature(&claimed),
                        "ratio": cover.ratio.to_string(),
                        "numeric_checked": numeric.is_some(),
                    });
                    format!("{claimed}\n{}", kv(&pairs))
                }
            };
            Ok(Report {
                text,
                json,
                inputs,
                assumptions,
                failed: false,
            })
        }
        FuchsianCmd::Scan {
            field,
            quat,
            q_max,
            table: tfile,
        } => {
            let (nf, _, qf, _, mut inputs) = load_quat(field.as_deref(), quat)?;
            let s_f = qf.primes();
            let splits = match tfile {
                Some(p) => {
                    inputs.push(p.clone());
                    splitting_table(&read_json::<Vec<SplittingEntry>>(p)?)?
                }
                None => SplittingTable::default(),
            };
            let rep = elliptic_orders_scan(&nf, &s_f, *q_max, &splits)?;
            let rows: Vec<Vec<String>> = rep
                .rows
                .iter()
                .map(|r| {
                    let beh: Vec<String> = r
                        .behaviour
                        .iter()
                        .map(|b| format!("{}: {}", b.label, b.splitting))
                        .collect();
                    vec![
                        r.q.to_string(),
                        r.in_field.to_string(),
                        beh.join(", "),
                        r.norm.clone().unwrap_or_default(),
                        r.strict_ok.map(|b| b.to_string()).unwrap_or_default(),
                        if r.survives {
                            "yes".into()
                        } else {
                            "no".into()
                        },
                    ]
                })
                .filter(|r| r[1] == "true")
                .collect();
            let text = format!(
                "survivors: {:?}\n\n{}",
                rep.survivors,
                table(
                    &[
                        "q",
                        "in F",
                        "splitting",
                        "norm",
                        "valuations even",
                        "survives"
                    ],
                    &rows
                )
            );
            let json = json!({
                "field": rep.field,
                "q_max": rep.q_max,
                "survivors": rep.survivors,
                "rows": rep.rows.iter().filter(|r| r.in_field).map(|r| json!({
                    "q": r.q,
                    "splitting": r.behaviour.iter().map(|b| (b.label.clone(), b.splitting.to_string())).collect::<BTreeMap<_, _>>(),
                    "no_split": r.no_split,
                    "norm": r.norm,
                    "norm_ok": r.norm_ok,
                    "strict_ok": r.strict_ok,
                    "survives": r.survives,
                })).collect::<Vec<_>>(),
            });
            Ok(Report {
                text,
                json,
                inputs,
                assumptions: trust_notes(&s_f),
                failed: false,
            })
        }
        FuchsianCmd::Weierstrass {
            genus,
            cm_count,
            galois_degree,
        } => {
            let w = weierstrass_report(*genus)?;
            let mut pairs = vec![
                ("genus", w.genus.to_string()),
                ("min #W", w.min_count.to_string()),
                ("max #W", w.max_count.to_string()),
                ("weight budget", w.weight_budget.to_string()),
                ("hyperelliptic #W", w.hyperelliptic_count.to_string()),
            ];
            let mut json = json!({
                "genus": w.genus,
                "min_count": w.min_count,
                "max_count": w.max_count,
                "weight_budget": w.weight_budget,
                "hyperelliptic_count": w.hyperelliptic_count,
            });
            if let (Some(c), Some(d)) = (cm_count, galois_degree) {
                let cert = hyperelliptic_certificate(*genus, *c, *d)?;
                for s in &cert.steps {
                    pairs.push(("step", s.clone()));
                }
                pairs.push(("verdict", cert.verdict.to_string()));
                json["verdict"] = match cert.verdict {
                    Verdict::Hyperelliptic { weierstrass_count } => {
                        json!({"hyperelliptic": true, "weierstrass_count": weierstrass_count})
                    }
                    Verdict::NotHyperelliptic { at_least } => {
                        json!({"hyperelliptic": false, "at_least": at_least})
                    }
                    Verdict::NoVerdict => Value::Null,
                };
                json["steps"] = json!(cert.steps);
            }
            Ok(Report {
                text: kv(&pairs),
                json,
                ..Default::default()
            })
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    read_json::<GraphFile>(path)?.to_graph()
}

/// Emit a graph result, writing it to `out` when given.
fn graph_report(
    g: &Graph,
    header: Vec<(&str, String)>,
    out: Option<&Path>,
    inputs: Vec<PathBuf>,
) -> Result<Report> {
    let file = GraphFile::from_graph(g);
    let payload = to_json(&file);
    if let Some(p) = out {
        write_file(p, &payload)?;
    }
    let mut pairs = header;
    pairs.push(("vertices", g.vertex_count().to_string()));
    pairs.push(("edges", g.edge_count().to_string()));
    pairs.push(("betti", g.betti().to_string()));
    if let Some(p) = out {
        pairs.push(("written", p.display().to_string()));
    }
    let json = json!({ "graph": file, "betti": g.betti() });
    Ok(Report {
        text: kv(&pairs),
        json,
        inputs,
        ..Default::default()
    })
}

fn graph(cmd: &GraphCmd) -> Result<Report> {
    match cmd {
        GraphCmd::Build { brandt, prime, out } => {
            let ds = read_json::<BrandtFile>(brandt)?.build()?;
            let g = build_double(&ds, prime)?;
            graph_report(
                &g,
                vec![("label", prime.clone())],
                out.as_deref(),
                vec![brandt.clone()],
            )
        }
        GraphCmd::Quotient {
            g,
            swap,
            full: _,
            out,
        } => {
            let graph = read_graph(&g.input)?;
            let (group, what) = if *swap {
                (
                    PermGroup::generated_by(&graph, vec![atkin_lehner_swap(&graph)?])?,
                    "side swap",
                )
            } else {
                (automorphism_group(&graph)?, "full automorphism group")
            };
            let q = quotient_by(&graph, &group)?;
            let order = group
                .order_u64()
                .map(|o| o.to_string())
                .unwrap_or_else(|| "large".into());
            graph_report(
                &q,
                vec![("quotient by", what.into()), ("group order", order)],
                out.as_deref(),
                vec![g.input.clone()],
            )
        }
        GraphCmd::Stabilize { g, out } => {
            let graph = read_graph(&g.input)?;
            let r = stabilize(&graph);
            let mut rep = graph_report(
                &r.graph,
                vec![
                    ("leaves removed", r.leaves_removed.to_string()),
                    ("chains contracted", r.chains_contracted.to_string()),
                    (
                        "degenerate",
                        r.degenerate.clone().unwrap_or_else(|| "no".into()),
                    ),
                ],
                out.as_deref(),
                vec![g.input.clone()],
            )?;
            rep.json["leaves_removed"] = json!(r.leaves_removed);
            rep.json["chains_contracted"] = json!(r.chains_contracted);
            rep.json["degenerate"] = json!(r.degenerate);
            Ok(rep)
        }
        GraphCmd::Betti { g } => {
            let graph = read_graph(&g.input)?;
            let b = graph.betti_report();
            let mut text = format!("{}\n", b.total);
            if b.components.len() > 1 {
                let rows: Vec<Vec<String>> = b
                    .components
                    .iter()
                    .map(|(v, e, x)| vec![v.to_string(), e.to_string(), x.to_string()])
                    .collect();
                text += &table(&["vertices", "edges", "betti"], &rows);
            }
            let json = json!({
                "betti": b.total,
                "connected": b.connected,
                "components": b.components,
            });
            Ok(Report {
                text,
                json,
                inputs: vec![g.input.clone()],
                ..Default::default()
            })
        }
        GraphCmd::Aut { g } => {
            let graph = read_graph(&g.input)?;
            let grp = automorphism_group(&graph)?;
            let r = group_structure(&grp)?;
            let orders: Vec<String> = r
                .element_orders
                .iter()
                .map(|(o, c)| format!("{o}:{c}"))
                .collect();
            let pairs = vec![
                ("order", r.order.to_string()),
                ("structure", r.description.clone()),
                ("abelian", r.abelian.to_string()),
                ("involutions", r.involutions.to_string()),
                ("element orders", orders.join(" ")),
                (
                    "normal (Z/2)^r",
                    format!("r = {}, {} of them", r.normal_ea_rank, r.normal_ea_count),
                ),
                ("cyclic complements", r.cyclic_complements.to_string()),
            ];
            let json = json!({
                "order": r.order,
                "structure": r.description,
                "abelian": r.abelian,
                "involutions": r.involutions,
                "element_orders": r.element_orders,
                "normal_ea_rank": r.normal_ea_rank,
                "normal_ea_count": r.normal_ea_count,
                "cyclic_complements": r.cyclic_complements,
                "complement_centralizes": r.complement_centralizes,
            });
            Ok(Report {
                text: kv(&pairs),
                json,
                inputs: vec![g.input.clone()],
                ..Default::default()
            })
        }
        GraphCmd::Admissible { g } => {
            let graph = read_graph(&g.input)?;
            let grp = automorphism_group(&graph)?;
            let r = admissible_analysis(&graph, &grp)?;
            let rows: Vec<Vec<String>> = r
                .elements
                .iter()
                .map(|e| {
                    vec![
                        e.order.to_string(),
                        e.support.to_string(),
                        e.fixed_vertices.len().to_string(),
                        (e.admissibility == Admissibility::Admissible).to_string(),
                    ]
                })
                .collect();
            let text = kv(&[
                (
                    "group order",
                    grp.order_u64().map(|o| o.to_string()).unwrap_or_default(),
                ),
                ("admissible elements", r.admissible_count.to_string()),
                ("involutions", r.involutions.to_string()),
                (
                    "admissible involutions",
                    r.admissible_involutions.len().to_string(),
                ),
                (
                    "largest admissible exponent-2 subgroup",
                    r.max_admissible_exponent2_order.to_string(),
                ),
            ]) + "\n"
                + &table(&["order", "support", "fixed", "admissible"], &rows);
            let json = json!({
                "admissible_count": r.admissible_count,
                "involutions": r.involutions,
                "admissible_involutions": r.admissible_involutions.iter().map(|&i| json!({
                    "vertex_perm": r.elements[i].vertex_perm,
                    "support": r.elements[i].support,
                })).collect::<Vec<_>>(),
                "pair_products": r.pair_products,
                "max_admissible_exponent2_order": r.max_admissible_exponent2_order,
            });
            Ok(Report {
                text,
                json,
                inputs: vec![g.input.clone()],
                ..Default::default()
            })
        }
        GraphCmd::Export { g, dot: _ } => {
            let graph = read_graph(&g.input)?;
            let name = g
                .input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "G".into());
            let dot = graph.to_dot(&name);
            Ok(Report {
                json: json!({ "dot": dot }),
                text: dot,
                inputs: vec![g.input.clone()],
                ..Default::default()
            })
        }
    }
}

fn modell_json(r: &ModEllReport) -> Value {
    json!({
        "ell": r.ell,
        "degree": r.k,
        "modulus": r.modulus,
        "systems": r.systems.iter().map(|s| json!({
            "values": s.values.iter().map(|(k, v)| (k.clone(), v.to_string())).collect::<BTreeMap<_, _>>(),
            "generalized_dim": s.generalized_dim,
            "eigen_dim": s.eigen_dim,
        })).collect::<Vec<_>>(),
        "orbits": r.orbits.iter().map(|o| json!({"label": o.label, "members": o.members})).collect::<Vec<_>>(),
        "needs_degree": r.needs_degree,
    })
}

fn eigen_path(ctx: &Ctx, data: &Option<PathBuf>) -> PathBuf {
    data.clone().unwrap_or_else(|| ctx.fixtures.path(EIGENDATA))
}

fn hecke(ctx: &Ctx, cmd: &HeckeCmd) -> Result<Report> {
    match cmd {
        HeckeCmd::Split { brandt, seed, al } => {
            let bf: BrandtFile = read_json(brandt)?;
            let ds = bf.build()?;
            let cs = split_constituents(&ds, *seed, al.as_deref())?;
            let rows: Vec<Vec<String>> = cs
                .iter()
                .map(|c| {
                    vec![
                        c.label.clone(),
                        c.dimension.to_string(),
                        c.multiplicity.to_string(),
                        c.al_sign.map(|s| format!("{s:+}")).unwrap_or_default(),
                        c.field_poly.to_string(),
                    ]
                })
                .collect();
            let json = json!({
                "constituents": cs.iter().map(|c| json!({
                    "label": c.label,
                    "dimension": c.dimension,
                    "multiplicity": c.multiplicity,
                    "alsign": c.al_sign,
                    "field_poly": poly_nums(&c.field_poly),
                    "charpolys": c.charpolys.iter().map(|(k, p)| (k.clone(), poly_nums(p))).collect::<BTreeMap<_, _>>(),
                })).collect::<Vec<_>>(),
            });
            let text = table(&["label", "dim", "mult", "AL", "field"], &rows);
            Ok(Report {
                text,
                json,
                inputs: vec![brandt.clone()],
                assumptions: vec![
                    format!("Brandt data: {}", bf.provenance),
                    format!("random seed {seed}"),
                ],
                failed: false,
            })
        }
        HeckeCmd::Eigensystems { brandt, ell, deg } => {
            let ds = read_json::<BrandtFile>(brandt)?.build()?;
            let r = mod_ell_eigensystems(&ds, *ell, *deg)?;
            let labels: Vec<&String> = r
                .systems
                .first()
                .map(|s| s.values.keys().collect())
                .unwrap_or_default();
            let mut header: Vec<&str> = vec!["#", "orbit"];
            header.extend(labels.iter().map(|s| s.as_str()));
            header.extend(["gen dim", "eigen dim"]);
            let rows: Vec<Vec<String>> = r
                .systems
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut row = vec![
                        i.to_string(),
                        r.orbit_of(i).map(|o| o.label.clone()).unwrap_or_default(),
                    ];
                    row.extend(s.values.values().map(|v| v.to_string()));
                    row.push(s.generalized_dim.to_string());
                    row.push(s.eigen_dim.to_string());
                    row
                })
                .collect();
            let mut text = format!("F_{}^{} with modulus {:?}\n\n", r.ell, r.k, r.modulus);
            text += &table(&header, &rows);
            if let Some(d) = r.needs_degree {
                let _ = writeln!(text, "\nsome eigenvalues need degree {d}");
            }
            Ok(Report {
                text,
                json: modell_json(&r),
                inputs: vec![brandt.clone()],
                ..Default::default()
            })
        }
        HeckeCmd::Congruence { a, b, ell, data } => {
            let path = eigen_path(ctx, data);
            let eig: EigenFile = read_json(&path)?;
            let r = congruence_detect(&eig.get(a)?.table()?, &eig.get(b)?.table()?, *ell)?;
            let (verdict, detail, jv) = match &r.verdict {
                CongruenceVerdict::Congruent { witness } => {
                    let w: BTreeMap<String, String> = witness
                        .iter()
                        .map(|(k, v)| (k.clone(), v.to_string()))
                        .collect();
                    let d = w
                        .iter()
                        .map(|(k, v)| format!("a_{k} = {v}"))
                        .collect::<Vec<_>>()
                        .join(", ");
                    ("congruent", d, json!({ "congruent": true, "witness": w }))
                }
                CongruenceVerdict::NotCongruent { label } => (
                    "not congruent",
                    format!("no common root at {label}"),
                    json!({ "congruent": false, "label": label }),
                ),
                CongruenceVerdict::Inconclusive { degree_needed } => (
                    "inconclusive",
                    format!("roots need F_{ell}^{degree_needed}"),
                    json!({ "congruent": Value::Null, "degree_needed": degree_needed }),
                ),
            };
            let text = format!("{a} ~ {b} mod {ell}: {verdict}\n{detail}\n");
            let json = json!({ "a": a, "b": b, "ell": ell, "degree": r.degree, "result": jv });
            Ok(Report {
                text,
                json,
                inputs: vec![path],
                ..Default::default()
            })
        }
        HeckeCmd::Connect {
            data,
            ells,
            declared,
        } => {
            let (cg, inputs) = match declared {
                Some(p) => {
                    let c: CongruenceFile = read_json(p)?;
                    let mut g = CongruenceGraph::new(c.nodes.clone());
                    for cl in &c.cliques {
                        let members: Vec<&str> = cl.members.iter().map(String::as_str).collect();
                        g.add_clique(&members, cl.ell, &cl.source)?;
                    }
                    (g, vec![p.clone()])
                }
                None => {
                    if ells.is_empty() {
                        return Err(LabError::invalid("pass --ell at least once, or --declared"));
                    }
                    let path = eigen_path(ctx, data);
                    let eig: EigenFile = read_json(&path)?;
                    let tables: Vec<(String, _)> = eig
                        .constituents
                        .iter()
                        .map(|c| Ok((c.label.clone(), c.table()?)))
                        .collect::<Result<_>>()?;
                    let mut g =
                        CongruenceGraph::new(tables.iter().map(|(l, _)| l.clone()).collect());
                    for (i, (la, ta)) in tables.iter().enumerate() {
                        for (lb, tb) in &tables[i + 1..] {
                            for &ell in ells {
                                if congruence_detect(ta, tb, ell)?.is_congruent() {
                                    g.add_edge(la, lb, ell, "eigenvalue data")?;
                                }
                            }
                        }
                    }
                    (g, vec![path])
                }
            };
            let comps = connectivity(&cg);
            let mut text = format!("{} component(s)\n", comps.len());
            for c in &comps {
                let _ = writeln!(text, "{{{}}}", c.join(", "));
            }
            let json = json!({ "components": comps });
            Ok(Report {
                text,
                json,
                inputs,
                ..Default::default()
            })
        }
    }
}

fn paper(ctx: &Ctx, cmd: &PaperCmd) -> Result<Report> {
    match cmd {
        PaperCmd::Verify {
            prime_bound,
            census_bound,
        } => {
            let opts = ledger::Options {
                prime_bound: *prime_bound,
                census_bound: *census_bound,
                ..Default::default()
            };
            let checks = ledger::verify(&ctx.fixtures, &opts);
            let mut text = String::new();
            for c in &checks {
                let _ = writeln!(
                    text,
                    "{:<4} {:>2}  {}: {}",
                    c.status, c.id, c.title, c.detail
                );
            }
            let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
            let (p, f, s) = (
                count(Status::Pass),
                count(Status::Fail),
                count(Status::Skip),
            );
            let _ = writeln!(text, "\n{p} passed, {f} failed, {s} skipped");
            let json = json!({ "checks": checks, "passed": p, "failed": f, "skipped": s });
            Ok(Report {
                text,
                json,
                inputs: vec![ctx.fixtures.dir.clone()],
                assumptions: vec![
                    format!("zeta prime bound {prime_bound}"),
                    format!("census bound {census_bound}"),
                    format!("graph property seed {}", opts.seed),
                ],
                failed: f > 0,
            })
        }
        PaperCmd::Census { bound, poly } => {
            let path = poly
                .clone()
                .unwrap_or_else(|| ctx.fixtures.path("harbater.json"));
            let pf: PolyFile = read_json(&path)?;
            let c = frobenius_census(&int_poly(&pf.poly)?, *bound);
            let rows: Vec<Vec<String>> = c
                .counts
                .iter()
                .map(|(pat, n)| {
                    vec![
                        pat.clone(),
                        n.to_string(),
                        c.first_prime[pat].to_string(),
                        c.allowed.contains(pat).to_string(),
                    ]
                })
                .collect();
            let mut text = kv(&[
                ("polynomial", pf.name.clone()),
                ("bound", c.bound.to_string()),
                ("primes tested", c.tested.to_string()),
                ("skipped (bad reduction)", format!("{:?}", c.skipped)),
                ("allowed types", c.allowed.join(", ")),
            ]);
            text += "\n";
            text += &table(&["pattern", "primes", "first p", "allowed"], &rows);
            let _ = writeln!(
                text,
                "\n{}",
                if c.all_allowed {
                    "every pattern is allowed"
                } else {
                    "patterns outside the allowed set occur"
                }
            );
            let json = serde_json::to_value(&c).map_err(|e| LabError::Json(path.clone(), e))?;
            Ok(Report {
                text,
                json,
                inputs: vec![path],
                assumptions: Vec::new(),
                failed: !c.all_allowed,
            })
        }
    }
}
