//! Command-line front end: construct block systems, probe the degree-4
//! polynomial identities, certify doubled metrics, and print topological
//! invariants. Every report embeds the effective configuration and the
//! seed, and repeating a command with the same flags and seed reproduces
//! the output byte for byte.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isodouble::clifford::{build_system, CliffordSystem, SYSTEM_TOL};
use isodouble::doubling::{IsoparametricFamily, PositivityCertificate};
use isodouble::fkm::{FkmPolynomial, SpectrumReport};
use isodouble::report::VerificationReport;
use isodouble::seeds::DEFAULT_SEED;
use isodouble::topology::{
    cell_structure, distinguish, double_cohomology, homogeneous_table, munzner_cohomology,
    CoefficientRing, CohomologyProfiles, DoubleCohomology, HomogeneousRow, RankProfile, Side,
    Verdict,
};

#[derive(Parser)]
#[command(
    name = "isodouble",
    version,
    about = "isoparametric families, doubled metrics, and their invariants"
)]
struct Cli {
    /// report format
    #[arg(long, global = true, value_enum, default_value_t = OutputMode::Human)]
    output: OutputMode,
    /// master seed for sampling (falls back to ISODOUBLE_SEED, then 42)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// residual tolerance (falls back to ISODOUBLE_TOL, then the check's default)
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Human,
    Json,
}

impl OutputMode {
    fn name(self) -> &'static str {
        match self {
            OutputMode::Human => "human",
            OutputMode::Json => "json",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// symmetric anticommuting matrix systems
    #[command(subcommand)]
    Clifford(CliffordCmd),
    /// the quartic polynomial of a system and its level hypersurfaces
    #[command(subcommand)]
    Fkm(FkmCmd),
    /// doubled metrics and their scalar-curvature certificates
    #[command(subcommand)]
    Double(DoubleCmd),
    /// cohomology profiles and homotopy invariants
    #[command(subcommand)]
    Topology(TopologyCmd),
}

#[derive(Subcommand)]
enum CliffordCmd {
    /// construct the block system with the given module counts
    Build {
        /// number of anticommuting matrices beyond the first
        #[arg(long)]
        m: u32,
        /// copies of the preferred irreducible module
        #[arg(long)]
        plus: u32,
        /// copies of the opposite module
        #[arg(long)]
        minus: u32,
        /// write the system document to this file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// check a stored system document against the defining relations
    Verify { path: PathBuf },
}

#[derive(Subcommand)]
enum FkmCmd {
    /// sampled check of the gradient and Laplacian identities
    Check {
        /// system document produced by `clifford build`
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
    },
    /// shape-operator spectrum at a sampled point of one level set
    Spectrum {
        /// system document produced by `clifford build`
        #[arg(long)]
        system: PathBuf,
        /// level value in (-1, 1)
        #[arg(long)]
        level: f64,
    },
}

#[derive(Subcommand)]
enum DoubleCmd {
    /// build a bending curve and certify scalar-curvature positivity
    Certify {
        #[arg(long, default_value_t = 3)]
        g: u32,
        #[arg(long, default_value_t = 1)]
        mplus: u32,
        #[arg(long, default_value_t = 1)]
        mminus: u32,
        /// curvature budget of the bending curve
        #[arg(long, default_value_t = 0.5)]
        kmax: f64,
        /// outer radius for a plain single-bump curve; omit to let the
        /// planner place the bending inside mean-convex radius windows
        #[arg(long)]
        rbar: Option<f64>,
        /// inner radius of the neck
        #[arg(long, default_value_t = 0.05)]
        rinf: f64,
        /// arclength sample spacing
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
    },
}

#[derive(Subcommand)]
enum TopologyCmd {
    /// rank profiles of the focal manifolds and hypersurface, or of a double
    Cohomology {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        mplus: u32,
        #[arg(long)]
        mminus: u32,
        /// when given, profile the double of the region on this focal side
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        /// coefficient ring annotation (default by multiplicities)
        #[arg(long, value_enum)]
        ring: Option<RingArg>,
    },
    /// decide whether two indices give inequivalent doubles mod m/2 + 1
    Distinguish {
        #[arg(long)]
        m: u32,
        /// half-dimension of the ambient module sum
        #[arg(long)]
        l: u64,
        #[arg(long)]
        q1: i64,
        #[arg(long)]
        q2: i64,
    },
    /// print the classification table of homogeneous families
    Table {
        #[arg(long)]
        g: Option<u32>,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum RingArg {
    #[value(name = "Z")]
    Z,
    #[value(name = "Z2")]
    Z2,
}

impl From<RingArg> for CoefficientRing {
    fn from(r: RingArg) -> CoefficientRing {
        match r {
            RingArg::Z => CoefficientRing::Z,
            RingArg::Z2 => CoefficientRing::Z2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("ISODOUBLE_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("ISODOUBLE_SEED is not a valid seed: {v:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn resolve_tol(flag: Option<f64>, default: f64) -> Result<f64, String> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("ISODOUBLE_TOL") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| format!("ISODOUBLE_TOL is not a valid tolerance: {v:?}"))?,
            Err(_) => default,
        },
    };
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(format!("tolerance must be positive and finite, got {tol}"));
    }
    Ok(tol)
}

fn load_system(path: &Path) -> Result<CliffordSystem, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    CliffordSystem::from_json(&text).map_err(|e| e.to_string())
}

/// Print a line to stdout, exiting quietly if the reading end has gone away
/// (for example when piped into `head`).
fn write_stdout(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(1);
    }
}

fn emit(mode: OutputMode, config: Value, report: Value, human: String) {
    match mode {
        OutputMode::Json => write_stdout(&json!({ "config": config, "report": report }).to_string()),
        OutputMode::Human => write_stdout(&human),
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, String> {
    serde_json::to_value(v).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<u8, String> {
    let seed = resolve_seed(cli.seed)?;
    let mode = cli.output;
    match cli.command {
        Command::Clifford(CliffordCmd::Build { m, plus, minus, out }) => {
            let system = build_system(m, plus, minus).map_err(|e| e.to_string())?;
            let doc = system.to_json();
            let parity_ok = system.q.rem_euclid(2) == ((plus + minus) as i64).rem_euclid(2);
            let config = json!({
                "command": "clifford build", "m": m, "plus": plus, "minus": minus,
                "seed": seed, "output": mode.name(),
            });
            let report = json!({
                "l": system.l, "q": system.q, "parity_ok": parity_ok,
                "matrices": system.matrices.len(),
            });
            let human = format!(
                "l: {}\nq: {}\nparity_ok: {parity_ok}\nmatrices: {}",
                system.l,
                system.q,
                system.matrices.len()
            );
            match out {
                Some(path) => {
                    std::fs::write(&path, doc + "\n")
                        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                    emit(mode, config, report, human);
                }
                None => {
                    write_stdout(&doc);
                    eprintln!("{human}");
                }
            }
            Ok(0)
        }
        Command::Clifford(CliffordCmd::Verify { path }) => {
            let tol = resolve_tol(cli.tol, SYSTEM_TOL)?;
            let system = load_system(&path)?;
            let rep = system.verify(tol);
            let config = json!({
                "command": "clifford verify", "m": system.m, "l": system.l,
                "tolerance": tol, "seed": seed, "output": mode.name(),
            });
            let human = human_verification(&rep);
            let pass = rep.pass;
            emit(mode, config, to_value(&rep)?, human);
            Ok(if pass { 0 } else { 1 })
        }
        Command::Fkm(FkmCmd::Check { system, samples }) => {
            let tol = resolve_tol(cli.tol, 1e-9)?;
            let poly = FkmPolynomial::new(load_system(&system)?).map_err(|e| e.to_string())?;
            let rep = poly.cartan_munzner_check(samples, seed, tol);
            let config = json!({
                "command": "fkm check", "m": poly.system().m, "l": poly.system().l,
                "samples": samples, "tolerance": tol, "seed": seed, "output": mode.name(),
            });
            let human = human_verification(&rep);
            let pass = rep.pass;
            emit(mode, config, to_value(&rep)?, human);
            Ok(if pass { 0 } else { 1 })
        }
        Command::Fkm(FkmCmd::Spectrum { system, level }) => {
            let poly = FkmPolynomial::new(load_system(&system)?).map_err(|e| e.to_string())?;
            let point = poly
                .sample_level_point(level, seed)
                .map_err(|e| e.to_string())?;
            let report = poly
                .shape_spectrum(&point.vector())
                .map_err(|e| e.to_string())?;
            let config = json!({
                "command": "fkm spectrum", "m": poly.system().m, "l": poly.system().l,
                "level": level, "seed": seed, "output": mode.name(),
            });
            let human = human_spectrum(&report);
            emit(mode, config, to_value(&report)?, human);
            Ok(0)
        }
        Command::Double(DoubleCmd::Certify {
            g,
            mplus,
            mminus,
            kmax,
            rbar,
            rinf,
            step,
        }) => {
            let family = IsoparametricFamily::new(g, mplus, mminus).map_err(|e| e.to_string())?;
            let curve = match rbar {
                Some(rb) => family.build_curve(kmax, rb, rinf, step, None),
                None => family.build_certifiable_curve(kmax, rinf, step),
            }
            .map_err(|e| e.to_string())?;
            let shape = curve.validate();
            if !shape.pass {
                return Err(format!(
                    "constructed curve failed its own shape checks: {:?}",
                    shape.details
                ));
            }
            let cert = family.certify(&curve).map_err(|e| e.to_string())?;
            let config = json!({
                "command": "double certify", "g": g, "mplus": mplus, "mminus": mminus,
                "kmax": kmax, "rbar": rbar, "rinf": rinf, "step": step,
                "seed": seed, "output": mode.name(),
            });
            let human = human_certificate(&cert);
            let pass = cert.pass;
            emit(mode, config, to_value(&cert)?, human);
            Ok(if pass { 0 } else { 1 })
        }
        Command::Topology(TopologyCmd::Cohomology {
            g,
            mplus,
            mminus,
            side,
            ring,
        }) => {
            let ring = ring.map(CoefficientRing::from);
            let config = json!({
                "command": "topology cohomology", "g": g, "mplus": mplus, "mminus": mminus,
                "side": side.map(|s| Side::from(s).to_string()),
                "ring": ring.map(|r| r.to_string()),
                "seed": seed, "output": mode.name(),
            });
            match side {
                None => {
                    let prof =
                        munzner_cohomology(g, mplus, mminus, ring).map_err(|e| e.to_string())?;
                    let human = human_profiles(&prof);
                    emit(mode, config, to_value(&prof)?, human);
                }
                Some(s) => {
                    let double = double_cohomology(g, mplus, mminus, s.into(), ring)
                        .map_err(|e| e.to_string())?;
                    let human = human_double(&double);
                    emit(mode, config, to_value(&double)?, human);
                }
            }
            Ok(0)
        }
        Command::Topology(TopologyCmd::Distinguish { m, l, q1, q2 }) => {
            let rep = distinguish(m, l, q1, q2).map_err(|e| e.to_string())?;
            let config = json!({
                "command": "topology distinguish", "m": m, "l": l, "q1": q1, "q2": q2,
                "seed": seed, "output": mode.name(),
            });
            let mut human = format!(
                "p: {}\nverdict: {}\nparity_ok: [{}, {}]",
                rep.p, rep.verdict, rep.parity_ok[0], rep.parity_ok[1]
            );
            if let Some(reason) = &rep.reason {
                human.push_str(&format!("\nreason: {reason}"));
            }
            let inapplicable = rep.verdict == Verdict::Inapplicable;
            emit(mode, config, to_value(&rep)?, human);
            Ok(if inapplicable { 1 } else { 0 })
        }
        Command::Topology(TopologyCmd::Table { g }) => {
            let rows = homogeneous_table(g);
            let config = json!({
                "command": "topology table", "g": g, "seed": seed, "output": mode.name(),
            });
            let human = human_table(&rows);
            emit(mode, config, to_value(&rows)?, human);
            Ok(0)
        }
    }
}

fn human_verification(rep: &VerificationReport) -> String {
    let mut s = format!(
        "check: {}\npass: {}\nworst residual: {:.3e} (tolerance {:.3e})\nsamples: {}\nseed: {}",
        rep.check_name, rep.pass, rep.worst_residual, rep.tolerance, rep.samples, rep.seed
    );
    for d in &rep.details {
        s.push_str("\n  ");
        s.push_str(d);
    }
    s
}

fn human_spectrum(report: &SpectrumReport) -> String {
    let mut s = format!(
        "level: {:.12}\nmean curvature: {:.12}\nclusters (descending):",
        report.level, report.mean_curvature
    );
    for c in &report.clusters {
        s.push_str(&format!(
            "\n  mean {:+.12}  multiplicity {}",
            c.mean, c.multiplicity
        ));
    }
    s
}

fn human_certificate(cert: &PositivityCertificate) -> String {
    let fam = &cert.family;
    format!(
        "family: g = {}, multiplicities ({}, {}), n = {}\n\
         curve: r_bar = {:.6}, r_1 = {:.6}, r_inf = {:.6}, step = {:.6}, samples = {}\n\
         min scalar: {:.6e} at r = {:.6}, theta = {:.6}, k = {:.6}, f = {:.6}\n\
         closed-form floor: {:.6} (comparison value {:.6}), met: {}\n\
         pass: {}",
        fam.g,
        fam.m_plus,
        fam.m_minus,
        fam.n,
        cert.curve.r_bar,
        cert.curve.r_1,
        cert.curve.r_inf,
        cert.curve.step,
        cert.samples,
        cert.min_scalar,
        cert.argmin.r,
        cert.argmin.theta,
        cert.argmin.k,
        cert.argmin.f,
        cert.lower_bound_used,
        cert.context_bound,
        cert.meets_lower_bound,
        cert.pass
    )
}

fn ranks_line(label: &str, p: &RankProfile) -> String {
    format!(
        "{label}: dim {} ranks {:?} nonzero {:?}",
        p.dim(),
        p.ranks,
        p.nonzero_degrees()
    )
}

fn human_profiles(prof: &CohomologyProfiles) -> String {
    let mut s = format!(
        "g = {}, multiplicities ({}, {}), coefficients {}",
        prof.g, prof.m_plus, prof.m_minus, prof.ring
    );
    s.push('\n');
    s.push_str(&ranks_line("focal_plus", &prof.focal_plus));
    s.push('\n');
    s.push_str(&ranks_line("focal_minus", &prof.focal_minus));
    s.push('\n');
    s.push_str(&ranks_line("hypersurface", &prof.hypersurface));
    if prof.g == 4 {
        if let Ok(cells) = cell_structure(prof.g, prof.m_plus, prof.m_minus) {
            s.push_str(&format!("\ncells: {cells:?}"));
        }
    }
    s
}

fn human_double(d: &DoubleCohomology) -> String {
    format!(
        "g = {}, multiplicities ({}, {}), side {}, coefficients {}\n{}\npoincare_dual: {}\neuler: {}",
        d.g,
        d.m_plus,
        d.m_minus,
        d.side,
        d.ring,
        ranks_line("double", &d.profile),
        d.profile.is_poincare_dual(),
        d.profile.euler_characteristic()
    )
}

fn human_table(rows: &[HomogeneousRow]) -> String {
    let mut s = String::from("g,m_plus,m_minus,group,subgroup,k0,k_plus,k_minus");
    for r in rows {
        s.push_str(&format!(
            "\n{},{},{},{},{},{},{},{}",
            r.g, r.m_plus, r.m_minus, r.group, r.subgroup, r.k0, r.k_plus, r.k_minus
        ));
    }
    s
}
