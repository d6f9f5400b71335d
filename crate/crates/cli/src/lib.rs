//! Command-line front end for `hodgeset-core`.
//!
//! Every command produces a JSON record and, where it makes sense, a CSV
//! table. Output goes to stdout, or atomically to `<out>/<command>.<ext>`.
//! Exit codes: 0 success, 1 a check failed or a computation errored,
//! 2 usage error.

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use hodgeset_core::exactlin::{ExactMatrix, Filtration, MatrixJson};
use hodgeset_core::mhs::{
    delta_splitting, deligne_splitting, is_r_split, polarized_mhs_check, MixedHodge, PolarizationForm,
};
use hodgeset_core::period::{hodge_locus_demo, local_lift, schmid_decay_check, siegel_containment_check, Family};
use hodgeset_core::reduction::{
    hecke_correspondence, reduce_sl2z, siegel_intersection_enumerate, siegel_membership_point, SiegelSet,
    UpperHalfPoint,
};
use hodgeset_core::weightfilt::{monodromy_filtration, relative_weight_filtration, NilpotentOperator, Relative};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::json;

use output::{file_name, write_atomic, Artifact, Format, Table};
use verify::{run_suite, summary_line, SuiteSelection};

#[derive(Debug, Parser)]
#[command(name = "hodgeset", version, about = "Reduction theory and asymptotic Hodge theory at desk scale")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Directory for output files (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Multiplier applied to every numeric tolerance (verify only).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monodromy weight filtration of a nilpotent matrix.
    Wfilt {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 0)]
        center: i64,
        /// Compute the filtration relative to this increasing filtration instead.
        #[arg(long)]
        relative: Option<PathBuf>,
    },
    /// Deligne splitting and δ-splitting of a mixed Hodge structure.
    Split {
        #[arg(long)]
        mhs: PathBuf,
    },
    /// Polarization check for `(W, F, N, Q)`.
    PolarizeCheck {
        #[arg(long)]
        mhs: PathBuf,
        #[arg(long)]
        n: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        k: i64,
    },
    /// Reduce a point of the upper half plane into the fundamental domain.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Membership in `{|x| ≤ u, y ≥ t}`, or a covering check of the fundamental domain.
    Siegel {
        #[arg(long, default_value_t = 3f64.sqrt() / 2.0)]
        t: f64,
        #[arg(long, default_value_t = 0.5)]
        u: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Reduce random points and check the reduced points lie in the set.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// All γ in SL(2, Z) with γ·S ∩ S ≠ ∅ up to an entry bound.
    Enumerate {
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.5)]
        u: f64,
        #[arg(long, default_value_t = 20)]
        bound: i64,
    },
    /// Coset enumeration for the Hecke correspondence of `g = [a, b; c, d]`.
    Hecke {
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, default_value_t = 1)]
        level: i64,
    },
    /// Lifted period map next to its nilpotent orbit at one point.
    Orbit {
        #[arg(long, default_value = "legendre")]
        family: String,
        /// `x,y` per factor, factors separated by `;`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Fit of the decay of the distance between the period map and its orbit.
    Decay {
        #[arg(long, default_value = "legendre")]
        family: String,
        /// `y_min:y_max`.
        #[arg(long, default_value = "2:8")]
        y: String,
        #[arg(long, default_value_t = 0.5)]
        x: f64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Fit witness Siegel sets to the period image over a grid.
    Contain {
        #[arg(long, default_value = "legendre")]
        family: String,
        #[arg(long = "R", default_value_t = 0.5)]
        r: f64,
        #[arg(long, default_value_t = 2.0)]
        eta: f64,
        /// Points per axis and factor.
        #[arg(long, default_value_t = 30)]
        grid: usize,
    },
    /// Scan pairs of Legendre curves for isogeny relations.
    HodgeLocus {
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        bound: i64,
        #[arg(long, default_value_t = 1000)]
        generic: usize,
    },
    /// Run the acceptance suites and write report.json.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Errors caused by the invocation rather than the computation.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("invalid JSON in {}: {e}", path.display())))
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("expected {n} comma-separated numbers, got {s:?}")))?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(usage(format!("expected {n} comma-separated numbers, got {s:?}")));
    }
    Ok(v)
}

fn parse_point(s: &str) -> Result<UpperHalfPoint> {
    let v = parse_floats(s, 2)?;
    UpperHalfPoint::new(v[0], v[1]).map_err(|e| usage(format!("{s:?}: {e}")))
}

fn parse_family(s: &str) -> Result<Family> {
    s.parse().map_err(|e: hodgeset_core::period::PeriodError| usage(e.to_string()))
}

fn n(x: f64) -> String {
    format!("{x:?}")
}

fn wfilt(matrix: &Path, center: i64, relative: Option<&Path>) -> Result<Artifact> {
    let m: ExactMatrix = read_json(matrix)?;
    let op = NilpotentOperator::new(m).map_err(|e| usage(e.to_string()))?;
    let (filtration, exists, reason) = match relative {
        None => (Some(monodromy_filtration(&op, center)?), true, None),
        Some(path) => {
            let w: Filtration = read_json(path)?;
            match relative_weight_filtration(&op, &w)? {
                Relative::Exists(f) => (Some(f), true, None),
                Relative::NotExists(why) => (None, false, Some(why)),
            }
        }
    };
    let mut table = Table::new(vec!["weight", "dim", "graded_dim"]);
    if let Some(f) = &filtration {
        let (lo, hi) = f.range();
        for l in lo..=hi {
            table.push(vec![l.to_string(), f.get(l).dim().to_string(), f.graded_dim(l).to_string()]);
        }
    }
    let json = match (&filtration, reason) {
        (Some(f), _) => serde_json::to_value(f)?,
        (None, reason) => json!({ "exists": false, "reason": reason }),
    };
    Ok(Artifact::new("wfilt", json).with_table(table).with_status(exists))
}

fn split(mhs: &Path) -> Result<Artifact> {
    let m: MixedHodge = read_json(mhs)?;
    let s = deligne_splitting(&m)?;
    let (delta, rsplit) = delta_splitting(&m)?;
    let numbers: Vec<[i64; 3]> = s.hodge_numbers().iter().map(|(&(p, q), &d)| [p, q, d as i64]).collect();
    let mut table = Table::new(vec!["p", "q", "dim"]);
    for [p, q, d] in &numbers {
        table.push(vec![p.to_string(), q.to_string(), d.to_string()]);
    }
    let json = json!({
        "splitting": s,
        "hodge_numbers": numbers,
        "r_split": is_r_split(&s),
        "delta": MatrixJson::from(&delta),
        "delta_split_f": rsplit.f(),
    });
    Ok(Artifact::new("split", json).with_table(table))
}

fn polarize_check(mhs: &Path, n_path: &Path, q_path: &Path, k: i64) -> Result<Artifact> {
    let m: MixedHodge = read_json(mhs)?;
    let nm: ExactMatrix = read_json(n_path)?;
    let qm: ExactMatrix = read_json(q_path)?;
    let op = NilpotentOperator::new(nm).map_err(|e| usage(e.to_string()))?;
    let q = PolarizationForm::new(qm, k).map_err(|e| usage(e.to_string()))?;
    let r = polarized_mhs_check(&m, &op, &q, k)?;
    let mut table = Table::new(vec!["clause", "holds"]);
    for (name, v) in [
        ("weight_lowering", r.weight_lowering),
        ("griffiths", r.griffiths),
        ("orthogonality", r.orthogonality),
        ("positivity", r.positivity),
    ] {
        table.push(vec![name.into(), v.to_string()]);
    }
    let ok = r.holds();
    Ok(Artifact::new("polarize-check", json!({ "report": r, "holds": ok })).with_table(table).with_status(ok))
}

fn reduce(z: &str) -> Result<Artifact> {
    let p = parse_point(z)?;
    let (z0, g) = reduce_sl2z(&p)?;
    let mut table = Table::new(vec!["a", "b", "c", "d", "x0", "y0"]);
    table.push(vec![g.a.to_string(), g.b.to_string(), g.c.to_string(), g.d.to_string(), n(z0.x), n(z0.y)]);
    Ok(Artifact::new("reduce", json!({ "z0": [z0.x, z0.y], "gamma": g.rows() })).with_table(table))
}

fn siegel(t: f64, u: f64, z: Option<&str>, check: bool, samples: usize, seed: u64) -> Result<Artifact> {
    let s = SiegelSet::new(t, u).map_err(|e| usage(e.to_string()))?;
    match (z, check) {
        (Some(z), false) => {
            let p = parse_point(z)?;
            let member = siegel_membership_point(&p, &s);
            let mut table = Table::new(vec!["x", "y", "member"]);
            table.push(vec![n(p.x), n(p.y), member.to_string()]);
            Ok(Artifact::new("siegel", json!({ "siegel": s, "z": [p.x, p.y], "member": member })).with_table(table))
        }
        (None, true) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut table = Table::new(vec!["x", "y", "x0", "y0", "member"]);
            let mut missed = 0;
            for _ in 0..samples {
                let p = UpperHalfPoint::new(rng.gen_range(-10.0..10.0), 10f64.powf(rng.gen_range(-3.0..1.0)))?;
                let (z0, _) = reduce_sl2z(&p)?;
                let member = siegel_membership_point(&z0, &s);
                missed += usize::from(!member);
                table.push(vec![n(p.x), n(p.y), n(z0.x), n(z0.y), member.to_string()]);
            }
            let json = json!({ "siegel": s, "samples": samples, "uncovered": missed });
            Ok(Artifact::new("siegel", json).with_table(table).with_status(missed == 0))
        }
        _ => Err(usage("siegel needs exactly one of --z or --check")),
    }
}

fn enumerate(t: f64, u: f64, bound: i64) -> Result<Artifact> {
    let s = SiegelSet::new(t, u).map_err(|e| usage(e.to_string()))?;
    let r = siegel_intersection_enumerate(&s, &s, bound).map_err(|e| usage(e.to_string()))?;
    let mut table = Table::new(vec!["a", "b", "c", "d", "witness_x", "witness_y", "certified"]);
    for h in &r.hits {
        let g = h.gamma;
        table.push(vec![
            g.a.to_string(),
            g.b.to_string(),
            g.c.to_string(),
            g.d.to_string(),
            n(h.witness.x),
            n(h.witness.y),
            h.certified.to_string(),
        ]);
    }
    Ok(Artifact::new("enumerate", serde_json::to_value(&r)?).with_table(table))
}

fn hecke(g: &str, level: i64) -> Result<Artifact> {
    let v = parse_floats(g, 4)?;
    if v.iter().any(|x| x.fract() != 0.0) {
        return Err(usage(format!("--g needs four integers, got {g:?}")));
    }
    let e: Vec<i64> = v.iter().map(|&x| x as i64).collect();
    let m = ExactMatrix::from_ints(&[[e[0], e[1]], [e[2], e[3]]]);
    let r = hecke_correspondence(&m, level).map_err(|e| usage(e.to_string()))?;
    let mut table = Table::new(vec!["a", "b", "c", "d"]);
    for c in &r.cosets {
        table.push(vec![c.a.to_string(), c.b.to_string(), c.c.to_string(), c.d.to_string()]);
    }
    Ok(Artifact::new("hecke", serde_json::to_value(&r)?).with_table(table))
}

fn orbit(family: &str, z: &str) -> Result<Artifact> {
    let family = parse_family(family)?;
    let points: Vec<Complex64> = z.split(';').map(|p| parse_point(p).map(|w| w.to_complex())).collect::<Result<_>>()?;
    if points.len() != family.factors() {
        return Err(usage(format!("{} factor(s) expected, got {}", family.factors(), points.len())));
    }
    let s = local_lift(&points, family)?;
    let mut table = Table::new(vec!["factor", "x", "y", "phi_re", "phi_im", "orbit_re", "orbit_im", "distance"]);
    for (j, ((w, p), o)) in points.iter().zip(s.phi.taus()).zip(s.orbit.taus()).enumerate() {
        table.push(vec![j.to_string(), n(w.re), n(w.im), n(p.re), n(p.im), n(o.re), n(o.im), n(s.distance)]);
    }
    Ok(Artifact::new("orbit", serde_json::to_value(&s)?).with_table(table))
}

fn decay(family: &str, y: &str, x: f64, samples: usize, seed: u64) -> Result<Artifact> {
    let family = parse_family(family)?;
    let bounds: Vec<f64> = y
        .split(':')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("--y expects y_min:y_max, got {y:?}")))?;
    if bounds.len() != 2 {
        return Err(usage(format!("--y expects y_min:y_max, got {y:?}")));
    }
    let f = schmid_decay_check(family, x, (bounds[0], bounds[1]), samples, seed)?;
    let mut table = Table::new(vec!["y", "distance", "fit"]);
    for &(yy, d) in &f.points {
        let fit = f.k_hat * yy.powf(f.beta_hat) * (-f.rate * yy).exp();
        table.push(vec![n(yy), n(d), n(fit)]);
    }
    Ok(Artifact::new("decay", serde_json::to_value(&f)?).with_table(table))
}

fn contain(family: &str, r: f64, eta: f64, grid: usize) -> Result<Artifact> {
    let family = parse_family(family)?;
    let rep = siegel_containment_check(family, r, eta, grid)?;
    let mut table = Table::new(vec!["ordering", "t", "u", "points"]);
    for w in &rep.witnesses {
        let o: Vec<String> = w.ordering.iter().map(usize::to_string).collect();
        table.push(vec![o.join("-"), n(w.siegel.t), n(w.siegel.u), w.points.to_string()]);
    }
    let ok = rep.uncovered.is_empty();
    Ok(Artifact::new("contain", serde_json::to_value(&rep)?).with_table(table).with_status(ok))
}

fn hodge_locus(grid: usize, bound: i64, generic: usize, seed: u64) -> Result<Artifact> {
    let r = hodge_locus_demo(grid, bound, generic, seed).map_err(|e| usage(e.to_string()))?;
    let mut table = Table::new(vec!["lambda1", "lambda2", "a", "b", "c", "d"]);
    for p in &r.flagged {
        let [a, b, c, d] = p.relation;
        table.push(vec![n(p.lambda1), n(p.lambda2), a.to_string(), b.to_string(), c.to_string(), d.to_string()]);
    }
    Ok(Artifact::new("hodge-locus", serde_json::to_value(&r)?).with_table(table))
}

fn run_verify(suite: &str, cli: &Cli) -> Result<i32> {
    let selection: SuiteSelection = suite.parse().map_err(|e: anyhow::Error| usage(e.to_string()))?;
    let scale = cli.tolerance.unwrap_or(1.0);
    if !(scale > 0.0) {
        return Err(usage("--tolerance must be positive"));
    }
    let report = run_suite(selection, cli.seed, scale, |r| println!("{}", summary_line(r)))?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let path = write_atomic(&dir, "report.json", &(serde_json::to_string_pretty(&report)? + "\n"))?;
    println!(
        "{} passed, {} failed, {} skipped; report written to {}",
        report.passed,
        report.failed,
        report.skipped,
        path.display()
    );
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn dispatch(cli: &Cli) -> Result<i32> {
    if cli.tolerance.is_some() && !matches!(cli.command, Command::Verify { .. }) {
        return Err(usage("--tolerance applies only to verify"));
    }
    let artifact = match &cli.command {
        Command::Wfilt { matrix, center, relative } => wfilt(matrix, *center, relative.as_deref())?,
        Command::Split { mhs } => split(mhs)?,
        Command::PolarizeCheck { mhs, n, q, k } => polarize_check(mhs, n, q, *k)?,
        Command::Reduce { z } => reduce(z)?,
        Command::Siegel { t, u, z, check, samples } => siegel(*t, *u, z.as_deref(), *check, *samples, cli.seed)?,
        Command::Enumerate { t, u, bound } => enumerate(*t, *u, *bound)?,
        Command::Hecke { g, level } => hecke(g, *level)?,
        Command::Orbit { family, z } => orbit(family, z)?,
        Command::Decay { family, y, x, samples } => decay(family, y, *x, *samples, cli.seed)?,
        Command::Contain { family, r, eta, grid } => contain(family, *r, *eta, *grid)?,
        Command::HodgeLocus { grid, bound, generic } => hodge_locus(*grid, *bound, *generic, cli.seed)?,
        Command::Verify { suite } => return run_verify(suite, cli),
    };
    let text = artifact
        .render(cli.format)
        .ok_or_else(|| usage(format!("{} has no CSV form", artifact.name)))?;
    match &cli.out {
        Some(dir) => {
            let path = write_atomic(dir, &file_name(artifact.name, cli.format), &text)
                .with_context(|| format!("writing {} output", artifact.name))?;
            println!("{}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(if artifact.ok { 0 } else { 1 })
}

/// Parses `argv` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                2
            } else {
                1
            }
        }
    }
}
