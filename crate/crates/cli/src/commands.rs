use std::fmt::Write as _;
use std::path::PathBuf;

use gaplabel::jacobi::{
    build_truncation, connectedness_scan, eigenvalues, energy_grid, ids_curve, verify_labels, write_ids_csv,
    CandidateStatus, JacobiTruncation, ScanReport, SpectralReport, EIGENVALUE_TOL, LABEL_TOL_FACTOR,
};
use gaplabel::schwartzman::{
    finite_rhs_group, fixed_character_lattice, label_group_for, schwartzman_estimate, LabelGroup,
    SuspensionObservable, Verdict,
};
use gaplabel::solenoid::{check_conjugacies, ConjugacyCheck};
use gaplabel::systems::{DynamicalSystem, Point};
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, Format, SolenoidCheckConfig};
use crate::{CliError, Common};

type Result<T> = std::result::Result<T, CliError>;

/// Where artifacts go.
#[derive(Clone)]
enum Sink {
    Dir(PathBuf),
    Stdout,
    Discard,
}

#[derive(Clone)]
struct Ctx {
    cfg: ExperimentConfig,
    system: DynamicalSystem,
    sink: Sink,
    format: Option<Format>,
    seed: u64,
    n: usize,
    quiet: bool,
}

impl Ctx {
    fn new(c: &Common) -> Result<Self> {
        let path = c.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
        let cfg = ExperimentConfig::load(path)?;
        Self::from_config(cfg, c)
    }

    fn from_config(cfg: ExperimentConfig, c: &Common) -> Result<Self> {
        let system = cfg.build_system()?;
        let sink = match c.out_dir.clone().or_else(|| cfg.output.dir.clone()) {
            Some(dir) => Sink::Dir(dir),
            None => Sink::Stdout,
        };
        let n = c.n.unwrap_or(cfg.solver.n);
        if n < 2 {
            return Err(CliError::Config(format!("--n {n} < 2")));
        }
        Ok(Ctx {
            format: c.format.or(cfg.output.format),
            seed: c.seed.unwrap_or(cfg.solver.seed),
            sink,
            n,
            quiet: c.quiet,
            system,
            cfg,
        })
    }

    /// The summary goes to stderr when artifacts are printed on stdout.
    fn say(&self, text: &str) {
        match (self.quiet, &self.sink) {
            (true, _) => {}
            (false, Sink::Stdout) => eprint!("{text}"),
            (false, _) => print!("{text}"),
        }
    }

    fn emit(&self, name: &str, contents: &str) -> Result<()> {
        match &self.sink {
            Sink::Dir(dir) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join(name), contents)?;
            }
            Sink::Stdout => print!("{contents}"),
            Sink::Discard => {}
        }
        Ok(())
    }

    fn sample_name(&self, stem: &str, s: usize, ext: &str) -> String {
        if self.cfg.solver.samples == 1 {
            format!("{stem}.{ext}")
        } else {
            format!("{stem}-{s}.{ext}")
        }
    }

    fn start(&self, s: usize) -> Result<Point> {
        Ok(self.system.sample_ergodic(self.seed.wrapping_add(s as u64))?)
    }

    fn truncation(&self, s: usize) -> Result<(Point, JacobiTruncation)> {
        let start = self.start(s)?;
        let trunc = build_truncation(&self.system, self.cfg.coefficients()?, &start, self.n)?;
        Ok((start, trunc))
    }

    fn membership_tol(&self) -> f64 {
        self.cfg.solver.membership_tol.unwrap_or(LABEL_TOL_FACTOR / self.n as f64)
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| CliError::Internal(e.to_string()))
}

fn describe(system: &DynamicalSystem) -> String {
    match system {
        DynamicalSystem::TorusAffine(s) => {
            let rows: Vec<String> = s
                .matrix()
                .to_i64_rows()
                .unwrap_or_default()
                .iter()
                .map(|r| format!("{r:?}"))
                .collect();
            let shift: Vec<String> = s.shift().iter().map(ToString::to_string).collect();
            format!("affine map of the {}-torus, A = [{}], b = ({})", s.dim(), rows.join(", "), shift.join(", "))
        }
        DynamicalSystem::FiniteCyclic(s) => format!(
            "ω ↦ {}ω + {} on ℤ/{}ℤ, orbit {:?}",
            s.multiplier(),
            s.offset(),
            s.modulus(),
            s.support()
        ),
        DynamicalSystem::CircleDoubling(_) => "circle doubling map ω ↦ 2ω".into(),
        DynamicalSystem::SolenoidDoubling(s) => format!("solenoid doubling map, {} 2-adic digits", s.width),
    }
}

fn verdict_text(v: &Option<Verdict>) -> String {
    match v {
        Some(Verdict::Member { witness }) => {
            let mut s = format!("member {}/{}", witness.rational, witness.denominator);
            for (i, c) in witness.coefficients.iter().enumerate() {
                let _ = write!(s, " {c:+}·g{}", i + 1);
            }
            let _ = write!(s, " (residual {:.1e})", witness.residual);
            s
        }
        Some(Verdict::NonMember) => "NON-MEMBER".into(),
        Some(Verdict::Inconclusive) => "inconclusive".into(),
        None => "-".into(),
    }
}

struct GroupInfo {
    group: LabelGroup,
    json: serde_json::Value,
    summary: String,
}

fn group_info(ctx: &Ctx) -> Result<GroupInfo> {
    let group = label_group_for(&ctx.system)?;
    let mut summary = format!("system          {}\nlabel group     {group}\n", describe(&ctx.system));
    let unit = match group.denominator() {
        1 => "1".to_string(),
        q => format!("1/{q}"),
    };
    let generators: Vec<String> =
        std::iter::once(unit).chain(group.irrational_generators().iter().map(|g| g.to_string())).collect();
    let _ = writeln!(summary, "generators      {}", generators.join(", "));
    let mut json = json!({ "system": describe(&ctx.system), "label_group": group });
    match &ctx.system {
        DynamicalSystem::TorusAffine(s) => {
            let basis = fixed_character_lattice(s)?.to_i64_vectors()?;
            let _ = writeln!(summary, "fixed lattice   {basis:?} (rank {})", basis.len());
            json["fixed_lattice"] = json!(basis);
        }
        DynamicalSystem::FiniteCyclic(s) => {
            let rhs = finite_rhs_group(s.modulus(), s.multiplier(), s.offset())?;
            let same = group.same_discrete_group(&rhs) == Some(true);
            let _ = writeln!(
                summary,
                "character group {rhs} (fixed residues of ℤ/{}ℤ){}",
                s.modulus(),
                if same { "" } else { ", differs from the label group" }
            );
            json["character_group"] = json!(rhs);
        }
        DynamicalSystem::CircleDoubling(_) | DynamicalSystem::SolenoidDoubling(_) => {
            let _ = writeln!(summary, "fixed lattice   [] (only the trivial character of ℤ[1/2] is fixed)");
            json["fixed_lattice"] = json!([]);
        }
    }
    Ok(GroupInfo { group, json, summary })
}

fn group_artifact(ctx: &Ctx, info: &GroupInfo) -> Result<(String, String)> {
    Ok(match ctx.format {
        Some(Format::Csv) => {
            let mut csv = String::from("index,generator,character,value\n");
            let _ = writeln!(csv, "0,{},,", 1.0 / info.group.denominator() as f64);
            for (i, g) in info.group.irrational_generators().iter().enumerate() {
                let _ = writeln!(csv, "{},{g},,", i + 1);
            }
            for p in info.group.provenance() {
                let ch = p.character.as_ref().map(|c| format!("{c:?}")).unwrap_or_default();
                let _ = writeln!(csv, "provenance,,\"{ch}\",{}", p.value);
            }
            ("group.csv".into(), csv)
        }
        _ => ("group.json".into(), to_json(&info.json)?),
    })
}

pub fn group(c: &Common) -> Result<()> {
    let ctx = Ctx::new(c)?;
    let info = group_info(&ctx)?;
    ctx.say(&info.summary);
    let (name, body) = group_artifact(&ctx, &info)?;
    ctx.emit(&name, &body)
}

fn ids_stage(ctx: &Ctx) -> Result<String> {
    let mut summary = String::new();
    for s in 0..ctx.cfg.solver.samples {
        let (_, trunc) = ctx.truncation(s)?;
        let eigs = eigenvalues(&trunc);
        let (lo, hi) = trunc.gershgorin();
        let curve = ids_curve(&eigs, &energy_grid(lo, hi, ctx.cfg.solver.energy_points));
        let (name, body) = match ctx.format {
            Some(Format::Json) => {
                let v = json!({
                    "n": ctx.n,
                    "seed": ctx.seed.wrapping_add(s as u64),
                    "eigenvalue_tolerance": EIGENVALUE_TOL,
                    "ids_resolution": 1.0 / ctx.n as f64,
                    "curve": curve,
                });
                (ctx.sample_name("ids", s, "json"), to_json(&v)?)
            }
            _ => {
                let mut buf = Vec::new();
                write_ids_csv(&mut buf, &curve)?;
                (ctx.sample_name("ids", s, "csv"), String::from_utf8(buf).expect("ascii csv"))
            }
        };
        let _ = writeln!(summary, "ids             {name}: {} energies on [{lo:.4}, {hi:.4}], N = {}", curve.len(), ctx.n);
        ctx.emit(&name, &body)?;
    }
    Ok(summary)
}

pub fn ids(c: &Common) -> Result<()> {
    let ctx = Ctx::new(c)?;
    let summary = ids_stage(&ctx)?;
    ctx.say(&summary);
    Ok(())
}

/// Returns the summary and the number of non-member labels.
fn gaps_stage(ctx: &Ctx, group: &LabelGroup) -> Result<(String, usize)> {
    let mut summary = String::new();
    let mut refuted = 0;
    let tol = ctx.membership_tol();
    for s in 0..ctx.cfg.solver.samples {
        let (start, trunc) = ctx.truncation(s)?;
        let report = SpectralReport::analyze(&ctx.system, &start, &trunc, ctx.cfg.solver.min_width)?;
        let report = verify_labels(report, group, tol, ctx.cfg.solver.coeff_bound)?;
        let _ = writeln!(
            summary,
            "gaps            sample {s}: N = {}, min width {:.3e}, {} gaps, label ± {:.1e}, membership tol {tol:.1e}",
            report.n,
            report.min_width,
            report.gaps.len(),
            report.label_tolerance
        );
        let _ = writeln!(summary, "  {:>10} {:>10} {:>9}  verdict", "E_lo", "E_hi", "label");
        for g in &report.gaps {
            let _ = writeln!(summary, "  {:>10.5} {:>10.5} {:>9.5}  {}", g.e_lo, g.e_hi, g.label, verdict_text(&g.verdict));
            refuted += usize::from(g.verdict == Some(Verdict::NonMember));
        }
        let (name, body) = match ctx.format {
            Some(Format::Csv) => {
                let mut csv = String::from("e_lo,e_hi,width,label,label_tolerance,verdict\n");
                for g in &report.gaps {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{}",
                        g.e_lo,
                        g.e_hi,
                        g.width,
                        g.label,
                        g.label_tolerance,
                        verdict_text(&g.verdict)
                    );
                }
                (ctx.sample_name("gaps", s, "csv"), csv)
            }
            _ => (ctx.sample_name("gaps", s, "json"), to_json(&report)?),
        };
        ctx.emit(&name, &body)?;
    }
    Ok((summary, refuted))
}

pub fn gaps(c: &Common) -> Result<()> {
    let ctx = Ctx::new(c)?;
    let group = label_group_for(&ctx.system)?;
    let (summary, refuted) = gaps_stage(&ctx, &group)?;
    ctx.say(&summary);
    if refuted > 0 {
        return Err(CliError::Contradiction(format!("{refuted} gap labels outside {group}")));
    }
    Ok(())
}

fn scan_stage(ctx: &Ctx, group: &LabelGroup) -> Result<(String, ScanReport)> {
    let solver = &ctx.cfg.solver;
    if solver.schedule.is_empty() {
        return Err(CliError::Config("solver.schedule is empty".into()));
    }
    let report = connectedness_scan(
        &ctx.system,
        ctx.cfg.coefficients()?,
        &solver.schedule,
        solver.min_width,
        solver.samples,
        ctx.seed,
        group,
        solver.coeff_bound,
    )?;
    let mut summary = format!(
        "scan            N ∈ {:?}, {} samples, {} candidates\n",
        report.schedule,
        report.samples,
        report.candidates.len()
    );
    for cand in &report.candidates {
        let status = match (cand.status, cand.contradiction) {
            (_, true) => "CONTRADICTION",
            (CandidateStatus::Persistent, _) => "PERSISTENT",
            (CandidateStatus::Spurious, _) => "SPURIOUS",
        };
        let _ = writeln!(
            summary,
            "  label {:.5} {:<13} {}{}",
            cand.label,
            status,
            cand.reason,
            if cand.interior { "" } else { " (band edge)" }
        );
    }
    ctx.emit("scan.json", &to_json(&report)?)?;
    Ok((summary, report))
}

pub fn scan(c: &Common) -> Result<()> {
    let ctx = Ctx::new(c)?;
    let group = label_group_for(&ctx.system)?;
    let (summary, report) = scan_stage(&ctx, &group)?;
    ctx.say(&summary);
    let bad = report.contradictions().count();
    if bad > 0 {
        return Err(CliError::Contradiction(format!("{bad} persistent gaps with labels outside {group}")));
    }
    Ok(())
}

fn estimate_stage(ctx: &Ctx) -> Result<(String, bool)> {
    let e = ctx.cfg.estimate()?;
    let obs = SuspensionObservable::new(&ctx.system, e.character.clone(), e.beta)?;
    let start = ctx.start(0)?;
    let value = schwartzman_estimate(&ctx.system, &obs, &start, e.t_max, e.dt)?;
    let tol = 5.0 / e.t_max;
    let ok = (value - e.beta).abs() <= tol;
    let summary = format!(
        "estimate        {value:.6} ± {tol:.1e} for β = {} (T_max = {}, dt = {}) {}\n",
        e.beta,
        e.t_max,
        e.dt,
        if ok { "PASS" } else { "FAIL" }
    );
    let body = json!({
        "character": e.character,
        "beta": e.beta,
        "t_max": e.t_max,
        "dt": e.dt,
        "estimate": value,
        "tolerance": tol,
        "start": start.coords(),
    });
    ctx.emit("estimate.json", &to_json(&body)?)?;
    Ok((summary, ok))
}

pub fn estimate(c: &Common) -> Result<()> {
    let ctx = Ctx::new(c)?;
    let (summary, ok) = estimate_stage(&ctx)?;
    ctx.say(&summary);
    if !ok {
        return Err(CliError::Contradiction("estimate outside 5/T_max of β".into()));
    }
    Ok(())
}

fn solenoid_lines(check: &ConjugacyCheck) -> String {
    let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
    format!(
        "{} T₂∘ḡ = ḡ∘T₁  exact mod 2^{}, {} samples × {} steps, {} mismatches\n\
         {} T₂∘h = h∘T₃  max error {:.2e} ≤ {:.0e}, K = {}, λ = {}\n",
        mark(check.g_passes()),
        check.width,
        check.samples,
        check.steps,
        check.g_mismatches,
        mark(check.h_passes()),
        check.h_max_error,
        ConjugacyCheck::H_TOL,
        check.depth,
        check.lambda
    )
}

fn run_solenoid_check(params: &SolenoidCheckConfig, seed: u64) -> Result<ConjugacyCheck> {
    Ok(check_conjugacies(seed, params.samples, params.steps, params.width, params.depth, params.lambda)?)
}

pub fn solenoid_check(c: &Common) -> Result<()> {
    let (params, seed, out_dir) = match &c.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            let seed = c.seed.unwrap_or(cfg.solver.seed);
            let dir = c.out_dir.clone().or(cfg.output.dir.clone());
            (cfg.solenoid, seed, dir)
        }
        None => (SolenoidCheckConfig::default(), c.seed.unwrap_or(1), c.out_dir.clone()),
    };
    let check = run_solenoid_check(&params, seed)?;
    if !c.quiet {
        print!("{}", solenoid_lines(&check));
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir)?;
        std::fs::write(dir.join("solenoid-check.json"), to_json(&check)?)?;
    }
    if !(check.g_passes() && check.h_passes()) {
        return Err(CliError::Contradiction("solenoid conjugacy identity violated".into()));
    }
    Ok(())
}

/// Every stage the config describes; artifacts are written only when an
/// output directory is configured.
pub fn run(c: &Common) -> Result<()> {
    let mut ctx = Ctx::new(c)?;
    if matches!(ctx.sink, Sink::Stdout) {
        ctx.sink = Sink::Discard;
    }
    let mut problems = Vec::new();

    let info = group_info(&ctx)?;
    ctx.say(&info.summary);
    let (name, body) = group_artifact(&ctx, &info)?;
    ctx.emit(&name, &body)?;

    if ctx.cfg.coefficients.is_some() {
        ids_stage(&Ctx { format: Some(Format::Csv), quiet: true, ..ctx.clone() })?;
        let (summary, refuted) = gaps_stage(&Ctx { format: Some(Format::Json), ..ctx.clone() }, &info.group)?;
        ctx.say(&summary);
        if refuted > 0 {
            problems.push(format!("{refuted} gap labels outside {}", info.group));
        }
        if !ctx.cfg.solver.schedule.is_empty() {
            let (summary, report) = scan_stage(&ctx, &info.group)?;
            ctx.say(&summary);
            let bad = report.contradictions().count();
            if bad > 0 {
                problems.push(format!("{bad} persistent gaps with labels outside {}", info.group));
            }
        }
    }

    if ctx.cfg.estimate.is_some() {
        let (summary, ok) = estimate_stage(&ctx)?;
        ctx.say(&summary);
        if !ok {
            problems.push("estimate outside 5/T_max of β".into());
        }
    }

    if matches!(ctx.system, DynamicalSystem::SolenoidDoubling(_)) {
        let check = run_solenoid_check(&ctx.cfg.solenoid, ctx.seed)?;
        ctx.say(&solenoid_lines(&check));
        ctx.emit("solenoid-check.json", &to_json(&check)?)?;
        if !(check.g_passes() && check.h_passes()) {
            problems.push("solenoid conjugacy identity violated".into());
        }
    }

    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Contradiction(problems.join("; ")))
    }
}
