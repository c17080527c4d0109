//! Finite Jacobi truncations along orbits, their spectra, and gap labels.
//!
//! Off-diagonals are stored as `|p|`: conjugating by a diagonal unitary turns
//! any complex off-diagonal into its modulus without changing the spectrum, so
//! every truncation is a real symmetric tridiagonal matrix. Eigenvalue counts
//! come from the LDLᵀ inertia (Sturm) recurrence and eigenvalues from
//! bisection on that count.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::schwartzman::{contains, Character, LabelGroup, Verdict};
use crate::systems::{Direction, DynamicalSystem, Point};

/// Absolute accuracy of [`eigenvalues`].
pub const EIGENVALUE_TOL: f64 = 1e-10;
/// Multiple of `hull width / N` used as the default minimum gap width.
pub const MIN_WIDTH_FACTOR: f64 = 20.0;
/// Multiple of `1/N` tolerated between a gap label and its prediction.
pub const LABEL_TOL_FACTOR: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrigKind {
    Cos,
    Sin,
    /// `exp(2πi·)`, complex valued
    Exp,
}

/// `amplitude · f(2π(χ(ω) + phase))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrigTerm {
    pub character: Character,
    pub kind: TrigKind,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub residue: u64,
    pub value: f64,
    #[serde(default)]
    pub imag: f64,
}

/// A continuous function on the phase space: a finite character sum, or a
/// lookup table on a finite system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Observable {
    Trig {
        #[serde(default)]
        constant: f64,
        #[serde(default)]
        terms: Vec<TrigTerm>,
    },
    Table(Vec<TableEntry>),
}

impl Observable {
    pub fn constant(c: f64) -> Observable {
        Observable::Trig { constant: c, terms: Vec::new() }
    }

    pub fn single(character: Character, kind: TrigKind, amplitude: f64) -> Observable {
        Observable::Trig { constant: 0.0, terms: vec![TrigTerm { character, kind, amplitude, phase: 0.0 }] }
    }

    pub fn table(values: &[(u64, f64)]) -> Observable {
        Observable::Table(values.iter().map(|&(residue, value)| TableEntry { residue, value, imag: 0.0 }).collect())
    }

    pub fn is_real(&self) -> bool {
        match self {
            Observable::Trig { terms, .. } => {
                terms.iter().all(|t| t.kind != TrigKind::Exp || t.amplitude == 0.0)
            }
            Observable::Table(entries) => entries.iter().all(|e| e.imag == 0.0),
        }
    }

    fn validate(&self, system: &DynamicalSystem) -> Result<()> {
        match self {
            Observable::Trig { constant, terms } => {
                if !constant.is_finite() {
                    return Err(Error::InvalidObservable(format!("constant {constant}")));
                }
                for t in terms {
                    if !(t.amplitude.is_finite() && t.phase.is_finite()) {
                        return Err(Error::InvalidObservable(format!("term {t:?}")));
                    }
                    t.character.at_shift(system)?;
                }
                Ok(())
            }
            Observable::Table(entries) => {
                let DynamicalSystem::FiniteCyclic(s) = system else {
                    return Err(Error::InvalidObservable("tables are only defined on finite systems".into()));
                };
                for w in s.support() {
                    if !entries.iter().any(|e| e.residue == *w) {
                        return Err(Error::InvalidObservable(format!("table has no value at residue {w}")));
                    }
                }
                if entries.iter().any(|e| !(e.value.is_finite() && e.imag.is_finite())) {
                    return Err(Error::InvalidObservable("table values must be finite".into()));
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, system: &DynamicalSystem, point: &Point) -> Result<Complex64> {
        match self {
            Observable::Trig { constant, terms } => {
                let mut acc = Complex64::new(*constant, 0.0);
                for t in terms {
                    let theta = TAU * (t.character.eval(system, point)? + t.phase);
                    acc += t.amplitude
                        * match t.kind {
                            TrigKind::Cos => Complex64::new(theta.cos(), 0.0),
                            TrigKind::Sin => Complex64::new(theta.sin(), 0.0),
                            TrigKind::Exp => Complex64::from_polar(1.0, theta),
                        };
                }
                Ok(acc)
            }
            Observable::Table(entries) => {
                let Point::Residue(w) = point else {
                    return Err(Error::InvalidObservable("tables are only defined on finite systems".into()));
                };
                entries
                    .iter()
                    .find(|e| e.residue == *w)
                    .map(|e| Complex64::new(e.value, e.imag))
                    .ok_or_else(|| Error::InvalidObservable(format!("table has no value at residue {w}")))
            }
        }
    }
}

/// Potential `q` (real) and off-diagonal `p` (complex).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub q: Observable,
    #[serde(default = "unit_hopping")]
    pub p: Observable,
}

fn unit_hopping() -> Observable {
    Observable::constant(1.0)
}

impl CoefficientSpec {
    pub fn new(q: Observable, p: Observable) -> Result<Self> {
        let spec = CoefficientSpec { q, p };
        if !spec.q.is_real() {
            return Err(Error::InvalidObservable("the potential q must be real valued".into()));
        }
        Ok(spec)
    }

    pub fn validate(&self, system: &DynamicalSystem) -> Result<()> {
        if !self.q.is_real() {
            return Err(Error::InvalidObservable("the potential q must be real valued".into()));
        }
        self.q.validate(system)?;
        self.p.validate(system)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// sites `[-N/2, N/2)` of a two-sided orbit
    WholeLine,
    /// sites `[0, N)` of a forward orbit
    HalfLine,
}

/// Real symmetric tridiagonal matrix with nonnegative off-diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiTruncation {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    boundary: Boundary,
}

impl JacobiTruncation {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>, boundary: Boundary) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "{} diagonal and {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().any(|d| !d.is_finite()) || offdiag.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::InvalidParameter("entries must be finite, off-diagonals nonnegative".into()));
        }
        Ok(Self { diag, offdiag, boundary })
    }

    /// Gauge-reduces complex off-diagonals to their moduli.
    pub fn from_complex(diag: Vec<f64>, offdiag: &[Complex64], boundary: Boundary) -> Result<Self> {
        Self::new(diag, offdiag.iter().map(|z| z.norm()).collect(), boundary)
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i] } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

/// Truncation along the orbit of `omega`, whole-line for invertible systems and
/// half-line otherwise.
pub fn build_truncation(
    system: &DynamicalSystem,
    spec: &CoefficientSpec,
    omega: &Point,
    n: usize,
) -> Result<JacobiTruncation> {
    let boundary = if system.is_invertible() { Boundary::WholeLine } else { Boundary::HalfLine };
    build_truncation_with(system, spec, omega, n, boundary)
}

pub fn build_truncation_with(
    system: &DynamicalSystem,
    spec: &CoefficientSpec,
    omega: &Point,
    n: usize,
    boundary: Boundary,
) -> Result<JacobiTruncation> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("truncation size {n} < 2")));
    }
    if boundary == Boundary::WholeLine && !system.is_invertible() {
        return Err(Error::NotInvertible("the circle doubling map"));
    }
    spec.validate(system)?;
    let start = match boundary {
        Boundary::HalfLine => omega.clone(),
        Boundary::WholeLine => {
            let back = system.orbit(omega, n / 2 + 1, Direction::Backward)?;
            back.points.last().expect("nonempty orbit").clone()
        }
    };
    let orbit = system.orbit(&start, n, Direction::Forward)?;
    let diag = orbit.points.iter().map(|w| spec.q.eval(system, w).map(|z| z.re)).collect::<Result<Vec<_>>>()?;
    let offdiag = orbit.points[..n - 1]
        .iter()
        .map(|w| spec.p.eval(system, w))
        .collect::<Result<Vec<_>>>()?;
    JacobiTruncation::from_complex(diag, &offdiag, boundary)
}

/// `#{λ ≤ e}` from the signs of the LDLᵀ pivots of `J − e`. The recurrence
/// restarts at zero off-diagonals; a vanishing pivot is replaced by `-pivmin`.
pub fn eig_count_leq(trunc: &JacobiTruncation, e: f64) -> usize {
    let max_b2 = trunc.offdiag.iter().fold(1.0f64, |m, b| m.max(b * b));
    let pivmin = f64::MIN_POSITIVE * max_b2;
    let mut count = 0;
    let mut d = 1.0;
    for (i, &a) in trunc.diag.iter().enumerate() {
        let b = if i == 0 { 0.0 } else { trunc.offdiag[i - 1] };
        d = if b == 0.0 { a - e } else { a - e - b * b / d };
        if d.abs() < pivmin || d == 0.0 {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn ids(trunc: &JacobiTruncation, e: f64) -> f64 {
    eig_count_leq(trunc, e) as f64 / trunc.n() as f64
}

/// All eigenvalues in ascending order, each to within [`EIGENVALUE_TOL`].
pub fn eigenvalues(trunc: &JacobiTruncation) -> Vec<f64> {
    let n = trunc.n();
    let (lo, hi) = trunc.gershgorin();
    let pad = EIGENVALUE_TOL + 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
    let (lo, hi) = (lo - pad, hi + pad);
    let mut out = Vec::with_capacity(n);
    bisect(trunc, lo, hi, 0, n, &mut out);
    out
}

const PARALLEL_SPLIT: usize = 64;

/// Eigenvalues in `(lo, hi]`, given `count(lo) = c_lo` and `count(hi) = c_hi`.
fn bisect(trunc: &JacobiTruncation, lo: f64, hi: f64, c_lo: usize, c_hi: usize, out: &mut Vec<f64>) {
    if c_hi == c_lo {
        return;
    }
    let mid = 0.5 * (lo + hi);
    if hi - lo <= EIGENVALUE_TOL || mid <= lo || mid >= hi {
        out.extend(std::iter::repeat_n(mid, c_hi - c_lo));
        return;
    }
    let c_mid = eig_count_leq(trunc, mid).clamp(c_lo, c_hi);
    if c_hi - c_lo > PARALLEL_SPLIT {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        rayon::join(
            || bisect(trunc, lo, mid, c_lo, c_mid, &mut left),
            || bisect(trunc, mid, hi, c_mid, c_hi, &mut right),
        );
        out.extend(left);
        out.extend(right);
    } else {
        bisect(trunc, lo, mid, c_lo, c_mid, out);
        bisect(trunc, mid, hi, c_mid, c_hi, out);
    }
}

/// A spacing `(e_lo, e_hi)` between consecutive eigenvalues with `below`
/// eigenvalues at or under `e_lo`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub e_lo: f64,
    pub e_hi: f64,
    pub below: usize,
    pub label: f64,
}

impl Gap {
    pub fn width(&self) -> f64 {
        self.e_hi - self.e_lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.e_lo + self.e_hi)
    }
}

/// `20 · (λ_max − λ_min) / N`.
pub fn default_min_width(eigs: &[f64]) -> f64 {
    match (eigs.first(), eigs.last()) {
        (Some(a), Some(b)) if eigs.len() > 1 => MIN_WIDTH_FACTOR * (b - a) / eigs.len() as f64,
        _ => f64::MIN_POSITIVE,
    }
}

/// Spacings of sorted `eigs` wider than `min_width`, labelled by the fraction
/// of eigenvalues below them.
pub fn detect_gaps(eigs: &[f64], min_width: f64) -> Result<Vec<Gap>> {
    if min_width.is_nan() || min_width <= 0.0 {
        return Err(Error::InvalidParameter(format!("min_width = {min_width} must be positive")));
    }
    let n = eigs.len() as f64;
    Ok(eigs
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] - w[0] > min_width)
        .map(|(i, w)| Gap { e_lo: w[0], e_hi: w[1], below: i + 1, label: (i + 1) as f64 / n })
        .collect())
}

/// Empirical IDS of sorted `eigs` on an energy grid.
pub fn ids_curve(eigs: &[f64], grid: &[f64]) -> Vec<(f64, f64)> {
    let n = eigs.len() as f64;
    grid.iter().map(|&e| (e, eigs.partition_point(|&x| x <= e) as f64 / n)).collect()
}

/// `points` equally spaced energies covering `[lo, hi]`.
pub fn energy_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect(),
    }
}

/// Writes `E,k(E)` rows.
pub fn write_ids_csv<W: Write>(mut w: W, curve: &[(f64, f64)]) -> std::io::Result<()> {
    writeln!(w, "E,k(E)")?;
    for (e, k) in curve {
        writeln!(w, "{e:.12},{k:.12}")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub e_lo: f64,
    pub e_hi: f64,
    pub width: f64,
    pub label: f64,
    pub below: usize,
    /// absolute uncertainty of the label from boundary effects
    pub label_tolerance: f64,
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub system: String,
    pub n: usize,
    pub boundary: Boundary,
    pub sample: Vec<f64>,
    pub eigenvalue_tolerance: f64,
    pub min_width: f64,
    pub label_tolerance: f64,
    pub membership_tolerance: Option<f64>,
    pub coeff_bound: Option<u32>,
    pub group: Option<LabelGroup>,
    pub gaps: Vec<GapRecord>,
    pub eigenvalues: Vec<f64>,
}

impl SpectralReport {
    /// Spectrum and gaps of `trunc`, with `min_width` defaulting to
    /// [`default_min_width`].
    pub fn analyze(system: &DynamicalSystem, sample: &Point, trunc: &JacobiTruncation, min_width: Option<f64>) -> Result<Self> {
        let eigs = eigenvalues(trunc);
        let min_width = min_width.unwrap_or_else(|| default_min_width(&eigs));
        let n = trunc.n();
        let label_tolerance = LABEL_TOL_FACTOR / n as f64;
        let gaps = detect_gaps(&eigs, min_width)?
            .into_iter()
            .map(|g| GapRecord {
                width: g.width(),
                e_lo: g.e_lo,
                e_hi: g.e_hi,
                label: g.label,
                below: g.below,
                label_tolerance,
                verdict: None,
            })
            .collect();
        Ok(SpectralReport {
            system: system.name().to_string(),
            n,
            boundary: trunc.boundary(),
            sample: sample.coords(),
            eigenvalue_tolerance: EIGENVALUE_TOL,
            min_width,
            label_tolerance,
            membership_tolerance: None,
            coeff_bound: None,
            group: None,
            gaps,
            eigenvalues: eigs,
        })
    }

    /// Gaps sorted by decreasing width.
    pub fn widest_gaps(&self) -> Vec<&GapRecord> {
        let mut v: Vec<&GapRecord> = self.gaps.iter().collect();
        v.sort_by(|a, b| b.width.total_cmp(&a.width));
        v
    }
}

/// Annotates each gap with its membership verdict in `group`.
pub fn verify_labels(mut report: SpectralReport, group: &LabelGroup, tol: f64, coeff_bound: u32) -> Result<SpectralReport> {
    for gap in &mut report.gaps {
        gap.verdict = Some(contains(group, gap.label, tol, coeff_bound)?);
    }
    report.membership_tolerance = Some(tol);
    report.coeff_bound = Some(coeff_bound);
    report.group = Some(group.clone());
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateStatus {
    Persistent,
    Spurious,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub n: usize,
    pub sample: usize,
    pub e_lo: f64,
    pub e_hi: f64,
    pub label: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub label: f64,
    pub observations: Vec<Observation>,
    pub status: CandidateStatus,
    pub reason: String,
    /// label farther than the tolerance at the largest size from every integer
    pub interior: bool,
    pub verdict: Option<Verdict>,
    pub contradiction: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub system: String,
    pub schedule: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub min_width: Option<f64>,
    pub label_tolerance_factor: f64,
    pub candidates: Vec<Candidate>,
}

impl ScanReport {
    pub fn contradictions(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.contradiction)
    }

    pub fn persistent_interior(&self) -> impl Iterator<Item = &Candidate> {
        self.candidates.iter().filter(|c| c.status == CandidateStatus::Persistent && c.interior)
    }
}

/// Ratio below which a monotonically shrinking gap counts as closing.
const SHRINK_RATIO: f64 = 0.75;

/// Tracks gaps over a schedule of sizes and `samples` starting points and
/// separates candidates that survive refinement from finite-size artefacts.
/// Sample `s` starts at `system.sample_ergodic(seed + s)`.
#[allow(clippy::too_many_arguments)]
pub fn connectedness_scan(
    system: &DynamicalSystem,
    spec: &CoefficientSpec,
    schedule: &[usize],
    min_width: Option<f64>,
    samples: usize,
    seed: u64,
    group: &LabelGroup,
    coeff_bound: u32,
) -> Result<ScanReport> {
    if schedule.is_empty() || samples == 0 {
        return Err(Error::InvalidParameter("empty size schedule or no samples".into()));
    }
    let mut schedule = schedule.to_vec();
    schedule.sort_unstable();
    schedule.dedup();
    let starts = (0..samples)
        .map(|s| system.sample_ergodic(seed.wrapping_add(s as u64)))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> =
        schedule.iter().flat_map(|&n| (0..samples).map(move |s| (n, s))).collect();
    let found = jobs
        .par_iter()
        .map(|&(n, s)| {
            let trunc = build_truncation(system, spec, &starts[s], n)?;
            let eigs = eigenvalues(&trunc);
            let w = min_width.unwrap_or_else(|| default_min_width(&eigs));
            Ok(detect_gaps(&eigs, w)?
                .into_iter()
                .map(|g| Observation { n, sample: s, e_lo: g.e_lo, e_hi: g.e_hi, label: g.label })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut tracks: Vec<Vec<Observation>> = Vec::new();
    for obs in found.into_iter().flatten() {
        let tol = LABEL_TOL_FACTOR / obs.n as f64;
        let home = tracks.iter_mut().find(|t| {
            let last = t.last().expect("tracks are nonempty");
            (last.label - obs.label).abs() <= tol.max(LABEL_TOL_FACTOR / last.n as f64)
                && last.e_lo <= obs.e_hi
                && obs.e_lo <= last.e_hi
        });
        match home {
            Some(t) => t.push(obs),
            None => tracks.push(vec![obs]),
        }
    }

    let n_max = *schedule.last().expect("nonempty schedule");
    let tol_max = LABEL_TOL_FACTOR / n_max as f64;
    let candidates = tracks
        .into_iter()
        .map(|observations| {
            let (status, reason) = classify(&observations, &schedule);
            let label = observations.iter().rev().find(|o| o.n == n_max).unwrap_or(&observations[0]).label;
            let interior = (label - label.round()).abs() > tol_max;
            let verdict = match status {
                CandidateStatus::Persistent => Some(contains(group, label, tol_max, coeff_bound)?),
                CandidateStatus::Spurious => None,
            };
            let contradiction = interior && verdict == Some(Verdict::NonMember);
            Ok(Candidate { label, observations, status, reason, interior, verdict, contradiction })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ScanReport {
        system: system.name().to_string(),
        schedule,
        samples,
        seed,
        min_width,
        label_tolerance_factor: LABEL_TOL_FACTOR,
        candidates,
    })
}

fn classify(obs: &[Observation], schedule: &[usize]) -> (CandidateStatus, String) {
    let n_max = *schedule.last().expect("nonempty schedule");
    if !obs.iter().any(|o| o.n == n_max) {
        return (CandidateStatus::Spurious, format!("absent at N = {n_max}"));
    }
    if obs.len() < 2 {
        return (CandidateStatus::Spurious, "seen once".into());
    }
    let (lo, hi) = obs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), o| (a.min(o.label), b.max(o.label)));
    let n_min = obs.iter().map(|o| o.n).min().expect("nonempty");
    if hi - lo > LABEL_TOL_FACTOR / n_min as f64 {
        return (CandidateStatus::Spurious, format!("label drifts over [{lo:.5}, {hi:.5}]"));
    }
    let mut mean_width: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for o in obs {
        let e = mean_width.entry(o.n).or_default();
        e.0 += o.e_hi - o.e_lo;
        e.1 += 1;
    }
    let widths: Vec<f64> = mean_width.values().map(|(s, c)| s / *c as f64).collect();
    if widths.len() >= 2 {
        let shrinking = widths.windows(2).all(|w| w[1] < w[0]);
        let ratio = widths[widths.len() - 1] / widths[0];
        if shrinking && ratio < SHRINK_RATIO {
            return (CandidateStatus::Spurious, format!("width shrinks with N (last/first = {ratio:.3})"));
        }
    }
    (CandidateStatus::Persistent, "stable label and width".into())
}
