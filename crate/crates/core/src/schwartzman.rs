//! Label groups of affine automorphisms and the winding-rate estimator.
//!
//! For `T_{A,b}` on a torus the label group is the union of `π⁻¹(χ(b))` over
//! characters `χ` fixed by the dual map `m ↦ Aᵀm`. It is stored through a
//! generating set: `1/Q` for the rational part and a list of real generators,
//! with a certificate recording which character produced each generator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intlin::{integer_kernel, IntMatrix, LatticeBasis};
use crate::solenoid::DyadicRational;
use crate::systems::{reduce_unit, DynamicalSystem, FiniteCyclicSystem, Point, Shift, TorusAffineSystem};

/// A character of the phase space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Character {
    /// `ω ↦ m·ω` on `𝕋^d` (also on `𝕋` for the doubling map)
    Torus(Vec<i64>),
    /// `ω ↦ mω/p` on `ℤ/pℤ`
    Residue(u64),
    /// `[r, z] ↦ a·x` for `a ∈ ℤ[1/2]` on the solenoid
    Dyadic(DyadicRational),
}

/// Value of a character at the translation `b`.
#[derive(Clone, Debug, PartialEq)]
pub enum CharValue {
    Exact(BigRational),
    Real(f64),
}

impl CharValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            CharValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            CharValue::Real(x) => *x,
        }
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharValue::Exact(q) => write!(f, "{q}"),
            CharValue::Real(x) => write!(f, "{x}"),
        }
    }
}

fn frac_exact(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl Character {
    pub fn zero_for(system: &DynamicalSystem) -> Character {
        match system {
            DynamicalSystem::TorusAffine(s) => Character::Torus(vec![0; s.dim()]),
            DynamicalSystem::FiniteCyclic(_) => Character::Residue(0),
            DynamicalSystem::CircleDoubling(_) => Character::Torus(vec![0]),
            DynamicalSystem::SolenoidDoubling(_) => Character::Dyadic(DyadicRational::new(0, 0)),
        }
    }

    fn mismatch(&self, system: &DynamicalSystem) -> Error {
        Error::InvalidObservable(format!("{self:?} is not a character of the {}", system.name()))
    }

    /// `χ(ω) ∈ [0, 1)`.
    pub fn eval(&self, system: &DynamicalSystem, point: &Point) -> Result<f64> {
        system.validate(point)?;
        match (self, system, point) {
            (Character::Torus(m), DynamicalSystem::TorusAffine(s), Point::Torus(w)) if m.len() == s.dim() => {
                Ok(reduce_unit(m.iter().zip(w).map(|(&k, &x)| (k as f64 * x).rem_euclid(1.0)).sum()))
            }
            (Character::Torus(m), DynamicalSystem::CircleDoubling(_), Point::Circle(e)) if m.len() == 1 => {
                Ok(reduce_unit(m[0] as f64 * e.to_f64()))
            }
            (Character::Residue(m), DynamicalSystem::FiniteCyclic(s), Point::Residue(w)) => {
                let p = s.modulus();
                let mw = (u128::from(*m % p) * u128::from(*w)) % u128::from(p);
                Ok(mw as f64 / p as f64)
            }
            (Character::Dyadic(a), DynamicalSystem::SolenoidDoubling(_), Point::Solenoid(p)) => a.eval(p),
            _ => Err(self.mismatch(system)),
        }
    }

    /// Whether `χ` lies in `ker(Â − I)`.
    pub fn is_fixed(&self, system: &DynamicalSystem) -> Result<bool> {
        match (self, system) {
            (Character::Torus(m), DynamicalSystem::TorusAffine(s)) if m.len() == s.dim() => {
                let mb: Vec<BigInt> = m.iter().map(|&x| BigInt::from(x)).collect();
                Ok(s.matrix().transpose().mul_vec(&mb)? == mb)
            }
            (Character::Torus(m), DynamicalSystem::CircleDoubling(_)) if m.len() == 1 => Ok(m[0] == 0),
            (Character::Residue(m), DynamicalSystem::FiniteCyclic(s)) => {
                let p = u128::from(s.modulus());
                let m = u128::from(*m);
                Ok((u128::from(s.multiplier()) * m) % p == m % p)
            }
            (Character::Dyadic(a), DynamicalSystem::SolenoidDoubling(_)) => Ok(a.is_fixed_by_doubling()),
            _ => Err(self.mismatch(system)),
        }
    }

    /// `χ(b)` for the translation part of the system.
    pub fn at_shift(&self, system: &DynamicalSystem) -> Result<CharValue> {
        match (self, system) {
            (Character::Torus(m), DynamicalSystem::TorusAffine(s)) if m.len() == s.dim() => {
                Ok(torus_char_at_shift(m, s.shift()))
            }
            (Character::Torus(m), DynamicalSystem::CircleDoubling(_)) if m.len() == 1 => {
                Ok(CharValue::Exact(BigRational::zero()))
            }
            (Character::Residue(m), DynamicalSystem::FiniteCyclic(s)) => Ok(CharValue::Exact(frac_exact(
                &BigRational::new(BigInt::from(*m) * s.offset(), BigInt::from(s.modulus())),
            ))),
            (Character::Dyadic(_), DynamicalSystem::SolenoidDoubling(_)) => {
                Ok(CharValue::Exact(BigRational::zero()))
            }
            _ => Err(self.mismatch(system)),
        }
    }
}

fn torus_char_at_shift(m: &[i64], shift: &[Shift]) -> CharValue {
    let mut exact = BigRational::zero();
    let mut real = 0.0;
    let mut has_real = false;
    for (&k, b) in m.iter().zip(shift) {
        if k == 0 {
            continue;
        }
        match b {
            Shift::Rational(q) => exact += q * BigInt::from(k),
            Shift::Real(x) => {
                has_real = true;
                real += (k as f64 * x).rem_euclid(1.0);
            }
        }
    }
    let exact = frac_exact(&exact);
    if has_real {
        CharValue::Real(reduce_unit(exact.to_f64().unwrap_or(0.0) + real))
    } else {
        CharValue::Exact(exact)
    }
}

/// Where a generator of a [`LabelGroup`] came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// fixed character, or `None` for groups not built from characters
    pub character: Option<Character>,
    /// `χ(b)` (or the generator) written exactly when possible
    pub value: String,
    pub note: String,
}

/// A finitely generated subgroup `(1/Q)ℤ + ℤg₁ + … + ℤg_k` of `ℝ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelGroup {
    denominator: u64,
    irrational: Vec<f64>,
    provenance: Vec<Provenance>,
}

#[derive(Serialize)]
struct LabelGroupJson<'a> {
    rational_collapse: Option<u64>,
    generators: Vec<f64>,
    provenance: &'a [Provenance],
}

impl LabelGroup {
    pub fn integers() -> LabelGroup {
        LabelGroup::rational(1, Vec::new())
    }

    /// `(1/Q)ℤ`.
    pub fn rational(denominator: u64, provenance: Vec<Provenance>) -> LabelGroup {
        assert!(denominator >= 1, "denominator must be positive");
        LabelGroup { denominator, irrational: Vec::new(), provenance }
    }

    /// Group generated by `1` and the given values of fixed characters.
    pub fn from_character_values(values: Vec<(Character, CharValue)>) -> Result<LabelGroup> {
        let mut denominator = BigInt::one();
        let mut irrational = Vec::new();
        let mut provenance = Vec::with_capacity(values.len());
        for (character, value) in values {
            let note = match &value {
                CharValue::Exact(q) => {
                    denominator = denominator.lcm(q.denom());
                    "rational".to_string()
                }
                CharValue::Real(x) => {
                    if *x != 0.0 && !irrational.contains(x) {
                        irrational.push(*x);
                    }
                    "real".to_string()
                }
            };
            provenance.push(Provenance { character: Some(character), value: value.to_string(), note });
        }
        let denominator = denominator.to_u64().ok_or(Error::Overflow(denominator))?;
        Ok(LabelGroup { denominator, irrational, provenance })
    }

    /// `Q` in `(1/Q)ℤ`.
    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn irrational_generators(&self) -> &[f64] {
        &self.irrational
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Discrete groups are exactly the rational collapses.
    pub fn is_discrete(&self) -> bool {
        self.irrational.is_empty()
    }

    pub fn rational_collapse(&self) -> Option<u64> {
        self.is_discrete().then_some(self.denominator)
    }

    /// `1/Q` followed by the real generators.
    pub fn generators(&self) -> Vec<f64> {
        std::iter::once(1.0 / self.denominator as f64).chain(self.irrational.iter().copied()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("label group serializes")
    }

    /// Exact equality of discrete groups; `None` when either group is dense.
    pub fn same_discrete_group(&self, other: &LabelGroup) -> Option<bool> {
        (self.is_discrete() && other.is_discrete()).then_some(self.denominator == other.denominator)
    }
}

impl Serialize for LabelGroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        LabelGroupJson {
            rational_collapse: self.rational_collapse(),
            generators: self.generators(),
            provenance: &self.provenance,
        }
        .serialize(serializer)
    }
}

impl fmt::Display for LabelGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "ℤ")?;
        } else {
            write!(f, "(1/{})ℤ", self.denominator)?;
        }
        for g in &self.irrational {
            write!(f, " + ℤ·{g}")?;
        }
        Ok(())
    }
}

/// `{m ∈ ℤ^d : Aᵀm = m}`.
pub fn fixed_character_lattice(sys: &TorusAffineSystem) -> Result<LatticeBasis> {
    let d = sys.dim();
    integer_kernel(&sys.matrix().transpose().sub(&IntMatrix::identity(d))?)
}

/// The label group of an ergodic affine torus map.
pub fn label_group(sys: &TorusAffineSystem) -> Result<LabelGroup> {
    label_group_from_basis(sys, &fixed_character_lattice(sys)?)
}

/// Same as [`label_group`], for an explicitly supplied basis of the fixed
/// lattice.
pub fn label_group_from_basis(sys: &TorusAffineSystem, basis: &LatticeBasis) -> Result<LabelGroup> {
    if basis.dim() != sys.dim() {
        return Err(Error::DimensionMismatch(format!(
            "basis of dimension {} for a {}-torus",
            basis.dim(),
            sys.dim()
        )));
    }
    let mut values = vec![(
        Character::Torus(vec![0; sys.dim()]),
        CharValue::Exact(BigRational::zero()),
    )];
    for m in basis.to_i64_vectors()? {
        let v = torus_char_at_shift(&m, sys.shift());
        values.push((Character::Torus(m), v));
    }
    LabelGroup::from_character_values(values)
}

/// `(1/#supp μ)ℤ` for a finite system.
pub fn finite_label_group(sys: &FiniteCyclicSystem) -> LabelGroup {
    let p = sys.support().len() as u64;
    LabelGroup::rational(
        p,
        vec![Provenance {
            character: None,
            value: format!("1/{p}"),
            note: format!("orbit of length {p} supporting the ergodic measure"),
        }],
    )
}

/// `⋃_{m : Am ≡ m} π⁻¹(mb/p)`: the character formula applied to `ℤ/pℤ`,
/// which need not equal the label group since `ℤ/pℤ` is disconnected.
pub fn finite_rhs_group(modulus: u64, multiplier: u64, offset: u64) -> Result<LabelGroup> {
    if modulus == 0 || multiplier.gcd(&modulus) != 1 {
        return Err(Error::InvalidSystem(format!("A = {multiplier} is not a unit modulo {modulus}")));
    }
    if offset >= modulus {
        return Err(Error::InvalidSystem(format!("b = {offset} out of range for p = {modulus}")));
    }
    let p = u128::from(modulus);
    let values = (0..modulus)
        .filter(|&m| (u128::from(multiplier) * u128::from(m)) % p == u128::from(m))
        .map(|m| {
            let v = frac_exact(&BigRational::new(BigInt::from(m) * offset, BigInt::from(modulus)));
            (Character::Residue(m), CharValue::Exact(v))
        })
        .collect();
    LabelGroup::from_character_values(values)
}

/// Fixed characters of the solenoid doubling map. The dual group is `ℤ[1/2]`
/// with `Â a = 2a`, and `2a = a` forces `a = 0`, so the basis is empty.
pub fn solenoid_fixed_dual() -> LatticeBasis {
    LatticeBasis::empty(1)
}

/// Nonzero `a = k/2ⁿ` with `|k| ≤ max_num`, `n ≤ max_exp` fixed by doubling.
pub fn dyadic_fixed_sweep(max_num: i64, max_exp: u32) -> Vec<DyadicRational> {
    (0..=max_exp)
        .flat_map(|n| (-max_num..=max_num).map(move |k| DyadicRational::new(k, n)))
        .filter(|a| !a.is_zero() && a.is_fixed_by_doubling())
        .collect()
}

pub fn solenoid_label_group() -> LabelGroup {
    debug_assert!(solenoid_fixed_dual().is_empty());
    LabelGroup::rational(
        1,
        vec![Provenance {
            character: Some(Character::Dyadic(DyadicRational::new(0, 0))),
            value: "0".into(),
            note: "only the trivial character of ℤ[1/2] is fixed by doubling".into(),
        }],
    )
}

/// Label group of the canonical ergodic measure on `system`. The circle
/// doubling map inherits the solenoid's group through its natural extension.
pub fn label_group_for(system: &DynamicalSystem) -> Result<LabelGroup> {
    match system {
        DynamicalSystem::TorusAffine(s) => label_group(s),
        DynamicalSystem::FiniteCyclic(s) => Ok(finite_label_group(s)),
        DynamicalSystem::CircleDoubling(_) | DynamicalSystem::SolenoidDoubling(_) => Ok(solenoid_label_group()),
    }
}

/// Integer coefficients certifying `x ≈ c₀/Q + Σ cᵢgᵢ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub rational: i64,
    pub denominator: u64,
    pub coefficients: Vec<i64>,
    pub residual: f64,
}

impl Witness {
    pub fn value(&self, group: &LabelGroup) -> f64 {
        self.rational as f64 / self.denominator as f64
            + self.coefficients.iter().zip(&group.irrational).map(|(&c, g)| c as f64 * g).sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    Member { witness: Witness },
    NonMember,
    /// no witness within the coefficient bound; dense groups cannot be refuted
    Inconclusive,
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member { .. })
    }
}

const MAX_SEARCH: u128 = 50_000_000;

/// Membership of `x` in `group`, up to `tol`, searching coefficients of the
/// real generators in `[-coeff_bound, coeff_bound]`.
pub fn contains(group: &LabelGroup, x: f64, tol: f64, coeff_bound: u32) -> Result<Verdict> {
    if tol.is_nan() || tol <= 0.0 || coeff_bound < 1 || !x.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "need tol > 0, coeff_bound ≥ 1 and finite x (tol = {tol}, coeff_bound = {coeff_bound}, x = {x})"
        )));
    }
    let q = group.denominator as f64;
    let k = group.irrational.len();
    let side = 2 * u128::from(coeff_bound) + 1;
    if side.checked_pow(k as u32).is_none_or(|n| n > MAX_SEARCH) {
        return Err(Error::InvalidParameter(format!(
            "search space (2·{coeff_bound}+1)^{k} too large"
        )));
    }

    let b = i64::from(coeff_bound);
    let mut coeffs = vec![-b; k];
    let mut best: Option<(f64, i64, Witness)> = None;
    loop {
        let rest = x - coeffs.iter().zip(&group.irrational).map(|(&c, g)| c as f64 * g).sum::<f64>();
        let c0 = (rest * q).round();
        let residual = (rest - c0 / q).abs();
        let norm: i64 = coeffs.iter().map(|c| c.abs()).sum();
        let better = match &best {
            None => true,
            Some((r, n, _)) => residual < r - 1e-12 || ((residual - r).abs() <= 1e-12 && norm < *n),
        };
        if better {
            let witness = Witness {
                rational: c0 as i64,
                denominator: group.denominator,
                coefficients: coeffs.clone(),
                residual,
            };
            best = Some((residual, norm, witness));
        }
        // odometer over [-b, b]^k
        let mut i = 0;
        while i < k {
            if coeffs[i] < b {
                coeffs[i] += 1;
                break;
            }
            coeffs[i] = -b;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    let (residual, _, witness) = best.expect("at least one candidate");
    Ok(if residual < tol {
        Verdict::Member { witness }
    } else if group.is_discrete() {
        Verdict::NonMember
    } else {
        Verdict::Inconclusive
    })
}

/// A map from the suspension to `𝕋`, evaluated at `[ω, t]` with `t ∈ [0, 1)`.
pub trait CircleMap {
    fn eval(&self, system: &DynamicalSystem, point: &Point, t: f64) -> Result<f64>;
}

/// Adapter turning a closure `(ω, t) ↦ value` into a [`CircleMap`].
pub struct PhaseFn<F>(pub F);

impl<F> CircleMap for PhaseFn<F>
where
    F: Fn(&Point, f64) -> f64,
{
    fn eval(&self, _system: &DynamicalSystem, point: &Point, t: f64) -> Result<f64> {
        Ok(reduce_unit((self.0)(point, t)))
    }
}

/// `g_{χ,β}([ω, t]) = χ(ω) + βt mod 1`, well defined when `χ` is fixed and
/// `β ≡ χ(b) mod 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuspensionObservable {
    character: Character,
    beta: f64,
}

impl SuspensionObservable {
    pub const WELL_DEFINED_TOL: f64 = 1e-9;

    pub fn new(system: &DynamicalSystem, character: Character, beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidObservable(format!("β = {beta}")));
        }
        if !character.is_fixed(system)? {
            return Err(Error::InvalidObservable(format!(
                "{character:?} is not fixed by the dual map, so g is not well defined"
            )));
        }
        let at_b = character.at_shift(system)?.to_f64();
        let off = beta - at_b;
        if (off - off.round()).abs() > Self::WELL_DEFINED_TOL {
            return Err(Error::InvalidObservable(format!(
                "β = {beta} is not congruent to χ(b) = {at_b} mod 1"
            )));
        }
        Ok(Self { character, beta })
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl CircleMap for SuspensionObservable {
    fn eval(&self, system: &DynamicalSystem, point: &Point, t: f64) -> Result<f64> {
        Ok(reduce_unit(self.character.eval(system, point)? + (self.beta * t).rem_euclid(1.0)))
    }
}

/// On a finite system, `[ω, t] ↦ k·(index of ω along the orbit + t)/#orbit`:
/// winds `k` times around one full period of the suspension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitPhase {
    pub windings: i64,
}

impl CircleMap for OrbitPhase {
    fn eval(&self, system: &DynamicalSystem, point: &Point, t: f64) -> Result<f64> {
        let (DynamicalSystem::FiniteCyclic(s), Point::Residue(w)) = (system, point) else {
            return Err(Error::InvalidObservable("orbit phase needs a finite system".into()));
        };
        let idx = s
            .orbit_index(*w)
            .ok_or_else(|| Error::InvalidPoint(format!("residue {w} is outside the supporting orbit")))?;
        let len = s.support().len() as f64;
        Ok(reduce_unit(self.windings as f64 * (idx as f64 + t) / len))
    }
}

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_T_MAX: f64 = 1000.0;
/// Largest sampled phase increment accepted by the unwrapper; anything larger
/// is ambiguous modulo 1.
pub const MAX_PHASE_STEP: f64 = 0.25;

/// Average winding rate `g̃(T)/T` of `map` along the suspension orbit of `[ω, 0]`.
pub fn schwartzman_estimate<M: CircleMap + ?Sized>(
    system: &DynamicalSystem,
    map: &M,
    start: &Point,
    t_max: f64,
    dt: f64,
) -> Result<f64> {
    if !system.is_invertible() {
        return Err(Error::NotInvertible("the circle doubling map"));
    }
    if !(dt > 0.0 && t_max > 0.0 && t_max.is_finite() && dt <= t_max) {
        return Err(Error::InvalidParameter(format!("need 0 < dt ≤ T_max, got dt = {dt}, T_max = {t_max}")));
    }
    system.validate(start)?;
    let steps = (t_max / dt).round() as u64;
    let mut current = start.clone();
    let mut floor_t: u64 = 0;
    let mut prev = map.eval(system, &current, 0.0)?;
    let mut lift = 0.0;
    for k in 1..=steps {
        let t = k as f64 * dt;
        let n = t.floor() as u64;
        while floor_t < n {
            current = system.step(&current)?;
            floor_t += 1;
        }
        let v = map.eval(system, &current, t - n as f64)?;
        let mut jump = v - prev;
        jump -= jump.round();
        if jump.abs() > MAX_PHASE_STEP {
            return Err(Error::PhaseJump { t, jump });
        }
        lift += jump;
        prev = v;
    }
    Ok(lift / (steps as f64 * dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{CircleDoublingSystem, Shift};

    fn golden() -> f64 {
        (5f64.sqrt() - 1.0) / 2.0
    }

    fn rotation(b: Vec<Shift>) -> TorusAffineSystem {
        TorusAffineSystem::rotation(b).unwrap()
    }

    #[test]
    fn identity_fixes_everything() {
        let basis = fixed_character_lattice(&rotation(vec![Shift::Real(0.1), Shift::Real(0.2)])).unwrap();
        assert_eq!(basis.to_i64_vectors().unwrap(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn cat_map_group_is_integers() {
        let cat = TorusAffineSystem::from_i64(&[vec![2, 1], vec![1, 1]], vec![Shift::Real(0.3), Shift::Real(0.7)])
            .unwrap();
        assert!(fixed_character_lattice(&cat).unwrap().is_empty());
        let g = label_group(&cat).unwrap();
        assert_eq!(g.rational_collapse(), Some(1));
        assert_eq!(g.to_string(), "ℤ");
    }

    #[test]
    fn shear_has_rank_one_fixed_lattice() {
        let s = TorusAffineSystem::from_i64(&[vec![1, 0], vec![1, 1]], vec![Shift::Real(0.3), Shift::Real(0.0)])
            .unwrap();
        assert_eq!(fixed_character_lattice(&s).unwrap().to_i64_vectors().unwrap(), vec![vec![1, 0]]);
        let g = label_group(&s).unwrap();
        assert_eq!(g.irrational_generators(), &[0.3]);
    }

    #[test]
    fn rotation_groups() {
        let g = label_group(&rotation(vec![Shift::Real(golden())])).unwrap();
        assert_eq!(g.denominator(), 1);
        assert_eq!(g.irrational_generators(), &[golden()]);

        let g = label_group(&rotation(vec![Shift::rational(1, 3)])).unwrap();
        assert_eq!(g.rational_collapse(), Some(3));
        assert_eq!(g.to_string(), "(1/3)ℤ");

        let g = label_group(&rotation(vec![Shift::rational(1, 4), Shift::rational(5, 6)])).unwrap();
        assert_eq!(g.rational_collapse(), Some(12));
    }

    #[test]
    fn finite_groups() {
        let s = FiniteCyclicSystem::new(3, 2, 0, &[1, 2]).unwrap();
        assert_eq!(finite_label_group(&s).rational_collapse(), Some(2));
        let fixed = FiniteCyclicSystem::new(3, 2, 0, &[0]).unwrap();
        assert_eq!(finite_label_group(&fixed).rational_collapse(), Some(1));
        let s = FiniteCyclicSystem::from_orbit(5, 2, 0, 1).unwrap();
        assert_eq!(finite_label_group(&s).rational_collapse(), Some(4));
    }

    #[test]
    fn finite_rhs_groups() {
        assert_eq!(finite_rhs_group(3, 2, 0).unwrap().rational_collapse(), Some(1));
        assert_eq!(finite_rhs_group(5, 1, 1).unwrap().rational_collapse(), Some(5));
        // fixed residues {0, 2}; with b = 0 every χ(b) vanishes
        assert_eq!(finite_rhs_group(4, 3, 0).unwrap().rational_collapse(), Some(1));
        assert_eq!(finite_rhs_group(4, 3, 1).unwrap().rational_collapse(), Some(2));
        assert!(finite_rhs_group(4, 2, 0).is_err());
    }

    #[test]
    fn solenoid_dual_is_trivial() {
        assert!(solenoid_fixed_dual().is_empty());
        assert!(!DyadicRational::new(3, 2).is_fixed_by_doubling());
        assert!(dyadic_fixed_sweep(64, 6).is_empty());
        assert_eq!(solenoid_label_group().rational_collapse(), Some(1));
    }

    #[test]
    fn membership_examples() {
        let z = LabelGroup::integers();
        assert_eq!(contains(&z, 0.5, 1e-3, 1).unwrap(), Verdict::NonMember);

        let half = LabelGroup::rational(2, vec![]);
        let Verdict::Member { witness } = contains(&half, 0.5, 1e-3, 1).unwrap() else {
            panic!("0.5 ∈ ½ℤ")
        };
        assert_eq!((witness.rational, witness.denominator), (1, 2));

        let dense = label_group(&rotation(vec![Shift::Real(golden())])).unwrap();
        let Verdict::Member { witness } = contains(&dense, 0.381966, 1e-5, 10).unwrap() else {
            panic!("1 − α ∈ ℤ + ℤα")
        };
        assert_eq!((witness.rational, witness.coefficients.as_slice()), (1, &[-1][..]));
        assert!((witness.value(&dense) - 0.381966).abs() < 1e-5);

        assert_eq!(contains(&dense, 0.2, 1e-6, 3).unwrap(), Verdict::Inconclusive);
        assert!(contains(&dense, 0.2, 0.0, 3).is_err());
        assert!(contains(&dense, 0.2, 1e-3, 0).is_err());
    }

    #[test]
    fn group_json_shape() {
        let g = label_group(&rotation(vec![Shift::rational(1, 3)])).unwrap();
        let v = g.to_json();
        assert_eq!(v["rational_collapse"], 3);
        assert_eq!(v["generators"].as_array().unwrap().len(), 1);
        assert_eq!(v["provenance"].as_array().unwrap().len(), 2);
        assert_eq!(v["provenance"][1]["value"], "1/3");

        let dense = label_group(&rotation(vec![Shift::Real(0.25f64.sqrt() / 3.0)])).unwrap();
        assert!(dense.to_json()["rational_collapse"].is_null());
    }

    #[test]
    fn observables_must_be_well_defined() {
        let sys: DynamicalSystem = rotation(vec![Shift::Real(0.3)]).into();
        assert!(SuspensionObservable::new(&sys, Character::Torus(vec![1]), 1.3).is_ok());
        assert!(SuspensionObservable::new(&sys, Character::Torus(vec![1]), 0.5).is_err());

        let cat: DynamicalSystem =
            TorusAffineSystem::from_i64(&[vec![2, 1], vec![1, 1]], vec![Shift::Real(0.0); 2]).unwrap().into();
        let err = SuspensionObservable::new(&cat, Character::Torus(vec![1, 0]), 0.0);
        assert!(matches!(err, Err(Error::InvalidObservable(_))));
    }

    #[test]
    fn estimate_constant_and_winding() {
        let sys: DynamicalSystem = rotation(vec![Shift::Real(0.3)]).into();
        let start = Point::Torus(vec![0.1]);
        let constant = PhaseFn(|_: &Point, _| 0.25);
        assert_eq!(schwartzman_estimate(&sys, &constant, &start, 100.0, 0.01).unwrap(), 0.0);

        let g = SuspensionObservable::new(&sys, Character::Torus(vec![0]), 2.0).unwrap();
        let est = schwartzman_estimate(&sys, &g, &start, 1000.0, 0.01).unwrap();
        assert!((est - 2.0).abs() <= 2.0 / 1000.0);
    }

    #[test]
    fn estimate_rejects_coarse_steps_and_doubling() {
        let sys: DynamicalSystem = rotation(vec![Shift::Real(0.0)]).into();
        let g = SuspensionObservable::new(&sys, Character::Torus(vec![0]), 60.0).unwrap();
        let err = schwartzman_estimate(&sys, &g, &Point::Torus(vec![0.0]), 10.0, 0.01);
        assert!(matches!(err, Err(Error::PhaseJump { .. })));

        let dbl: DynamicalSystem = CircleDoublingSystem.into();
        let err = schwartzman_estimate(&dbl, &PhaseFn(|_: &Point, t| t), &Point::circle(0.2), 10.0, 0.01);
        assert!(matches!(err, Err(Error::NotInvertible(_))));
    }

    #[test]
    fn finite_two_cycle_winds_at_half() {
        let sys: DynamicalSystem = FiniteCyclicSystem::new(3, 2, 0, &[1, 2]).unwrap().into();
        let est = schwartzman_estimate(&sys, &OrbitPhase { windings: 1 }, &Point::Residue(1), 1000.0, 0.01)
            .unwrap();
        assert!((est - 0.5).abs() < 1e-3);
    }
}
