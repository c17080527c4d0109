//! Dynamical systems: affine torus maps, affine maps of `ℤ/pℤ`, the circle
//! doubling map, and the doubling map on the dyadic solenoid.
//!
//! Ergodicity of a torus map `ω ↦ Aω + b` is asserted by the caller, never
//! checked. Classical sufficient conditions: `A = I` with `1, b₁, …, b_d`
//! rationally independent, or `A` with no root of unity among its eigenvalues
//! (e.g. hyperbolic `A`).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::intlin::IntMatrix;
use crate::solenoid::{self, Dyadic, SolPointS1};

/// Digits drawn for a Lebesgue-random point of the doubling map; enough for
/// half-line truncations up to `N = 10⁵`.
pub const DOUBLING_SAMPLE_BITS: usize = 1 << 17;

/// One coordinate of a torus translation, either exact or real.
#[derive(Clone, Debug, PartialEq)]
pub enum Shift {
    Rational(BigRational),
    Real(f64),
}

impl Shift {
    pub fn rational(num: i64, den: i64) -> Shift {
        Shift::Rational(BigRational::new(num.into(), den.into()))
    }

    fn reduced(self) -> Shift {
        match self {
            Shift::Rational(q) => Shift::Rational(&q - q.floor()),
            Shift::Real(x) => Shift::Real(reduce_unit(x)),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Shift::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Shift::Real(x) => *x,
        }
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shift::Rational(q) => write!(f, "{q}"),
            Shift::Real(x) => write!(f, "{x}"),
        }
    }
}

/// `x mod 1` in `[0, 1)`, guarding against `rem_euclid` rounding up to 1.
pub(crate) fn reduce_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 { 0.0 } else { r }
}

/// `T_{A,b}: ω ↦ Aω + b` on `𝕋^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusAffineSystem {
    matrix: IntMatrix,
    inverse: IntMatrix,
    shift: Vec<Shift>,
    ergodic_hint: bool,
    matrix_f: Vec<Vec<f64>>,
    inverse_f: Vec<Vec<f64>>,
    shift_f: Vec<f64>,
}

impl TorusAffineSystem {
    pub fn new(matrix: IntMatrix, shift: Vec<Shift>, ergodic_hint: bool) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidSystem(format!(
                "torus matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if shift.len() != matrix.rows() {
            return Err(Error::InvalidSystem(format!(
                "shift has {} coordinates for a {}-torus",
                shift.len(),
                matrix.rows()
            )));
        }
        if shift.iter().any(|s| matches!(s, Shift::Real(x) if !x.is_finite())) {
            return Err(Error::InvalidSystem("shift coordinates must be finite".into()));
        }
        let inverse = matrix.inverse_unimodular().map_err(|e| match e {
            Error::NotUnimodular(d) => {
                Error::InvalidSystem(format!("|det A| must be 1 for an automorphism, det = {d}"))
            }
            other => other,
        })?;
        let shift: Vec<Shift> = shift.into_iter().map(Shift::reduced).collect();
        Ok(Self {
            matrix_f: matrix.to_f64_rows(),
            inverse_f: inverse.to_f64_rows(),
            shift_f: shift.iter().map(Shift::to_f64).collect(),
            matrix,
            inverse,
            shift,
            ergodic_hint,
        })
    }

    pub fn from_i64(matrix: &[Vec<i64>], shift: Vec<Shift>) -> Result<Self> {
        Self::new(IntMatrix::from_rows(matrix)?, shift, true)
    }

    /// Translation `ω ↦ ω + b`.
    pub fn rotation(shift: Vec<Shift>) -> Result<Self> {
        Self::new(IntMatrix::identity(shift.len().max(1)), shift, true)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &IntMatrix {
        &self.inverse
    }

    pub fn shift(&self) -> &[Shift] {
        &self.shift
    }

    pub fn shift_f64(&self) -> &[f64] {
        &self.shift_f
    }

    pub fn ergodic_hint(&self) -> bool {
        self.ergodic_hint
    }

    fn apply(&self, rows: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
        rows.iter()
            .map(|row| reduce_unit(row.iter().zip(w).map(|(a, x)| (a * x).rem_euclid(1.0)).sum()))
            .collect()
    }

    fn forward(&self, w: &[f64]) -> Vec<f64> {
        let aw = self.apply(&self.matrix_f, w);
        aw.iter().zip(&self.shift_f).map(|(x, b)| reduce_unit(x + b)).collect()
    }

    fn backward(&self, w: &[f64]) -> Vec<f64> {
        let shifted: Vec<f64> = w.iter().zip(&self.shift_f).map(|(x, b)| reduce_unit(x - b)).collect();
        self.apply(&self.inverse_f, &shifted)
    }
}

/// `ω ↦ Aω + b` on `ℤ/pℤ`, restricted to the support of an ergodic measure
/// (a single orbit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCyclicSystem {
    modulus: u64,
    multiplier: u64,
    offset: u64,
    /// the supporting orbit, in orbit order
    support: Vec<u64>,
}

impl FiniteCyclicSystem {
    pub fn new(modulus: u64, multiplier: u64, offset: u64, support: &[u64]) -> Result<Self> {
        Self::check_map(modulus, multiplier, offset)?;
        let Some(&base) = support.first() else {
            return Err(Error::InvalidSystem("support must be nonempty".into()));
        };
        if let Some(bad) = support.iter().find(|&&w| w >= modulus) {
            return Err(Error::InvalidSystem(format!("residue {bad} out of range for p = {modulus}")));
        }
        let sys = Self::from_orbit(modulus, multiplier, offset, base)?;
        let mut given = support.to_vec();
        given.sort_unstable();
        given.dedup();
        let mut orbit = sys.support.clone();
        orbit.sort_unstable();
        if given != orbit {
            return Err(Error::InvalidSystem(format!(
                "support {support:?} is not a single orbit (orbit of {base} is {:?})",
                sys.support
            )));
        }
        Ok(sys)
    }

    /// Support = orbit of `base`.
    pub fn from_orbit(modulus: u64, multiplier: u64, offset: u64, base: u64) -> Result<Self> {
        Self::check_map(modulus, multiplier, offset)?;
        if base >= modulus {
            return Err(Error::InvalidSystem(format!("residue {base} out of range for p = {modulus}")));
        }
        let mut support = vec![base];
        let mut w = Self::apply(modulus, multiplier, offset, base);
        while w != base {
            support.push(w);
            w = Self::apply(modulus, multiplier, offset, w);
        }
        Ok(Self { modulus, multiplier, offset, support })
    }

    fn check_map(modulus: u64, multiplier: u64, offset: u64) -> Result<()> {
        if modulus == 0 {
            return Err(Error::InvalidSystem("modulus must be at least 1".into()));
        }
        if multiplier.gcd(&modulus) != 1 {
            return Err(Error::InvalidSystem(format!(
                "A = {multiplier} is not a unit modulo {modulus}"
            )));
        }
        if offset >= modulus {
            return Err(Error::InvalidSystem(format!("b = {offset} out of range for p = {modulus}")));
        }
        Ok(())
    }

    fn apply(modulus: u64, multiplier: u64, offset: u64, w: u64) -> u64 {
        ((u128::from(multiplier) * u128::from(w) + u128::from(offset)) % u128::from(modulus)) as u64
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    /// Position of `w` along the supporting orbit.
    pub fn orbit_index(&self, w: u64) -> Option<usize> {
        self.support.iter().position(|&s| s == w)
    }

    fn forward(&self, w: u64) -> u64 {
        Self::apply(self.modulus, self.multiplier, self.offset, w)
    }

    fn backward(&self, w: u64) -> u64 {
        let p = BigInt::from(self.modulus);
        let inv = BigInt::from(self.multiplier).extended_gcd(&p).x.mod_floor(&p);
        let diff = (BigInt::from(w) - BigInt::from(self.offset)).mod_floor(&p);
        (inv * diff).mod_floor(&p).to_u64().expect("residue fits")
    }
}

/// `ω ↦ 2ω` on `𝕋`. Not invertible: only half-line operators exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CircleDoublingSystem;

/// The doubling map `T₁[r, z] = [2r, 2z]` on the solenoid `S1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolenoidSystem {
    pub width: u32,
}

impl Default for SolenoidSystem {
    fn default() -> Self {
        Self { width: solenoid::DEFAULT_WIDTH }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DynamicalSystem {
    TorusAffine(TorusAffineSystem),
    FiniteCyclic(FiniteCyclicSystem),
    CircleDoubling(CircleDoublingSystem),
    SolenoidDoubling(SolenoidSystem),
}

impl From<TorusAffineSystem> for DynamicalSystem {
    fn from(s: TorusAffineSystem) -> Self {
        DynamicalSystem::TorusAffine(s)
    }
}

impl From<FiniteCyclicSystem> for DynamicalSystem {
    fn from(s: FiniteCyclicSystem) -> Self {
        DynamicalSystem::FiniteCyclic(s)
    }
}

impl From<CircleDoublingSystem> for DynamicalSystem {
    fn from(s: CircleDoublingSystem) -> Self {
        DynamicalSystem::CircleDoubling(s)
    }
}

impl From<SolenoidSystem> for DynamicalSystem {
    fn from(s: SolenoidSystem) -> Self {
        DynamicalSystem::SolenoidDoubling(s)
    }
}

/// Binary expansion `0.d₀d₁d₂…` of a point of `𝕋`, read from digit `shift` on.
/// Doubling drops the leading digit, so orbits of the doubling map stay exact
/// for as many steps as there are stored digits.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryExpansion {
    words: Arc<[u64]>,
    shift: usize,
}

impl BinaryExpansion {
    pub fn from_f64(x: f64) -> BinaryExpansion {
        let x = reduce_unit(x);
        let word = (x * 18_446_744_073_709_551_616.0) as u64; // x · 2^64
        BinaryExpansion { words: Arc::from(vec![word]), shift: 0 }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, bits: usize) -> BinaryExpansion {
        let words: Vec<u64> = (0..bits.div_ceil(64)).map(|_| rng.random()).collect();
        BinaryExpansion { words: Arc::from(words), shift: 0 }
    }

    /// Digits remaining before the expansion runs out (all zeros after).
    pub fn remaining_digits(&self) -> usize {
        (self.words.len() * 64).saturating_sub(self.shift)
    }

    fn word_at(&self, bit: usize) -> u64 {
        let (i, off) = (bit / 64, bit % 64);
        let hi = self.words.get(i).copied().unwrap_or(0);
        if off == 0 {
            return hi;
        }
        let lo = self.words.get(i + 1).copied().unwrap_or(0);
        (hi << off) | (lo >> (64 - off))
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.word_at(self.shift) as f64 / 18_446_744_073_709_551_616.0;
        if v >= 1.0 { 0.0 } else { v }
    }

    pub fn doubled(&self) -> BinaryExpansion {
        BinaryExpansion { words: Arc::clone(&self.words), shift: self.shift + 1 }
    }
}

impl fmt::Debug for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryExpansion({}, {} digits left)", self.to_f64(), self.remaining_digits())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Torus(Vec<f64>),
    Residue(u64),
    Circle(BinaryExpansion),
    Solenoid(SolPointS1),
}

impl Point {
    pub fn circle(x: f64) -> Point {
        Point::Circle(BinaryExpansion::from_f64(x))
    }

    /// Real coordinates for reporting.
    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::Torus(w) => w.clone(),
            Point::Residue(w) => vec![*w as f64],
            Point::Circle(e) => vec![e.to_f64()],
            Point::Solenoid(p) => vec![p.r()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// `ω, Tω, …, T^{N−1}ω` (or the backward iterates).
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSample {
    pub direction: Direction,
    pub points: Vec<Point>,
}

impl OrbitSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl DynamicalSystem {
    pub fn name(&self) -> &'static str {
        match self {
            DynamicalSystem::TorusAffine(_) => "torus affine map",
            DynamicalSystem::FiniteCyclic(_) => "finite cyclic affine map",
            DynamicalSystem::CircleDoubling(_) => "circle doubling map",
            DynamicalSystem::SolenoidDoubling(_) => "solenoid doubling map",
        }
    }

    pub fn is_invertible(&self) -> bool {
        !matches!(self, DynamicalSystem::CircleDoubling(_))
    }

    /// Checks that `point` belongs to this system's phase space.
    pub fn validate(&self, point: &Point) -> Result<()> {
        match (self, point) {
            (DynamicalSystem::TorusAffine(s), Point::Torus(w)) => {
                if w.len() != s.dim() {
                    return Err(Error::InvalidPoint(format!(
                        "{} coordinates on a {}-torus",
                        w.len(),
                        s.dim()
                    )));
                }
                if w.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidPoint("non-finite torus coordinate".into()));
                }
                Ok(())
            }
            (DynamicalSystem::FiniteCyclic(s), Point::Residue(w)) => {
                if *w >= s.modulus {
                    Err(Error::InvalidPoint(format!("residue {w} out of range for p = {}", s.modulus)))
                } else {
                    Ok(())
                }
            }
            (DynamicalSystem::CircleDoubling(_), Point::Circle(_)) => Ok(()),
            (DynamicalSystem::SolenoidDoubling(s), Point::Solenoid(p)) => {
                if p.z().width() != s.width {
                    Err(Error::InvalidPoint(format!(
                        "solenoid point of width {} for a width-{} system",
                        p.z().width(),
                        s.width
                    )))
                } else {
                    Ok(())
                }
            }
            (sys, p) => Err(Error::InvalidPoint(format!("{p:?} is not a point of the {}", sys.name()))),
        }
    }

    pub fn step(&self, point: &Point) -> Result<Point> {
        self.validate(point)?;
        Ok(match (self, point) {
            (DynamicalSystem::TorusAffine(s), Point::Torus(w)) => {
                let w: Vec<f64> = w.iter().copied().map(reduce_unit).collect();
                Point::Torus(s.forward(&w))
            }
            (DynamicalSystem::FiniteCyclic(s), Point::Residue(w)) => Point::Residue(s.forward(*w)),
            (DynamicalSystem::CircleDoubling(_), Point::Circle(e)) => Point::Circle(e.doubled()),
            (DynamicalSystem::SolenoidDoubling(_), Point::Solenoid(p)) => Point::Solenoid(p.double()),
            _ => unreachable!("validated above"),
        })
    }

    pub fn step_inverse(&self, point: &Point) -> Result<Point> {
        self.validate(point)?;
        Ok(match (self, point) {
            (DynamicalSystem::TorusAffine(s), Point::Torus(w)) => {
                let w: Vec<f64> = w.iter().copied().map(reduce_unit).collect();
                Point::Torus(s.backward(&w))
            }
            (DynamicalSystem::FiniteCyclic(s), Point::Residue(w)) => Point::Residue(s.backward(*w)),
            (DynamicalSystem::CircleDoubling(_), _) => {
                return Err(Error::NotInvertible("the circle doubling map"))
            }
            (DynamicalSystem::SolenoidDoubling(_), Point::Solenoid(p)) => Point::Solenoid(p.halve()),
            _ => unreachable!("validated above"),
        })
    }

    pub fn orbit(&self, start: &Point, len: usize, direction: Direction) -> Result<OrbitSample> {
        self.validate(start)?;
        if direction == Direction::Backward && !self.is_invertible() {
            return Err(Error::NotInvertible("the circle doubling map"));
        }
        let mut points = Vec::with_capacity(len);
        let mut current = start.clone();
        for i in 0..len {
            if i + 1 < len {
                let next = match direction {
                    Direction::Forward => self.step(&current)?,
                    Direction::Backward => self.step_inverse(&current)?,
                };
                points.push(std::mem::replace(&mut current, next));
            } else {
                points.push(current.clone());
            }
        }
        Ok(OrbitSample { direction, points })
    }

    /// Draws from the canonical ergodic measure: Haar on the torus, uniform on
    /// the supporting orbit, Lebesgue for the doubling map, and the natural
    /// extension of Lebesgue on the solenoid.
    pub fn sample_ergodic_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Point> {
        Ok(match self {
            DynamicalSystem::TorusAffine(s) => {
                Point::Torus((0..s.dim()).map(|_| rng.random::<f64>()).collect())
            }
            DynamicalSystem::FiniteCyclic(s) => {
                Point::Residue(s.support[rng.random_range(0..s.support.len())])
            }
            DynamicalSystem::CircleDoubling(_) => {
                Point::Circle(BinaryExpansion::random(rng, DOUBLING_SAMPLE_BITS))
            }
            DynamicalSystem::SolenoidDoubling(s) => {
                let r: f64 = rng.random();
                Point::Solenoid(SolPointS1::new(r, Dyadic::new(rng.random(), s.width)?)?)
            }
        })
    }

    pub fn sample_ergodic(&self, seed: u64) -> Result<Point> {
        self.sample_ergodic_with(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// The torus descriptor, when the system is an affine torus map.
    pub fn torus(&self) -> Option<&TorusAffineSystem> {
        match self {
            DynamicalSystem::TorusAffine(s) => Some(s),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat_map() -> DynamicalSystem {
        TorusAffineSystem::from_i64(&[vec![2, 1], vec![1, 1]], vec![Shift::Real(0.0); 2])
            .unwrap()
            .into()
    }

    fn z3() -> DynamicalSystem {
        FiniteCyclicSystem::new(3, 2, 0, &[1, 2]).unwrap().into()
    }

    fn torus(p: &Point) -> Vec<f64> {
        match p {
            Point::Torus(w) => w.clone(),
            _ => panic!("not a torus point"),
        }
    }

    #[test]
    fn rotation_step() {
        let sys: DynamicalSystem = TorusAffineSystem::rotation(vec![Shift::Real(0.25)]).unwrap().into();
        let w = torus(&sys.step(&Point::Torus(vec![0.9])).unwrap());
        assert!((w[0] - 0.15).abs() < 1e-12);
    }

    #[test]
    fn finite_step() {
        let sys = z3();
        assert_eq!(sys.step(&Point::Residue(1)).unwrap(), Point::Residue(2));
        assert_eq!(sys.step(&Point::Residue(2)).unwrap(), Point::Residue(1));
    }

    #[test]
    fn cat_map_step() {
        let w = torus(&cat_map().step(&Point::Torus(vec![0.5, 0.5])).unwrap());
        assert_eq!(w, vec![0.5, 0.0]);
    }

    #[test]
    fn orbits() {
        let sys = z3();
        let o = sys.orbit(&Point::Residue(1), 1, Direction::Forward).unwrap();
        assert_eq!(o.points, vec![Point::Residue(1)]);
        let o = sys.orbit(&Point::Residue(1), 4, Direction::Forward).unwrap();
        let expected: Vec<Point> = [1, 2, 1, 2].into_iter().map(Point::Residue).collect();
        assert_eq!(o.points, expected);

        let dbl: DynamicalSystem = CircleDoublingSystem.into();
        let o = dbl.orbit(&Point::circle(1.0 / 3.0), 3, Direction::Forward).unwrap();
        let got: Vec<f64> = o.points.iter().map(|p| p.coords()[0]).collect();
        for (g, e) in got.iter().zip([1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]) {
            assert!((g - e).abs() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn backward_orbit_of_doubling_is_rejected() {
        let dbl: DynamicalSystem = CircleDoublingSystem.into();
        assert!(matches!(
            dbl.orbit(&Point::circle(0.1), 3, Direction::Backward),
            Err(Error::NotInvertible(_))
        ));
        assert!(matches!(dbl.step_inverse(&Point::circle(0.1)), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn inverse_steps() {
        let sys = cat_map();
        let p = Point::Torus(vec![0.123, 0.877]);
        let back = torus(&sys.step_inverse(&sys.step(&p).unwrap()).unwrap());
        assert!((back[0] - 0.123).abs() < 1e-12 && (back[1] - 0.877).abs() < 1e-12);

        let sys: DynamicalSystem = FiniteCyclicSystem::from_orbit(7, 3, 2, 0).unwrap().into();
        for w in 0..7 {
            let p = Point::Residue(w);
            assert_eq!(sys.step(&sys.step_inverse(&p).unwrap()).unwrap(), p);
        }
    }

    #[test]
    fn finite_system_validation() {
        assert!(FiniteCyclicSystem::new(4, 2, 0, &[1]).is_err());
        assert!(FiniteCyclicSystem::new(3, 2, 0, &[1]).is_err());
        assert!(FiniteCyclicSystem::new(3, 2, 0, &[0]).is_ok());
        let s = FiniteCyclicSystem::from_orbit(5, 2, 0, 1).unwrap();
        assert_eq!(s.support(), &[1, 2, 4, 3]);
    }

    #[test]
    fn torus_validation() {
        let err = TorusAffineSystem::from_i64(&[vec![2, 0], vec![0, 1]], vec![Shift::Real(0.0); 2]);
        assert!(matches!(err, Err(Error::InvalidSystem(_))));
        let err = TorusAffineSystem::from_i64(&[vec![1, 0], vec![0, 1]], vec![Shift::Real(0.0)]);
        assert!(matches!(err, Err(Error::InvalidSystem(_))));
        let s = TorusAffineSystem::rotation(vec![Shift::rational(4, 3)]).unwrap();
        assert_eq!(s.shift()[0], Shift::rational(1, 3));
        assert!(cat_map().step(&Point::Residue(0)).is_err());
    }

    #[test]
    fn sampling_is_reproducible() {
        let sys = cat_map();
        assert_eq!(sys.sample_ergodic(3).unwrap(), sys.sample_ergodic(3).unwrap());
        assert_ne!(sys.sample_ergodic(3).unwrap(), sys.sample_ergodic(4).unwrap());
    }

    #[test]
    fn finite_sampling_frequencies() {
        let sys = z3();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ones = (0..10_000)
            .filter(|_| sys.sample_ergodic_with(&mut rng).unwrap() == Point::Residue(1))
            .count();
        assert!((ones as f64 / 1e4 - 0.5).abs() < 0.02);
    }

    #[test]
    fn binary_expansion_doubles_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let e = BinaryExpansion::random(&mut rng, 256);
        let mut x = e.clone();
        for _ in 0..150 {
            let next = x.doubled();
            let expect = reduce_unit(2.0 * x.to_f64());
            assert!((next.to_f64() - expect).abs() < 1e-15);
            assert!(next.to_f64() != 0.0);
            x = next;
        }
    }
}
