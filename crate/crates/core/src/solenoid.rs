//! The dyadic solenoid in three realizations and the doubling map on each.
//!
//! - [`SolPointS1`]: `(ℝ × ℤ₂)/{(a, −a) : a ∈ ℤ}`, stored canonically with
//!   `r ∈ [0, 1)` and a 2-adic integer truncated to `W` digits.
//! - [`SolPointS2`]: the inverse limit of `ℝ/2ⁿℤ`, coordinates `x₀ … x_W`.
//! - [`SolPointS3`]: the attractor of the solid-torus map
//!   `F(ω, x, y) = (2ω, λx + ½cos 2πω, λy + ½sin 2πω)`, parametrized by a
//!   backward itinerary `ω₀, ω₋₁, …, ω₋K` with `2ω₋₍ₖ₊₁₎ = ω₋ₖ`.
//!
//! [`conj_g`] and [`conj_h`] are the conjugacies onto `S2`. All doublings of
//! `f64` fractional parts are exact, so `T₂∘ḡ = ḡ∘T₁` holds bit for bit.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_WIDTH: u32 = 64;
pub const DEFAULT_DEPTH: usize = 40;
pub const DEFAULT_LAMBDA: f64 = 0.25;

fn low_mask(n: u32) -> u64 {
    if n >= 64 { u64::MAX } else { (1u64 << n) - 1 }
}

/// A 2-adic integer known modulo `2^width`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    bits: u64,
    width: u32,
}

impl Dyadic {
    pub fn new(bits: u64, width: u32) -> Result<Self> {
        if !(1..=64).contains(&width) {
            return Err(Error::InvalidParameter(format!(
                "dyadic width must be in 1..=64, got {width}"
            )));
        }
        Ok(Self { bits: bits & low_mask(width), width })
    }

    pub fn zero(width: u32) -> Result<Self> {
        Self::new(0, width)
    }

    /// Two's-complement embedding of `ℤ` into `ℤ₂`; `-1` is all ones.
    pub fn from_i64(value: i64, width: u32) -> Result<Self> {
        Self::new(value as u64, width)
    }

    /// Digits `z₀, z₁, …` least significant first.
    pub fn from_digits(digits: &[u8], width: u32) -> Result<Self> {
        if digits.len() > width as usize || digits.iter().any(|&d| d > 1) {
            return Err(Error::InvalidParameter(format!(
                "expected at most {width} binary digits"
            )));
        }
        let bits = digits.iter().enumerate().fold(0u64, |acc, (j, &d)| acc | (u64::from(d) << j));
        Self::new(bits, width)
    }

    pub fn width(self) -> u32 {
        self.width
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn digit(self, j: u32) -> u8 {
        if j >= self.width { 0 } else { ((self.bits >> j) & 1) as u8 }
    }

    /// `z mod 2ⁿ` as an integer in `[0, 2ⁿ)`; `n` is clamped to the width.
    pub fn low(self, n: u32) -> u64 {
        self.bits & low_mask(n.min(self.width))
    }


    pub fn add_i64(self, k: i64) -> Dyadic {
        Dyadic { bits: self.bits.wrapping_add(k as u64) & low_mask(self.width), width: self.width }
    }


    pub fn double(self) -> Dyadic {
        Dyadic { bits: (self.bits << 1) & low_mask(self.width), width: self.width }
    }

    pub fn is_even(self) -> bool {
        self.bits & 1 == 0
    }

    /// `z / 2` for even `z`. The top digit is not determined at finite
    /// precision and is set to zero.
    fn halve_even(self) -> Dyadic {
        debug_assert!(self.is_even());
        Dyadic { bits: self.bits >> 1, width: self.width }
    }
}

impl std::ops::Add for Dyadic {
    type Output = Dyadic;

    fn add(self, other: Dyadic) -> Dyadic {
        debug_assert_eq!(self.width, other.width);
        Dyadic { bits: self.bits.wrapping_add(other.bits) & low_mask(self.width), width: self.width }
    }
}

impl std::ops::Neg for Dyadic {
    type Output = Dyadic;

    fn neg(self) -> Dyadic {
        Dyadic { bits: self.bits.wrapping_neg() & low_mask(self.width), width: self.width }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({:#x} mod 2^{})", self.bits, self.width)
    }
}

/// Point of `S1 = (ℝ × ℤ₂)/A`, canonical representative `r ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolPointS1 {
    r: f64,
    z: Dyadic,
}

impl SolPointS1 {
    /// Canonicalizes `(r, z)` by moving `⌊r⌋` into the 2-adic part.
    pub fn new(r: f64, z: Dyadic) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::InvalidPoint(format!("solenoid coordinate r = {r}")));
        }
        let k = r.floor();
        let mut frac = r - k;
        let mut z = z.add_i64(k as i64);
        if frac >= 1.0 {
            frac -= 1.0;
            z = z.add_i64(1);
        }
        Ok(Self { r: frac, z })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn z(&self) -> Dyadic {
        self.z
    }

    /// `T₁[r, z] = [2r, 2z]`.
    pub fn double(&self) -> SolPointS1 {
        let r2 = 2.0 * self.r;
        let carry = r2 >= 1.0;
        SolPointS1 {
            r: if carry { r2 - 1.0 } else { r2 },
            z: self.z.double().add_i64(i64::from(carry)),
        }
    }

    /// `T₁⁻¹`. Exact except for the top 2-adic digit, which is unknown at
    /// finite width and set to zero; `double(halve(p)) == p` always holds.
    pub fn halve(&self) -> SolPointS1 {
        let (r, z) = if self.z.is_even() {
            (self.r, self.z)
        } else {
            (self.r + 1.0, self.z.add_i64(-1))
        };
        SolPointS1 { r: r / 2.0, z: z.halve_even() }
    }
}

/// A point of `ℝ/2ⁿℤ` stored as an integer part in `[0, 2ⁿ)` and a fractional
/// part in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleCoord {
    pub level: u32,
    pub int: u64,
    pub frac: f64,
}

impl CircleCoord {
    fn normalized(level: u32, int: u64, frac: f64) -> CircleCoord {
        let (int, frac) = if frac >= 1.0 { (int.wrapping_add(1), frac - 1.0) } else { (int, frac) };
        CircleCoord { level, int: int & low_mask(level), frac }
    }

    pub fn value(&self) -> f64 {
        self.int as f64 + self.frac
    }

    pub fn double(&self) -> CircleCoord {
        let f2 = 2.0 * self.frac;
        let carry = f2 >= 1.0;
        CircleCoord {
            level: self.level,
            int: ((self.int << 1) | u64::from(carry)) & low_mask(self.level),
            frac: if carry { f2 - 1.0 } else { f2 },
        }
    }

    /// Reduction `ℝ/2^{level}ℤ → ℝ/2^{to}ℤ`.
    pub fn project(&self, to: u32) -> CircleCoord {
        debug_assert!(to <= self.level);
        CircleCoord { level: to, int: self.int & low_mask(to), frac: self.frac }
    }

    /// Distance in `ℝ/2^{level}ℤ` (both coordinates at the same level).
    pub fn distance(&self, other: &CircleCoord) -> f64 {
        debug_assert_eq!(self.level, other.level);
        let mask = low_mask(self.level);
        let d_int = self.int.wrapping_sub(other.int) & mask;
        let signed = if d_int > mask / 2 {
            d_int as i128 - (mask as i128 + 1)
        } else {
            d_int as i128
        };
        let d = (signed as f64 + (self.frac - other.frac)).abs();
        let modulus = mask as f64 + 1.0;
        d.min((modulus - d).abs())
    }
}

/// Point of the inverse limit `S2`, coordinates `x₀, …, x_L` with
/// `xₙ ∈ ℝ/2ⁿℤ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolPointS2 {
    coords: Vec<CircleCoord>,
}

impl SolPointS2 {
    pub fn new(coords: Vec<CircleCoord>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint("S2 point needs at least x₀".into()));
        }
        for (n, c) in coords.iter().enumerate() {
            if c.level as usize != n || n > 64 || !(0.0..1.0).contains(&c.frac) || c.int > low_mask(c.level) {
                return Err(Error::InvalidPoint(format!("coordinate {n} out of range: {c:?}")));
            }
        }
        Ok(Self { coords })
    }

    pub fn zero(levels: u32) -> Self {
        Self {
            coords: (0..=levels).map(|n| CircleCoord { level: n, int: 0, frac: 0.0 }).collect(),
        }
    }

    pub fn coords(&self) -> &[CircleCoord] {
        &self.coords
    }

    /// Highest level `L` stored.
    pub fn levels(&self) -> usize {
        self.coords.len() - 1
    }

    /// `(T₂x)ₙ = 2xₙ`.
    pub fn double(&self) -> SolPointS2 {
        SolPointS2 { coords: self.coords.iter().map(CircleCoord::double).collect() }
    }

    /// `σₙ x_{n+1} = xₙ` for every stored `n`, up to `tol`.
    pub fn is_compatible(&self, tol: f64) -> bool {
        self.coords
            .windows(2)
            .all(|w| w[1].project(w[0].level).distance(&w[0]) <= tol)
    }

    /// Largest coordinatewise distance over the levels both points carry.
    pub fn max_distance(&self, other: &SolPointS2) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

/// A point of `𝕋 = ℝ/ℤ` in 128-bit binary fixed point. Doubling is exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Turn(pub u128);

impl Turn {
    const SCALE: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0; // 2^128

    pub fn from_f64(x: f64) -> Turn {
        let x = x.rem_euclid(1.0);
        Turn((x * Self::SCALE) as u128)
    }

    pub fn to_f64(self) -> f64 {
        let v = self.0 as f64 / Self::SCALE;
        if v >= 1.0 { 0.0 } else { v }
    }

    pub fn double(self) -> Turn {
        Turn(self.0 << 1)
    }

    /// `πₙ(θ) = 2ⁿθ mod 2ⁿℤ`.
    pub fn lift(self, n: u32) -> CircleCoord {
        assert!(n <= 64, "level {n} exceeds 64");
        let int = if n == 0 { 0 } else { (self.0 >> (128 - n)) as u64 };
        let rest = if n == 0 { self.0 } else { self.0 << n };
        CircleCoord::normalized(n, int, rest as f64 / Self::SCALE)
    }
}

impl fmt::Debug for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Turn({})", self.to_f64())
    }
}

impl Serialize for Turn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:#034x}", self.0))
    }
}

impl<'de> Deserialize<'de> for Turn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let hex = s.trim_start_matches("0x");
        u128::from_str_radix(hex, 16).map(Turn).map_err(serde::de::Error::custom)
    }
}

/// Point of the attractor `S3`, given by its backward itinerary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolPointS3 {
    /// `ω₀, ω₋₁, …, ω₋K`
    angles: Vec<Turn>,
    lambda: f64,
    x: f64,
    y: f64,
}

impl SolPointS3 {
    pub fn from_backward_angles(angles: Vec<Turn>, lambda: f64) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidPoint("S3 point needs ω₀".into()));
        }
        if !(lambda > 0.0 && lambda < 0.5) {
            return Err(Error::InvalidParameter(format!("λ must lie in (0, 1/2), got {lambda}")));
        }
        if let Some(k) = angles.windows(2).position(|w| w[1].double() != w[0]) {
            return Err(Error::InvalidPoint(format!("2ω₋{} ≠ ω₋{}", k + 1, k)));
        }
        let (x, y) = fiber_series(&angles, lambda);
        Ok(Self { angles, lambda, x, y })
    }

    /// The point whose backward itinerary comes from the `S1` point `(r, z)`:
    /// `ω₋ₙ = (r + z mod 2ⁿ)/2ⁿ`.
    pub fn from_s1(p: &SolPointS1, depth: usize, lambda: f64) -> Result<Self> {
        if depth > p.z.width() as usize {
            return Err(Error::InsufficientHistory { needed: depth, available: p.z.width() as usize });
        }
        let r_fixed = Turn::from_f64(p.r).0;
        let deepest = if depth == 0 {
            r_fixed
        } else {
            (u128::from(p.z.low(depth as u32)) << (128 - depth)) | (r_fixed >> depth)
        };
        let angles = (0..=depth).map(|n| Turn(deepest << (depth - n))).collect();
        Self::from_backward_angles(angles, lambda)
    }

    pub fn angles(&self) -> &[Turn] {
        &self.angles
    }

    pub fn omega(&self) -> f64 {
        self.angles[0].to_f64()
    }

    pub fn depth(&self) -> usize {
        self.angles.len() - 1
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn fiber(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    /// Bound on `|(x, y) − truncated series|` from dropping the terms beyond `K`.
    pub fn truncation_bound(&self) -> f64 {
        self.lambda.powi(self.depth() as i32) / (2.0 * (1.0 - self.lambda))
    }

    /// Closed-form fiber coordinates from the stored itinerary.
    pub fn series_fiber(&self) -> (f64, f64) {
        fiber_series(&self.angles, self.lambda)
    }

    /// `T₃ = F` restricted to the attractor.
    pub fn double(&self) -> SolPointS3 {
        let w0 = self.angles[0];
        let phase = std::f64::consts::TAU * w0.to_f64();
        let mut angles = Vec::with_capacity(self.angles.len() + 1);
        angles.push(w0.double());
        angles.extend_from_slice(&self.angles);
        SolPointS3 {
            angles,
            lambda: self.lambda,
            x: self.lambda * self.x + 0.5 * phase.cos(),
            y: self.lambda * self.y + 0.5 * phase.sin(),
        }
    }
}

fn fiber_series(angles: &[Turn], lambda: f64) -> (f64, f64) {
    let mut x = 0.0;
    let mut y = 0.0;
    // Horner from the deepest term outward
    for w in angles[1..].iter().rev() {
        let phase = std::f64::consts::TAU * w.to_f64();
        x = lambda * x + 0.5 * phase.cos();
        y = lambda * y + 0.5 * phase.sin();
    }
    (x, y)
}

/// `(g(r, z))ₙ = r + Σ_{j<n} z_j 2^j mod 2ⁿ`, for `n = 0..=W`. Accepts any real
/// `r`, so it can be checked on non-canonical representatives.
pub fn conj_g(r: f64, z: Dyadic) -> SolPointS2 {
    let k = r.floor();
    let frac = r - k;
    let shift = k as i64 as u64;
    let coords = (0..=z.width())
        .map(|n| CircleCoord::normalized(n, z.low(n).wrapping_add(shift), frac))
        .collect();
    SolPointS2 { coords }
}

/// `ḡ` on a canonical `S1` point.
pub fn conj_g_point(p: &SolPointS1) -> SolPointS2 {
    conj_g(p.r, p.z)
}

/// `(h(ω, x, y))ₙ = πₙ(T₃⁻ⁿ(ω, x, y))` for `n = 0..=levels`.
pub fn conj_h(point: &SolPointS3, levels: usize) -> Result<SolPointS2> {
    if levels > point.depth() {
        return Err(Error::InsufficientHistory { needed: levels, available: point.depth() });
    }
    if levels > 64 {
        return Err(Error::InvalidParameter(format!("at most 64 levels, got {levels}")));
    }
    let coords = (0..=levels).map(|n| point.angles[n].lift(n as u32)).collect();
    Ok(SolPointS2 { coords })
}

/// Outcome of iterating both conjugacy identities along sampled orbits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyCheck {
    pub samples: usize,
    pub steps: usize,
    pub width: u32,
    pub depth: usize,
    pub lambda: f64,
    /// orbit points where `T₂ ∘ ḡ` and `ḡ ∘ T₁` differ in any coordinate
    pub g_mismatches: usize,
    /// largest per-coordinate distance between `T₂ ∘ h` and `h ∘ T₃`
    pub h_max_error: f64,
}

impl ConjugacyCheck {
    pub const H_TOL: f64 = 1e-9;

    pub fn g_passes(&self) -> bool {
        self.g_mismatches == 0
    }

    pub fn h_passes(&self) -> bool {
        self.h_max_error <= Self::H_TOL
    }
}

/// Checks `T₂ ∘ ḡ = ḡ ∘ T₁` exactly and `T₂ ∘ h = h ∘ T₃` to within
/// [`ConjugacyCheck::H_TOL`] along `steps`-step orbits of `samples` points.
pub fn check_conjugacies(
    seed: u64,
    samples: usize,
    steps: usize,
    width: u32,
    depth: usize,
    lambda: f64,
) -> Result<ConjugacyCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g_mismatches = 0;
    let mut h_max_error: f64 = 0.0;
    for _ in 0..samples {
        let (mut p1, _, mut p3) = sample_solenoid_with(&mut rng, width, depth, lambda)?;
        for _ in 0..steps {
            let next1 = p1.double();
            if conj_g_point(&p1).double() != conj_g_point(&next1) {
                g_mismatches += 1;
            }
            let next3 = p3.double();
            let lhs = conj_h(&p3, depth)?.double();
            let rhs = conj_h(&next3, depth)?;
            h_max_error = h_max_error.max(lhs.max_distance(&rhs));
            p1 = next1;
            p3 = next3;
        }
    }
    Ok(ConjugacyCheck { samples, steps, width, depth, lambda, g_mismatches, h_max_error })
}

/// Natural-extension sample: `r` uniform on `[0, 1)`, i.i.d. uniform digits.
pub fn sample_solenoid_with<R: Rng + ?Sized>(
    rng: &mut R,
    width: u32,
    depth: usize,
    lambda: f64,
) -> Result<(SolPointS1, SolPointS2, SolPointS3)> {
    let r: f64 = rng.random();
    let z = Dyadic::new(rng.random::<u64>(), width)?;
    let s1 = SolPointS1::new(r, z)?;
    let s2 = conj_g_point(&s1);
    let s3 = SolPointS3::from_s1(&s1, depth, lambda)?;
    Ok((s1, s2, s3))
}

pub fn sample_solenoid(seed: u64, width: u32, depth: usize) -> Result<(SolPointS1, SolPointS2, SolPointS3)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_solenoid_with(&mut rng, width, depth, DEFAULT_LAMBDA)
}

/// A dyadic rational `num / 2^exp`, the dual group `ℤ[1/2]` of the solenoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicRational {
    num: i64,
    exp: u32,
}

impl DyadicRational {
    pub fn new(num: i64, exp: u32) -> DyadicRational {
        let (mut num, mut exp) = (num, exp);
        if num == 0 {
            exp = 0;
        }
        while exp > 0 && num % 2 == 0 {
            num /= 2;
            exp -= 1;
        }
        DyadicRational { num, exp }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn exp(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// The dual of doubling, `a ↦ 2a`.
    pub fn doubled(self) -> DyadicRational {
        if self.exp > 0 {
            DyadicRational::new(self.num, self.exp - 1)
        } else {
            DyadicRational::new(self.num * 2, 0)
        }
    }

    pub fn is_fixed_by_doubling(self) -> bool {
        self.doubled() == self
    }

    /// `χ_a([r, z]) = num · xₑ / 2ᵉ mod 1` with `xₑ = r + z mod 2ᵉ`.
    pub fn eval(self, p: &SolPointS1) -> Result<f64> {
        if self.exp > p.z.width() {
            return Err(Error::InsufficientHistory {
                needed: self.exp as usize,
                available: p.z.width() as usize,
            });
        }
        let int_part = p.z.low(self.exp).wrapping_mul(self.num as u64) & low_mask(self.exp);
        let scale = 2f64.powi(self.exp as i32);
        let v = (int_part as f64 + (self.num as f64 * p.r).rem_euclid(scale)) / scale;
        Ok(v.rem_euclid(1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(bits: u64) -> Dyadic {
        Dyadic::new(bits, DEFAULT_WIDTH).unwrap()
    }

    #[test]
    fn s1_doubling_carries_into_z() {
        let p = SolPointS1::new(0.75, z(0)).unwrap();
        let q = p.double();
        assert_eq!(q.r(), 0.5);
        assert_eq!(q.z(), z(1));
    }

    #[test]
    fn s1_canonicalization() {
        let p = SolPointS1::new(2.25, z(5)).unwrap();
        assert_eq!(p.r(), 0.25);
        assert_eq!(p.z(), z(7));
        let p = SolPointS1::new(-0.25, z(0)).unwrap();
        assert_eq!(p.r(), 0.75);
        assert_eq!(p.z(), Dyadic::from_i64(-1, 64).unwrap());
    }

    #[test]
    fn halve_inverts_double() {
        let p = SolPointS1::new(0.375, z(0b1011)).unwrap();
        assert_eq!(p.halve().double(), p);
        let q = SolPointS1::new(0.9, z(6)).unwrap();
        assert_eq!(q.halve().double(), q);
    }

    #[test]
    fn s2_zero_is_fixed() {
        let zero = SolPointS2::zero(64);
        assert_eq!(zero.double(), zero);
    }

    #[test]
    fn s3_double_advances_itinerary() {
        let p = SolPointS1::new(0.3, z(0xdead_beef)).unwrap();
        let s3 = SolPointS3::from_s1(&p, 10, 0.25).unwrap();
        let next = s3.double();
        assert_eq!(next.depth(), 11);
        assert_eq!(&next.angles()[1..], s3.angles());
        let (x0, y0) = s3.fiber();
        let w = std::f64::consts::TAU * s3.omega();
        assert_eq!(next.fiber(), (0.25 * x0 + 0.5 * w.cos(), 0.25 * y0 + 0.5 * w.sin()));
    }

    #[test]
    fn g_examples() {
        let zero = conj_g(0.0, z(0));
        assert_eq!(zero, SolPointS2::zero(64));

        let p = conj_g(0.25, Dyadic::from_digits(&[1], 64).unwrap());
        assert_eq!(p.coords()[0].value(), 0.25);
        for n in 1..=64 {
            assert_eq!(p.coords()[n].value(), 1.25, "level {n}");
        }

        // (1, −1) generates the kernel
        let k = conj_g(1.0, Dyadic::from_i64(-1, 64).unwrap());
        assert_eq!(k, SolPointS2::zero(64));
    }

    #[test]
    fn h_examples() {
        let zero = SolPointS3::from_backward_angles(vec![Turn(0); 5], 0.25).unwrap();
        assert_eq!(conj_h(&zero, 4).unwrap(), SolPointS2::zero(4));

        let half = SolPointS3::from_backward_angles(
            vec![Turn::from_f64(0.5), Turn::from_f64(0.25)],
            0.25,
        )
        .unwrap();
        let h = conj_h(&half, 1).unwrap();
        assert_eq!(h.coords()[1].value(), 0.5);
        assert!(matches!(conj_h(&half, 2), Err(Error::InsufficientHistory { .. })));
    }

    #[test]
    fn s3_rejects_inconsistent_itinerary() {
        let bad = vec![Turn::from_f64(0.5), Turn::from_f64(0.3)];
        assert!(matches!(SolPointS3::from_backward_angles(bad, 0.25), Err(Error::InvalidPoint(_))));
        let ok = vec![Turn::from_f64(0.5), Turn::from_f64(0.25)];
        assert!(SolPointS3::from_backward_angles(ok, 0.6).is_err());
    }

    #[test]
    fn sample_is_consistent_and_reproducible() {
        let (s1, s2, s3) = sample_solenoid(11, 64, 40).unwrap();
        assert_eq!(sample_solenoid(11, 64, 40).unwrap().0, s1);
        assert_eq!(conj_g_point(&s1), s2);
        assert!(s2.is_compatible(1e-12));
        let h = conj_h(&s3, 40).unwrap();
        assert!(h.max_distance(&s2) < 1e-12);
        let (sx, sy) = s3.series_fiber();
        let (x, y) = s3.fiber();
        assert!((sx - x).abs() <= s3.truncation_bound() && (sy - y).abs() <= s3.truncation_bound());
    }

    #[test]
    fn circle_distance_wraps() {
        let a = CircleCoord { level: 2, int: 3, frac: 0.9 };
        let b = CircleCoord { level: 2, int: 0, frac: 0.1 };
        assert!((a.distance(&b) - 0.2).abs() < 1e-12);
        let a = CircleCoord { level: 0, int: 0, frac: 0.95 };
        let b = CircleCoord { level: 0, int: 0, frac: 0.05 };
        assert!((a.distance(&b) - 0.1).abs() < 1e-12);
        let a = CircleCoord { level: 64, int: u64::MAX, frac: 0.5 };
        let b = CircleCoord { level: 64, int: 0, frac: 0.25 };
        assert!((a.distance(&b) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn dyadic_characters() {
        let a = DyadicRational::new(3, 2);
        assert_eq!(a.doubled(), DyadicRational::new(3, 1));
        assert!(!a.is_fixed_by_doubling());
        assert!(DyadicRational::new(0, 5).is_fixed_by_doubling());
        assert_eq!(DyadicRational::new(4, 2), DyadicRational::new(1, 0));

        // characters are homomorphisms constant on classes: (r, z) ~ (r+1, z−1)
        let p = SolPointS1::new(0.3, z(0b101)).unwrap();
        let v = a.eval(&p).unwrap();
        // x₂ = 0.3 + 1 = 1.3, 3·1.3/4 = 0.975
        assert!((v - 0.975).abs() < 1e-12);
        // χ(T p) = (2a)(p)
        let lhs = a.eval(&p.double()).unwrap();
        let rhs = a.doubled().eval(&p).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
