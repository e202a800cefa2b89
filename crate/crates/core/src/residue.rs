//! Distributional residues in exact structured form, closed-form banana
//! residues, propagator constants, sphere volumes and the 4-dimensional
//! Hadamard series building blocks.
//!
//! Every residue that appears here is a complex number of the shape
//! `i^k * rational * pi^m`, optionally times one tagged transcendental
//! factor (a period, a zeta value). [`ResidueValue`] keeps that structure
//! exact and renders a float on demand, so tests can compare exact parts
//! instead of chasing rounding.

use std::fmt;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::power::{divergence_degree, is_eg_primitive, require_dimension};

/// Named transcendental factor with its numeric value.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcendental {
    pub tag: String,
    pub value: f64,
}

/// Exact-structured complex constant `i^k * rational * pi^m * t`, with `t`
/// an optional tagged transcendental. Normalized so the rational part is
/// positive (signs fold into the power of `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueValue {
    i_power: u8,
    rational: BigRational,
    pi_power: i32,
    transcendental: Option<Transcendental>,
}

impl ResidueValue {
    pub fn exact(i_power: i64, rational: BigRational, pi_power: i32) -> Self {
        let mut v = ResidueValue {
            i_power: i_power.rem_euclid(4) as u8,
            rational,
            pi_power,
            transcendental: None,
        };
        v.normalize();
        v
    }

    pub fn from_integers(i_power: i64, numer: i64, denom: i64, pi_power: i32) -> Self {
        ResidueValue::exact(
            i_power,
            BigRational::new(BigInt::from(numer), BigInt::from(denom)),
            pi_power,
        )
    }

    pub fn with_transcendental(mut self, tag: impl Into<String>, value: f64) -> Self {
        self.transcendental = Some(Transcendental { tag: tag.into(), value });
        self
    }

    fn normalize(&mut self) {
        if self.rational.is_zero() {
            self.i_power = 0;
            self.pi_power = 0;
            self.transcendental = None;
            return;
        }
        if self.rational.is_negative() {
            self.rational = -self.rational.clone();
            self.i_power = (self.i_power + 2) % 4;
        }
    }

    pub fn i_power(&self) -> u8 {
        self.i_power
    }

    pub fn rational(&self) -> &BigRational {
        &self.rational
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn transcendental(&self) -> Option<&Transcendental> {
        self.transcendental.as_ref()
    }

    /// The transcendental factor, or 1 when none is attached.
    pub fn transcendental_factor(&self) -> f64 {
        self.transcendental.as_ref().map_or(1.0, |t| t.value)
    }

    /// Floating-point rendering `i^k * rational * pi^m * t`.
    pub fn numeric(&self) -> Complex64 {
        let unit = match self.i_power {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        let magnitude = self.rational.to_f64().unwrap_or(f64::NAN)
            * std::f64::consts::PI.powi(self.pi_power)
            * self.transcendental_factor();
        unit * magnitude
    }

    /// Product of two structured values. At most one side may carry a
    /// transcendental tag.
    pub fn mul(&self, other: &ResidueValue) -> Result<ResidueValue> {
        let transcendental = match (&self.transcendental, &other.transcendental) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidArgument(
                    "cannot multiply two tagged transcendental factors".into(),
                ))
            }
            (t, None) => t.clone(),
            (None, t) => t.clone(),
        };
        let mut v = ResidueValue {
            i_power: (self.i_power + other.i_power) % 4,
            rational: &self.rational * &other.rational,
            pi_power: self.pi_power + other.pi_power,
            transcendental,
        };
        v.normalize();
        Ok(v)
    }

    /// Integer power of an exact value (transcendental-free).
    pub fn pow(&self, exponent: u32) -> Result<ResidueValue> {
        if self.transcendental.is_some() {
            return Err(Error::InvalidArgument(
                "cannot take powers of tagged transcendental factors".into(),
            ));
        }
        let mut acc = ResidueValue::exact(0, BigRational::one(), 0);
        for _ in 0..exponent {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Structural equality: exact parts match and the effective
    /// transcendental multipliers (1 when absent) are bit-identical.
    pub fn structurally_eq(&self, other: &ResidueValue) -> bool {
        self.i_power == other.i_power
            && self.rational == other.rational
            && self.pi_power == other.pi_power
            && self.transcendental_factor().to_bits() == other.transcendental_factor().to_bits()
    }
}

impl fmt::Display for ResidueValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.i_power {
            0 => "",
            1 => "i*",
            2 => "-",
            _ => "-i*",
        };
        write!(f, "{prefix}{}", self.rational)?;
        match self.pi_power {
            0 => {}
            1 => write!(f, "*pi")?,
            p => write!(f, "*pi^{p}")?,
        }
        if let Some(t) = &self.transcendental {
            write!(f, "*{}", t.tag)?;
        }
        Ok(())
    }
}

fn factorial_big(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}

/// Double factorial `n!! = n (n-2) (n-4) ...`, with `(-1)!! = 1`.
fn double_factorial_big(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Position-space massless propagator constant
/// `(-1)^(D/2-1) Gamma(D/2-1) / (4 pi^(D/2))` for even `D >= 4`.
pub fn propagator_constant(d: u32) -> Result<ResidueValue> {
    require_dimension(d)?;
    let half = d / 2;
    Ok(ResidueValue::exact(
        i64::from(d) - 2, // (-1)^(D/2-1) = i^(D-2)
        BigRational::new(factorial_big(half - 2), BigInt::from(4)),
        -(half as i32),
    ))
}

/// Volume of the unit sphere in `d` dimensions, `2 pi^(d/2) / Gamma(d/2)`,
/// exact for every `d >= 1` (half-integer Gamma resolves to a double
/// factorial and the square roots of pi cancel).
pub fn sphere_volume(d: u32) -> ResidueValue {
    assert!(d >= 1, "sphere volume needs d >= 1");
    if d.is_multiple_of(2) {
        ResidueValue::exact(
            0,
            BigRational::new(BigInt::from(2), factorial_big(d / 2 - 1)),
            (d / 2) as i32,
        )
    } else {
        // Gamma(d/2) = sqrt(pi) (d-2)!! / 2^((d-1)/2)
        let two_pow = BigInt::from(2).pow(d.div_ceil(2));
        ResidueValue::exact(
            0,
            BigRational::new(two_pow, double_factorial_big(i64::from(d) - 2)),
            ((d - 1) / 2) as i32,
        )
    }
}

/// Residue constant of a primitive graph from its period:
/// `c0 = 2 i^((2D-1)(|V|-1)) / (4 pi)^|E| * P`. The period enters as a
/// tagged transcendental factor.
pub fn residue_from_period(g: &Multigraph, d: u32, period: f64) -> Result<ResidueValue> {
    require_dimension(d)?;
    if !is_eg_primitive(g, d) {
        return Err(Error::RequiresExtension {
            dimension: d,
            divergence_degree: divergence_degree(g, d),
        });
    }
    let n_minus_1 = g.n_vertices() as i64 - 1;
    let edges = g.edge_count() as u32;
    let value = ResidueValue::exact(
        (2 * i64::from(d) - 1) * n_minus_1,
        BigRational::new(BigInt::from(2), BigInt::from(4).pow(edges)),
        -(edges as i32),
    );
    Ok(value.with_transcendental("P_Gamma", period))
}

/// Residue of a two-vertex graph with `L` parallel lines as a power of the
/// wave operator acting on the delta distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOpResidue {
    pub coefficient: ResidueValue,
    pub box_power: u32,
}

impl fmt::Display for DiffOpResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        match self.box_power {
            0 => Ok(()),
            1 => write!(f, " * Box"),
            p => write!(f, " * Box^{p}"),
        }
    }
}

/// Closed-form residue of the `L`-line banana in even dimension `D`:
/// `k_D^L i^(D-1) |S^(D-1)| Gamma(D/2) / (2^(2l) l! Gamma(D/2+l)) * Box^l`
/// with `l = (D/2-1) L - D/2`.
pub fn banana_residue(lines: u32, d: u32) -> Result<DiffOpResidue> {
    require_dimension(d)?;
    if lines < 2 {
        return Err(Error::InvalidArgument(
            "a banana graph needs at least two lines".into(),
        ));
    }
    let half = i64::from(d) / 2;
    let l = (half - 1) * i64::from(lines) - half;
    if l < 0 {
        return Err(Error::InvalidArgument(format!(
            "banana with {lines} lines is superficially convergent at D={d}; \
             no residue of this type"
        )));
    }
    let l = l as u32;
    let propagator_power = propagator_constant(d)?.pow(lines)?;
    // Gamma(D/2) / (2^(2l) l! Gamma(D/2+l)) with i^(D-1) minus signs
    let gamma_ratio = ResidueValue::exact(
        i64::from(d) - 1,
        BigRational::new(
            factorial_big(d / 2 - 1),
            BigInt::from(2).pow(2 * l) * factorial_big(l) * factorial_big(d / 2 + l - 1),
        ),
        0,
    );
    let coefficient = propagator_power.mul(&sphere_volume(d))?.mul(&gamma_ratio)?;
    Ok(DiffOpResidue { coefficient, box_power: l })
}

/// Truncated series value with convergence metadata. `converged` is false
/// when the first omitted term still exceeds `1e-12` of the partial sum.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub converged: bool,
    pub terms_used: usize,
}

const SERIES_TOLERANCE: f64 = 1e-12;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Coefficient `f` of the logarithmic part of the 4-dimensional Hadamard
/// expansion: `f(z) = J_1(sqrt z) / (8 pi^2 sqrt z)`, evaluated through its
/// own entire series `sum_k (-z/4)^k / (k! (k+1)!) / (16 pi^2)`, valid for
/// any real `z` with `f(0) = 1/(16 pi^2)`.
pub fn hadamard_f(z: f64) -> SeriesEval {
    let scale = 1.0 / (16.0 * std::f64::consts::PI * std::f64::consts::PI);
    let mut term = 1.0;
    let mut sum = term;
    let mut k = 0usize;
    const CAP: usize = 256;
    while k < CAP {
        let next = term * (-z / 4.0) / ((k as f64 + 1.0) * (k as f64 + 2.0));
        if next.abs() <= SERIES_TOLERANCE * sum.abs() {
            return SeriesEval { value: scale * sum, converged: true, terms_used: k + 1 };
        }
        sum += next;
        term = next;
        k += 1;
    }
    SeriesEval { value: scale * sum, converged: false, terms_used: CAP }
}

/// Smooth part `F` of the 4-dimensional Hadamard expansion, truncated after
/// `terms` terms:
/// `F(z) = -(1/4pi) sum_k (psi(k+1) + psi(k+2)) (-z/4)^k / (k! (k+1)!)`,
/// with `F(0) = (2C - 1)/(4 pi)` for Euler's constant `C`.
pub fn hadamard_big_f(z: f64, terms: usize) -> Result<SeriesEval> {
    if terms == 0 {
        return Err(Error::InvalidArgument("series needs at least one term".into()));
    }
    let scale = -1.0 / (4.0 * std::f64::consts::PI);
    // psi(1) = -C and psi(k+1) = psi(k) + 1/k
    let mut psi_a = -EULER_GAMMA;
    let mut psi_b = 1.0 - EULER_GAMMA;
    let mut base = 1.0; // (-z/4)^k / (k! (k+1)!)
    let mut sum = 0.0;
    for k in 0..terms {
        sum += (psi_a + psi_b) * base;
        let kf = k as f64;
        base *= (-z / 4.0) / ((kf + 1.0) * (kf + 2.0));
        psi_a = psi_b;
        psi_b += 1.0 / (kf + 2.0);
    }
    // first omitted term decides the truncation warning
    let omitted = (psi_a + psi_b) * base;
    Ok(SeriesEval {
        value: scale * sum,
        converged: omitted.abs() <= SERIES_TOLERANCE * sum.abs(),
        terms_used: terms,
    })
}
