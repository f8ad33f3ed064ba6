//! Phase angles (fractions of a full turn) and exact coefficient arithmetic.
//!
//! Coefficients of span-algebra elements are finite rational combinations of
//! unit phases with rational angle. All the algebraic identities this crate
//! checks hold term-by-term at that level, so exact equality of such
//! combinations is a sound and complete zero test for them. Cocycles with
//! floating-point angles degrade coefficients to `Complex64` and all checks
//! against them become toleranced.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};

/// An angle measured in full turns, canonicalized into [0, 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhaseAngle {
    Rational(Ratio<i64>),
    Float(f64),
}

fn canon_ratio(r: Ratio<i64>) -> Ratio<i64> {
    r - r.floor()
}

fn canon_float(x: f64) -> f64 {
    let y = x.rem_euclid(1.0);
    if y == 1.0 {
        0.0
    } else {
        y
    }
}

impl PhaseAngle {
    pub fn zero() -> Self {
        PhaseAngle::Rational(Ratio::zero())
    }

    pub fn rational(num: i64, den: i64) -> Self {
        PhaseAngle::Rational(canon_ratio(Ratio::new(num, den)))
    }

    pub fn float(x: f64) -> Self {
        PhaseAngle::Float(canon_float(x))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, PhaseAngle::Rational(_))
    }

    /// The angle as a float in [0, 1).
    pub fn turns(&self) -> f64 {
        match self {
            PhaseAngle::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            PhaseAngle::Float(x) => *x,
        }
    }

    pub fn add(&self, other: &PhaseAngle) -> PhaseAngle {
        match (self, other) {
            (PhaseAngle::Rational(a), PhaseAngle::Rational(b)) => {
                PhaseAngle::Rational(canon_ratio(a + b))
            }
            _ => PhaseAngle::Float(canon_float(self.turns() + other.turns())),
        }
    }

    pub fn neg(&self) -> PhaseAngle {
        match self {
            PhaseAngle::Rational(a) => PhaseAngle::Rational(canon_ratio(-a)),
            PhaseAngle::Float(x) => PhaseAngle::Float(canon_float(-x)),
        }
    }

    pub fn sub(&self, other: &PhaseAngle) -> PhaseAngle {
        self.add(&other.neg())
    }

    pub fn scale(&self, n: i64) -> PhaseAngle {
        match self {
            PhaseAngle::Rational(a) => PhaseAngle::Rational(canon_ratio(a * Ratio::from_integer(n))),
            PhaseAngle::Float(x) => PhaseAngle::Float(canon_float(x * n as f64)),
        }
    }

    /// True when the angle is 0 modulo 1, within `tol` turns for floats.
    pub fn is_zero_mod1(&self, tol: f64) -> bool {
        match self {
            PhaseAngle::Rational(r) => r.is_zero(),
            PhaseAngle::Float(x) => {
                let d = canon_float(*x);
                d <= tol || (1.0 - d) <= tol
            }
        }
    }

    /// The signed representative in (-1/2, 1/2], as a float. Rational angles
    /// recenter exactly before the one rounding division, so an angle and its
    /// negation always land on bitwise-conjugate floats.
    pub fn signed_turns(&self) -> f64 {
        match self {
            PhaseAngle::Rational(r) => {
                let s = if *r > Ratio::new(1, 2) {
                    r - Ratio::from_integer(1)
                } else {
                    *r
                };
                *s.numer() as f64 / *s.denom() as f64
            }
            PhaseAngle::Float(x) => {
                if *x > 0.5 {
                    x - 1.0
                } else {
                    *x
                }
            }
        }
    }

    /// Evaluated at the signed representative so that conjugate angles land
    /// on bitwise-conjugate floats.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.signed_turns())
    }

    /// Parses `p/q`, an integer, or a decimal/scientific literal. Fractions
    /// and integers are exact; anything with a decimal point or exponent is
    /// a float angle.
    pub fn parse(text: &str) -> Result<PhaseAngle> {
        let t = text.trim();
        if let Some((num, den)) = t.split_once('/') {
            let p: i64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad numerator in `{t}`")))?;
            let q: i64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad denominator in `{t}`")))?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in `{t}`")));
            }
            return Ok(PhaseAngle::rational(p, q));
        }
        if !t.contains('.') && !t.contains('e') && !t.contains('E') {
            let p: i64 = t.parse().map_err(|_| Error::Parse(format!("bad angle `{t}`")))?;
            return Ok(PhaseAngle::rational(p, 1));
        }
        let x: f64 = t.parse().map_err(|_| Error::Parse(format!("bad angle `{t}`")))?;
        Ok(PhaseAngle::float(x))
    }
}

impl fmt::Display for PhaseAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseAngle::Rational(r) => {
                if r.denom() == &1 {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            PhaseAngle::Float(x) => write!(f, "{x}"),
        }
    }
}

/// A scalar coefficient: either an exact rational combination of rational
/// phases, or a complex double. Exact coefficients form a commutative ring
/// and map onto the complex numbers via [`Coeff::to_complex`].
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Exact(BTreeMap<Ratio<i64>, Ratio<i64>>),
    Approx(Complex64),
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Exact(BTreeMap::new())
    }

    pub fn one() -> Self {
        Coeff::from_rational(Ratio::from_integer(1))
    }

    pub fn from_rational(w: Ratio<i64>) -> Self {
        let mut m = BTreeMap::new();
        if !w.is_zero() {
            m.insert(Ratio::zero(), w);
        }
        Coeff::Exact(m)
    }

    pub fn from_integer(n: i64) -> Self {
        Coeff::from_rational(Ratio::from_integer(n))
    }

    pub fn from_complex(z: Complex64) -> Self {
        Coeff::Approx(z)
    }

    /// The unit phase e^{2 pi i t}.
    pub fn from_phase(t: &PhaseAngle) -> Self {
        match t {
            PhaseAngle::Rational(r) => {
                let mut m = BTreeMap::new();
                m.insert(canon_ratio(*r), Ratio::from_integer(1));
                Coeff::Exact(m)
            }
            PhaseAngle::Float(_) => Coeff::Approx(t.to_complex()),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    /// Zero in the exact representation. Exact zero implies complex zero;
    /// for approximate coefficients use [`Coeff::norm`] with a tolerance.
    pub fn is_exactly_zero(&self) -> bool {
        match self {
            Coeff::Exact(m) => m.is_empty(),
            Coeff::Approx(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coeff::Exact(m) => m
                .iter()
                .map(|(t, w)| {
                    let angle = TAU * PhaseAngle::Rational(*t).signed_turns();
                    Complex64::from_polar((*w.numer() as f64) / (*w.denom() as f64), angle)
                })
                .fold(Complex64::new(0.0, 0.0), |a, b| a + b),
            Coeff::Approx(z) => *z,
        }
    }

    pub fn norm(&self) -> f64 {
        self.to_complex().norm()
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => {
                let mut m = a.clone();
                for (t, w) in b {
                    let entry = m.entry(*t).or_insert_with(Ratio::zero);
                    *entry += w;
                    if entry.is_zero() {
                        m.remove(t);
                    }
                }
                Coeff::Exact(m)
            }
            _ => Coeff::Approx(self.to_complex() + other.to_complex()),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Exact(m) => Coeff::Exact(m.iter().map(|(t, w)| (*t, -w)).collect()),
            Coeff::Approx(z) => Coeff::Approx(-z),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Exact(a), Coeff::Exact(b)) => {
                let mut m: BTreeMap<Ratio<i64>, Ratio<i64>> = BTreeMap::new();
                for (s, u) in a {
                    for (t, w) in b {
                        let phase = canon_ratio(s + t);
                        let entry = m.entry(phase).or_insert_with(Ratio::zero);
                        *entry += u * w;
                        if entry.is_zero() {
                            m.remove(&phase);
                        }
                    }
                }
                Coeff::Exact(m)
            }
            _ => Coeff::Approx(self.to_complex() * other.to_complex()),
        }
    }

    /// Multiplication by the unit phase e^{2 pi i t}.
    pub fn rotate(&self, t: &PhaseAngle) -> Coeff {
        self.mul(&Coeff::from_phase(t))
    }

    /// Complex conjugate. Weights are rational (real), so conjugation only
    /// negates the phases.
    pub fn conj(&self) -> Coeff {
        match self {
            Coeff::Exact(m) => {
                Coeff::Exact(m.iter().map(|(t, w)| (canon_ratio(-t), *w)).collect())
            }
            Coeff::Approx(z) => Coeff::Approx(z.conj()),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(m) if m.is_empty() => write!(f, "0"),
            Coeff::Exact(m) => {
                let parts: Vec<String> = m
                    .iter()
                    .map(|(t, w)| {
                        if t.is_zero() {
                            format!("{w}")
                        } else {
                            format!("{w}*e(2pi i {t})")
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
            Coeff::Approx(z) => write!(f, "{z}"),
        }
    }
}
