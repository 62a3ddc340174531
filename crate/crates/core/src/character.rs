//! Values of characters at lattice elements.
//!
//! A value is `exp(m) · exp(2πi·(lift + angle/2π))` where the log-modulus `m`
//! and the optional symbolic `angle` are rational combinations of declared
//! transcendental symbols, treated as Q-linearly independent.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{fmt_rational, Q};

/// Rational combination of declared real symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogReal {
    coeffs: BTreeMap<String, Q>,
}

impl LogReal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(name: &str) -> Self {
        Self::from_terms([(name.to_string(), Q::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (String, Q)>) -> Self {
        let mut out = Self::default();
        for (s, c) in terms {
            out.add_term(&s, &c);
        }
        out
    }

    fn add_term(&mut self, s: &str, c: &Q) {
        let e = self.coeffs.entry(s.to_string()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(s);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&String, &Q)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &LogReal) -> LogReal {
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_term(s, c);
        }
        out
    }

    pub fn scale(&self, e: &Q) -> LogReal {
        if e.is_zero() {
            return LogReal::zero();
        }
        LogReal { coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), c * e)).collect() }
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(s, c)| format!("{}*{}", fmt_rational(c), s)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `exp(2πi·lift) · exp(i·angle)`; the lift is kept unreduced so rational
/// powers are single-valued.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Phase {
    pub lift: Q,
    pub angle: LogReal,
}

impl Phase {
    pub fn rational(lift: Q) -> Self {
        Phase { lift, angle: LogReal::zero() }
    }

    pub fn is_trivial(&self) -> bool {
        self.lift.is_integer() && self.angle.is_zero()
    }

    /// Canonical representative of the lift in [0, 1).
    pub fn reduced(&self) -> Q {
        &self.lift - self.lift.floor()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CharacterValue {
    pub modulus: LogReal,
    pub phase: Phase,
}

impl CharacterValue {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(modulus: LogReal, lift: Q) -> Self {
        CharacterValue { modulus, phase: Phase::rational(lift) }
    }

    pub fn mul(&self, other: &CharacterValue) -> CharacterValue {
        CharacterValue {
            modulus: self.modulus.add(&other.modulus),
            phase: Phase {
                lift: &self.phase.lift + &other.phase.lift,
                angle: self.phase.angle.add(&other.phase.angle),
            },
        }
    }

    pub fn inv(&self) -> CharacterValue {
        cv_pow(self, &-Q::one())
    }
}

/// Scales modulus, lift and angle by `e`.
pub fn cv_pow(v: &CharacterValue, e: &Q) -> CharacterValue {
    CharacterValue {
        modulus: v.modulus.scale(e),
        phase: Phase { lift: &v.phase.lift * e, angle: v.phase.angle.scale(e) },
    }
}

pub fn cv_is_one(v: &CharacterValue) -> bool {
    v.modulus.is_zero() && v.phase.is_trivial()
}

impl fmt::Display for CharacterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({}) * e^(2 pi i {})", self.modulus, fmt_rational(&self.phase.lift))?;
        if !self.phase.angle.is_zero() {
            write!(f, " * e^(i ({}))", self.phase.angle)?;
        }
        Ok(())
    }
}
