//! Laurent polynomials `ℚ[x, x⁻¹]` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Finite map exponent → nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(0, BigRational::one())
    }

    pub fn monomial(exp: i64, coeff: BigRational) -> LaurentPoly {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    pub fn constant(c: BigRational) -> LaurentPoly {
        LaurentPoly::monomial(0, c)
    }

    pub fn x_pow(exp: i64) -> LaurentPoly {
        LaurentPoly::monomial(exp, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.coeffs.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigRational)> {
        self.coeffs.iter()
    }

    /// Constant term, if the polynomial is a constant (or zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => self.coeffs.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (exp, c) in &other.coeffs {
            let entry = coeffs.entry(*exp).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(exp);
            }
        }
        LaurentPoly { coeffs }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    /// Exponent-wise convolution.
    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut coeffs: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let entry = coeffs.entry(e1 + e2).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs }
    }

    pub fn scale(&self, k: &BigRational) -> LaurentPoly {
        if k.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// `x ↦ x⁻¹`, the involution used by the star on matrix blocks.
    pub fn invert_variable(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (exp, c) in &self.coeffs {
            if first {
                first = false;
            } else {
                f.write_str(" + ")?;
            }
            match exp {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => f.write_str("x")?,
                1 => write!(f, "{c} x")?,
                _ if c.is_one() => write!(f, "x^{exp}")?,
                _ => write!(f, "{c} x^{exp}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
