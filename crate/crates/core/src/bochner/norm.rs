//! Exact values of `L^q(ℓ^p)` norms for integral exponents.
//!
//! A power of the norm is a finite sum `Σ cᵢ · Nᵢ^{1/t}` with rational `cᵢ`
//! and `t`-th-power-free integers `Nᵢ`. Roots of distinct such integers are
//! linearly independent over the rationals, so two sums are equal as real
//! numbers exactly when their normal forms coincide.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::rational::{format_rational, rational_to_f64, Rational};

/// Trial division stops here; a larger cofactor is only tested for being a
/// perfect power.
const TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalSum {
    root: u32,
    terms: BTreeMap<BigInt, Rational>,
}

impl RadicalSum {
    pub fn zero(root: u32) -> Self {
        RadicalSum {
            root,
            terms: BTreeMap::new(),
        }
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn terms(&self) -> &BTreeMap<BigInt, Rational> {
        &self.terms
    }

    /// Adds `coefficient · base^{num/root}` for a nonnegative rational base.
    pub fn add_power(&mut self, coefficient: &Rational, base: &Rational, num: u32) {
        assert!(!base.is_negative(), "radicands are nonnegative");
        if coefficient.is_zero() || base.is_zero() {
            return;
        }
        let t = self.root;
        let (whole, rest) = (num / t, num % t);
        let mut c = coefficient * Pow::pow(base, whole);
        let radicand = if rest == 0 {
            BigInt::one()
        } else {
            // (a/b)^{rest/t} = (a^rest · b^{t-rest})^{1/t} / b
            let (a, b) = (base.numer(), base.denom());
            let n = Pow::pow(a, rest) * Pow::pow(b, t - rest);
            let (outside, inside) = split_power(&n, t);
            c = c * Rational::from_integer(outside) / Rational::from_integer(b.clone());
            inside
        };
        let slot = self.terms.entry(radicand.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(n, c)| rational_to_f64(c) * n.to_f64().unwrap_or(f64::INFINITY).powf(1.0 / self.root as f64))
            .sum()
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, c)| {
                if n.is_one() {
                    format_rational(c)
                } else if self.root == 2 {
                    format!("{}*sqrt({n})", format_rational(c))
                } else {
                    format!("{}*root{}({n})", format_rational(c), self.root)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for RadicalSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `n = outside^t · inside` with `inside` free of `t`-th powers.
pub fn split_power(n: &BigInt, t: u32) -> (BigInt, BigInt) {
    assert!(n.is_positive() && t >= 1);
    if t == 1 {
        return (n.clone(), BigInt::one());
    }
    let mut rest = n.clone();
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    let mut d: u64 = 2;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        let mut e = 0u32;
        while rest.is_multiple_of(&bd) {
            rest /= &bd;
            e += 1;
        }
        if e > 0 {
            outside *= Pow::pow(&bd, e / t);
            inside *= Pow::pow(&bd, e % t);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let r = rest.nth_root(t);
        if Pow::pow(&r, t) == rest {
            outside *= r;
        } else {
            inside *= rest;
        }
    }
    (outside, inside)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn square_roots_normalise() {
        let mut a = RadicalSum::zero(2);
        a.add_power(&int(1), &int(8), 1);
        let mut b = RadicalSum::zero(2);
        b.add_power(&int(2), &int(2), 1);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "2/1*sqrt(2)");
        let mut c = RadicalSum::zero(2);
        c.add_power(&ratio(1, 2), &int(6), 1);
        c.add_power(&ratio(1, 2), &int(6), 1);
        assert_eq!(c.terms().len(), 1);
        assert!((c.to_f64() - 6f64.sqrt()).abs() < 1e-12);
        let mut d = RadicalSum::zero(2);
        d.add_power(&int(1), &ratio(1, 2), 1);
        let mut e = RadicalSum::zero(2);
        e.add_power(&ratio(1, 2), &int(2), 1);
        assert_eq!(d, e);
    }

    #[test]
    fn integral_powers_collapse() {
        let mut a = RadicalSum::zero(1);
        a.add_power(&ratio(1, 2), &int(3), 2);
        assert_eq!(a.terms().get(&BigInt::one()), Some(&ratio(9, 2)));
        let mut z = RadicalSum::zero(2);
        z.add_power(&int(1), &int(0), 1);
        assert_eq!(z, RadicalSum::zero(2));
    }

    #[test]
    fn split_power_examples() {
        assert_eq!(split_power(&BigInt::from(72), 2), (BigInt::from(6), BigInt::from(2)));
        assert_eq!(split_power(&BigInt::from(54), 3), (BigInt::from(3), BigInt::from(2)));
        let big_prime_square = BigInt::from(1_000_003u64) * BigInt::from(1_000_003u64);
        assert_eq!(
            split_power(&(big_prime_square * 5), 2),
            (BigInt::from(1_000_003u64), BigInt::from(5))
        );
    }
}
