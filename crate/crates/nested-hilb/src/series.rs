//! Truncated bivariate series in `(q, t)` with exact rational coefficients.
//!
//! Truncation is by total degree: a series of truncation `D` stores exactly
//! the coefficients with `dq + dt <= D` and both exponents nonnegative.
//! Arithmetic never rounds; mismatched truncations are a usage error.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::util::rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTSeries {
    trunc: i64,
    coeffs: BTreeMap<(i64, i64), BigRational>,
}

impl QTSeries {
    pub fn zero(trunc: i64) -> Self {
        assert!(trunc >= 0);
        QTSeries {
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(trunc: i64) -> Self {
        Self::monomial(0, 0, rat(1), trunc)
    }

    pub fn monomial(dq: i64, dt: i64, c: BigRational, trunc: i64) -> Self {
        let mut s = Self::zero(trunc);
        s.add_coeff(dq, dt, c);
        s
    }

    pub fn from_coeffs<I>(trunc: i64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), BigRational)>,
    {
        let mut s = Self::zero(trunc);
        for ((dq, dt), c) in coeffs {
            s.add_coeff(dq, dt, c);
        }
        s
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, dq: i64, dt: i64) -> BigRational {
        self.coeffs
            .get(&(dq, dt))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Adds to one coefficient; entries outside the truncation region are
    /// dropped, zeros are not stored.
    pub fn add_coeff(&mut self, dq: i64, dt: i64, c: BigRational) {
        assert!(dq >= 0 && dt >= 0, "series exponents must be nonnegative");
        if c.is_zero() || dq + dt > self.trunc {
            return;
        }
        let entry = self
            .coeffs
            .entry((dq, dt))
            .or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&(dq, dt));
        }
    }

    pub fn add(&self, other: &QTSeries) -> QTSeries {
        assert_eq!(self.trunc, other.trunc, "truncation mismatch");
        let mut out = self.clone();
        for (&(dq, dt), c) in &other.coeffs {
            out.add_coeff(dq, dt, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> QTSeries {
        if c.is_zero() {
            return QTSeries::zero(self.trunc);
        }
        QTSeries {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &QTSeries) -> QTSeries {
        assert_eq!(self.trunc, other.trunc, "truncation mismatch");
        let mut out = QTSeries::zero(self.trunc);
        for (&(aq, at), ac) in &self.coeffs {
            for (&(bq, bt), bc) in &other.coeffs {
                if aq + bq + at + bt <= self.trunc {
                    out.add_coeff(aq + bq, at + bt, ac * bc);
                }
            }
        }
        out
    }

    /// Multiplies by the expansion of `1/(1 - q^a t^b)`; needs `a, b >= 0`
    /// and `(a, b) != (0, 0)`.
    pub fn mul_inv_binomial(&self, a: i64, b: i64) -> QTSeries {
        assert!(
            a >= 0 && b >= 0 && a + b > 0,
            "binomial step must be nonnegative and nonzero"
        );
        let mut out = QTSeries::zero(self.trunc);
        for (&(dq, dt), c) in &self.coeffs {
            let mut j = 0;
            loop {
                let (q, t) = (dq + a * j, dt + b * j);
                if q + t > self.trunc {
                    break;
                }
                out.add_coeff(q, t, c.clone());
                j += 1;
            }
        }
        out
    }

    /// Swaps the roles of `q` and `t`.
    pub fn transpose(&self) -> QTSeries {
        QTSeries {
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&(dq, dt), c)| ((dt, dq), c.clone()))
                .collect(),
        }
    }

    /// Coefficients sorted by `(dq + dt, dq)`, the canonical output order.
    pub fn sorted_coeffs(&self) -> Vec<((i64, i64), BigRational)> {
        let mut rows: Vec<_> = self.coeffs.iter().map(|(&k, v)| (k, v.clone())).collect();
        rows.sort_by_key(|&((dq, dt), _)| (dq + dt, dq));
        rows
    }

    /// First coefficient where the two series differ, scanning in the
    /// canonical output order. `None` means equal through the truncation.
    pub fn first_mismatch(&self, other: &QTSeries) -> Option<(i64, i64, BigRational, BigRational)> {
        assert_eq!(self.trunc, other.trunc, "truncation mismatch");
        let mut keys: Vec<(i64, i64)> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        keys.sort_by_key(|&(dq, dt)| (dq + dt, dq));
        keys.dedup();
        for (dq, dt) in keys {
            let a = self.coeff(dq, dt);
            let b = other.coeff(dq, dt);
            if a != b {
                return Some((dq, dt, a, b));
            }
        }
        None
    }

    /// JSON rows `[dq, dt, coefficient]` sorted by `(dq + dt, dq)`.
    /// Coefficients here are always integers; non-integrality would be an
    /// exactness bug, so it panics.
    pub fn to_json_coeffs(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .sorted_coeffs()
            .into_iter()
            .map(|((dq, dt), c)| {
                assert!(
                    c.denom().is_one(),
                    "non-integer series coefficient at ({dq},{dt})"
                );
                serde_json::json!([
                    dq,
                    dt,
                    c.numer()
                        .to_string()
                        .parse::<i64>()
                        .unwrap_or_else(|_| panic!(
                            "series coefficient at ({dq},{dt}) exceeds i64"
                        ),)
                ])
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

impl fmt::Display for QTSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((dq, dt), c) in self.sorted_coeffs() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c.denom().is_one() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            match (dq, dt) {
                (0, 0) => write!(f, "{coeff}")?,
                _ => {
                    if !c.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if dq > 0 {
                        write!(
                            f,
                            "q{}",
                            if dq > 1 {
                                format!("^{dq}")
                            } else {
                                String::new()
                            }
                        )?;
                    }
                    if dt > 0 {
                        write!(
                            f,
                            "t{}",
                            if dt > 1 {
                                format!("^{dt}")
                            } else {
                                String::new()
                            }
                        )?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Expands `numerator / prod (1 - q^a t^b)` as a truncated series. The
/// numerator is a list of `((dq, dt), integer coefficient)`; every binomial
/// step must be nonnegative and nonzero.
pub fn expand_rational(
    numerator: &[((i64, i64), i64)],
    denom_binomials: &[(i64, i64)],
    trunc: i64,
) -> QTSeries {
    let mut s = QTSeries::from_coeffs(
        trunc,
        numerator.iter().map(|&((dq, dt), c)| ((dq, dt), rat(c))),
    );
    for &(a, b) in denom_binomials {
        s = s.mul_inv_binomial(a, b);
    }
    s
}
