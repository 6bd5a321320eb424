//! Equivariant Euler characteristic of `O(m,k)` on the nested Hilbert
//! scheme as a sum over torus fixed points.
//!
//! Each fixed point is a nested pair `(lambda, added box)` with larger
//! diagram `mu`. Its contribution is a Laurent monomial numerator over a
//! product of binomials `1 - q^a t^b`:
//!
//! - numerator: `weight(box)^k * prod_{cell in lambda} weight(cell)^{k+m}`;
//! - every cell of `mu` other than the box contributes two binomials, with
//!   arm `a` and leg `l` measured in `mu`:
//!   cells in the box's row give `(1 - q^-a t^{1+l})(1 - q^a t^-l)`,
//!   cells in the box's column give `(1 - q^-a t^l)(1 - q^{1+a} t^-l)`,
//!   all remaining cells give `(1 - q^-a t^{1+l})(1 - q^{1+a} t^-l)`;
//! - a global factor `(1-q)(1-t)` divides every contribution.
//!
//! Summed over all nested pairs the Laurent contributions with negative
//! exponents cancel and the result is an honest power series; for
//! `m, k > 0` it is the bigraded character of the space of sections.
//!
//! Expansion strategy: rather than summing rational functions over a
//! common denominator (which needs bivariate gcd), each contribution is
//! expanded as a Laurent series graded by the weight `w(a,b) = a + W*b`
//! with `W = n + 2`. That `W` makes every binomial weight nonzero, each
//! factor expands geometrically on its positive-weight side via
//! `1/(1-u) = -u^{-1}/(1-u^{-1})`, and expanding every contribution
//! through weighted degree `W*D` makes the sum exact for all monomials of
//! total degree at most `D`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::QTSeries;
use crate::young::{cell_weight, nested_pairs, row_col_cells, NestedPair};

/// Exponent linear in the twist parameters: `m_coeff * m + k_coeff * k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineExp {
    pub m_coeff: i64,
    pub k_coeff: i64,
}

impl AffineExp {
    pub fn eval(&self, m: i64, k: i64) -> i64 {
        self.m_coeff * m + self.k_coeff * k
    }
}

/// One fixed-point contribution with the twist parameters left symbolic.
/// `binomials` is the sorted multiset of `(a, b)` pairs for the factors
/// `1 - q^a t^b` beyond the global `(1-q)(1-t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicTerm {
    pub pair: NestedPair,
    pub num_q: AffineExp,
    pub num_t: AffineExp,
    pub binomials: Vec<(i64, i64)>,
}

/// A fixed-point contribution at concrete `(m, k)`: Laurent monomial
/// numerator `q^num_q t^num_t` over the `binomials` times the global
/// `(1-q)(1-t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalTerm {
    pub num_q: i64,
    pub num_t: i64,
    pub binomials: Vec<(i64, i64)>,
}

/// Assembles the contribution of one nested pair with symbolic `(m, k)`.
pub fn fixed_point_term_symbolic(pair: &NestedPair) -> SymbolicTerm {
    let mu = pair.mu();
    let (bq, bt) = cell_weight(pair.added);
    let mut lam_q = 0;
    let mut lam_t = 0;
    for c in pair.lambda.cells() {
        let (wq, wt) = cell_weight(c);
        lam_q += wq;
        lam_t += wt;
    }
    // weight(box)^k * prod weight(cell)^{k+m}
    let num_q = AffineExp {
        m_coeff: lam_q,
        k_coeff: bq + lam_q,
    };
    let num_t = AffineExp {
        m_coeff: lam_t,
        k_coeff: bt + lam_t,
    };

    let (row, col, rest) = row_col_cells(&mu, pair.added);
    let mut binomials = Vec::new();
    for c in rest {
        let (a, l) = (mu.arm(c) as i64, mu.leg(c) as i64);
        binomials.push((-a, 1 + l));
        binomials.push((1 + a, -l));
    }
    for c in row {
        let (a, l) = (mu.arm(c) as i64, mu.leg(c) as i64);
        binomials.push((-a, 1 + l));
        binomials.push((a, -l));
    }
    for c in col {
        let (a, l) = (mu.arm(c) as i64, mu.leg(c) as i64);
        binomials.push((-a, l));
        binomials.push((1 + a, -l));
    }
    binomials.sort_unstable();
    SymbolicTerm {
        pair: pair.clone(),
        num_q,
        num_t,
        binomials,
    }
}

/// The contribution of one nested pair at concrete `(m, k)`.
pub fn fixed_point_term(pair: &NestedPair, m: i64, k: i64) -> RationalTerm {
    let sym = fixed_point_term_symbolic(pair);
    RationalTerm {
        num_q: sym.num_q.eval(m, k),
        num_t: sym.num_t.eval(m, k),
        binomials: sym.binomials,
    }
}

/// Expands one contribution (including its global `(1-q)(1-t)`) as a
/// Laurent series containing every monomial of weighted degree
/// `dq + weight_t * dt <= weight_t * trunc`. Factors whose weight is
/// negative are first rewritten `1/(1-u) = -u^{-1}/(1-u^{-1})`; a factor
/// of weight zero is a convention bug and errs out.
pub fn expand_term(
    term: &RationalTerm,
    trunc: i64,
    weight_t: i64,
) -> Result<BTreeMap<(i64, i64), BigRational>> {
    let bound = weight_t * trunc;
    let mut base_q = term.num_q;
    let mut base_t = term.num_t;
    let mut sign = BigRational::one();
    let mut steps: Vec<(i64, i64)> = Vec::new();
    let mut all = term.binomials.clone();
    all.push((1, 0));
    all.push((0, 1));
    for (a, b) in all {
        let w = a + weight_t * b;
        if w == 0 {
            return Err(Error::Consistency(format!(
                "binomial (1 - q^{a} t^{b}) has zero weight under W = {weight_t}"
            )));
        }
        if w > 0 {
            steps.push((a, b));
        } else {
            sign = -sign;
            base_q -= a;
            base_t -= b;
            steps.push((-a, -b));
        }
    }
    let mut acc: BTreeMap<(i64, i64), BigRational> = BTreeMap::new();
    if base_q + weight_t * base_t <= bound {
        acc.insert((base_q, base_t), sign);
    }
    // Every step has positive weight, so the geometric loops terminate and
    // pruning past the bound loses nothing.
    for (a, b) in steps {
        let mut next: BTreeMap<(i64, i64), BigRational> = BTreeMap::new();
        for (&(q0, t0), c) in &acc {
            let mut j = 0;
            loop {
                let (q, t) = (q0 + a * j, t0 + b * j);
                if q + weight_t * t > bound {
                    break;
                }
                let entry = next.entry((q, t)).or_insert_with(BigRational::zero);
                *entry += c;
                j += 1;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    Ok(acc)
}

/// The Euler characteristic of `O(m,k)` on the nested Hilbert scheme of
/// `n` and `n+1` points, as an exact series through total degree `trunc`.
///
/// Negative Laurent exponents must cancel in the sum and, for
/// `m, k > 0`, all surviving coefficients must be nonnegative integers;
/// violations are reported as consistency failures, never dropped.
pub fn chi_series(n: usize, m: i64, k: i64, trunc: i64) -> Result<QTSeries> {
    assert!(trunc >= 0);
    let weight_t = n as i64 + 2;
    let mut total: BTreeMap<(i64, i64), BigRational> = BTreeMap::new();
    for pair in nested_pairs(n) {
        let term = fixed_point_term(&pair, m, k);
        for ((dq, dt), c) in expand_term(&term, trunc, weight_t)? {
            let entry = total.entry((dq, dt)).or_insert_with(BigRational::zero);
            *entry += c;
        }
    }
    total.retain(|_, c| !c.is_zero());
    let mut out = QTSeries::zero(trunc);
    for (&(dq, dt), c) in &total {
        if dq < 0 || dt < 0 {
            return Err(Error::Consistency(format!(
                "negative exponent survives localization sum: coefficient {c} at ({dq}, {dt})"
            )));
        }
        if !c.denom().is_one() {
            return Err(Error::Consistency(format!(
                "non-integer coefficient {c} at ({dq}, {dt})"
            )));
        }
        if m > 0 && k > 0 && c < &BigRational::zero() {
            return Err(Error::Consistency(format!(
                "negative coefficient {c} at ({dq}, {dt}) for m, k > 0"
            )));
        }
        if dq + dt <= trunc {
            out.add_coeff(dq, dt, c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rat;
    use crate::young::{Cell, Partition};

    fn pair(parts: &[usize], row: usize, col: usize) -> NestedPair {
        let lambda = if parts.is_empty() {
            Partition::empty()
        } else {
            Partition::new(parts.to_vec())
        };
        NestedPair {
            lambda,
            added: Cell { row, col },
        }
    }

    #[test]
    fn horizontal_pair_term_matches_printed_form() {
        // lambda = (2), box at (0,2): numerator q^{m+3k}, binomials
        // (1-q^{-2}t)(1-q^2)(1-q^{-1}t)(1-q).
        let sym = fixed_point_term_symbolic(&pair(&[2], 0, 2));
        assert_eq!(
            sym.num_q,
            AffineExp {
                m_coeff: 1,
                k_coeff: 3
            }
        );
        assert_eq!(
            sym.num_t,
            AffineExp {
                m_coeff: 0,
                k_coeff: 0
            }
        );
        let mut expect = vec![(-2, 1), (2, 0), (-1, 1), (1, 0)];
        expect.sort_unstable();
        assert_eq!(sym.binomials, expect);
    }

    #[test]
    fn column_box_term_matches_printed_form() {
        // lambda = (1,1), box at (1,1): numerator q^k t^{m+k}, binomials
        // (1-q)(1-t)(1-q^{-1}t^2)(1-qt^{-1}).
        let sym = fixed_point_term_symbolic(&pair(&[1, 1], 0, 1));
        assert_eq!(
            sym.num_q,
            AffineExp {
                m_coeff: 0,
                k_coeff: 1
            }
        );
        assert_eq!(
            sym.num_t,
            AffineExp {
                m_coeff: 1,
                k_coeff: 1
            }
        );
        let mut expect = vec![(1, 0), (0, 1), (-1, 2), (1, -1)];
        expect.sort_unstable();
        assert_eq!(sym.binomials, expect);
    }

    #[test]
    fn empty_diagram_term_is_bare_global_factor() {
        let sym = fixed_point_term_symbolic(&pair(&[], 0, 0));
        assert_eq!(
            sym.num_q,
            AffineExp {
                m_coeff: 0,
                k_coeff: 0
            }
        );
        assert_eq!(
            sym.num_t,
            AffineExp {
                m_coeff: 0,
                k_coeff: 0
            }
        );
        assert!(sym.binomials.is_empty());
    }

    #[test]
    fn expand_global_factor_only() {
        // 1/((1-q)(1-t)) through total degree 2.
        let term = RationalTerm {
            num_q: 0,
            num_t: 0,
            binomials: vec![],
        };
        let acc = expand_term(&term, 2, 3).unwrap();
        for key in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
            assert_eq!(acc.get(&key), Some(&rat(1)), "at {key:?}");
        }
    }

    #[test]
    fn negative_weight_factor_is_rewritten() {
        // 1/((1-q)(1-t)(1-q t^{-1})) with W = 3: the last factor has
        // weight 1 - 3 < 0 and becomes -q^{-1}t/(1 - q^{-1}t).
        let term = RationalTerm {
            num_q: 0,
            num_t: 0,
            binomials: vec![(1, -1)],
        };
        let acc = expand_term(&term, 1, 3).unwrap();
        // Expansion is -q^{-1}t * sum over steps (1,0), (0,1), (-1,1).
        assert_eq!(acc.get(&(-1, 1)), Some(&rat(-1)));
        assert_eq!(acc.get(&(0, 1)), Some(&rat(-1)));
        assert!(!acc.contains_key(&(0, 0)));
    }

    #[test]
    fn zero_weight_factor_is_a_consistency_error() {
        let term = RationalTerm {
            num_q: 0,
            num_t: 0,
            binomials: vec![(-3, 1)],
        };
        assert!(expand_term(&term, 2, 3).is_err());
    }

    #[test]
    fn chi_of_single_point_pair_is_free_square_series() {
        // n = 0: the series of the plane itself regardless of m, k.
        for (m, k) in [(1, 1), (3, 2), (0, 5)] {
            let s = chi_series(0, m, k, 2).unwrap();
            for (dq, dt) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
                assert_eq!(s.coeff(dq, dt), rat(1));
            }
        }
    }

    #[test]
    fn chi_n1_matches_direct_lattice_sum() {
        // n = 1, m = k = 1: sections counted by pairs (a, b) with
        // b >= max(1 - a, 0), convolved with 1/((1-q)(1-t)).
        let d = 6;
        let s = chi_series(1, 1, 1, d).unwrap();
        let mut lattice = QTSeries::zero(d);
        for a in 0..=d {
            for b in 0..=(d - a) {
                if b >= (1 - a).max(0) {
                    lattice.add_coeff(a, b, rat(1));
                }
            }
        }
        let expect = lattice.mul_inv_binomial(1, 0).mul_inv_binomial(0, 1);
        assert_eq!(s.first_mismatch(&expect), None);
    }

    #[test]
    fn chi_accepts_negative_twists() {
        // For a single point the numerators do not involve m at all, so
        // the Euler characteristic of O(m,1) is m-independent; the
        // negative-twist path must agree with the positive one.
        let neg = chi_series(1, -1, 1, 6).unwrap();
        let pos = chi_series(1, 1, 1, 6).unwrap();
        assert_eq!(neg.first_mismatch(&pos), None);
        assert_eq!(
            neg.first_mismatch(&crate::lattice::hilbert_series(1, 0, 1, 6)),
            None
        );
    }

    #[test]
    fn chi_is_symmetric_in_q_and_t() {
        for n in 0..=3 {
            let s = chi_series(n, 2, 1, 6).unwrap();
            assert_eq!(s, s.transpose(), "n = {n}");
        }
    }
}
