//! Sparse multivariate (Laurent) polynomials over the rationals with a
//! fixed lexicographic term order, and Gaussian elimination pivoting on
//! lex-minimal terms.
//!
//! The variable list is `x, y, x_1, ..., x_n, y_1, ..., y_n` (the ambient
//! pair `x, y` is optional, see [`VarSpace`]). A monomial's exponent vector
//! lists exponents in that order, and monomials compare lexicographically
//! by that vector: the first differing exponent decides. The *trailing
//! term* of a nonzero polynomial is its lex-minimal term. With points of a
//! lex-sorted index set placed on `(x_1,y_1), ..., (x_n,y_n)` the diagonal
//! monomial of a determinant is trailing in this order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::util::rat;

/// The ordered variable set: `n` point-variable pairs, optionally preceded
/// by the ambient pair `x, y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSpace {
    n: usize,
    includes_xy: bool,
}

impl VarSpace {
    /// Variables `x_1, ..., x_n, y_1, ..., y_n`.
    pub fn blowup(n: usize) -> Self {
        VarSpace {
            n,
            includes_xy: false,
        }
    }

    /// Variables `x, y, x_1, ..., x_n, y_1, ..., y_n`.
    pub fn nested(n: usize) -> Self {
        VarSpace {
            n,
            includes_xy: true,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn includes_xy(&self) -> bool {
        self.includes_xy
    }

    pub fn dims(&self) -> usize {
        2 * self.n + if self.includes_xy { 2 } else { 0 }
    }

    /// Index of the ambient `x`.
    pub fn x(&self) -> usize {
        assert!(self.includes_xy, "space has no ambient x, y pair");
        0
    }

    /// Index of the ambient `y`.
    pub fn y(&self) -> usize {
        assert!(self.includes_xy, "space has no ambient x, y pair");
        1
    }

    /// Index of `x_i` for `i` in `0..n`.
    pub fn xi(&self, i: usize) -> usize {
        assert!(i < self.n);
        if self.includes_xy {
            2 + i
        } else {
            i
        }
    }

    /// Index of `y_i` for `i` in `0..n`.
    pub fn yi(&self, i: usize) -> usize {
        assert!(i < self.n);
        if self.includes_xy {
            2 + self.n + i
        } else {
            self.n + i
        }
    }

    pub fn var_name(&self, idx: usize) -> String {
        assert!(idx < self.dims());
        if self.includes_xy {
            match idx {
                0 => "x".to_string(),
                1 => "y".to_string(),
                _ if idx < 2 + self.n => format!("x{}", idx - 1),
                _ => format!("y{}", idx - 1 - self.n),
            }
        } else if idx < self.n {
            format!("x{}", idx + 1)
        } else {
            format!("y{}", idx - self.n + 1)
        }
    }
}

/// Exponent vector over a [`VarSpace`]. Entries may be negative in Laurent
/// contexts. The derived `Ord` is the lexicographic term order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<i64>,
}

impl Monomial {
    pub fn new(exps: Vec<i64>) -> Self {
        Monomial { exps }
    }

    /// The constant monomial.
    pub fn unit(dims: usize) -> Self {
        Monomial {
            exps: vec![0; dims],
        }
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn dims(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(
            self.exps.len(),
            other.exps.len(),
            "monomials from different spaces"
        );
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn has_negative(&self) -> bool {
        self.exps.iter().any(|&e| e < 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().sum()
    }
}

/// Total lexicographic comparison of two monomials over one space.
/// Panics when the spaces (vector lengths) differ.
pub fn lex_compare(a: &Monomial, b: &Monomial) -> Ordering {
    assert_eq!(
        a.exps.len(),
        b.exps.len(),
        "monomials from different spaces"
    );
    a.cmp(b)
}

/// Sparse polynomial: map from monomial to nonzero rational coefficient.
/// Terms iterate in lex-increasing order, so the first term is trailing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MvPoly {
    space: VarSpace,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MvPoly {
    pub fn zero(space: VarSpace) -> Self {
        MvPoly {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: VarSpace) -> Self {
        Self::constant(space, rat(1))
    }

    pub fn constant(space: VarSpace, c: BigRational) -> Self {
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(space.dims()), c);
        }
        p
    }

    /// The variable with the given index, as a polynomial.
    pub fn var(space: VarSpace, idx: usize) -> Self {
        let mut exps = vec![0; space.dims()];
        exps[idx] = 1;
        Self::term(space, Monomial::new(exps), rat(1))
    }

    pub fn term(space: VarSpace, mono: Monomial, c: BigRational) -> Self {
        assert_eq!(mono.dims(), space.dims());
        let mut p = Self::zero(space);
        if !c.is_zero() {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn from_terms<I>(space: VarSpace, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut p = Self::zero(space);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, c: BigRational) {
        assert_eq!(mono.dims(), self.space.dims());
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lex-increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &MvPoly) -> MvPoly {
        assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MvPoly) -> MvPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MvPoly {
        MvPoly {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MvPoly {
        if c.is_zero() {
            return MvPoly::zero(self.space);
        }
        MvPoly {
            space: self.space,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MvPoly) -> MvPoly {
        assert_eq!(self.space, other.space);
        let mut out = MvPoly::zero(self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, mono: &Monomial, c: &BigRational) -> MvPoly {
        let mut out = MvPoly::zero(self.space);
        for (m, k) in &self.terms {
            out.add_term(m.mul(mono), k * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MvPoly {
        let mut out = MvPoly::one(self.space);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// The lex-minimal term. Errors on the zero polynomial.
    pub fn trailing_term(&self) -> Result<(&Monomial, &BigRational)> {
        self.terms.iter().next().ok_or(Error::ZeroPolynomial)
    }

    fn trailing_cloned(&self) -> Option<(Monomial, BigRational)> {
        self.terms
            .iter()
            .next()
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Bidegree of a monomial: total exponent on the `x` block (incl. the
    /// ambient `x`) and on the `y` block.
    pub fn bidegree_of(space: VarSpace, mono: &Monomial) -> (i64, i64) {
        let mut dq = 0;
        let mut dt = 0;
        if space.includes_xy() {
            dq += mono.exps[space.x()];
            dt += mono.exps[space.y()];
        }
        for i in 0..space.n() {
            dq += mono.exps[space.xi(i)];
            dt += mono.exps[space.yi(i)];
        }
        (dq, dt)
    }

    /// Sum of the terms of bidegree exactly `(dq, dt)`.
    pub fn graded_component(&self, dq: i64, dt: i64) -> MvPoly {
        MvPoly {
            space: self.space,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| Self::bidegree_of(self.space, m) == (dq, dt))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `Some((dq, dt))` when every term has the same bidegree.
    pub fn bidegree(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys();
        let first = Self::bidegree_of(self.space, it.next()?);
        for m in it {
            if Self::bidegree_of(self.space, m) != first {
                return None;
            }
        }
        Some(first)
    }

    /// JSON form: list of `[exponent-vector, numerator, denominator]` in
    /// lex-increasing term order. Numerator and denominator are decimal
    /// strings so arbitrary precision survives the round trip.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                serde_json::json!([m.exps(), c.numer().to_string(), c.denom().to_string()])
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

impl fmt::Display for MvPoly {
    /// Canonical text form: terms in lex-increasing order, each written
    /// `c * x1^a1 y1^b1 ...` with unit exponents and the trivial monomial
    /// elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = if c.denom().is_one() {
                c.numer().to_string()
            } else {
                format!("{}/{}", c.numer(), c.denom())
            };
            if m.is_unit() {
                write!(f, "{coeff}")?;
                continue;
            }
            let mut vars = String::new();
            for (idx, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push(' ');
                }
                vars.push_str(&self.space.var_name(idx));
                if e != 1 {
                    vars.push_str(&format!("^{e}"));
                }
            }
            if c.is_one() {
                write!(f, "{vars}")?;
            } else if (-c).is_one() {
                write!(f, "-{vars}")?;
            } else {
                write!(f, "{coeff} * {vars}")?;
            }
        }
        Ok(())
    }
}

/// Result of lex elimination: an echelon basis with pairwise-distinct
/// trailing monomials, normalized to trailing coefficient one, plus the set
/// of those trailing monomials. The trailing set equals the set of trailing
/// monomials of all nonzero elements of the span, and the basis length is
/// the dimension of the span.
#[derive(Debug, Clone)]
pub struct LexReduced {
    pub basis: Vec<MvPoly>,
    pub trailing: BTreeSet<Monomial>,
}

impl LexReduced {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Gaussian elimination pivoting on lex-minimal monomials. The empty
/// generator list reduces to an empty basis.
pub fn row_reduce_lex(gens: &[MvPoly]) -> LexReduced {
    let mut pivots: BTreeMap<Monomial, MvPoly> = BTreeMap::new();
    for g in gens {
        let mut f = g.clone();
        while let Some((tm, tc)) = f.trailing_cloned() {
            match pivots.get(&tm) {
                Some(p) => {
                    // p has trailing coefficient 1, so this cancels tm.
                    f = f.sub(&p.scale(&tc));
                }
                None => {
                    let inv = BigRational::one() / tc;
                    pivots.insert(tm, f.scale(&inv));
                    break;
                }
            }
        }
    }
    LexReduced {
        trailing: pivots.keys().cloned().collect(),
        basis: pivots.into_values().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::ratio;
    use proptest::prelude::*;

    fn mono(exps: &[i64]) -> Monomial {
        Monomial::new(exps.to_vec())
    }

    fn poly(space: VarSpace, terms: &[(&[i64], i64)]) -> MvPoly {
        MvPoly::from_terms(space, terms.iter().map(|(e, c)| (mono(e), rat(*c))))
    }

    #[test]
    fn lex_order_examples() {
        // n = 2, no ambient pair: exponent vectors (x1, x2, y1, y2).
        assert_eq!(
            lex_compare(&mono(&[1, 1, 0, 0]), &mono(&[2, 0, 0, 0])),
            Ordering::Less
        );
        // The x1 exponent is the most significant coordinate, so y1 with
        // vector (0,0,1,0) precedes x2 with vector (0,1,0,0).
        assert_eq!(
            lex_compare(&mono(&[0, 0, 1, 0]), &mono(&[0, 1, 0, 0])),
            Ordering::Less
        );
        // Constant divides everything and is minimal.
        assert_eq!(
            lex_compare(&mono(&[0, 0, 0, 0]), &mono(&[0, 0, 0, 1])),
            Ordering::Less
        );
    }

    #[test]
    fn trailing_of_two_by_two_determinant() {
        // x2 - x1 has trailing term x2: its vector (0,1,0,0) is lex-minimal.
        let s = VarSpace::blowup(2);
        let f = poly(s, &[(&[0, 1, 0, 0], 1), (&[1, 0, 0, 0], -1)]);
        let (tm, tc) = f.trailing_term().unwrap();
        assert_eq!(tm, &mono(&[0, 1, 0, 0]));
        assert_eq!(tc, &rat(1));
    }

    #[test]
    fn trailing_of_constant() {
        let s = VarSpace::blowup(2);
        let f = MvPoly::constant(s, rat(5));
        let (tm, tc) = f.trailing_term().unwrap();
        assert!(tm.is_unit());
        assert_eq!(tc, &rat(5));
    }

    #[test]
    fn trailing_of_sorted_diagonal_monomial() {
        // Trailing monomial pattern for the 4-point index set
        // {(0,0),(0,2),(1,2),(2,1)}: exponents (0,0,1,2 | 0,2,2,1).
        let s = VarSpace::blowup(4);
        let diag = mono(&[0, 0, 1, 2, 0, 2, 2, 1]);
        let larger = mono(&[0, 0, 2, 1, 0, 2, 2, 1]);
        let f = MvPoly::from_terms(s, [(diag.clone(), rat(1)), (larger, rat(-1))]);
        assert_eq!(f.trailing_term().unwrap().0, &diag);
    }

    #[test]
    fn zero_has_no_trailing_term() {
        let s = VarSpace::blowup(1);
        assert_eq!(MvPoly::zero(s).trailing_term(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn arithmetic_basics() {
        let s = VarSpace::blowup(2);
        let f = poly(s, &[(&[1, 0, 0, 0], 1), (&[0, 1, 0, 0], -1)]); // x1 - x2
        assert!(f.add(&f.neg()).is_zero());
        let g = poly(s, &[(&[1, 0, 0, 0], 1), (&[0, 1, 0, 0], 1)]); // x1 + x2
        let prod = f.mul(&g);
        let expect = poly(s, &[(&[2, 0, 0, 0], 1), (&[0, 2, 0, 0], -1)]);
        assert_eq!(prod, expect);
    }

    #[test]
    fn graded_component_picks_bidegree() {
        let s = VarSpace::blowup(1);
        let f = poly(s, &[(&[1, 0], 1), (&[0, 1], 1)]); // x1 + y1
        assert_eq!(f.graded_component(1, 0), poly(s, &[(&[1, 0], 1)]));
        assert_eq!(f.graded_component(0, 1), poly(s, &[(&[0, 1], 1)]));
        assert!(f.graded_component(1, 1).is_zero());
        assert_eq!(f.bidegree(), None);
    }

    #[test]
    fn row_reduce_duplicates_collapse() {
        let s = VarSpace::blowup(1);
        let x1 = MvPoly::var(s, 0);
        let red = row_reduce_lex(&[x1.clone(), x1.scale(&rat(2))]);
        assert_eq!(red.rank(), 1);
        assert_eq!(red.trailing.len(), 1);
    }

    #[test]
    fn row_reduce_elimination_exposes_both_pivots() {
        let s = VarSpace::blowup(1);
        let x1 = MvPoly::var(s, 0);
        let y1 = MvPoly::var(s, 1);
        let red = row_reduce_lex(&[x1.add(&y1), y1.clone()]);
        assert_eq!(red.rank(), 2);
        let expect: BTreeSet<Monomial> = [mono(&[1, 0]), mono(&[0, 1])].into_iter().collect();
        assert_eq!(red.trailing, expect);
    }

    #[test]
    fn row_reduce_empty_input() {
        let red = row_reduce_lex(&[]);
        assert_eq!(red.rank(), 0);
        assert!(red.trailing.is_empty());
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<MvPoly>();
        assert_send_sync::<Monomial>();
        assert_send_sync::<VarSpace>();
    }

    #[test]
    fn display_is_lex_sorted_and_exact() {
        let s = VarSpace::blowup(1);
        let f = MvPoly::from_terms(
            s,
            [
                (mono(&[0, 1]), ratio(-3, 2)),
                (mono(&[1, 0]), rat(1)),
                (mono(&[0, 0]), rat(2)),
            ],
        );
        assert_eq!(f.to_string(), "2 + -3/2 * y1 + x1");
        assert_eq!(
            f.to_json().to_string(),
            r#"[[[0,0],"2","1"],[[0,1],"-3","2"],[[1,0],"1","1"]]"#
        );
    }

    fn arb_poly(space: VarSpace) -> impl Strategy<Value = MvPoly> {
        let dims = space.dims();
        proptest::collection::vec((proptest::collection::vec(0i64..4, dims), -5i64..=5), 0..6)
            .prop_map(move |terms| {
                MvPoly::from_terms(
                    space,
                    terms.into_iter().map(|(e, c)| (Monomial::new(e), rat(c))),
                )
            })
    }

    proptest! {
        #[test]
        fn mul_is_associative(
            f in arb_poly(VarSpace::blowup(2)),
            g in arb_poly(VarSpace::blowup(2)),
            h in arb_poly(VarSpace::blowup(2)),
        ) {
            prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        }

        #[test]
        fn trailing_term_is_multiplicative(
            f in arb_poly(VarSpace::blowup(2)),
            g in arb_poly(VarSpace::blowup(2)),
        ) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let prod = f.mul(&g);
            prop_assert!(!prod.is_zero());
            let tm = prod.trailing_term().unwrap().0.clone();
            let expect = f.trailing_term().unwrap().0.mul(g.trailing_term().unwrap().0);
            prop_assert_eq!(tm, expect);
        }

        #[test]
        fn trailing_of_sum_is_at_least_min(
            f in arb_poly(VarSpace::blowup(2)),
            g in arb_poly(VarSpace::blowup(2)),
        ) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let sum = f.add(&g);
            prop_assume!(!sum.is_zero());
            let tf = f.trailing_term().unwrap().0.clone();
            let tg = g.trailing_term().unwrap().0.clone();
            let lower = if tf < tg { tf } else { tg };
            prop_assert!(sum.trailing_term().unwrap().0 >= &lower);
        }

        #[test]
        fn row_reduce_rank_is_order_independent(
            gens in proptest::collection::vec(arb_poly(VarSpace::blowup(2)), 0..6),
        ) {
            let fwd = row_reduce_lex(&gens).rank();
            let mut rev = gens.clone();
            rev.reverse();
            prop_assert_eq!(fwd, row_reduce_lex(&rev).rank());
        }

        #[test]
        fn row_reduce_rank_matches_leading_term_elimination(
            gens in proptest::collection::vec(arb_poly(VarSpace::blowup(2)), 0..7),
        ) {
            prop_assert_eq!(row_reduce_lex(&gens).rank(), leading_rank_oracle(&gens));
        }
    }

    /// Independent rank computation: Gaussian elimination pivoting on the
    /// lex-maximal monomial of each row instead of the minimal one.
    fn leading_rank_oracle(gens: &[MvPoly]) -> usize {
        let mut pivots: BTreeMap<Monomial, MvPoly> = BTreeMap::new();
        for g in gens {
            let mut f = g.clone();
            while let Some((lm, lc)) = f
                .terms
                .iter()
                .next_back()
                .map(|(m, c)| (m.clone(), c.clone()))
            {
                match pivots.get(&lm) {
                    Some(p) => f = f.sub(&p.scale(&lc)),
                    None => {
                        let inv = BigRational::one() / lc;
                        pivots.insert(lm, f.scale(&inv));
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}
