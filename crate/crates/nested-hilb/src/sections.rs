//! Explicit section spaces by brute force.
//!
//! The blowup-side space `A^m_{>=k}` consists of the `m`-fold products of
//! antisymmetric polynomials whose every monomial satisfies
//! `a_i + b_i >= k` for each point index `i`. It is spanned by products
//! `Delta_{T_1} ... Delta_{T_m}` of point-set determinants where each
//! factor index set `T_j` clears some support level `k_j >= 0` with
//! `k_1 + ... + k_m = k` (equivalently `T_j` is the `k_j`-lift of an
//! arbitrary index set). For `m = 0` the space is spanned by symmetrized
//! monomials with the same support filter.
//!
//! The substitution `phi: x_i -> x_i - x, y_i -> y_i - y` transports these
//! to sections on the nested Hilbert scheme: the space for `O(m,k)` is
//! spanned by `x^a y^b phi(g)` over blowup generators `g` of
//! `A^{m+k}_{>=k}`. Membership in the vanishing ideal power `I^k` is the
//! image of the support condition under `phi`.
//!
//! Graded dimensions and trailing-monomial sets are extracted per bidegree
//! by lex elimination of the generator sets.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::PointSet;
use crate::mvpoly::{row_reduce_lex, Monomial, MvPoly, VarSpace};
use crate::series::QTSeries;
use crate::util::{binomial, parallel_map, permutation_sign, permutations, rat};

/// Which polynomial ring the space lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    /// Point variables only; `m` counts determinant factors.
    Blowup,
    /// Ambient pair `x, y` adjoined; `m` is the twist of the bundle
    /// `O(m,k)` and the generators use `m + k` determinant factors.
    Nested,
}

/// A truncated description of one section space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectionSpaceSpec {
    pub n: usize,
    pub m: i64,
    pub k: i64,
    pub d: i64,
    pub ambient: Ambient,
}

impl SectionSpaceSpec {
    /// `A^m_{>=k}` truncated at total bidegree `d`.
    pub fn blowup(n: usize, m: i64, k: i64, d: i64) -> Self {
        let spec = SectionSpaceSpec {
            n,
            m,
            k,
            d,
            ambient: Ambient::Blowup,
        };
        spec.validate();
        spec
    }

    /// Sections of `O(m,k)` truncated at total bidegree `d`. Negative `m`
    /// is fine as long as `m + k >= 0`.
    pub fn nested(n: usize, m: i64, k: i64, d: i64) -> Self {
        let spec = SectionSpaceSpec {
            n,
            m,
            k,
            d,
            ambient: Ambient::Nested,
        };
        spec.validate();
        spec
    }

    fn validate(&self) {
        assert!(self.n >= 1, "need at least one point");
        assert!(self.k >= 0 && self.d >= 0);
        assert!(
            self.factor_count() >= 0,
            "need m + k >= 0 determinant factors"
        );
    }

    /// Number of determinant factors in each generator.
    pub fn factor_count(&self) -> i64 {
        match self.ambient {
            Ambient::Blowup => self.m,
            Ambient::Nested => self.m + self.k,
        }
    }

    pub fn space(&self) -> VarSpace {
        match self.ambient {
            Ambient::Blowup => VarSpace::blowup(self.n),
            Ambient::Nested => VarSpace::nested(self.n),
        }
    }
}

/// How a generator was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Product of lifted determinants; each entry is the unlifted index
    /// set together with its lift level.
    DeltaProduct(Vec<(PointSet, i64)>),
    /// Symmetrized monomial of a point multiset (the zero-factor case).
    SymMonomial(PointSet),
}

#[derive(Debug, Clone)]
pub struct GeneratorRecord {
    pub kind: GeneratorKind,
    pub poly: MvPoly,
    pub trailing: Monomial,
}

/// The monomial placing point `j` of `s` on the variable pair
/// `(x_{j+1}, y_{j+1})`. For a lex-sorted index set this is the trailing
/// monomial of the attached determinant or symmetrized monomial.
pub fn diagonal_monomial(space: VarSpace, s: &PointSet) -> Monomial {
    assert_eq!(space.n(), s.len());
    let mut exps = vec![0i64; space.dims()];
    for (j, &(a, b)) in s.points().iter().enumerate() {
        exps[space.xi(j)] = a;
        exps[space.yi(j)] = b;
    }
    Monomial::new(exps)
}

/// The determinant `det(x_i^{a_j} y_i^{b_j})` of an `n`-point index set
/// with distinct points, expanded. Antisymmetric under the diagonal
/// permutation action and bihomogeneous of bidegree `weight(s)`.
pub fn delta_poly(s: &PointSet) -> Result<MvPoly> {
    if !s.is_strict() {
        return Err(Error::DegeneratePointSet);
    }
    let n = s.len();
    let space = VarSpace::blowup(n);
    let mut terms = Vec::new();
    for perm in permutations(n) {
        let mut exps = vec![0i64; space.dims()];
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = s.points()[j];
            exps[space.xi(i)] = a;
            exps[space.yi(i)] = b;
        }
        terms.push((Monomial::new(exps), rat(permutation_sign(&perm))));
    }
    Ok(MvPoly::from_terms(space, terms))
}

/// Orbit sum of the monomial attached to a point multiset: each distinct
/// image appears once with coefficient one.
pub fn sym_monomial(s: &PointSet) -> MvPoly {
    let n = s.len();
    let space = VarSpace::blowup(n);
    let mut monos = BTreeSet::new();
    for perm in permutations(n) {
        let mut exps = vec![0i64; space.dims()];
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = s.points()[j];
            exps[space.xi(i)] = a;
            exps[space.yi(i)] = b;
        }
        monos.insert(Monomial::new(exps));
    }
    MvPoly::from_terms(space, monos.into_iter().map(|m| (m, rat(1))))
}

/// All lex-sorted `n`-tuples of distinct points with total degree at most
/// `max_weight`.
pub fn strict_point_sets(n: usize, max_weight: i64) -> Vec<PointSet> {
    point_sets(n, max_weight, true)
}

/// As above but with repeats allowed.
pub fn multiset_point_sets(n: usize, max_weight: i64) -> Vec<PointSet> {
    point_sets(n, max_weight, false)
}

fn point_sets(n: usize, max_weight: i64, strict: bool) -> Vec<PointSet> {
    let mut pool: Vec<(i64, i64)> = Vec::new();
    for a in 0..=max_weight {
        for b in 0..=(max_weight - a) {
            pool.push((a, b));
        }
    }
    pool.sort_unstable();
    let mut out = Vec::new();
    let mut cur: Vec<(i64, i64)> = Vec::with_capacity(n);
    fn rec(
        pool: &[(i64, i64)],
        n: usize,
        budget: i64,
        start: usize,
        strict: bool,
        cur: &mut Vec<(i64, i64)>,
        out: &mut Vec<PointSet>,
    ) {
        if cur.len() == n {
            out.push(PointSet::new(cur.clone()));
            return;
        }
        for idx in start..pool.len() {
            let (a, b) = pool[idx];
            if a + b > budget {
                continue;
            }
            cur.push((a, b));
            rec(
                pool,
                n,
                budget - a - b,
                if strict { idx + 1 } else { idx },
                strict,
                cur,
                out,
            );
            cur.pop();
        }
    }
    rec(&pool, n, max_weight, 0, strict, &mut cur, &mut out);
    out
}

/// Spanning set of `A^m_{>=k}` through total bidegree `d`: all products of
/// `m` determinants whose factors jointly clear the support level `k`,
/// deduplicated as factor multisets. For `m = 0` the symmetrized monomials
/// with the support filter.
pub fn generators(spec: &SectionSpaceSpec) -> Vec<GeneratorRecord> {
    assert_eq!(
        spec.ambient,
        Ambient::Blowup,
        "generators() builds the blowup-side space"
    );
    let (n, m, k, d) = (spec.n, spec.m, spec.k, spec.d);
    let space = VarSpace::blowup(n);

    if m == 0 {
        return multiset_point_sets(n, d)
            .into_iter()
            .filter(|s| s.min_support() >= k)
            .map(|s| {
                let poly = sym_monomial(&s);
                let trailing = diagonal_monomial(space, &s);
                debug_assert_eq!(poly.trailing_term().unwrap().0, &trailing);
                GeneratorRecord {
                    kind: GeneratorKind::SymMonomial(s),
                    poly,
                    trailing,
                }
            })
            .collect();
    }

    // Factor index sets sorted by weight so the multiset recursion can cut
    // off as soon as the cheapest completion overshoots the budget.
    struct FactorInfo {
        set: PointSet,
        delta: MvPoly,
        weight: i64,
        min_support: i64,
    }
    let mut factors: Vec<FactorInfo> = strict_point_sets(n, d)
        .into_iter()
        .map(|set| {
            let delta = delta_poly(&set).expect("strict sets have nonzero determinants");
            let weight = set.total_degree();
            let min_support = set.min_support();
            FactorInfo {
                set,
                delta,
                weight,
                min_support,
            }
        })
        .collect();
    factors.sort_by(|x, y| (x.weight, &x.set).cmp(&(y.weight, &y.set)));

    struct ProductSearch<'a> {
        factors: &'a [FactorInfo],
        space: VarSpace,
        k: i64,
        stack: Vec<usize>,
        out: Vec<GeneratorRecord>,
    }

    impl ProductSearch<'_> {
        fn emit(&mut self) {
            let clearance: i64 = self
                .stack
                .iter()
                .map(|&i| self.factors[i].min_support.min(self.k))
                .sum();
            if clearance < self.k {
                return;
            }
            // Greedy split of the support level over the factors.
            let mut rem = self.k;
            let mut kind_factors = Vec::with_capacity(self.stack.len());
            let mut poly = MvPoly::one(self.space);
            let mut sum: Option<PointSet> = None;
            for &i in &self.stack {
                let ki = self.factors[i].min_support.min(rem);
                rem -= ki;
                kind_factors.push((
                    self.factors[i]
                        .set
                        .k_unlift(ki)
                        .expect("lift level at most the support"),
                    ki,
                ));
                poly = poly.mul(&self.factors[i].delta);
                sum = Some(match sum {
                    None => self.factors[i].set.clone(),
                    Some(s) => s.pointwise_sum(&self.factors[i].set),
                });
            }
            debug_assert_eq!(rem, 0);
            let trailing = diagonal_monomial(self.space, &sum.expect("at least one factor"));
            debug_assert_eq!(poly.trailing_term().unwrap().0, &trailing);
            self.out.push(GeneratorRecord {
                kind: GeneratorKind::DeltaProduct(kind_factors),
                poly,
                trailing,
            });
        }

        fn rec(&mut self, budget: i64, remaining: i64, start: usize) {
            if remaining == 0 {
                self.emit();
                return;
            }
            for idx in start..self.factors.len() {
                let w = self.factors[idx].weight;
                if w * remaining > budget {
                    break;
                }
                self.stack.push(idx);
                self.rec(budget - w, remaining - 1, idx);
                self.stack.pop();
            }
        }
    }

    let mut search = ProductSearch {
        factors: &factors,
        space,
        k,
        stack: Vec::with_capacity(m as usize),
        out: Vec::new(),
    };
    search.rec(d, m, 0);
    search.out
}

/// Every monomial of `f` satisfies `a_i + b_i >= k` for every point index.
pub fn support_ok(f: &MvPoly, k: i64) -> bool {
    let space = f.space();
    assert!(
        !space.includes_xy(),
        "support condition lives in the blowup ring"
    );
    f.terms().all(|(mono, _)| {
        (0..space.n()).all(|i| mono.exps()[space.xi(i)] + mono.exps()[space.yi(i)] >= k)
    })
}

/// Every per-point exponent pair of every monomial of `f` satisfies each
/// halfplane `alpha * a + beta * b >= c`.
pub fn polygon_support_ok(f: &MvPoly, halfplanes: &[(i64, i64, i64)]) -> bool {
    let space = f.space();
    assert!(
        !space.includes_xy(),
        "support condition lives in the blowup ring"
    );
    f.terms().all(|(mono, _)| {
        (0..space.n()).all(|i| {
            let a = mono.exps()[space.xi(i)];
            let b = mono.exps()[space.yi(i)];
            halfplanes
                .iter()
                .all(|&(alpha, beta, c)| alpha * a + beta * b >= c)
        })
    })
}

/// Reinterprets a blowup-ring polynomial in the nested ring (zero
/// exponents on the ambient pair).
pub fn embed_in_nested(f: &MvPoly) -> MvPoly {
    let from = f.space();
    assert!(!from.includes_xy());
    let to = VarSpace::nested(from.n());
    MvPoly::from_terms(
        to,
        f.terms().map(|(mono, c)| {
            let mut exps = vec![0i64; to.dims()];
            for i in 0..from.n() {
                exps[to.xi(i)] = mono.exps()[from.xi(i)];
                exps[to.yi(i)] = mono.exps()[from.yi(i)];
            }
            (Monomial::new(exps), c.clone())
        }),
    )
}

/// Substitutes `var -> var + sign * other` (a ring homomorphism; `var`
/// must occur with nonnegative exponents).
fn shift_var(f: &MvPoly, var: usize, other: usize, sign: i64) -> MvPoly {
    let space = f.space();
    let mut out = Vec::new();
    for (mono, c) in f.terms() {
        let e = mono.exps()[var];
        assert!(e >= 0, "cannot shift a Laurent exponent");
        for j in 0..=e {
            let mut exps = mono.exps().to_vec();
            exps[var] = e - j;
            exps[other] += j;
            let mut coeff = c * BigRational::from_integer(binomial(e, j));
            if sign < 0 && j % 2 == 1 {
                coeff = -coeff;
            }
            out.push((Monomial::new(exps), coeff));
        }
    }
    MvPoly::from_terms(space, out)
}

/// The substitution `x_i -> x_i - x`, `y_i -> y_i - y` for every point
/// index, fixing the ambient pair.
pub fn apply_phi(f: &MvPoly) -> MvPoly {
    let space = f.space();
    assert!(space.includes_xy(), "phi acts on the nested ring");
    let mut out = f.clone();
    for i in 0..space.n() {
        out = shift_var(&out, space.xi(i), space.x(), -1);
        out = shift_var(&out, space.yi(i), space.y(), -1);
    }
    out
}

/// Inverse substitution `x_i -> x_i + x`, `y_i -> y_i + y`.
pub fn apply_phi_inv(f: &MvPoly) -> MvPoly {
    let space = f.space();
    assert!(space.includes_xy(), "phi acts on the nested ring");
    let mut out = f.clone();
    for i in 0..space.n() {
        out = shift_var(&out, space.xi(i), space.x(), 1);
        out = shift_var(&out, space.yi(i), space.y(), 1);
    }
    out
}

/// Membership in `I^k` where `I` is the intersection of the ideals
/// `(x_i - x, y_i - y)`: for each point index, rewriting `f` in the
/// shifted pair must leave every term with combined shifted exponent at
/// least `k`.
pub fn in_i_power(f: &MvPoly, k: i64) -> bool {
    let space = f.space();
    assert!(space.includes_xy(), "I^k lives in the nested ring");
    for i in 0..space.n() {
        let g = shift_var(
            &shift_var(f, space.xi(i), space.x(), 1),
            space.yi(i),
            space.y(),
            1,
        );
        let ok = g
            .terms()
            .all(|(mono, _)| mono.exps()[space.xi(i)] + mono.exps()[space.yi(i)] >= k);
        if !ok {
            return false;
        }
    }
    true
}

/// Spanning set of the sections of `O(m,k)` through total bidegree `d`:
/// ambient monomials times `phi` images of the blowup generators of
/// `A^{m+k}_{>=k}`.
pub fn nested_generators(spec: &SectionSpaceSpec) -> Vec<MvPoly> {
    assert_eq!(spec.ambient, Ambient::Nested);
    let blowup = SectionSpaceSpec::blowup(spec.n, spec.factor_count(), spec.k, spec.d);
    let nested_space = VarSpace::nested(spec.n);
    let mut out = Vec::new();
    for rec in generators(&blowup) {
        let (wq, wt) = rec.poly.bidegree().expect("generators are bihomogeneous");
        let image = apply_phi(&embed_in_nested(&rec.poly));
        for a in 0..=(spec.d - wq - wt) {
            for b in 0..=(spec.d - wq - wt - a) {
                let mut exps = vec![0i64; nested_space.dims()];
                exps[nested_space.x()] = a;
                exps[nested_space.y()] = b;
                out.push(image.mul_monomial(&Monomial::new(exps), &BigRational::one()));
            }
        }
    }
    out
}

/// Per-bidegree dimensions and trailing-monomial sets of a section space,
/// by lex elimination of its generators within each bidegree of total
/// degree at most `d`.
#[derive(Debug, Clone)]
pub struct GradedReport {
    pub dims: BTreeMap<(i64, i64), usize>,
    pub trailing: BTreeMap<(i64, i64), BTreeSet<Monomial>>,
}

impl GradedReport {
    pub fn dim(&self, dq: i64, dt: i64) -> usize {
        self.dims.get(&(dq, dt)).copied().unwrap_or(0)
    }

    /// Union of the per-bidegree trailing sets.
    pub fn trailing_union(&self) -> BTreeSet<Monomial> {
        self.trailing.values().flatten().cloned().collect()
    }

    /// Dimensions as a series truncated at `trunc`.
    pub fn dim_series(&self, trunc: i64) -> QTSeries {
        let mut s = QTSeries::zero(trunc);
        for (&(dq, dt), &r) in &self.dims {
            s.add_coeff(dq, dt, rat(r as i64));
        }
        s
    }
}

/// Groups the generator polynomials of `spec` by bidegree and row-reduces
/// each group. Groups are independent, so they run on `threads` workers.
pub fn graded_report(spec: &SectionSpaceSpec, threads: usize) -> GradedReport {
    let polys = match spec.ambient {
        Ambient::Blowup => generators(spec)
            .into_iter()
            .map(|r| r.poly)
            .collect::<Vec<_>>(),
        Ambient::Nested => nested_generators(spec),
    };
    let mut groups: BTreeMap<(i64, i64), Vec<MvPoly>> = BTreeMap::new();
    for p in polys {
        let bd = p.bidegree().expect("generators are bihomogeneous");
        if bd.0 + bd.1 <= spec.d {
            groups.entry(bd).or_default().push(p);
        }
    }
    let keys: Vec<(i64, i64)> = groups.keys().copied().collect();
    let work: Vec<((i64, i64), Vec<MvPoly>)> = keys
        .iter()
        .map(|k| (*k, groups.remove(k).unwrap()))
        .collect();
    let reduced = parallel_map(work, threads, |(bd, gens)| {
        let red = row_reduce_lex(&gens);
        (bd, red.rank(), red.trailing)
    });
    let mut dims = BTreeMap::new();
    let mut trailing = BTreeMap::new();
    for (bd, rank, tr) in reduced {
        if rank > 0 {
            dims.insert(bd, rank);
            trailing.insert(bd, tr);
        }
    }
    GradedReport { dims, trailing }
}

/// Dimension of one graded piece.
pub fn graded_dim(spec: &SectionSpaceSpec, dq: i64, dt: i64) -> usize {
    assert!(dq + dt <= spec.d, "bidegree beyond the truncation");
    let polys = match spec.ambient {
        Ambient::Blowup => generators(spec)
            .into_iter()
            .map(|r| r.poly)
            .collect::<Vec<_>>(),
        Ambient::Nested => nested_generators(spec),
    };
    let group: Vec<MvPoly> = polys
        .into_iter()
        .filter(|p| p.bidegree() == Some((dq, dt)))
        .collect();
    row_reduce_lex(&group).rank()
}

/// Trailing monomials of the whole truncated space.
pub fn trailing_set(spec: &SectionSpaceSpec, threads: usize) -> BTreeSet<Monomial> {
    graded_report(spec, threads).trailing_union()
}

/// Dimension series of the sections of `O(m,k)` through total degree `d`,
/// measured by linear algebra. The ranks are computed on the blowup side;
/// the ambient pair contributes an exact free factor because `phi` is
/// bidegree-preserving and unitriangular, so the nested dimensions are the
/// blowup dimensions convolved with the free `(q, t)` square series.
pub fn graded_dim_series(n: usize, m: i64, k: i64, d: i64, threads: usize) -> QTSeries {
    if n == 0 {
        return QTSeries::one(d)
            .mul_inv_binomial(1, 0)
            .mul_inv_binomial(0, 1);
    }
    let spec = SectionSpaceSpec::blowup(n, m + k, k, d);
    let report = graded_report(&spec, threads);
    report
        .dim_series(d)
        .mul_inv_binomial(1, 0)
        .mul_inv_binomial(0, 1)
}

/// One bidegree row of the surjectivity comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjRow {
    pub bidegree: (i64, i64),
    /// Rank of the span of products of support-splitting degree-one
    /// factors.
    pub lifted_rank: usize,
    /// Dimension of the support-constrained subspace of the full
    /// `m`-factor space, computed independently of the lift construction.
    pub full_dim: usize,
}

#[derive(Debug, Clone)]
pub struct SurjectivityReport {
    pub rows: Vec<SurjRow>,
}

impl SurjectivityReport {
    pub fn mismatches(&self) -> Vec<&SurjRow> {
        self.rows
            .iter()
            .filter(|r| r.lifted_rank != r.full_dim)
            .collect()
    }
}

/// Compares, per bidegree up to total degree `d`, the span of lifted
/// degree-one products against the full support-constrained space
/// `A^m_{>=k}`. The latter is cut out of the unconstrained product span
/// `A^m` by requiring zero coefficients on support-violating monomials, so
/// the two sides are computed along genuinely different routes.
pub fn check_surjectivity(n: usize, m: i64, k: i64, d: i64, threads: usize) -> SurjectivityReport {
    assert!(m >= 1);
    let lifted = graded_report(&SectionSpaceSpec::blowup(n, m, k, d), threads);

    let full_gens = generators(&SectionSpaceSpec::blowup(n, m, 0, d));
    let mut groups: BTreeMap<(i64, i64), Vec<MvPoly>> = BTreeMap::new();
    for rec in full_gens {
        let bd = rec.poly.bidegree().expect("generators are bihomogeneous");
        if bd.0 + bd.1 <= d {
            groups.entry(bd).or_default().push(rec.poly);
        }
    }

    let space = VarSpace::blowup(n);
    let violates =
        |mono: &Monomial| (0..n).any(|i| mono.exps()[space.xi(i)] + mono.exps()[space.yi(i)] < k);

    let work: Vec<((i64, i64), Vec<MvPoly>)> = groups.into_iter().collect();
    let rows = parallel_map(work, threads, |(bd, gens)| {
        let basis = row_reduce_lex(&gens);
        // Restriction of each basis element to the violating monomials;
        // the constrained subspace has codimension equal to the rank of
        // these restrictions.
        let bad_parts: Vec<MvPoly> = basis
            .basis
            .iter()
            .map(|p| {
                MvPoly::from_terms(
                    space,
                    p.terms()
                        .filter(|(m, _)| violates(m))
                        .map(|(m, c)| (m.clone(), c.clone())),
                )
            })
            .collect();
        let bad_rank = row_reduce_lex(&bad_parts).rank();
        SurjRow {
            bidegree: bd,
            lifted_rank: lifted.dim(bd.0, bd.1),
            full_dim: basis.rank() - bad_rank,
        }
    });
    SurjectivityReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    fn pset(pts: &[(i64, i64)]) -> PointSet {
        PointSet::new(pts.to_vec())
    }

    fn mono(exps: &[i64]) -> Monomial {
        Monomial::new(exps.to_vec())
    }

    #[test]
    fn delta_vandermonde_rows() {
        // {(0,0),(1,0)}: x2 - x1.
        let d = delta_poly(&pset(&[(0, 0), (1, 0)])).unwrap();
        assert_eq!(d.to_string(), "x2 + -x1");
        // {(0,0),(0,1)}: y2 - y1.
        let d = delta_poly(&pset(&[(0, 0), (0, 1)])).unwrap();
        assert_eq!(d.to_string(), "y2 + -y1");
    }

    #[test]
    fn delta_three_points() {
        let d = delta_poly(&pset(&[(0, 0), (0, 1), (1, 0)])).unwrap();
        assert_eq!(d.num_terms(), 6);
        // Trailing term y2 x3 with coefficient +1.
        let (tm, tc) = d.trailing_term().unwrap();
        assert_eq!(tm, &mono(&[0, 0, 1, 0, 1, 0]));
        assert_eq!(tc, &rat(1));
        assert_eq!(d.bidegree(), Some((1, 1)));
    }

    #[test]
    fn delta_degenerate() {
        assert_eq!(
            delta_poly(&pset(&[(1, 1), (1, 1)])),
            Err(Error::DegeneratePointSet)
        );
    }

    #[test]
    fn delta_is_antisymmetric() {
        // Swapping the variable pairs negates the determinant. Check via
        // the explicit swap of (x1,y1) and (x2,y2) on a 2-point set.
        let s = pset(&[(0, 1), (2, 0)]);
        let d = delta_poly(&s).unwrap();
        let space = d.space();
        let swapped = MvPoly::from_terms(
            space,
            d.terms().map(|(m, c)| {
                let e = m.exps();
                (mono(&[e[1], e[0], e[3], e[2]]), c.clone())
            }),
        );
        assert_eq!(swapped, d.neg());
    }

    #[test]
    fn sym_monomial_examples() {
        assert_eq!(sym_monomial(&pset(&[(1, 0), (1, 0)])).to_string(), "x1 x2");
        assert_eq!(
            sym_monomial(&pset(&[(1, 0), (0, 1)])).to_string(),
            "x2 y1 + x1 y2"
        );
        let m = sym_monomial(&pset(&[(1, 0), (2, 0)]));
        assert_eq!(m.to_string(), "x1 x2^2 + x1^2 x2");
        assert_eq!(m.trailing_term().unwrap().0, &mono(&[1, 2, 0, 0]));
    }

    #[test]
    fn trailing_exponent_of_product_is_pointwise_sum() {
        let s1 = pset(&[(0, 0), (0, 1), (0, 2), (1, 0)]);
        let s2 = pset(&[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let prod = delta_poly(&s1).unwrap().mul(&delta_poly(&s2).unwrap());
        let sum = s1.pointwise_sum(&s2);
        assert_eq!(
            prod.trailing_term().unwrap().0,
            &diagonal_monomial(VarSpace::blowup(4), &sum)
        );
    }

    #[test]
    fn generators_smallest_support_one_case() {
        // n = 2, one factor, support 1, degree cap 2: only the index set
        // {(0,1),(1,0)} fits.
        let spec = SectionSpaceSpec::blowup(2, 1, 1, 2);
        let gens = generators(&spec);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].poly.to_string(), "x2 y1 + -x1 y2");
        match &gens[0].kind {
            GeneratorKind::DeltaProduct(fs) => {
                assert_eq!(fs.len(), 1);
                assert_eq!(fs[0].1, 1);
                assert_eq!(fs[0].0.k_lift(1), pset(&[(0, 1), (1, 0)]));
            }
            other => panic!("unexpected kind {other:?}"),
        }
    }

    #[test]
    fn generators_single_variable_case() {
        // n = 1, one factor, no support: one generator per lattice point.
        let spec = SectionSpaceSpec::blowup(1, 1, 0, 3);
        let gens = generators(&spec);
        assert_eq!(gens.len(), 10);
        assert!(gens.iter().all(|g| g.poly.num_terms() == 1));
    }

    #[test]
    fn generators_all_satisfy_support() {
        for (n, m, k, d) in [
            (2usize, 2i64, 1i64, 5i64),
            (2, 2, 2, 6),
            (3, 1, 2, 6),
            (2, 0, 1, 4),
        ] {
            let spec = SectionSpaceSpec::blowup(n, m, k, d);
            for g in generators(&spec) {
                assert!(support_ok(&g.poly, k), "n={n} m={m} k={k}: {}", g.poly);
            }
        }
    }

    #[test]
    fn support_examples() {
        let f = sym_monomial(&pset(&[(1, 0), (0, 1)]));
        assert!(support_ok(&f, 1));
        assert!(!support_ok(&f, 2));
        // Polygon form specializes to the plain support condition.
        assert!(polygon_support_ok(&f, &[(1, 0, 0), (0, 1, 0), (1, 1, 1)]));
        assert!(!polygon_support_ok(&f, &[(1, 1, 2)]));
    }

    #[test]
    fn phi_on_first_variable() {
        let space = VarSpace::nested(2);
        let x1 = MvPoly::var(space, space.xi(0));
        let x = MvPoly::var(space, space.x());
        assert_eq!(apply_phi(&x1), x1.sub(&x));
    }

    #[test]
    fn phi_round_trip_random() {
        let space = VarSpace::nested(2);
        let mut rng = SplitMix64::new(99);
        for _ in 0..100 {
            let terms: Vec<(Monomial, BigRational)> = (0..rng.next_range(1, 5))
                .map(|_| {
                    let exps: Vec<i64> = (0..space.dims()).map(|_| rng.next_range(0, 3)).collect();
                    (Monomial::new(exps), rat(rng.next_range(-4, 4)))
                })
                .collect();
            let f = MvPoly::from_terms(space, terms);
            assert_eq!(apply_phi_inv(&apply_phi(&f)), f);
            assert_eq!(apply_phi(&apply_phi_inv(&f)), f);
        }
    }

    #[test]
    fn phi_shifts_are_unitriangular() {
        // phi(f) = f plus ambient-divisible terms of the same bidegree,
        // so the extended trailing term is the trailing term of f.
        let s = pset(&[(0, 1), (1, 0), (2, 2)]);
        let f = embed_in_nested(&delta_poly(&s).unwrap());
        let g = apply_phi(&f);
        assert_eq!(g.bidegree(), f.bidegree());
        assert_eq!(g.trailing_term().unwrap().0, f.trailing_term().unwrap().0);
        // And the difference is divisible by the ambient pair.
        let space = f.space();
        for (m, _) in g.sub(&f).terms() {
            assert!(m.exps()[space.x()] > 0 || m.exps()[space.y()] > 0);
        }
    }

    #[test]
    fn i_power_membership_examples() {
        let space = VarSpace::nested(1);
        let x1 = MvPoly::var(space, space.xi(0));
        let x = MvPoly::var(space, space.x());
        let f = x1.sub(&x).pow(2);
        assert!(in_i_power(&f, 2));
        assert!(!in_i_power(&f, 3));
        assert!(!in_i_power(&MvPoly::one(space), 1));
    }

    #[test]
    fn support_transports_through_phi() {
        // The support condition holds exactly when the phi image sits in
        // the matching ideal power.
        let mut rng = SplitMix64::new(1234);
        for (n, m, k) in [(2usize, 1i64, 1i64), (2, 2, 1), (2, 2, 2), (3, 1, 1)] {
            let gens = generators(&SectionSpaceSpec::blowup(n, m, k, 5));
            if gens.is_empty() {
                continue;
            }
            for _ in 0..20 {
                let mut f = MvPoly::zero(VarSpace::blowup(n));
                for _ in 0..3 {
                    let g = &gens[rng.next_index(gens.len())];
                    f = f.add(&g.poly.scale(&rat(rng.next_range(-3, 3))));
                }
                if f.is_zero() {
                    continue;
                }
                assert!(support_ok(&f, k));
                assert!(in_i_power(&apply_phi(&embed_in_nested(&f)), k));
                // Dropping the support by one must not overclaim.
                assert_eq!(
                    support_ok(&f, k + 1),
                    in_i_power(&apply_phi(&embed_in_nested(&f)), k + 1)
                );
            }
        }
    }

    #[test]
    fn nested_generators_all_sit_in_ideal_power() {
        let spec = SectionSpaceSpec::nested(2, 0, 1, 3);
        let gens = nested_generators(&spec);
        assert!(!gens.is_empty());
        for g in &gens {
            assert!(in_i_power(g, 1));
        }
    }

    #[test]
    fn four_point_bidegree_anchor() {
        // Two-factor space with four points, no support: within bidegree
        // (3, 5) the trailing set contains the sorted diagonal of
        // {(0,0),(0,2),(1,2),(2,1)} and excludes the perturbed tuple
        // {(0,0),(0,2),(1,1),(2,1)} (which breaks the separation bound).
        let report = graded_report(&SectionSpaceSpec::blowup(4, 2, 0, 8), 1);
        let space = VarSpace::blowup(4);
        let at = report
            .trailing
            .get(&(3, 5))
            .expect("bidegree (3,5) is populated");
        let good = diagonal_monomial(space, &pset(&[(0, 0), (0, 2), (1, 2), (2, 1)]));
        let bad = diagonal_monomial(space, &pset(&[(0, 0), (0, 2), (1, 1), (2, 1)]));
        assert!(at.contains(&good));
        assert!(!at.contains(&bad));
    }

    #[test]
    fn nested_trailing_set_is_ambient_times_lattice() {
        // Exact set equality at small scale: the trailing monomials of the
        // sections of O(m,k) are the ambient monomials times the lattice
        // set with separation m + k and support k.
        let (n, m, k, d) = (2usize, 1i64, 1i64, 5i64);
        let report = graded_report(&SectionSpaceSpec::nested(n, m, k, d), 1);
        let mut expected = BTreeSet::new();
        for p in crate::lattice::enumerate_p(n, m + k, k, d) {
            let deg = p.total_degree();
            for a in 0..=(d - deg) {
                for b in 0..=(d - deg - a) {
                    // Exponent layout: x, y, x_1..x_n, y_1..y_n.
                    let mut exps = vec![a, b];
                    exps.extend(p.points().iter().map(|&(ai, _)| ai));
                    exps.extend(p.points().iter().map(|&(_, bi)| bi));
                    expected.insert(Monomial::new(exps));
                }
            }
        }
        assert_eq!(report.trailing_union(), expected);
    }

    #[test]
    fn negative_twist_uses_symmetrized_monomials() {
        // O(-1,1): zero determinant factors, so the generators are phi
        // images of symmetrized monomials avoiding the origin. The honest
        // nested dims must match the lattice count for separation 0,
        // support 1, convolved with the free ambient factor.
        let d = 4;
        let spec = SectionSpaceSpec::nested(2, -1, 1, d);
        assert_eq!(spec.factor_count(), 0);
        let report = graded_report(&spec, 1);
        let mut lattice = QTSeries::zero(d);
        for p in crate::lattice::enumerate_p(2, 0, 1, d) {
            let (dq, dt) = p.weight();
            lattice.add_coeff(dq, dt, rat(1));
        }
        let expect = lattice.mul_inv_binomial(1, 0).mul_inv_binomial(0, 1);
        for dq in 0..=d {
            for dt in 0..=(d - dq) {
                assert_eq!(
                    rat(report.dim(dq, dt) as i64),
                    expect.coeff(dq, dt),
                    "({dq},{dt})"
                );
            }
        }
    }

    #[test]
    fn lifted_delta_passes_polygon_filter() {
        let s = pset(&[(0, 0), (0, 1), (1, 0)]).k_lift(3);
        let f = delta_poly(&s).unwrap();
        assert!(polygon_support_ok(&f, &[(1, 1, 3)]));
        assert!(support_ok(&f, 3));
    }

    #[test]
    fn nested_graded_dims_match_series_routes() {
        // Honest nested elimination against the convolution route.
        let (n, m, k, d) = (2usize, 1i64, 1i64, 5i64);
        let nested = graded_report(&SectionSpaceSpec::nested(n, m, k, d), 1);
        let series = graded_dim_series(n, m, k, d, 1);
        for dq in 0..=d {
            for dt in 0..=(d - dq) {
                assert_eq!(
                    rat(nested.dim(dq, dt) as i64),
                    series.coeff(dq, dt),
                    "bidegree ({dq},{dt})"
                );
            }
        }
    }

    #[test]
    fn trailing_set_matches_lattice_small() {
        let (n, m, k, d) = (2usize, 2i64, 1i64, 6i64);
        let report = graded_report(&SectionSpaceSpec::blowup(n, m, k, d), 1);
        let space = VarSpace::blowup(n);
        let expected: BTreeSet<Monomial> = crate::lattice::enumerate_p(n, m, k, d)
            .into_iter()
            .map(|p| diagonal_monomial(space, &p))
            .collect();
        assert_eq!(report.trailing_union(), expected);
    }

    #[test]
    fn surjectivity_single_factor_is_vacuous() {
        let report = check_surjectivity(2, 1, 1, 4, 1);
        assert!(report.mismatches().is_empty());
        let report = check_surjectivity(1, 2, 1, 4, 1);
        assert!(report.mismatches().is_empty());
    }
}
