//! The trailing-term lattice set `P(m,k)`, lifts and decompositions, the
//! dimension series by lattice-point counting, and the limiting polyhedron
//! `Delta(m,k)`.
//!
//! A point of `P(m,k)` is a lex-sorted tuple of `n` plane points
//! `(a_1,b_1) <= ... <= (a_n,b_n)` with nonnegative coordinates such that
//!
//! 1. `a_1 <= ... <= a_n`,
//! 2. `b_{j+1} >= b_j + m` whenever `a_j = a_{j+1}` (separation), and
//! 3. `b_j >= max(k - a_j, 0) + sum_{i<j} max(m - (a_j - a_i), 0)`
//!    (support).
//!
//! `m` is the separation parameter and `k` the support parameter. The
//! `k`-lift `(a, b) -> (a, b + max(k - a, 0))` bijects `P(m,0)` with
//! `P(m,k)`. `Delta(m,k)` keeps the chain and support conditions, drops
//! separation and integrality, and is cut out by finitely many halfspaces.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::QTSeries;
use crate::util::rat;

/// Lex-sorted tuple of plane points with nonnegative integer coordinates.
/// Repeats are allowed; determinant index sets additionally require
/// distinct points (see [`PointSet::strict`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet {
    points: Vec<(i64, i64)>,
}

impl PointSet {
    /// Sorts the given points into the canonical lex-increasing labeling.
    pub fn new(mut points: Vec<(i64, i64)>) -> Self {
        assert!(
            points.iter().all(|&(a, b)| a >= 0 && b >= 0),
            "point coordinates must be nonnegative"
        );
        points.sort_unstable();
        PointSet { points }
    }

    pub fn empty() -> Self {
        PointSet { points: Vec::new() }
    }

    /// Like [`PointSet::new`] but requires pairwise-distinct points.
    pub fn strict(points: Vec<(i64, i64)>) -> Result<Self> {
        let s = Self::new(points);
        if s.is_strict() {
            Ok(s)
        } else {
            Err(Error::DegeneratePointSet)
        }
    }

    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.points.windows(2).all(|w| w[0] != w[1])
    }

    /// `(sum of a_i, sum of b_i)`, the bidegree of the attached monomial.
    pub fn weight(&self) -> (i64, i64) {
        let mut q = 0;
        let mut t = 0;
        for &(a, b) in &self.points {
            q += a;
            t += b;
        }
        (q, t)
    }

    pub fn total_degree(&self) -> i64 {
        let (q, t) = self.weight();
        q + t
    }

    /// Smallest `a + b` over the points; every point of the `k`-lift of
    /// some set clears `k` exactly when this does.
    pub fn min_support(&self) -> i64 {
        self.points
            .iter()
            .map(|&(a, b)| a + b)
            .min()
            .unwrap_or(i64::MAX)
    }

    /// Label-wise sum. Sums of lex-sorted tuples stay lex-sorted.
    pub fn pointwise_sum(&self, other: &PointSet) -> PointSet {
        assert_eq!(self.len(), other.len(), "point sets of different sizes");
        let points: Vec<(i64, i64)> = self
            .points
            .iter()
            .zip(&other.points)
            .map(|(&(a, b), &(c, d))| (a + c, b + d))
            .collect();
        debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
        PointSet { points }
    }

    /// Membership in `P(m,k)`.
    pub fn in_p(&self, m: i64, k: i64) -> bool {
        assert!(m >= 0 && k >= 0);
        let pts = &self.points;
        for j in 0..pts.len() {
            let (aj, bj) = pts[j];
            if j > 0 {
                let (ai, bi) = pts[j - 1];
                if aj < ai {
                    return false;
                }
                if aj == ai && bj < bi + m {
                    return false;
                }
            }
            let mut bound = (k - aj).max(0);
            for &(ai, _) in &pts[..j] {
                bound += (m - (aj - ai)).max(0);
            }
            if bj < bound {
                return false;
            }
        }
        true
    }

    /// The `k`-lift `(a, b) -> (a, b + max(k - a, 0))` applied pointwise.
    /// Preserves the lex-sorted labeling.
    pub fn k_lift(&self, k: i64) -> PointSet {
        assert!(k >= 0);
        let points: Vec<(i64, i64)> = self
            .points
            .iter()
            .map(|&(a, b)| (a, b + (k - a).max(0)))
            .collect();
        debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
        PointSet { points }
    }

    /// Inverse of the `k`-lift; requires `b >= max(k - a, 0)` pointwise.
    pub fn k_unlift(&self, k: i64) -> Result<PointSet> {
        assert!(k >= 0);
        let mut points = Vec::with_capacity(self.points.len());
        for &(a, b) in &self.points {
            let drop = (k - a).max(0);
            if b < drop {
                return Err(Error::Precondition(format!(
                    "point ({a}, {b}) has b < max({k} - a, 0), cannot unlift"
                )));
            }
            points.push((a, b - drop));
        }
        debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
        Ok(PointSet { points })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .points
            .iter()
            .map(|&(a, b)| vec![a, b])
            .collect::<Vec<_>>())
    }
}

/// All elements of `P(m,k)` with `n` points and total degree at most `d`,
/// in lexicographic order of the flattened `(a_1..a_n, b_1..b_n)` tuple.
pub fn enumerate_p(n: usize, m: i64, k: i64, d: i64) -> Vec<PointSet> {
    assert!(m >= 0 && k >= 0 && d >= 0);
    if n == 0 {
        return vec![PointSet::empty()];
    }
    let mut out = Vec::new();
    let mut avec: Vec<i64> = Vec::with_capacity(n);
    let mut bvec: Vec<i64> = Vec::with_capacity(n);

    fn rec_b(
        n: usize,
        m: i64,
        k: i64,
        budget: i64,
        avec: &[i64],
        bvec: &mut Vec<i64>,
        out: &mut Vec<PointSet>,
    ) {
        let j = bvec.len();
        if j == n {
            out.push(PointSet {
                points: avec.iter().copied().zip(bvec.iter().copied()).collect(),
            });
            return;
        }
        let aj = avec[j];
        let mut lo = (k - aj).max(0);
        for &ai in &avec[..j] {
            lo += (m - (aj - ai)).max(0);
        }
        if j > 0 && avec[j - 1] == aj {
            lo = lo.max(bvec[j - 1] + m);
        }
        let mut b = lo;
        while b <= budget {
            bvec.push(b);
            rec_b(n, m, k, budget - b, avec, bvec, out);
            bvec.pop();
            b += 1;
        }
    }

    fn rec_a(
        n: usize,
        m: i64,
        k: i64,
        budget: i64,
        avec: &mut Vec<i64>,
        bvec: &mut Vec<i64>,
        out: &mut Vec<PointSet>,
    ) {
        if avec.len() == n {
            rec_b(n, m, k, budget, avec, bvec, out);
            return;
        }
        let lo = avec.last().copied().unwrap_or(0);
        let mut a = lo;
        while a <= budget {
            avec.push(a);
            rec_a(n, m, k, budget - a, avec, bvec, out);
            avec.pop();
            a += 1;
        }
    }

    rec_a(n, m, k, d, &mut avec, &mut bvec, &mut out);
    out
}

/// Dimension series of the sections of `O(m,k)`: the weighted count of
/// `P(m+k, k)` convolved with the free `(q, t)` square series,
/// truncated at total degree `d`.
pub fn hilbert_series(n: usize, m: i64, k: i64, d: i64) -> QTSeries {
    assert!(m >= 0 && k >= 0 && d >= 0);
    let mut s = QTSeries::zero(d);
    for p in enumerate_p(n, m + k, k, d) {
        let (dq, dt) = p.weight();
        s.add_coeff(dq, dt, rat(1));
    }
    s.mul_inv_binomial(1, 0).mul_inv_binomial(0, 1)
}

/// Distributes a total lift `k` over summands: given sorted point sets
/// `S^(1), ..., S^(m)` with label-wise sum `S`, returns `k_1, ..., k_m >= 0`
/// with sum `k` such that `lift_k(S)` is the label-wise sum of the
/// `lift_{k_i}(S^(i))`.
///
/// The lift is raised one unit at a time. When some summed first
/// coordinate exceeds the current level, the summand chosen is one whose
/// own first coordinate at the smallest such label still exceeds its
/// current lift (one always exists); ties go to the smallest summand
/// index. The auxiliary invariant maintained is: whenever `a_j` is at most
/// the current level, `a_j^(i) <= k_i` for every summand `i`.
pub fn lift_decompose(parts: &[PointSet], k: i64) -> Vec<i64> {
    assert!(k >= 0);
    assert!(!parts.is_empty(), "need at least one summand");
    let n = parts[0].len();
    assert!(
        parts.iter().all(|p| p.len() == n),
        "summands of different sizes"
    );
    let mut sum = parts[0].clone();
    for p in &parts[1..] {
        sum = sum.pointwise_sum(p);
    }
    let a_sum: Vec<i64> = sum.points().iter().map(|&(a, _)| a).collect();

    let mut ks = vec![0i64; parts.len()];
    for level in 0..k {
        let choice = match (0..n).find(|&j| a_sum[j] > level) {
            None => 0,
            Some(j) => (0..parts.len())
                .find(|&i| parts[i].points()[j].0 > ks[i])
                .expect("lift distribution step has no admissible summand"),
        };
        ks[choice] += 1;
        // Labels at or below the reached level must have their summand
        // coordinates covered by the current splits.
        debug_assert!((0..n)
            .filter(|&j| a_sum[j] <= level + 1)
            .all(|j| { (0..parts.len()).all(|i| parts[i].points()[j].0 <= ks[i]) }));
    }

    let mut lifted = parts[0].k_lift(ks[0]);
    for (p, &ki) in parts[1..].iter().zip(&ks[1..]) {
        lifted = lifted.pointwise_sum(&p.k_lift(ki));
    }
    assert_eq!(
        lifted,
        sum.k_lift(k),
        "lift distribution failed to recompose"
    );
    ks
}

/// Searches for sorted distinct-point sets `S^(1), ..., S^(m)` with
/// label-wise sum `s`. Exhaustive: `None` certifies that no decomposition
/// exists. The coordinates of every candidate summand point are bounded by
/// those of `s`, so the search space is finite.
pub fn sum_decompose(s: &PointSet, m: usize) -> Option<Vec<PointSet>> {
    assert!(m >= 1);
    if s.is_empty() {
        return Some(vec![PointSet::empty(); m]);
    }

    // parts[i] holds the points assigned so far to summand i; within each
    // summand the labels must be strictly lex-increasing (distinctness).
    struct Search<'a> {
        s: &'a PointSet,
        m: usize,
        parts: Vec<Vec<(i64, i64)>>,
    }

    impl Search<'_> {
        /// Assigns label `j` onward; true once a full decomposition stands
        /// in `self.parts`.
        fn assign(&mut self, j: usize) -> bool {
            if j == self.s.len() {
                return true;
            }
            let target = self.s.points()[j];
            self.split(j, 0, target)
        }

        /// Distributes what is left of label `j`'s point over summands
        /// `i..m`, smallest split first.
        fn split(&mut self, j: usize, i: usize, rem: (i64, i64)) -> bool {
            if i == self.m - 1 {
                if let Some(&prev) = self.parts[i].last() {
                    if rem <= prev {
                        return false;
                    }
                }
                self.parts[i].push(rem);
                if self.assign(j + 1) {
                    return true;
                }
                self.parts[i].pop();
                return false;
            }
            for a in 0..=rem.0 {
                for b in 0..=rem.1 {
                    if let Some(&prev) = self.parts[i].last() {
                        if (a, b) <= prev {
                            continue;
                        }
                    }
                    self.parts[i].push((a, b));
                    if self.split(j, i + 1, (rem.0 - a, rem.1 - b)) {
                        return true;
                    }
                    self.parts[i].pop();
                }
            }
            false
        }
    }

    let mut search = Search {
        s,
        m,
        parts: vec![Vec::with_capacity(s.len()); m],
    };
    if !search.assign(0) {
        return None;
    }
    let sets: Vec<PointSet> = search
        .parts
        .into_iter()
        .map(|points| {
            debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
            PointSet { points }
        })
        .collect();
    debug_assert!(verify_sum_decomposition(s, &sets));
    Some(sets)
}

/// Checks that `parts` are sorted distinct-point sets whose label-wise sum
/// is `s`.
pub fn verify_sum_decomposition(s: &PointSet, parts: &[PointSet]) -> bool {
    if parts.is_empty() || parts.iter().any(|p| p.len() != s.len() || !p.is_strict()) {
        return false;
    }
    let mut sum = parts[0].clone();
    for p in &parts[1..] {
        sum = sum.pointwise_sum(p);
    }
    &sum == s
}

/// Closed halfspace `normal . x >= offset` with integer data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Halfspace {
    pub fn contains(&self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.normal.len());
        let mut acc = BigRational::zero();
        for (c, x) in self.normal.iter().zip(v) {
            acc += rat(*c) * x;
        }
        acc >= rat(self.offset)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "normal": self.normal, "offset": self.offset })
    }
}

/// H-representation of `Delta(sep, k)` in coordinates
/// `(a_1..a_n, b_1..b_n)`: the chain inequalities plus, for each label `j`,
/// one inequality per way of activating the `k - a_j` term and a subset of
/// the separation terms (the max of affine functions becomes a finite
/// conjunction of halfspaces).
pub fn okounkov_halfspaces(n: usize, sep: i64, k: i64) -> Vec<Halfspace> {
    assert!(sep >= 0 && k >= 0);
    let dims = 2 * n;
    let mut out = Vec::new();
    for j in 0..n {
        let mut normal = vec![0i64; dims];
        normal[j] = 1;
        if j > 0 {
            normal[j - 1] = -1;
        }
        out.push(Halfspace { normal, offset: 0 });
    }
    for j in 0..n {
        for mask in 0..(1u64 << j) {
            for s in 0..=1i64 {
                let mut normal = vec![0i64; dims];
                normal[n + j] = 1;
                let tsize = mask.count_ones() as i64;
                normal[j] += s + tsize;
                for (i, slot) in normal.iter_mut().enumerate().take(j) {
                    if mask >> i & 1 == 1 {
                        *slot -= 1;
                    }
                }
                out.push(Halfspace {
                    normal,
                    offset: s * k + tsize * sep,
                });
            }
        }
    }
    out
}

/// Membership in `Delta(sep, k)` by direct evaluation of the chain and
/// support conditions; `v` is `(a_1..a_n, b_1..b_n)`.
pub fn in_delta(n: usize, sep: i64, k: i64, v: &[BigRational]) -> bool {
    assert_eq!(v.len(), 2 * n);
    let zero = BigRational::zero();
    let (a, b) = v.split_at(n);
    for j in 0..n {
        let lo = if j == 0 { &zero } else { &a[j - 1] };
        if &a[j] < lo {
            return false;
        }
        let mut bound = (rat(k) - &a[j]).max(zero.clone());
        for ai in &a[..j] {
            bound += (rat(sep) - (&a[j] - ai)).max(zero.clone());
        }
        if b[j] < bound {
            return false;
        }
    }
    true
}

/// Membership in the limit body of `O(m,k)`: the first two coordinates are
/// nonnegative and the remaining `2n` lie in `Delta(m+k, k)`.
pub fn nk_body_membership(v: &[BigRational], m: i64, k: i64) -> bool {
    assert!(
        v.len() >= 2 && v.len().is_multiple_of(2),
        "vector must have length 2n + 2"
    );
    let n = (v.len() - 2) / 2;
    let zero = BigRational::zero();
    v[0] >= zero && v[1] >= zero && in_delta(n, m + k, k, &v[2..])
}

/// A unimodular shifted cone in the `n = 2` coordinates
/// `(a_1, a_2, b_1, b_2)`: vertex plus nonnegative integer combinations of
/// the rays, every point represented exactly once.
#[derive(Debug, Clone)]
pub struct ConeN2 {
    pub label: &'static str,
    pub vertex: [i64; 4],
    pub rays: Vec<[i64; 4]>,
}

fn coord_weight(v: &[i64; 4]) -> (i64, i64) {
    (v[0] + v[1], v[2] + v[3])
}

impl ConeN2 {
    /// Weighted sum over the cone's integer points as a truncated series.
    pub fn series(&self, trunc: i64) -> QTSeries {
        let (vq, vt) = coord_weight(&self.vertex);
        let mut s = QTSeries::monomial(vq, vt, rat(1), trunc);
        for ray in &self.rays {
            let (rq, rt) = coord_weight(ray);
            s = s.mul_inv_binomial(rq, rt);
        }
        s
    }

    /// Integer points of total degree at most `d`, each as a 2-point set.
    pub fn points(&self, d: i64) -> Vec<PointSet> {
        let mut out = Vec::new();
        let mut coords = self.vertex;
        fn rec(rays: &[[i64; 4]], coords: &mut [i64; 4], d: i64, out: &mut Vec<PointSet>) {
            match rays.split_first() {
                None => {
                    let degree: i64 = coords.iter().sum();
                    if degree <= d {
                        out.push(PointSet::new(vec![
                            (coords[0], coords[2]),
                            (coords[1], coords[3]),
                        ]));
                    }
                }
                Some((ray, rest)) => {
                    let step: i64 = ray.iter().sum();
                    let mut j = 0;
                    loop {
                        if coords.iter().sum::<i64>() > d {
                            break;
                        }
                        rec(rest, coords, d, out);
                        j += 1;
                        for (c, r) in coords.iter_mut().zip(ray) {
                            *c += r;
                        }
                        debug_assert!(step > 0);
                    }
                    for (c, r) in coords.iter_mut().zip(ray) {
                        *c -= r * j;
                    }
                }
            }
        }
        rec(&self.rays, &mut coords, d, &mut out);
        out.sort();
        out
    }
}

/// The six-cone decomposition of `P(2,1)` for `n = 2`, split by whether
/// `a_1` is zero and by `a_2 - a_1` being zero, one, or at least two. The
/// cones are disjoint and their union is all of `P(2,1)`.
pub fn cone_decomposition_n2() -> Vec<ConeN2> {
    vec![
        ConeN2 {
            label: "a",
            vertex: [0, 0, 1, 3],
            rays: vec![[0, 0, 1, 1], [0, 0, 0, 1]],
        },
        ConeN2 {
            label: "b",
            vertex: [0, 1, 1, 1],
            rays: vec![[0, 0, 1, 0], [0, 0, 0, 1]],
        },
        ConeN2 {
            label: "c",
            vertex: [0, 2, 1, 0],
            rays: vec![[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        },
        ConeN2 {
            label: "d",
            vertex: [1, 1, 0, 2],
            rays: vec![[1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]],
        },
        ConeN2 {
            label: "e",
            vertex: [1, 2, 0, 1],
            rays: vec![[1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        },
        ConeN2 {
            label: "f",
            vertex: [1, 3, 0, 0],
            rays: vec![[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        },
    ]
}

/// Union of the six cones' integer points up to total degree `d`, checked
/// to be disjoint.
pub fn cone_points_union_n2(d: i64) -> Result<BTreeSet<PointSet>> {
    let mut seen = BTreeSet::new();
    for cone in cone_decomposition_n2() {
        for p in cone.points(d) {
            if !seen.insert(p.clone()) {
                return Err(Error::Consistency(format!(
                    "cone decomposition overlaps at {:?}",
                    p.points()
                )));
            }
        }
    }
    Ok(seen)
}
