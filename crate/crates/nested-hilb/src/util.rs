//! Small shared helpers: exact-rational constructors, a deterministic
//! pseudorandom generator for reproducible sweeps, and a scoped-thread map.

use num_bigint::BigInt;
use num_rational::BigRational;

/// Integer as an exact rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Quotient of integers as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient for small arguments, exact.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// SplitMix64. Deterministic, seedable, good enough for drawing small test
/// coefficients reproducibly.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn next_range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    /// Uniform index below `n`.
    pub fn next_index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }
}

/// Applies `f` to every input, preserving input order in the output.
/// With `threads > 1` the inputs are processed by scoped worker threads;
/// results are identical to the sequential run since every `f` call is
/// independent and the outputs are reassembled by index.
pub fn parallel_map<I, T, F>(inputs: Vec<I>, threads: usize, f: F) -> Vec<T>
where
    I: Send,
    T: Send,
    F: Fn(I) -> T + Sync,
{
    let threads = threads.max(1);
    if threads == 1 || inputs.len() <= 1 {
        return inputs.into_iter().map(f).collect();
    }
    let items: Vec<(usize, I)> = inputs.into_iter().enumerate().collect();
    let chunk = items.len().div_ceil(threads);
    let mut tagged: Vec<(usize, T)> = Vec::with_capacity(items.len());
    let mut chunks: Vec<Vec<(usize, I)>> = Vec::new();
    {
        let mut items = items;
        while !items.is_empty() {
            let rest = items.split_off(items.len().min(chunk));
            chunks.push(std::mem::replace(&mut items, rest));
        }
    }
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for ch in chunks {
            let f = &f;
            handles.push(
                scope.spawn(move || ch.into_iter().map(|(i, x)| (i, f(x))).collect::<Vec<_>>()),
            );
        }
        for h in handles {
            tagged.extend(h.join().expect("worker thread panicked"));
        }
    });
    tagged.sort_by_key(|(i, _)| *i);
    tagged.into_iter().map(|(_, t)| t).collect()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Sign of a permutation given in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(12, 6), BigInt::from(924));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(binomial(7, 0), BigInt::from(1));
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn parallel_map_matches_sequential() {
        let inputs: Vec<i64> = (0..97).collect();
        let seq = parallel_map(inputs.clone(), 1, |x| x * x - 3);
        let par = parallel_map(inputs, 4, |x| x * x - 3);
        assert_eq!(seq, par);
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(0).len(), 1);
    }
}
