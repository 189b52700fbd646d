//! Exact component-size distributions at small n: the independent ground
//! truth the tree-counting bound and the Monte Carlo frequencies are checked
//! against.
//!
//! Two independent routes compute P(#C1 = r), the probability that the
//! component containing vertex 1 has exactly r vertices:
//!
//! * `exact_component_distribution` via the standard connectivity recursion
//!   P(#C1 = r) = binom(n-1, r-1) P_conn(r) (1-p)^{r(n-r)}, where the
//!   boundary edges between the component and the rest are all closed;
//! * `brute_force_distribution` by enumerating all 2^{n(n-1)/2} labeled
//!   graphs (n <= 6) and running the components module on each.
//!
//! Both are generic over the probability scalar. With `BigRational` the
//! arithmetic is exact (the recursion cancels catastrophically in floats as
//! p -> 0 at larger k); with `f64` results carry a documented 1e-12 relative
//! tolerance. All functions are pure.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::components::component_size_containing;
use crate::error::{Error, Result};
use crate::sampler::GraphSample;

/// Largest n for the float recursion path.
pub const FLOAT_ORACLE_MAX_N: u64 = 64;

/// Largest n for the exact rational recursion path.
pub const RATIONAL_ORACLE_MAX_N: u64 = 20;

/// Largest n for exhaustive enumeration (2^15 graphs).
pub const BRUTE_FORCE_MAX_N: u64 = 6;

/// Probability arithmetic the oracle recursions run in.
pub trait ProbScalar: Clone + PartialOrd + Sized {
    /// Cap on n for the recursion in this arithmetic.
    const MAX_EXACT_N: u64;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_count(v: u128) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn pow_u64(&self, e: u64) -> Self;
    fn to_f64_lossy(&self) -> f64;

    fn in_unit_interval(&self) -> bool {
        *self >= Self::zero() && *self <= Self::one()
    }
}

impl ProbScalar for f64 {
    const MAX_EXACT_N: u64 = FLOAT_ORACLE_MAX_N;

    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn from_count(v: u128) -> f64 {
        v as f64
    }
    fn add(&self, other: &f64) -> f64 {
        self + other
    }
    fn sub(&self, other: &f64) -> f64 {
        self - other
    }
    fn mul(&self, other: &f64) -> f64 {
        self * other
    }
    fn pow_u64(&self, e: u64) -> f64 {
        self.powi(e as i32)
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl ProbScalar for BigRational {
    const MAX_EXACT_N: u64 = RATIONAL_ORACLE_MAX_N;

    fn zero() -> BigRational {
        Zero::zero()
    }
    fn one() -> BigRational {
        One::one()
    }
    fn from_count(v: u128) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, other: &BigRational) -> BigRational {
        self + other
    }
    fn sub(&self, other: &BigRational) -> BigRational {
        self - other
    }
    fn mul(&self, other: &BigRational) -> BigRational {
        self * other
    }
    fn pow_u64(&self, e: u64) -> BigRational {
        // Exponents here are at most n^2/4 <= 100, well inside i32.
        self.pow(e as i32)
    }
    fn to_f64_lossy(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Fall back through the parts for pathological magnitudes.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
}

/// Exact probabilities P(#C1 = r) for r = 1..=n.
///
/// Invariants: every entry lies in [0,1] and the entries sum to 1 (exactly
/// under rational arithmetic, to 1e-12 under floats).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution<T: ProbScalar> {
    n: u64,
    p: T,
    probs: Vec<T>,
}

impl<T: ProbScalar> ExactDistribution<T> {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn p(&self) -> &T {
        &self.p
    }

    /// probs[r-1] = P(#C1 = r).
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob_of(&self, r: u64) -> Option<&T> {
        if r >= 1 && r <= self.n {
            self.probs.get((r - 1) as usize)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(|x| x.to_f64_lossy()).collect()
    }

    pub fn total(&self) -> T {
        let mut acc = T::zero();
        for q in &self.probs {
            acc = acc.add(q);
        }
        acc
    }
}

/// Exact n-choose-k; fits u128 comfortably for n <= 64.
fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn check_prob<T: ProbScalar>(p: &T) -> Result<()> {
    if !p.in_unit_interval() {
        return Err(Error::param("p must lie in [0,1]"));
    }
    Ok(())
}

/// Probability that G(k, p) is connected, by the standard recursion
/// P_conn(1) = 1, P_conn(k) = 1 - sum_{j=1}^{k-1} binom(k-1, j-1) P_conn(j)
/// (1-p)^{j(k-j)} over the component containing vertex 1.
pub fn connectivity_probability<T: ProbScalar>(k: u64, p: &T) -> Result<T> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    if k > T::MAX_EXACT_N {
        return Err(Error::param(format!(
            "k = {k} exceeds the supported range {} for this arithmetic",
            T::MAX_EXACT_N
        )));
    }
    check_prob(p)?;
    Ok(connectivity_table(k, p).pop().expect("nonempty table"))
}

/// conn[j-1] = P_conn(j) for j = 1..=k.
fn connectivity_table<T: ProbScalar>(k: u64, p: &T) -> Vec<T> {
    let q = T::one().sub(p);
    let mut conn: Vec<T> = Vec::with_capacity(k as usize);
    conn.push(T::one());
    for m in 2..=k {
        let mut disconnected = T::zero();
        for j in 1..m {
            let ways = T::from_count(binomial_u128(m - 1, j - 1));
            let term = ways.mul(&conn[(j - 1) as usize]).mul(&q.pow_u64(j * (m - j)));
            disconnected = disconnected.add(&term);
        }
        conn.push(T::one().sub(&disconnected));
    }
    conn
}

/// Full distribution of #C1 by the recursion route:
/// P(#C1 = r) = binom(n-1, r-1) P_conn(r) (1-p)^{r(n-r)}.
pub fn exact_component_distribution<T: ProbScalar>(n: u64, p: &T) -> Result<ExactDistribution<T>> {
    if n < 2 || n > T::MAX_EXACT_N {
        return Err(Error::param(format!(
            "n = {n} outside the supported range 2..={} for this arithmetic",
            T::MAX_EXACT_N
        )));
    }
    check_prob(p)?;
    let q = T::one().sub(p);
    let conn = connectivity_table(n, p);
    let probs: Vec<T> = (1..=n)
        .map(|r| {
            let ways = T::from_count(binomial_u128(n - 1, r - 1));
            ways.mul(&conn[(r - 1) as usize]).mul(&q.pow_u64(r * (n - r)))
        })
        .collect();
    Ok(ExactDistribution { n, p: p.clone(), probs })
}

/// Full distribution of #C1 by exhaustive enumeration of all labeled graphs,
/// running the components module on each (n <= 6).
pub fn brute_force_distribution<T: ProbScalar>(n: u64, p: &T) -> Result<ExactDistribution<T>> {
    if !(1..=BRUTE_FORCE_MAX_N).contains(&n) {
        return Err(Error::param(format!(
            "brute force supports 1 <= n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    check_prob(p)?;
    let pairs: Vec<(u32, u32)> = (1..=n as u32)
        .flat_map(|i| (i + 1..=n as u32).map(move |j| (i, j)))
        .collect();
    let m = pairs.len();

    // count[r-1][k] = number of graphs with k open edges whose vertex-1
    // component has exactly r vertices. Weights p^k (1-p)^(m-k) attach after.
    let mut count = vec![vec![0u64; m + 1]; n as usize];
    for mask in 0u32..(1u32 << m) {
        let edges: Vec<(u32, u32)> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let k = edges.len();
        let g = GraphSample::new(n, edges)?;
        let r = component_size_containing(&g, 1)?;
        count[(r - 1) as usize][k] += 1;
    }

    let q = T::one().sub(p);
    let p_pow: Vec<T> = (0..=m as u64).map(|k| p.pow_u64(k)).collect();
    let q_pow: Vec<T> = (0..=m as u64).map(|k| q.pow_u64(k)).collect();
    let probs: Vec<T> = count
        .iter()
        .map(|per_k| {
            let mut acc = T::zero();
            for (k, &c) in per_k.iter().enumerate() {
                if c > 0 {
                    let w = T::from_count(c as u128).mul(&p_pow[k]).mul(&q_pow[m - k]);
                    acc = acc.add(&w);
                }
            }
            acc
        })
        .collect();
    Ok(ExactDistribution { n, p: p.clone(), probs })
}

/// Convenience constructor for an exact rational probability num/den.
pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Relative gap |a - b| / max(|a|, |b|, 1e-300), for float-path comparisons.
pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(1e-300);
    (a - b).abs() / scale
}

/// True when the rational is within `tol` of the float, relatively.
pub fn rational_close_to(a: &BigRational, b: f64, tol: f64) -> bool {
    relative_error(a.to_f64_lossy(), b) <= tol || (a.is_zero() && b.abs() <= tol)
}
