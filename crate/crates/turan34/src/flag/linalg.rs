//! Exact rational matrices, pivoted LDL^T positive-semidefiniteness
//! checking, PSD truncation, and nearest-rational rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense symmetric-by-convention square rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(dim: usize) -> Self {
        RatMatrix {
            dim,
            data: vec![BigRational::zero(); dim * dim],
        }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(RatMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &BigRational) {
        self.data[i * self.dim + j] += v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn symmetrized(&self) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.dim);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, (self.get(i, j) + self.get(j, i)) * &half);
            }
        }
        out
    }

    /// Frobenius inner product `sum_ij a_ij b_ij`.
    pub fn inner(&self, other: &RatMatrix) -> BigRational {
        debug_assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }
}

/// Why a matrix failed the exact PSD check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdFailure {
    NotSymmetric,
    /// A diagonal pivot came out negative at the given elimination step.
    NegativePivot { step: usize, value: BigRational },
    /// All remaining diagonal entries are zero but the block is nonzero; a
    /// PSD matrix with a zero diagonal entry has a zero row.
    ZeroDiagonalNonzeroRow { step: usize },
}

/// Exact PSD check by LDL^T with symmetric diagonal pivoting. Accepts
/// singular PSD matrices.
pub fn psd_check(m: &RatMatrix) -> Result<(), PsdFailure> {
    if !m.is_symmetric() {
        return Err(PsdFailure::NotSymmetric);
    }
    let mut a = m.clone();
    let n = a.dim();
    let mut active: Vec<usize> = (0..n).collect();
    for step in 0..n {
        let rest = &active[step..];
        if rest.is_empty() {
            break;
        }
        if let Some(&neg) = rest.iter().find(|&&i| a.get(i, i).is_negative()) {
            return Err(PsdFailure::NegativePivot {
                step,
                value: a.get(neg, neg).clone(),
            });
        }
        let pivot = rest.iter().position(|&i| a.get(i, i).is_positive());
        match pivot {
            None => {
                // all remaining diagonals are zero
                let nonzero = rest
                    .iter()
                    .any(|&i| rest.iter().any(|&j| !a.get(i, j).is_zero()));
                if nonzero {
                    return Err(PsdFailure::ZeroDiagonalNonzeroRow { step });
                }
                break;
            }
            Some(p) => active.swap(step, step + p),
        }
        let k = active[step];
        let d = a.get(k, k).clone();
        for &i in &active[step + 1..] {
            let f = a.get(i, k) / &d;
            if f.is_zero() {
                continue;
            }
            for &j in &active[step + 1..] {
                let delta = &f * a.get(k, j);
                let v = a.get(i, j) - delta;
                a.set(i, j, v);
            }
        }
    }
    Ok(())
}

/// LDL^T with symmetric pivoting on an arbitrary symmetric matrix, negative
/// pivots truncated to zero, then recomposed: the result is PSD. If the
/// factorization breaks down (all remaining diagonals zero, block nonzero)
/// the unfactorable remainder is dropped, which keeps the output PSD.
pub fn psd_truncate(m: &RatMatrix) -> RatMatrix {
    let mut a = m.symmetrized();
    let n = a.dim();
    let mut active: Vec<usize> = (0..n).collect();
    // columns of L (in original indices) with their pivots
    let mut columns: Vec<(BigRational, Vec<BigRational>)> = Vec::new();
    for step in 0..n {
        let rest: Vec<usize> = active[step..].to_vec();
        if rest.is_empty() {
            break;
        }
        // prefer a positive pivot; a negative one is eliminated too (its
        // column is truncated at recomposition)
        let pick = rest
            .iter()
            .position(|&i| a.get(i, i).is_positive())
            .or_else(|| rest.iter().position(|&i| !a.get(i, i).is_zero()));
        let Some(p) = pick else {
            break; // zero diagonal everywhere: drop the remainder
        };
        active.swap(step, step + p);
        let k = active[step];
        let d = a.get(k, k).clone();
        let mut col = vec![BigRational::zero(); n];
        col[k] = BigRational::one();
        for &i in &active[step + 1..] {
            col[i] = a.get(i, k) / &d;
        }
        for &i in &active[step + 1..] {
            if col[i].is_zero() {
                continue;
            }
            for &j in &active[step + 1..] {
                let delta = &col[i] * a.get(k, j);
                let v = a.get(i, j) - delta;
                a.set(i, j, v);
            }
        }
        columns.push((d, col));
    }
    let mut out = RatMatrix::zeros(n);
    for (d, col) in &columns {
        if !d.is_positive() {
            continue;
        }
        for i in 0..n {
            if col[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !col[j].is_zero() {
                    let v = d * &col[i] * &col[j];
                    out.add_to(i, j, &v);
                }
            }
        }
    }
    out
}

/// Best rational approximation with denominator at most `max_den`, by the
/// continued-fraction convergent/semiconvergent construction.
pub fn nearest_rational(x: f64, max_den: u64) -> BigRational {
    assert!(max_den >= 1);
    if !x.is_finite() {
        return BigRational::zero();
    }
    let negative = x < 0.0;
    let target = x.abs();
    let signed = |p: u128, q: u128| {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q.max(1)));
        if negative {
            -r
        } else {
            r
        }
    };
    let dist = |p: u128, q: u128| (p as f64 / q.max(1) as f64 - target).abs();
    // convergents p1/q1 of the continued fraction, with p0/q0 one behind
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let mut t = target;
    loop {
        let a = t.floor();
        if a >= 1e18 {
            break;
        }
        let a = a as u128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as u128 {
            // the next convergent overshoots the bound: compare the last
            // convergent with the largest in-bound semiconvergent
            let k = (max_den as u128 - q0) / q1;
            let (sp, sq) = (k * p1 + p0, k * q1 + q0);
            return if sq >= 1 && dist(sp, sq) < dist(p1, q1) {
                signed(sp, sq)
            } else {
                signed(p1, q1)
            };
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = t - a as f64;
        if frac < 1e-12 {
            break;
        }
        t = 1.0 / frac;
    }
    signed(p1, q1)
}
