//! Exact rational scalars and the small dense solves behind the root machinery.
//!
//! Everything that decides a verdict (norm comparisons, chamber maxima,
//! normalization constants) runs on `BigRational`; floats appear only when a
//! result is handed to the reporting layer. Values of the form `q * sqrt(r)`
//! get their own ordered scalar type so that ties are decided exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64()
        .unwrap_or_else(|| r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN))
}

/// `sign * sqrt(mag_sq)` with exact ordering.
///
/// The chamber optimizer only ever needs to compare candidate values of this
/// shape, never to add them, so a (sign, squared magnitude) pair suffices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtRat {
    sign: i8,
    mag_sq: Rat,
}

impl SqrtRat {
    pub fn zero() -> Self {
        SqrtRat { sign: 0, mag_sq: Rat::zero() }
    }

    /// `sqrt(x)` for `x >= 0`.
    pub fn sqrt(x: Rat) -> Self {
        assert!(!x.is_negative(), "sqrt of negative rational");
        if x.is_zero() {
            Self::zero()
        } else {
            SqrtRat { sign: 1, mag_sq: x }
        }
    }

    /// `num / sqrt(den)` for `den > 0`.
    pub fn ratio_over_sqrt(num: Rat, den: Rat) -> Self {
        assert!(den.is_positive(), "denominator must be positive");
        if num.is_zero() {
            return Self::zero();
        }
        let sign = if num.is_positive() { 1 } else { -1 };
        SqrtRat { sign, mag_sq: &num * &num / den }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn signum(&self) -> i8 {
        self.sign
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * to_f64(&self.mag_sq).sqrt()
    }
}

impl PartialOrd for SqrtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SqrtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                1 => self.mag_sq.cmp(&other.mag_sq),
                -1 => other.mag_sq.cmp(&self.mag_sq),
                _ => Ordering::Equal,
            },
            ord => ord,
        }
    }
}

/// Ordering of `sqrt(a) + sqrt(b)` against `sqrt(c)`; all inputs nonnegative.
pub fn cmp_sqrt_sum(a: &Rat, b: &Rat, c: &Rat) -> Ordering {
    let t = c - a - b;
    if t.is_negative() {
        return Ordering::Greater;
    }
    if t.is_zero() {
        return if (a * b).is_zero() { Ordering::Equal } else { Ordering::Greater };
    }
    let four_ab = rat_int(4) * a * b;
    let t_sq = &t * &t;
    four_ab.cmp(&t_sq)
}

/// Dot product under a diagonal metric.
pub fn dot_diag(metric: &[Rat], u: &[Rat], v: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for i in 0..u.len() {
        if !u[i].is_zero() && !v[i].is_zero() {
            acc += &metric[i] * &u[i] * &v[i];
        }
    }
    acc
}

/// Invert a square rational matrix (rows); `None` when singular.
pub fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat_int(1) } else { Rat::zero() }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col].clone();
        for j in 0..n {
            m[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..n {
                    let mv = &m[col][j] * &f;
                    m[r][j] -= mv;
                    let iv = &inv[col][j] * &f;
                    inv[r][j] -= iv;
                }
            }
        }
    }
    Some(inv)
}

pub fn mat_vec(a: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    a.iter().map(|row| {
        let mut acc = Rat::zero();
        for (x, y) in row.iter().zip(v) {
            if !x.is_zero() && !y.is_zero() {
                acc += x * y;
            }
        }
        acc
    }).collect()
}

/// Rank of a rational matrix, by elimination.
pub fn rank_of(a: &[Vec<Rat>]) -> usize {
    if a.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let cols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= m.len() {
            break;
        }
        if let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) {
            m.swap(row, p);
            for r in (row + 1)..m.len() {
                if !m[r][col].is_zero() {
                    let f = &m[r][col] / &m[row][col];
                    for j in col..cols {
                        let sub = &m[row][j] * &f;
                        m[r][j] -= sub;
                    }
                }
            }
            rank += 1;
            row += 1;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_rat_ordering() {
        let a = SqrtRat::sqrt(rat(1, 2));
        let b = SqrtRat::sqrt(rat(1, 3));
        assert!(a > b);
        assert!(SqrtRat::zero() < b);
        let neg = SqrtRat::ratio_over_sqrt(rat_int(-3), rat_int(1));
        assert!(neg < SqrtRat::zero());
        let neg_small = SqrtRat::ratio_over_sqrt(rat_int(-1), rat_int(4));
        assert!(neg < neg_small);
        assert!((neg.to_f64() + 3.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_sum_comparison_exact_tie() {
        // sqrt(1/12) + sqrt(1/12) = sqrt(1/3)
        assert_eq!(cmp_sqrt_sum(&rat(1, 12), &rat(1, 12), &rat(1, 3)), Ordering::Equal);
        assert_eq!(cmp_sqrt_sum(&rat(1, 12), &rat(1, 12), &rat(1, 2)), Ordering::Less);
        assert_eq!(cmp_sqrt_sum(&rat(1, 2), &rat(1, 12), &rat(1, 3)), Ordering::Greater);
        // degenerate: sqrt(0) + sqrt(x) vs sqrt(x)
        assert_eq!(cmp_sqrt_sum(&Rat::zero(), &rat(1, 3), &rat(1, 3)), Ordering::Equal);
    }

    #[test]
    fn invert_small() {
        let a = vec![vec![rat_int(2), rat_int(1)], vec![rat_int(1), rat_int(1)]];
        let inv = invert(&a).unwrap();
        assert_eq!(inv[0][0], rat_int(1));
        assert_eq!(inv[0][1], rat_int(-1));
        assert_eq!(inv[1][0], rat_int(-1));
        assert_eq!(inv[1][1], rat_int(2));
        let singular = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]];
        assert!(invert(&singular).is_none());
    }
}
