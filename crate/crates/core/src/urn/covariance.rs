use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Limit law of `n^(-1/2) (N_n - c n)`: centering rates `c` and the
/// covariance matrix of the jointly normal limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitCovariance {
    #[serde(with = "crate::rational::as_strings")]
    pub centering: Vec<Rational>,
    #[serde(with = "crate::rational::as_string_rows")]
    pub matrix: Vec<Vec<Rational>>,
}

/// Symmetric urn with `q` colours: `Σ_ij = (q-1)(q δ_ij - 1) / (q² (q+1))`,
/// centering `(q-1)/q`.
pub fn urn_a_covariance(q: usize) -> Result<LimitCovariance> {
    if q < 2 {
        return Err(Error::InvalidArgument("the symmetric urn needs q >= 2".into()));
    }
    let qi = int(q as i64);
    let scale = (&qi - int(1)) / (&qi * &qi * (&qi + int(1)));
    let matrix = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| {
                    let delta = if i == j { qi.clone() } else { Rational::zero() };
                    &scale * (delta - int(1))
                })
                .collect()
        })
        .collect();
    Ok(LimitCovariance {
        centering: vec![(&qi - int(1)) / &qi; q],
        matrix,
    })
}

/// Discard the drawn ball and add `s_i` balls of each colour `i`:
/// `Cov = (S-1)/(S+1) (s_i δ_ij / S - s_i s_j / S²)` with `S = Σ s`,
/// centering `s_i (S-1)/S`.
pub fn fixed_addition_covariance(s: &[u64]) -> Result<LimitCovariance> {
    let total: u64 = s.iter().sum();
    if total <= 1 {
        return Err(Error::InvalidArgument(format!("Σ s must be at least 2 (got {total})")));
    }
    let big = int(total as i64);
    let lead = (&big - int(1)) / (&big + int(1));
    let si: Vec<Rational> = s.iter().map(|&x| int(x as i64)).collect();
    let matrix = si
        .iter()
        .enumerate()
        .map(|(i, a)| {
            si.iter()
                .enumerate()
                .map(|(j, b)| {
                    let diag = if i == j { a / &big } else { Rational::zero() };
                    &lead * (diag - a * b / (&big * &big))
                })
                .collect()
        })
        .collect();
    let centering = si.iter().map(|a| a * (&big - int(1)) / &big).collect();
    Ok(LimitCovariance { centering, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn symmetric_values() {
        let c = urn_a_covariance(3).unwrap();
        assert_eq!(c.matrix[0][0], frac(1, 9));
        assert_eq!(c.matrix[0][1], frac(-1, 18));
        assert_eq!(c.centering[0], frac(2, 3));
        let two = urn_a_covariance(2).unwrap();
        assert_eq!(two.matrix, vec![vec![frac(1, 12), frac(-1, 12)], vec![frac(-1, 12), frac(1, 12)]]);
        assert!(urn_a_covariance(1).is_err());
    }

    #[test]
    fn rows_sum_to_zero_and_specialize() {
        for q in 2..8 {
            let a = urn_a_covariance(q).unwrap();
            assert!(a.matrix.iter().all(|r| r.iter().sum::<Rational>().is_zero()));
            assert_eq!(fixed_addition_covariance(&vec![1; q]).unwrap(), a);
        }
        let f = fixed_addition_covariance(&[2, 0, 5]).unwrap();
        assert!(f.matrix.iter().all(|r| r.iter().sum::<Rational>().is_zero()));
        assert!(fixed_addition_covariance(&[1, 0]).is_err());
    }
}
