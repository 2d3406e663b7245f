//! Exact linear solves over arbitrary-precision rationals.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solves the square system `a x = b` by Gauss–Jordan elimination.
pub fn solve(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Result<Vec<BigRational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("system must be square".into()));
    }
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::Singular(format!("no pivot in column {col}")))?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    Ok(b)
}

/// Least common multiple of all denominators.
pub fn common_denominator(xs: &[BigRational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Scales `xs` by their common denominator, returning integers and the factor.
pub fn to_integers(xs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let d = common_denominator(xs);
    let ints = xs.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect();
    (ints, d)
}

pub fn lcm_upto(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |l, i| l.lcm(&BigInt::from(i)))
}

pub fn abs_sum(xs: &[BigInt]) -> BigInt {
    xs.iter().map(|x| x.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // x + y = 3, x - y = 1
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let x = solve(a, vec![rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert!(matches!(solve(a, vec![rat(1), rat(1)]), Err(Error::Singular(_))));
    }

    #[test]
    fn lcm_values() {
        let got: Vec<BigInt> = (2..=7).map(lcm_upto).collect();
        let want: Vec<BigInt> = [2, 6, 12, 60, 60, 420].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn integer_scaling() {
        let xs = vec![BigRational::new(1.into(), 2.into()), BigRational::new(2.into(), 3.into())];
        let (ints, d) = to_integers(&xs);
        assert_eq!(d, BigInt::from(6));
        assert_eq!(ints, vec![BigInt::from(3), BigInt::from(4)]);
    }
}
