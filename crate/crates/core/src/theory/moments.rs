//! Integer sequences with prescribed vanishing power sums, used to build star
//! families whose degree sequences agree on every moment but one.

use super::rational::{lcm_upto, rat, solve, to_integers};
use crate::count::{binom, star_incidences};
use crate::error::{Error, Result};
use crate::graph::Graph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSequences {
    pub k: usize,
    /// `lcm(1, ..., k + 1)`.
    pub lcm: BigInt,
    /// Indexed by `x - 1` for `x = 1..=k+1`. `Σ x^i α_x = 0` for `i` in
    /// `{0, 2, ..., k}` and `Σ x α_x = lcm`.
    pub alpha: Vec<BigInt>,
    /// `Σ x^i β_x = 0` for `i` in `{0, 1, 3, ..., k}` and `Σ x² β_x = lcm²`.
    /// Over-determined, hence `None`, when `k = 1`.
    pub beta: Option<Vec<BigInt>>,
    /// Factor the rational solutions were multiplied by to become integral.
    pub alpha_scale: BigInt,
    pub beta_scale: BigInt,
}

/// `Σ_{x=1}^{len} x^i · a_x`.
pub fn power_sum(a: &[BigInt], i: u32) -> BigInt {
    a.iter().enumerate().map(|(j, v)| BigInt::from(j as u64 + 1).pow(i) * v).sum()
}

pub fn abs_sum(a: &[BigInt]) -> BigInt {
    a.iter().map(|v| v.abs()).sum()
}

fn solve_moments(k: usize, zero: &[u32], norm: u32, target: &BigInt) -> Result<(Vec<BigInt>, BigInt)> {
    let m = k + 1;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for &i in zero {
        rows.push((1..=m as i64).map(|x| rat(x).pow(i as i32)).collect());
        rhs.push(rat(0));
    }
    rows.push((1..=m as i64).map(|x| rat(x).pow(norm as i32)).collect());
    rhs.push(BigRational::from_integer(target.clone()));
    let sol = solve(rows, rhs)?;
    Ok(to_integers(&sol))
}

pub fn moment_sequences(k: usize) -> Result<MomentSequences> {
    if !(1..=8).contains(&k) {
        return Err(Error::InvalidParameter(format!("moment order {k} outside 1..=8")));
    }
    let lcm = lcm_upto(k as u64 + 1);
    let alpha_zero: Vec<u32> = std::iter::once(0).chain(2..=k as u32).collect();
    let (alpha, alpha_scale) = solve_moments(k, &alpha_zero, 1, &lcm)?;
    let (beta, beta_scale) = if k >= 2 {
        let zero: Vec<u32> = [0, 1].into_iter().chain(3..=k as u32).collect();
        let (b, s) = solve_moments(k, &zero, 2, &(&lcm * &lcm))?;
        (Some(b), s)
    } else {
        (None, BigInt::one())
    };
    Ok(MomentSequences { k, lcm, alpha, beta, alpha_scale, beta_scale })
}

/// Both sides of `#{v : deg v = r} = Σ_{j=r}^{jmax} (-1)^(j-r) C(j, r) Σ_v C(deg v, j)`.
/// The identity holds once `jmax` reaches the maximum degree.
pub fn degree_identity(g: &Graph, r: usize, jmax: usize) -> (i128, i128) {
    let lhs = (0..g.n() as u32).filter(|&v| g.degree(v) == r).count() as i128;
    let mut rhs = 0i128;
    for j in r..=jmax {
        let term = binom(j as u128, r as u128) as i128 * star_incidences(g, j) as i128;
        rhs += if (j - r) % 2 == 0 { term } else { -term };
    }
    (lhs, rhs)
}
