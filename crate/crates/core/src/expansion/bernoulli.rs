use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest supported Bernoulli index.
pub const MAX_BERNOULLI: usize = 32;

fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut b = BigInt::one();
    for i in 0..k {
        b = b * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    b
}

/// Bernoulli numbers `B_0..=B_n` in the `x / (e^x - 1)` convention
/// (`B_1 = -1/2`), from `sum_{k=0}^{m} C(m+1, k) B_k = 0`.
pub fn bernoulli_table(n: usize) -> Result<Vec<BigRational>> {
    if n > MAX_BERNOULLI {
        return Err(Error::OutOfRange {
            what: "Bernoulli index",
            value: n,
            max: MAX_BERNOULLI,
        });
    }
    let mut table: Vec<BigRational> = Vec::with_capacity(n + 1);
    table.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for (k, bk) in table.iter().enumerate() {
            acc += BigRational::from_integer(binomial_big(m + 1, k)) * bk;
        }
        table.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    Ok(table)
}

/// Exact Bernoulli number `B_l`.
pub fn bernoulli(l: usize) -> Result<BigRational> {
    Ok(bernoulli_table(l)?.pop().expect("table is nonempty"))
}

pub(crate) fn factorial_big(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("small rationals convert to f64")
}
