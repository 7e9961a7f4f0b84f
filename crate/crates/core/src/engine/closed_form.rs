//! Binomial-sum formulas for the coefficient sequences that have one,
//! computed with plain integer arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// (−1)^n Σ_k C(n,k)² C(2k,k) C(2(n−k), n−k).
pub fn franel_type(n: u64) -> BigInt {
    let s: BigInt = (0..=n)
        .map(|k| {
            let c = binomial(n, k);
            &c * &c * binomial(2 * k, k) * binomial(2 * (n - k), n - k)
        })
        .sum();
    if n % 2 == 1 {
        -s
    } else {
        s
    }
}

/// C(2n, n)².
pub fn central_binomial_squared(n: u64) -> BigInt {
    let c = binomial(2 * n, n);
    &c * &c
}

/// (2^n/n! · Π_{j<n} (4j+1))².
pub fn quartic_product_squared(n: u64) -> BigInt {
    let mut num = BigInt::one() << n;
    let mut den = BigInt::one();
    for j in 0..n {
        num *= BigInt::from(4 * j + 1);
        den *= BigInt::from(j + 1);
    }
    debug_assert!((&num % &den).is_zero());
    let v = num / den;
    &v * &v
}

/// The formula registered under `name`, evaluated at 0..len.
pub fn sequence(name: &str, len: usize) -> Result<Vec<BigInt>> {
    let f: fn(u64) -> BigInt = match name {
        "franel_type" => franel_type,
        "central_binomial_squared" => central_binomial_squared,
        "quartic_product_squared" => quartic_product_squared,
        _ => return Err(Error::Data(format!("unknown closed form {name:?}"))),
    };
    Ok((0..len as u64).map(f).collect())
}

/// How many terms each formula is compared over.
pub fn default_terms(name: &str) -> usize {
    match name {
        "franel_type" => 61,
        _ => 31,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(v: Vec<BigInt>) -> Vec<i64> {
        v.into_iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn first_terms() {
        assert_eq!(
            small(sequence("franel_type", 5).unwrap()),
            [1, -4, 28, -256, 2716]
        );
        assert_eq!(
            small(sequence("central_binomial_squared", 5).unwrap()),
            [1, 4, 36, 400, 4900]
        );
        assert_eq!(
            small(sequence("quartic_product_squared", 5).unwrap()),
            [1, 4, 100, 3600, 152100]
        );
        assert!(sequence("nope", 3).is_err());
    }
}
