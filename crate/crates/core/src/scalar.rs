use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed};

/// Scalar type for the exact polynomial and linear-algebra machinery.
///
/// Any exact field works; the crate instantiates it with [`BigRational`]
/// (see [`crate::Rational`]) and tests also run the generic code over
/// `Ratio<i128>`. Floating-point types satisfy the bounds too, but fitting
/// compares values for exact equality, so they are only suitable for
/// evaluation.
///
/// [`BigRational`]: num_rational::BigRational
pub trait Field: Num + Neg<Output = Self> + Clone + PartialEq + Debug + Display + FromPrimitive {}

impl<T> Field for T where T: Num + Neg<Output = T> + Clone + PartialEq + Debug + Display + FromPrimitive {}

/// Fields whose elements are fractions over an integer ring, so results can
/// be checked for integrality and cleared of denominators.
pub trait RationalField: Field + Signed {
    type Int: Integer + Signed + Clone + Display + Debug;

    fn numer_ref(&self) -> &Self::Int;
    fn denom_ref(&self) -> &Self::Int;
    fn from_int(i: Self::Int) -> Self;

    fn is_integral(&self) -> bool {
        self.denom_ref().is_one()
    }
}

impl<I> RationalField for Ratio<I>
where
    I: Integer + Signed + Clone + Display + Debug + FromPrimitive,
    Ratio<I>: Field,
{
    type Int = I;

    fn numer_ref(&self) -> &I {
        self.numer()
    }

    fn denom_ref(&self) -> &I {
        self.denom()
    }

    fn from_int(i: I) -> Self {
        Ratio::from_integer(i)
    }
}

/// `n` as an element of `T`.
pub fn from_i64<T: Field>(n: i64) -> T {
    T::from_i64(n).expect("every field in use represents small integers")
}

/// Exact rational `num/den` for literals in formulas.
pub fn frac<T: Field>(num: i64, den: i64) -> T {
    from_i64::<T>(num) / from_i64::<T>(den)
}

/// Converts a big integer into the arbitrary-precision rational field.
pub fn big(i: impl Into<BigInt>) -> crate::Rational {
    crate::Rational::from_integer(i.into())
}

/// Formats a rational as `num/den`, always with an explicit denominator.
pub fn rational_to_string<T: RationalField>(r: &T) -> String {
    format!("{}/{}", r.numer_ref(), r.denom_ref())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Option<crate::Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().ok()?;
            let den: BigInt = b.trim().parse().ok()?;
            if den == BigInt::from(0) {
                return None;
            }
            Some(crate::Rational::new(num, den))
        }
        None => s.parse::<BigInt>().ok().map(crate::Rational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn rational_text() {
        let r: Rational = frac(-10, 6);
        assert_eq!(rational_to_string(&r), "-5/3");
        assert_eq!(parse_rational("-5/3"), Some(r));
        assert_eq!(parse_rational("7"), Some(frac(7, 1)));
        assert_eq!(rational_to_string(&frac::<Rational>(7, 1)), "7/1");
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
