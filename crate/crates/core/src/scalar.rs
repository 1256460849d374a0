use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

/// Exact integer scalars usable as matrix entries.
///
/// `BigInt` is the default everywhere in this crate. Fixed-width types are
/// accepted for small inputs (tests, quick experiments); they overflow like
/// any machine integer, so anything whose entries grow with the degree must
/// use `BigInt`.
pub trait IntegerRing: Integer + Signed + Clone + Debug + Display + From<i32> + Into<BigInt> {
    fn to_bigint(&self) -> BigInt {
        self.clone().into()
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

impl IntegerRing for BigInt {}
impl IntegerRing for i64 {}
impl IntegerRing for i128 {}
