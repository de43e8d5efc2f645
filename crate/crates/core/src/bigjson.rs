//! Big integers in JSON as decimal strings.

use num_bigint::BigInt;
use serde::Serializer;

pub fn ser<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}
