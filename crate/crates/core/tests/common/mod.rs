//! Reference computations shared by the integration tests.

use shplus_core::exact_algebra::BigRational;

/// Full turns completed by each rotation plane over the orbit's period,
/// counted one multiple at a time.
pub fn rotation_crossing_index(a: &[BigRational], k: usize, iterate: u64) -> Option<i64> {
    let period = &a[k - 1] * BigRational::from_integer(iterate.into());
    let mut total = a.len() as i64 - 1;
    for (j, aj) in a.iter().enumerate() {
        let mut m = 1i64;
        loop {
            let t = aj * BigRational::from_integer(m.into());
            if t > period {
                break;
            }
            if t == period && j + 1 != k {
                return None;
            }
            total += 2;
            m += 1;
        }
    }
    Some(total)
}
