//! Benchmark inputs shared by the criterion targets.

use lineadm_core::{LocalSystem, Q};

/// Deterministic classes with denominators 2..=6 and integral total.
pub fn sample_system(n: usize, salt: u64) -> LocalSystem {
    let mut values: Vec<Q> = (0..n as u64)
        .map(|i| {
            let d = 2 + ((i * 7 + salt * 3) % 5) as i64;
            let num = ((i * 13 + salt * 5) % d as u64) as i64;
            Q::new(num.into(), d.into())
        })
        .collect();
    let total: Q = values.iter().sum();
    let last = values.last_mut().expect("n > 0");
    *last -= total.clone() - total.floor();
    LocalSystem::from_values(values).expect("integral total")
}
