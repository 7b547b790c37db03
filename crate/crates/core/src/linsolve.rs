//! Exact Gaussian elimination over `F_p` on sparse rows.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::Prime;

/// A linear equation `Σ coeffs[j]·x_j = rhs`.
#[derive(Clone, Debug, Default)]
pub struct Row {
    pub coeffs: BTreeMap<usize, u32>,
    pub rhs: u32,
}

/// Solves the system, returning one solution (free variables set to 0) or
/// `None` when it is inconsistent.
pub fn solve(p: Prime, ncols: usize, rows: Vec<Row>) -> Option<Vec<u32>> {
    // pivot column -> row normalized to 1 at the pivot, with no entries left of it
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for mut row in rows {
        row.coeffs.retain(|_, v| *v != 0);
        let mut cursor = 0;
        loop {
            let next = row
                .coeffs
                .range(cursor..)
                .find(|(c, _)| pivots.contains_key(c))
                .map(|(&c, &v)| (c, v));
            let Some((col, factor)) = next else { break };
            let pivot = &pivots[&col];
            for (&c, &v) in &pivot.coeffs {
                let entry = row.coeffs.entry(c).or_insert(0);
                *entry = p.sub(*entry, p.mul(factor, v));
                if *entry == 0 {
                    row.coeffs.remove(&c);
                }
            }
            row.rhs = p.sub(row.rhs, p.mul(factor, pivot.rhs));
            cursor = col + 1;
        }
        let Some((&lead, &v)) = row.coeffs.iter().next() else {
            if row.rhs != 0 {
                return None;
            }
            continue;
        };
        let inv = p.inv(v).expect("nonzero pivot");
        for value in row.coeffs.values_mut() {
            *value = p.mul(*value, inv);
        }
        row.rhs = p.mul(row.rhs, inv);
        pivots.insert(lead, row);
    }
    let mut x = vec![0u32; ncols];
    for (&col, row) in pivots.iter().rev() {
        let mut value = row.rhs;
        for (&c, &v) in row.coeffs.range(col + 1..) {
            value = p.sub(value, p.mul(v, x[c]));
        }
        x[col] = value;
    }
    Some(x)
}
