//! Dynamic programming over vertex subsets encoded as `u32` bitmasks.

use crate::par::{self, Execution};

/// All `k`-subsets of `0..n` in increasing numeric order (Gosper's hack).
pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<u32> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::new();
    let mut s: u64 = (1 << k) - 1;
    while s < limit {
        out.push(s as u32);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    out
}

/// Fills a table over all subsets of `0..n` layer by layer in subset size,
/// ascending or descending. `f(mask, table)` may read any entry of a layer
/// that was already finished.
pub(crate) fn layered<T, F>(n: usize, exec: Execution, descending: bool, init: T, f: F) -> Vec<T>
where
    T: Copy + Send + Sync,
    F: Fn(u32, &[T]) -> T + Sync + Send,
{
    let mut table = vec![init; 1usize << n];
    let sizes: Vec<usize> = if descending {
        (0..=n).rev().collect()
    } else {
        (0..=n).collect()
    };
    for k in sizes {
        let layer = subsets_of_size(n, k);
        let values = {
            let t = &table;
            par::map(exec, &layer, |&s| f(s, t))
        };
        for (s, v) in layer.into_iter().zip(values) {
            table[s as usize] = v;
        }
    }
    table
}

/// Calls `f` for each set bit, lowest first.
#[inline]
pub(crate) fn bits(mut s: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (s != 0).then(|| {
            let b = s.trailing_zeros() as usize;
            s &= s - 1;
            b
        })
    })
}
