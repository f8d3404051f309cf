//! Pairwise (tree) summation over an index space.

use std::ops::Add;

const LEAF: usize = 64;

/// Sums `term(i)` for `i` in `range` by recursive halving.
pub(crate) fn pairwise<T, F>(start: usize, end: usize, term: &F) -> T
where
    T: Add<Output = T> + Default,
    F: Fn(usize) -> T,
{
    let n = end - start;
    if n <= LEAF {
        let mut acc = T::default();
        for i in start..end {
            acc = acc + term(i);
        }
        acc
    } else {
        let mid = start + n / 2;
        pairwise(start, mid, term) + pairwise(mid, end, term)
    }
}

/// Fixed-size vector of partial sums so several accumulators can share one pass.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Acc4(pub [f64; 4]);

impl Add for Acc4 {
    type Output = Acc4;
    fn add(self, rhs: Acc4) -> Acc4 {
        let mut out = self.0;
        for (o, r) in out.iter_mut().zip(rhs.0) {
            *o += r;
        }
        Acc4(out)
    }
}
