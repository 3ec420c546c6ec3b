//! Dense complex tensors over binary variables.
//!
//! Data is stored row-major in axis order: the first axis is the most
//! significant bit of the flat index.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model::VarId;
use crate::C64;

pub const DEFAULT_MAX_RANK: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("tensor over {} variables exceeds max rank {max_rank}: {vars:?}", vars.len())]
    RankOverflow { vars: Vec<VarId>, max_rank: usize },
    #[error("variable {0:?} is not an axis of the tensor")]
    MissingAxis(VarId),
    #[error("duplicate axis {0:?}")]
    DuplicateAxis(VarId),
    #[error("data length {got} does not match 2^{rank}")]
    Shape { rank: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    axes: Vec<VarId>,
    data: Vec<C64>,
}

impl Tensor {
    pub fn new(axes: Vec<VarId>, data: Vec<C64>) -> Result<Self, TensorError> {
        for (i, a) in axes.iter().enumerate() {
            if axes[..i].contains(a) {
                return Err(TensorError::DuplicateAxis(*a));
            }
        }
        if data.len() != 1usize << axes.len() {
            return Err(TensorError::Shape { rank: axes.len(), got: data.len() });
        }
        Ok(Tensor { axes, data })
    }

    pub fn scalar(value: C64) -> Self {
        Tensor { axes: Vec::new(), data: vec![value] }
    }

    pub fn rank(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[VarId] {
        &self.axes
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.axes.contains(&v)
    }

    /// The value of a rank-0 tensor.
    pub fn scalar_value(&self) -> Option<C64> {
        (self.axes.is_empty()).then(|| self.data[0])
    }

    fn stride_of(&self, v: VarId) -> Option<usize> {
        let pos = self.axes.iter().position(|&a| a == v)?;
        Some(1 << (self.rank() - 1 - pos))
    }

    /// Entry at the assignment given by `bit(var)`.
    pub fn value_at(&self, mut bit: impl FnMut(VarId) -> bool) -> C64 {
        let idx = self.axes.iter().fold(0usize, |acc, &a| (acc << 1) | bit(a) as usize);
        self.data[idx]
    }

    /// Sums over the two values of `v`; the rank drops by one.
    pub fn sum_out(&self, v: VarId) -> Result<Tensor, TensorError> {
        self.reduce_axis(v, |lo, hi| lo + hi)
    }

    /// Restricts `v` to `bit`; the rank drops by one.
    pub fn slice(&self, v: VarId, bit: bool) -> Result<Tensor, TensorError> {
        if bit {
            self.reduce_axis(v, |_, hi| hi)
        } else {
            self.reduce_axis(v, |lo, _| lo)
        }
    }

    fn reduce_axis(&self, v: VarId, f: impl Fn(C64, C64) -> C64) -> Result<Tensor, TensorError> {
        let stride = self.stride_of(v).ok_or(TensorError::MissingAxis(v))?;
        let half = self.data.len() / 2;
        let mut data = Vec::with_capacity(half);
        for block in self.data.chunks_exact(2 * stride) {
            let (lo, hi) = block.split_at(stride);
            data.extend(lo.iter().zip(hi).map(|(&a, &b)| f(a, b)));
        }
        let axes = self.axes.iter().copied().filter(|&a| a != v).collect();
        Ok(Tensor { axes, data })
    }

    /// Reorders axes to `order`, which must be a permutation of the current axes.
    pub fn permuted(&self, order: &[VarId]) -> Result<Tensor, TensorError> {
        if order.len() != self.rank() {
            return Err(TensorError::Shape { rank: order.len(), got: self.data.len() });
        }
        if order == self.axes.as_slice() {
            return Ok(self.clone());
        }
        product(self, &Tensor::scalar(C64::new(1.0, 0.0)), order)
    }
}

/// Variables of `ts` in first-appearance order.
pub fn union_axes<'a>(ts: impl IntoIterator<Item = &'a Tensor>) -> Vec<VarId> {
    let mut out: Vec<VarId> = Vec::new();
    for t in ts {
        for &a in &t.axes {
            if !out.contains(&a) {
                out.push(a);
            }
        }
    }
    out
}

/// Entrywise product of `a` and `b` laid out over `out_axes`, which must be
/// exactly the union of their axes.
fn product(a: &Tensor, b: &Tensor, out_axes: &[VarId]) -> Result<Tensor, TensorError> {
    let r = out_axes.len();
    // weights indexed by bit position from the least significant end
    let mut wa = vec![0usize; r + 1];
    let mut wb = vec![0usize; r + 1];
    for (k, &v) in out_axes.iter().enumerate() {
        let p = r - 1 - k;
        wa[p] = a.stride_of(v).unwrap_or(0);
        wb[p] = b.stride_of(v).unwrap_or(0);
    }
    for t in [a, b] {
        if let Some(&missing) = t.axes.iter().find(|v| !out_axes.contains(v)) {
            return Err(TensorError::MissingAxis(missing));
        }
    }
    let mut pa = vec![0usize; r + 1];
    let mut pb = vec![0usize; r + 1];
    for p in 1..=r {
        pa[p] = pa[p - 1] + wa[p - 1];
        pb[p] = pb[p - 1] + wb[p - 1];
    }
    let size = 1usize << r;
    let mut data = Vec::with_capacity(size);
    let (mut ia, mut ib) = (0usize, 0usize);
    for idx in 0..size {
        data.push(a.data[ia] * b.data[ib]);
        let next = idx + 1;
        if next < size {
            let p = next.trailing_zeros() as usize;
            ia = ia + wa[p] - pa[p];
            ib = ib + wb[p] - pb[p];
        }
    }
    Ok(Tensor { axes: out_axes.to_vec(), data })
}

/// Product of all tensors over the union of their variables.
///
/// Tensors are combined pairwise, always merging the two of smallest rank
/// first; the result's axes are the union in first-appearance order.
pub fn multiply_all(ts: Vec<Tensor>, max_rank: usize) -> Result<Tensor, TensorError> {
    let out_axes = union_axes(&ts);
    if out_axes.len() > max_rank {
        return Err(TensorError::RankOverflow { vars: out_axes, max_rank });
    }
    let mut pool = ts;
    if pool.is_empty() {
        return Ok(Tensor::scalar(C64::new(1.0, 0.0)));
    }
    while pool.len() > 2 {
        let (i, j) = two_smallest(&pool);
        let b = pool.remove(j);
        let a = &pool[i];
        let axes = union_axes([a, &b]);
        pool[i] = product(a, &b, &axes)?;
    }
    match pool.len() {
        1 => pool[0].permuted(&out_axes),
        _ => product(&pool[0], &pool[1], &out_axes),
    }
}

/// Indices `i < j` of the two lowest-rank tensors (earlier position wins ties).
fn two_smallest(pool: &[Tensor]) -> (usize, usize) {
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    idx.sort_by_key(|&i| (pool[i].rank(), i));
    let (x, y) = (idx[0], idx[1]);
    (x.min(y), x.max(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::assert_close;
    use proptest::prelude::*;

    fn v(i: u32) -> VarId {
        VarId(i)
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn scalars_multiply() {
        let t = multiply_all(vec![Tensor::scalar(c(2.0)), Tensor::scalar(c(3.0))], 30).unwrap();
        assert_eq!(t.scalar_value(), Some(c(6.0)));
        let empty = multiply_all(vec![], 30).unwrap();
        assert_eq!(empty.scalar_value(), Some(c(1.0)));
    }

    #[test]
    fn shared_axis_is_hadamard_product() {
        let a = Tensor::new(vec![v(0)], vec![c(2.0), c(3.0)]).unwrap();
        let b = Tensor::new(vec![v(0)], vec![c(5.0), c(7.0)]).unwrap();
        let t = multiply_all(vec![a, b], 30).unwrap();
        assert_eq!(t.axes(), &[v(0)]);
        assert_eq!(t.data(), &[c(10.0), c(21.0)]);
    }

    #[test]
    fn outer_product_layout() {
        let a = Tensor::new(vec![v(0)], vec![c(1.0), c(2.0)]).unwrap();
        let b = Tensor::new(vec![v(1)], vec![c(3.0), c(5.0)]).unwrap();
        let t = multiply_all(vec![a, b], 30).unwrap();
        assert_eq!(t.axes(), &[v(0), v(1)]);
        assert_eq!(t.data(), &[c(3.0), c(5.0), c(6.0), c(10.0)]);
    }

    #[test]
    fn sum_out_cases() {
        let boundary = Tensor::new(vec![v(3)], vec![c(1.0), c(0.0)]).unwrap();
        assert_eq!(boundary.sum_out(v(3)).unwrap().scalar_value(), Some(c(1.0)));

        let id = Tensor::new(vec![v(0), v(1)], vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        for axis in [v(0), v(1)] {
            let s = id.sum_out(axis).unwrap();
            assert_eq!(s.data(), &[c(1.0), c(1.0)]);
        }
        assert_eq!(id.sum_out(v(9)), Err(TensorError::MissingAxis(v(9))));
    }

    #[test]
    fn slice_picks_half() {
        let t = Tensor::new(vec![v(0), v(1)], vec![c(1.0), c(2.0), c(3.0), c(4.0)]).unwrap();
        assert_eq!(t.slice(v(0), true).unwrap().data(), &[c(3.0), c(4.0)]);
        assert_eq!(t.slice(v(1), false).unwrap().data(), &[c(1.0), c(3.0)]);
    }

    #[test]
    fn rank_overflow_names_vars() {
        let a = Tensor::new(vec![v(0), v(1)], vec![c(1.0); 4]).unwrap();
        let b = Tensor::new(vec![v(2)], vec![c(1.0); 2]).unwrap();
        let err = multiply_all(vec![a, b], 2).unwrap_err();
        assert_eq!(err, TensorError::RankOverflow { vars: vec![v(0), v(1), v(2)], max_rank: 2 });
    }

    #[test]
    fn constructor_checks() {
        assert!(matches!(Tensor::new(vec![v(0), v(0)], vec![c(0.0); 4]), Err(TensorError::DuplicateAxis(_))));
        assert!(matches!(Tensor::new(vec![v(0)], vec![c(0.0); 4]), Err(TensorError::Shape { .. })));
    }

    fn arb_tensor(vars: u32, max_rank: usize) -> impl Strategy<Value = Tensor> {
        proptest::sample::subsequence((0..vars).collect::<Vec<_>>(), 0..=max_rank)
            .prop_shuffle()
            .prop_flat_map(|axes| {
                let n = 1usize << axes.len();
                (Just(axes), proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n))
            })
            .prop_map(|(axes, data)| {
                Tensor::new(
                    axes.into_iter().map(VarId).collect(),
                    data.into_iter().map(|(re, im)| C64::new(re, im)).collect(),
                )
                .unwrap()
            })
    }

    /// Brute-force sum over all assignments of the product of `ts`.
    fn brute_total(ts: &[Tensor]) -> C64 {
        let vars = union_axes(ts);
        let mut total = C64::new(0.0, 0.0);
        for a in 0..(1usize << vars.len()) {
            let bit = |x: VarId| {
                let i = vars.iter().position(|&y| y == x).unwrap();
                (a >> i) & 1 == 1
            };
            total += ts.iter().map(|t| t.value_at(bit)).product::<C64>();
        }
        total
    }

    proptest! {
        #[test]
        fn multiply_all_order_insensitive(ts in proptest::collection::vec(arb_tensor(6, 3), 1..5), seed in any::<u64>()) {
            let forward = multiply_all(ts.clone(), 30).unwrap();
            let mut rev = ts.clone();
            let k = (seed as usize) % rev.len();
            rev.rotate_left(k);
            rev.reverse();
            let other = multiply_all(rev, 30).unwrap().permuted(forward.axes()).unwrap();
            for (a, b) in forward.data().iter().zip(other.data()) {
                prop_assert!((a - b).norm() <= 1e-12);
            }
        }

        #[test]
        fn sum_out_commutes(t in arb_tensor(4, 4).prop_filter("rank 4", |t| t.rank() == 4)) {
            let (u, w) = (t.axes()[1], t.axes()[3]);
            let a = t.sum_out(u).unwrap().sum_out(w).unwrap();
            let b = t.sum_out(w).unwrap().sum_out(u).unwrap();
            for (x, y) in a.data().iter().zip(b.data()) {
                prop_assert!((x - y).norm() <= 1e-12);
            }
        }

        #[test]
        fn contraction_matches_brute_force(ts in proptest::collection::vec(arb_tensor(12, 4), 1..8)) {
            let want = brute_total(&ts);
            let mut pool = ts;
            let vars = union_axes(&pool);
            let mut scalar = C64::new(1.0, 0.0);
            for var in vars {
                let (hit, rest): (Vec<_>, Vec<_>) = pool.into_iter().partition(|t| t.contains(var));
                pool = rest;
                let s = multiply_all(hit, 30).unwrap().sum_out(var).unwrap();
                match s.scalar_value() {
                    Some(x) => scalar *= x,
                    None => pool.push(s),
                }
            }
            for t in pool {
                scalar *= t.scalar_value().unwrap();
            }
            assert_close(scalar, want, 1e-10 * (1.0 + want.norm()));
        }
    }
}
