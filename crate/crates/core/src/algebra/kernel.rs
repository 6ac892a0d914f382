//! Twisted convolution on row-structured supports.
//!
//! Terms are grouped into rows sharing `(p₁, p₃)` and stored densely along
//! `p₂`. For a fixed pair of rows the product phase
//! `exp(2iπ(θ₂₁p₂q₁ + θ₃₁p₃q₁ + θ₃₂p₃q₂))` separates into a factor depending
//! on `p₂` only and one depending on `q₂` only, so each row pair reduces to a
//! plain 1-D convolution of pre-twisted rows.
//!
//! Output rows are independent and computed in parallel. Within an output
//! mode the accumulation order is fixed (row pairs in sorted order of the
//! left row key, then ascending `p₂`), so results do not depend on the
//! thread schedule.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use super::block::{mul_acc, Block};
use super::theta::{cis_turns, DeformationMatrix};
use super::MultiIndex;

pub(crate) struct Row {
    p1: i64,
    p3: i64,
    start: i64,
    len: usize,
    data: Vec<Complex64>,
}

pub(crate) fn rows_of(n: usize, coeffs: &BTreeMap<MultiIndex, Block>) -> Vec<Row> {
    let mut grouped: BTreeMap<(i64, i64), Vec<(i64, &Block)>> = BTreeMap::new();
    for (p, b) in coeffs {
        grouped.entry((p.0[0], p.0[2])).or_default().push((p.0[1], b));
    }
    let nn = n * n;
    grouped
        .into_iter()
        .map(|((p1, p3), entries)| {
            // BTreeMap order is (p1, p2, p3), so p2 is ascending within a row.
            let start = entries[0].0;
            let end = entries[entries.len() - 1].0;
            let len = (end - start + 1) as usize;
            let mut data = vec![Complex64::new(0.0, 0.0); len * nn];
            for (p2, b) in entries {
                let off = (p2 - start) as usize * nn;
                data[off..off + nn].copy_from_slice(b.as_slice());
            }
            Row {
                p1,
                p3,
                start,
                len,
                data,
            }
        })
        .collect()
}

/// Full twisted product, returned as unpruned `(mode, block)` pairs in
/// ascending mode order. `radius` drops modes with any `|r_i| > radius`.
#[allow(clippy::needless_range_loop)]
pub(crate) fn twisted_product(
    theta: &DeformationMatrix,
    n: usize,
    a: &BTreeMap<MultiIndex, Block>,
    b: &BTreeMap<MultiIndex, Block>,
    radius: Option<i64>,
) -> Vec<(MultiIndex, Block)> {
    let rows_a = rows_of(n, a);
    let rows_b = rows_of(n, b);

    let mut plan: BTreeMap<(i64, i64), Vec<(usize, usize)>> = BTreeMap::new();
    for (ia, ra) in rows_a.iter().enumerate() {
        for (ib, rb) in rows_b.iter().enumerate() {
            let key = (ra.p1 + rb.p1, ra.p3 + rb.p3);
            if let Some(r) = radius {
                if key.0.abs() > r || key.1.abs() > r {
                    continue;
                }
            }
            plan.entry(key).or_default().push((ia, ib));
        }
    }

    let t21 = theta.get(2, 1);
    let t31 = theta.get(3, 1);
    let t32 = theta.get(3, 2);
    let nn = n * n;

    let plan: Vec<_> = plan.into_iter().collect();
    let rows: Vec<(i64, i64, i64, Vec<Complex64>)> = plan
        .par_iter()
        .map(|((r1, r3), pairs)| {
            let lo = pairs
                .iter()
                .map(|&(ia, ib)| rows_a[ia].start + rows_b[ib].start)
                .min()
                .unwrap();
            let hi = pairs
                .iter()
                .map(|&(ia, ib)| {
                    rows_a[ia].start + rows_a[ia].len as i64 + rows_b[ib].start + rows_b[ib].len as i64 - 2
                })
                .max()
                .unwrap();
            let mut out = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize * nn];
            let mut tw_a = Vec::new();
            let mut tw_b = Vec::new();
            for &(ia, ib) in pairs {
                let ra = &rows_a[ia];
                let rb = &rows_b[ib];
                let q1 = rb.p1;
                let p3 = ra.p3;
                tw_a.clear();
                tw_a.extend((0..ra.len as i64).map(|i| {
                    let p2 = ra.start + i;
                    cis_turns(t21 * (p2 * q1) as f64 + t31 * (p3 * q1) as f64)
                }));
                tw_b.clear();
                tw_b.extend((0..rb.len as i64).map(|j| cis_turns(t32 * (p3 * (rb.start + j)) as f64)));
                let off = (ra.start + rb.start - lo) as usize;
                if n == 1 {
                    let bt: Vec<Complex64> = rb.data.iter().zip(&tw_b).map(|(x, w)| x * w).collect();
                    for i in 0..ra.len {
                        let x = ra.data[i];
                        if x.re == 0.0 && x.im == 0.0 {
                            continue;
                        }
                        let x = x * tw_a[i];
                        let dst = &mut out[off + i..off + i + rb.len];
                        for (o, y) in dst.iter_mut().zip(&bt) {
                            *o += x * y;
                        }
                    }
                } else {
                    for i in 0..ra.len {
                        let ablk = &ra.data[i * nn..(i + 1) * nn];
                        if ablk.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                            continue;
                        }
                        for j in 0..rb.len {
                            let bblk = &rb.data[j * nn..(j + 1) * nn];
                            let k = off + i + j;
                            mul_acc(n, &mut out[k * nn..(k + 1) * nn], ablk, bblk, tw_a[i] * tw_b[j]);
                        }
                    }
                }
            }
            (*r1, *r3, lo, out)
        })
        .collect();

    let mut result = Vec::new();
    for (r1, r3, lo, data) in rows {
        for (k, chunk) in data.chunks_exact(nn).enumerate() {
            let r2 = lo + k as i64;
            if let Some(r) = radius {
                if r2.abs() > r {
                    continue;
                }
            }
            if chunk.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                continue;
            }
            let block = Block::from_row_major(n, chunk.to_vec()).expect("block size");
            result.push((MultiIndex([r1, r2, r3]), block));
        }
    }
    result
}
