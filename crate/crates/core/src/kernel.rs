//! Dot-product kernels for the pairwise score histogram.
//!
//! Every score is reduced over four fixed lanes and summed in a fixed
//! order, whether it comes from [`dot`] or from the 2×4 micro-kernel,
//! so a pair's score is bitwise identical regardless of tiling, dispatch or
//! thread count. Rust never contracts `a * b + c` into an FMA, so the AVX2
//! build of the same code produces the same bits as the baseline build.

use crate::empirical::{bin_index, EmbeddingSet};

const LANES: usize = 4;

#[inline(always)]
fn reduce(acc: &[f64; LANES]) -> f64 {
    (acc[0] + acc[2]) + (acc[1] + acc[3])
}

#[inline(always)]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; LANES];
    let split = a.len() - a.len() % LANES;
    for (x, y) in a[..split].chunks_exact(LANES).zip(b[..split].chunks_exact(LANES)) {
        for k in 0..LANES {
            acc[k] += x[k] * y[k];
        }
    }
    for (k, (x, y)) in a[split..].iter().zip(&b[split..]).enumerate() {
        acc[k] += x * y;
    }
    reduce(&acc)
}

/// Dot products of `R` left rows against four right rows; entry [r][c]
/// equals `dot(a[r], b[c])` bitwise.
#[inline(always)]
fn dot_block<const R: usize>(a: [&[f64]; R], b: [&[f64]; 4]) -> [[f64; 4]; R] {
    let len = a[0].len();
    let mut acc = [[[0.0f64; LANES]; 4]; R];
    let split = len - len % LANES;
    let mut off = 0;
    while off < split {
        for r in 0..R {
            let x = &a[r][off..off + LANES];
            for (c, row) in b.iter().enumerate() {
                let y = &row[off..off + LANES];
                for k in 0..LANES {
                    acc[r][c][k] += x[k] * y[k];
                }
            }
        }
        off += LANES;
    }
    for (k, idx) in (split..len).enumerate() {
        for r in 0..R {
            for c in 0..4 {
                acc[r][c][k] += a[r][idx] * b[c][idx];
            }
        }
    }
    let mut out = [[0.0; 4]; R];
    for r in 0..R {
        for c in 0..4 {
            out[r][c] = reduce(&acc[r][c]);
        }
    }
    out
}

/// Bins the scores of row `i` against rows `j..j_end`.
#[inline(always)]
fn row_against(e: &EmbeddingSet, i: usize, mut j: usize, j_end: usize, width: f64, counts: &mut [u64]) {
    let bins = counts.len();
    let a = e.row(i);
    while j + 4 <= j_end {
        let [s] = dot_block::<1>([a], [e.row(j), e.row(j + 1), e.row(j + 2), e.row(j + 3)]);
        for v in s {
            counts[bin_index(v, width, bins)] += 1;
        }
        j += 4;
    }
    while j < j_end {
        counts[bin_index(dot(a, e.row(j)), width, bins)] += 1;
        j += 1;
    }
}

#[inline(always)]
fn tile_generic(e: &EmbeddingSet, bi: usize, bj: usize, tile: usize, width: f64, counts: &mut [u64]) {
    let rows = e.rows();
    let bins = counts.len();
    let i_end = ((bi + 1) * tile).min(rows);
    let j_end = ((bj + 1) * tile).min(rows);
    let diagonal = bi == bj;
    let mut i = bi * tile;
    // two left rows at a time share every load of the right rows
    while i + 2 <= i_end {
        let mut j = if diagonal {
            counts[bin_index(dot(e.row(i), e.row(i + 1)), width, bins)] += 1;
            i + 2
        } else {
            bj * tile
        };
        let (a0, a1) = (e.row(i), e.row(i + 1));
        while j + 4 <= j_end {
            let s = dot_block::<2>([a0, a1], [e.row(j), e.row(j + 1), e.row(j + 2), e.row(j + 3)]);
            for v in s.into_iter().flatten() {
                counts[bin_index(v, width, bins)] += 1;
            }
            j += 4;
        }
        row_against(e, i, j, j_end, width, counts);
        row_against(e, i + 1, j, j_end, width, counts);
        i += 2;
    }
    if i < i_end {
        let j = if diagonal { i + 1 } else { bj * tile };
        row_against(e, i, j, j_end, width, counts);
    }
}

#[cfg(target_arch = "x86_64")]
mod avx2 {
    use std::arch::x86_64::*;

    use super::{bin_index, dot, EmbeddingSet, LANES};

    /// Right-hand rows per cache panel.
    const PANEL: usize = 64;

    #[inline(always)]
    unsafe fn reduce(v: __m256d) -> f64 {
        let mut lanes = [0.0f64; LANES];
        _mm256_storeu_pd(lanes.as_mut_ptr(), v);
        super::reduce(&lanes)
    }

    /// Two left rows against four right rows, lane for lane the same
    /// arithmetic as [`dot`].
    #[inline(always)]
    unsafe fn block_2x4(a: [&[f64]; 2], b: [&[f64]; 4]) -> [f64; 8] {
        let len = a[0].len();
        let split = len - len % LANES;
        let mut acc = [_mm256_setzero_pd(); 8];
        let (pa0, pa1) = (a[0].as_ptr(), a[1].as_ptr());
        let pb = [b[0].as_ptr(), b[1].as_ptr(), b[2].as_ptr(), b[3].as_ptr()];
        let mut off = 0;
        while off < split {
            let x0 = _mm256_loadu_pd(pa0.add(off));
            let x1 = _mm256_loadu_pd(pa1.add(off));
            for c in 0..4 {
                let y = _mm256_loadu_pd(pb[c].add(off));
                acc[c] = _mm256_add_pd(acc[c], _mm256_mul_pd(x0, y));
                acc[4 + c] = _mm256_add_pd(acc[4 + c], _mm256_mul_pd(x1, y));
            }
            off += LANES;
        }
        let mut out = [0.0; 8];
        for (k, slot) in out.iter_mut().enumerate() {
            let (r, c) = (k / 4, k % 4);
            let mut lanes = [0.0f64; LANES];
            _mm256_storeu_pd(lanes.as_mut_ptr(), acc[k]);
            for (t, idx) in (split..len).enumerate() {
                lanes[t] += a[r][idx] * b[c][idx];
            }
            *slot = super::reduce(&lanes);
        }
        out
    }

    #[inline(always)]
    unsafe fn dot_avx(a: &[f64], b: &[f64]) -> f64 {
        let len = a.len();
        if !len.is_multiple_of(LANES) {
            return dot(a, b);
        }
        let mut acc = _mm256_setzero_pd();
        let mut off = 0;
        while off < len {
            let x = _mm256_loadu_pd(a.as_ptr().add(off));
            let y = _mm256_loadu_pd(b.as_ptr().add(off));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(x, y));
            off += LANES;
        }
        reduce(acc)
    }

    #[target_feature(enable = "avx2")]
    pub(super) unsafe fn tile(e: &EmbeddingSet, bi: usize, bj: usize, tile: usize, width: f64, counts: &mut [u64]) {
        let rows = e.rows();
        let bins = counts.len();
        let i_end = ((bi + 1) * tile).min(rows);
        let j_end = ((bj + 1) * tile).min(rows);
        let diagonal = bi == bj;
        let mut bin = |s: f64| counts[bin_index(s, width, bins)] += 1;
        // sweep the right tile in panels small enough to stay cache resident
        let mut panel = bj * tile;
        while panel < j_end {
            let panel_end = (panel + PANEL).min(j_end);
            let mut i = bi * tile;
            while i + 2 <= i_end {
                let (a0, a1) = (e.row(i), e.row(i + 1));
                let mut j = panel;
                if diagonal {
                    if i + 1 >= panel_end {
                        break;
                    }
                    if i + 1 >= panel {
                        bin(dot_avx(a0, a1));
                    }
                    j = j.max(i + 2);
                }
                while j + 4 <= panel_end {
                    let s = block_2x4([a0, a1], [e.row(j), e.row(j + 1), e.row(j + 2), e.row(j + 3)]);
                    for v in s {
                        bin(v);
                    }
                    j += 4;
                }
                while j < panel_end {
                    bin(dot_avx(a0, e.row(j)));
                    bin(dot_avx(a1, e.row(j)));
                    j += 1;
                }
                i += 2;
            }
            if i + 1 == i_end {
                let a = e.row(i);
                let start = if diagonal { panel.max(i + 1) } else { panel };
                for j in start..panel_end {
                    bin(dot_avx(a, e.row(j)));
                }
            }
            panel = panel_end;
        }
    }

    #[cfg(test)]
    pub(super) fn block_for_test(a: [&[f64]; 2], b: [&[f64]; 4]) -> Option<[f64; 8]> {
        if std::is_x86_feature_detected!("avx2") {
            // SAFETY: AVX2 availability checked above.
            Some(unsafe { block_2x4_entry(a, b) })
        } else {
            None
        }
    }

    #[cfg(test)]
    #[target_feature(enable = "avx2")]
    unsafe fn block_2x4_entry(a: [&[f64]; 2], b: [&[f64]; 4]) -> [f64; 8] {
        block_2x4(a, b)
    }
}

/// Adds the scores of every pair (i in tile `bi`, j in tile `bj`, i < j)
/// to `counts`.
pub(crate) fn accumulate_tile(
    e: &EmbeddingSet,
    bi: usize,
    bj: usize,
    tile: usize,
    width: f64,
    counts: &mut [u64],
) {
    #[cfg(target_arch = "x86_64")]
    {
        if std::is_x86_feature_detected!("avx2") {
            // SAFETY: the CPU supports AVX2, checked just above.
            unsafe { avx2::tile(e, bi, bj, tile, width, counts) };
            return;
        }
    }
    tile_generic(e, bi, bj, tile, width, counts)
}
