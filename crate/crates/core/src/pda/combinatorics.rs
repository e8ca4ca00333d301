//! Subsets, ranks and set partitions in lexicographic order.
//!
//! Elements are 0-based. Subsets are sorted vectors; partitions are lists of
//! blocks sorted by their smallest element.

use crate::error::{Error, Result};

/// `C(n, k)` with overflow detection.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc·(n − i) is divisible by (i + 1) after the multiplication
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / (i as u128 + 1);
    }
    Ok(acc)
}

pub fn factorial(n: u64) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, |acc, i| acc.checked_mul(i).ok_or(Error::Overflow("factorial")))
}

/// All `k`-subsets of `items`, lexicographic in the order of `items`.
pub fn subsets_of<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance the rightmost index that still has room
        let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
            return out;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// All `k`-subsets of `{0, …, n−1}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let items: Vec<usize> = (0..n).collect();
    subsets_of(&items, k)
}

/// Lexicographic rank of a sorted `k`-subset of `{0, …, n−1}`.
pub fn subset_rank(subset: &[usize], n: usize) -> usize {
    let k = subset.len();
    let mut rank = 0usize;
    let mut start = 0usize;
    for (i, &c) in subset.iter().enumerate() {
        for x in start..c {
            rank += binomial((n - x - 1) as u64, (k - i - 1) as u64).expect("small binomial") as usize;
        }
        start = c + 1;
    }
    rank
}

/// Unordered partitions of `items` into blocks of `block_size`; `items.len()`
/// must be a multiple of `block_size`. The block holding the smallest
/// remaining element is chosen first, so the output is lexicographic.
pub fn block_partitions(items: &[usize], block_size: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(rest: &[usize], block_size: usize, prefix: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let Some((&first, tail)) = rest.split_first() else {
            out.push(prefix.clone());
            return;
        };
        for mates in subsets_of(tail, block_size - 1) {
            let mut block = Vec::with_capacity(block_size);
            block.push(first);
            block.extend_from_slice(&mates);
            let remaining: Vec<usize> = tail.iter().copied().filter(|x| !mates.contains(x)).collect();
            prefix.push(block);
            rec(&remaining, block_size, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if block_size == 0 || items.len() % block_size != 0 {
        return out;
    }
    rec(items, block_size, &mut Vec::new(), &mut out);
    out
}

/// Every collection of `num_blocks` disjoint `block_size`-subsets drawn from
/// `pool`: selections of `num_blocks·block_size` elements in lexicographic
/// order, each followed by its partitions.
pub fn disjoint_block_collections(pool: &[usize], block_size: usize, num_blocks: usize) -> Vec<Vec<Vec<usize>>> {
    subsets_of(pool, block_size * num_blocks)
        .iter()
        .flat_map(|sel| block_partitions(sel, block_size))
        .collect()
}
