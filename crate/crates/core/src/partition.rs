//! Set partitions of `{0, .., n-1}` as restricted growth strings.
//!
//! A restricted growth string `a` has `a[0] = 0` and
//! `a[i] <= 1 + max(a[..i])`; element `i` belongs to block `a[i]`. Listing
//! strings in lexicographic order gives every set partition exactly once, in
//! a canonical order.

/// Every restricted growth string of length `n` whose blocks all have at
/// least `min_block` elements, optionally with exactly `blocks` blocks.
///
/// Partial strings that cannot be completed are cut off early, so the cost
/// is proportional to the output.
pub fn restricted_growth_strings(n: usize, min_block: usize, blocks: Option<usize>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    extend(n, min_block.max(1), blocks, &mut rgs, &mut sizes, &mut out);
    out
}

fn feasible(n: usize, min_block: usize, blocks: Option<usize>, placed: usize, sizes: &[usize]) -> bool {
    let remaining = n - placed;
    let deficit: usize = sizes.iter().map(|&s| min_block.saturating_sub(s)).sum();
    match blocks {
        Some(k) => sizes.len() <= k && deficit + (k - sizes.len()) * min_block <= remaining,
        None => deficit <= remaining,
    }
}

fn extend(
    n: usize,
    min_block: usize,
    blocks: Option<usize>,
    rgs: &mut Vec<usize>,
    sizes: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if rgs.len() == n {
        if blocks.is_none_or(|k| k == sizes.len()) && sizes.iter().all(|&s| s >= min_block) {
            out.push(rgs.clone());
        }
        return;
    }
    for b in 0..=sizes.len() {
        if b == sizes.len() {
            sizes.push(0);
        }
        sizes[b] += 1;
        rgs.push(b);
        if feasible(n, min_block, blocks, rgs.len(), sizes) {
            extend(n, min_block, blocks, rgs, sizes, out);
        }
        rgs.pop();
        sizes[b] -= 1;
        if sizes[b] == 0 {
            sizes.pop();
        }
    }
}

/// Blocks of a restricted growth string, each listed in increasing order.
pub fn blocks_of(rgs: &[usize]) -> Vec<Vec<usize>> {
    let count = rgs.iter().max().map_or(0, |&m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (i, &b) in rgs.iter().enumerate() {
        blocks[b].push(i);
    }
    blocks
}

/// Partitions of `{0, .., n-1}` into blocks of size at least `min_block`,
/// as lists of blocks, in restricted-growth order.
pub fn set_partitions(n: usize, min_block: usize, blocks: Option<usize>) -> Vec<Vec<Vec<usize>>> {
    restricted_growth_strings(n, min_block, blocks).iter().map(|r| blocks_of(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// All canonical labelings found by brute force over `n^n` assignments.
    fn brute_force(n: usize, min_block: usize, blocks: Option<usize>) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        let total = n.pow(n as u32).max(1);
        for code in 0..total {
            let mut labels = Vec::with_capacity(n);
            let mut c = code;
            for _ in 0..n {
                labels.push(c % n.max(1));
                c /= n.max(1);
            }
            // relabel blocks by first occurrence
            let mut map = Vec::new();
            let rgs: Vec<usize> = labels
                .iter()
                .map(|l| match map.iter().position(|m| m == l) {
                    Some(p) => p,
                    None => {
                        map.push(*l);
                        map.len() - 1
                    }
                })
                .collect();
            let b = blocks_of(&rgs);
            if b.iter().all(|blk| blk.len() >= min_block) && blocks.is_none_or(|k| k == b.len()) {
                out.insert(rgs);
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn matches_brute_force() {
        for n in 0..=6 {
            for min_block in 1..=3 {
                for blocks in [None, Some(1), Some(2), Some(3)] {
                    assert_eq!(
                        restricted_growth_strings(n, min_block, blocks),
                        brute_force(n, min_block, blocks),
                        "n={n} min={min_block} k={blocks:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn counts_without_singletons() {
        let expected = [1, 0, 1, 1, 4, 11, 41, 162, 715, 3425, 17722];
        for (n, &count) in expected.iter().enumerate() {
            assert_eq!(restricted_growth_strings(n, 2, None).len(), count, "n={n}");
        }
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &count) in bell.iter().enumerate() {
            assert_eq!(restricted_growth_strings(n, 1, None).len(), count);
        }
    }

    #[test]
    fn lexicographic_order() {
        let all = restricted_growth_strings(5, 1, None);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(set_partitions(4, 2, Some(2)), vec![
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0, 2], vec![1, 3]],
            vec![vec![0, 3], vec![1, 2]],
        ]);
    }
}
