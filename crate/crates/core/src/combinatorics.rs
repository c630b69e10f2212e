//! Counting functions and small enumerators shared by the other modules.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Bell numbers: the number of set partitions of an `n`-set.
pub fn bell(n: usize) -> BigUint {
    // Bell triangle; the first entry of row n is B(n).
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap_or_else(BigUint::one));
        for value in &row {
            let prev = next.last().unwrap().clone();
            next.push(prev + value);
        }
        row = next;
    }
    row[0].clone()
}

/// Ordered Bell (Fubini) numbers: the number of ordered set partitions of an `n`-set.
pub fn fubini(n: usize) -> BigUint {
    let mut values: Vec<BigUint> = vec![BigUint::one()];
    for m in 1..=n {
        let mut total = BigUint::zero();
        let mut binom = BigUint::one();
        for k in 1..=m {
            binom = binom * (m - k + 1) / k;
            total += &binom * &values[m - k];
        }
        values.push(total);
    }
    values[n].clone()
}

/// Derangement numbers `d_0 = 1, d_1 = 0, d_n = (n-1)(d_{n-1} + d_{n-2})`.
pub fn derangement(n: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::one(), BigUint::zero());
    if n == 0 {
        return prev;
    }
    for m in 2..=n {
        let next = (&prev + &cur) * (m - 1);
        prev = cur;
        cur = next;
    }
    cur
}

/// All set partitions of `{0, .., n-1}`, generated from restricted growth strings.
///
/// Blocks are sorted internally and listed by their smallest element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut growth = vec![0usize; n];
    loop {
        let blocks = growth.iter().copied().max().unwrap() + 1;
        let mut partition = vec![Vec::new(); blocks];
        for (element, &block) in growth.iter().enumerate() {
            partition[block].push(element);
        }
        out.push(partition);

        // Advance to the next restricted growth string.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let bound = growth[..i].iter().copied().max().unwrap() + 1;
            if growth[i] < bound {
                growth[i] += 1;
                for slot in &mut growth[i + 1..] {
                    *slot = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Rearranges `perm` into the lexicographically next permutation, returning `false`
/// after the last one.
pub fn next_permutation<T: Ord>(perm: &mut [T]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let Some(i) = (0..perm.len() - 1).rfind(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = perm.iter().rposition(|x| *x > perm[i]).unwrap();
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Lexicographic rank of a permutation of `0..n` (Lehmer code).
pub fn permutation_rank(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut rank = 0usize;
    for i in 0..n {
        let smaller = perm[i + 1..].iter().filter(|&&v| v < perm[i]).count();
        rank = rank * (n - i) + smaller;
    }
    rank
}

/// Inverse of [`permutation_rank`]. `rank` must be below `n!`.
pub fn permutation_unrank(n: usize, mut rank: usize) -> Vec<usize> {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let radix = n - i;
        digits[i] = rank % radix;
        rank /= radix;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}
