//! Sorted-subset bookkeeping for wedge coordinates.
//!
//! Wedge bases are indexed by the size-s subsets of {0, .., n-1} in
//! lexicographic order of the sorted index tuples; every consumer of wedge
//! coordinates in this crate goes through these functions so the ordering is
//! fixed in exactly one place.

/// Binomial coefficient as usize; saturates are not needed at the ranks this
/// crate handles, so overflow panics in debug and is avoided by callers.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All size-k subsets of {0, .., n-1}, each sorted ascending, in
/// lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Rightmost position that can still advance.
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Lexicographic rank of a sorted subset among the size-k subsets of
/// {0, .., n-1}; inverse of indexing into `k_subsets(n, k)`.
pub fn subset_rank(n: usize, subset: &[usize]) -> usize {
    let k = subset.len();
    let mut rank = 0;
    let mut prev = 0;
    for (i, &s) in subset.iter().enumerate() {
        for v in prev..s {
            rank += binomial(n - v - 1, k - i - 1);
        }
        prev = s + 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_of_4_choose_2_in_lex_order() {
        let subs = k_subsets(4, 2);
        assert_eq!(
            subs,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn rank_inverts_enumeration() {
        for n in 0..=7 {
            for k in 0..=n {
                let subs = k_subsets(n, k);
                assert_eq!(subs.len(), binomial(n, k));
                for (i, s) in subs.iter().enumerate() {
                    assert_eq!(subset_rank(n, s), i, "n={n} k={k} s={s:?}");
                }
            }
        }
    }

    #[test]
    fn degenerate_sizes() {
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(k_subsets(0, 0), vec![Vec::<usize>::new()]);
        assert_eq!(k_subsets(2, 3), Vec::<Vec<usize>>::new());
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(8, 4), 70);
    }
}
