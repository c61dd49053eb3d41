//! Mixed-radix multi-index helpers shared by tensors and cochains.

/// Flat index of `idx` in base `d`, most significant digit first.
pub(crate) fn flat(idx: &[usize], d: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * d + i)
}

/// Inverse of [`flat`] for a tuple of length `len`.
pub(crate) fn unflat(mut k: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = k % d;
        k /= d;
    }
    out
}

pub(crate) fn pow(d: usize, k: usize) -> usize {
    d.pow(k as u32)
}

/// Sign of the permutation sorting `idx`, or 0 if an index repeats.
pub(crate) fn perm_sign(idx: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] == idx[j] {
                return 0;
            }
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Strictly increasing `k`-subsets of `0..d` in lexicographic order.
pub(crate) fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            if d - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    rec(0, d, k, &mut cur, &mut out);
    out
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The indices of `0..d` not in `idx`, ascending.
pub(crate) fn complement(idx: &[usize], d: usize) -> Vec<usize> {
    (0..d).filter(|i| !idx.contains(i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_round_trip() {
        for k in 0..125 {
            assert_eq!(flat(&unflat(k, 5, 3), 5), k);
        }
        assert_eq!(unflat(7, 2, 4), vec![0, 1, 1, 1]);
    }

    #[test]
    fn signs() {
        assert_eq!(perm_sign(&[0, 1, 2, 3]), 1);
        assert_eq!(perm_sign(&[1, 0, 2, 3]), -1);
        assert_eq!(perm_sign(&[0, 0, 2, 3]), 0);
        assert_eq!(perm_sign(&[2, 0, 1]), 1);
    }

    #[test]
    fn combination_counts() {
        for d in 0..7 {
            for k in 0..=d {
                let c = combinations(d, k);
                assert_eq!(c.len(), binomial(d, k));
                assert!(c.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
