use num_bigint::BigInt;
use num_traits::One;

/// A multi-index: exponents of barycentric coordinates, Cartesian derivative
/// orders, or normal derivative orders depending on context.
pub type MultiIndex = Vec<usize>;

/// `C(n, k)` for small arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of multi-indices of length `len` summing to `total`.
pub fn count_multi_indices(len: usize, total: usize) -> usize {
    if len == 0 {
        return usize::from(total == 0);
    }
    binomial(total + len - 1, len - 1)
}

/// `dim P_k(R^d) = C(k + d, d)`.
pub fn dim_pk(d: usize, k: usize) -> usize {
    binomial(k + d, d)
}

/// All multi-indices of length `len` with entries summing to `total`, in
/// ascending lexicographic order.
pub fn multi_indices(len: usize, total: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(count_multi_indices(len, total));
    let mut cur = vec![0; len];
    fill(&mut cur, 0, total, &mut out);
    out
}

fn fill(cur: &mut MultiIndex, pos: usize, rem: usize, out: &mut Vec<MultiIndex>) {
    let len = cur.len();
    if len == 0 {
        if rem == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == len - 1 {
        cur[pos] = rem;
        out.push(cur.clone());
        return;
    }
    for v in 0..=rem {
        cur[pos] = v;
        fill(cur, pos + 1, rem - v, out);
    }
    cur[pos] = 0;
}

/// Position of `alpha` in [`multi_indices`]`(alpha.len(), |alpha|)`.
pub fn index_of(alpha: &[usize]) -> usize {
    let mut rem: usize = alpha.iter().sum();
    let len = alpha.len();
    let mut idx = 0;
    for (i, &a) in alpha.iter().enumerate().take(len.saturating_sub(1)) {
        for v in 0..a {
            idx += count_multi_indices(len - i - 1, rem - v);
        }
        rem -= a;
    }
    idx
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Unit multi-index `e_i` of length `len`.
pub fn unit_index(len: usize, i: usize) -> MultiIndex {
    let mut e = vec![0; len];
    e[i] = 1;
    e
}
