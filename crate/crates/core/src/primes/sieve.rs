//! Segmented sieve of Eratosthenes over `u32` values.

const SEGMENT: usize = 1 << 18;

/// All primes `<= limit` by a plain (unsegmented) sieve. Only used for
/// base primes up to `sqrt(limit)`, so `limit` stays small.
pub(crate) fn simple_sieve(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u32);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Integer square root, rounded down.
/// Appends every prime in `(lo, hi]` to `out`, in ascending order.
pub(crate) fn sieve_range(lo: u64, hi: u64, out: &mut Vec<u32>) {
    if hi <= lo || hi < 2 {
        return;
    }
    let base = simple_sieve(hi.isqrt());
    let mut seg = vec![false; SEGMENT];
    let mut start = lo.max(1) + 1;
    while start <= hi {
        let end = (start + SEGMENT as u64 - 1).min(hi);
        let len = (end - start + 1) as usize;
        seg[..len].iter_mut().for_each(|c| *c = false);
        for &p in &base {
            let p = p as u64;
            if p * p > end {
                break;
            }
            let mut m = (start.div_ceil(p) * p).max(p * p);
            while m <= end {
                seg[(m - start) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in seg[..len].iter().enumerate() {
            let v = start + i as u64;
            if !c && v >= 2 {
                out.push(v as u32);
            }
        }
        start = end + 1;
    }
}
