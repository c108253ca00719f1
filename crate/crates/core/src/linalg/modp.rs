//! Rank modulo a prime, for large integer matrices whose rational rank is
//! pinned from above by structure.

/// 2^61 - 1.
pub const PRIME: u64 = 0x1fff_ffff_ffff_ffff;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

pub fn reduce(x: i128) -> u64 {
    x.rem_euclid(PRIME as i128) as u64
}

/// Rank over GF(p) of a row-major matrix. A lower bound on the rank over Q.
pub fn rank_mod_p(rows: usize, cols: usize, entries: &[u64]) -> usize {
    let mut a = entries.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = powmod(a[r * cols + c], PRIME - 2);
        for j in c..cols {
            a[r * cols + j] = mulmod(a[r * cols + j], inv);
        }
        for i in r + 1..rows {
            let f = a[i * cols + c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let t = mulmod(f, a[r * cols + j]);
                a[i * cols + j] = (a[i * cols + j] + PRIME - t) % PRIME;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranks() {
        let m: Vec<u64> = [1i128, 2, 3, 2, 4, 6, 0, 1, 1].iter().map(|&x| reduce(x)).collect();
        assert_eq!(rank_mod_p(3, 3, &m), 2);
        let id: Vec<u64> = (0..16).map(|i| u64::from(i % 5 == 0)).collect();
        assert_eq!(rank_mod_p(4, 4, &id), 4);
        let neg: Vec<u64> = [1i128, -1, -1, 1].iter().map(|&x| reduce(x)).collect();
        assert_eq!(rank_mod_p(2, 2, &neg), 1);
    }
}
