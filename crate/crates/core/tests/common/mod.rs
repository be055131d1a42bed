#![allow(dead_code)]

use blowup_lab::features::FEATURE_COUNT;
use blowup_lab::FeatureVector;
use rand::Rng;

/// Monomials in `nvars` variables of total degree `<= max_deg`.
pub fn all_monomials(nvars: usize, max_deg: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; nvars];
    fn rec(i: usize, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_deg, &mut cur, &mut out);
    out
}

/// Brute-force staircase count: monomials of degree `<= deg` divisible by no generator.
pub fn brute_force_standard(gens: &[Vec<u64>], nvars: usize, deg: u64) -> u64 {
    all_monomials(nvars, deg)
        .iter()
        .filter(|m| !gens.iter().any(|g| g.iter().zip(m.iter()).all(|(a, b)| b >= a)))
        .count() as u64
}

/// Random feature vector with integer-like counts and a few fractional entries.
pub fn random_features<R: Rng>(rng: &mut R) -> FeatureVector {
    let mut a = [0.0; FEATURE_COUNT];
    for (i, v) in a.iter_mut().enumerate() {
        *v = match i {
            6 | 9 | 10 => f64::from(rng.random_range(0..2u8)),
            7 | 11 | 14 => rng.random_range(0.0..10.0),
            22 => {
                if rng.random_bool(0.3) {
                    1000.0
                } else {
                    f64::from(rng.random_range(0..40u32))
                }
            }
            _ => f64::from(rng.random_range(0..60u32)),
        };
    }
    if a[9] == 0.0 && a[0] == 0.0 {
        a[0] = 1.0;
    }
    FeatureVector(a)
}
