//! Brute-force classification of the pairings `⟨Δ_ab, Δ_cd⟩` over ordered
//! pairs of places.

use super::PhiError;

/// `(four distinct places, three, two)` counts over ordered `a != b`,
/// `c != d` in `1..=n`.
pub fn audit_harmonicity_counts(n: usize) -> Result<(u64, u64, u64), PhiError> {
    if n < 4 {
        return Err(PhiError::TooFewPlaces { needed: 4, found: n });
    }
    let (mut c4, mut c3, mut c2) = (0u64, 0u64, 0u64);
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for c in 0..n {
                for d in (0..n).filter(|&d| d != c) {
                    let mut p = [a, b, c, d];
                    p.sort_unstable();
                    let distinct = 1 + p.windows(2).filter(|w| w[0] != w[1]).count();
                    match distinct {
                        4 => c4 += 1,
                        3 => c3 += 1,
                        _ => c2 += 1,
                    }
                }
            }
        }
    }
    Ok((c4, c3, c2))
}

/// `(n(n-1)(n-2)(n-3), 4n(n-1)(n-2), 2n(n-1))`.
pub fn harmonicity_closed_form(n: usize) -> (u64, u64, u64) {
    let n = n as u64;
    (n * (n - 1) * (n - 2) * (n - 3), 4 * n * (n - 1) * (n - 2), 2 * n * (n - 1))
}
