//! Merel's matrices of determinant `n` for the Hecke action on Manin symbols.

/// `{[[a, b], [c, d]] : ad − bc = n, a > b ≥ 0, d > c ≥ 0}`.
pub fn merel_matrices(n: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    // a + d − 1 ≤ ad − bc = n bounds both diagonal entries by n
    for a in 1..=n {
        for d in 1..=n {
            for b in 0..a {
                for c in 0..d {
                    if a * d - b * c == n {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merel_set_sizes() {
        // brute-force oracle: scan a much larger box than the bound needs
        for n in [2i64, 3, 5, 7] {
            let mut count = 0;
            for a in 1..=3 * n {
                for d in 1..=3 * n {
                    for b in 0..a {
                        for c in 0..d {
                            if a * d - b * c == n {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(merel_matrices(n).len(), count);
        }
        assert_eq!(merel_matrices(2).len(), 4);
    }
}
