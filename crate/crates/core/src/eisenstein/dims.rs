//! Dimension formulas for modular forms on Γ_1(N), N ≥ 5.

pub use crate::util::{gamma1_cusp_count, gamma1_genus, gamma1_index};

/// `dim E_k(Γ_1(N))` for N ≥ 5.
pub fn dim_eisenstein(k: u32, n: u64) -> u64 {
    let eps = gamma1_cusp_count(n);
    match k {
        0 => 1,
        1 => eps / 2,
        2 => eps - 1,
        _ => eps,
    }
}

/// `dim S_k(Γ_1(N))` for N ≥ 5 and k ≥ 2.
pub fn dim_cusp(k: u32, n: u64) -> u64 {
    assert!(k >= 2, "weight-one cusp dimensions are not given by a formula");
    let g = gamma1_genus(n) as i64;
    let eps = gamma1_cusp_count(n) as i64;
    if k == 2 {
        return g as u64;
    }
    let k = k as i64;
    // (k−1)(g−1) + (k/2 − 1)ε, written over 2 to stay integral for odd k
    let twice = 2 * (k - 1) * (g - 1) + (k - 2) * eps;
    debug_assert!(twice % 2 == 0);
    (twice / 2) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels() {
        assert_eq!(dim_cusp(3, 5), 0);
        assert_eq!(dim_cusp(3, 7), 1);
        assert_eq!(dim_eisenstein(2, 11), 9);
        assert_eq!(dim_eisenstein(2, 25), 27);
        assert_eq!(dim_eisenstein(1, 7), 3);
        assert_eq!(dim_cusp(2, 37), 40);
    }
}
