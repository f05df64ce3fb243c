//! Rank-sum comparison for per-generation metric series.
//!
//! Two-sided Mann-Whitney with the normal approximation: midranks for
//! ties, no continuity or tie-variance correction. Fine for the 5-30
//! samples per group these experiments produce.

/// Arithmetic mean. Panics on an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    values.iter().sum::<f64>() / values.len() as f64
}

/// Complementary error function via the Abramowitz-Stegun rational fit,
/// absolute error below 1.5e-7. Good to several digits of p-value, which
/// is all a 5-seed comparison can support.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    let t = 1.0 / (1.0 + 0.3275911 * x);
    let poly = t
        * (0.254829592
            + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    poly * (-x * x).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankSum {
    /// Mann-Whitney U for the first group.
    pub u: f64,
    pub z: f64,
    /// Two-sided normal-approximation p-value.
    pub p: f64,
}

/// Compares two samples. Positive z means the first group ranks higher.
pub fn rank_sum(a: &[f64], b: &[f64]) -> RankSum {
    assert!(
        !a.is_empty() && !b.is_empty(),
        "rank_sum needs two non-empty groups"
    );
    let n1 = a.len() as f64;
    let n2 = b.len() as f64;

    // (value, belongs-to-a) sorted; ties get the average of their ranks.
    let mut all: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    all.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("non-finite metric"));

    let mut rank_sum_a = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        // Ranks are 1-based; the tied block i..=j shares the midrank.
        let midrank = (i + 1 + j + 1) as f64 / 2.0;
        for item in &all[i..=j] {
            if item.1 {
                rank_sum_a += midrank;
            }
        }
        i = j + 1;
    }

    let u = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
    let mean_u = n1 * n2 / 2.0;
    let var_u = n1 * n2 * (n1 + n2 + 1.0) / 12.0;
    let z = (u - mean_u) / var_u.sqrt();
    let p = erfc(z.abs() / std::f64::consts::SQRT_2);
    RankSum { u, z, p }
}
