//! Domain types shared by every module: the 5-level response scale, category
//! probability vectors and per-stimulus response tallies.

use crate::error::{Error, Result};

/// The fixed 5-level Absolute Category Rating scale.
///
/// Categories are the consecutive integers 1 ("Bad") through 5 ("Excellent").
/// Everything in this crate is specialised to this scale.
pub struct ResponseScale;

impl ResponseScale {
    /// Number of response categories.
    pub const M: usize = 5;
    /// Lowest category.
    pub const MIN: u8 = 1;
    /// Highest category.
    pub const MAX: u8 = 5;
    /// The categories in order.
    pub const CATEGORIES: [u8; 5] = [1, 2, 3, 4, 5];
}

/// Probabilities below this are treated as zero when serializing. Likelihood
/// computations always use the raw values.
pub const SERIALIZATION_CLAMP: f64 = 1e-300;

/// Five category probabilities summing to one.
///
/// Entries may be exactly zero; consumers that need strictly positive
/// probabilities (likelihood ratios against observed counts) must use the
/// corrected estimators in [`crate::estimation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbVector([f64; 5]);

impl ProbVector {
    /// Tolerance on `sum == 1`.
    pub const SUM_TOL: f64 = 1e-12;

    pub fn new(p: [f64; 5]) -> Result<Self> {
        for (k, &x) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) || x.is_nan() {
                return Err(Error::domain(format!(
                    "probability for category {} is {x}, outside [0, 1]",
                    k + 1
                )));
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::domain(format!(
                "probabilities sum to {sum}, expected 1 within {}",
                Self::SUM_TOL
            )));
        }
        Ok(ProbVector(p))
    }

    /// Construct without validating. Callers must guarantee the invariants.
    pub(crate) fn new_unchecked(p: [f64; 5]) -> Self {
        debug_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9, "pmf sum off: {p:?}");
        ProbVector(p)
    }

    pub fn as_array(&self) -> &[f64; 5] {
        &self.0
    }

    /// Probability of response category `k` (1-based, `1..=5`).
    pub fn prob(&self, k: u8) -> f64 {
        self.0[(k - 1) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    /// Expected response.
    pub fn mean(&self) -> f64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, p)| (i as f64 + 1.0) * p)
            .sum()
    }

    /// Variance of the response.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.0
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d = i as f64 + 1.0 - m;
                d * d * p
            })
            .sum()
    }

    /// Copy with entries below [`SERIALIZATION_CLAMP`] flushed to zero, for
    /// output only.
    pub fn serializable(&self) -> [f64; 5] {
        let mut p = self.0;
        for x in &mut p {
            if *x < SERIALIZATION_CLAMP {
                *x = 0.0;
            }
        }
        p
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;

    /// Zero-based index: `pv[0]` is the probability of category 1.
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Per-stimulus tally of responses: `n[k]` responses in category `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResponseCounts([u64; 5]);

impl ResponseCounts {
    pub fn new(n: [u64; 5]) -> Result<Self> {
        if n.iter().sum::<u64>() == 0 {
            return Err(Error::domain("response counts are all zero"));
        }
        Ok(ResponseCounts(n))
    }

    pub(crate) fn new_unchecked(n: [u64; 5]) -> Self {
        debug_assert!(n.iter().sum::<u64>() > 0);
        ResponseCounts(n)
    }

    pub fn as_array(&self) -> &[u64; 5] {
        &self.0
    }

    /// Count for response category `k` (1-based).
    pub fn count(&self, k: u8) -> u64 {
        self.0[(k - 1) as usize]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Mean Opinion Score: the sample mean of the responses.
    pub fn mos(&self) -> f64 {
        let n = self.total() as f64;
        let s: f64 = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64 + 1.0) * c as f64)
            .sum();
        s / n
    }

    /// Unbiased sample variance (n − 1 denominator) of the response list.
    /// Zero when the sample holds a single response.
    pub fn sample_variance(&self) -> f64 {
        let n = self.total();
        if n < 2 {
            return 0.0;
        }
        let m = self.mos();
        let ss: f64 = self
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let d = i as f64 + 1.0 - m;
                d * d * c as f64
            })
            .sum();
        ss / (n as f64 - 1.0)
    }

    /// Raw empirical PMF `n_k / n`. Entries can be zero; see
    /// [`crate::estimation::corrected_empirical_pmf`] for the corrected form.
    pub fn empirical_pmf(&self) -> ProbVector {
        let n = self.total() as f64;
        let mut p = [0.0; 5];
        for (k, &c) in self.0.iter().enumerate() {
            p[k] = c as f64 / n;
        }
        ProbVector::new_unchecked(p)
    }

    /// Categories with at least one response, 1-based.
    pub fn observed_categories(&self) -> impl Iterator<Item = u8> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i as u8 + 1)
    }

    /// True when every response sits in a single category.
    pub fn is_single_category(&self) -> bool {
        self.0.iter().filter(|&&c| c > 0).count() == 1
    }

    /// True when responses occupy exactly two categories that are adjacent
    /// on the scale.
    pub fn is_two_neighbouring_categories(&self) -> bool {
        let occupied: Vec<usize> = (0..5).filter(|&k| self.0[k] > 0).collect();
        occupied.len() == 2 && occupied[1] - occupied[0] == 1
    }
}

impl std::ops::Index<usize> for ResponseCounts {
    type Output = u64;

    /// Zero-based index: `rc[0]` is the count of category 1.
    fn index(&self, i: usize) -> &u64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prob_vector_rejects_bad_sum() {
        assert!(ProbVector::new([0.3, 0.3, 0.3, 0.3, 0.3]).is_err());
        assert!(ProbVector::new([0.2; 5]).is_ok());
    }

    #[test]
    fn prob_vector_rejects_out_of_range() {
        assert!(ProbVector::new([1.2, -0.2, 0.0, 0.0, 0.0]).is_err());
        assert!(ProbVector::new([f64::NAN, 0.2, 0.2, 0.2, 0.2]).is_err());
    }

    #[test]
    fn moments_of_point_mass() {
        let p = ProbVector::new([0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.mean(), 3.0);
        assert_eq!(p.variance(), 0.0);
    }

    #[test]
    fn counts_reject_empty() {
        assert!(ResponseCounts::new([0; 5]).is_err());
    }

    #[test]
    fn mos_and_variance_two_point() {
        let c = ResponseCounts::new([1, 0, 0, 0, 1]).unwrap();
        assert_eq!(c.mos(), 3.0);
        // (1-3)^2 + (5-3)^2 = 8, n - 1 = 1
        assert_eq!(c.sample_variance(), 8.0);
    }

    #[test]
    fn neighbouring_category_detection() {
        let single = ResponseCounts::new([0, 0, 12, 0, 0]).unwrap();
        assert!(single.is_single_category());
        assert!(!single.is_two_neighbouring_categories());

        let adjacent = ResponseCounts::new([5, 7, 0, 0, 0]).unwrap();
        assert!(adjacent.is_two_neighbouring_categories());

        let gap = ResponseCounts::new([5, 0, 7, 0, 0]).unwrap();
        assert!(!gap.is_two_neighbouring_categories());
        assert!(!gap.is_single_category());
    }

    #[test]
    fn serializable_clamps_tiny_entries() {
        let p = ProbVector::new([1.0 - 1e-301, 1e-301, 0.0, 0.0, 0.0]).unwrap();
        let s = p.serializable();
        assert_eq!(s[1], 0.0);
        assert!(s[0] > 0.99);
    }
}
