//! Compensated accumulation for the multi-fold finite sums.

use alloc::vec::Vec;

/// Collects terms and sums them largest-magnitude first with Neumaier
/// compensation.
#[derive(Debug, Default)]
pub(crate) struct TermSum {
    terms: Vec<f64>,
}

impl TermSum {
    pub(crate) fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub(crate) fn push(&mut self, t: f64) {
        self.terms.push(t);
    }

    pub(crate) fn total(mut self) -> f64 {
        self.terms
            .sort_unstable_by(|a, b| libm::fabs(*b).total_cmp(&libm::fabs(*a)));
        neumaier(&self.terms)
    }
}

pub(crate) fn neumaier(xs: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        let t = sum + x;
        if libm::fabs(sum) >= libm::fabs(x) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_next_to_large_ones() {
        let mut s = TermSum::new();
        for t in [1.0, 1e100, 1.0, -1e100] {
            s.push(t);
        }
        assert_eq!(s.total(), 2.0);
    }
}
