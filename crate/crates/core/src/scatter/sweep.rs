//! Seeded sampling of characters for the cocycle, support and block checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::chi::ChiPoint;
use super::matrix::ScatterContext;
use super::scalar::Scalar;

/// Order of the roots of unity used for exact samples.
pub const EXACT_CHI_ORDER: u64 = 7;

/// Float comparisons are relative to the larger entry, floored at 1.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SweepReport {
    pub float_samples: usize,
    pub exact_samples: usize,
    /// Exact samples rejected because some `chi_alpha` was 1.
    pub poles_skipped: usize,
    pub orbit_sizes: Vec<usize>,
    pub cocycle_failures: Vec<String>,
    pub support_failures: Vec<String>,
    pub block_failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.cocycle_failures.is_empty()
            && self.support_failures.is_empty()
            && self.block_failures.is_empty()
    }
}

impl ScatterContext {
    fn record<S: Scalar>(
        &self,
        chi: &ChiPoint<S>,
        tol: f64,
        report: &mut SweepReport,
    ) -> Result<()> {
        let label = || format!("{:?}", chi.values);
        if !self.cocycle_check(chi, tol)?.agree {
            report.cocycle_failures.push(label());
        }
        if !self.support_check(chi)?.passed() {
            report.support_failures.push(label());
        }
        let blocks = self.block_check(chi)?;
        if !blocks.passed() {
            report.block_failures.push(label());
        }
        report.orbit_sizes = blocks.orbit_sizes;
        Ok(())
    }

    /// Runs every check on `float_samples` random unitary characters and on
    /// `exact_samples` characters with values in the 7th roots of unity, skipping poles.
    pub fn sweep(
        &self,
        float_samples: usize,
        exact_samples: usize,
        seed: u64,
    ) -> Result<SweepReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = self.center_basis().len();
        let mut report = SweepReport::default();
        for _ in 0..float_samples {
            let chi = ChiPoint::<Complex64>::random_unitary(rank, &mut rng);
            self.record(&chi, FLOAT_TOLERANCE, &mut report)?;
            report.float_samples += 1;
        }
        // Each draw is a pole with probability well under 1, so the cap is never reached
        // unless every character is a pole, as for a trivial center.
        let max_draws = 50 * exact_samples.max(1);
        for _ in 0..max_draws {
            if report.exact_samples == exact_samples {
                break;
            }
            let exps: Vec<i64> = (0..rank)
                .map(|_| rng.gen_range(0..EXACT_CHI_ORDER as i64))
                .collect();
            let chi = ChiPoint::roots_of_unity(EXACT_CHI_ORDER, &exps);
            match self.record(&chi, 0.0, &mut report) {
                Err(Error::Pole(_)) => report.poles_skipped += 1,
                Err(err) => return Err(err),
                Ok(()) => report.exact_samples += 1,
            }
        }
        Ok(report)
    }
}
