//! Seeded Monte-Carlo sampling of protocol rounds.
//!
//! Draws are u64 words from a ChaCha8 stream; a draw selects the scenario
//! whose cumulative probability interval contains draw / 2^64, with interval
//! boundaries precomputed exactly (ceil(numer * 2^64 / denom), which fits in
//! a u128). Same seed, same trials, always.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use std::sync::OnceLock;

use crate::scenario::{outcome_distribution, rational_probabilities, Scenario};
use crate::Error;

/// One sampled round.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TrialRecord {
    /// 1-based position of the round within its run.
    pub trial_index: u64,
    pub scenario: Scenario,
    pub halted: bool,
}

/// The outcome table with exact cumulative draw boundaries: a draw u picks
/// the first row with u < bound, i.e. u/2^64 < cumulative probability.
struct Thresholds {
    rows: Vec<Scenario>,
    bounds: Vec<u128>,
}

impl Thresholds {
    fn build() -> Result<Self, Error> {
        let rows = outcome_distribution()?;
        let probs = rational_probabilities(&rows)?;
        let mut acc = BigRational::from_integer(BigInt::from(0));
        let mut bounds = Vec::with_capacity(probs.len());
        for p in probs {
            acc += p;
            // ceil(numer * 2^64 / denom): draw * denom < numer * 2^64 is
            // equivalent to draw < that ceiling, and the value fits in u128
            // because the cumulative probability is at most one.
            let scaled: BigInt = acc.numer() << 64;
            let bound: BigInt = (&scaled + acc.denom() - 1) / acc.denom();
            bounds.push(bound.to_u128().expect("cumulative bound fits in u128"));
        }
        Ok(Thresholds { rows, bounds })
    }

    fn cached() -> Result<&'static Thresholds, Error> {
        static CACHE: OnceLock<Result<Thresholds, Error>> = OnceLock::new();
        match CACHE.get_or_init(Thresholds::build) {
            Ok(t) => Ok(t),
            Err(e) => Err(e.clone()),
        }
    }

    fn pick(&self, draw: u64) -> &Scenario {
        let draw = draw as u128;
        for (row, &bound) in self.rows.iter().zip(&self.bounds) {
            if draw < bound {
                return row;
            }
        }
        // The table sums to one, so the last interval always catches.
        self.rows.last().expect("table is nonempty")
    }
}

/// Runs rounds until one halts (both announcements nonnull) or `max_trials`
/// have been drawn, returning every round in order. The last record has
/// `halted == true` exactly when the run stopped by halting.
pub fn sample_until_halt(seed: u64, max_trials: u64) -> Result<Vec<TrialRecord>, Error> {
    let thresholds = Thresholds::cached()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for trial_index in 1..=max_trials {
        let scenario = thresholds.pick(rng.next_u64()).clone();
        let halted = scenario.halted();
        records.push(TrialRecord {
            trial_index,
            scenario,
            halted,
        });
        if halted {
            break;
        }
    }
    Ok(records)
}
