//! Balanced gait assignment for training environments.
//!
//! Each draw picks uniformly among the gaits whose assignment count is within
//! `slack` of the current minimum. With `slack = 0` the counts never differ by
//! more than one.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::pattern::GaitType;

pub const DEFAULT_RESAMPLE_INTERVAL: usize = 150;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchedulerState {
    pub counts: [u64; 5],
    pub steps_since_resample: usize,
    pub resample_interval: usize,
    pub slack: u64,
    pub current: Option<GaitType>,
}

impl Default for SchedulerState {
    fn default() -> Self {
        Self {
            counts: [0; 5],
            steps_since_resample: 0,
            resample_interval: DEFAULT_RESAMPLE_INTERVAL,
            slack: 0,
            current: None,
        }
    }
}

impl SchedulerState {
    pub fn count(&self, gait: GaitType) -> u64 {
        self.counts[gait.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Draws a gait and records the assignment.
    pub fn next_gait<R: Rng + ?Sized>(&mut self, rng: &mut R) -> GaitType {
        let min = *self.counts.iter().min().expect("five gaits");
        let eligible: Vec<GaitType> = GaitType::ALL
            .into_iter()
            .filter(|g| self.counts[g.index()] <= min + self.slack)
            .collect();
        let gait = eligible[rng.random_range(0..eligible.len())];
        self.counts[gait.index()] += 1;
        self.current = Some(gait);
        self.steps_since_resample = 0;
        gait
    }

    /// Starts an episode with a fresh gait.
    pub fn reset<R: Rng + ?Sized>(&mut self, rng: &mut R) -> GaitType {
        self.next_gait(rng)
    }

    /// Advances one control step and resamples once the interval elapses.
    /// Returns the newly drawn gait, if any.
    pub fn tick<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<GaitType> {
        if self.current.is_none() {
            return Some(self.next_gait(rng));
        }
        self.steps_since_resample += 1;
        (self.steps_since_resample >= self.resample_interval).then(|| self.next_gait(rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn first_draw_sets_one_count() {
        let mut st = SchedulerState::default();
        let g = st.next_gait(&mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(st.count(g), 1);
        assert_eq!(st.total(), 1);
    }

    #[test]
    fn five_draws_cover_every_gait() {
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut st = SchedulerState::default();
            for _ in 0..5 {
                st.next_gait(&mut rng);
            }
            assert_eq!(st.counts, [1; 5]);
        }
    }

    #[test]
    fn counts_stay_within_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut st = SchedulerState::default();
        for n in 1..=5000u64 {
            st.next_gait(&mut rng);
            let (lo, hi) = (n / 5, n.div_ceil(5));
            assert!(
                st.counts.iter().all(|&c| c == lo || c == hi),
                "{n}: {:?}",
                st.counts
            );
        }
        assert_eq!(st.counts, [1000; 5]);
    }

    #[test]
    fn resamples_every_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut st = SchedulerState::default();
        assert!(st.tick(&mut rng).is_some());
        let draws = (0..600).filter(|_| st.tick(&mut rng).is_some()).count();
        assert_eq!(draws, 4);
    }

    #[test]
    fn slack_allows_larger_gaps() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut st = SchedulerState {
            slack: 2,
            ..Default::default()
        };
        for _ in 0..1000 {
            st.next_gait(&mut rng);
            let (lo, hi) = (
                st.counts.iter().min().unwrap(),
                st.counts.iter().max().unwrap(),
            );
            assert!(hi - lo <= 3);
        }
    }
}
