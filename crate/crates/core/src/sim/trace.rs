//! Synthetic realized-contact traces.
//!
//! Stands in for a physics rollout: the desired contacts follow the template,
//! the realized contacts lag them by a per-foot delay and are corrupted by
//! independent bit flips, and the kinematics track the command up to small
//! seeded noise.
//!
//! JSONL layout: one [`StepRecord`] object per line with fields `step`,
//! `v_x`, `v_y`, `v_z`, `v_x_cmd`, `omega_x`, `omega_y`, `omega_z`,
//! `contacts` (4 ints), `desired_contacts` (4 ints), `action` (12),
//! `prev_action` (12), `body_forces` (8) and `gait` (name or null). Floats
//! carry at most 9 significant digits.

use std::io::{self, BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mdp::ACT_DIM;
use crate::pattern::{classify_gait, PatternTemplate, DEFAULT_TOLERANCE};
use crate::reward::{StepRecord, NUM_COLLISION_BODIES};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Steps by which each foot's realized contact lags the desired one.
    pub delay: [usize; 4],
    pub flip_prob: f64,
    pub steps: usize,
    pub seed: u64,
    /// Half-width of the uniform noise on kinematics and actions.
    pub noise: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            delay: [0; 4],
            flip_prob: 0.0,
            steps: 150,
            seed: 0,
            noise: 0.01,
        }
    }
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("flip probability {0} outside [0, 1]")]
    FlipProb(f64),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn noise<R: Rng + ?Sized>(rng: &mut R, half_width: f64) -> f64 {
    if half_width == 0.0 {
        0.0
    } else {
        rng.random_range(-half_width..=half_width)
    }
}

pub fn simulate_trace(
    template: &PatternTemplate,
    cfg: &TraceConfig,
    v_x_cmd: f64,
) -> Result<Vec<StepRecord>, TraceError> {
    if !(0.0..=1.0).contains(&cfg.flip_prob) {
        return Err(TraceError::FlipProb(cfg.flip_prob));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let period = template.cycle_len();
    let gait = classify_gait(template, DEFAULT_TOLERANCE);
    let mut prev_action = [0.0; ACT_DIM];
    let mut out = Vec::with_capacity(cfg.steps);

    for t in 0..cfg.steps {
        let desired = template.window_at(t, 1).first_column();
        let contacts: [u8; 4] = std::array::from_fn(|foot| {
            let lagged = (t + period * (cfg.delay[foot] / period + 1) - cfg.delay[foot]) % period;
            let bit = template.rows()[foot][lagged];
            let flip = rng.random::<f64>() < cfg.flip_prob;
            if flip {
                1 - bit
            } else {
                bit
            }
        });
        let h = cfg.noise;
        let v_x = v_x_cmd + noise(&mut rng, h);
        let v_y = noise(&mut rng, h);
        let v_z = noise(&mut rng, h);
        let omega_x = noise(&mut rng, h);
        let omega_y = noise(&mut rng, h);
        let omega_z = noise(&mut rng, h);
        let action: [f64; ACT_DIM] = std::array::from_fn(|_| noise(&mut rng, h));
        out.push(StepRecord {
            step: t,
            v_x,
            v_y,
            v_z,
            v_x_cmd,
            omega_x,
            omega_y,
            omega_z,
            contacts,
            desired_contacts: desired,
            action,
            prev_action,
            body_forces: [0.0; NUM_COLLISION_BODIES],
            gait,
        });
        prev_action = action;
    }
    Ok(out)
}

pub fn write_jsonl<W: Write>(records: &[StepRecord], mut w: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<StepRecord>, TraceError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line).map_err(|source| TraceError::Json {
                line: i + 1,
                source,
            })?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reward::{contact_violation, evaluate_step, RewardWeights};

    fn fl_alternating() -> PatternTemplate {
        PatternTemplate::from_strs(["10", "11", "11", "11"]).unwrap()
    }

    #[test]
    fn no_delay_no_flips_matches_desired() {
        let p = crate::generator::generate_seeded(crate::GaitType::Trot, &Default::default());
        let cfg = TraceConfig {
            steps: 200,
            ..Default::default()
        };
        for rec in simulate_trace(&p, &cfg, 0.5).unwrap() {
            assert_eq!(rec.contacts, rec.desired_contacts);
            assert_eq!(
                evaluate_step(&rec, &RewardWeights::default())
                    .unwrap()
                    .terms[2],
                0.0
            );
        }
    }

    #[test]
    fn one_step_delay_counts_transitions() {
        let p = fl_alternating();
        let cfg = TraceConfig {
            delay: [1; 4],
            steps: 50,
            ..Default::default()
        };
        let trace = simulate_trace(&p, &cfg, 0.0).unwrap();

        // brute force: c_t = ĉ_{t-1} on the cyclic sequence
        let seq: Vec<[u8; 4]> = (0..50).map(|t| p.column(t)).collect();
        let expected: f64 = (0..50)
            .map(|t| contact_violation(&seq[(t + 49) % 50], &seq[t]))
            .sum::<f64>()
            / 50.0;
        let got: f64 = trace
            .iter()
            .map(|r| contact_violation(&r.contacts, &r.desired_contacts))
            .sum::<f64>()
            / 50.0;
        assert_eq!(got, expected);
        // FL toggles every step, so every step has one mismatched foot
        assert_eq!(got, 0.25);
    }

    #[test]
    fn certain_flips_complement_all_ones() {
        let p = PatternTemplate::filled(10, true);
        let cfg = TraceConfig {
            flip_prob: 1.0,
            steps: 30,
            ..Default::default()
        };
        for rec in simulate_trace(&p, &cfg, 0.0).unwrap() {
            assert_eq!(rec.contacts, [0; 4]);
            assert_eq!(contact_violation(&rec.contacts, &rec.desired_contacts), 1.0);
        }
    }

    #[test]
    fn delay_longer_than_cycle_wraps() {
        let p = PatternTemplate::from_strs(["100", "010", "001", "111"]).unwrap();
        let cfg = TraceConfig {
            delay: [4, 0, 0, 0],
            steps: 6,
            noise: 0.0,
            ..Default::default()
        };
        let trace = simulate_trace(&p, &cfg, 0.0).unwrap();
        let fl: Vec<u8> = trace.iter().map(|r| r.contacts[0]).collect();
        // delay 4 ≡ delay 1 on a 3-cycle
        assert_eq!(fl, vec![0, 1, 0, 0, 1, 0]);
    }

    #[test]
    fn prev_action_chains() {
        let trace = simulate_trace(
            &fl_alternating(),
            &TraceConfig {
                steps: 5,
                ..Default::default()
            },
            0.5,
        )
        .unwrap();
        assert_eq!(trace[0].prev_action, [0.0; ACT_DIM]);
        for w in trace.windows(2) {
            assert_eq!(w[1].prev_action, w[0].action);
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let p = fl_alternating();
        let cfg = TraceConfig {
            flip_prob: 0.2,
            seed: 77,
            steps: 40,
            ..Default::default()
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_jsonl(&simulate_trace(&p, &cfg, 1.0).unwrap(), &mut a).unwrap();
        write_jsonl(&simulate_trace(&p, &cfg, 1.0).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let back = read_jsonl(a.as_slice()).unwrap();
        assert_eq!(back.len(), 40);
        assert_eq!(
            back[3].contacts,
            simulate_trace(&p, &cfg, 1.0).unwrap()[3].contacts
        );
    }

    #[test]
    fn bad_flip_probability() {
        let cfg = TraceConfig {
            flip_prob: 1.5,
            ..Default::default()
        };
        assert!(matches!(
            simulate_trace(&fl_alternating(), &cfg, 0.0),
            Err(TraceError::FlipProb(_))
        ));
    }
}
