//! Rule-based gait recognition over whole templates.

use super::{ones, GaitType, Leg, PatternTemplate};

/// Default phase tolerance, in steps.
pub const DEFAULT_TOLERANCE: usize = 1;

const TROT_DUTY: (f64, f64) = (0.5, 0.7);

/// Returns the unique gait whose structural predicate holds, or `None` when
/// no predicate or more than one predicate matches.
///
/// * STAND_STILL: every entry is one.
/// * STAND_3LEGS: exactly one all-zero row, the others all ones.
/// * TROT: FL≡RR, FR≡RL, FR is a cyclic shift of FL with an alternating
///   phase offset (see [`alternating_offset`]), and each row's duty lies in
///   `[0.5 - tol/T, 0.7 + tol/T]`.
/// * PACE: FL≡RL, FR≡RR, FR a cyclic shift of FL with an alternating offset.
/// * BOUND: FL≡FR, RL≡RR, RL is FL delayed by a positive offset `< T/2 + tol`.
pub fn classify_gait(p: &PatternTemplate, tol: usize) -> Option<GaitType> {
    let matches: Vec<GaitType> = GaitType::ALL
        .into_iter()
        .filter(|&g| matches_gait(p, g, tol))
        .collect();
    match matches.as_slice() {
        [g] => Some(*g),
        _ => None,
    }
}

/// Classifies columns `start..end` of `p` as a standalone template.
pub fn classify_range(
    p: &PatternTemplate,
    start: usize,
    end: usize,
    tol: usize,
) -> Option<GaitType> {
    p.slice(start, end).and_then(|s| classify_gait(&s, tol))
}

fn matches_gait(p: &PatternTemplate, gait: GaitType, tol: usize) -> bool {
    let [fl, fr, rl, rr] = p.rows().each_ref().map(Vec::as_slice);
    let period = p.cycle_len();
    match gait {
        GaitType::StandStill => p.rows().iter().all(|r| all_ones(r)),
        GaitType::Stand3Legs => {
            let zero_rows = p.rows().iter().filter(|r| all_zeros(r)).count();
            let one_rows = p.rows().iter().filter(|r| all_ones(r)).count();
            zero_rows == 1 && one_rows == 3
        }
        GaitType::Trot => {
            let lo = TROT_DUTY.0 - tol as f64 / period as f64;
            let hi = TROT_DUTY.1 + tol as f64 / period as f64;
            let duty_ok = [fl, fr].iter().all(|r| {
                let d = ones(r) as f64 / period as f64;
                d >= lo && d <= hi
            });
            fl == rr && fr == rl && duty_ok && paired_alternation(fl, fr, tol)
        }
        GaitType::Pace => fl == rl && fr == rr && paired_alternation(fl, fr, tol),
        GaitType::Bound => {
            fl == fr
                && rl == rr
                && !is_constant(fl)
                && cyclic_shifts(fl, rl)
                    .into_iter()
                    .any(|s| s >= 1 && (s as f64) < period as f64 / 2.0 + tol as f64)
        }
    }
}

/// Diagonal pairs in phase with each other and alternating, regardless of duty.
///
/// A trot that includes airborne columns still satisfies this.
pub fn is_trot_structured(p: &PatternTemplate) -> bool {
    let (fl, fr) = (p.row(Leg::FL), p.row(Leg::FR));
    fl == p.row(Leg::RR)
        && fr == p.row(Leg::RL)
        && !is_constant(fl)
        && cyclic_shifts(fl, fr).into_iter().any(|s| s != 0)
}

fn paired_alternation(a: &[u8], b: &[u8], tol: usize) -> bool {
    if is_constant(a) || is_constant(b) {
        return false;
    }
    let stance = ones(a);
    cyclic_shifts(a, b)
        .into_iter()
        .any(|s| alternating_offset(s, a.len(), stance, tol))
}

/// Whether a cyclic offset `shift` between two rows of period `period` with
/// `stance` ones each counts as the two pairs alternating.
///
/// Accepted offsets, in either direction and within `tol`, are the
/// half-cycle `round(T/2)` and the stance length (one pair touches down
/// exactly as the other lifts off). Both coincide at 50% duty.
fn alternating_offset(shift: usize, period: usize, stance: usize, tol: usize) -> bool {
    if shift == 0 {
        return false;
    }
    let half = period.div_ceil(2);
    [shift, period - shift]
        .into_iter()
        .any(|d| d.abs_diff(half) <= tol || d.abs_diff(stance) <= tol)
}

/// All `s ∈ [0, T)` with `b[i] == a[(i - s) mod T]`, i.e. `b` is `a` delayed by `s`.
pub(crate) fn cyclic_shifts(a: &[u8], b: &[u8]) -> Vec<usize> {
    let n = a.len();
    if n == 0 || b.len() != n {
        return Vec::new();
    }
    (0..n)
        .filter(|&s| (0..n).all(|i| b[i] == a[(i + n - s) % n]))
        .collect()
}

fn all_ones(r: &[u8]) -> bool {
    r.iter().all(|&b| b == 1)
}

fn all_zeros(r: &[u8]) -> bool {
    r.iter().all(|&b| b == 0)
}

fn is_constant(r: &[u8]) -> bool {
    all_ones(r) || all_zeros(r)
}
