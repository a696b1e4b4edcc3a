//! Soft-aided decoding of a single component word.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Variant;
use crate::bch::{BchCode, Syndrome};
use crate::marking::MarkClass;

/// What the decoder may read about a component word and its surroundings.
pub trait WordContext {
    /// Current syndrome of the word.
    fn syndrome(&self) -> Syndrome;
    /// Mark of position `pos`, `None` outside the marked region.
    fn mark(&self, pos: usize) -> Option<MarkClass>;
    /// Whether the other word protecting `pos` is in the window and currently
    /// has a zero syndrome.
    fn crossing_zero(&self, pos: usize) -> bool;
    /// Bit-flip candidates, in the order SABM would take them.
    fn hub_candidates(&self) -> Vec<usize>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Clean,
    Rejected,
}

/// Rejects a proposed change that flips an HRB or touches a bit whose
/// crossing word already has a zero syndrome.
pub fn miscorrection_check<C: WordContext + ?Sized>(flips: &[usize], ctx: &C) -> CheckResult {
    let bad = flips.iter().any(|&p| ctx.mark(p) == Some(MarkClass::Hrb) || ctx.crossing_zero(p));
    if bad {
        CheckResult::Rejected
    } else {
        CheckResult::Clean
    }
}

/// Result of the first BDD attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FirstAttempt {
    Accepted,
    /// BDD succeeded with this many corrections but the result was rejected.
    Rejected {
        error_weight: usize,
    },
    Failure,
}

/// Seeded generator created on first use.
#[derive(Debug)]
pub struct LazyRng {
    seed: u64,
    rng: Option<ChaCha8Rng>,
}

impl LazyRng {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: None }
    }

    pub fn get(&mut self) -> &mut ChaCha8Rng {
        let seed = self.seed;
        self.rng.get_or_insert_with(|| ChaCha8Rng::seed_from_u64(seed))
    }
}

/// Chooses the bits to flip before the second BDD attempt, or `None` to give up.
///
/// One bit is flipped after a failure and `d0 - t - w_H(e)` after a rejected
/// miscorrection. SABM takes the leading candidates (least reliable first);
/// iSABM draws uniformly without replacement.
pub fn bit_flip_retry(
    code: &BchCode,
    variant: Variant,
    first: FirstAttempt,
    candidates: &[usize],
    rng: &mut LazyRng,
) -> Option<Vec<usize>> {
    let count = match first {
        FirstAttempt::Accepted => return None,
        FirstAttempt::Failure => 1,
        FirstAttempt::Rejected { error_weight } => code.d0().checked_sub(code.t() + error_weight)?,
    };
    if count == 0 || candidates.len() < count {
        return None;
    }
    let mut flips: Vec<usize> = match variant {
        Variant::Isabm => sample(rng.get(), candidates.len(), count).into_iter().map(|i| candidates[i]).collect(),
        _ => candidates[..count].to_vec(),
    };
    flips.sort_unstable();
    Some(flips)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SoftClass {
    AcceptedFirstBdd,
    AcceptedAfterFlip,
    /// Left unchanged; the last BDD attempt succeeded but was rejected.
    RejectedMiscorrection,
    /// Left unchanged after a failure or a give-up.
    FailureUnchanged,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoftDecodeOutcome {
    pub classification: SoftClass,
    pub first_attempt: FirstAttempt,
    /// 1, or 2 when a bit-flip retry was attempted.
    pub bdd_calls: u8,
    /// BDD calls that needed error-pattern estimation (nonzero syndrome).
    pub pattern_estimations: u8,
    /// Bits flipped before the second attempt.
    pub retry_flips: Vec<usize>,
    /// Net change to apply to the word (empty when unchanged).
    pub flips: Vec<usize>,
}

/// Symmetric difference of two ascending position lists.
fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(_), Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// BDD with miscorrection detection and one bit-flip retry.
pub fn soft_decode_word<C: WordContext + ?Sized>(
    code: &BchCode,
    variant: Variant,
    ctx: &C,
    rng: &mut LazyRng,
) -> SoftDecodeOutcome {
    let syndrome = ctx.syndrome();
    let mut estimations = 0u8;
    let unchanged = |class, first, calls, est, retry: Vec<usize>| SoftDecodeOutcome {
        classification: class,
        first_attempt: first,
        bdd_calls: calls,
        pattern_estimations: est,
        retry_flips: retry,
        flips: Vec::new(),
    };

    if syndrome.is_zero() {
        return unchanged(SoftClass::AcceptedFirstBdd, FirstAttempt::Accepted, 1, 0, Vec::new());
    }
    estimations += 1;
    let first = match code.decode_syndrome(&syndrome) {
        Some(errors) => match miscorrection_check(&errors, ctx) {
            CheckResult::Clean => {
                return SoftDecodeOutcome {
                    classification: SoftClass::AcceptedFirstBdd,
                    first_attempt: FirstAttempt::Accepted,
                    bdd_calls: 1,
                    pattern_estimations: estimations,
                    retry_flips: Vec::new(),
                    flips: errors,
                };
            }
            CheckResult::Rejected => FirstAttempt::Rejected { error_weight: errors.len() },
        },
        None => FirstAttempt::Failure,
    };
    let first_class = match first {
        FirstAttempt::Rejected { .. } => SoftClass::RejectedMiscorrection,
        _ => SoftClass::FailureUnchanged,
    };

    let candidates = ctx.hub_candidates();
    let Some(retry) = bit_flip_retry(code, variant, first, &candidates, rng) else {
        return unchanged(first_class, first, 1, estimations, Vec::new());
    };

    let mut second = syndrome;
    for &p in &retry {
        second ^= code.position_syndrome(p);
    }
    if !second.is_zero() {
        estimations += 1;
    }
    match code.decode_syndrome(&second) {
        Some(errors) => {
            let net = symmetric_difference(&retry, &errors);
            match miscorrection_check(&net, ctx) {
                CheckResult::Clean => SoftDecodeOutcome {
                    classification: SoftClass::AcceptedAfterFlip,
                    first_attempt: first,
                    bdd_calls: 2,
                    pattern_estimations: estimations,
                    retry_flips: retry,
                    flips: net,
                },
                CheckResult::Rejected => unchanged(SoftClass::RejectedMiscorrection, first, 2, estimations, retry),
            }
        }
        None => unchanged(SoftClass::FailureUnchanged, first, 2, estimations, retry),
    }
}
