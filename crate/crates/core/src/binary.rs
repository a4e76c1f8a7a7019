//! Exhaustive search over on/off element weights at a fixed frequency.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::channel_entries;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::model::DmaDesign;

/// Largest element count accepted by [`solve_p4`].
pub const MAX_BINARY_ELEMENTS: usize = 24;
/// Gains within this relative distance of the best count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinarySolution {
    pub mask: Vec<bool>,
    pub gain: f64,
}

/// Best `{0, 1}` weight vector for `(phi, f_c)`; ties (up to
/// [`TIE_TOLERANCE`]) go to the lexicographically smallest mask
/// (`false < true`, element 0 first).
pub fn solve_p4(design: &DmaDesign, phi: f64, f_c: f64) -> Result<BinarySolution> {
    solve_p4_with(design, phi, f_c, false, Exec::default())
}

pub fn solve_p4_with(
    design: &DmaDesign,
    phi: f64,
    f_c: f64,
    with_attenuation: bool,
    exec: Exec,
) -> Result<BinarySolution> {
    let n = design.n_elements();
    if n > MAX_BINARY_ELEMENTS {
        return Err(Error::EnumerationLimit {
            n,
            limit: MAX_BINARY_ELEMENTS,
        });
    }
    let h = channel_entries(design, phi, f_c, with_attenuation);
    // Element 0 is the most significant bit, so integer order is
    // lexicographic mask order.
    let gain_of = |code: usize| -> f64 {
        h.iter()
            .enumerate()
            .filter(|(k, _)| code >> (n - 1 - k) & 1 == 1)
            .map(|(_, e)| *e)
            .sum::<Complex64>()
            .norm_sqr()
    };
    let (_, best) = exec
        .argmax_range(0..1usize << n, gain_of)
        .ok_or_else(|| Error::Internal("empty mask range".into()))?;
    let floor = best * (1.0 - TIE_TOLERANCE);
    let code = exec
        .find_first(0..1usize << n, |code| gain_of(code) >= floor)
        .ok_or_else(|| Error::Internal("best mask vanished".into()))?;
    let gain = gain_of(code);
    let mask = (0..n).map(|k| code >> (n - 1 - k) & 1 == 1).collect();
    Ok(BinarySolution { mask, gain })
}

/// `|Σ_{mask_k} h_k|²` for a given mask.
pub fn mask_gain(design: &DmaDesign, mask: &[bool], phi: f64, f: f64) -> Result<f64> {
    if mask.len() != design.n_elements() {
        return Err(Error::LengthMismatch {
            expected: design.n_elements(),
            got: mask.len(),
        });
    }
    Ok(channel_entries(design, phi, f, false)
        .iter()
        .zip(mask)
        .filter(|(_, &on)| on)
        .map(|(e, _)| *e)
        .sum::<Complex64>()
        .norm_sqr())
}
