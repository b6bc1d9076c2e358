//! Comparison policies: UCB1, EXP3.S, sliding-window UCB, a uniform player
//! and the clairvoyant oracle.
//!
//! All of them see raw rewards only, except [`Oracle`], which reads the
//! environment's true means and exists to pin dynamic regret at zero.

mod exp3s;
mod oracle;
mod sliding_window;
mod ucb1;
mod uniform;

pub use exp3s::{Exp3s, Exp3sParams};
pub use oracle::Oracle;
pub use sliding_window::{default_window, SlidingWindowUcb};
pub use ucb1::Ucb1;
pub use uniform::Uniform;

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax_index(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}
