//! Shared inputs for the benchmarks.

use bgpres::family::{make_u, make_w};
use bgpres::word::Word;

/// Concrete `u_{n,m}`.
pub fn u_word(n: u32, m: u32) -> Word {
    make_u(n, m).and_then(|w| w.concrete()).expect("family word")
}

/// Concrete `w_{n,m}`.
pub fn w_word(n: u32, m: u32) -> Word {
    make_w(n, m).and_then(|w| w.concrete()).expect("family word")
}
