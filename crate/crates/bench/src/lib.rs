// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the criterion benches.

use multiboson::{haar_random, CMatrix};

/// `n × n` leading block of a Haar unitary; a typical boson-sampling
/// submatrix.
pub fn haar_block(n: usize, seed: u64) -> CMatrix {
    let u = haar_random(2 * n, seed).expect("n >= 1");
    u.entries().view((0, 0), (n, n)).into_owned()
}
