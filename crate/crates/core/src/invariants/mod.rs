//! Decategorified invariants and the positive-braid verifier.

mod polynomial;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cube::ChainComplex;
use crate::diagram::{circle_map, Diagram, Epsilon, MAX_CROSSINGS};
use crate::error::{KhError, Result};
use crate::homology::BigradedGroup;

pub use polynomial::LaurentPolynomial;
pub use verify::{
    kernel_structure_check, reduction_consistency, restricted_complex, verify_positive_braid, CheckResult, CheckStatus,
    KernelCheck, KernelWitness, ReductionCheck, RestrictedComplexW, VerificationReport,
};

/// `Σ (−1)^{i−n₋} dim C^{i,j} q^j` over the normalised grading.
pub fn graded_euler_characteristic(c: &ChainComplex) -> LaurentPolynomial {
    let mut out = LaurentPolynomial::zero();
    for g in c.groups() {
        let sign = if (g.degree + c.n_minus()).is_multiple_of(2) { 1 } else { -1 };
        for &q in &g.q_degrees {
            out.add_term(sign, q);
        }
    }
    out
}

/// Jones polynomial by the state sum
/// `Σ_ε (−1)^{|ε|+n₋} q^{|ε|+n₊−2n₋} (q + q⁻¹)^{c(ε)}`,
/// computed from circle counts alone.
pub fn jones_state_sum(d: &Diagram, cap: usize) -> Result<LaurentPolynomial> {
    let m = d.crossing_count();
    let cap = cap.min(MAX_CROSSINGS);
    if m > cap {
        return Err(KhError::CapExceeded { crossings: m, cap });
    }
    // number of states with a given (|ε|, c(ε))
    let mut counts: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for bits in 0..1u64 << m {
        let e = Epsilon::new(bits, m);
        *counts.entry((e.weight(), circle_map(d, e).circle_count)).or_default() += 1;
    }
    let shift = d.n_plus() as i32 - 2 * d.n_minus() as i32;
    let v = LaurentPolynomial::quantum_two();
    let mut out = LaurentPolynomial::zero();
    for ((w, circles), n) in counts {
        let sign = if (w + d.n_minus()).is_multiple_of(2) { n } else { -n };
        out += &LaurentPolynomial::monomial(sign, w as i32 + shift) * &v.pow(circles as u32);
    }
    Ok(out)
}

/// Which sign the q-grading carries in reported tables.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `deg 1 = +1`, `deg X = −1`.
    #[default]
    Standard,
    /// Every q-degree negated (the `sl(n)` convention at `n = 2`).
    Inverted,
}

/// `j ↦ −j` on every entry. An involution.
pub fn convention_toggle(t: &BigradedGroup) -> BigradedGroup {
    t.q_negated()
}

pub fn apply_convention(t: &BigradedGroup, convention: Convention) -> BigradedGroup {
    match convention {
        Convention::Standard => t.clone(),
        Convention::Inverted => convention_toggle(t),
    }
}
