//! Membership in `σ₁ ⊂ σ₂ ⊂ σ₃` and in the degenerate locus `D`, decided by
//! ranks of catalecticant matrices.
//!
//! * `σ₂`: `φ_{d−1,1}` and `φ_{d−2,2}` have rank ≤ 2.
//! * `σ₃`: `φ_{d−1,1}` and the middle flattening `φ_{d−⌊d/2⌋,⌊d/2⌋}` have rank ≤ 3.
//! * `D`: points of `σ₃ ∖ σ₂` whose first flattening has rank 2.
//!
//! For cubics both `σ₃` conditions collapse to `dim⟨f⟩ ≤ 3`, which is only a
//! necessary condition; such verdicts carry a caveat.

use std::collections::BTreeMap;

use num_integer::binomial;
use serde::Serialize;

use crate::catalecticant::flattening_rank;
use crate::error::{Error, Result};
use crate::forms::Form;

pub const D3_CAVEAT: &str = "necessary conditions only for d=3";
pub const ZERO_FORM_NOTE: &str = "zero form is a member of every secant variety by convention";

fn middle(d: u32) -> u32 {
    d / 2
}

fn rank(f: &Form, k: u32) -> usize {
    flattening_rank(f, k).expect("k within 1..d-1")
}

/// Rank-one test on the first and middle flattenings.
pub fn in_sigma1(f: &Form) -> Result<bool> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::UnsupportedDegree(d));
    }
    if f.is_zero() {
        return Ok(true);
    }
    Ok(rank(f, 1) <= 1 && rank(f, middle(d)) <= 1)
}

pub fn in_sigma2(f: &Form) -> Result<bool> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::UnsupportedDegree(d));
    }
    if f.is_zero() {
        return Ok(true);
    }
    Ok(rank(f, 1) <= 2 && (d < 3 || rank(f, 2) <= 2))
}

/// `σ₃` test. For `d = 3` the answer is a necessary condition only; see
/// [`membership`] for the caveat-carrying version.
pub fn in_sigma3(f: &Form) -> Result<bool> {
    let d = f.degree();
    if d < 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    if f.is_zero() {
        return Ok(true);
    }
    Ok(rank(f, 1) <= 3 && rank(f, middle(d)) <= 3)
}

/// Degenerate locus `D ⊂ σ₃ ∖ σ₂`: essentially binary forms of border rank three.
pub fn in_degenerate_locus(f: &Form) -> Result<bool> {
    let d = f.degree();
    if d < 4 {
        return Err(Error::UnsupportedDegree(d));
    }
    if f.is_zero() {
        return Ok(false);
    }
    Ok(rank(f, 1) <= 2 && rank(f, middle(d)) <= 3 && !in_sigma2(f)?)
}

/// `max_k rank φ_{d−k,k}(f)`, a lower bound for the border rank.
pub fn border_rank_lower_bound(f: &Form) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    if d < 2 {
        return Ok(1);
    }
    Ok((1..d).map(|k| rank(f, k)).max().unwrap_or(0))
}

/// `C(d+n, n) − 3n − 3`, the codimension of `σ₃(v_d(ℙⁿ))` when it is not defective.
pub fn expected_codim(d: u32, n: u32) -> Result<usize> {
    if d < 3 || n < 2 {
        return Err(Error::OutOfRange(format!(
            "expected codimension needs d >= 3 and n >= 2, got d={d}, n={n}"
        )));
    }
    let ambient = binomial(u64::from(d + n), u64::from(n));
    Ok((ambient - 3 * u64::from(n) - 3) as usize)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MembershipVerdict {
    pub in_sigma1: bool,
    pub in_sigma2: bool,
    pub in_sigma3: bool,
    pub in_d: bool,
    /// `k → rank φ_{d−k,k}(f)` for every `1 ≤ k ≤ d−1`.
    pub witness_ranks: BTreeMap<u32, usize>,
    pub caveat: Option<String>,
}

/// All membership tests at once. Requires `d ≥ 3`.
pub fn membership(f: &Form) -> Result<MembershipVerdict> {
    let d = f.degree();
    if d < 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    let witness_ranks = (1..d).map(|k| (k, rank(f, k))).collect();
    if f.is_zero() {
        return Ok(MembershipVerdict {
            in_sigma1: true,
            in_sigma2: true,
            in_sigma3: true,
            in_d: false,
            witness_ranks,
            caveat: Some(ZERO_FORM_NOTE.to_string()),
        });
    }
    let s1 = in_sigma1(f)?;
    let s2 = in_sigma2(f)?;
    let s3 = in_sigma3(f)?;
    let in_d = d >= 4 && in_degenerate_locus(f)?;
    Ok(MembershipVerdict {
        in_sigma1: s1,
        in_sigma2: s2,
        in_sigma3: s3,
        in_d,
        witness_ranks,
        caveat: (d == 3).then(|| D3_CAVEAT.to_string()),
    })
}
