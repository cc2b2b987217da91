//! Conormal spaces of `σ₃`, smoothness, the singular locus, orbit
//! classification and the canonical representatives of the orbits.
//!
//! At a point `f ∈ σ₃ ∖ σ₂` with `d ≥ 4` the affine conormal space is spanned by
//! products of graded pieces of the apolar ideal:
//!
//! * full: `(f^⊥)₁·(f^⊥)_{d−1} + (f^⊥)_s·(f^⊥)_{d−s}`,
//! * middle only (`n = 2`, or `dim⟨f⟩ = 2`): `(f^⊥)_s·(f^⊥)_{d−s}`,
//!
//! with `s = ⌊d/2⌋`. The point is smooth exactly when the conormal dimension
//! reaches the codimension of `σ₃`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalecticant::{apolar_piece, flattening_rank, graded_product, restrict_to_span, span_of};
use crate::error::{Error, Result};
use crate::exact_linalg::{subspace_sum, MatrixQ, SpanBuilder, Subspace};
use crate::forms::{int, monomial_basis, Exponent, Form, LinearChange, MonomialIndex, Scalar};
use crate::par;
use crate::secant::{expected_codim, in_degenerate_locus, in_sigma2, in_sigma3, D3_CAVEAT};
use crate::univariate::Poly;

/// Seed used by [`classify_orbit`].
pub const DEFAULT_CLASSIFY_SEED: u64 = 0x005e_ca17;

const MAX_LINE_ATTEMPTS: usize = 8;
const LINES_PER_CLASSIFICATION: usize = 3;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConormalFormula {
    /// `(f^⊥)₁·(f^⊥)_{d−1} + (f^⊥)_s·(f^⊥)_{d−s}`
    Full,
    /// `(f^⊥)_s·(f^⊥)_{d−s}`
    MiddleOnly,
}

impl ConormalFormula {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConormalFormula::Full => "full",
            ConormalFormula::MiddleOnly => "middle-only",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConormalSpace {
    pub space: Subspace,
    pub formula: ConormalFormula,
}

impl ConormalSpace {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn nvars_to_n(f: &Form) -> Result<u32> {
    let n = f.nvars().saturating_sub(1) as u32;
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "need at least 3 variables, got {}",
            f.nvars()
        )));
    }
    Ok(n)
}

/// Conormal space of `σ₃` at `f ∈ σ₃ ∖ σ₂`, `d ≥ 4`.
///
/// The formula is picked from the computed ranks: the middle-only version when
/// `n = 2` or `rank φ_{d−1,1}(f) = 2`, the full one otherwise.
pub fn conormal_space(f: &Form) -> Result<ConormalSpace> {
    let d = f.degree();
    let n = nvars_to_n(f)?;
    if d < 4 {
        return Err(Error::UnsupportedDegree(d));
    }
    if f.is_zero() || in_sigma2(f)? {
        return Err(Error::InSigma2);
    }
    if !in_sigma3(f)? {
        return Err(Error::NotInSigma3);
    }
    let s = d / 2;
    if flattening_rank(f, s)? != 3 {
        return Err(Error::NotInSigma3);
    }
    let middle = graded_product(&apolar_piece(f, s)?, &apolar_piece(f, d - s)?)?;
    if n == 2 || flattening_rank(f, 1)? == 2 {
        return Ok(ConormalSpace {
            space: middle,
            formula: ConormalFormula::MiddleOnly,
        });
    }
    let first = graded_product(&apolar_piece(f, 1)?, &apolar_piece(f, d - 1)?)?;
    Ok(ConormalSpace {
        space: subspace_sum(&first, &middle)?,
        formula: ConormalFormula::Full,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Smooth,
    Singular,
    InSigma2,
    NotInSigma3,
    /// `d = 3`, point of `σ₃ ∖ σ₂`: smooth by the classification of cubics.
    D3Classified,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Smooth => "smooth",
            Verdict::Singular => "singular",
            Verdict::InSigma2 => "in-sigma2",
            Verdict::NotInSigma3 => "not-in-sigma3",
            Verdict::D3Classified => "d3-classified",
        }
    }

    /// Smooth point of `σ₃` (computed or classified).
    pub fn is_smooth(&self) -> bool {
        matches!(self, Verdict::Smooth | Verdict::D3Classified)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SmoothnessReport {
    pub point: Form,
    pub d: u32,
    pub n: u32,
    /// Present only when a conormal space was computed.
    pub conormal_dim: Option<usize>,
    pub expected_codim: usize,
    pub formula_used: Option<ConormalFormula>,
    pub verdict: Verdict,
    pub caveat: Option<String>,
}

pub fn smoothness_at(f: &Form) -> Result<SmoothnessReport> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let d = f.degree();
    let n = nvars_to_n(f)?;
    if d < 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    let codim = expected_codim(d, n)?;
    let mut report = SmoothnessReport {
        point: f.clone(),
        d,
        n,
        conormal_dim: None,
        expected_codim: codim,
        formula_used: None,
        verdict: Verdict::NotInSigma3,
        caveat: (d == 3).then(|| D3_CAVEAT.to_string()),
    };
    if !in_sigma3(f)? {
        return Ok(report);
    }
    if in_sigma2(f)? {
        report.verdict = Verdict::InSigma2;
        return Ok(report);
    }
    if d == 3 {
        report.verdict = Verdict::D3Classified;
        return Ok(report);
    }
    let conormal = conormal_space(f)?;
    report.conormal_dim = Some(conormal.dim());
    report.formula_used = Some(conormal.formula);
    report.verdict = if conormal.dim() == codim {
        Verdict::Smooth
    } else {
        Verdict::Singular
    };
    Ok(report)
}

/// Set-theoretic membership in `Sing(σ₃)`: `σ₂`, plus `D` when `d = 4, n ≥ 3`.
pub fn in_singular_locus(f: &Form) -> Result<bool> {
    let d = f.degree();
    let n = nvars_to_n(f)?;
    if d < 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    if !in_sigma3(f)? {
        return Err(Error::NotInSigma3);
    }
    if in_sigma2(f)? {
        return Ok(true);
    }
    Ok(d == 4 && n >= 3 && in_degenerate_locus(f)?)
}

/// Dimension of the degree-`t` piece of the ideal generated by `generators`
/// (forms in the dual ring). Generators of degree above `t` contribute nothing.
pub fn hilbert_function(generators: &[Form], t: u32) -> Result<usize> {
    let Some(first) = generators.first() else {
        return Ok(0);
    };
    let nvars = first.nvars();
    if let Some(g) = generators.iter().find(|g| g.nvars() != nvars) {
        return Err(Error::NvarsMismatch {
            left: nvars,
            right: g.nvars(),
        });
    }
    let index = MonomialIndex::new(nvars, t);
    let usable: Vec<&Form> = generators.iter().filter(|g| g.degree() <= t).collect();
    let per_generator = par::map(&usable, |g| {
        monomial_basis(nvars, t - g.degree())
            .into_iter()
            .map(|m| (&Form::monomial(m, Scalar::one()) * *g).to_dense(&index))
            .collect::<Vec<_>>()
    });
    let mut builder = SpanBuilder::new(index.len());
    for v in per_generator.into_iter().flatten() {
        if builder.is_full() {
            break;
        }
        builder.insert(v);
    }
    Ok(builder.rank())
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, PartialOrd, Ord)]
pub enum OrbitClass {
    Fermat,
    Unmixed,
    Mixed,
    DegenerateBinary,
    InSigma2,
    NotInSigma3,
}

impl OrbitClass {
    pub const CANONICAL: [OrbitClass; 4] = [
        OrbitClass::Fermat,
        OrbitClass::Unmixed,
        OrbitClass::Mixed,
        OrbitClass::DegenerateBinary,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitClass::Fermat => "Fermat",
            OrbitClass::Unmixed => "Unmixed",
            OrbitClass::Mixed => "Mixed",
            OrbitClass::DegenerateBinary => "DegenerateBinary",
            OrbitClass::InSigma2 => "InSigma2",
            OrbitClass::NotInSigma3 => "NotInSigma3",
        }
    }

    pub fn parse(s: &str) -> Option<OrbitClass> {
        let all = [
            OrbitClass::Fermat,
            OrbitClass::Unmixed,
            OrbitClass::Mixed,
            OrbitClass::DegenerateBinary,
            OrbitClass::InSigma2,
            OrbitClass::NotInSigma3,
        ];
        all.into_iter().find(|c| {
            c.as_str().eq_ignore_ascii_case(s)
                || (s.eq_ignore_ascii_case("degenerate") && *c == OrbitClass::DegenerateBinary)
        })
    }
}

impl std::fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_orbit(f: &Form) -> Result<OrbitClass> {
    classify_orbit_seeded(f, DEFAULT_CLASSIFY_SEED)
}

/// Orbit type of `f` inside `σ₃`.
///
/// Non-degenerate points are told apart by the net of conics `(g^⊥)₂`, where `g`
/// is `f` written in its three essential variables. The discriminant
/// `det(a·Q₁ + b·Q₂ + c·Q₃)` is a product of three linear forms; how many of
/// them are distinct (3, 2 or 1) gives Fermat, Unmixed or Mixed. The count is
/// read off restrictions of the cubic to seeded random lines.
pub fn classify_orbit_seeded(f: &Form, seed: u64) -> Result<OrbitClass> {
    let d = f.degree();
    if d < 3 {
        return Err(Error::UnsupportedDegree(d));
    }
    nvars_to_n(f)?;
    if !in_sigma3(f)? {
        return Ok(OrbitClass::NotInSigma3);
    }
    if in_sigma2(f)? {
        return Ok(OrbitClass::InSigma2);
    }
    let span = span_of(f)?;
    match span.dim {
        2 if d >= 4 => return Ok(OrbitClass::DegenerateBinary),
        3 => {}
        other => {
            return Err(Error::Classification(format!(
                "span of dimension {other} for a point of sigma_3 minus sigma_2 in degree {d}"
            )))
        }
    }
    let (g, _) = restrict_to_span(f)?;
    let net = apolar_piece(&g, 2)?;
    if net.dim() != 3 {
        return Err(Error::Classification(format!(
            "apolar net has dimension {}, expected 3",
            net.dim()
        )));
    }
    let conics: Vec<MatrixQ> = net.basis_forms().iter().map(symmetric_matrix).collect();
    match distinct_discriminant_factors(&conics, seed)? {
        3 => Ok(OrbitClass::Fermat),
        2 => Ok(OrbitClass::Unmixed),
        1 => Ok(OrbitClass::Mixed),
        other => Err(Error::Classification(format!(
            "discriminant cubic restricts with {other} distinct roots"
        ))),
    }
}

/// Symmetric matrix `S` with `q(y) = yᵀ S y`.
pub(crate) fn symmetric_matrix(q: &Form) -> MatrixQ {
    let n = q.nvars();
    let half = Scalar::new(1.into(), 2.into());
    let mut s = MatrixQ::zeros(n, n);
    for (e, c) in q.terms() {
        let support: Vec<usize> = e
            .entries()
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat_n(i, k as usize))
            .collect();
        let (i, j) = (support[0], support[1]);
        if i == j {
            s.set(i, i, c.clone());
        } else {
            s.set(i, j, c * &half);
            s.set(j, i, c * &half);
        }
    }
    s
}

fn combine(mats: &[MatrixQ], weights: &[Scalar]) -> MatrixQ {
    let n = mats[0].rows();
    let mut out = MatrixQ::zeros(n, n);
    for (m, w) in mats.iter().zip(weights) {
        for r in 0..n {
            for c in 0..n {
                let v = out.get(r, c) + m.get(r, c) * w;
                out.set(r, c, v);
            }
        }
    }
    out
}

/// Maximum over a few random lines of the number of distinct roots of the
/// discriminant cubic restricted to the line. Lines on which the restriction
/// drops degree are skipped.
fn distinct_discriminant_factors(conics: &[MatrixQ], seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = None;
    let mut good = 0;
    for _ in 0..MAX_LINE_ATTEMPTS {
        let p: Vec<Scalar> = (0..3).map(|_| int(rng.gen_range(-7..=7))).collect();
        let q: Vec<Scalar> = (0..3).map(|_| int(rng.gen_range(-7..=7))).collect();
        let a = combine(conics, &p);
        let b = combine(conics, &q);
        // h(x) = det(x·A + B), cubic in x with leading coefficient det A
        let points: Vec<(Scalar, Scalar)> = (0..4)
            .map(|x| {
                let x = int(x);
                let m = combine(&[a.clone(), b.clone()], &[x.clone(), Scalar::one()]);
                (x, m.determinant())
            })
            .collect();
        let h = Poly::interpolate(&points);
        if h.degree() != Some(3) {
            continue;
        }
        let roots = h.distinct_roots();
        best = Some(best.map_or(roots, |b: usize| b.max(roots)));
        good += 1;
        if good == LINES_PER_CLASSIFICATION {
            break;
        }
    }
    best.ok_or_else(|| {
        Error::Classification("every sampled line met the discriminant degenerately".into())
    })
}

/// Canonical representative of an orbit type, in `n + 1` variables.
///
/// `degenerate` carries `(α, β)` for `x0^d + α·x1^d + β·(x0+x1)^d` and defaults
/// to `(1, 1)`; it is ignored for the other kinds.
pub fn canonical_form(
    kind: OrbitClass,
    d: u32,
    n: u32,
    degenerate: Option<(Scalar, Scalar)>,
) -> Result<Form> {
    let nvars = n as usize + 1;
    let mono = |e: Vec<u32>| {
        let mut v = e;
        v.resize(nvars, 0);
        Form::monomial(Exponent::new(v), Scalar::one())
    };
    match kind {
        OrbitClass::Fermat | OrbitClass::Unmixed | OrbitClass::Mixed => {
            if d < 3 {
                return Err(Error::UnsupportedDegree(d));
            }
            if n < 2 {
                return Err(Error::OutOfRange(format!(
                    "{kind} needs n >= 2, got n={n}"
                )));
            }
        }
        OrbitClass::DegenerateBinary => {
            if d < 4 {
                return Err(Error::UnsupportedDegree(d));
            }
            if n < 1 {
                return Err(Error::OutOfRange("DegenerateBinary needs n >= 1".into()));
            }
        }
        OrbitClass::InSigma2 | OrbitClass::NotInSigma3 => {
            return Err(Error::OutOfRange(format!("{kind} has no canonical form")));
        }
    }
    Ok(match kind {
        OrbitClass::Fermat => &(&mono(vec![d]) + &mono(vec![0, d])) + &mono(vec![0, 0, d]),
        OrbitClass::Unmixed => &mono(vec![d - 1, 1]) + &mono(vec![0, 0, d]),
        OrbitClass::Mixed => &mono(vec![d - 2, 2]) + &mono(vec![d - 1, 0, 1]),
        OrbitClass::DegenerateBinary => {
            let (alpha, beta) = degenerate.unwrap_or_else(|| (Scalar::one(), Scalar::one()));
            if alpha.is_zero() || beta.is_zero() {
                return Err(Error::OutOfRange(
                    "degenerate normal form needs nonzero alpha and beta".into(),
                ));
            }
            let mut sum = vec![Scalar::zero(); nvars];
            sum[0] = Scalar::one();
            sum[1] = Scalar::one();
            let tail = &mono(vec![0, d]).scale(&alpha) + &Form::linear(&sum).pow(d).scale(&beta);
            &mono(vec![d]) + &tail
        }
        OrbitClass::InSigma2 | OrbitClass::NotInSigma3 => unreachable!(),
    })
}

/// `Σᵢ λᵢ ℓᵢ^d` with `r` seeded random small-integer linear forms `ℓᵢ` and
/// nonzero rational weights `λᵢ`; border rank at most `r` by construction.
pub fn sample_rank_le(r: usize, d: u32, n: u32, seed: u64) -> Form {
    let nvars = n as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = Form::zero(nvars, d);
    for _ in 0..r {
        let coeffs = loop {
            let c: Vec<i64> = (0..nvars).map(|_| rng.gen_range(-3..=3)).collect();
            if c.iter().any(|&x| x != 0) {
                break c;
            }
        };
        let num = loop {
            let v: i64 = rng.gen_range(-5..=5);
            if v != 0 {
                break v;
            }
        };
        let den: i64 = rng.gen_range(1..=4);
        let lambda = Scalar::new(num.into(), den.into());
        let l = Form::linear(&coeffs.into_iter().map(int).collect::<Vec<_>>());
        acc = &acc + &l.pow(d).scale(&lambda);
    }
    acc
}

/// Seeded random invertible change of coordinates with small integer entries.
pub fn sample_linear_change(nvars: usize, seed: u64) -> LinearChange {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<Scalar>> = (0..nvars)
            .map(|_| (0..nvars).map(|_| int(rng.gen_range(-3..=3))).collect())
            .collect();
        if let Ok(c) = LinearChange::new(MatrixQ::from_rows(rows)) {
            return c;
        }
    }
}
