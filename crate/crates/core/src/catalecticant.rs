//! Catalecticant (symmetric flattening) matrices and the apolar ideal.
//!
//! For `f ∈ S_d` and `1 ≤ k ≤ d−1` the flattening `φ_{d−k,k}(f)` is the linear
//! map `T_{d−k} → S_k, g ↦ g·f`. In the divided-power basis of `S_k` and the
//! monomial basis of `T_{d−k}` its entries are `a_{I+J}`, the scaled
//! coefficients of `f`. Kernels of flattenings are the graded pieces of the
//! apolar ideal `f^⊥`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{kernel_basis, rref, MatrixQ, SpanBuilder, Subspace};
use crate::forms::{monomial_basis, Exponent, Form, LinearChange, MonomialIndex, Scalar};
use crate::par;

/// Matrix of `φ_{d−k,k}(f)` with its row (`S_k`) and column (`T_{d−k}`) indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlatteningMatrix {
    pub d: u32,
    pub k: u32,
    pub nvars: usize,
    pub row_index: Vec<Exponent>,
    pub col_index: Vec<Exponent>,
    pub matrix: MatrixQ,
}

impl FlatteningMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.matrix.rows(), self.matrix.cols())
    }
}

fn flattening_any(f: &Form, k: u32) -> FlatteningMatrix {
    let d = f.degree();
    debug_assert!(k <= d);
    let n = f.nvars();
    let row_index = monomial_basis(n, k);
    let col_index = monomial_basis(n, d - k);
    let mut matrix = MatrixQ::zeros(row_index.len(), col_index.len());
    if !f.is_zero() {
        for (r, i) in row_index.iter().enumerate() {
            for (c, j) in col_index.iter().enumerate() {
                let a = f
                    .scaled_coefficient(&(i + j))
                    .expect("I + J has the degree of f");
                if !a.is_zero() {
                    matrix.set(r, c, a);
                }
            }
        }
    }
    FlatteningMatrix {
        d,
        k,
        nvars: n,
        row_index,
        col_index,
        matrix,
    }
}

/// `φ_{d−k,k}(f)` for `1 ≤ k ≤ d−1`.
pub fn build_flattening(f: &Form, k: u32) -> Result<FlatteningMatrix> {
    let d = f.degree();
    if k < 1 || k + 1 > d {
        return Err(Error::OutOfRange(format!(
            "flattening index k={k} outside 1..={} for degree {d}",
            d.saturating_sub(1)
        )));
    }
    Ok(flattening_any(f, k))
}

pub fn flattening_rank(f: &Form, k: u32) -> Result<usize> {
    build_flattening(f, k).map(|m| m.rank())
}

/// `(f^⊥)_t`, the kernel of `T_t → S_{d−t}`, for `0 ≤ t ≤ d`.
pub fn apolar_piece(f: &Form, t: u32) -> Result<Subspace> {
    let d = f.degree();
    if t > d {
        return Err(Error::OutOfRange(format!(
            "apolar degree {t} exceeds form degree {d}"
        )));
    }
    let m = flattening_any(f, d - t);
    Ok(Subspace::from_canonical(
        f.nvars(),
        t,
        kernel_basis(&m.matrix),
    ))
}

/// The span `⟨f⟩`: the linear forms `f` actually depends on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Span {
    pub dim: usize,
    /// Primitive integer linear forms spanning `⟨f⟩`.
    pub basis: Vec<Form>,
}

/// Image of `φ_{d−1,1}(f)`, read as linear forms.
pub fn span_of(f: &Form) -> Result<Span> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let m = flattening_any(f, 1);
    let red = rref(&m.matrix);
    let basis = red
        .pivots
        .iter()
        .map(|&c| {
            let col: Vec<Scalar> = (0..m.matrix.rows())
                .map(|r| m.matrix.get(r, c).clone())
                .collect();
            Form::linear(&primitive(&col))
        })
        .collect();
    Ok(Span {
        dim: red.rank,
        basis,
    })
}

/// Scales a nonzero vector to coprime integers with a positive leading entry.
fn primitive(v: &[Scalar]) -> Vec<Scalar> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        g = -g;
    }
    ints.into_iter()
        .map(|x| Scalar::from_integer(x / &g))
        .collect()
}

/// Rewrites `f` in its essential variables.
///
/// Returns `g` in `r = dim⟨f⟩` variables and an invertible `A` such that
/// `g`, extended by unused variables and substituted with `A`, equals `f`. The
/// rows of `A` are the span basis followed by the first standard unit vectors
/// that complete it.
pub fn restrict_to_span(f: &Form) -> Result<(Form, LinearChange)> {
    let span = span_of(f)?;
    let n = f.nvars();
    let mut builder = SpanBuilder::new(n);
    let mut rows = Vec::with_capacity(n);
    for l in &span.basis {
        let v: Vec<Scalar> = (0..n).map(|i| l.coefficient(&Exponent::unit(n, i))).collect();
        builder.insert(v.clone());
        rows.push(v);
    }
    for i in 0..n {
        if builder.is_full() {
            break;
        }
        let mut e = vec![Scalar::zero(); n];
        e[i] = Scalar::one();
        if builder.insert(e.clone()) {
            rows.push(e);
        }
    }
    let change = LinearChange::new(MatrixQ::from_rows(rows))?;
    // f∘A⁻¹ only involves the first r variables, so substitute straight into them.
    let inv = change.inverse();
    let images: Vec<Form> = (0..n)
        .map(|i| Form::linear(&inv.matrix().row(i)[..span.dim]))
        .collect();
    let g = f.substitute_images(&images);
    Ok((g, change))
}

/// Span of all products `u·w`, `u ∈ U ⊂ T_a`, `w ∈ W ⊂ T_b`, inside `T_{a+b}`.
pub fn graded_product(u: &Subspace, w: &Subspace) -> Result<Subspace> {
    if u.nvars() != w.nvars() {
        return Err(Error::NvarsMismatch {
            left: u.nvars(),
            right: w.nvars(),
        });
    }
    let nvars = u.nvars();
    let target = MonomialIndex::new(nvars, u.degree() + w.degree());
    let left = sparse_rows(u);
    let right = sparse_rows(w);
    let pairs: Vec<(usize, usize)> = (0..left.len())
        .flat_map(|i| (0..right.len()).map(move |j| (i, j)))
        .collect();

    let mut builder = SpanBuilder::new(target.len());
    const CHUNK: usize = 256;
    for chunk in pairs.chunks(CHUNK) {
        if builder.is_full() {
            break;
        }
        let products = par::map(chunk, |&(i, j)| {
            let mut v = vec![Scalar::zero(); target.len()];
            for (e1, c1) in &left[i] {
                for (e2, c2) in &right[j] {
                    let pos = target.position(&(e1 + e2)).expect("product degree");
                    v[pos] += c1 * c2;
                }
            }
            v
        });
        for v in products {
            builder.insert(v);
        }
    }
    Ok(Subspace::from_builder(
        nvars,
        u.degree() + w.degree(),
        builder,
    ))
}

fn sparse_rows(s: &Subspace) -> Vec<Vec<(Exponent, Scalar)>> {
    let basis = monomial_basis(s.nvars(), s.degree());
    (0..s.dim())
        .map(|r| {
            s.basis()
                .row(r)
                .iter()
                .zip(&basis)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, e)| (e.clone(), c.clone()))
                .collect()
        })
        .collect()
}
