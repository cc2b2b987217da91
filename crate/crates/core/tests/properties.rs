use num_integer::binomial;
use num_traits::Zero;
use proptest::prelude::*;

use secant_core::catalecticant::graded_product;
use secant_core::exact_linalg::SpanBuilder;
use secant_core::secant::in_sigma1;
use secant_core::tangent::sample_linear_change;
use secant_core::*;

fn scalar(v: i64) -> Scalar {
    Scalar::from_integer(v.into())
}

fn form_from(nvars: usize, d: u32, coeffs: &[i64]) -> Form {
    let values: Vec<Scalar> = coeffs.iter().map(|&c| scalar(c)).collect();
    Form::from_dense(nvars, d, &values).unwrap()
}

fn arb_form(nvars: usize, d: u32) -> impl Strategy<Value = Form> {
    let len = monomial_basis(nvars, d).len();
    prop::collection::vec(-3i64..=3, len).prop_map(move |c| form_from(nvars, d, &c))
}

/// Sparse form: a few monomials with small coefficients.
fn arb_sparse_form(nvars: usize, d: u32) -> impl Strategy<Value = Form> {
    let basis = monomial_basis(nvars, d);
    let len = basis.len();
    prop::collection::vec((0..len, -4i64..=4), 1..5).prop_map(move |terms| {
        let basis = monomial_basis(nvars, d);
        Form::from_terms(
            nvars,
            d,
            terms.into_iter().map(|(i, c)| (basis[i].clone(), scalar(c))),
        )
        .unwrap()
    })
}

fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = MatrixQ> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |v| {
            let rows = v
                .chunks(c)
                .map(|row| {
                    row.iter()
                        .map(|&(n, d)| Scalar::new(n.into(), d.into()))
                        .collect()
                })
                .collect();
            MatrixQ::from_rows_with_cols(rows, c)
        })
    })
}

/// Low-rank integer matrix: product of two thin factors, so rank deficiency is common.
fn arb_low_rank_matrix() -> impl Strategy<Value = MatrixQ> {
    (1usize..6, 1usize..6, 1usize..4).prop_flat_map(|(r, c, k)| {
        (
            prop::collection::vec(-2i64..=2, r * k),
            prop::collection::vec(-2i64..=2, k * c),
        )
            .prop_map(move |(a, b)| {
                let to_m = |v: &[i64], cols: usize| {
                    MatrixQ::from_rows_with_cols(
                        v.chunks(cols)
                            .map(|row| row.iter().map(|&x| scalar(x)).collect())
                            .collect(),
                        cols,
                    )
                };
                to_m(&a, k).mul(&to_m(&b, c))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn apply_diff_is_bilinear(
        g1 in arb_form(3, 2), g2 in arb_form(3, 2),
        f1 in arb_form(3, 4), f2 in arb_form(3, 4),
    ) {
        let lhs = (&g1 + &g2).apply_diff(&f1).unwrap();
        let rhs = &g1.apply_diff(&f1).unwrap() + &g2.apply_diff(&f1).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = g1.apply_diff(&(&f1 + &f2)).unwrap();
        let rhs = &g1.apply_diff(&f1).unwrap() + &g1.apply_diff(&f2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_composes(g in arb_form(3, 1), h in arb_form(3, 2), f in arb_form(3, 5)) {
        let lhs = (&g * &h).apply_diff(&f).unwrap();
        let rhs = g.apply_diff(&h.apply_diff(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_right_action(f in arb_form(3, 3), s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = sample_linear_change(3, s1);
        let b = sample_linear_change(3, s2);
        let lhs = f.substitute_linear(&a.compose(&b)).unwrap();
        let rhs = f.substitute_linear(&a).unwrap().substitute_linear(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
        let back = f.substitute_linear(&a).unwrap().substitute_linear(&a.inverse()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn format_parse_round_trip(f in arb_sparse_form(4, 5), g in arb_form(2, 3)) {
        prop_assert_eq!(parse_form(&f.to_string(), 4).unwrap(), f.clone());
        prop_assert_eq!(parse_form(&g.to_string(), 2).unwrap(), g.clone());
        prop_assert_eq!(parse_dual_form(&f.to_text('y'), 4).unwrap(), f);
    }

    #[test]
    fn scaled_coefficient_is_linear(f in arb_form(3, 3), g in arb_form(3, 3), c in -5i64..=5) {
        let h = &f.scale(&scalar(c)) + &g;
        for e in monomial_basis(3, 3) {
            let lhs = h.scaled_coefficient(&e).unwrap();
            let rhs = f.scaled_coefficient(&e).unwrap() * scalar(c) + g.scaled_coefficient(&e).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rank_of_transpose(m in arb_matrix(6, 7)) {
        prop_assert_eq!(rref(&m).rank, rref(&m.transpose()).rank);
    }

    #[test]
    fn rank_nullity_and_kernel(m in arb_low_rank_matrix()) {
        let r = rref(&m);
        let k = kernel_basis(&m);
        prop_assert_eq!(r.rank + k.rows(), m.cols());
        for row in k.to_rows() {
            prop_assert!(m.mul_vec(&row).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rref_is_fixed_point(m in arb_low_rank_matrix()) {
        let once = rref(&m);
        let twice = rref(&once.matrix);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(rref(&m), once);
    }

    #[test]
    fn incremental_span_agrees_with_bareiss(m in arb_low_rank_matrix()) {
        let r = rref(&m);
        let mut b = SpanBuilder::new(m.cols());
        for row in m.to_rows() {
            b.insert(row);
        }
        let inc = b.into_matrix();
        prop_assert_eq!(inc.rows(), r.rank);
        for i in 0..r.rank {
            prop_assert_eq!(inc.row(i), r.matrix.row(i));
        }
    }

    #[test]
    fn subspace_sum_laws(
        a in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 0..3),
        b in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 0..3),
        c in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 0..3),
    ) {
        let sub = |v: &Vec<Vec<i64>>| {
            Subspace::from_vectors(3, 2, v.iter().map(|r| r.iter().map(|&x| scalar(x)).collect()).collect()).unwrap()
        };
        let (u, v, w) = (sub(&a), sub(&b), sub(&c));
        prop_assert_eq!(subspace_sum(&u, &v).unwrap(), subspace_sum(&v, &u).unwrap());
        prop_assert_eq!(
            subspace_sum(&subspace_sum(&u, &v).unwrap(), &w).unwrap(),
            subspace_sum(&u, &subspace_sum(&v, &w).unwrap()).unwrap()
        );
        prop_assert_eq!(subspace_sum(&u, &u).unwrap(), u.clone());
        prop_assert!(subspace_sum(&u, &v).unwrap().dim() <= u.dim() + v.dim());
    }

    #[test]
    fn flattening_transpose_and_hankel(f in arb_form(3, 5)) {
        let d = f.degree();
        for k in 1..d {
            let m = build_flattening(&f, k).unwrap();
            let t = build_flattening(&f, d - k).unwrap();
            prop_assert_eq!(&m.matrix, &t.matrix.transpose());
            prop_assert_eq!(&m.row_index, &t.col_index);
            let mut seen = std::collections::HashMap::new();
            for (r, i) in m.row_index.iter().enumerate() {
                for (c, j) in m.col_index.iter().enumerate() {
                    let v = m.matrix.get(r, c).clone();
                    let prev = seen.entry(i + j).or_insert_with(|| v.clone());
                    prop_assert_eq!(&*prev, &v);
                }
            }
        }
    }

    #[test]
    fn apolar_dimension_formula(f in arb_sparse_form(3, 5)) {
        let d = f.degree();
        for t in 1..d {
            let piece = apolar_piece(&f, t).unwrap();
            let expected = binomial(t as usize + 2, 2) - flattening_rank(&f, d - t).unwrap();
            prop_assert_eq!(piece.dim(), expected);
        }
    }

    #[test]
    fn apolar_ideal_is_closed_under_multiplication(f in arb_sparse_form(3, 4)) {
        let d = f.degree();
        for a in 1..d {
            let piece = apolar_piece(&f, a).unwrap();
            for g in piece.basis_forms() {
                prop_assert!(g.apply_diff(&f).unwrap().is_zero());
                for b in 1..=(d - a) {
                    let target = apolar_piece(&f, a + b).unwrap();
                    for m in monomial_basis(3, b) {
                        let prod = &g * &Form::monomial(m, scalar(1));
                        prop_assert!(target.contains_form(&prod));
                    }
                }
            }
        }
    }

    #[test]
    fn ranks_and_span_are_sl_invariant(seed in any::<u64>(), r in 1usize..=4) {
        let f = sample_rank_le(r, 4, 2, seed);
        let a = sample_linear_change(3, seed ^ 0xabcdef);
        let g = f.substitute_linear(&a).unwrap();
        for k in 1..4 {
            prop_assert_eq!(flattening_rank(&f, k).unwrap(), flattening_rank(&g, k).unwrap());
        }
        if !f.is_zero() {
            prop_assert_eq!(span_of(&f).unwrap().dim, span_of(&g).unwrap().dim);
            prop_assert_eq!(membership(&f).unwrap(), membership(&g).unwrap());
        }
    }

    #[test]
    fn subadditivity(seed in any::<u64>(), r in 1usize..=4, d in 3u32..=6) {
        let f = sample_rank_le(r, d, 3, seed);
        for k in 1..d {
            prop_assert!(flattening_rank(&f, k).unwrap() <= r);
        }
    }

    #[test]
    fn secant_nesting(f in arb_sparse_form(4, 4), seed in any::<u64>(), r in 1usize..=3) {
        for g in [f, sample_rank_le(r, 4, 3, seed)] {
            let v = membership(&g).unwrap();
            prop_assert!(!v.in_sigma1 || v.in_sigma2);
            prop_assert!(!v.in_sigma2 || v.in_sigma3);
            prop_assert!(!v.in_d || (v.in_sigma3 && !v.in_sigma2));
        }
    }

    #[test]
    fn span_bound_for_border_rank_three(seed in any::<u64>(), d in 4u32..=6, n in 2u32..=4) {
        let f = sample_rank_le(3, d, n, seed);
        prop_assume!(!f.is_zero());
        let dim = span_of(&f).unwrap().dim;
        prop_assert!(dim <= 3);
        if !in_sigma2(&f).unwrap() {
            prop_assert!((2..=3).contains(&dim));
        }
    }

    #[test]
    fn pure_powers_restrict_to_one_variable(seed in any::<u64>(), d in 2u32..=6) {
        let f = sample_rank_le(1, d, 3, seed);
        prop_assert!(in_sigma1(&f).unwrap());
        let (g, _) = restrict_to_span(&f).unwrap();
        prop_assert_eq!(g.nvars(), 1);
        prop_assert_eq!(g.num_terms(), 1);
    }

    #[test]
    fn restriction_reconstructs(f in arb_sparse_form(4, 4)) {
        prop_assume!(!f.is_zero());
        let (g, a) = restrict_to_span(&f).unwrap();
        prop_assert_eq!(flattening_rank(&g, 1).unwrap_or(g.nvars()), g.nvars());
        prop_assert_eq!(g.extend_vars(4).substitute_linear(&a).unwrap(), f);
    }

    #[test]
    fn conormal_dimension_bounded_by_codim(seed in any::<u64>(), d in 4u32..=6, n in 2u32..=3) {
        let f = sample_rank_le(3, d, n, seed);
        prop_assume!(!f.is_zero() && !in_sigma2(&f).unwrap());
        let c = conormal_space(&f).unwrap();
        prop_assert!(c.dim() <= expected_codim(d, n).unwrap());
    }

    #[test]
    fn sigma2_points_are_singular(seed in any::<u64>(), d in 3u32..=6, n in 2u32..=4, r in 1usize..=2) {
        let f = sample_rank_le(r, d, n, seed);
        prop_assert!(in_sigma2(&f).unwrap());
        prop_assert!(in_singular_locus(&f).unwrap());
    }

    #[test]
    fn graded_product_dimension_bound(f in arb_sparse_form(3, 5)) {
        let u = apolar_piece(&f, 2).unwrap();
        let w = apolar_piece(&f, 3).unwrap();
        let p = graded_product(&u, &w).unwrap();
        prop_assert!(p.dim() <= u.dim() * w.dim());
        prop_assert_eq!(p, graded_product(&w, &u).unwrap());
    }
}

#[test]
fn hilbert_function_of_squared_nets_matches_resolution() {
    let h = |d: u32| {
        let c = |m: i64| if m < 0 { 0 } else { binomial(m + 2, 2) as usize };
        let d = i64::from(d);
        6 * c(d - 4) - 6 * c(d - 5) + c(d - 6)
    };
    for d in 2..=10u32 {
        let nets = [
            vec!["y0*y2".to_string(), "y1^2".into(), "y1*y2".into()],
            vec![format!("y0*y2 - {}/2*y1^2", d - 1), "y1*y2".into(), "y2^2".into()],
        ];
        for net in nets {
            let qs: Vec<Form> = net.iter().map(|s| parse_dual_form(s, 3).unwrap()).collect();
            let mut sq = Vec::new();
            for i in 0..3 {
                for j in i..3 {
                    sq.push(&qs[i] * &qs[j]);
                }
            }
            assert_eq!(hilbert_function(&sq, d).unwrap(), h(d), "{net:?} d={d}");
            if d >= 4 {
                assert_eq!(h(d), binomial(d as usize + 2, 2) - 9);
            }
        }
    }
}

#[test]
fn classification_is_stable_under_coordinate_changes() {
    for d in 4..=5u32 {
        for kind in OrbitClass::CANONICAL {
            let f = canonical_form(kind, d, 3, None).unwrap();
            for seed in 0..5 {
                let g = f.substitute_linear(&sample_linear_change(4, seed)).unwrap();
                assert_eq!(classify_orbit(&g).unwrap(), kind, "{kind} d={d} seed={seed}");
            }
        }
    }
}

#[test]
fn generic_rank_three_samples_are_fermat() {
    for seed in 0..10 {
        let f = sample_rank_le(3, 5, 2, seed);
        if in_sigma2(&f).unwrap() {
            continue;
        }
        assert_eq!(classify_orbit(&f).unwrap(), OrbitClass::Fermat, "seed {seed}");
    }
}
