//! Property tests: algebraic laws of the Picard pairing and the Cox ring,
//! serialization round-trips, functoriality of graded pieces, and a naive
//! elimination oracle for the rank routine.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use ulrich_core::cohomology::line_bundle_cohomology;
use ulrich_core::coxring::{monomial_basis, random_form, FormMatrix};
use ulrich_core::fp::{FieldPrime, FpMatrix};
use ulrich_core::picard::{intersect, Divisor, SurfaceParams};

fn divisor() -> impl Strategy<Value = Divisor> {
    (-10i64..=10, -10i64..=10).prop_map(|(a, b)| Divisor::new(a, b))
}

fn surface() -> impl Strategy<Value = SurfaceParams> {
    (0u32..=4).prop_map(SurfaceParams::new)
}

proptest! {
    #[test]
    fn pairing_is_symmetric_and_bilinear(e in surface(), d1 in divisor(), d2 in divisor(), d3 in divisor()) {
        prop_assert_eq!(intersect(e, d1, d2), intersect(e, d2, d1));
        prop_assert_eq!(
            intersect(e, d1 + d2, d3),
            intersect(e, d1, d3) + intersect(e, d2, d3)
        );
    }

    #[test]
    fn h0_equals_basis_size(e in surface(), t in 0i64..=6, s in -8i64..=8) {
        let d = Divisor::new(t, s);
        prop_assert_eq!(
            monomial_basis(e, d).len() as u64,
            line_bundle_cohomology(e, d).h0
        );
    }

    #[test]
    fn multiplication_laws(e in surface(), seed in any::<u64>(),
                           da in (0i64..=2, 0i64..=3), db in (0i64..=2, 0i64..=3),
                           dc in (0i64..=2, 0i64..=3)) {
        let field = FieldPrime::default();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_form(e, Divisor::new(da.0, da.1), field, &mut rng);
        let b = random_form(e, Divisor::new(db.0, db.1), field, &mut rng);
        let c = random_form(e, Divisor::new(dc.0, dc.1), field, &mut rng);
        let ab = a.multiply(&b, field);
        prop_assert_eq!(ab.degree(), a.degree() + b.degree());
        prop_assert_eq!(&ab, &b.multiply(&a, field));
        prop_assert_eq!(
            ab.multiply(&c, field),
            a.multiply(&b.multiply(&c, field), field)
        );
    }

    #[test]
    fn form_matrix_json_round_trip(e in surface(), seed in any::<u64>()) {
        let field = FieldPrime::default();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let rows = vec![Divisor::new(1, 2), Divisor::new(2, 2)];
        let cols = vec![Divisor::new(0, 1), Divisor::new(1, 1)];
        let mut m = FormMatrix::new(e, field, rows.clone(), cols.clone());
        for i in 0..2 {
            for j in 0..2 {
                let d = rows[i] - cols[j];
                let form = random_form(e, d, field, &mut rng);
                m.set_entry(i, j, form).unwrap();
            }
        }
        let json = serde_json::to_string(&m).unwrap();
        let back: FormMatrix = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn graded_piece_is_functorial(e in surface(), seed in any::<u64>(), tw in (-1i64..=1, -1i64..=1)) {
        // two composable maps: A -> B -> C with small twists
        let field = FieldPrime::default();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let twist_a = vec![Divisor::new(0, 0), Divisor::new(0, 1)];
        let twist_b = vec![Divisor::new(1, 1), Divisor::new(0, 2)];
        let twist_c = vec![Divisor::new(1, 3)];
        let mut inner = FormMatrix::new(e, field, twist_b.clone(), twist_a.clone());
        for (i, &rt) in twist_b.iter().enumerate() {
            for (j, &ct) in twist_a.iter().enumerate() {
                inner.set_entry(i, j, random_form(e, rt - ct, field, &mut rng)).unwrap();
            }
        }
        let mut outer = FormMatrix::new(e, field, twist_c.clone(), twist_b.clone());
        for (i, &rt) in twist_c.iter().enumerate() {
            for (j, &ct) in twist_b.iter().enumerate() {
                outer.set_entry(i, j, random_form(e, rt - ct, field, &mut rng)).unwrap();
            }
        }
        let composed = outer.compose(&inner).unwrap();
        let twist = Divisor::new(tw.0, tw.1);
        let lhs = composed.graded_piece(twist).matrix;
        let rhs = outer
            .graded_piece(twist)
            .matrix
            .mul(&inner.graded_piece(twist).matrix);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_agrees_with_naive_rref(seed in any::<u64>()) {
        let field = FieldPrime::default();
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut m = FpMatrix::zeros(field, 20, 20);
        use rand::Rng;
        for r in 0..20 {
            for c in 0..20 {
                // sparse-ish entries so ranks vary
                if rng.gen_range(0..3) == 0 {
                    m.set(r, c, rng.gen_range(0..field.p()));
                }
            }
        }
        prop_assert_eq!(m.rank(), naive_rref_rank(&m));
    }
}

/// Independent Gauss-Jordan: full reduced row echelon form, then count the
/// nonzero rows. Deliberately a different code path from `FpMatrix::rank`.
fn naive_rref_rank(m: &FpMatrix) -> usize {
    let f = m.field();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| (0..cols).map(|c| m.get(r, c)).collect())
        .collect();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(pr) = (pivot_row..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(pivot_row, pr);
        let inv = f.inv(a[pivot_row][col]);
        for c in 0..cols {
            a[pivot_row][c] = f.mul(a[pivot_row][c], inv);
        }
        for r in 0..rows {
            if r != pivot_row && a[r][col] != 0 {
                let factor = a[r][col];
                for c in 0..cols {
                    let v = f.sub(a[r][c], f.mul(factor, a[pivot_row][c]));
                    a[r][c] = v;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows {
            break;
        }
    }
    a.iter().filter(|row| row.iter().any(|&v| v != 0)).count()
}
