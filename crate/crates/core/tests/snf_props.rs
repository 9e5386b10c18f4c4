use macdonald_core::snf::{abelian_order, smith_normal_form, AbelianOrder, IntMatrix};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn det(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::from(1);
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, x)| *x)
                        .collect()
                })
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            BigInt::from(sign * rows[0][c]) * det(&minor)
        })
        .sum()
}

fn matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-30i64..30, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn invariant_factors_form_a_divisibility_chain(rows in matrix(5)) {
        let d = smith_normal_form(&IntMatrix::from_rows(&rows).unwrap());
        prop_assert!(d.len() <= rows.len().min(rows[0].len()));
        prop_assert!(d.iter().all(|x| !x.is_zero()));
        for w in d.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn square_factors_multiply_to_determinant(n in 1usize..=4, seed in prop::collection::vec(-20i64..20, 16)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
        let d = smith_normal_form(&IntMatrix::from_rows(&rows).unwrap());
        let product: BigUint = d.iter().product();
        if d.len() == n {
            prop_assert_eq!(BigInt::from(product), det(&rows).abs());
        } else {
            prop_assert!(det(&rows).is_zero());
        }
        let order = abelian_order(&IntMatrix::from_rows(&rows).unwrap());
        match order {
            AbelianOrder::Finite(o) => prop_assert_eq!(BigInt::from(o), det(&rows).abs()),
            AbelianOrder::Infinite => prop_assert!(det(&rows).is_zero()),
        }
    }

    #[test]
    fn unimodular_changes_preserve_factors(rows in matrix(4), i in 0usize..4, j in 0usize..4, t in -5i64..5) {
        let before = smith_normal_form(&IntMatrix::from_rows(&rows).unwrap());
        let mut moved = rows.clone();
        let (i, j) = (i % rows.len(), j % rows.len());
        if i != j {
            for c in 0..rows[0].len() {
                moved[i][c] += t * rows[j][c];
            }
        }
        moved.reverse();
        prop_assert_eq!(smith_normal_form(&IntMatrix::from_rows(&moved).unwrap()), before);
    }
}

#[test]
fn known_forms() {
    let d = smith_normal_form(
        &IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).unwrap(),
    );
    assert_eq!(
        d,
        vec![
            BigUint::from(2u32),
            BigUint::from(6u32),
            BigUint::from(12u32)
        ]
    );
    let d = smith_normal_form(
        &IntMatrix::from_rows(&[vec![9, 6, 0], vec![-3, -14, -12], vec![-12, -15, -7]]).unwrap(),
    );
    assert_eq!(d, vec![BigUint::from(1u32), BigUint::from(1u32)]);
    assert!(smith_normal_form(&IntMatrix::zeros(2, 2)).is_empty());
}
