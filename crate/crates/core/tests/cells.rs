use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use farey_gaps::geometry::{base_cell_area, farey_triangle};
use farey_gaps::tuple_sets::enumerate_nonempty;
use farey_gaps::{cell, continuant, is_empty, KTuple, Rational};

fn t(v: &[u64]) -> KTuple {
    KTuple::new(v.to_vec()).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn with_twos(head: &[u64], n: usize, tail: &[u64]) -> KTuple {
    let mut v = head.to_vec();
    v.extend(std::iter::repeat(2).take(n));
    v.extend_from_slice(tail);
    t(&v)
}

#[test]
fn single_index_cells_tile_the_triangle() {
    let mut total = Rational::zero();
    for k in 1..=2000 {
        total += base_cell_area(k);
    }
    // every cell with k >= 2 has area 4/(k(k+1)(k+2)); the tail is 2/(N+1)(N+2)
    let tail = q(2, 2001 * 2002);
    assert_eq!(total + tail, farey_triangle().area());
    assert_eq!(farey_triangle().area(), q(1, 2));
}

#[test]
fn reversal_preserves_emptiness_and_area() {
    for len in 2..=4 {
        for k in enumerate_nonempty(len, 9) {
            let rev = k.reversed();
            assert!(!is_empty(&rev), "{k} non-empty but {rev} empty");
            assert_eq!(cell(&k).area(), cell(&rev).area(), "{k}");
        }
    }
}

#[test]
fn children_partition_the_parent() {
    for parent in [t(&[3, 2, 1]), t(&[2, 1, 7]), t(&[1, 4]), t(&[5])] {
        let whole = cell(&parent).area();
        let mut sum = Rational::zero();
        for k in 1..=400 {
            sum += cell(&parent.pushed(k).unwrap()).area();
        }
        assert_eq!(sum, whole, "{parent}");
    }
}

#[test]
fn long_rows_collapse_to_single_index_area() {
    for k in 9..=20u64 {
        let single = base_cell_area(k);
        for v in [
            vec![k, 1],
            vec![1, k],
            vec![1, k, 1],
            vec![k, 1, 2],
            vec![2, 1, k],
            vec![2, 1, k, 1],
            vec![1, k, 1, 2],
            vec![2, 1, k, 1, 2],
        ] {
            assert_eq!(cell(&t(&v)).area(), single, "{v:?}");
        }
    }
    for k in 5..=8u64 {
        assert_eq!(cell(&t(&[k, 1])).area(), base_cell_area(k));
    }
    assert_eq!(cell(&t(&[1, 6, 1])).area(), base_cell_area(6));
}

#[test]
fn window_four_two_one() {
    for k in 1..=40 {
        assert_eq!(!is_empty(&t(&[4, 2, 1, k])), (6..=8).contains(&k), "k={k}");
    }
}

#[test]
fn window_twos_one() {
    for n in 1..=6 {
        for k in 1..=40 {
            let nonempty = !is_empty(&with_twos(&[], n, &[1, k]));
            assert_eq!(nonempty, k >= 4 * n as u64 + 2, "n={n} k={k}");
        }
    }
}

#[test]
fn window_three_twos_one() {
    for k in 1..=40 {
        assert_eq!(!is_empty(&t(&[3, 2, 1, k])), (7..=12).contains(&k), "k={k}");
    }
    for n in 2..=7 {
        let lo = 4 * n as u64 + 2;
        for k in 1..=50 {
            let nonempty = !is_empty(&with_twos(&[3], n, &[1, k]));
            assert_eq!(nonempty, (lo..=lo + 6).contains(&k), "n={n} k={k}");
        }
    }
}

#[test]
fn nonempty_cells_have_positive_continuant() {
    for len in 1..=4 {
        for k in enumerate_nonempty(len, 12) {
            assert!(continuant(&k) >= BigInt::one(), "{k}");
        }
    }
}

proptest! {
    #[test]
    fn cells_shrink_along_prefixes(v in prop::collection::vec(1u64..10, 1..5)) {
        let k = t(&v);
        let mut prev = farey_triangle().area();
        for i in 1..=v.len() {
            let a = cell(&t(&v[..i])).area();
            prop_assert!(a <= prev);
            prev = a;
        }
        prop_assert_eq!(is_empty(&k), cell(&k).area().is_zero());
    }
}
