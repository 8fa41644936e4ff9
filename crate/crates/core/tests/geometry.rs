mod common;

use common::*;
use mincad::curtain::{curtain_locus, curtain_locus_in, has_curtain_at};
use mincad::limit::{approach_point, boundary_limit, root_value, Side};
use mincad::model::{IndexedRoot, SetDefinition};
use mincad::{Cad, Index};
use mincad_exact::rational::{ratio, to_f64};
use mincad_exact::{AlgebraicNumber, ExtendedReal, Polynomial};
use proptest::prelude::*;
use std::cmp::Ordering;

fn num(n: i64) -> AlgebraicNumber {
    AlgebraicNumber::from_i64(n)
}

fn plane_and_axis_set() -> SetDefinition {
    plane_and_axis().family.sets[0].clone()
}

#[test]
fn curtain_of_plane_and_axis_is_the_origin() {
    let set = plane_and_axis_set();
    let locus = curtain_locus(&set, 3).unwrap();
    assert_eq!(locus.generators, vec![poly(2, &[(&[2, 0], 1), (&[0, 2], 1)])]);
    assert!(has_curtain_at(&locus, &[num(0), num(0)]));
    assert!(!has_curtain_at(&locus, &[num(1), num(0)]));

    let (cad, _) = built(&plane_and_axis());
    let locus = curtain_locus_in(&cad, &set).unwrap();
    assert_eq!(locus.cells.len(), 1);
    let cell = cad.cell(locus.cells.iter().next().unwrap()).unwrap();
    assert!(cell.index.0.iter().all(|e| e % 2 == 0), "a point cell");
    assert_eq!(cell.sample, vec![num(0), num(0)]);
}

#[test]
fn sphere_has_no_curtain() {
    let set = sphere().family.sets[0].clone();
    let locus = curtain_locus(&set, 3).unwrap();
    assert!(locus.is_trivially_empty());
    let (cad, _) = built(&sphere());
    assert!(curtain_locus_in(&cad, &set).unwrap().cells.is_empty());
}

#[test]
fn points_on_the_line_have_no_curtain() {
    let set = two_points_with_origin().family.sets[0].clone();
    let locus = curtain_locus(&set, 1).unwrap();
    assert!(locus.is_trivially_empty());
    assert!(!has_curtain_at(&locus, &[]));
}

#[test]
fn zero_polynomial_is_a_curtain_everywhere() {
    let set = SetDefinition::new("all", vec![Polynomial::zero(2)]);
    let locus = curtain_locus(&set, 2).unwrap();
    assert!(locus.generators.is_empty());
    assert!(has_curtain_at(&locus, &[num(7)]));
}

/// Whether `p` vanishes identically on the fibre over a rational base point.
fn vanishes_on_fibre(p: &Polynomial, base: &[(i64, i64)]) -> bool {
    let mut q = p.clone();
    for (i, &(n, d)) in base.iter().enumerate() {
        q = q.substitute(i, &ratio(n, d));
    }
    q.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn curtain_test_agrees_with_substitution(
        x in -3i64..=3, y in -3i64..=3, d in 1i64..=3,
    ) {
        for set in [plane_and_axis_set(), sphere().family.sets[0].clone()] {
            let locus = curtain_locus(&set, 3).unwrap();
            let base = [(x, d), (y, d)];
            let point: Vec<AlgebraicNumber> =
                base.iter().map(|&(n, d)| AlgebraicNumber::from_rational(ratio(n, d))).collect();
            let brute = set.polynomials.iter().all(|p| vanishes_on_fibre(p, &base));
            prop_assert_eq!(has_curtain_at(&locus, &point), brute);
        }
    }
}

/// Checks `boundary_limit` against a closed-form float function at the path
/// points it uses and near the target.
fn float_cross_check(
    root: &IndexedRoot,
    fixed: &[AlgebraicNumber],
    target: &AlgebraicNumber,
    side: Side,
    bound: Option<&AlgebraicNumber>,
    f: impl Fn(f64) -> f64,
) -> ExtendedReal {
    let out = boundary_limit(root, fixed, target, side, bound, &[]).unwrap();
    for m in 0..10 {
        let x = approach_point(target, bound, side, m);
        let mut point = fixed.to_vec();
        point.push(AlgebraicNumber::from_rational(x.clone()));
        let exact = root_value(root, &point).unwrap().to_f64();
        assert!((exact - f(to_f64(&x))).abs() < 1e-6, "path point {m}");
    }
    out.limit
}

#[test]
fn upper_circle_root_tends_to_zero_at_one() {
    let root = IndexedRoot { poly: unit_circle(), root_number: 2 };
    let lim = float_cross_check(&root, &[], &num(1), Side::Below, Some(&num(-1)), |x| {
        (1.0 - x * x).sqrt()
    });
    assert_eq!(lim, ExtendedReal::Finite(num(0)));
    let near = 1.0f64 - 1e-14;
    assert!((lim.to_f64() - (1.0 - near * near).sqrt()).abs() < 1e-6);
}

#[test]
fn hyperbola_root_diverges_at_zero() {
    let hyperbola = poly(2, &[(&[1, 1], 1), (&[0, 0], -1)]);
    let root = IndexedRoot { poly: hyperbola, root_number: 1 };
    let lim = float_cross_check(&root, &[], &num(0), Side::Above, None, |x| 1.0 / x);
    assert_eq!(lim, ExtendedReal::PosInf);
}

#[test]
fn sphere_cap_tends_to_zero_at_the_equator() {
    // upper cap over the unit disc, approaching (0, 1) along y
    let root = IndexedRoot { poly: unit_sphere(), root_number: 2 };
    let lim = float_cross_check(&root, &[num(0)], &num(1), Side::Below, Some(&num(-1)), |y| {
        (1.0 - y * y).sqrt()
    });
    assert_eq!(lim, ExtendedReal::Finite(num(0)));
}

#[test]
fn limit_at_irrational_boundary() {
    // y = x^2 - 2 at x -> sqrt(2) from below tends to 0
    let p = poly(2, &[(&[0, 1], 1), (&[2, 0], -1), (&[0, 0], 2)]);
    let s2 = mincad_exact::isolate_real_roots(&mincad_exact::UPoly::from_i64(&[-2, 0, 1])).unwrap()[1]
        .clone();
    let root = IndexedRoot { poly: p, root_number: 1 };
    let lim = float_cross_check(&root, &[], &s2, Side::Below, Some(&num(0)), |x| x * x - 2.0);
    assert_eq!(lim, ExtendedReal::Finite(num(0)));
}

#[test]
fn crossing_lines_are_not_merged_at_the_crossing() {
    let (cad, ws) = built(&crossing_lines());
    let tree = ws.tree(&cad);
    let origin = Index::new(&[2]);
    assert_eq!(cad.level(1).len(), 3);
    assert!(!tree.reduction_applicable(&origin).unwrap());
    assert!(tree.enumerate_sites().is_empty());
}

/// For a level-2 sector `c` and a neighbouring section `d` of the same
/// stack, the limits of the sections over `c` as the base point tends to
/// `d` are ordered like the sections themselves.
fn limits_are_ordered(cad: &Cad, c: &Index, d: &Index) {
    let base = cad.cell(c).unwrap();
    let boundary = cad.cell(d).unwrap();
    let side = if d > c { Side::Below } else { Side::Above };
    let other = if d > c { c.shift(2, -1) } else { c.shift(2, 1) };
    let bound = other.and_then(|o| cad.cell(&o)).map(|o| o.sample[1].clone());
    let fixed = [base.sample[0].clone()];
    let target = &boundary.sample[1];
    let sections: Vec<_> = cad.stack(c).into_iter().filter(|s| s.index.is_even()).collect();
    let mut prev: Option<ExtendedReal> = None;
    for s in sections {
        let root = &s.bound.as_ref().unwrap().pieces[0].root;
        let lim = boundary_limit(root, &fixed, target, side, bound.as_ref(), &[]).unwrap().limit;
        if let Some(p) = &prev {
            assert_ne!(p.cmp(&lim), Ordering::Greater, "{c} towards {d}");
        }
        prev = Some(lim);
    }
}

#[test]
fn section_limits_form_ordered_segments() {
    for p in [sphere(), sphere_with_plane()] {
        let (cad, _) = built(&p);
        for (c, _) in cad.level(2).iter().filter(|(i, _)| i.is_odd()) {
            for d in [c.shift(2, -1), c.shift(2, 1)].into_iter().flatten() {
                if cad.cell(&d).is_some() {
                    limits_are_ordered(&cad, c, &d);
                }
            }
        }
    }
}
