//! Property suites: arithmetic round trips in extension towers, the
//! resultant/gcd and discriminant/squarefree equivalences, invariance
//! properties of the characteristic, and the split-resolution law for
//! inversion.

mod common;

use common::Rng;
use proptest::prelude::*;
use singcurve::branch::{characteristic, Branch};
use singcurve::semigroup::{char_from_semigroup, semigroup_of};
use singcurve::series::{PuiseuxExpansion, SeriesMap, Trunc};
use singcurve::tower::{resolve_splits, Decide, Elem, Tower, TryInvert};
use singcurve::upoly::{discriminant, resultant, squarefree_part, UniPoly};

fn small_poly_strategy(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    proptest::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_filter_map(
        "nonzero polynomial",
        |coeffs| {
            let p = UniPoly::from_ints(&coeffs);
            if p.is_zero() {
                None
            } else {
                Some(p)
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_vanishes_iff_common_factor(f in small_poly_strategy(4), g in small_poly_strategy(4)) {
        let t = Tower::base();
        prop_assume!(!f.is_zero() && !g.is_zero());
        let r = resultant(&t, &f, &g).unwrap();
        let gc = f.gcd(&t, &g).unwrap();
        let common = !gc.is_zero() && gc.degree() >= 1;
        prop_assert_eq!(r.is_zero(), common);
    }

    #[test]
    fn discriminant_vanishes_iff_not_squarefree(f in small_poly_strategy(5)) {
        let t = Tower::base();
        prop_assume!(f.degree() >= 1);
        let d = discriminant(&t, &f).unwrap();
        let sf = squarefree_part(&t, &f).unwrap();
        let repeated = sf.degree() < f.degree();
        prop_assert_eq!(d.is_zero(), repeated);
    }

    #[test]
    fn characteristic_depends_only_on_support(
        coeffs1 in proptest::collection::vec(1i64..=9, 3),
        coeffs2 in proptest::collection::vec(1i64..=9, 3),
    ) {
        // fixed support {6, 7, 9} over m = 4, arbitrary nonzero values
        let build = |cs: &[i64]| {
            let terms: SeriesMap = [(6u32, Elem::from_int(cs[0])), (7, Elem::from_int(cs[1])), (9, Elem::from_int(cs[2]))]
                .into_iter()
                .collect();
            Branch {
                expansion: PuiseuxExpansion::new(4, terms, Trunc::Exact),
                swapped: false,
                input_frame: None,
                source: None,
            }
        };
        let c1 = characteristic(&build(&coeffs1)).unwrap();
        let c2 = characteristic(&build(&coeffs2)).unwrap();
        prop_assert_eq!(c1, c2);
    }
}

#[test]
fn tower_arithmetic_round_trips() {
    // (a + b) - b = a and (a * b) / b = a across randomized elements of a
    // two-level tower
    let mut rng = Rng::new(0x5eed_1001);
    resolve_splits(|s| {
        let w = s.adjoin_root(&[Elem::from_int(1), Elem::from_int(1), Elem::from_int(1)])?;
        let r2 = s.adjoin_root(&[s.tower.neg(&w), Elem::zero(), Elem::one()])?;
        let t = s.tower.clone();
        let random_elem = |rng: &mut Rng| {
            let mut acc = Elem::from_int(rng.range(0, 6) as i64 - 3);
            let parts = [w.clone(), r2.clone(), t.mul(&w, &r2)];
            for p in &parts {
                let c = Elem::from_int(rng.range(0, 6) as i64 - 3);
                acc = t.add(&acc, &t.mul(&c, p));
            }
            acc
        };
        for _ in 0..40 {
            let a = random_elem(&mut rng);
            let b = random_elem(&mut rng);
            let sum = t.add(&a, &b);
            assert_eq!(t.sub(&sum, &b), a, "(a+b)-b = a");
            if !b.is_zero() {
                if let Ok(Decide::Unit(binv)) = t.decide(&b) {
                    let prod = t.mul(&a, &b);
                    assert_eq!(t.mul(&prod, &binv), a, "(a*b)/b = a");
                }
            }
        }
        Ok(())
    })
    .unwrap();
}

/// Resolve an element against a tower, walking every split component, and
/// check e * e^{-1} = 1 in each surviving component where e is nonzero.
#[test]
fn inversion_resolves_in_every_component() {
    fn resolve_all(t: &Tower, e: &Elem, depth: usize) {
        assert!(depth < 16, "split cascade too deep");
        match t.try_invert(e).unwrap() {
            TryInvert::ZeroElement => {}
            TryInvert::Inverse(inv) => {
                assert!(t.mul(e, &inv).is_one(), "inverse in component fails");
            }
            TryInvert::Split { zero_part, unit_part } => {
                let ez = zero_part.project_elem(e);
                resolve_all(&zero_part, &ez, depth + 1);
                let eu = unit_part.project_elem(e);
                resolve_all(&unit_part, &eu, depth + 1);
            }
        }
    }
    // a tower with plenty of zero divisors: roots of T^2-1 and T^3-T
    let t = Tower::base();
    let (t1, a) = t.adjoin_root(&[
        Elem::from_int(0),
        Elem::from_int(-1),
        Elem::zero(),
        Elem::one(),
    ])
    .unwrap(); // root of T^3 - T (squarefree, very reducible)
    let one = Elem::one();
    let candidates = [
        a.clone(),
        t1.sub(&a, &one),
        t1.add(&a, &one),
        t1.add(&t1.mul(&a, &a), &Elem::from_int(-1)),
        t1.mul(&Elem::from_int(2), &a),
    ];
    for e in &candidates {
        resolve_all(&t1, e, 0);
    }
}

#[test]
fn semigroup_char_round_trip_on_random_range() {
    let mut rng = Rng::new(0x5eed_1002);
    let chars = common::enumerate_characteristics(10, 60);
    for _ in 0..200 {
        let c = &chars[rng.below(chars.len() as u64) as usize];
        let s = semigroup_of(c);
        let back = char_from_semigroup(&s.generators).unwrap();
        assert_eq!(&back, c, "round trip through the semigroup");
    }
}

#[test]
fn characteristic_invariant_under_conjugation() {
    // all m-th roots of unity for small m
    resolve_splits(|s| {
        let exp = PuiseuxExpansion::new(
            4,
            [(6u32, Elem::from_int(1)), (7, Elem::from_int(2))].into_iter().collect(),
            Trunc::Exact,
        );
        let zeta = singcurve::contact::primitive_root_of_unity(s, 4)?;
        let b0 = Branch::from_expansion(s, &exp, 64)?;
        let c0 = characteristic(&b0)?;
        for k in 0..4u64 {
            let z = s.tower.pow(&zeta, k);
            let conj = exp.conjugate(&s.tower, &z);
            let b = Branch::from_expansion(s, &conj, 64)?;
            assert_eq!(characteristic(&b)?, c0);
        }
        Ok(())
    })
    .unwrap();
}

#[test]
fn doubling_family_full_stack() {
    // the family (2^n; 2^(n-1)*3, ..., 3^n) has genus n; run the whole
    // invariant stack on n = 2 and n = 3 and check internal consistency
    use singcurve::knot::{
        alexander_symbol, alexander_symbol_by_cabling, cabling_invariants, char_from_alexander,
        cyclotomic_form, expand_symbol,
    };
    for (m, betas) in [(4u64, vec![6u64, 9]), (8, vec![12, 18, 27])] {
        let c = singcurve::branch::PuiseuxChar::new(m, betas.clone()).unwrap();
        assert_eq!(c.genus(), betas.len());
        let s = semigroup_of(&c);
        // symmetric semigroup: twice the gap count is the conductor
        assert_eq!(2 * s.delta, s.conductor);
        assert_eq!(char_from_semigroup(&s.generators).unwrap(), c);
        let sym = alexander_symbol(&c);
        assert_eq!(sym, alexander_symbol_by_cabling(&c).unwrap());
        assert_eq!(char_from_alexander(&sym).unwrap(), c);
        let p = expand_symbol(&sym).unwrap();
        // the Alexander polynomial degree equals the conductor
        assert_eq!(p.degree() as u64, s.conductor);
        let total: u64 = cyclotomic_form(&sym)
            .unwrap()
            .iter()
            .map(|&(d, mult)| singcurve::intpoly::totient(d) * mult)
            .sum();
        assert_eq!(total as usize, p.degree());
        // one cabling pair per characteristic exponent, all coprime
        let pairs = cabling_invariants(&c).pairs;
        assert_eq!(pairs.len(), c.genus());
        for (p, q) in pairs {
            assert!(p >= 2);
            assert_eq!(num_integer::gcd(p, q), 1);
        }
    }
    // golden numbers for the genus-3 member
    let c = singcurve::branch::PuiseuxChar::new(8, vec![12, 18, 27]).unwrap();
    assert_eq!(c.beta_bars, vec![8, 12, 30, 69]);
    assert_eq!(semigroup_of(&c).frobenius(), 103);
}

#[test]
fn vanishing_to_truncation_on_random_curves() {
    let mut rng = Rng::new(0x5eed_1003);
    for _ in 0..6 {
        // random small bivariate f through the origin
        let mut terms = Vec::new();
        let n = rng.range(3, 5);
        for _ in 0..n {
            let i = rng.below(4) as u32;
            let j = rng.below(4) as u32;
            if i == 0 && j == 0 {
                continue;
            }
            terms.push(((i, j), Elem::from_int(rng.range(1, 5) as i64 - 2)));
        }
        let f = singcurve::bipoly::BiPoly::from_terms(terms);
        if f.is_zero() || !f.coeff(0, 0).is_zero() {
            continue;
        }
        let order = 9u32;
        let _ = resolve_splits(|s| {
            let out = match singcurve::newton::expand(s, &f, order) {
                Ok(o) => o,
                Err(singcurve::error::Error::InvalidInput(_)) => return Ok(()),
                Err(e) => return Err(e),
            };
            for sol in &out.solutions {
                let x: SeriesMap = [(sol.ram_index, Elem::one())].into_iter().collect();
                let cap = order * sol.ram_index;
                let val = f.eval_series(&s.tower, &x, &sol.terms, cap);
                let min = val.keys().next().copied();
                assert!(
                    min.is_none_or(|k| k > cap.saturating_sub(sol.ram_index)),
                    "expansion of {f:?} fails vanishing-to-truncation: {min:?}"
                );
            }
            Ok(())
        });
    }
}
