//! Structural invariants over randomly generated inputs.

mod common;

use std::sync::Arc;

use common::*;
use novtel::cascade::{deform_complex, synth_increment};
use novtel::complexes::{FilteredComplex, GappedMap};
use novtel::doc::{complex_doc, complex_from_doc, gcw_doc, gcw_from_doc, Document};
use novtel::gcw::{product, quotient_complex, sphere_model, validate_gcw};
use novtel::homology::barcode;
use novtel::novikov::Valuation;
use novtel::telescope::{build_telescope, build_z2_telescope, is_homotopy};
use novtel::Energy;
use proptest::prelude::*;
use rand::Rng;

fn quick() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

/// A random diagram with every stage and map deformed at gap `ħ`.
fn gapped_diagram(seed: u64, gap: Energy) -> (Vec<Arc<FilteredComplex>>, Vec<GappedMap>, usize) {
    let mut rng = rng(seed);
    let len = rng.gen_range(2..=4);
    let (stages, maps) = random_diagram(&mut rng, len, 6);
    let deformed: Vec<_> = stages.iter().map(|c| deform_complex(c, gap, rng.gen()).unwrap()).collect();
    let connecting =
        maps.iter().enumerate().map(|(n, f)| synth_increment(&deformed[n], &deformed[n + 1], f, gap, rng.gen()).unwrap()).collect();
    (deformed.iter().map(|s| s.deformation.clone()).collect(), connecting, len)
}

proptest! {
    #![proptest_config(quick())]

    #[test]
    fn gapped_telescope_is_a_gapped_complex(seed in any::<u64>(), denom in 1i64..=4) {
        let gap = Energy::new(1, denom);
        let (stages, maps, _) = gapped_diagram(seed, gap);
        let tel = build_telescope(stages, maps).unwrap();
        prop_assert!(tel.assembled().validate().is_valid());
        prop_assert!(tel.gap() >= Valuation::Finite(gap));
    }

    #[test]
    fn stage_inclusions_commute_up_to_the_q_homotopy(seed in any::<u64>()) {
        let (stages, maps, len) = gapped_diagram(seed, Energy::new(1, 2));
        let tel = build_telescope(stages, maps).unwrap();
        for n in 0..len - 1 {
            let later = tel.inclusion(n + 1).unwrap().compose(&tel.connecting()[n]).unwrap();
            prop_assert!(is_homotopy(&tel.q_homotopy(n).unwrap(), &later, &tel.inclusion(n).unwrap()).unwrap());
        }
    }

    #[test]
    fn telescope_bar_reduction_is_the_bar_telescope(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let (stages, maps) = random_diagram(&mut rng, 3, 6);
        let tel = build_z2_telescope(&stages, &maps).unwrap();
        let bar = tel.assembled().bar_reduce().unwrap();
        prop_assert!(bar.violations().is_empty());
        // a finite telescope retracts onto its last stage
        prop_assert_eq!(z2_betti(&bar, -1, 3), z2_betti(&stages[2], -1, 3));
    }

    #[test]
    fn barcode_is_invariant_under_gapped_change_of_basis(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_gdcf(&mut rng, 10);
        let (p, p_inv) = random_gapped_unipotent(&c, Energy::new(1, 2), &mut rng);
        let d = p.mul(c.differential()).unwrap().mul(&p_inv).unwrap();
        let moved = FilteredComplex::new(c.generators().to_vec(), d, None).unwrap();
        prop_assert_eq!(barcode(&c).unwrap(), barcode(&moved).unwrap());
    }

    #[test]
    fn infinite_bars_give_the_euler_characteristic(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_gdcf(&mut rng, 12);
        let bars = barcode(&c).unwrap();
        let chi: i64 = (0..=2).map(|k| (1 - 2 * (k % 2)) as i64 * bars.infinite_count(k) as i64).sum();
        let euler: i64 = c.generators().iter().map(|g| 1 - 2 * (g.degree.rem_euclid(2) as i64)).sum();
        prop_assert_eq!(chi, euler);
    }

    #[test]
    fn sphere_products_satisfy_kunneth(a in 0usize..4, b in 0usize..4) {
        let (sa, sb) = (sphere_model(2, a).unwrap(), sphere_model(2, b).unwrap());
        let p = product(&sa, &sb).unwrap();
        prop_assert!(validate_gcw(&p).violations.is_empty());
        prop_assert!(p.is_free());
        let top = (a + b) as i32;
        let betti = |n: usize, k: i32| usize::from(k == 0) + usize::from(k == n as i32);
        let want: Vec<usize> = (0..=top).map(|k| (0..=k).map(|i| betti(a, i) * betti(b, k - i)).sum()).collect();
        prop_assert_eq!(z2_betti(p.complex(), 0, top), want);
        let q = quotient_complex(&p).unwrap();
        prop_assert_eq!(z2_betti(&q.complex, 0, top), oracle_quotient_betti(&p, 0, top));
    }

    #[test]
    fn odd_lens_spheres_are_free(m in 2usize..6, n in 0usize..3) {
        let s = sphere_model(m, 2 * n + 1).unwrap();
        prop_assert!(s.is_free());
        prop_assert!(validate_gcw(&s).violations.is_empty());
        // S^{2n+1}/Z_m has the Z/2 homology of a lens space
        let even = m % 2 == 0;
        let want: Vec<usize> = (0..=2 * n as i32 + 1).map(|k| usize::from(k == 0 || k == 2 * n as i32 + 1 || even)).collect();
        prop_assert_eq!(oracle_quotient_betti(&s, 0, 2 * n as i32 + 1), want);
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let c = random_gdcf(&mut rng, 8);
        let text = complex_doc(&c).unwrap().to_pretty();
        let back = complex_from_doc(&text.parse::<Document>().unwrap()).unwrap();
        prop_assert_eq!(back, c);
        let s = sphere_model(2, rng.gen_range(0..4)).unwrap();
        let text = gcw_doc(&s).unwrap().to_pretty();
        let back = gcw_from_doc(&text.parse::<Document>().unwrap()).unwrap();
        prop_assert_eq!(back.complex(), s.complex());
        prop_assert_eq!(back.action(), s.action());
    }
}
