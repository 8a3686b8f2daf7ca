use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclorb::builders::{disjoint_union, random_orbifold, RandomProfile};
use cyclorb::decide::{analyze, verify_additivity, verify_inertia_gauss_bonnet};
use cyclorb::format;
use cyclorb::inertia::{build_inertia, components_of};
use cyclorb::order::check_intersection_closure;
use cyclorb::{OrbifoldComplex, Rational, SimplexId, SimplicialComplex, ValidationMode};

fn profile(dim: usize) -> RandomProfile {
    if dim == 2 {
        RandomProfile::default()
    } else {
        RandomProfile::four_dim()
    }
}

/// Face closure of a set of simplices, computed by walking down facets.
fn closure(c: &SimplicialComplex, seeds: &[SimplexId]) -> Vec<SimplexId> {
    let mut keep = vec![false; c.len()];
    let mut stack: Vec<SimplexId> = seeds.to_vec();
    while let Some(s) = stack.pop() {
        if !std::mem::replace(&mut keep[s.index()], true) {
            stack.extend_from_slice(c.facets(s));
        }
    }
    c.ids().filter(|s| keep[s.index()]).collect()
}

/// χ_orb by direct summation over simplices, independent of the library's
/// grouped accumulation.
fn chi_orb_direct(oc: &OrbifoldComplex, subset: &[SimplexId]) -> Rational {
    subset
        .iter()
        .map(|&s| {
            let sign = if oc.complex().dim(s).is_multiple_of(2) { 1 } else { -1 };
            Rational::new(sign, oc.order(s) as i64)
        })
        .sum()
}

/// Additive order of `g` in `Z_m`.
fn element_order(g: u32, m: u32) -> u32 {
    (1..=m).find(|k| (k * g) % m == 0).unwrap_or(1)
}

/// A random face-closed cover: each maximal simplex goes to A, B or both.
fn random_cover(oc: &OrbifoldComplex, seed: u64) -> (Vec<SimplexId>, Vec<SimplexId>) {
    let c = oc.complex();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for s in c.maximal_simplices() {
        match rng.gen_range(0..3) {
            0 => a.push(s),
            1 => b.push(s),
            _ => {
                a.push(s);
                b.push(s);
            }
        }
    }
    (closure(c, &a), closure(c, &b))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn random_labelings_are_valid(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
        let oc = random_orbifold(seed, &profile(dim)).unwrap();
        let report = oc.validate(ValidationMode::Strict);
        prop_assert!(report.is_valid(), "{:?}", report.findings);
    }

    #[test]
    fn sector_sum_is_euler_characteristic(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
        let oc = random_orbifold(seed, &profile(dim)).unwrap();
        let gb = verify_inertia_gauss_bonnet(&oc).unwrap();
        prop_assert!(gb.holds);
        prop_assert_eq!(gb.chi, oc.complex().euler_characteristic());
    }

    #[test]
    fn components_partition_nodes(seed in any::<u64>()) {
        let oc = random_orbifold(seed, &profile(2)).unwrap();
        let inertia = build_inertia(&oc).unwrap();
        let comps = components_of(&oc).unwrap();
        let total: usize = comps.iter().map(|c| c.nodes.len()).sum();
        prop_assert_eq!(total, inertia.node_count());
        for c in &comps {
            prop_assert!(c.element_order_is_constant(&oc));
            // images are face closed
            prop_assert!(oc.complex().check_face_closed(&c.image).is_ok());
            // every edge stays inside one component
            for n in &c.nodes {
                for m in inertia.face_neighbors(*n) {
                    prop_assert!(c.contains(&m));
                }
            }
        }
        prop_assert!(comps[0].is_nontwisted);
    }

    #[test]
    fn additivity_on_random_covers(seed in any::<u64>(), cover in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
        let oc = random_orbifold(seed, &profile(dim)).unwrap();
        let (a, b) = random_cover(&oc, cover);
        let report = verify_additivity(&oc, &a, &b).unwrap();
        prop_assert!(report.holds);
        prop_assert_eq!(report.a, chi_orb_direct(&oc, &a));
        prop_assert_eq!(report.total, chi_orb_direct(&oc, &oc.complex().ids().collect::<Vec<_>>()));
    }

    #[test]
    fn plausible_inputs_are_consistent(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4])) {
        let oc = random_orbifold(seed, &profile(dim)).unwrap();
        let a = analyze(&oc).unwrap();
        if a.decision.plausibility.plausible {
            prop_assert!(a.decision.consistent, "counterexample at seed {}", seed);
        }
        prop_assert_eq!(a.decision.admits, a.decision.consistent && a.decision.condition_iii);
    }

    #[test]
    fn intersections_are_unions_of_images(seed in any::<u64>()) {
        let oc = random_orbifold(seed, &profile(2)).unwrap();
        let comps = components_of(&oc).unwrap();
        prop_assert!(check_intersection_closure(&oc, &comps).passes());
    }

    #[test]
    fn file_round_trip(seed in any::<u64>()) {
        let oc = random_orbifold(seed, &profile(2)).unwrap();
        let text = format::to_json(&oc);
        let back = format::parse_str(&text).unwrap();
        prop_assert_eq!(&back, &oc);
        prop_assert_eq!(format::to_json(&back), text);
    }

    #[test]
    fn restriction_composes_along_chains(seed in any::<u64>(), pick in any::<u64>()) {
        let oc = random_orbifold(seed, &profile(2)).unwrap();
        let c = oc.complex();
        let tops: Vec<SimplexId> = c.ids_of_dim(2).collect();
        let top = tops[(pick % tops.len() as u64) as usize];
        let m = oc.order(top);
        for g in 0..m {
            let direct = |face: SimplexId| oc.restrict_element(top, face, g).unwrap();
            // edge then vertex agrees with the direct restriction
            for (j, &edge) in c.facets(top).iter().enumerate() {
                let via_edge = oc.restrict_element(top, edge, g).unwrap();
                for &vertex in c.facets(edge) {
                    prop_assert_eq!(oc.restrict_element(edge, vertex, via_edge).unwrap(), direct(vertex));
                }
                prop_assert_eq!(via_edge, direct(edge), "facet {}", j);
            }
        }
    }

    #[test]
    fn restriction_preserves_element_order(seed in any::<u64>(), pick in any::<u64>()) {
        let oc = random_orbifold(seed, &profile(4)).unwrap();
        let c = oc.complex();
        let s = SimplexId((pick % c.len() as u64) as u32);
        let m = oc.order(s);
        for face in c.ids().filter(|&f| c.is_face(f, s)) {
            for g in 0..m {
                let h = oc.restrict_element(s, face, g).unwrap();
                prop_assert_eq!(element_order(g, m), element_order(h, oc.order(face)));
            }
        }
    }

    #[test]
    fn disjoint_union_adds(a in any::<u64>(), b in any::<u64>()) {
        let x = random_orbifold(a, &profile(2)).unwrap();
        let y = random_orbifold(b, &profile(2)).unwrap();
        let u = disjoint_union(&x, &y);
        prop_assert_eq!(u.euler_satake(), x.euler_satake() + y.euler_satake());
        prop_assert_eq!(u.euler_characteristic(), x.euler_characteristic() + y.euler_characteristic());
        let chis = |oc: &OrbifoldComplex| {
            let mut v: Vec<String> = components_of(oc).unwrap().iter().map(|c| format!("{} {} {}", c.element_order, c.chi, c.chi_orb)).collect();
            v.sort();
            v
        };
        let mut both = chis(&x);
        both.extend(chis(&y));
        both.sort();
        prop_assert_eq!(chis(&u), both);
    }

    #[test]
    fn subdivision_keeps_invariants(seed in any::<u64>()) {
        let oc = random_orbifold(seed, &RandomProfile { dim: 2, max_vertices: 12, max_order: 6 }).unwrap();
        let sd = oc.barycentric_subdivide();
        prop_assert!(sd.validate(ValidationMode::Strict).is_valid());
        prop_assert_eq!(sd.euler_satake(), oc.euler_satake());
        prop_assert_eq!(sd.euler_characteristic(), oc.euler_characteristic());
        let (a, b) = (analyze(&oc).unwrap(), analyze(&sd).unwrap());
        prop_assert_eq!(a.components.len(), b.components.len());
        prop_assert_eq!(a.decision.verdict, b.decision.verdict);
    }
}

#[test]
fn generator_is_deterministic() {
    for seed in 0..20 {
        assert_eq!(random_orbifold(seed, &profile(2)).unwrap(), random_orbifold(seed, &profile(2)).unwrap());
        assert_eq!(random_orbifold(seed, &profile(4)).unwrap(), random_orbifold(seed, &profile(4)).unwrap());
    }
}

#[test]
fn generator_covers_twisted_and_reduced_cases() {
    let (mut twisted, mut nonreduced, mut plausible) = (0, 0, 0);
    for seed in 0..100 {
        let oc = random_orbifold(seed, &profile(2)).unwrap();
        if components_of(&oc).unwrap().len() > 1 {
            twisted += 1;
        }
        if !oc.is_reduced() {
            nonreduced += 1;
        }
        if analyze(&oc).unwrap().decision.plausibility.plausible {
            plausible += 1;
        }
    }
    assert!(twisted > 20 && nonreduced > 0 && plausible > 20, "{twisted} {nonreduced} {plausible}");
}
