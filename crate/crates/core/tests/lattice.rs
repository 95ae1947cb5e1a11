use std::collections::HashSet;

use proptest::prelude::*;
use rbm_decoder::{Chain, HomologyClass, Lattice};

fn chain_strategy(l: usize) -> impl Strategy<Value = Chain> {
    proptest::collection::vec(any::<bool>(), 2 * l * l).prop_map(Chain::from_bits)
}

fn lattice_and_two_chains() -> impl Strategy<Value = (Lattice, Chain, Chain)> {
    (2usize..9).prop_flat_map(|l| (Just(Lattice::new(l).unwrap()), chain_strategy(l), chain_strategy(l)))
}

/// A cycle from a plaquette subset plus a chosen logical class.
fn cycle_strategy() -> impl Strategy<Value = (Lattice, Chain, HomologyClass)> {
    (2usize..9).prop_flat_map(|l| {
        (
            Just(Lattice::new(l).unwrap()),
            proptest::collection::vec(any::<bool>(), l * l),
            0usize..4,
        )
            .prop_map(|(lat, plaquettes, class)| {
                let class = HomologyClass::from_index(class);
                let mut c = lat.logical_representative(class);
                for (i, _) in plaquettes.iter().enumerate().filter(|(_, &on)| on) {
                    let (x, y) = lat.vertex_at(i);
                    c.compose_in_place(&lat.plaquette_boundary(x, y)).unwrap();
                }
                (lat, c, class)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn syndrome_is_linear((lat, a, b) in lattice_and_two_chains()) {
        let lhs = lat.syndrome_of(&a.compose(&b).unwrap()).unwrap();
        let rhs = lat.syndrome_of(&a).unwrap().xor(&lat.syndrome_of(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn syndrome_has_even_weight((lat, a, _b) in lattice_and_two_chains()) {
        prop_assert_eq!(lat.syndrome_of(&a).unwrap().weight() % 2, 0);
    }

    #[test]
    fn homology_is_a_homomorphism((lat, c1, k1) in cycle_strategy(), seed in any::<u64>()) {
        prop_assert_eq!(lat.homology_class(&c1).unwrap(), k1);
        // second cycle on the same lattice
        let l = lat.size();
        let k2 = HomologyClass::from_index((seed % 4) as usize);
        let mut c2 = lat.logical_representative(k2);
        for i in 0..l * l {
            if seed >> (i % 60 + 2) & 1 == 1 {
                let (x, y) = lat.vertex_at(i);
                c2.compose_in_place(&lat.plaquette_boundary(x, y)).unwrap();
            }
        }
        prop_assert_eq!(lat.homology_class(&c1.compose(&c2).unwrap()).unwrap(), k1 ^ k2);
    }

    #[test]
    fn winding_does_not_depend_on_the_cut((lat, c, class) in cycle_strategy()) {
        for k in 0..lat.size() {
            prop_assert_eq!(lat.winding_x(&c, k), class.wx);
            prop_assert_eq!(lat.winding_y(&c, k), class.wy);
        }
    }
}

/// Span of all plaquette boundaries, by subset enumeration.
fn boundary_span(lat: &Lattice) -> HashSet<Vec<bool>> {
    let n = lat.n_vertices();
    (0u32..1 << n)
        .map(|mask| {
            let mut c = lat.empty_chain();
            for i in (0..n).filter(|i| mask >> i & 1 == 1) {
                let (x, y) = lat.vertex_at(i);
                c.compose_in_place(&lat.plaquette_boundary(x, y)).unwrap();
            }
            c.into_bits()
        })
        .collect()
}

#[test]
fn classification_matches_plaquette_reduction() {
    for l in [2, 3] {
        let lat = Lattice::new(l).unwrap();
        let span = boundary_span(&lat);
        assert_eq!(span.len(), 1 << (l * l - 1));
        let mut cycles = 0;
        for mask in 0u32..1 << lat.n_links() {
            let c = Chain::from_bits((0..lat.n_links()).map(|i| mask >> i & 1 == 1).collect());
            if !lat.syndrome_of(&c).unwrap().is_empty() {
                assert!(lat.homology_class(&c).is_err());
                continue;
            }
            cycles += 1;
            let matching: Vec<HomologyClass> = HomologyClass::ALL
                .into_iter()
                .filter(|&k| span.contains(c.compose(&lat.logical_representative(k)).unwrap().bits()))
                .collect();
            assert_eq!(matching.len(), 1, "cycle lies in exactly one coset");
            assert_eq!(lat.homology_class(&c).unwrap(), matching[0]);
        }
        assert_eq!(cycles, 1 << (l * l + 1));
    }
}
