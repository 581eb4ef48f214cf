use std::collections::BTreeSet;

use gmodel::base::Base;
use gmodel::correspondence::{Correspondence, Edge, Path};
use gmodel::document::{parse, serialize, Instance};
use gmodel::fixtures;
use gmodel::groupoid::{FiniteGroupoid, ObjectId};
use gmodel::islice::{self, IsElement};
use gmodel::model::{self, Applied};
use gmodel::pathspace::{self, AmnElement};
use gmodel::rep;
use gmodel::report::{read_records, write_records, Record};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn structured() -> Vec<Correspondence> {
    vec![fixtures::o_n(2), fixtures::odometer(), fixtures::exel_pardo(), fixtures::groupoid_swap(), fixtures::singular_graph()]
}

fn random_graph(n: usize, edges: &[(usize, usize)]) -> Correspondence {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let base = Base::Finite(FiniteGroupoid::set_groupoid(&names).unwrap());
    let edges = edges
        .iter()
        .enumerate()
        .map(|(i, &(s, r))| Edge { name: format!("e{i}"), src: ObjectId(s % n), rng: ObjectId(r % n) })
        .collect();
    Correspondence::graph(base, edges)
}

fn paths_up_to(c: &Correspondence, n: usize) -> Vec<Path> {
    (0..=n).flat_map(|k| c.paths_of_length(k)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn report_round_trip(
        kind in "[a-z][a-z_]{0,8}",
        fields in prop::collection::vec(("[a-z][a-z0-9_]{0,6}", any::<String>()), 0..5),
    ) {
        let mut r = Record::new(&kind);
        for (k, v) in &fields {
            r = r.with(k, v);
        }
        let text = write_records(std::slice::from_ref(&r));
        prop_assert_eq!(text.lines().count(), 1);
        prop_assert_eq!(read_records(&text).unwrap(), vec![r]);
    }

    #[test]
    fn graph_documents_round_trip(
        n in 1usize..5,
        edges in prop::collection::vec((0usize..5, 0usize..5), 0..7),
        keep in prop::collection::vec(any::<bool>(), 5),
        depth in prop::option::of(1usize..9),
    ) {
        let c = random_graph(n, &edges);
        let mut inst = Instance::new(c);
        let r: BTreeSet<ObjectId> = (0..n).filter(|&i| keep[i]).map(ObjectId).collect();
        inst.regular = Some(r);
        inst.parameters.depth = depth;
        let text = serialize(&inst);
        let back = parse(&text).unwrap();
        prop_assert_eq!(serialize(&back), text);
        prop_assert_eq!(back, inst);
    }

    #[test]
    fn boundary_counts_split_by_level(
        n in 1usize..5,
        edges in prop::collection::vec((0usize..5, 0usize..5), 0..7),
        depth in 1usize..5,
    ) {
        let c = random_graph(n, &edges);
        let r = c.properness().regular;
        let bt = pathspace::build_boundary(&c, &r, depth).unwrap();
        let pts = bt.points();
        for p in pts {
            prop_assert!(p.len() == depth || !r.contains(&c.path_src(p)));
        }
        let top = pts.iter().filter(|p| p.len() == depth).count();
        prop_assert_eq!(top, c.paths_of_length(depth).len());
        let short: usize = (0..depth).map(|k| c.paths_of_length(k).iter().filter(|p| !r.contains(&c.path_src(p))).count()).sum();
        prop_assert_eq!(pts.len(), top + short);
    }

    #[test]
    fn multiplication_is_associative_and_star_reverses(fix in 0usize..5, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let c = &structured()[fix];
        let els = islice::bounded_elements(c, 2, 1);
        let (s, t, u) = (i.get(&els), j.get(&els), k.get(&els));
        let st = islice::multiply(c, s, t);
        prop_assert_eq!(islice::multiply(c, &st, u), islice::multiply(c, s, &islice::multiply(c, t, u)));
        prop_assert_eq!(islice::adjoint(c, &st), islice::multiply(c, &islice::adjoint(c, t), &islice::adjoint(c, s)));
        prop_assert!(islice::leq(c, &islice::multiply(c, s, &islice::multiply(c, &islice::adjoint(c, s), s)), s));
    }

    #[test]
    fn germ_action_is_a_homomorphism(fix in 0usize..5, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), w in any::<prop::sample::Index>()) {
        // finite paths are exact points of Ω(∅)
        let c = &structured()[fix];
        let depth = 20;
        let els = islice::bounded_elements(c, 2, 1);
        let (s, t) = (i.get(&els), j.get(&els));
        let omegas = paths_up_to(c, 4);
        let omega = w.get(&omegas);
        let st = islice::multiply(c, s, t);
        let direct = model::germ_apply(c, &st, omega, depth);
        let composed = match model::germ_apply(c, t, omega, depth) {
            Applied::Point(p) => model::germ_apply(c, s, &p, depth),
            other => other,
        };
        let formal_one = matches!(s, IsElement::One) || matches!(t, IsElement::One);
        if !formal_one {
            prop_assert_eq!(direct, composed);
        }
    }

    #[test]
    fn amn_product_is_pointwise_on_characters(fix in 0usize..5, m in 0usize..3, seed in any::<u64>()) {
        let c = &structured()[fix];
        let om = pathspace::build_omega(c, m, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = AmnElement::random(&om, &mut rng);
        let b = AmnElement::random(&om, &mut rng);
        let ab = a.multiply(&b).unwrap();
        for x in pathspace::characters(c, m, 3).unwrap() {
            prop_assert_eq!(x.eval(&ab), x.eval(&a) * x.eval(&b));
        }
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn generators_are_partial_permutations(fix in 0usize..5, n in 1usize..4, boundary in any::<bool>()) {
        let c = &structured()[fix];
        let gens = if boundary {
            rep::boundary_generators(c, &c.properness().regular, n, 2).unwrap()
        } else {
            rep::fock_generators(c, n, 2).unwrap()
        };
        let all = gens.edges.iter().map(|x| &x.1).chain(gens.arrows.iter().map(|x| &x.1)).chain(gens.points.iter().map(|x| &x.1));
        for m in all {
            prop_assert!(m.is_partial_perm());
            prop_assert_eq!(&m.transpose().transpose(), m);
        }
    }
}
