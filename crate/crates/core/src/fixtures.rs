//! Standard small instances used by tests, the corpus and the CLI.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::base::{Arrow, Base};
use crate::correspondence::{Correspondence, Edge, EdgeId};
use crate::groupoid::{ArrowRecord, FiniteGroupoid, ObjectId};
use crate::presented::{Normalization, PresentedGroup};

fn vertices(names: &[&str]) -> Base {
    Base::Finite(FiniteGroupoid::set_groupoid(names).expect("distinct names"))
}

fn edge(base: &Base, name: &str, src: &str, rng: &str) -> Edge {
    Edge {
        name: name.to_string(),
        src: base.object_index(src).expect("known vertex"),
        rng: base.object_index(rng).expect("known vertex"),
    }
}

fn graph(names: &[&str], edges: &[(&str, &str, &str)]) -> Correspondence {
    let base = vertices(names);
    let edges = edges.iter().map(|&(n, s, r)| edge(&base, n, s, r)).collect();
    Correspondence::graph(base, edges)
}

/// One vertex with `n` loops. Edges are named `a`, `b`, ... for `n <= 26`.
pub fn o_n(n: usize) -> Correspondence {
    let names: Vec<String> = (0..n)
        .map(|i| if n <= 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") })
        .collect();
    let edges: Vec<(&str, &str, &str)> = names.iter().map(|s| (s.as_str(), "v", "v")).collect();
    graph(&["v"], &edges)
}

/// `v <- w` via a single edge `e1`.
pub fn single_edge() -> Correspondence {
    graph(&["v", "w"], &[("e1", "w", "v")])
}

pub fn single_loop() -> Correspondence {
    graph(&["v"], &[("e", "v", "v")])
}

/// Vertices `u, v, w`: a loop `a` at `v`, `b: v <- w`, `c: u <- v`. `w` receives no edge.
pub fn singular_graph() -> Correspondence {
    graph(&["u", "v", "w"], &[("a", "v", "v"), ("b", "w", "v"), ("c", "v", "u")])
}

/// Two-cycle `v <-> w` plus a leaf `l` feeding `w`.
pub fn two_cycle_leaf() -> Correspondence {
    graph(&["v", "w", "l"], &[("f", "w", "v"), ("g", "v", "w"), ("h", "l", "w")])
}

fn z_group() -> PresentedGroup {
    PresentedGroup::new(vec!["z".to_string()], Normalization::Free)
}

fn odometer_with(z1: &str) -> Correspondence {
    let g = z_group();
    let base = Base::Presented(g.clone());
    let edges = vec![edge(&base, "0", "o", "o"), edge(&base, "1", "o", "o")];
    let w = |s: &str| Arrow::Word(g.parse_word(s).expect("word"));
    let mut rows = BTreeMap::new();
    rows.insert((w("z"), EdgeId(0)), (EdgeId(1), w("e")));
    rows.insert((w("z"), EdgeId(1)), (EdgeId(0), w(z1)));
    rows.insert((w("z^-1"), EdgeId(0)), (EdgeId(1), w("z^-1")));
    rows.insert((w("z^-1"), EdgeId(1)), (EdgeId(0), w("e")));
    Correspondence::new(base, edges, rows)
}

/// The binary adding machine: `Z` acting on `{0,1}` paths by carry propagation.
pub fn odometer() -> Correspondence {
    odometer_with("z")
}

/// The odometer with `z|_1` replaced by `e`. The inverse rows are kept, which exposes the
/// cocycle failure.
pub fn broken_odometer() -> Correspondence {
    odometer_with("e")
}

fn cyclic(n: usize) -> FiniteGroupoid {
    let names: Vec<String> = (0..n).map(|i| if i == 0 { "e".into() } else { format!("r{i}") }).collect();
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    FiniteGroupoid::group(&names, &table).expect("cyclic group")
}

/// `Z/3` rotating three loops `a -> b -> c -> a` with `r|_a = e`, `r|_b = r1`, `r|_c = r2`.
pub fn exel_pardo() -> Correspondence {
    let base = Base::Finite(cyclic(3));
    let edges = vec![edge(&base, "a", "o", "o"), edge(&base, "b", "o", "o"), edge(&base, "c", "o", "o")];
    let mut rows = BTreeMap::new();
    for k in 1..3usize {
        for x in 0..3usize {
            // r^k moves x to x+k; r|_x = r^x, so the restrictions multiply to e around the cycle
            let restr: usize = (0..k).map(|i| (x + i) % 3).sum();
            rows.insert((Arrow::Index(k), EdgeId(x)), (EdgeId((x + k) % 3), Arrow::Index(restr % 3)));
        }
    }
    Correspondence::new(base, edges, rows)
}

/// Two objects `u, w` joined by `t: u -> w`, with one loop over each object swapped by `t`.
pub fn groupoid_swap() -> Correspondence {
    let objects = vec!["u".to_string(), "w".to_string()];
    let arrows = vec![
        ArrowRecord { name: "1u".into(), src: ObjectId(0), rng: ObjectId(0) },
        ArrowRecord { name: "1w".into(), src: ObjectId(1), rng: ObjectId(1) },
        ArrowRecord { name: "t".into(), src: ObjectId(0), rng: ObjectId(1) },
        ArrowRecord { name: "ti".into(), src: ObjectId(1), rng: ObjectId(0) },
    ];
    let compose: HashMap<(usize, usize), usize> = [
        ((0, 0), 0),
        ((1, 1), 1),
        ((2, 0), 2),
        ((1, 2), 2),
        ((3, 1), 3),
        ((0, 3), 3),
        ((3, 2), 0),
        ((2, 3), 1),
    ]
    .into_iter()
    .collect();
    let g = FiniteGroupoid::from_tables(objects, arrows, compose, vec![Some(0), Some(1), Some(3), Some(2)], vec![Some(0), Some(1)])
        .expect("distinct names");
    let base = Base::Finite(g);
    let edges = vec![edge(&base, "x", "u", "u"), edge(&base, "y", "w", "w")];
    let mut rows = BTreeMap::new();
    rows.insert((Arrow::Index(2), EdgeId(0)), (EdgeId(1), Arrow::Index(2)));
    rows.insert((Arrow::Index(3), EdgeId(1)), (EdgeId(0), Arrow::Index(3)));
    Correspondence::new(base, edges, rows)
}

/// Every valid fixture with its name.
pub fn all() -> Vec<(&'static str, Correspondence)> {
    vec![
        ("o2", o_n(2)),
        ("o3", o_n(3)),
        ("single-edge", single_edge()),
        ("single-loop", single_loop()),
        ("singular", singular_graph()),
        ("two-cycle-leaf", two_cycle_leaf()),
        ("odometer", odometer()),
        ("exel-pardo", exel_pardo()),
        ("groupoid-swap", groupoid_swap()),
    ]
}

/// Vertices with nonempty fibre: the largest regularity set for a graph.
pub fn regular_set(c: &Correspondence) -> BTreeSet<ObjectId> {
    c.properness().regular
}

pub fn set_of(c: &Correspondence, names: &[&str]) -> BTreeSet<ObjectId> {
    names.iter().map(|n| c.base().object_index(n).expect("known vertex")).collect()
}
