//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits nonzero when a
//! criterion fails that is not listed in `KNOWN_RED`.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use gmodel::actions::{self, samples, AuditStatus, Condition, FiniteAction};
use gmodel::base::{Arrow, Base};
use gmodel::correspondence::{Correspondence, EdgeId, Path};
use gmodel::fixtures;
use gmodel::groupoid::{FiniteGroupoid, ObjectId};
use gmodel::islice::{self, IsElement, OracleVariant};
use gmodel::model;
use gmodel::pathspace::{self, AmnElement};
use gmodel::rep::{self, BasisKind};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that cannot be met as stated; see the project notes.
const KNOWN_RED: &[usize] = &[2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// 1 ------------------------------------------------------------------------------------

/// Paths as `(range, edges)` built straight from the edge list.
fn direct_points(c: &Correspondence, n: usize) -> BTreeSet<(usize, Vec<usize>)> {
    let edges = c.edges();
    let receives: BTreeSet<usize> = edges.iter().map(|e| e.rng.0).collect();
    let mut out = BTreeSet::new();
    let mut level: Vec<(usize, Vec<usize>, usize)> = (0..c.base().num_objects()).map(|v| (v, vec![], v)).collect();
    for k in 0..=n {
        for (rng, es, src) in &level {
            if k == n || !receives.contains(src) {
                out.insert((*rng, es.clone()));
            }
        }
        let mut next = Vec::new();
        for (rng, es, src) in &level {
            for (i, e) in edges.iter().enumerate() {
                if e.rng.0 == *src {
                    let mut es = es.clone();
                    es.push(i);
                    next.push((*rng, es, e.src.0));
                }
            }
        }
        level = next;
    }
    out
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for (name, c) in [("single-loop", fixtures::single_loop()), ("o2", fixtures::o_n(2)), ("singular", fixtures::singular_graph())] {
        let r = c.properness().regular;
        for n in 1..=6 {
            let bt = pathspace::build_boundary(&c, &r, n).unwrap();
            let got: BTreeSet<(usize, Vec<usize>)> =
                bt.points().iter().map(|p| (p.rng().0, p.edges().iter().map(|e| e.0).collect())).collect();
            if got.len() != bt.points().len() || got != direct_points(&c, n) {
                return outcome(false, format!("{name} at n = {n}"));
            }
            checked += got.len();
        }
    }
    outcome(true, format!("3 graphs, n = 1..6, {checked} points match"))
}

// 2 ------------------------------------------------------------------------------------

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, c) in [("o2", fixtures::o_n(2)), ("odometer", fixtures::odometer())] {
        let gens = rep::fock_generators(&c, 4, 3).unwrap();
        let rr = rep::check_toeplitz_relations(&c, &gens).unwrap();
        pass &= rr.passed() && rr.instances >= 200;
        parts.push(format!(
            "{name}: {} identities, {} instances, {} failures",
            rr.identities,
            rr.instances,
            rr.failures.len()
        ));
    }
    outcome(pass, parts.join("; ") + " (at least 200 instances required per fixture)")
}

// 3 ------------------------------------------------------------------------------------

fn criterion_3() -> Outcome {
    let n = 3;
    let mut vertices = 0;
    for (name, c) in fixtures::all() {
        let r = fixtures::regular_set(&c);
        let fock = rep::fock_generators(&c, n, 2).unwrap();
        let bdry = rep::boundary_generators(&c, &r, n, 2).unwrap();
        for &v in &r {
            let d = rep::ck_defect(&c, &fock, &r, v).unwrap();
            let b = &fock.basis;
            for i in 0..b.len() {
                for j in 0..b.len() {
                    let want = i64::from(i == j && b.level(i) == 0 && b.labels()[i].path.rng() == v);
                    if d.defect.get(i, j) != want {
                        return outcome(false, format!("{name}: Fock defect at {v:?} entry ({i}, {j})"));
                    }
                }
            }
            let d = rep::ck_defect(&c, &bdry, &r, v).unwrap();
            let b = &bdry.basis;
            assert_eq!(b.kind, BasisKind::Boundary);
            for i in 0..b.len() {
                for j in 0..b.len() {
                    if (b.level(i) < n || b.level(j) < n) && d.defect.get(i, j) != 0 {
                        return outcome(false, format!("{name}: boundary defect at {v:?} entry ({i}, {j})"));
                    }
                }
            }
            vertices += 1;
        }
    }
    outcome(true, format!("{vertices} vertices over {} fixtures, N = {n}", fixtures::all().len()))
}

// 4 ------------------------------------------------------------------------------------

fn oracle_audit(c: &Correspondence, max_len: usize, wordcap: usize) -> (usize, usize) {
    let gens = islice::generators(c, wordcap);
    let (mut words, mut bad) = (0, 0);
    islice::for_each_word(&gens, max_len, |w| {
        words += 1;
        let direct = islice::evaluate(c, w);
        if islice::reduce_word(c, w, OracleVariant::Bracket) != direct || islice::reduce_word(c, w, OracleVariant::EdgeOnly) != direct {
            bad += 1;
        }
    });
    (words, bad)
}

fn semigroup_axioms(c: &Correspondence, cap: usize, wordcap: usize, triples: bool) -> Result<usize, String> {
    let els = islice::bounded_elements(c, cap, wordcap);
    let mul = |s: &IsElement, t: &IsElement| islice::multiply(c, s, t);
    let adj = |s: &IsElement| islice::adjoint(c, s);
    let name = |s: &IsElement| islice::display(c, s);
    for s in &els {
        let sa = adj(s);
        if mul(&mul(s, &sa), s) != *s || mul(&mul(&sa, s), &sa) != sa {
            return Err(format!("s s* s = s fails at {}", name(s)));
        }
        if adj(&sa) != *s {
            return Err(format!("involution fails at {}", name(s)));
        }
    }
    let idem: Vec<&IsElement> = els.iter().filter(|s| islice::is_idempotent(c, s)).collect();
    for e in &idem {
        for f in &idem {
            if mul(e, f) != mul(f, e) {
                return Err(format!("idempotents {} and {} do not commute", name(e), name(f)));
            }
        }
    }
    for s in &els {
        for t in &els {
            if adj(&mul(s, t)) != mul(&adj(t), &adj(s)) {
                return Err(format!("(st)* = t* s* fails at {}, {}", name(s), name(t)));
            }
            if triples {
                for u in &els {
                    if mul(&mul(s, t), u) != mul(s, &mul(t, u)) {
                        return Err(format!("associativity fails at {}, {}, {}", name(s), name(t), name(u)));
                    }
                }
            }
        }
    }
    Ok(els.len())
}

fn criterion_4() -> Outcome {
    let (w_o2, bad_o2) = oracle_audit(&fixtures::o_n(2), 4, 1);
    let (w_od, bad_od) = oracle_audit(&fixtures::odometer(), 4, 2);
    let words_ok = w_o2 >= 1000 && w_od >= 1000 && bad_o2 == 0 && bad_od == 0;
    let ax_o2 = semigroup_axioms(&fixtures::o_n(2), 2, 1, true);
    let ax_od = semigroup_axioms(&fixtures::odometer(), 2, 2, false);
    let detail = format!(
        "words: o2 {w_o2} ({bad_o2} disagreements), odometer {w_od} ({bad_od}); axioms: o2 {:?}, odometer {:?}",
        ax_o2, ax_od
    );
    outcome(words_ok && ax_o2.is_ok() && ax_od.is_ok(), detail)
}

// 5 ------------------------------------------------------------------------------------

fn criterion_5() -> Outcome {
    let mut triples = 0;
    for (name, c) in fixtures::all() {
        let r = fixtures::regular_set(&c);
        let m = model::enumerate_arrows(&c, &r, 3, 2, 1).unwrap();
        let rep = model::check_axioms(&c, &m);
        if !rep.violations.is_empty() {
            return outcome(false, format!("{name}: {}", rep.violations[0]));
        }
        triples += rep.triples_checked;
    }
    let s = fixtures::single_edge();
    let m = model::enumerate_arrows(&s, &fixtures::set_of(&s, &["v"]), 2, 2, 0).unwrap();
    let pairs: BTreeSet<(usize, usize)> = m.arrows.iter().map(|a| (a.source, a.range)).collect();
    if m.objects.len() != 2 || m.arrows.len() != 4 || pairs.len() != 4 {
        return outcome(false, format!("single edge model: {} objects, {} arrows", m.objects.len(), m.arrows.len()));
    }
    let mut cols = Vec::new();
    for (name, c) in [("single-loop", fixtures::single_loop()), ("o2", fixtures::o_n(2)), ("singular", fixtures::singular_graph())] {
        let r = fixtures::regular_set(&c);
        let rep = rep::cross_check_main_theorem(&c, &r, 3, 2, 0).unwrap();
        if !rep.passed() || rep.vacuous() || rep.undetermined > 0 {
            return outcome(false, format!("{name} crosscheck: {:?}", rep.failures.first()));
        }
        cols.push(format!("{name} {}x{}", rep.compared_columns, rep.fine_labels));
    }
    outcome(
        true,
        format!("axioms on {triples} composable triples; single edge is the pair groupoid on 2 objects; crosscheck {}", cols.join(", ")),
    )
}

// 6 ------------------------------------------------------------------------------------

fn unique(a: &FiniteAction, c: &Correspondence, depth: usize) -> Result<u128, String> {
    match actions::uniqueness_audit(a, c, depth, 1, 1_000_000) {
        AuditStatus::Completed { candidates, equivariant } if equivariant.len() == 1 => Ok(candidates),
        other => Err(format!("{other:?}")),
    }
}

fn prefix_coherent(a: &FiniteAction, c: &Correspondence, r: &BTreeSet<ObjectId>) -> bool {
    let maps: Vec<Vec<Path>> = (1..=6).map(|d| actions::universal_map(a, c, r, d).unwrap()).collect();
    maps.windows(2).all(|w| w[0].iter().zip(&w[1]).all(|(p, q)| p.is_prefix_of(q)))
}

fn criterion_6() -> Outcome {
    let (lp, z3) = samples::loop_z3();
    let o2 = fixtures::o_n(2);
    let bare = samples::bare_point();
    let (cand_z3, cand_bare) = match (unique(&z3, &lp, 3), unique(&bare, &o2, 3)) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => return outcome(false, format!("loop: {a:?}, bare point: {b:?}")),
    };
    if cand_z3 > 64 {
        return outcome(false, format!("{cand_z3} candidates for the loop action"));
    }
    let (sw, swap) = samples::swap_pair();
    let (ch, chain) = samples::loop_chain();
    let coherent = prefix_coherent(&z3, &lp, &fixtures::set_of(&lp, &["v"]))
        && prefix_coherent(&bare, &o2, &BTreeSet::new())
        && prefix_coherent(&swap, &sw, &fixtures::regular_set(&sw))
        && prefix_coherent(&chain, &ch, &BTreeSet::new());
    outcome(
        coherent,
        format!("one equivariant map out of {cand_z3} (loop, |Y| = 3) and {cand_bare} (bare point); prefix coherence {coherent}"),
    )
}

// 7 ------------------------------------------------------------------------------------

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for (name, c) in [("two-cycle-leaf", fixtures::two_cycle_leaf()), ("groupoid-swap", fixtures::groupoid_swap())] {
        let r = fixtures::regular_set(&c);
        let rr = model::restrict_to_r(&c, &r, 4, 3, 1).unwrap();
        let g_r = match c.base() {
            Base::Finite(g) => g.arrows().iter().filter(|a| r.contains(&a.src) && r.contains(&a.rng)).count(),
            Base::Presented(_) => unreachable!(),
        };
        if !rr.passed() || rr.vacuous || rr.r_arrows != g_r {
            return outcome(false, format!("{name}: {rr:?}"));
        }
        parts.push(format!("{name}: {} arrows of G_R, orbit {}", rr.r_arrows, rr.orbit_size));
    }
    outcome(true, parts.join("; "))
}

// 8 ------------------------------------------------------------------------------------

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut parts = Vec::new();
    for (name, c) in [("o2", fixtures::o_n(2)), ("singular", fixtures::singular_graph()), ("odometer", fixtures::odometer()), ("exel-pardo", fixtures::exel_pardo())] {
        for (m, n) in [(0, 3), (1, 3)] {
            let om = pathspace::build_omega(&c, m, n).unwrap();
            let chars = pathspace::characters(&c, m, n).unwrap();
            let expected: usize = (m..=n).map(|k| c.paths_of_length(k).len()).sum();
            if chars.len() != expected {
                return outcome(false, format!("{name} [{m},{n}]: {} characters, {expected} paths", chars.len()));
            }
            for _ in 0..500 {
                let a = AmnElement::random(&om, &mut rng);
                let b = AmnElement::random(&om, &mut rng);
                let d = AmnElement::random(&om, &mut rng);
                let ab = a.multiply(&b).unwrap();
                let ok = ab == b.multiply(&a).unwrap()
                    && ab.multiply(&d).unwrap() == a.multiply(&b.multiply(&d).unwrap()).unwrap()
                    && AmnElement::from_cumulative(&om, &a.to_cumulative(&om)).unwrap() == a
                    && chars.iter().all(|x| x.eval(&ab) == x.eval(&a) * x.eval(&b));
                if !ok {
                    return outcome(false, format!("{name} [{m},{n}]: identity fails on a random triple"));
                }
            }
        }
        parts.push(name);
    }
    outcome(true, format!("500 triples on [0,3] and [1,3] for {}", parts.join(", ")))
}

// 9 ------------------------------------------------------------------------------------

fn finite(c: &Correspondence) -> FiniteGroupoid {
    match c.base() {
        Base::Finite(g) => g.clone(),
        Base::Presented(_) => unreachable!(),
    }
}

/// A seeded mutation of a valid groupoid table.
fn mutate_groupoid(seed: u64) -> FiniteGroupoid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = if seed % 2 == 0 { finite(&fixtures::exel_pardo()) } else { finite(&fixtures::groupoid_swap()) };
    assert!(g.validate().is_empty());
    let n = g.num_arrows();
    match seed % 3 {
        0 => {
            let entries = g.composition_entries();
            let &(a, b, ab) = entries.choose(&mut rng).unwrap();
            let wrong = (ab + rng.gen_range(1..n)) % n;
            g.set_composition(a, b, wrong);
        }
        1 => {
            let a = rng.gen_range(0..n);
            let inv = g.inverse(a).unwrap();
            g.set_inverse(a, Some((inv + rng.gen_range(1..n)) % n));
        }
        _ => {
            let v = ObjectId(rng.gen_range(0..g.num_objects()));
            g.remove_unit(v);
        }
    }
    g
}

/// A seeded mutation of a valid correspondence.
fn mutate_correspondence(seed: u64) -> Correspondence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = match seed % 4 {
        0 | 1 => fixtures::exel_pardo(),
        2 => fixtures::odometer(),
        _ => fixtures::groupoid_swap(),
    };
    assert!(c.validate(2).is_empty());
    let rows: Vec<((Arrow, EdgeId), (EdgeId, Arrow))> = c.rows().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    let ((g, x), (y, h)) = rows.choose(&mut rng).unwrap().clone();
    match seed % 4 {
        0 => {
            let k = c.edges().len();
            c.set_row(g, x, EdgeId((y.0 + rng.gen_range(1..k)) % k), h);
        }
        1 | 3 => {
            let arrows = c.base().arrows_up_to(1);
            let others: Vec<&Arrow> = arrows.iter().filter(|a| **a != h).collect();
            let other = (*others.choose(&mut rng).unwrap()).clone();
            c.set_row(g, x, y, other);
        }
        _ => {
            let b = c.base();
            let wrong = b.compose(&h, &b.parse_arrow("z").unwrap()).unwrap();
            c.set_row(g, x, y, wrong);
        }
    }
    c
}

/// A seeded mutation of a valid action, with its correspondence and regular set.
fn mutate_action(seed: u64) -> (Correspondence, FiniteAction, BTreeSet<ObjectId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, mut a) = if matches!(seed % 5, 0 | 2) { samples::loop_z3() } else { samples::swap_pair() };
    let r = fixtures::regular_set(&c);
    assert!(actions::validate_action(&a, &c, &r, 2, 1).valid());
    let keys: Vec<(EdgeId, usize)> = a.mu.keys().copied().collect();
    let key = *keys.choose(&mut rng).unwrap();
    match seed % 5 {
        0 => {
            // two points with the same image
            let other = keys.iter().find(|k| **k != key).copied().unwrap();
            let img = a.mu[&other];
            a.mu.insert(key, img);
        }
        1 => {
            let k = a.g_act.keys().next().unwrap().clone();
            let img = a.g_act[&k];
            a.g_act.insert(k, 1 - img);
        }
        2 => {
            a.mu.remove(&key);
        }
        3 => {
            let img = a.mu[&key];
            a.mu.insert(key, 1 - img);
        }
        _ => {
            let y = rng.gen_range(0..a.len());
            a.fiber[y] = ObjectId(1 - a.fiber[y].0);
        }
    }
    (c, a, r)
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    let mut flipped = 0;
    for seed in 0..5 {
        let v = mutate_groupoid(seed).validate();
        if v.first().is_some_and(|w| !w.witness.is_empty()) {
            flipped += 1;
        }
    }
    pass &= flipped == 5;
    parts.push(format!("groupoid {flipped}/5"));
    flipped = 0;
    for seed in 0..5 {
        let v = mutate_correspondence(seed).validate(2);
        if v.first().is_some_and(|w| !w.witness.is_empty()) {
            flipped += 1;
        }
    }
    pass &= flipped == 5;
    parts.push(format!("correspondence {flipped}/5"));
    flipped = 0;
    let mut conditions = BTreeSet::new();
    for seed in 0..5 {
        let (c, a, r) = mutate_action(seed);
        let rep = actions::validate_action(&a, &c, &r, 2, 1);
        if let Some(w) = rep.violations.first().filter(|w| !w.witness.is_empty()) {
            flipped += 1;
            conditions.insert(w.condition);
        }
    }
    pass &= flipped == 5;
    let conds: Vec<String> = conditions.iter().map(Condition::to_string).collect();
    parts.push(format!("action {flipped}/5 ({})", conds.join(", ")));
    outcome(pass, parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("boundary points match the direct enumeration", criterion_1),
        ("Toeplitz relations on the truncated Fock space", criterion_2),
        ("covariance defects", criterion_3),
        ("inverse semigroup soundness", criterion_4),
        ("groupoid model axioms and crosscheck", criterion_5),
        ("universal property", criterion_6),
        ("restriction to R", criterion_7),
        ("A_[m,n] algebra", criterion_8),
        ("mutation sensitivity", criterion_9),
    ];
    let mut unexpected = Vec::new();
    let mut stale = Vec::new();
    let mut counts: BTreeMap<bool, usize> = BTreeMap::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let k = i + 1;
        let t = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let known = if !o.pass && KNOWN_RED.contains(&k) { " [known]" } else { "" };
        println!("criterion {k} {status}{known} {title}: {} ({:.1}s)", o.detail, t.elapsed().as_secs_f64());
        *counts.entry(o.pass).or_default() += 1;
        if !o.pass && !KNOWN_RED.contains(&k) {
            unexpected.push(k);
        }
        if o.pass && KNOWN_RED.contains(&k) {
            stale.push(k);
        }
    }
    println!(
        "acceptance: {} passed, {} failed",
        counts.get(&true).copied().unwrap_or(0),
        counts.get(&false).copied().unwrap_or(0)
    );
    if !stale.is_empty() {
        println!("criteria {stale:?} pass but are listed as known failures");
    }
    if unexpected.is_empty() && stale.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
