//! Finite actions of a correspondence: a finite space `Y` over the objects with a groupoid
//! action and injections `μ_e` for the edges. Validation, the induced partial maps θ,
//! equivariant maps, and the unique map into the truncated path space.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::base::{Arrow, Base};
use crate::correspondence::{Correspondence, EdgeId, Path};
use crate::groupoid::ObjectId;
use crate::islice::{self, IsElement};
use crate::pathspace::BoundaryTrunc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("action is invalid: {0}")]
    Invalid(String),
}

/// A finite action. `g_act` holds tables for generating arrows; other arrows act through
/// their words, and inverse letters without a table act through the inverse table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAction {
    pub names: Vec<String>,
    pub fiber: Vec<ObjectId>,
    pub g_act: BTreeMap<(Arrow, usize), usize>,
    pub mu: BTreeMap<(EdgeId, usize), usize>,
}

impl FiniteAction {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `g·y`, or `None` when undefined.
    pub fn act_g(&self, b: &Base, g: &Arrow, y: usize) -> Option<usize> {
        if b.src(g) != *self.fiber.get(y)? {
            return None;
        }
        if let Some(z) = self.g_act.get(&(g.clone(), y)) {
            return Some(*z);
        }
        if b.is_unit(g) {
            return Some(y);
        }
        match g {
            Arrow::Index(_) => None,
            Arrow::Word(w) if w.len() == 1 => {
                let inv = Arrow::Word(vec![w[0].inv()]);
                self.g_act.iter().find(|((a, _), z)| *a == inv && **z == y).map(|((_, x), _)| *x)
            }
            Arrow::Word(w) => w.iter().rev().try_fold(y, |cur, l| self.act_g(b, &Base::letter_arrow(*l), cur)),
        }
    }

    pub fn act_e(&self, e: EdgeId, y: usize) -> Option<usize> {
        self.mu.get(&(e, y)).copied()
    }

    /// The unique `(e, y')` with `μ_e(y') = y`, if any.
    pub fn unfold(&self, y: usize) -> Option<(EdgeId, usize)> {
        self.mu.iter().find(|(_, z)| **z == y).map(|((e, x), _)| (*e, *x))
    }

    /// `X·Y`: the union of the images of the `μ_e`.
    pub fn xy_image(&self) -> BTreeSet<usize> {
        self.mu.values().copied().collect()
    }

    /// The restriction to a subset closed under the action (points renumbered in order).
    pub fn sub_action(&self, keep: &BTreeSet<usize>) -> FiniteAction {
        let idx: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, y)| (*y, i)).collect();
        FiniteAction {
            names: keep.iter().map(|y| self.names[*y].clone()).collect(),
            fiber: keep.iter().map(|y| self.fiber[*y]).collect(),
            g_act: self
                .g_act
                .iter()
                .filter_map(|((g, y), z)| Some(((g.clone(), *idx.get(y)?), *idx.get(z)?)))
                .collect(),
            mu: self.mu.iter().filter_map(|((e, y), z)| Some(((*e, *idx.get(y)?), *idx.get(z)?))).collect(),
        }
    }

    /// `θ_s` as a partial map on `Y`: `y = μ_q(y') ↦ μ_p(g·y')`.
    pub fn theta(&self, c: &Correspondence, s: &IsElement) -> Vec<Option<usize>> {
        (0..self.len()).map(|y| self.theta_at(c, s, y)).collect()
    }

    fn theta_at(&self, c: &Correspondence, s: &IsElement, y: usize) -> Option<usize> {
        match s {
            IsElement::Zero => None,
            IsElement::One => Some(y),
            IsElement::Triple { p, g, q } => {
                if self.fiber[y] != q.rng() {
                    return None;
                }
                let mut cur = y;
                for &e in q.edges() {
                    let (f, x) = self.unfold(cur)?;
                    if f != e {
                        return None;
                    }
                    cur = x;
                }
                cur = self.act_g(c.base(), g, cur)?;
                for &e in p.edges().iter().rev() {
                    cur = self.act_e(e, cur)?;
                }
                Some(cur)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    GroupoidAction,
    Range,
    Compatibility,
    Injective,
    Cover,
    ThetaMultiplicative,
    ThetaBracket,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::GroupoidAction => "groupoid-action",
            Condition::Range => "range",
            Condition::Compatibility => "compatibility",
            Condition::Injective => "injective",
            Condition::Cover => "cover",
            Condition::ThetaMultiplicative => "theta-multiplicative",
            Condition::ThetaBracket => "theta-bracket",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionViolation {
    pub condition: Condition,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionReport {
    pub violations: Vec<ActionViolation>,
    pub theta_pairs: usize,
    pub bracket_pairs: usize,
    /// Closedness of `X·Y` in `Y`; always true for finite `Y`.
    pub closed: bool,
}

impl ActionReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn fails(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }
}

/// Checks every action condition exhaustively, then rebuilds θ on singleton slices of length
/// `<= cap` and twists of length `<= wordcap` and checks `θ(st) = θ(s)θ(t)` and
/// `θ(x)^* θ(y) = θ(⟨x|y⟩)`. When some `μ_e` is not defined on its whole fibre these hold
/// only up to restriction: `θ(s)θ(t) ≤ θ(st)`, and the bracket identity on the domain of `θ(y)`.
pub fn validate_action(
    a: &FiniteAction,
    c: &Correspondence,
    r: &BTreeSet<ObjectId>,
    cap: usize,
    wordcap: usize,
) -> ActionReport {
    let b = c.base();
    let mut v = Vec::new();
    let yn = |y: usize| a.names[y].clone();
    let arrows = b.arrows_up_to(wordcap.max(1));
    let n = a.len();

    for ((g, y), z) in &a.g_act {
        if *y >= n || *z >= n {
            push(&mut v, Condition::GroupoidAction, format!("table entry ({}, {y}) leaves Y", b.arrow_name(g)));
        }
    }
    for (&(e, y), &z) in &a.mu {
        if y >= n || z >= n {
            push(&mut v, Condition::Range, format!("μ_{} entry leaves Y", c.edge_name(e)));
        }
    }
    if !v.is_empty() {
        return ActionReport { violations: v, theta_pairs: 0, bracket_pairs: 0, closed: true };
    }

    for y in 0..n {
        for g in &arrows {
            if b.src(g) != a.fiber[y] {
                continue;
            }
            let Some(gy) = a.act_g(b, g, y) else {
                push(&mut v, Condition::GroupoidAction, format!("{}·{} undefined", b.arrow_name(g), yn(y)));
                continue;
            };
            if a.fiber[gy] != b.rng(g) {
                push(&mut v, Condition::GroupoidAction, format!("{}·{} = {} lies over the wrong object", b.arrow_name(g), yn(y), yn(gy)));
            }
            if b.is_unit(g) && gy != y {
                push(&mut v, Condition::GroupoidAction, format!("unit {} moves {}", b.arrow_name(g), yn(y)));
            }
            for h in &arrows {
                let Some(hg) = b.compose(h, g) else { continue };
                let lhs = a.act_g(b, &hg, y);
                let rhs = a.act_g(b, h, gy);
                if lhs != rhs {
                    push(
                        &mut v,
                        Condition::GroupoidAction,
                        format!("({}{})·{} != {}·({}·{})", b.arrow_name(h), b.arrow_name(g), yn(y), b.arrow_name(h), b.arrow_name(g), yn(y)),
                    );
                }
            }
        }
    }

    let mut seen: BTreeMap<usize, (EdgeId, usize)> = BTreeMap::new();
    for (&(e, y), &z) in &a.mu {
        let edge = c.edge(e);
        if a.fiber[y] != edge.src || a.fiber[z] != edge.rng {
            push(&mut v, Condition::Range, format!("μ_{}({}) = {}", c.edge_name(e), yn(y), yn(z)));
        }
        if let Some((f, x)) = seen.insert(z, (e, y)) {
            push(
                &mut v,
                Condition::Injective,
                format!("μ_{}({}) = μ_{}({}) = {}", c.edge_name(f), yn(x), c.edge_name(e), yn(y), yn(z)),
            );
        }
        for h in &arrows {
            if b.src(h) != edge.rng {
                continue;
            }
            let lhs = a.act_g(b, h, z);
            let rhs = c.act(h, e).ok().and_then(|(he, r)| a.act_e(he, a.act_g(b, &r, y)?));
            if lhs != rhs {
                push(&mut v, Condition::Compatibility, format!("{}·μ_{}({}) with h = {}", b.arrow_name(h), c.edge_name(e), yn(y), b.arrow_name(h)));
            }
        }
    }
    for y in 0..n {
        if r.contains(&a.fiber[y]) && !seen.contains_key(&y) {
            push(&mut v, Condition::Cover, yn(y));
        }
    }
    let total = c.edge_ids().all(|e| (0..n).all(|y| a.fiber[y] != c.edge(e).src || a.act_e(e, y).is_some()));
    let mut theta_pairs = 0;
    let mut bracket_pairs = 0;
    if v.is_empty() {
        let elems = islice::bounded_elements(c, cap, wordcap);
        let thetas: Vec<Vec<Option<usize>>> = elems.iter().map(|s| a.theta(c, s)).collect();
        for (i, s) in elems.iter().enumerate() {
            for (j, t) in elems.iter().enumerate() {
                theta_pairs += 1;
                let st = a.theta(c, &islice::multiply(c, s, t));
                let comp: Vec<Option<usize>> = thetas[j].iter().map(|x| x.and_then(|x| thetas[i][x])).collect();
                if !(if total { st == comp } else { below(&comp, &st) }) {
                    push(
                        &mut v,
                        Condition::ThetaMultiplicative,
                        format!("s = {}, t = {}", islice::display(c, s), islice::display(c, t)),
                    );
                }
            }
        }
        let points = c.points_up_to(wordcap);
        for x in &points {
            let tx = a.theta(c, &IsElement::point(c, x));
            for y in &points {
                bracket_pairs += 1;
                let ty = a.theta(c, &IsElement::point(c, y));
                let lhs: Vec<Option<usize>> =
                    ty.iter().map(|z| z.and_then(|z| tx.iter().position(|w| *w == Some(z)))).collect();
                let rhs = match c.bracket(x, y) {
                    Ok(Some(h)) => a.theta(c, &IsElement::arrow(c, h)),
                    _ => vec![None; n],
                };
                let agree = if total { lhs == rhs } else { (0..n).all(|z| ty[z].is_none() || lhs[z] == rhs[z]) };
                if !agree {
                    push(&mut v, Condition::ThetaBracket, format!("x = {}, y = {}", c.point_name(x), c.point_name(y)));
                }
            }
        }
    }
    ActionReport { violations: v, theta_pairs, bracket_pairs, closed: true }
}

/// `a` is a restriction of `b`.
fn below(a: &[Option<usize>], b: &[Option<usize>]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.is_none() || x == y)
}

fn push(v: &mut Vec<ActionViolation>, condition: Condition, witness: String) {
    v.push(ActionViolation { condition, witness });
}

/// The space `X∘Y` of pairs `(e, y)` with `src(e) = r(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XyComposite {
    pub pairs: Vec<(EdgeId, usize)>,
}

impl XyComposite {
    /// `h·(e, y) = (h∘e, h|_e·y)`.
    pub fn act(&self, a: &FiniteAction, c: &Correspondence, h: &Arrow, pair: (EdgeId, usize)) -> Option<(EdgeId, usize)> {
        let (he, r) = c.act(h, pair.0).ok()?;
        Some((he, a.act_g(c.base(), &r, pair.1)?))
    }

    pub fn project(pair: (EdgeId, usize)) -> EdgeId {
        pair.0
    }
}

pub fn compose_xy(a: &FiniteAction, c: &Correspondence) -> XyComposite {
    let mut pairs = Vec::new();
    for e in c.edge_ids() {
        for y in 0..a.len() {
            if a.fiber[y] == c.edge(e).src {
                pairs.push((e, y));
            }
        }
    }
    XyComposite { pairs }
}

/// Checks that `X∘Y` carries a groupoid action and that the projection to `F` and the map
/// `(e, y) ↦ μ_e(y)` are equivariant. Returns (checked, failures).
pub fn audit_xy(a: &FiniteAction, c: &Correspondence, xy: &XyComposite, wordcap: usize) -> (usize, Vec<String>) {
    let b = c.base();
    let arrows = b.arrows_up_to(wordcap.max(1));
    let mut checked = 0;
    let mut failures = Vec::new();
    for &pair in &xy.pairs {
        let (e, y) = pair;
        for h in arrows.iter().filter(|h| b.src(h) == c.edge(e).rng) {
            checked += 1;
            let hp = xy.act(a, c, h, pair);
            let ok_proj = hp.map(XyComposite::project) == c.act(h, e).ok().map(|x| x.0);
            let ok_mu = hp.and_then(|(f, z)| a.act_e(f, z)) == a.act_e(e, y).and_then(|z| a.act_g(b, h, z));
            let ok_assoc = arrows.iter().filter_map(|k| b.compose(k, h).map(|kh| (k, kh))).all(|(k, kh)| {
                xy.act(a, c, &kh, pair) == hp.and_then(|q| xy.act(a, c, k, q))
            });
            if !(ok_proj && ok_mu && ok_assoc) {
                failures.push(format!("h = {}, ({}, {})", b.arrow_name(h), c.edge_name(e), a.names[y]));
            }
        }
    }
    (checked, failures)
}

/// `ρ(y)`: unfold `y = μ_{e1}(y1)`, `y1 = μ_{e2}(y2)`, ... up to `depth` edges.
pub fn universal_map(
    a: &FiniteAction,
    c: &Correspondence,
    r: &BTreeSet<ObjectId>,
    depth: usize,
) -> Result<Vec<Path>, ActionError> {
    let rep = validate_action(a, c, r, 0, 1);
    if let Some(v) = rep.violations.first() {
        return Err(ActionError::Invalid(format!("{}: {}", v.condition, v.witness)));
    }
    let mut out = Vec::with_capacity(a.len());
    for y in 0..a.len() {
        let mut edges = Vec::new();
        let mut cur = y;
        while edges.len() < depth {
            match a.unfold(cur) {
                Some((e, x)) => {
                    edges.push(e);
                    cur = x;
                }
                None => break,
            }
        }
        let p = if edges.is_empty() {
            Path::vertex(a.fiber[y])
        } else {
            c.path_from_edges(&edges).map_err(|e| ActionError::Invalid(e.to_string()))?
        };
        out.push(p);
    }
    Ok(out)
}

/// A space carrying the data of an action, for equivariance checks.
pub trait ActionTarget {
    type Point: Clone + PartialEq + fmt::Debug;
    fn fiber_of(&self, p: &Self::Point) -> ObjectId;
    fn act_arrow(&self, c: &Correspondence, g: &Arrow, p: &Self::Point) -> Option<Self::Point>;
    fn act_edge(&self, c: &Correspondence, e: EdgeId, p: &Self::Point) -> Option<Self::Point>;
    fn in_xy(&self, p: &Self::Point) -> bool;
    fn all_points(&self) -> Vec<Self::Point>;
    fn name(&self, c: &Correspondence, p: &Self::Point) -> String;
}

impl ActionTarget for FiniteAction {
    type Point = usize;

    fn fiber_of(&self, p: &usize) -> ObjectId {
        self.fiber[*p]
    }

    fn act_arrow(&self, c: &Correspondence, g: &Arrow, p: &usize) -> Option<usize> {
        self.act_g(c.base(), g, *p)
    }

    fn act_edge(&self, _: &Correspondence, e: EdgeId, p: &usize) -> Option<usize> {
        self.act_e(e, *p)
    }

    fn in_xy(&self, p: &usize) -> bool {
        self.mu.values().any(|z| z == p)
    }

    fn all_points(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    fn name(&self, _: &Correspondence, p: &usize) -> String {
        self.names[*p].clone()
    }
}

/// Paths of length `<= depth` with `g·ω = g∘ω` and `μ_e(ω) = e ω` cut back to `depth`.
#[derive(Debug, Clone)]
pub struct TruncatedOmega {
    pub depth: usize,
    pub points: Vec<Path>,
}

impl TruncatedOmega {
    /// All of `Ω_{[0,depth]}`.
    pub fn all(c: &Correspondence, depth: usize) -> Self {
        Self { depth, points: (0..=depth).flat_map(|k| c.paths_of_length(k)).collect() }
    }

    pub fn boundary(b: &BoundaryTrunc) -> Self {
        Self { depth: b.depth(), points: b.points().to_vec() }
    }
}

impl ActionTarget for TruncatedOmega {
    type Point = Path;

    fn fiber_of(&self, p: &Path) -> ObjectId {
        p.rng()
    }

    fn act_arrow(&self, c: &Correspondence, g: &Arrow, p: &Path) -> Option<Path> {
        c.act_on_path(g, p).ok().map(|x| x.0)
    }

    fn act_edge(&self, c: &Correspondence, e: EdgeId, p: &Path) -> Option<Path> {
        let single = c.path_from_edges(&[e]).ok()?;
        let ep = c.concat(&single, p)?;
        Some(BoundaryTrunc::truncate(&ep, self.depth))
    }

    fn in_xy(&self, p: &Path) -> bool {
        !p.is_empty()
    }

    fn all_points(&self) -> Vec<Path> {
        self.points.clone()
    }

    fn name(&self, c: &Correspondence, p: &Path) -> String {
        c.path_name(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivarianceReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl EquivarianceReport {
    pub fn equivariant(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks fibres, `φ(g·y) = g·φ(y)`, `φ(μ_e(y)) = μ_e(φ(y))` wherever `μ_e(y)` is defined, and `φ^{-1}(X·Y_2) = X·Y_1`.
pub fn check_equivariant<S: ActionTarget, T: ActionTarget>(
    c: &Correspondence,
    src: &S,
    tgt: &T,
    phi: &dyn Fn(&S::Point) -> T::Point,
    wordcap: usize,
) -> EquivarianceReport {
    let b = c.base();
    let arrows = b.arrows_up_to(wordcap.max(1));
    let mut checked = 0;
    let mut failures = Vec::new();
    for y in src.all_points() {
        let py = phi(&y);
        let yn = src.name(c, &y);
        checked += 1;
        if tgt.fiber_of(&py) != src.fiber_of(&y) {
            failures.push(format!("fibre of φ({yn})"));
        }
        checked += 1;
        if tgt.in_xy(&py) != src.in_xy(&y) {
            failures.push(format!("preimage of X·Y at {yn}"));
        }
        for g in arrows.iter().filter(|g| b.src(g) == src.fiber_of(&y)) {
            checked += 1;
            let lhs = src.act_arrow(c, g, &y).map(|z| phi(&z));
            if lhs != tgt.act_arrow(c, g, &py) {
                failures.push(format!("φ({}·{yn})", b.arrow_name(g)));
            }
        }
        for e in c.edge_ids().filter(|e| c.edge(*e).src == src.fiber_of(&y)) {
            let Some(ey) = src.act_edge(c, e, &y) else { continue };
            checked += 1;
            if Some(phi(&ey)) != tgt.act_edge(c, e, &py) {
                failures.push(format!("φ(μ_{}({yn}))", c.edge_name(e)));
            }
        }
    }
    EquivarianceReport { checked, failures }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuditStatus {
    Completed { candidates: u128, equivariant: Vec<Vec<Path>> },
    Skipped { candidates: u128, budget: u128 },
}

/// Enumerates every fibre-respecting map `Y → Ω_{[0,depth]}` and keeps the equivariant ones.
pub fn uniqueness_audit(
    a: &FiniteAction,
    c: &Correspondence,
    depth: usize,
    wordcap: usize,
    budget: u128,
) -> AuditStatus {
    let omega = TruncatedOmega::all(c, depth);
    let choices: Vec<Vec<Path>> =
        (0..a.len()).map(|y| omega.points.iter().filter(|p| p.rng() == a.fiber[y]).cloned().collect()).collect();
    let candidates = choices.iter().try_fold(1u128, |acc, ch| acc.checked_mul(ch.len() as u128)).unwrap_or(u128::MAX);
    if candidates > budget {
        return AuditStatus::Skipped { candidates, budget };
    }
    let mut found = Vec::new();
    let mut idx = vec![0usize; a.len()];
    if choices.iter().all(|ch| !ch.is_empty()) {
        loop {
            let map: Vec<Path> = idx.iter().enumerate().map(|(y, &i)| choices[y][i].clone()).collect();
            let rep = check_equivariant(c, a, &omega, &|y: &usize| map[*y].clone(), wordcap);
            if rep.equivariant() {
                found.push(map);
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    AuditStatus::Completed { candidates, equivariant: found }
}

/// Sample actions used by tests, the corpus and the CLI.
pub mod samples {
    use super::*;
    use crate::fixtures;

    /// `Z/3` over the single loop with `μ_e = +1`.
    pub fn loop_z3() -> (Correspondence, FiniteAction) {
        let c = fixtures::single_loop();
        let v = ObjectId(0);
        let a = FiniteAction {
            names: vec!["0".into(), "1".into(), "2".into()],
            fiber: vec![v; 3],
            g_act: BTreeMap::new(),
            mu: (0..3).map(|y| ((EdgeId(0), y), (y + 1) % 3)).collect(),
        };
        (c, a)
    }

    /// One point over `v` with every `μ` empty.
    pub fn bare_point() -> FiniteAction {
        FiniteAction { names: vec!["y".into()], fiber: vec![ObjectId(0)], g_act: BTreeMap::new(), mu: BTreeMap::new() }
    }

    /// Points `p` over `u` and `q` over `w` swapped by `t`, each fixed by its loop.
    pub fn swap_pair() -> (Correspondence, FiniteAction) {
        let c = fixtures::groupoid_swap();
        let mut g_act = BTreeMap::new();
        g_act.insert((Arrow::Index(2), 0), 1);
        g_act.insert((Arrow::Index(3), 1), 0);
        let mut mu = BTreeMap::new();
        mu.insert((EdgeId(0), 0), 0);
        mu.insert((EdgeId(1), 1), 1);
        let a = FiniteAction { names: vec!["p".into(), "q".into()], fiber: vec![ObjectId(0), ObjectId(1)], g_act, mu };
        (c, a)
    }

    /// `Y = {0, 1, 2}` over the single loop with `μ_e: 0 ↦ 1 ↦ 2`; valid for `R = ∅`.
    pub fn loop_chain() -> (Correspondence, FiniteAction) {
        let c = fixtures::single_loop();
        let a = FiniteAction {
            names: vec!["0".into(), "1".into(), "2".into()],
            fiber: vec![ObjectId(0); 3],
            g_act: BTreeMap::new(),
            mu: [((EdgeId(0), 0), 1), ((EdgeId(0), 1), 2)].into_iter().collect(),
        };
        (c, a)
    }
}
