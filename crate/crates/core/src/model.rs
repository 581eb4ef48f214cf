//! The groupoid model `Ω(R) ⋊ I(G,X)` at finite depth: germ action and germ equality,
//! enumeration of germ classes, the restriction to `R`, and simplicity diagnostics.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::base::Arrow;
use crate::correspondence::{Correspondence, Path};
use crate::groupoid::ObjectId;
use crate::islice::{self, IsElement};
use crate::pathspace::{build_boundary, BoundaryTrunc, PathspaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("{0} is not defined at {1}")]
    NotDefined(String, String),
    #[error("depth {depth} must exceed the length cap {cap}")]
    DepthTooSmall { depth: usize, cap: usize },
    #[error(transparent)]
    Pathspace(#[from] PathspaceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Equal,
    Distinct,
    UnknownAtDepth(usize),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => f.write_str("equal"),
            Verdict::Distinct => f.write_str("distinct"),
            Verdict::UnknownAtDepth(n) => write!(f, "unknown({n})"),
        }
    }
}

/// `θ_s(ω)` for a point of `Ω(R)` truncated at some depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applied {
    /// A point at the same depth: exact, or a cylinder of full length.
    Point(Path),
    /// The image of a cylinder is only known up to this shorter prefix.
    Partial(Path),
    /// `ω` is not in the domain.
    Undefined,
    /// Domain membership depends on edges below the truncation.
    BeyondDepth,
}

/// The idempotent `(r, 1, r)`.
fn cylinder(c: &Correspondence, r: &Path) -> IsElement {
    IsElement::Triple { p: r.clone(), g: c.base().unit(c.path_src(r)), q: r.clone() }
}

/// Replaces the formal unit by the unit idempotent at the range of `ω`.
fn localize(c: &Correspondence, s: &IsElement, omega: &Path) -> IsElement {
    match s {
        IsElement::One => cylinder(c, &Path::vertex(omega.rng())),
        other => other.clone(),
    }
}

/// The untruncated image `p ⌢ (g∘u)` for `ω = q ⌢ u`.
fn raw_image(c: &Correspondence, s: &IsElement, omega: &Path) -> Option<Path> {
    match s {
        IsElement::Zero => None,
        IsElement::One => Some(omega.clone()),
        IsElement::Triple { p, g, q } => {
            let u = c.strip_prefix(omega, q)?;
            let (gu, _) = c.act_on_path(g, &u).ok()?;
            c.concat(p, &gu)
        }
    }
}

pub fn germ_apply(c: &Correspondence, s: &IsElement, omega: &Path, depth: usize) -> Applied {
    let exact = omega.len() < depth;
    if let Some(img) = raw_image(c, s, omega) {
        if exact || img.len() >= depth {
            return Applied::Point(BoundaryTrunc::truncate(&img, depth));
        }
        return Applied::Partial(img);
    }
    match s {
        IsElement::Triple { q, .. } if !exact && omega.is_prefix_of(q) => Applied::BeyondDepth,
        _ => Applied::Undefined,
    }
}

fn lag(s: &IsElement) -> i64 {
    match s {
        IsElement::Triple { p, q, .. } => p.len() as i64 - q.len() as i64,
        _ => 0,
    }
}

fn q_len(s: &IsElement) -> usize {
    match s {
        IsElement::Triple { q, .. } => q.len(),
        _ => 0,
    }
}

/// Decides `[s, ω] = [t, ω]` as far as the truncation allows.
pub fn germ_equals(c: &Correspondence, s: &IsElement, t: &IsElement, omega: &Path, depth: usize) -> Result<Verdict, ModelError> {
    let s = localize(c, s, omega);
    let t = localize(c, t, omega);
    for x in [&s, &t] {
        if !matches!(germ_apply(c, x, omega, depth), Applied::Point(_) | Applied::Partial(_)) {
            return Err(ModelError::NotDefined(islice::display(c, x), c.path_name(omega)));
        }
    }
    if lag(&s) != lag(&t) {
        return Ok(Verdict::Distinct);
    }
    if raw_image(c, &s, omega) != raw_image(c, &t, omega) {
        return Ok(Verdict::Distinct);
    }
    for k in q_len(&s).max(q_len(&t))..=omega.len() {
        let e = cylinder(c, &omega.prefix(k));
        if islice::multiply(c, &s, &e) == islice::multiply(c, &t, &e) {
            return Ok(Verdict::Equal);
        }
    }
    if omega.len() < depth {
        Ok(Verdict::Distinct)
    } else {
        Ok(Verdict::UnknownAtDepth(depth))
    }
}

/// `s·(ω, 1, ω)`: equal keys mean equal germs at `ω`.
fn germ_key(c: &Correspondence, s: &IsElement, omega: &Path) -> IsElement {
    islice::multiply(c, &localize(c, s, omega), &cylinder(c, omega))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelArrow {
    /// The first element (in enumeration order) representing the germ class.
    pub rep: IsElement,
    pub source: usize,
    pub range: usize,
    /// Some other class at the same point has the same lag and image and could not be
    /// separated at this depth.
    pub flagged: bool,
    key: IsElement,
}

/// Germ classes over `BoundaryTrunc(depth)` with a partial composition table.
#[derive(Debug, Clone)]
pub struct GroupoidModel {
    pub depth: usize,
    pub cap: usize,
    pub wordcap: usize,
    pub objects: Vec<Path>,
    pub arrows: Vec<ModelArrow>,
    pub units: Vec<Option<usize>>,
    /// `(a, b) -> ab` for `source(a) = range(b)` when the product class is enumerated.
    pub compose: HashMap<(usize, usize), usize>,
    /// Composable pairs whose product lies outside the enumerated classes.
    pub open_products: Vec<(usize, usize)>,
    index: HashMap<(usize, IsElement), usize>,
}

impl GroupoidModel {
    pub fn object_index(&self, p: &Path) -> Option<usize> {
        self.objects.binary_search(p).ok()
    }

    /// The class of `[s, ω]`, if it was enumerated.
    pub fn find(&self, c: &Correspondence, s: &IsElement, omega: usize) -> Option<usize> {
        self.index.get(&(omega, germ_key(c, s, &self.objects[omega]))).copied()
    }

    pub fn arrows_between(&self, source: usize, range: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&a| self.arrows[a].source == source && self.arrows[a].range == range).collect()
    }

    pub fn isotropy(&self, omega: usize) -> Vec<usize> {
        self.arrows_between(omega, omega)
    }
}

/// The determined range of `[s, ω]` at `depth`, testing all extensions of `ω` deep enough
/// for the image to reach full length.
fn determined_range(
    c: &Correspondence,
    r: &BTreeSet<ObjectId>,
    s: &IsElement,
    omega: &Path,
    depth: usize,
    deeper: &mut BTreeMap<usize, BoundaryTrunc>,
) -> Result<Option<Path>, ModelError> {
    let d = (-lag(s)).max(0) as usize;
    let ext: Vec<Path> = if omega.len() < depth || d == 0 {
        vec![omega.clone()]
    } else {
        if !deeper.contains_key(&(depth + d)) {
            deeper.insert(depth + d, build_boundary(c, r, depth + d)?);
        }
        deeper[&(depth + d)].points().iter().filter(|x| omega.is_prefix_of(x)).cloned().collect()
    };
    let mut out: Option<Path> = None;
    for x in &ext {
        let img = match germ_apply(c, s, x, depth + if omega.len() < depth { 0 } else { d }) {
            Applied::Point(p) | Applied::Partial(p) if x.len() < depth + d || p.len() >= depth => {
                BoundaryTrunc::truncate(&p, depth)
            }
            _ => return Ok(None),
        };
        match &out {
            None => out = Some(img),
            Some(prev) if *prev != img => return Ok(None),
            _ => {}
        }
    }
    Ok(out)
}

/// Enumerates germ classes `[s, ω]` with `|p|, |q| <= cap`, twists of word length
/// `<= wordcap` and `ω ∈ BoundaryTrunc(depth, R)`, keeping only arrows whose range is
/// determined at this depth.
pub fn enumerate_arrows(
    c: &Correspondence,
    r: &BTreeSet<ObjectId>,
    depth: usize,
    cap: usize,
    wordcap: usize,
) -> Result<GroupoidModel, ModelError> {
    let boundary = build_boundary(c, r, depth)?;
    let objects: Vec<Path> = boundary.points().to_vec();
    let elements: Vec<IsElement> =
        islice::bounded_elements(c, cap, wordcap).into_iter().filter(|s| matches!(s, IsElement::Triple { .. })).collect();
    let mut deeper = BTreeMap::new();
    let mut arrows = Vec::new();
    let mut index = HashMap::new();
    for (oi, omega) in objects.iter().enumerate() {
        for s in &elements {
            if !matches!(germ_apply(c, s, omega, depth), Applied::Point(_) | Applied::Partial(_)) {
                continue;
            }
            let key = germ_key(c, s, omega);
            if index.contains_key(&(oi, key.clone())) {
                continue;
            }
            let Some(range) = determined_range(c, r, s, omega, depth, &mut deeper)? else { continue };
            let Ok(ri) = objects.binary_search(&range) else { continue };
            index.insert((oi, key.clone()), arrows.len());
            arrows.push(ModelArrow { rep: s.clone(), source: oi, range: ri, flagged: false, key });
        }
    }
    // classes at a cylinder that agree on lag and image cannot be told apart at this depth
    let mut groups: HashMap<(usize, i64, Option<Path>), Vec<usize>> = HashMap::new();
    for (i, a) in arrows.iter().enumerate() {
        if objects[a.source].len() == depth {
            groups.entry((a.source, lag(&a.rep), raw_image(c, &a.rep, &objects[a.source]))).or_default().push(i);
        }
    }
    for ids in groups.values().filter(|v| v.len() > 1) {
        for &i in ids {
            arrows[i].flagged = true;
        }
    }
    let units = (0..objects.len())
        .map(|oi| index.get(&(oi, germ_key(c, &IsElement::One, &objects[oi]))).copied())
        .collect();
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
    for (i, a) in arrows.iter().enumerate() {
        by_source[a.source].push(i);
    }
    let mut compose = HashMap::new();
    let mut open_products = Vec::new();
    for b in 0..arrows.len() {
        for &a in &by_source[arrows[b].range] {
            let st = islice::multiply(c, &arrows[a].rep, &arrows[b].rep);
            let omega = arrows[b].source;
            match index.get(&(omega, germ_key(c, &st, &objects[omega]))) {
                Some(&ab) if arrows[ab].range == arrows[a].range => {
                    compose.insert((a, b), ab);
                }
                _ => open_products.push((a, b)),
            }
        }
    }
    Ok(GroupoidModel { depth, cap, wordcap, objects, arrows, units, compose, open_products, index })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelAxiomReport {
    pub violations: Vec<String>,
    /// Arrows whose inverse germ is not determined at this depth.
    pub open_inverses: Vec<usize>,
    pub triples_checked: usize,
}

/// Associativity on all enumerated composable triples, unit laws, and `[s,ω]^-1 = [s^*, θ_s(ω)]`.
pub fn check_axioms(c: &Correspondence, m: &GroupoidModel) -> ModelAxiomReport {
    let mut rep = ModelAxiomReport::default();
    let name = |a: usize| {
        format!("[{}, {}]", islice::display(c, &m.arrows[a].rep), c.path_name(&m.objects[m.arrows[a].source]))
    };
    let mut by_range: Vec<Vec<usize>> = vec![Vec::new(); m.objects.len()];
    for (i, a) in m.arrows.iter().enumerate() {
        by_range[a.range].push(i);
    }
    for (&(a, b), &ab) in &m.compose {
        if m.arrows[ab].source != m.arrows[b].source {
            rep.violations.push(format!("source of {} {}", name(a), name(b)));
        }
        for &x in &by_range[m.arrows[b].source] {
            let (Some(&bx), Some(&ab_x)) = (m.compose.get(&(b, x)), m.compose.get(&(ab, x))) else { continue };
            rep.triples_checked += 1;
            if m.compose.get(&(a, bx)) != Some(&ab_x) {
                rep.violations.push(format!("associativity at {} {} {}", name(a), name(b), name(x)));
            }
        }
    }
    for (i, a) in m.arrows.iter().enumerate() {
        let (Some(us), Some(ur)) = (m.units[a.source], m.units[a.range]) else {
            rep.violations.push(format!("missing unit for {}", name(i)));
            continue;
        };
        if m.compose.get(&(i, us)) != Some(&i) || m.compose.get(&(ur, i)) != Some(&i) {
            rep.violations.push(format!("unit law at {}", name(i)));
        }
        let inv = islice::adjoint(c, &a.rep);
        match m.find(c, &inv, a.range) {
            Some(j) if m.arrows[j].range == a.source => {
                if m.compose.get(&(j, i)) != Some(&us) || m.compose.get(&(i, j)) != Some(&ur) {
                    rep.violations.push(format!("inverse of {}", name(i)));
                }
            }
            _ => rep.open_inverses.push(i),
        }
    }
    rep
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictionReport {
    pub vacuous: bool,
    /// Germs with source and range in `R`, one per arrow of `G_R`.
    pub r_arrows: usize,
    pub orbit_size: usize,
    pub failures: Vec<String>,
}

impl RestrictionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks, in the Toeplitz model `Ω_{[0,∞)} ⋊ I` truncated at `depth > cap`, that germs from
/// `R` to `R` are exactly the arrows of `G_R` and that the orbit of `R` consists of the paths
/// with source in `R` (up to length `cap`).
pub fn restrict_to_r(
    c: &Correspondence,
    r: &BTreeSet<ObjectId>,
    depth: usize,
    cap: usize,
    wordcap: usize,
) -> Result<RestrictionReport, ModelError> {
    if depth <= cap {
        return Err(ModelError::DepthTooSmall { depth, cap });
    }
    c.check_regular_set(r).map_err(PathspaceError::from)?;
    let mut report = RestrictionReport { vacuous: r.is_empty(), r_arrows: 0, orbit_size: 0, failures: Vec::new() };
    if r.is_empty() {
        return Ok(report);
    }
    let m = enumerate_arrows(c, &BTreeSet::new(), depth, cap, wordcap)?;
    let b = c.base();
    let in_r = |p: &Path| p.is_empty() && r.contains(&p.rng());
    let mut orbit = BTreeSet::new();
    let mut pure: HashMap<(usize, usize), Vec<(usize, Arrow)>> = HashMap::new();
    for (i, a) in m.arrows.iter().enumerate() {
        let (src, rng) = (&m.objects[a.source], &m.objects[a.range]);
        if !in_r(src) {
            continue;
        }
        orbit.insert(rng.clone());
        if !in_r(rng) {
            continue;
        }
        match &a.rep {
            IsElement::Triple { p, g, q } if p.is_empty() && q.is_empty() => {
                pure.entry((a.source, a.range)).or_default().push((i, g.clone()));
            }
            other => report.failures.push(format!("germ {} from R to R is not pure", islice::display(c, other))),
        }
    }
    let expected_arrows: Vec<Arrow> =
        b.arrows_up_to(wordcap).into_iter().filter(|g| r.contains(&b.src(g)) && r.contains(&b.rng(g))).collect();
    report.r_arrows = pure.values().map(Vec::len).sum();
    let mut seen = BTreeSet::new();
    for list in pure.values() {
        for (_, g) in list {
            if !seen.insert(g.clone()) {
                report.failures.push(format!("two germs for {}", b.arrow_name(g)));
            }
        }
    }
    for g in &expected_arrows {
        if !seen.contains(g) {
            report.failures.push(format!("no germ for {}", b.arrow_name(g)));
        }
    }
    // composition in the model agrees with composition in G
    for list_a in pure.values() {
        for (ia, ga) in list_a {
            for list_b in pure.values() {
                for (ib, gb) in list_b {
                    if m.arrows[*ia].source != m.arrows[*ib].range {
                        continue;
                    }
                    let Some(gab) = b.compose(ga, gb) else { continue };
                    if gab.word_len() > wordcap {
                        continue;
                    }
                    let expected = pure.values().flatten().find(|(_, g)| *g == gab).map(|x| x.0);
                    if m.compose.get(&(*ia, *ib)).copied() != expected {
                        report.failures.push(format!("product {}·{}", b.arrow_name(ga), b.arrow_name(gb)));
                    }
                }
            }
        }
    }
    let expected_orbit: BTreeSet<Path> =
        (0..=cap).flat_map(|k| c.paths_of_length(k)).filter(|p| r.contains(&c.path_src(p))).collect();
    report.orbit_size = orbit.len();
    for p in expected_orbit.symmetric_difference(&orbit) {
        report.failures.push(format!("orbit mismatch at {}", c.path_name(p)));
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    Yes,
    No,
    Unknown(usize),
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::Yes => f.write_str("yes"),
            Finding::No => f.write_str("no"),
            Finding::Unknown(n) => write!(f, "unknown({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnosis {
    pub hausdorff: Finding,
    pub condition_l: Finding,
    pub cofinal: Finding,
    pub witnesses: Vec<String>,
}

/// Vertices reachable from `w` by paths `μ` with `r(μ) = w`, including `w`.
fn reach(c: &Correspondence, w: ObjectId) -> BTreeSet<ObjectId> {
    let mut seen = BTreeSet::from([w]);
    let mut stack = vec![w];
    while let Some(v) = stack.pop() {
        for e in c.fiber(v) {
            let s = c.edge(e).src;
            if seen.insert(s) {
                stack.push(s);
            }
        }
    }
    seen
}

/// A cycle none of whose vertices receives a second edge, as a path.
fn cycle_without_exit(c: &Correspondence) -> Option<Path> {
    for v in c.base().objects() {
        let mut cur = v;
        let mut edges = Vec::new();
        loop {
            let fib = c.fiber(cur);
            if fib.len() != 1 || edges.len() > c.base().num_objects() {
                break;
            }
            edges.push(fib[0]);
            cur = c.edge(fib[0]).src;
            if cur == v {
                return c.path_from_edges(&edges).ok();
            }
        }
    }
    None
}

/// Hausdorffness, Condition L (effectiveness) and cofinality relative to `R` (minimality).
/// Exact for graphs; for nontrivial cocycles only a bounded witness search is made.
pub fn diagnose(c: &Correspondence, r: &BTreeSet<ObjectId>, depth: usize, wordcap: usize) -> Diagnosis {
    let b = c.base();
    if b.is_trivial() {
        let mut witnesses = Vec::new();
        let condition_l = match cycle_without_exit(c) {
            Some(p) => {
                witnesses.push(format!("cycle without exit: {}", c.path_name(&p)));
                Finding::No
            }
            None => Finding::Yes,
        };
        let reaches: Vec<BTreeSet<ObjectId>> = b.objects().map(|w| reach(c, w)).collect();
        let mut cofinal = Finding::Yes;
        for u in b.objects().filter(|u| !r.contains(u)) {
            if let Some(w) = b.objects().find(|w| !reaches[w.0].contains(&u)) {
                witnesses.push(format!("{} does not reach finite boundary paths at {}", b.object_name(w), b.object_name(u)));
                cofinal = Finding::No;
            }
        }
        // vertices on cycles: v reaches itself through a nonempty path
        let cyclic: Vec<ObjectId> =
            b.objects().filter(|&v| c.fiber(v).iter().any(|&e| reaches[c.edge(e).src.0].contains(&v))).collect();
        for &v in &cyclic {
            if let Some(w) = b.objects().find(|w| !reaches[w.0].contains(&v)) {
                witnesses.push(format!("{} does not reach the cycle through {}", b.object_name(w), b.object_name(v)));
                cofinal = Finding::No;
            }
        }
        return Diagnosis { hausdorff: Finding::Yes, condition_l, cofinal, witnesses };
    }
    let mut witnesses = Vec::new();
    let paths: Vec<Path> = (0..depth).flat_map(|k| c.paths_of_length(k)).collect();
    for g in b.arrows_up_to(wordcap) {
        if b.is_unit(&g) {
            continue;
        }
        for p in paths.iter().filter(|p| p.rng() == b.src(&g)) {
            let Ok((gp, h)) = c.act_on_path(&g, p) else { continue };
            if gp != *p || b.is_unit(&h) {
                continue;
            }
            // below p, look for a node strongly fixed by g|_p
            let strongly_fixed = (1..=depth - p.len()).flat_map(|k| c.paths_of_length(k)).find(|u| {
                u.rng() == c.path_src(p)
                    && matches!(c.act_on_path(&h, u), Ok((hu, hr)) if hu == *u && b.is_unit(&hr))
            });
            if let Some(u) = strongly_fixed {
                witnesses.push(format!(
                    "{} fixes {} with restriction {} and strongly fixes {} below it",
                    b.arrow_name(&g),
                    c.path_name(p),
                    b.arrow_name(&h),
                    c.path_name(&u)
                ));
            }
        }
    }
    Diagnosis { hausdorff: Finding::Unknown(depth), condition_l: Finding::Unknown(depth), cofinal: Finding::Unknown(depth), witnesses }
}
