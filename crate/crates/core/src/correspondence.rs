//! Discrete groupoid correspondences `X: G <- G` in fundamental-domain form.
//!
//! `X` is recorded as an edge set `F` with range and source vertices together with the
//! self-similar cocycle `(g, x) -> (g∘x, g|_x)`. A point of `X` is a pair `(x, g)` with
//! `x ∈ F` and `src(x) = rng(g)`; the left action is `h·(x, g) = (h∘x, h|_x g)`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::base::{Arrow, Base};
use crate::groupoid::ObjectId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: ObjectId,
    pub rng: ObjectId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrespondenceError {
    #[error("arrow {arrow} cannot act on edge {edge}: source and range differ")]
    NotComposable { arrow: String, edge: String },
    #[error("no cocycle entry for ({arrow}, {edge})")]
    MissingEntry { arrow: String, edge: String },
    #[error("path is not composable: {0}")]
    BadPath(String),
    #[error("malformed point of X: {0}")]
    BadPoint(String),
    #[error("R is not invariant: arrow {0} joins R to its complement")]
    NotInvariant(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

/// A composable edge sequence `x_1 … x_n` with `src(x_i) = rng(x_{i+1})`, or a vertex
/// when `n = 0`. The stored vertex is the range of the path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    rng: ObjectId,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn vertex(v: ObjectId) -> Self {
        Path { rng: v, edges: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn rng(&self) -> ObjectId {
        self.rng
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Prefix of length `k` (`k <= len`).
    pub fn prefix(&self, k: usize) -> Path {
        Path { rng: self.rng, edges: self.edges[..k.min(self.edges.len())].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.rng == other.rng && other.edges.starts_with(&self.edges)
    }
}

/// Length first, then edge indices, then the vertex.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.edges.len(), &self.edges, self.rng).cmp(&(other.edges.len(), &other.edges, other.rng))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A point `(x, g)` of `X = F ×_{s,r} G`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XPoint {
    pub edge: EdgeId,
    pub twist: Arrow,
}

/// Checked invariants of a correspondence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Invariant {
    Base,
    Endpoints,
    Missing,
    Range,
    RestrictionSource,
    RestrictionRange,
    Unit,
    Cocycle,
    Bijection,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Base => "base",
            Invariant::Endpoints => "endpoints",
            Invariant::Missing => "missing",
            Invariant::Range => "range",
            Invariant::RestrictionSource => "restriction-source",
            Invariant::RestrictionRange => "restriction-range",
            Invariant::Unit => "unit",
            Invariant::Cocycle => "cocycle",
            Invariant::Bijection => "bijection",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrViolation {
    pub invariant: Invariant,
    pub witness: String,
}

impl fmt::Display for CorrViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.witness)
    }
}

/// Result of the properness analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Properness {
    /// Objects over which `r: F -> G^0` is proper (finite fibres): all of them for finite `F`.
    pub y_max: BTreeSet<ObjectId>,
    /// Objects whose fibre is nonempty and finite.
    pub regular: BTreeSet<ObjectId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    base: Base,
    edges: Vec<Edge>,
    rows: BTreeMap<(Arrow, EdgeId), (EdgeId, Arrow)>,
}

impl Correspondence {
    /// `rows` lists cocycle entries `(g, x) -> (g∘x, g|_x)`. Unit rows may be omitted. For a
    /// presented group, rows for generators suffice; inverse letters and longer words are derived.
    pub fn new(base: Base, edges: Vec<Edge>, rows: BTreeMap<(Arrow, EdgeId), (EdgeId, Arrow)>) -> Self {
        Self { base, edges, rows }
    }

    /// A directed graph: the base is the vertex set and the cocycle is trivial.
    pub fn graph(base: Base, edges: Vec<Edge>) -> Self {
        Self::new(base, edges, BTreeMap::new())
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn rows(&self) -> &BTreeMap<(Arrow, EdgeId), (EdgeId, Arrow)> {
        &self.rows
    }

    pub fn set_row(&mut self, g: Arrow, x: EdgeId, image: EdgeId, restriction: Arrow) {
        self.rows.insert((g, x), (image, restriction));
    }

    pub fn edge(&self, x: EdgeId) -> &Edge {
        &self.edges[x.0]
    }

    pub fn edge_index(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn edge_name(&self, x: EdgeId) -> &str {
        &self.edges[x.0].name
    }

    pub fn fiber(&self, v: ObjectId) -> Vec<EdgeId> {
        self.edge_ids().filter(|&x| self.edge(x).rng == v).collect()
    }

    /// True when every edge has a one-character name, so paths print without separators.
    pub fn compact_names(&self) -> bool {
        self.edges.iter().all(|e| e.name.chars().count() == 1)
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.is_empty() {
            return format!("@{}", self.base.object_name(p.rng));
        }
        let sep = if self.compact_names() { "" } else { "." };
        p.edges.iter().map(|&x| self.edge_name(x)).collect::<Vec<_>>().join(sep)
    }

    /// Parses `@v`, a dotted edge list, or juxtaposed one-character edge names.
    pub fn parse_path(&self, s: &str) -> Result<Path, CorrespondenceError> {
        let s = s.trim();
        if let Some(v) = s.strip_prefix('@') {
            let v = self.base.object_index(v).ok_or_else(|| CorrespondenceError::UnknownObject(v.to_string()))?;
            return Ok(Path::vertex(v));
        }
        let names: Vec<String> = if s.contains('.') || !self.compact_names() {
            s.split('.').map(|t| t.trim().to_string()).collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        let edges = names
            .iter()
            .map(|n| self.edge_index(n).ok_or_else(|| CorrespondenceError::BadPath(format!("unknown edge `{n}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        self.path_from_edges(&edges)
    }

    pub fn path_from_edges(&self, edges: &[EdgeId]) -> Result<Path, CorrespondenceError> {
        let first = edges.first().ok_or_else(|| CorrespondenceError::BadPath("empty edge list".into()))?;
        for w in edges.windows(2) {
            if self.edge(w[0]).src != self.edge(w[1]).rng {
                return Err(CorrespondenceError::BadPath(format!(
                    "{} then {}",
                    self.edge_name(w[0]),
                    self.edge_name(w[1])
                )));
            }
        }
        Ok(Path { rng: self.edge(*first).rng, edges: edges.to_vec() })
    }

    pub fn path_src(&self, p: &Path) -> ObjectId {
        p.edges.last().map_or(p.rng, |&x| self.edge(x).src)
    }

    /// `p ⌢ q`, defined when `src(p) = rng(q)`.
    pub fn concat(&self, p: &Path, q: &Path) -> Option<Path> {
        if self.path_src(p) != q.rng {
            return None;
        }
        let mut edges = p.edges.clone();
        edges.extend_from_slice(&q.edges);
        Some(Path { rng: p.rng, edges })
    }

    /// The tail `t` with `p = q ⌢ t`, if `q` is a prefix of `p`.
    pub fn strip_prefix(&self, p: &Path, q: &Path) -> Option<Path> {
        if !q.is_prefix_of(p) {
            return None;
        }
        Some(Path { rng: self.path_src(q), edges: p.edges[q.len()..].to_vec() })
    }

    /// Extends `p` by one edge at its source end.
    pub fn extend(&self, p: &Path, x: EdgeId) -> Option<Path> {
        (self.edge(x).rng == self.path_src(p)).then(|| {
            let mut edges = p.edges.clone();
            edges.push(x);
            Path { rng: p.rng, edges }
        })
    }

    /// All composable edge sequences of length `n`, in lexicographic order.
    /// `n = 0` yields one vertex path per object.
    pub fn paths_of_length(&self, n: usize) -> Vec<Path> {
        let mut level: Vec<Path> = self.base.objects().map(Path::vertex).collect();
        for k in 0..n {
            let mut next = Vec::new();
            if k == 0 {
                for x in self.edge_ids() {
                    next.push(Path { rng: self.edge(x).rng, edges: vec![x] });
                }
            } else {
                for p in &level {
                    for x in self.edge_ids() {
                        if let Some(q) = self.extend(p, x) {
                            next.push(q);
                        }
                    }
                }
            }
            level = next;
        }
        level
    }

    /// `(g∘x, g|_x)` for `src(g) = rng(x)`.
    pub fn act(&self, g: &Arrow, x: EdgeId) -> Result<(EdgeId, Arrow), CorrespondenceError> {
        let not_comp = || CorrespondenceError::NotComposable {
            arrow: self.base.arrow_name(g),
            edge: self.edge_name(x).to_string(),
        };
        let missing = || CorrespondenceError::MissingEntry {
            arrow: self.base.arrow_name(g),
            edge: self.edge_name(x).to_string(),
        };
        if self.base.src(g) != self.edge(x).rng {
            return Err(not_comp());
        }
        if let Some((y, r)) = self.rows.get(&(g.clone(), x)) {
            return Ok((*y, r.clone()));
        }
        if self.base.is_unit(g) {
            return Ok((x, self.base.unit(self.edge(x).src)));
        }
        match g {
            Arrow::Index(_) => Err(missing()),
            Arrow::Word(w) => {
                if w.len() == 1 && w[0].inverse {
                    // g^-1 ∘ x = y where g∘y = x, and g^-1|_x = (g|_y)^-1
                    let gen = Arrow::Word(vec![w[0].inv()]);
                    for y in self.edge_ids() {
                        if let Some((img, r)) = self.rows.get(&(gen.clone(), y)) {
                            if *img == x {
                                return Ok((y, self.base.inverse(r)));
                            }
                        }
                    }
                    return Err(missing());
                }
                if w.len() == 1 {
                    return Err(missing());
                }
                let (rest, last) = w.split_at(w.len() - 1);
                let (y, r1) = self.act(&Arrow::Word(last.to_vec()), x)?;
                let (z, r2) = self.act(&Arrow::Word(rest.to_vec()), y)?;
                let r = self.base.compose(&r2, &r1).ok_or_else(not_comp)?;
                Ok((z, r))
            }
        }
    }

    /// `(g∘p, g|_p)`, threading the cocycle edge by edge. For a vertex path the result is
    /// `(rng(g), g)`.
    pub fn act_on_path(&self, g: &Arrow, p: &Path) -> Result<(Path, Arrow), CorrespondenceError> {
        if self.base.src(g) != p.rng {
            return Err(CorrespondenceError::NotComposable {
                arrow: self.base.arrow_name(g),
                edge: self.path_name(p),
            });
        }
        let mut cur = g.clone();
        let mut edges = Vec::with_capacity(p.len());
        for &x in &p.edges {
            let (y, r) = self.act(&cur, x)?;
            edges.push(y);
            cur = r;
        }
        Ok((Path { rng: self.base.rng(g), edges }, cur))
    }

    /// Left action on a point of `X`: `h·(x, g) = (h∘x, h|_x g)`.
    pub fn act_on_point(&self, h: &Arrow, p: &XPoint) -> Result<XPoint, CorrespondenceError> {
        let (y, r) = self.act(h, p.edge)?;
        let twist = self.base.compose(&r, &p.twist).ok_or_else(|| CorrespondenceError::BadPoint(self.point_name(p)))?;
        Ok(XPoint { edge: y, twist })
    }

    pub fn check_point(&self, p: &XPoint) -> Result<(), CorrespondenceError> {
        if p.edge.0 >= self.edges.len() || self.edge(p.edge).src != self.base.rng(&p.twist) {
            return Err(CorrespondenceError::BadPoint(format!("{:?}", p)));
        }
        Ok(())
    }

    pub fn point_name(&self, p: &XPoint) -> String {
        format!("({}, {})", self.edge_name(p.edge), self.base.arrow_name(&p.twist))
    }

    /// The unique `h` with `x·h = y`, or `None` when `x` and `y` lie in different right orbits.
    pub fn bracket(&self, x: &XPoint, y: &XPoint) -> Result<Option<Arrow>, CorrespondenceError> {
        self.check_point(x)?;
        self.check_point(y)?;
        if x.edge != y.edge {
            return Ok(None);
        }
        let inv = self.base.inverse(&x.twist);
        Ok(self.base.compose(&inv, &y.twist))
    }

    pub fn right_act(&self, x: &XPoint, h: &Arrow) -> Option<XPoint> {
        self.base.compose(&x.twist, h).map(|twist| XPoint { edge: x.edge, twist })
    }

    /// All points of `X` whose twist has word length `<= wordcap`.
    pub fn points_up_to(&self, wordcap: usize) -> Vec<XPoint> {
        let arrows = self.base.arrows_up_to(wordcap);
        let mut out = Vec::new();
        for x in self.edge_ids() {
            for g in &arrows {
                if self.base.rng(g) == self.edge(x).src {
                    out.push(XPoint { edge: x, twist: g.clone() });
                }
            }
        }
        out
    }

    pub fn properness(&self) -> Properness {
        let y_max = self.base.objects().collect();
        let regular = self.base.objects().filter(|&v| !self.fiber(v).is_empty()).collect();
        Properness { y_max, regular }
    }

    /// Checks that `r` is a valid regularity set: known objects, invariant under `G`.
    pub fn check_regular_set(&self, r: &BTreeSet<ObjectId>) -> Result<(), CorrespondenceError> {
        if let Some(v) = r.iter().find(|v| v.0 >= self.base.num_objects()) {
            return Err(CorrespondenceError::UnknownObject(format!("#{}", v.0)));
        }
        for g in self.base.arrows_up_to(1) {
            if r.contains(&self.base.src(&g)) != r.contains(&self.base.rng(&g)) {
                return Err(CorrespondenceError::NotInvariant(self.base.arrow_name(&g)));
            }
        }
        Ok(())
    }

    /// Vertices of `r` whose fibre is empty. Allowed, but `T_v = 0` in the quotient.
    pub fn degenerate_vertices(&self, r: &BTreeSet<ObjectId>) -> Vec<ObjectId> {
        r.iter().copied().filter(|&v| self.fiber(v).is_empty()).collect()
    }

    /// All violated invariants with witnesses. Presented groups are checked on words of
    /// length `<= wordcap`.
    pub fn validate(&self, wordcap: usize) -> Vec<CorrViolation> {
        let mut out = Vec::new();
        let push = |out: &mut Vec<CorrViolation>, invariant, witness: String| {
            out.push(CorrViolation { invariant, witness })
        };
        if let Base::Finite(g) = &self.base {
            for v in g.validate() {
                push(&mut out, Invariant::Base, v.to_string());
            }
            if !out.is_empty() {
                return out;
            }
        }
        let n_obj = self.base.num_objects();
        for e in &self.edges {
            if e.src.0 >= n_obj || e.rng.0 >= n_obj {
                push(&mut out, Invariant::Endpoints, format!("edge {} has unknown endpoint", e.name));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let b = &self.base;
        let arrows = b.arrows_up_to(wordcap);
        let an = |g: &Arrow| b.arrow_name(g);
        let mut acts: BTreeMap<(Arrow, EdgeId), (EdgeId, Arrow)> = BTreeMap::new();
        for g in &arrows {
            for x in self.fiber(b.src(g)) {
                let xn = self.edge_name(x);
                match self.act(g, x) {
                    Err(e) => push(&mut out, Invariant::Missing, e.to_string()),
                    Ok((y, r)) => {
                        if self.edge(y).rng != b.rng(g) {
                            push(&mut out, Invariant::Range, format!("({}, {xn}) -> {}", an(g), self.edge_name(y)));
                        }
                        if b.src(&r) != self.edge(x).src {
                            push(&mut out, Invariant::RestrictionSource, format!("({}, {xn}) restriction {}", an(g), an(&r)));
                        }
                        if b.rng(&r) != self.edge(y).src {
                            push(&mut out, Invariant::RestrictionRange, format!("({}, {xn}) restriction {}", an(g), an(&r)));
                        }
                        acts.insert((g.clone(), x), (y, r));
                    }
                }
            }
        }
        for x in self.edge_ids() {
            let u = b.unit(self.edge(x).rng);
            let expect = (x, b.unit(self.edge(x).src));
            if let Ok(got) = self.act(&u, x) {
                if got != expect {
                    push(
                        &mut out,
                        Invariant::Unit,
                        format!("({}, {}) -> ({}, {})", an(&u), self.edge_name(x), self.edge_name(got.0), an(&got.1)),
                    );
                }
            }
        }
        for h in &arrows {
            for g in &arrows {
                let Some(hg) = b.compose(h, g) else { continue };
                for x in self.fiber(b.src(g)) {
                    let Some((y, gx)) = acts.get(&(g.clone(), x)).cloned() else { continue };
                    let Ok((z, hy)) = self.act(h, y) else { continue };
                    let Ok((lhs_edge, lhs_r)) = self.act(&hg, x) else {
                        push(&mut out, Invariant::Missing, format!("({}, {})", an(&hg), self.edge_name(x)));
                        continue;
                    };
                    let rhs_r = b.compose(&hy, &gx);
                    if lhs_edge != z || Some(&lhs_r) != rhs_r.as_ref() {
                        push(
                            &mut out,
                            Invariant::Cocycle,
                            format!(
                                "h={}, g={}, x={}: (hg)∘x={} (hg)|_x={} but h∘(g∘x)={} h|_(g∘x)·g|_x={}",
                                an(h),
                                an(g),
                                self.edge_name(x),
                                self.edge_name(lhs_edge),
                                an(&lhs_r),
                                self.edge_name(z),
                                rhs_r.as_ref().map_or("undefined".to_string(), an)
                            ),
                        );
                    }
                }
            }
        }
        for g in &arrows {
            let dom = self.fiber(b.src(g));
            let cod = self.fiber(b.rng(g));
            let img: Vec<EdgeId> = dom.iter().filter_map(|&x| acts.get(&(g.clone(), x)).map(|p| p.0)).collect();
            let distinct: BTreeSet<EdgeId> = img.iter().copied().collect();
            if distinct.len() != img.len() || distinct != cod.iter().copied().collect() {
                push(&mut out, Invariant::Bijection, format!("{} does not permute the fibres", an(g)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn path_counts() {
        let o2 = fixtures::o_n(2);
        assert_eq!(o2.paths_of_length(3).len(), 8);
        let single = fixtures::single_edge();
        assert_eq!(single.paths_of_length(2).len(), 0);
        assert_eq!(single.paths_of_length(0).len(), 2);
        let lp = fixtures::single_loop();
        assert_eq!(lp.paths_of_length(5).len(), 1);
    }

    #[test]
    fn prefix_extension_recurrence() {
        for c in [fixtures::o_n(3), fixtures::singular_graph(), fixtures::odometer()] {
            for n in 0..4 {
                let level = c.paths_of_length(n);
                let expected: usize = level.iter().map(|p| c.fiber(c.path_src(p)).len()).sum();
                assert_eq!(c.paths_of_length(n + 1).len(), expected);
            }
        }
    }

    #[test]
    fn odometer_actions() {
        let c = fixtures::odometer();
        let z = c.base().parse_arrow("z").unwrap();
        let e = c.base().parse_arrow("e").unwrap();
        let (p, r) = c.act_on_path(&z, &c.parse_path("11").unwrap()).unwrap();
        assert_eq!((c.path_name(&p), r.clone()), ("00".to_string(), z.clone()));
        let (p, r) = c.act_on_path(&z, &c.parse_path("10").unwrap()).unwrap();
        assert_eq!((c.path_name(&p), r), ("01".to_string(), e));
    }

    #[test]
    fn unit_acts_trivially_on_paths() {
        for c in [fixtures::odometer(), fixtures::o_n(2), fixtures::singular_graph()] {
            for p in c.paths_of_length(3) {
                let u = c.base().unit(p.rng());
                let (q, r) = c.act_on_path(&u, &p).unwrap();
                assert_eq!(q, p);
                assert_eq!(r, c.base().unit(c.path_src(&p)));
            }
        }
    }

    #[test]
    fn brackets() {
        let o2 = fixtures::o_n(2);
        let v = o2.base().unit(ObjectId(0));
        let a = XPoint { edge: EdgeId(0), twist: v.clone() };
        let b = XPoint { edge: EdgeId(1), twist: v.clone() };
        assert_eq!(o2.bracket(&a, &a).unwrap(), Some(v));
        assert_eq!(o2.bracket(&a, &b).unwrap(), None);

        let od = fixtures::odometer();
        let z = od.base().parse_arrow("z").unwrap();
        let zi = od.base().parse_arrow("z^-1").unwrap();
        let e = od.base().parse_arrow("e").unwrap();
        let x = XPoint { edge: od.edge_index("0").unwrap(), twist: z };
        let y = XPoint { edge: od.edge_index("0").unwrap(), twist: e };
        let h = od.bracket(&x, &y).unwrap().unwrap();
        assert_eq!(h, zi);
        assert_eq!(od.right_act(&x, &h), Some(y));
    }

    #[test]
    fn bracket_rejects_malformed_points() {
        let g = fixtures::single_edge();
        // e1 has source w, but the unit of v has range v
        let bad = XPoint { edge: EdgeId(0), twist: g.base().unit(g.base().object_index("v").unwrap()) };
        assert!(g.bracket(&bad, &bad).is_err());
    }

    #[test]
    fn properness_sets() {
        let o2 = fixtures::o_n(2);
        let p = o2.properness();
        assert_eq!(p.regular.len(), 1);
        assert_eq!(p.y_max.len(), 1);
        let s = fixtures::single_edge();
        let p = s.properness();
        let v = s.base().object_index("v").unwrap();
        assert_eq!(p.regular, [v].into_iter().collect());
        assert_eq!(p.y_max.len(), 2);
        let edgeless = Correspondence::graph(
            Base::Finite(crate::groupoid::FiniteGroupoid::set_groupoid(&["v"]).unwrap()),
            vec![],
        );
        assert!(edgeless.properness().regular.is_empty());
    }

    #[test]
    fn fixtures_validate() {
        for c in fixtures::all() {
            assert!(c.1.validate(4).is_empty(), "{}: {:?}", c.0, c.1.validate(4));
        }
    }

    #[test]
    fn broken_odometer_reports_cocycle() {
        let c = fixtures::broken_odometer();
        let report = c.validate(3);
        let cocycle: Vec<_> = report.iter().filter(|v| v.invariant == Invariant::Cocycle).collect();
        assert!(!cocycle.is_empty(), "{report:?}");
        assert!(cocycle[0].witness.contains("h="));
    }

    #[test]
    fn non_invariant_regular_set_rejected() {
        let c = fixtures::groupoid_swap();
        let v = c.base().object_index("u").unwrap();
        assert!(matches!(c.check_regular_set(&[v].into_iter().collect()), Err(CorrespondenceError::NotInvariant(_))));
        let all: BTreeSet<_> = c.base().objects().collect();
        assert!(c.check_regular_set(&all).is_ok());
    }
}
