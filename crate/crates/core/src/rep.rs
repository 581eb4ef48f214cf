//! Finite matrix representations on truncated Fock and boundary spaces, and exact checks
//! of the Toeplitz relations, Cuntz–Pimsner covariance and covariant-representation
//! conditions.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::base::Arrow;
use crate::correspondence::{Correspondence, EdgeId, Path, XPoint};
use crate::groupoid::ObjectId;
use crate::islice::{self, IsElement};
use crate::pathspace::{build_boundary, PathspaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("matrix dimensions differ: {0} and {1}")]
    Dimension(usize, usize),
    #[error("vertex {0} is not in R")]
    NotInR(String),
    #[error("truncation level must be at least 1")]
    EmptyTruncation,
    #[error(transparent)]
    Pathspace(#[from] PathspaceError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub path: Path,
    pub twist: Arrow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Fock,
    Boundary,
}

/// Labels `(p, g)` with `src(p) = rng(g)`: all paths of length `<= n` for the Fock space,
/// the points of `BoundaryTrunc(n, R)` for the boundary space. Over a trivial base the
/// boundary labels are bare points (the twist is the unit).
#[derive(Debug, Clone)]
pub struct IndexedBasis {
    pub kind: BasisKind,
    pub n: usize,
    pub wordcap: usize,
    presented: bool,
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
}

impl IndexedBasis {
    fn from_paths(c: &Correspondence, kind: BasisKind, n: usize, wordcap: usize, paths: Vec<Path>, bare: bool) -> Self {
        let b = c.base();
        let arrows = b.arrows_up_to(wordcap);
        let mut labels = Vec::new();
        for p in paths {
            let v = c.path_src(&p);
            if bare {
                labels.push(Label { path: p, twist: b.unit(v) });
                continue;
            }
            for g in arrows.iter().filter(|g| b.rng(g) == v) {
                labels.push(Label { path: p.clone(), twist: g.clone() });
            }
        }
        labels.sort();
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        let presented = matches!(b, crate::base::Base::Presented(_));
        Self { kind, n, wordcap, presented, labels, index }
    }

    pub fn fock(c: &Correspondence, n: usize, wordcap: usize) -> Self {
        let paths = (0..=n).flat_map(|k| c.paths_of_length(k)).collect();
        Self::from_paths(c, BasisKind::Fock, n, wordcap, paths, false)
    }

    pub fn boundary(c: &Correspondence, r: &BTreeSet<ObjectId>, n: usize, wordcap: usize) -> Result<Self, RepError> {
        let points = build_boundary(c, r, n)?.points().to_vec();
        Ok(Self::from_paths(c, BasisKind::Boundary, n, wordcap, points, c.base().is_trivial()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn find(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn level(&self, i: usize) -> usize {
        self.labels[i].path.len()
    }

    /// Below the top level, and for presented groups strictly inside the word cap.
    pub fn is_interior(&self, i: usize) -> bool {
        self.level(i) < self.n && (!self.presented || self.labels[i].twist.word_len() < self.wordcap)
    }

    pub fn label_name(&self, c: &Correspondence, i: usize) -> String {
        let l = &self.labels[i];
        if c.base().is_trivial() {
            c.path_name(&l.path)
        } else {
            format!("({}, {})", c.path_name(&l.path), c.base().arrow_name(&l.twist))
        }
    }
}

/// A 0/1 matrix with at most one 1 per row and column, stored by columns. Word-capped
/// bases are handled with flags: `escaped[j]` marks a column whose image leaves the basis,
/// `coescaped[i]` a row that receives a label from outside the basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialPermMatrix {
    map: Vec<Option<usize>>,
    escaped: Vec<bool>,
    coescaped: Vec<bool>,
}

impl PartialPermMatrix {
    pub fn zero(n: usize) -> Self {
        Self { map: vec![None; n], escaped: vec![false; n], coescaped: vec![false; n] }
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).map(Some).collect(), escaped: vec![false; n], coescaped: vec![false; n] }
    }

    pub fn from_fn<F: Fn(usize) -> Option<usize>>(n: usize, f: F) -> Self {
        let mut m = Self::zero(n);
        for j in 0..n {
            m.map[j] = f(j);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.map.len()
    }

    pub fn image(&self, j: usize) -> Option<usize> {
        self.map[j]
    }

    pub fn is_escaped(&self, j: usize) -> bool {
        self.escaped[j]
    }

    pub fn ones(&self) -> usize {
        self.map.iter().flatten().count()
    }

    /// Injective on its support.
    pub fn is_partial_perm(&self) -> bool {
        let mut seen = HashSet::new();
        self.map.iter().flatten().all(|i| seen.insert(*i))
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self, RepError> {
        if self.dim() != other.dim() {
            return Err(RepError::Dimension(self.dim(), other.dim()));
        }
        let n = self.dim();
        let mut out = Self::zero(n);
        for j in 0..n {
            if other.escaped[j] {
                out.escaped[j] = true;
            } else if let Some(i) = other.map[j] {
                out.escaped[j] = self.escaped[i];
                out.map[j] = if self.escaped[i] { None } else { self.map[i] };
            }
        }
        for k in 0..n {
            out.coescaped[k] = self.coescaped[k];
        }
        for i in 0..n {
            if other.coescaped[i] {
                if let Some(k) = self.map[i] {
                    out.coescaped[k] = true;
                }
            }
        }
        Ok(out)
    }

    /// The adjoint.
    pub fn transpose(&self) -> Self {
        let n = self.dim();
        let mut out = Self::zero(n);
        for (j, i) in self.map.iter().enumerate() {
            if let Some(i) = i {
                out.map[*i] = Some(j);
            }
        }
        out.escaped = self.coescaped.clone();
        out.coescaped = self.escaped.clone();
        for (i, e) in out.escaped.iter().enumerate() {
            if *e {
                out.map[i] = None;
            }
        }
        out
    }

    /// Compares column `j`; `None` if either side leaves the basis there.
    pub fn agrees_at(&self, other: &Self, j: usize) -> Option<bool> {
        if self.escaped[j] || other.escaped[j] {
            return None;
        }
        Some(self.map[j] == other.map[j])
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut d = DenseMatrix::zero(n);
        for (j, i) in self.map.iter().enumerate() {
            if let Some(i) = i {
                d.set(*i, j, 1);
            }
        }
        d
    }

    /// Sparse `(row, col, value)` triplets.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        let mut t: Vec<(usize, usize, i64)> =
            self.map.iter().enumerate().filter_map(|(j, i)| i.map(|i| (i, j, 1))).collect();
        t.sort();
        t
    }
}

/// Row-major integer matrix. Used for defects and as an independent product oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<i64>,
}

impl DenseMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, data: vec![0; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    /// Indices `i` with a nonzero entry in row `i` or column `i`.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) != 0 {
                    s.insert(i);
                    s.insert(j);
                }
            }
        }
        s
    }
}

/// The generating matrices of a Toeplitz representation.
#[derive(Debug, Clone)]
pub struct Generators {
    pub basis: IndexedBasis,
    pub edges: Vec<(EdgeId, PartialPermMatrix)>,
    pub arrows: Vec<(Arrow, PartialPermMatrix)>,
    pub points: Vec<(XPoint, PartialPermMatrix)>,
    pub projections: Vec<(ObjectId, PartialPermMatrix)>,
}

fn prepend(c: &Correspondence, e: EdgeId, p: &Path) -> Option<Path> {
    let single = c.path_from_edges(&[e]).ok()?;
    c.concat(&single, p)
}

/// `T_e: (p, g) -> (e p, g)` below the top level.
pub fn edge_matrix(c: &Correspondence, basis: &IndexedBasis, e: EdgeId) -> PartialPermMatrix {
    let n = basis.len();
    let mut m = PartialPermMatrix::zero(n);
    for j in 0..n {
        let l = &basis.labels[j];
        if l.path.len() >= basis.n {
            continue;
        }
        if let Some(ep) = prepend(c, e, &l.path) {
            match basis.find(&Label { path: ep, twist: l.twist.clone() }) {
                Some(i) => m.map[j] = Some(i),
                None => m.escaped[j] = true,
            }
        }
    }
    m
}

/// The label `h·(p, k) = (h∘p, h|_p k)`, or `None` when not composable.
fn act_label(c: &Correspondence, h: &Arrow, l: &Label) -> Option<Label> {
    let (hp, r) = c.act_on_path(h, &l.path).ok()?;
    let twist = c.base().compose(&r, &l.twist)?;
    Some(Label { path: hp, twist })
}

/// `T_g: (p, k) -> (g∘p, g|_p k)` on every level.
pub fn arrow_matrix(c: &Correspondence, basis: &IndexedBasis, g: &Arrow) -> PartialPermMatrix {
    let b = c.base();
    let n = basis.len();
    let gi = b.inverse(g);
    let mut m = PartialPermMatrix::zero(n);
    for j in 0..n {
        let l = &basis.labels[j];
        if l.path.rng() != b.src(g) {
            continue;
        }
        match act_label(c, g, l).and_then(|x| basis.find(&x)) {
            Some(i) => m.map[j] = Some(i),
            None => m.escaped[j] = true,
        }
    }
    for i in 0..n {
        let l = &basis.labels[i];
        if l.path.rng() == b.rng(g) && act_label(c, &gi, l).and_then(|x| basis.find(&x)).is_none() {
            m.coescaped[i] = true;
        }
    }
    m
}

/// `T_x` for `x = (e, h)`: `(p, k) -> (e (h∘p), h|_p k)` below the top level.
pub fn point_matrix(c: &Correspondence, basis: &IndexedBasis, x: &XPoint) -> PartialPermMatrix {
    let b = c.base();
    let n = basis.len();
    let hi = b.inverse(&x.twist);
    let mut m = PartialPermMatrix::zero(n);
    for j in 0..n {
        let l = &basis.labels[j];
        if l.path.len() >= basis.n || l.path.rng() != b.src(&x.twist) {
            continue;
        }
        let image = act_label(c, &x.twist, l).and_then(|hl| {
            let path = prepend(c, x.edge, &hl.path)?;
            basis.find(&Label { path, twist: hl.twist })
        });
        match image {
            Some(i) => m.map[j] = Some(i),
            None => m.escaped[j] = true,
        }
    }
    for i in 0..n {
        let l = &basis.labels[i];
        if l.path.edges().first() != Some(&x.edge) {
            continue;
        }
        let tail = c.strip_prefix(&l.path, &l.path.prefix(1)).expect("prefix");
        let pre = act_label(c, &hi, &Label { path: tail, twist: l.twist.clone() });
        if pre.and_then(|x| basis.find(&x)).is_none() {
            m.coescaped[i] = true;
        }
    }
    m
}

pub fn projection_matrix(basis: &IndexedBasis, v: ObjectId) -> PartialPermMatrix {
    PartialPermMatrix::from_fn(basis.len(), |j| (basis.labels[j].path.rng() == v).then_some(j))
}

fn generators_on(c: &Correspondence, basis: IndexedBasis) -> Generators {
    let b = c.base();
    let edges = c.edge_ids().map(|e| (e, edge_matrix(c, &basis, e))).collect();
    let arrows = b.arrows_up_to(basis.wordcap).into_iter().map(|g| {
        let m = arrow_matrix(c, &basis, &g);
        (g, m)
    });
    let arrows = arrows.collect();
    let points = c.points_up_to(basis.wordcap).into_iter().map(|x| {
        let m = point_matrix(c, &basis, &x);
        (x, m)
    });
    let points = points.collect();
    let projections = b.objects().map(|v| (v, projection_matrix(&basis, v))).collect();
    Generators { basis, edges, arrows, points, projections }
}

/// `T_e`, `T_g`, `T_x` and `P_v` on the Fock space truncated at level `n`.
pub fn fock_generators(c: &Correspondence, n: usize, wordcap: usize) -> Result<Generators, RepError> {
    if n == 0 {
        return Err(RepError::EmptyTruncation);
    }
    Ok(generators_on(c, IndexedBasis::fock(c, n, wordcap)))
}

/// The same generators on the boundary space `BoundaryTrunc(n, R)`.
pub fn boundary_generators(c: &Correspondence, r: &BTreeSet<ObjectId>, n: usize, wordcap: usize) -> Result<Generators, RepError> {
    if n == 0 {
        return Err(RepError::EmptyTruncation);
    }
    Ok(generators_on(c, IndexedBasis::boundary(c, r, n, wordcap)?))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationReport {
    /// Relation identities checked.
    pub identities: usize,
    /// Identity × interior label pairs verified.
    pub instances: usize,
    /// Columns skipped because a side leaves the word-capped basis.
    pub skipped: usize,
    pub failures: Vec<String>,
    /// Levels of non-interior labels at which some identity fails.
    pub defect_levels: BTreeSet<usize>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_identity(
    c: &Correspondence,
    basis: &IndexedBasis,
    name: &str,
    lhs: &PartialPermMatrix,
    rhs: &PartialPermMatrix,
    rep: &mut RelationReport,
) {
    rep.identities += 1;
    for j in 0..basis.len() {
        match lhs.agrees_at(rhs, j) {
            None => rep.skipped += 1,
            Some(ok) if basis.is_interior(j) => {
                rep.instances += 1;
                if !ok {
                    rep.failures.push(format!("{name} at {}", basis.label_name(c, j)));
                }
            }
            Some(false) => {
                rep.defect_levels.insert(basis.level(j));
            }
            Some(true) => {}
        }
    }
}

/// The three families of Toeplitz relations:
/// `T_x T_y = T_{xy}` (or `0`) when `x` or `y` lies in `G`, `T_g^* = T_{g^-1}`, and
/// `T_x^* T_y = T_{⟨x|y⟩}` (or `0`) for `x, y ∈ X`.
pub fn check_toeplitz_relations(c: &Correspondence, gens: &Generators) -> Result<RelationReport, RepError> {
    let b = c.base();
    let basis = &gens.basis;
    let n = basis.len();
    for m in gens.arrows.iter().map(|x| &x.1).chain(gens.points.iter().map(|x| &x.1)) {
        if m.dim() != n {
            return Err(RepError::Dimension(m.dim(), n));
        }
    }
    let zero = PartialPermMatrix::zero(n);
    let an = |g: &Arrow| b.arrow_name(g);
    let mut rep = RelationReport::default();
    for (g, tg) in &gens.arrows {
        for (h, th) in &gens.arrows {
            let rhs = b.compose(g, h).map_or_else(|| zero.clone(), |gh| arrow_matrix(c, basis, &gh));
            check_identity(c, basis, &format!("T_{} T_{}", an(g), an(h)), &tg.mul(th)?, &rhs, &mut rep);
        }
        for (x, tx) in &gens.points {
            let rhs = match c.act_on_point(g, x) {
                Ok(gx) => point_matrix(c, basis, &gx),
                Err(_) => zero.clone(),
            };
            check_identity(c, basis, &format!("T_{} T_{}", an(g), c.point_name(x)), &tg.mul(tx)?, &rhs, &mut rep);
            let rhs = c.right_act(x, g).map_or_else(|| zero.clone(), |xg| point_matrix(c, basis, &xg));
            check_identity(c, basis, &format!("T_{} T_{}", c.point_name(x), an(g)), &tx.mul(tg)?, &rhs, &mut rep);
        }
        let rhs = arrow_matrix(c, basis, &b.inverse(g));
        check_identity(c, basis, &format!("T_{}^*", an(g)), &tg.transpose(), &rhs, &mut rep);
    }
    for (x, tx) in &gens.points {
        for (y, ty) in &gens.points {
            let rhs = match c.bracket(x, y) {
                Ok(Some(h)) => arrow_matrix(c, basis, &h),
                _ => zero.clone(),
            };
            let lhs = tx.transpose().mul(ty)?;
            check_identity(c, basis, &format!("T_{}^* T_{}", c.point_name(x), c.point_name(y)), &lhs, &rhs, &mut rep);
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    pub vertex: ObjectId,
    /// `P_v - Σ_{r(x)=v} T_x T_x^*`.
    pub defect: DenseMatrix,
    /// `r^{-1}(v)` is empty, so covariance forces `T_v = 0`.
    pub degenerate: bool,
    pub support_levels: BTreeSet<usize>,
}

pub fn ck_defect(c: &Correspondence, gens: &Generators, r: &BTreeSet<ObjectId>, v: ObjectId) -> Result<DefectReport, RepError> {
    if !r.contains(&v) {
        return Err(RepError::NotInR(c.base().object_name(v)));
    }
    let basis = &gens.basis;
    let mut defect = projection_matrix(basis, v).to_dense();
    let fiber = c.fiber(v);
    for (e, te) in &gens.edges {
        if fiber.contains(e) {
            defect = defect.sub(&te.mul(&te.transpose())?.to_dense());
        }
    }
    let support_levels = defect.support().into_iter().map(|i| basis.level(i)).collect();
    Ok(DefectReport { vertex: v, defect, degenerate: fiber.is_empty(), support_levels })
}

/// Fock contract: the defect is the diagonal projection onto level-0 labels at `v`.
/// Boundary contract: it vanishes on every label below the top level.
pub fn defect_meets_contract(gens: &Generators, d: &DefectReport) -> bool {
    let basis = &gens.basis;
    match basis.kind {
        BasisKind::Fock => {
            let mut expected = DenseMatrix::zero(basis.len());
            for i in 0..basis.len() {
                if basis.level(i) == 0 && basis.labels[i].path.rng() == d.vertex {
                    expected.set(i, i, 1);
                }
            }
            expected == d.defect
        }
        BasisKind::Boundary => d.defect.support().iter().all(|&i| basis.level(i) >= basis.n),
    }
}

/// Diagonal indicators `φ(1_{Z(r)})` and operators `T_s` for bounded elements of `I(G,X)`.
#[derive(Debug, Clone)]
pub struct CovariantFamily {
    pub cap: usize,
    pub cylinders: Vec<(Path, PartialPermMatrix)>,
    pub elements: Vec<(IsElement, PartialPermMatrix)>,
}

fn path_operator(gens: &Generators, p: &Path) -> Result<PartialPermMatrix, RepError> {
    let n = gens.basis.len();
    let mut m = gens.projections.iter().find(|(v, _)| *v == p.rng()).map(|x| x.1.clone()).unwrap_or_else(|| PartialPermMatrix::zero(n));
    for e in p.edges() {
        let te = &gens.edges.iter().find(|(x, _)| x == e).expect("edge generator").1;
        m = m.mul(te)?;
    }
    Ok(m)
}

/// `T_s = T_p T_g T_q^*` built from the generators.
pub fn element_operator(c: &Correspondence, gens: &Generators, s: &IsElement) -> Result<PartialPermMatrix, RepError> {
    let n = gens.basis.len();
    match s {
        IsElement::Zero => Ok(PartialPermMatrix::zero(n)),
        IsElement::One => Ok(PartialPermMatrix::identity(n)),
        IsElement::Triple { p, g, q } => {
            let tg = arrow_matrix(c, &gens.basis, g);
            path_operator(gens, p)?.mul(&tg)?.mul(&path_operator(gens, q)?.transpose())
        }
    }
}

pub fn cylinder_indicator(basis: &IndexedBasis, r: &Path) -> PartialPermMatrix {
    PartialPermMatrix::from_fn(basis.len(), |j| r.is_prefix_of(&basis.labels[j].path).then_some(j))
}

pub fn covariant_family(c: &Correspondence, gens: &Generators, cap: usize, wordcap: usize) -> Result<CovariantFamily, RepError> {
    let cylinders = (0..=cap)
        .flat_map(|k| c.paths_of_length(k))
        .map(|r| {
            let m = cylinder_indicator(&gens.basis, &r);
            (r, m)
        })
        .collect();
    let mut elements = Vec::new();
    for s in islice::bounded_elements(c, cap, wordcap) {
        let m = element_operator(c, gens, &s)?;
        elements.push((s, m));
    }
    Ok(CovariantFamily { cap, cylinders, elements })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovariantReport {
    pub conditions: Vec<ConditionResult>,
}

impl CovariantReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.failures.is_empty())
    }
}

/// Compares two operators on the given columns.
fn compare(
    c: &Correspondence,
    basis: &IndexedBasis,
    cols: &[usize],
    lhs: &PartialPermMatrix,
    rhs: &PartialPermMatrix,
    what: &dyn Fn() -> String,
    res: &mut ConditionResult,
) {
    for &j in cols {
        match lhs.agrees_at(rhs, j) {
            Some(true) => res.checked += 1,
            Some(false) => {
                res.checked += 1;
                if res.failures.len() < 20 {
                    res.failures.push(format!("{} at {}", what(), basis.label_name(c, j)));
                }
            }
            None => {}
        }
    }
}

/// Checks, on labels far enough from the truncation:
/// `T_1 = id`, `T_s T_t = T_{st}`, `T_s^* φ(1_U) T_s = φ(1_U ∘ θ_s)`, `T_s^* T_s = φ(1_{dom s})`,
/// `T_s T_s^* = φ(1_{im s})`, idempotents act as cylinder indicators, every label over `R`
/// lies in the range of some `T_x`, and separately the bracket relation `T_x^* T_y = T_{⟨x|y⟩}`.
pub fn check_covariant_rep(
    c: &Correspondence,
    gens: &Generators,
    fam: &CovariantFamily,
    r: &BTreeSet<ObjectId>,
) -> Result<CovariantReport, RepError> {
    let basis = &gens.basis;
    let n = basis.len();
    let l = fam.cap;
    let interior: Vec<usize> = (0..n).filter(|&j| basis.is_interior(j)).collect();
    let shallow: Vec<usize> = interior.iter().copied().filter(|&j| basis.level(j) + l <= basis.n).collect();
    let deep_ok: Vec<usize> = interior.iter().copied().filter(|&j| basis.level(j) + 2 * l <= basis.n).collect();
    let mut out = Vec::new();

    let mut unit = ConditionResult { name: "unit", checked: 0, failures: vec![] };
    let mut sum = PartialPermMatrix::zero(n);
    for (_, p) in &gens.projections {
        for j in 0..n {
            if p.map[j].is_some() {
                sum.map[j] = p.map[j];
            }
        }
    }
    compare(c, basis, &interior, &sum, &PartialPermMatrix::identity(n), &|| "Σ P_v".into(), &mut unit);
    out.push(unit);

    let mut mult = ConditionResult { name: "multiplicative", checked: 0, failures: vec![] };
    let ops: HashMap<&IsElement, &PartialPermMatrix> = fam.elements.iter().map(|(s, m)| (s, m)).collect();
    for (s, ts) in &fam.elements {
        for (t, tt) in &fam.elements {
            let st = islice::multiply(c, s, t);
            let tst = match ops.get(&st) {
                Some(m) => (*m).clone(),
                None => element_operator(c, gens, &st)?,
            };
            let lhs = ts.mul(tt)?;
            compare(c, basis, &deep_ok, &lhs, &tst, &|| format!("T_s T_t = T_st for s = {}, t = {}", islice::display(c, s), islice::display(c, t)), &mut mult);
        }
    }
    out.push(mult);

    let mut conj = ConditionResult { name: "conjugation", checked: 0, failures: vec![] };
    let mut dom = ConditionResult { name: "domain", checked: 0, failures: vec![] };
    let mut idem = ConditionResult { name: "idempotents", checked: 0, failures: vec![] };
    for (s, ts) in &fam.elements {
        let IsElement::Triple { p, g, q } = s else { continue };
        let tsa = ts.transpose();
        for (rp, phi) in &fam.cylinders {
            let lhs = tsa.mul(phi)?.mul(ts)?;
            let rhs = PartialPermMatrix::from_fn(n, |j| {
                let lab = &basis.labels[j];
                let u = c.strip_prefix(&lab.path, q)?;
                let (gu, _) = c.act_on_path(g, &u).ok()?;
                let img = c.concat(p, &gu)?;
                rp.is_prefix_of(&img).then_some(j)
            });
            compare(c, basis, &shallow, &lhs, &rhs, &|| format!("T_s^* φ(Z({})) T_s for s = {}", c.path_name(rp), islice::display(c, s)), &mut conj);
        }
        let dq = cylinder_indicator(basis, q);
        compare(c, basis, &shallow, &tsa.mul(ts)?, &dq, &|| format!("T_s^* T_s for s = {}", islice::display(c, s)), &mut dom);
        let dp = cylinder_indicator(basis, p);
        compare(c, basis, &shallow, &ts.mul(&tsa)?, &dp, &|| format!("T_s T_s^* for s = {}", islice::display(c, s)), &mut dom);
        if p == q && c.base().is_unit(g) {
            compare(c, basis, &shallow, ts, &dp, &|| format!("idempotent {}", islice::display(c, s)), &mut idem);
        }
    }
    out.push(conj);
    out.push(dom);
    out.push(idem);

    let mut cover = ConditionResult { name: "cover", checked: 0, failures: vec![] };
    let covered: HashSet<usize> = gens.edges.iter().flat_map(|(_, te)| te.map.iter().flatten().copied()).collect();
    for &j in &interior {
        if r.contains(&basis.labels[j].path.rng()) {
            cover.checked += 1;
            if !covered.contains(&j) && cover.failures.len() < 20 {
                cover.failures.push(format!("{} is not in the range of any T_x", basis.label_name(c, j)));
            }
        }
    }
    out.push(cover);

    let mut bracket = ConditionResult { name: "bracket", checked: 0, failures: vec![] };
    for (x, tx) in &gens.points {
        for (y, ty) in &gens.points {
            let rhs = match c.bracket(x, y) {
                Ok(Some(h)) => arrow_matrix(c, basis, &h),
                _ => PartialPermMatrix::zero(n),
            };
            let lhs = tx.transpose().mul(ty)?;
            compare(c, basis, &interior, &lhs, &rhs, &|| format!("T_{}^* T_{}", c.point_name(x), c.point_name(y)), &mut bracket);
        }
    }
    out.push(bracket);
    Ok(CovariantReport { conditions: out })
}

/// Sparse vectors over `Q` with incremental row reduction.
#[derive(Debug, Default)]
struct Echelon {
    rows: BTreeMap<usize, BTreeMap<usize, BigRational>>,
}

impl Echelon {
    fn reduce(&self, v: &BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
        let mut v = v.clone();
        loop {
            let Some((&piv, coef)) = v.iter().find(|(k, _)| self.rows.contains_key(k)) else { return v };
            let coef = coef.clone();
            for (k, x) in &self.rows[&piv] {
                let e = v.entry(*k).or_insert_with(BigRational::zero);
                *e -= &coef * x;
                if e.is_zero() {
                    v.remove(k);
                }
            }
        }
    }

    fn insert(&mut self, v: &BTreeMap<usize, BigRational>) -> bool {
        let v = self.reduce(v);
        let Some((&piv, lead)) = v.iter().next() else { return false };
        let lead = lead.clone();
        let row: BTreeMap<usize, BigRational> = v.into_iter().map(|(k, x)| (k, x / &lead)).collect();
        // keep rows fully reduced against the new pivot
        for r in self.rows.values_mut() {
            if let Some(c) = r.get(&piv).cloned() {
                for (k, x) in &row {
                    let e = r.entry(*k).or_insert_with(BigRational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        r.remove(k);
                    }
                }
            }
        }
        self.rows.insert(piv, row);
        true
    }

    fn contains(&self, v: &BTreeMap<usize, BigRational>) -> bool {
        self.reduce(v).is_empty()
    }
}

fn sparse(v: &[Option<BTreeMap<usize, i64>>], dim: usize) -> Option<BTreeMap<usize, BigRational>> {
    let mut out = BTreeMap::new();
    for (k, col) in v.iter().enumerate() {
        for (&i, &x) in col.as_ref()? {
            out.insert(k * dim + i, BigRational::from_integer(x.into()));
        }
    }
    Some(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckReport {
    /// Labels of `BoundaryTrunc(n)`, used as inputs.
    pub labels: usize,
    /// Labels of the comparison space `BoundaryTrunc(n + 2 cap + 1)`.
    pub fine_labels: usize,
    pub compared_columns: usize,
    pub germ_family: usize,
    pub cp_family: usize,
    /// Operators left out because some image leaves the word-capped basis.
    pub undetermined: usize,
    pub failures: Vec<String>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn vacuous(&self) -> bool {
        self.compared_columns == 0
    }
}

/// `Z(w) ∩ Ω(R)`, or the single point `w` when `exact`, decorated by `twist`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Piece {
    path: Path,
    twist: Arrow,
    exact: bool,
}

type StepFn = BTreeMap<Piece, i64>;

#[derive(Debug, Clone)]
enum Op {
    Edge(EdgeId),
    EdgeAdj(EdgeId),
    Arrow(Arrow),
    Germ(IsElement),
}

/// `Z(w)·h = {w}·h ⊔ ⨆_{r(a) = s(h)} Z(w (h∘a))·h|_a`, the first part only for `s(w) ∉ R`.
fn refine(c: &Correspondence, r: &BTreeSet<ObjectId>, p: &Piece) -> Option<Vec<Piece>> {
    let mut out = Vec::new();
    if !r.contains(&c.path_src(&p.path)) {
        out.push(Piece { exact: true, ..p.clone() });
    }
    for a in c.edge_ids() {
        if c.edge(a).rng != c.base().src(&p.twist) {
            continue;
        }
        let (ha, rest) = c.act(&p.twist, a).ok()?;
        out.push(Piece { path: c.extend(&p.path, ha)?, twist: rest, exact: false });
    }
    Some(out)
}

fn apply_refined(c: &Correspondence, r: &BTreeSet<ObjectId>, op: &Op, p: &Piece) -> Option<Vec<Piece>> {
    let mut out = Vec::new();
    for q in refine(c, r, p)? {
        out.extend(apply_piece(c, r, op, &q)?);
    }
    Some(out)
}

/// The image of one piece; `None` when a cocycle entry or a composition is missing.
fn apply_piece(c: &Correspondence, r: &BTreeSet<ObjectId>, op: &Op, p: &Piece) -> Option<Vec<Piece>> {
    let b = c.base();
    match op {
        Op::Edge(e) => {
            let single = c.path_from_edges(&[*e]).ok()?;
            Some(c.concat(&single, &p.path).map(|path| Piece { path, ..p.clone() }).into_iter().collect())
        }
        Op::EdgeAdj(e) => {
            if p.path.edges().first() == Some(e) {
                let tail = c.strip_prefix(&p.path, &p.path.prefix(1))?;
                Some(vec![Piece { path: tail, ..p.clone() }])
            } else if p.path.is_empty() && !p.exact && p.path.rng() == c.edge(*e).rng {
                apply_refined(c, r, op, p)
            } else {
                Some(Vec::new())
            }
        }
        Op::Arrow(g) => {
            if p.path.rng() != b.src(g) {
                return Some(Vec::new());
            }
            let (gp, rest) = c.act_on_path(g, &p.path).ok()?;
            Some(vec![Piece { path: gp, twist: b.compose(&rest, &p.twist)?, exact: p.exact }])
        }
        Op::Germ(IsElement::Zero) => Some(Vec::new()),
        Op::Germ(IsElement::One) => Some(vec![p.clone()]),
        Op::Germ(IsElement::Triple { p: head, g, q }) => {
            if let Some(u) = c.strip_prefix(&p.path, q) {
                let (gu, rest) = c.act_on_path(g, &u).ok()?;
                Some(vec![Piece { path: c.concat(head, &gu)?, twist: b.compose(&rest, &p.twist)?, exact: p.exact }])
            } else if !p.exact && p.path.is_prefix_of(q) {
                apply_refined(c, r, op, p)
            } else {
                Some(Vec::new())
            }
        }
    }
}

fn apply_fn(c: &Correspondence, r: &BTreeSet<ObjectId>, op: &Op, f: &StepFn) -> Option<StepFn> {
    let mut out = StepFn::new();
    for (p, &k) in f {
        for q in apply_piece(c, r, op, p)? {
            *out.entry(q).or_insert(0) += k;
        }
    }
    out.retain(|_, k| *k != 0);
    Some(out)
}

/// Writes a piece in the labels of `basis`; `false` if it is finer than the basis allows.
fn expand(c: &Correspondence, r: &BTreeSet<ObjectId>, basis: &IndexedBasis, p: &Piece, k: i64, out: &mut BTreeMap<usize, i64>) -> bool {
    let depth = p.path.len();
    let label = || basis.find(&Label { path: p.path.clone(), twist: p.twist.clone() });
    let hit = |i: Option<usize>, out: &mut BTreeMap<usize, i64>| match i {
        Some(i) => {
            *out.entry(i).or_insert(0) += k;
            true
        }
        None => false,
    };
    if depth > basis.n {
        return false;
    }
    if p.exact {
        if depth == basis.n {
            // a top label stands for its whole cylinder
            let alone = refine(c, r, &Piece { exact: false, ..p.clone() }).is_some_and(|v| v.len() == 1);
            return alone && hit(label(), out);
        }
        return hit(label(), out);
    }
    if depth == basis.n {
        return hit(label(), out);
    }
    let Some(parts) = refine(c, r, p) else { return false };
    parts.iter().all(|q| expand(c, r, basis, q, k, out))
}

fn canonical(
    c: &Correspondence,
    r: &BTreeSet<ObjectId>,
    fine: &IndexedBasis,
    images: &[Option<StepFn>],
) -> Vec<Option<BTreeMap<usize, i64>>> {
    images
        .iter()
        .map(|f| {
            let mut out = BTreeMap::new();
            for (p, &k) in f.as_ref()? {
                if !expand(c, r, fine, p, k, &mut out) {
                    return None;
                }
            }
            out.retain(|_, k| *k != 0);
            Some(out)
        })
        .collect()
}

/// Builds the boundary representation twice, from germs of the model and from the
/// generators `T_e`, `T_e^*`, `T_g`, acting on step functions over `Ω(R)`. Inputs are the
/// indicators of the pieces of `BoundaryTrunc(n)`; images are written in the pieces of
/// `BoundaryTrunc(n + 2 cap + 1)`, where every germ with paths of length `<= cap` and every
/// generator product of length `<= 2 cap + 1` is determined exactly. Checks that each
/// family lies in the linear span of the other.
pub fn cross_check_main_theorem(
    c: &Correspondence,
    r: &BTreeSet<ObjectId>,
    n: usize,
    cap: usize,
    wordcap: usize,
) -> Result<CrossCheckReport, RepError> {
    let b = c.base();
    let coarse = IndexedBasis::boundary(c, r, n, wordcap)?;
    let fine = IndexedBasis::boundary(c, r, n + 2 * cap + 1, wordcap)?;
    let inputs: Vec<StepFn> = coarse
        .labels()
        .iter()
        .map(|l| {
            let p = Piece { path: l.path.clone(), twist: l.twist.clone(), exact: l.path.len() < n };
            StepFn::from([(p, 1)])
        })
        .collect();
    let dim = fine.len();
    let image = |op: &Op, fs: &[Option<StepFn>]| -> Vec<Option<StepFn>> {
        fs.iter().map(|f| f.as_ref().and_then(|f| apply_fn(c, r, op, f))).collect()
    };
    let start: Vec<Option<StepFn>> = inputs.into_iter().map(Some).collect();

    let germs: Vec<(IsElement, Option<BTreeMap<usize, BigRational>>)> = islice::bounded_elements(c, cap, wordcap)
        .into_iter()
        .map(|s| {
            let v = sparse(&canonical(c, r, &fine, &image(&Op::Germ(s.clone()), &start)), dim);
            (s, v)
        })
        .collect();
    let mut cp_gens: Vec<(String, Op)> = Vec::new();
    for e in c.edge_ids() {
        cp_gens.push((format!("T_{}", c.edge_name(e)), Op::Edge(e)));
        cp_gens.push((format!("T_{}^*", c.edge_name(e)), Op::EdgeAdj(e)));
    }
    for g in b.arrows_up_to(wordcap) {
        cp_gens.push((format!("T_{}", b.arrow_name(&g)), Op::Arrow(g)));
    }
    let mut report = CrossCheckReport {
        labels: coarse.len(),
        fine_labels: dim,
        compared_columns: start.len(),
        germ_family: germs.len(),
        cp_family: 0,
        undetermined: 0,
        failures: Vec::new(),
    };
    if start.is_empty() {
        return Ok(report);
    }

    let mut germ_span = Echelon::default();
    for (_, v) in &germs {
        match v {
            Some(v) => {
                germ_span.insert(v);
            }
            None => report.undetermined += 1,
        }
    }
    for (name, op) in &cp_gens {
        match sparse(&canonical(c, r, &fine, &image(op, &start)), dim) {
            Some(v) if germ_span.contains(&v) => {}
            Some(_) => report.failures.push(format!("{name} is not in the span of the germ family")),
            None => report.undetermined += 1,
        }
    }

    // products of generators up to the length needed for T_p T_g T_q^*
    let mut cp_span = Echelon::default();
    let mut seen = HashSet::new();
    seen.insert(canonical(c, r, &fine, &start));
    let mut frontier = vec![start];
    for _ in 0..2 * cap + 1 {
        let mut next = Vec::new();
        for w in &frontier {
            for (_, op) in &cp_gens {
                let x = image(op, w);
                if seen.insert(canonical(c, r, &fine, &x)) {
                    next.push(x);
                }
            }
        }
        frontier = next;
    }
    report.cp_family = seen.len();
    for v in &seen {
        match sparse(v, dim) {
            Some(v) => {
                cp_span.insert(&v);
            }
            None => report.undetermined += 1,
        }
    }
    for (s, v) in &germs {
        if let Some(v) = v {
            if !cp_span.contains(v) {
                report.failures.push(format!("germ of {} is not in the span of the generator family", islice::display(c, s)));
            }
        }
    }
    Ok(report)
}

/// Sparse export: the label table, then one `row col value` line per nonzero entry.
pub fn export_triplets(c: &Correspondence, basis: &IndexedBasis, name: &str, m: &PartialPermMatrix) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# matrix {name} dim {}", basis.len());
    for i in 0..basis.len() {
        let _ = writeln!(s, "label {i} {}", basis.label_name(c, i));
    }
    for (i, j, v) in m.triplets() {
        let _ = writeln!(s, "{i} {j} {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn o2_fock_sizes() {
        let o2 = fixtures::o_n(2);
        let g = fock_generators(&o2, 2, 1).unwrap();
        assert_eq!(g.basis.len(), 7);
        let ta = &g.edges[0].1;
        assert_eq!(ta.ones(), 3);
        let names: BTreeSet<(String, String)> = ta
            .triplets()
            .iter()
            .map(|&(i, j, _)| (g.basis.label_name(&o2, j), g.basis.label_name(&o2, i)))
            .collect();
        let expected: BTreeSet<(String, String)> =
            [("@v", "a"), ("a", "aa"), ("b", "ab")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
        assert_eq!(names, expected);
        assert_eq!(g.arrows[0].1, g.projections[0].1);
    }

    #[test]
    fn dense_oracle_agrees_with_partial_perm_products() {
        for (_, c) in fixtures::all() {
            let g = fock_generators(&c, 2, 1).unwrap();
            let mats: Vec<&PartialPermMatrix> = g.edges.iter().map(|x| &x.1).chain(g.arrows.iter().map(|x| &x.1)).collect();
            for a in &mats {
                assert!(a.is_partial_perm());
                assert_eq!(a.transpose().to_dense(), a.to_dense().transpose());
                for b in &mats {
                    assert_eq!(a.mul(b).unwrap().to_dense(), a.to_dense().mul(&b.to_dense()));
                }
            }
        }
    }

    #[test]
    fn odometer_generator_permutes_level_zero() {
        let od = fixtures::odometer();
        let g = fock_generators(&od, 1, 2).unwrap();
        let z = od.base().parse_arrow("z").unwrap();
        let tz = &g.arrows.iter().find(|(a, _)| *a == z).unwrap().1;
        for j in 0..g.basis.len() {
            let l = &g.basis.labels()[j];
            if tz.is_escaped(j) {
                continue;
            }
            let i = tz.image(j).unwrap();
            let (gp, r) = od.act_on_path(&z, &l.path).unwrap();
            assert_eq!(g.basis.labels()[i].path, gp);
            assert_eq!(g.basis.labels()[i].twist, od.base().compose(&r, &l.twist).unwrap());
        }
    }

    #[test]
    fn toeplitz_relations_hold_on_interior() {
        for (name, c) in fixtures::all() {
            let g = fock_generators(&c, 3, 2).unwrap();
            let rep = check_toeplitz_relations(&c, &g).unwrap();
            assert!(rep.passed(), "{name}: {:?}", &rep.failures[..rep.failures.len().min(5)]);
            assert!(rep.defect_levels.iter().all(|&l| l == 3), "{name}: {:?}", rep.defect_levels);
        }
    }

    #[test]
    fn orthogonal_edges() {
        let o2 = fixtures::o_n(2);
        let g = fock_generators(&o2, 3, 1).unwrap();
        let (ta, tb) = (&g.edges[0].1, &g.edges[1].1);
        assert_eq!(ta.transpose().mul(tb).unwrap().ones(), 0);
        let aa = ta.transpose().mul(ta).unwrap();
        for j in 0..g.basis.len() {
            if g.basis.is_interior(j) {
                assert_eq!(aa.image(j), Some(j));
            }
        }
    }

    #[test]
    fn ck_defect_contracts() {
        let o2 = fixtures::o_n(2);
        let r = fixtures::set_of(&o2, &["v"]);
        let g = fock_generators(&o2, 2, 1).unwrap();
        let d = ck_defect(&o2, &g, &r, ObjectId(0)).unwrap();
        assert!(defect_meets_contract(&g, &d));
        assert_eq!(d.support_levels, [0].into_iter().collect());
        let lp = fixtures::single_loop();
        let r = fixtures::set_of(&lp, &["v"]);
        let g = boundary_generators(&lp, &r, 3, 1).unwrap();
        let d = ck_defect(&lp, &g, &r, ObjectId(0)).unwrap();
        assert!(defect_meets_contract(&g, &d));
        let s = fixtures::single_edge();
        let w = s.base().object_index("w").unwrap();
        let all: BTreeSet<ObjectId> = s.base().objects().collect();
        let g = fock_generators(&s, 2, 1).unwrap();
        let d = ck_defect(&s, &g, &all, w).unwrap();
        assert!(d.degenerate);
        assert_eq!(d.defect, projection_matrix(&g.basis, w).to_dense());
        assert!(ck_defect(&s, &g, &BTreeSet::new(), w).is_err());
    }

    #[test]
    fn covariant_checks() {
        let lp = fixtures::single_loop();
        for r in [BTreeSet::new(), fixtures::set_of(&lp, &["v"])] {
            let g = boundary_generators(&lp, &r, 5, 1).unwrap();
            let fam = covariant_family(&lp, &g, 2, 1).unwrap();
            let rep = check_covariant_rep(&lp, &g, &fam, &r).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
        let o2 = fixtures::o_n(2);
        let r = fixtures::set_of(&o2, &["v"]);
        let g = fock_generators(&o2, 5, 1).unwrap();
        let fam = covariant_family(&o2, &g, 2, 1).unwrap();
        let rep = check_covariant_rep(&o2, &g, &fam, &r).unwrap();
        let cover = rep.condition("cover").unwrap();
        assert!(cover.failures[0].starts_with("@v"), "{:?}", cover.failures);
        for name in ["unit", "multiplicative", "conjugation", "domain", "idempotents", "bracket"] {
            let cond = rep.condition(name).unwrap();
            assert!(cond.failures.is_empty() && cond.checked > 0, "{name}: {:?}", cond.failures);
        }
    }

    #[test]
    fn cross_checks() {
        let s = fixtures::single_edge();
        let rep = cross_check_main_theorem(&s, &fixtures::set_of(&s, &["v"]), 2, 1, 0).unwrap();
        assert!(rep.passed() && !rep.vacuous(), "{rep:?}");
        let lp = fixtures::single_loop();
        let rep = cross_check_main_theorem(&lp, &fixtures::set_of(&lp, &["v"]), 4, 2, 0).unwrap();
        assert!(rep.passed() && rep.compared_columns == 1);
        let rep = cross_check_main_theorem(&lp, &BTreeSet::new(), 4, 2, 0).unwrap();
        assert!(rep.passed() && !rep.vacuous(), "{rep:?}");
        let o2 = fixtures::o_n(2);
        let rep = cross_check_main_theorem(&o2, &BTreeSet::new(), 3, 1, 0).unwrap();
        assert!(rep.passed() && !rep.vacuous(), "{rep:?}");
    }

    #[test]
    fn step_functions_satisfy_covariance_exactly_on_r() {
        let o2 = fixtures::o_n(2);
        let v = ObjectId(0);
        let zv = StepFn::from([(Piece { path: Path::vertex(v), twist: o2.base().unit(v), exact: false }, 1)]);
        for (r, holds) in [(BTreeSet::from([v]), true), (BTreeSet::new(), false)] {
            let fine = IndexedBasis::boundary(&o2, &r, 3, 0).unwrap();
            let mut sum = StepFn::new();
            for e in o2.edge_ids() {
                let f = apply_fn(&o2, &r, &Op::EdgeAdj(e), &zv).unwrap();
                for (p, k) in apply_fn(&o2, &r, &Op::Edge(e), &f).unwrap() {
                    *sum.entry(p).or_insert(0) += k;
                }
            }
            let lhs = canonical(&o2, &r, &fine, &[Some(zv.clone())]);
            let rhs = canonical(&o2, &r, &fine, &[Some(sum)]);
            assert_eq!(lhs == rhs, holds);
        }
    }

    #[test]
    fn triplet_export() {
        let s = fixtures::single_edge();
        let g = fock_generators(&s, 1, 1).unwrap();
        let text = export_triplets(&s, &g.basis, "T_e1", &g.edges[0].1);
        assert!(text.starts_with("# matrix T_e1 dim 3\n"));
        assert!(text.lines().any(|l| l == "label 1 @w"));
    }
}
