//! Truncated path spaces `Ω_{[m,n]}`, the boundary space `Ω(R)` at finite depth and the
//! commutative algebra `A_{[m,n]}`.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::correspondence::{Correspondence, CorrespondenceError, Path};
use crate::groupoid::ObjectId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathspaceError {
    #[error("empty level range [{0}, {1}]")]
    BadRange(usize, usize),
    #[error("elements live on different ranges: [{0}, {1}] and [{2}, {3}]")]
    RangeMismatch(usize, usize, usize, usize),
    #[error("path {0} is outside the level range")]
    OutOfRange(String),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

/// All paths of lengths `m..=n`, level by level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaTrunc {
    m: usize,
    n: usize,
    levels: Vec<Vec<Path>>,
}

impl OmegaTrunc {
    pub fn range(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn level(&self, k: usize) -> &[Path] {
        &self.levels[k - self.m]
    }

    pub fn points(&self) -> impl Iterator<Item = &Path> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `π^k`: truncation to the prefix of length `k`.
    pub fn project(p: &Path, k: usize) -> Path {
        p.prefix(k)
    }

    /// Checks `π^k ∘ π^j = π^k` for all `m <= k <= j <= n` and every point. Returns the first
    /// failing point.
    pub fn check_coherence(&self) -> Result<(), String> {
        for p in self.points() {
            for j in self.m..=p.len() {
                let pj = Self::project(p, j);
                if pj.len() != j {
                    return Err(format!("{p:?} at level {j}"));
                }
                for k in self.m..=j {
                    if Self::project(&pj, k) != Self::project(p, k) {
                        return Err(format!("{p:?} via {j} to {k}"));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn build_omega(c: &Correspondence, m: usize, n: usize) -> Result<OmegaTrunc, PathspaceError> {
    if m > n {
        return Err(PathspaceError::BadRange(m, n));
    }
    let levels = (m..=n).map(|k| c.paths_of_length(k)).collect();
    Ok(OmegaTrunc { m, n, levels })
}

/// Points of `Ω(R)` truncated at depth `n`: all length-`n` paths together with the shorter
/// paths whose source lies outside `R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryTrunc {
    depth: usize,
    r: BTreeSet<ObjectId>,
    points: Vec<Path>,
}

impl BoundaryTrunc {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn regular(&self) -> &BTreeSet<ObjectId> {
        &self.r
    }

    pub fn points(&self) -> &[Path] {
        &self.points
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.points.binary_search(p).is_ok()
    }

    /// Full-length points stand for cylinders; shorter points are exact finite paths.
    pub fn is_exact(&self, p: &Path) -> bool {
        p.len() < self.depth
    }

    /// Truncation of a point to depth `k`.
    pub fn truncate(p: &Path, k: usize) -> Path {
        p.prefix(k.min(p.len()))
    }
}

pub fn build_boundary(c: &Correspondence, r: &BTreeSet<ObjectId>, n: usize) -> Result<BoundaryTrunc, PathspaceError> {
    c.check_regular_set(r)?;
    let mut points = Vec::new();
    for k in 0..=n {
        for p in c.paths_of_length(k) {
            if k == n || !r.contains(&c.path_src(&p)) {
                points.push(p);
            }
        }
    }
    points.sort();
    Ok(BoundaryTrunc { depth: n, r: r.clone(), points })
}

/// One entry of the splitting `Ω_{[m,n]} ≅ X_m ∘ Ω_{[0,n-m]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircPair {
    pub point: Path,
    pub head: Path,
    pub tail: Path,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircIdentification {
    pub pairs: Vec<CircPair>,
    /// Failures of bijectivity or of compatibility with the generator action.
    pub failures: Vec<String>,
}

/// Splits every point of `Ω_{[m,n]}` as head of length `m` and tail, checks that the
/// splitting is a bijection onto `F_m ×_{s,r} Ω_{[0,n-m]}`, and that it intertwines
/// `g·(h ⌢ t) = (g∘h) ⌢ (g|_h ∘ t)` for every generating arrow.
pub fn circ_identification(c: &Correspondence, m: usize, n: usize) -> Result<CircIdentification, PathspaceError> {
    let omega = build_omega(c, m, n)?;
    let heads = c.paths_of_length(m);
    let tails = build_omega(c, 0, n - m)?;
    let mut pairs = Vec::new();
    let mut failures = Vec::new();
    for p in omega.points() {
        let head = p.prefix(m);
        let tail = c.strip_prefix(p, &head).expect("prefix");
        if c.concat(&head, &tail).as_ref() != Some(p) {
            failures.push(format!("{} does not reassemble", c.path_name(p)));
        }
        for g in c.base().generators() {
            if c.base().src(&g) != p.rng() {
                continue;
            }
            let (gp, _) = c.act_on_path(&g, p)?;
            let (gh, gr) = c.act_on_path(&g, &head)?;
            let (gt, _) = c.act_on_path(&gr, &tail)?;
            if c.concat(&gh, &gt).as_ref() != Some(&gp) {
                failures.push(format!("{} moved by {}", c.path_name(p), c.base().arrow_name(&g)));
            }
        }
        pairs.push(CircPair { point: p.clone(), head, tail });
    }
    let mut expected = 0;
    for h in &heads {
        expected += tails.points().filter(|t| t.rng() == c.path_src(h)).count();
    }
    let distinct: BTreeSet<(&Path, &Path)> = pairs.iter().map(|q| (&q.head, &q.tail)).collect();
    if distinct.len() != pairs.len() || expected != pairs.len() {
        failures.push(format!("{} points against {} composable pairs", pairs.len(), expected));
    }
    Ok(CircIdentification { pairs, failures })
}

/// A finitely supported function on `⨆_{k=m}^n F_k` with rational values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmnElement {
    m: usize,
    n: usize,
    values: BTreeMap<Path, BigRational>,
}

impl AmnElement {
    pub fn zero(m: usize, n: usize) -> Self {
        Self { m, n, values: BTreeMap::new() }
    }

    pub fn range(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn set(&mut self, p: Path, value: BigRational) -> Result<(), PathspaceError> {
        if p.len() < self.m || p.len() > self.n {
            return Err(PathspaceError::OutOfRange(format!("{p:?}")));
        }
        if value.is_zero() {
            self.values.remove(&p);
        } else {
            self.values.insert(p, value);
        }
        Ok(())
    }

    pub fn get(&self, p: &Path) -> BigRational {
        self.values.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Path, &BigRational)> {
        self.values.iter()
    }

    /// The unit: `1` on every vertex of `F_0`. Only defined for `m = 0`.
    pub fn unit(c: &Correspondence, n: usize) -> Self {
        let mut a = Self::zero(0, n);
        for v in c.base().objects() {
            a.values.insert(Path::vertex(v), BigRational::one());
        }
        a
    }

    /// `Φ(a)(x) = Σ_{m <= k <= |x|} a_k(π^k x)`.
    pub fn cumulative(&self, x: &Path) -> BigRational {
        let mut sum = BigRational::zero();
        for k in self.m..=x.len().min(self.n) {
            if let Some(v) = self.values.get(&x.prefix(k)) {
                sum += v;
            }
        }
        sum
    }

    fn check_range(&self, other: &Self) -> Result<(), PathspaceError> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(PathspaceError::RangeMismatch(self.m, self.n, other.m, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PathspaceError> {
        self.check_range(other)?;
        let mut out = self.clone();
        for (p, v) in &other.values {
            let s = out.get(p) + v;
            out.set(p.clone(), s)?;
        }
        Ok(out)
    }

    /// The product determined by `Φ(ab) = Φ(a)Φ(b)`:
    /// `(ab)_j(x) = Φa(x)Φb(x) - Φa(πx)Φb(πx)`, where `π` drops the last edge and the second
    /// term is absent at the bottom level.
    pub fn multiply(&self, other: &Self) -> Result<Self, PathspaceError> {
        self.check_range(other)?;
        let mut out = Self::zero(self.m, self.n);
        let support: BTreeSet<&Path> = self.values.keys().chain(other.values.keys()).collect();
        for x in support {
            let mut v = self.cumulative(x) * other.cumulative(x);
            if x.len() > self.m {
                let px = x.prefix(x.len() - 1);
                v -= self.cumulative(&px) * other.cumulative(&px);
            }
            out.set(x.clone(), v)?;
        }
        Ok(out)
    }

    /// Pointwise complex conjugation; the identity on rational values.
    pub fn star(&self) -> Self {
        self.clone()
    }

    /// `Φ(a)` tabulated on every point of `omega`.
    pub fn to_cumulative(&self, omega: &OmegaTrunc) -> BTreeMap<Path, BigRational> {
        omega.points().map(|x| (x.clone(), self.cumulative(x))).collect()
    }

    /// Prefix-Möbius inversion of a function tabulated on all of `omega`.
    pub fn from_cumulative(omega: &OmegaTrunc, phi: &BTreeMap<Path, BigRational>) -> Result<Self, PathspaceError> {
        let (m, n) = omega.range();
        let mut out = Self::zero(m, n);
        for x in omega.points() {
            let mut v = phi.get(x).cloned().unwrap_or_else(BigRational::zero);
            if x.len() > m {
                v -= phi.get(&x.prefix(x.len() - 1)).cloned().unwrap_or_else(BigRational::zero);
            }
            out.set(x.clone(), v)?;
        }
        Ok(out)
    }

    /// A random element with small integer values on a random subset of `omega`.
    pub fn random<R: Rng>(omega: &OmegaTrunc, rng: &mut R) -> Self {
        let (m, n) = omega.range();
        let mut out = Self::zero(m, n);
        for x in omega.points() {
            if rng.gen_bool(0.5) {
                let v: i64 = rng.gen_range(-3..=3);
                out.set(x.clone(), BigRational::from_integer(v.into())).expect("in range");
            }
        }
        out
    }
}

/// Evaluation at a point of `Ω_{[m,n]}`: `χ_x(a) = Φ(a)(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub point: Path,
}

impl Character {
    pub fn eval(&self, a: &AmnElement) -> BigRational {
        a.cumulative(&self.point)
    }
}

pub fn characters(c: &Correspondence, m: usize, n: usize) -> Result<Vec<Character>, PathspaceError> {
    Ok(build_omega(c, m, n)?.points().map(|p| Character { point: p.clone() }).collect())
}
