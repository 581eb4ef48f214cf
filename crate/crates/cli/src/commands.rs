use std::collections::BTreeSet;
use std::fmt;
use std::path::Path as FsPath;

use gmodel::actions::{self, AuditStatus, FiniteAction, TruncatedOmega};
use gmodel::base::Base;
use gmodel::correspondence::Correspondence;
use gmodel::document::{self, Instance};
use gmodel::groupoid::ObjectId;
use gmodel::islice::{self, IsElement, OracleVariant};
use gmodel::model::{self, Applied};
use gmodel::pathspace::{self, AmnElement};
use gmodel::rep::{self, BasisKind};
use gmodel::report::Record;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug)]
pub struct InputError(String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn input<E: fmt::Display>(e: E) -> InputError {
    InputError(e.to_string())
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub pass: bool,
    pub text: Vec<String>,
    pub records: Vec<Record>,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, ..Self::default() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    fn rec(&mut self, r: Record) {
        self.records.push(r);
    }

    fn fail(&mut self) {
        self.pass = false;
    }

    fn finish(mut self) -> Result<Self, InputError> {
        let status = if self.pass { "pass" } else { "fail" };
        self.records.push(Record::new("status").with("result", status));
        Ok(self)
    }
}

pub struct Ctx {
    pub inst: Instance,
    pub depth: usize,
    pub cap: usize,
    pub wordcap: usize,
    pub seed: u64,
    pub r: BTreeSet<ObjectId>,
}

impl Ctx {
    pub fn load(path: &FsPath, depth: Option<usize>, cap: Option<usize>, wordcap: Option<usize>, seed: u64) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let inst = document::parse(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        let p = inst.parameters;
        let c = &inst.correspondence;
        let r = inst.regular.clone().unwrap_or_else(|| c.properness().regular);
        c.check_regular_set(&r).map_err(input)?;
        Ok(Self {
            depth: depth.or(p.depth).unwrap_or(6),
            cap: cap.or(p.cap).unwrap_or(3),
            wordcap: wordcap.or(p.wordcap).unwrap_or(4),
            seed,
            r,
            inst,
        })
    }

    fn c(&self) -> &Correspondence {
        &self.inst.correspondence
    }

    fn r_names(&self) -> String {
        let names: Vec<String> = self.r.iter().map(|v| self.c().base().object_name(*v)).collect();
        format!("{{{}}}", names.join(","))
    }

    fn action(&self) -> Result<&FiniteAction, InputError> {
        self.inst.action.as_ref().ok_or_else(|| InputError("document has no [action] section".into()))
    }

    fn element(&self, s: &str) -> Result<IsElement, InputError> {
        islice::parse(self.c(), s).map_err(input)
    }
}

pub fn validate(ctx: &Ctx) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    if let Base::Finite(g) = c.base() {
        for v in g.validate() {
            out.fail();
            out.line(format!("groupoid violation {}: {}", v.axiom, v.witness));
            out.rec(Record::new("violation").with("source", "groupoid").with("invariant", v.axiom).with("witness", &v.witness));
        }
    }
    if out.pass {
        let vs = c.validate(ctx.wordcap);
        for (i, v) in vs.iter().enumerate() {
            out.fail();
            if i < 10 {
                out.line(format!("correspondence violation {}: {}", v.invariant, v.witness));
            } else if i == 10 {
                out.line(format!("... {} more", vs.len() - 10));
            }
            out.rec(Record::new("violation").with("source", "correspondence").with("invariant", v.invariant).with("witness", &v.witness));
        }
    }
    let prop = c.properness();
    let ymax: Vec<String> = prop.y_max.iter().map(|v| c.base().object_name(*v)).collect();
    out.line(format!("R = {}, Y_max = {{{}}}", ctx.r_names(), ymax.join(",")));
    out.rec(Record::new("regular").with("r", ctx.r_names()).with("y_max", format!("{{{}}}", ymax.join(","))));
    out.line(if out.pass { "valid" } else { "invalid" });
    out.finish()
}

pub fn paths(ctx: &Ctx) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let mut count = 0;
    for k in 0..=ctx.depth {
        let ps = c.paths_of_length(k);
        for p in &ps {
            out.rec(Record::new("path").with("length", k).with("name", c.path_name(p)));
        }
        let names: Vec<String> = ps.iter().map(|p| c.path_name(p)).collect();
        out.line(format!("length {k} ({}): {}", ps.len(), names.join(" ")));
        count += ps.len();
    }
    out.line(format!("{count} paths"));
    out.rec(Record::new("summary").with("count", count));
    out.finish()
}

pub fn omega(ctx: &Ctx, samples: usize) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let om = pathspace::build_omega(c, 0, ctx.depth).map_err(input)?;
    for k in 0..=ctx.depth {
        out.line(format!("level {k}: {} points", om.level(k).len()));
        out.rec(Record::new("level").with("k", k).with("points", om.level(k).len()));
    }
    if let Err(e) = om.check_coherence() {
        out.fail();
        out.line(format!("coherence failure: {e}"));
        out.rec(Record::new("violation").with("check", "coherence").with("witness", e));
    }
    for m in 1..=ctx.depth {
        let id = pathspace::circ_identification(c, m, ctx.depth).map_err(input)?;
        for f in &id.failures {
            out.fail();
            out.line(format!("identification failure at m = {m}: {f}"));
            out.rec(Record::new("violation").with("check", "identification").with("m", m).with("witness", f));
        }
    }
    let chars = pathspace::characters(c, 0, ctx.depth).map_err(input)?;
    out.line(format!("characters of A_[0,{}]: {} (points {})", ctx.depth, chars.len(), om.len()));
    out.rec(Record::new("characters").with("count", chars.len()).with("points", om.len()));
    if chars.len() != om.len() {
        out.fail();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let mut bad = 0;
    for _ in 0..samples {
        let a = AmnElement::random(&om, &mut rng);
        let b = AmnElement::random(&om, &mut rng);
        let d = AmnElement::random(&om, &mut rng);
        let ab = a.multiply(&b).map_err(input)?;
        let comm = ab == b.multiply(&a).map_err(input)?;
        let assoc = ab.multiply(&d).map_err(input)? == a.multiply(&b.multiply(&d).map_err(input)?).map_err(input)?;
        let phi = a.to_cumulative(&om);
        let round = AmnElement::from_cumulative(&om, &phi).map_err(input)? == a;
        if !(comm && assoc && round) {
            bad += 1;
        }
    }
    if bad > 0 {
        out.fail();
    }
    out.line(format!("algebra audit: {samples} random triples, {bad} failures (seed {})", ctx.seed));
    out.rec(Record::new("algebra").with("samples", samples).with("failures", bad).with("seed", ctx.seed));
    out.finish()
}

pub fn boundary(ctx: &Ctx) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let bt = pathspace::build_boundary(c, &ctx.r, ctx.depth).map_err(input)?;
    out.line(format!("R = {}, depth {}", ctx.r_names(), ctx.depth));
    for p in bt.points() {
        let kind = if bt.is_exact(p) { "exact" } else { "cylinder" };
        out.line(format!("{} {kind}", c.path_name(p)));
        out.rec(Record::new("point").with("name", c.path_name(p)).with("length", p.len()).with("kind", kind));
    }
    out.line(format!("{} points", bt.points().len()));
    out.rec(Record::new("summary").with("count", bt.points().len()));
    out.finish()
}

pub fn isg(ctx: &Ctx, elements: &[String]) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    if !elements.is_empty() {
        let mut acc = IsElement::One;
        for e in elements {
            acc = islice::multiply(c, &acc, &ctx.element(e)?);
        }
        let adj = islice::adjoint(c, &acc);
        out.line(format!("product: {}", islice::display(c, &acc)));
        out.line(format!("adjoint: {}", islice::display(c, &adj)));
        out.line(format!("idempotent: {}", islice::is_idempotent(c, &acc)));
        out.rec(
            Record::new("product")
                .with("value", islice::display(c, &acc))
                .with("adjoint", islice::display(c, &adj))
                .with("idempotent", islice::is_idempotent(c, &acc)),
        );
        return out.finish();
    }
    let gens = islice::generators(c, ctx.wordcap);
    let mut words = 0usize;
    let mut failures = Vec::new();
    islice::for_each_word(&gens, ctx.cap, |w| {
        words += 1;
        let direct = islice::evaluate(c, w);
        for v in [OracleVariant::Bracket, OracleVariant::EdgeOnly] {
            let r = islice::reduce_word(c, w, v);
            if r != direct && failures.len() < 10 {
                let names: Vec<String> = w.iter().map(|g| g.name(c)).collect();
                failures.push(format!("{} ({v}): {} vs {}", names.join(" "), islice::display(c, &direct), islice::display(c, &r)));
            }
        }
    });
    for f in &failures {
        out.fail();
        out.line(format!("disagreement: {f}"));
        out.rec(Record::new("violation").with("witness", f));
    }
    out.line(format!("{} generators, {words} words of length <= {}, {} disagreements", gens.len(), ctx.cap, failures.len()));
    out.rec(Record::new("oracle").with("generators", gens.len()).with("words", words).with("disagreements", failures.len()));
    out.finish()
}

pub fn germ(ctx: &Ctx, s: &str, t: Option<&str>, at: &str) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let s = ctx.element(s)?;
    let omega = c.parse_path(at).map_err(input)?;
    match t {
        Some(t) => {
            let t = ctx.element(t)?;
            let v = model::germ_equals(c, &s, &t, &omega, ctx.depth).map_err(input)?;
            out.line(format!("[{}, {at}] vs [{}, {at}]: {v}", islice::display(c, &s), islice::display(c, &t)));
            out.rec(Record::new("germ").with("verdict", v));
        }
        None => {
            let (kind, p) = match model::germ_apply(c, &s, &omega, ctx.depth) {
                Applied::Point(p) => ("point", Some(p)),
                Applied::Partial(p) => ("partial", Some(p)),
                Applied::Undefined => ("undefined", None),
                Applied::BeyondDepth => ("beyond-depth", None),
            };
            let name = p.as_ref().map_or_else(|| "-".to_string(), |p| c.path_name(p));
            out.line(format!("θ({})({at}) = {name} ({kind})", islice::display(c, &s)));
            out.rec(Record::new("apply").with("kind", kind).with("image", name));
        }
    }
    out.finish()
}

pub fn model(ctx: &Ctx, list: bool, restrict: bool) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let m = model::enumerate_arrows(c, &ctx.r, ctx.depth, ctx.cap, ctx.wordcap).map_err(input)?;
    let rep = model::check_axioms(c, &m);
    let flagged = m.arrows.iter().filter(|a| a.flagged).count();
    out.line(format!(
        "{} objects, {} arrows ({} flagged), {} open products, {} open inverses",
        m.objects.len(),
        m.arrows.len(),
        flagged,
        m.open_products.len(),
        rep.open_inverses.len()
    ));
    out.rec(
        Record::new("model")
            .with("objects", m.objects.len())
            .with("arrows", m.arrows.len())
            .with("flagged", flagged)
            .with("open_products", m.open_products.len())
            .with("open_inverses", rep.open_inverses.len())
            .with("triples", rep.triples_checked),
    );
    if list {
        for a in &m.arrows {
            let (s, r) = (c.path_name(&m.objects[a.source]), c.path_name(&m.objects[a.range]));
            out.line(format!("[{}, {s}]: {s} -> {r}{}", islice::display(c, &a.rep), if a.flagged { " (flagged)" } else { "" }));
            out.rec(Record::new("arrow").with("rep", islice::display(c, &a.rep)).with("source", s).with("range", r).with("flagged", a.flagged));
        }
    }
    for v in &rep.violations {
        out.fail();
        out.line(format!("axiom violation: {v}"));
        out.rec(Record::new("violation").with("witness", v));
    }
    if restrict {
        let rr = model::restrict_to_r(c, &ctx.r, ctx.depth, ctx.cap, ctx.wordcap).map_err(input)?;
        out.line(format!(
            "restriction to R: {} ({} arrows over R, orbit {}){}",
            if rr.passed() { "pass" } else { "fail" },
            rr.r_arrows,
            rr.orbit_size,
            if rr.vacuous { ", vacuous" } else { "" }
        ));
        out.rec(Record::new("restriction").with("passed", rr.passed()).with("r_arrows", rr.r_arrows).with("orbit", rr.orbit_size).with("vacuous", rr.vacuous));
        for f in &rr.failures {
            out.fail();
            out.line(format!("restriction failure: {f}"));
            out.rec(Record::new("violation").with("check", "restriction").with("witness", f));
        }
    }
    out.finish()
}

pub fn diagnose(ctx: &Ctx) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let d = model::diagnose(c, &ctx.r, ctx.depth, ctx.wordcap);
    out.line(format!("hausdorff: {}", d.hausdorff));
    out.line(format!("condition L: {}", d.condition_l));
    out.line(format!("cofinal: {}", d.cofinal));
    for w in &d.witnesses {
        out.line(format!("witness: {w}"));
        out.rec(Record::new("witness").with("text", w));
    }
    out.rec(Record::new("diagnosis").with("hausdorff", &d.hausdorff).with("condition_l", &d.condition_l).with("cofinal", &d.cofinal));
    out.finish()
}

pub fn fock(ctx: &Ctx, export: Option<&str>) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let gens = rep::fock_generators(c, ctx.depth, ctx.wordcap).map_err(input)?;
    let rr = rep::check_toeplitz_relations(c, &gens).map_err(input)?;
    let levels: Vec<String> = rr.defect_levels.iter().map(|l| l.to_string()).collect();
    out.line(format!("Fock space N = {}: {} labels", ctx.depth, gens.basis.len()));
    out.line(format!(
        "{} identities, {} instances on interior labels, {} skipped, {} failures",
        rr.identities,
        rr.instances,
        rr.skipped,
        rr.failures.len()
    ));
    out.line(format!("relations fail outside the interior at levels: {{{}}}", levels.join(",")));
    out.rec(
        Record::new("toeplitz")
            .with("labels", gens.basis.len())
            .with("identities", rr.identities)
            .with("instances", rr.instances)
            .with("skipped", rr.skipped)
            .with("failures", rr.failures.len())
            .with("defect_levels", format!("{{{}}}", levels.join(","))),
    );
    for f in rr.failures.iter().take(20) {
        out.line(format!("failure: {f}"));
        out.rec(Record::new("violation").with("witness", f));
    }
    if !rr.passed() {
        out.fail();
    }
    if let Some(name) = export {
        let m = gens
            .edges
            .iter()
            .find(|(e, _)| c.edge_name(*e) == name)
            .map(|x| &x.1)
            .or_else(|| gens.arrows.iter().find(|(g, _)| c.base().arrow_name(g) == name).map(|x| &x.1))
            .ok_or_else(|| InputError(format!("no generator named `{name}`")))?;
        let text = rep::export_triplets(c, &gens.basis, &format!("T_{name}"), m);
        out.text.extend(text.lines().map(String::from));
        for (i, j, v) in m.triplets() {
            out.rec(Record::new("entry").with("row", i).with("col", j).with("value", v));
        }
    }
    out.finish()
}

pub fn ck(ctx: &Ctx, boundary: bool, vertex: Option<&str>) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let gens = if boundary {
        rep::boundary_generators(c, &ctx.r, ctx.depth, ctx.wordcap)
    } else {
        rep::fock_generators(c, ctx.depth, ctx.wordcap)
    }
    .map_err(input)?;
    let vertices: Vec<ObjectId> = match vertex {
        Some(v) => vec![c.base().object_index(v).ok_or_else(|| InputError(format!("unknown vertex `{v}`")))?],
        None => ctx.r.iter().copied().collect(),
    };
    let space = if boundary { "boundary" } else { "Fock" };
    out.line(format!("{space} space N = {}, R = {}", ctx.depth, ctx.r_names()));
    for v in vertices {
        let d = rep::ck_defect(c, &gens, &ctx.r, v).map_err(input)?;
        let ok = rep::defect_meets_contract(&gens, &d);
        let vn = c.base().object_name(v);
        let support = match (gens.basis.kind, d.support_levels.iter().collect::<Vec<_>>().as_slice()) {
            (_, []) => "none".to_string(),
            (BasisKind::Fock, [0]) => "level 0 only".to_string(),
            (BasisKind::Boundary, [l]) if **l == ctx.depth => "top level only".to_string(),
            (_, ls) => format!("levels {}", ls.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")),
        };
        out.line(format!("{vn}: defect support: {support}{}", if d.degenerate { " (degenerate vertex)" } else { "" }));
        out.rec(Record::new("defect").with("vertex", &vn).with("support", &support).with("degenerate", d.degenerate).with("contract", ok));
        if !ok {
            out.fail();
            out.line(format!("{vn}: defect does not match the expected shape"));
        }
    }
    out.finish()
}

pub fn crosscheck(ctx: &Ctx) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let mut out = Outcome::new();
    let rep = rep::cross_check_main_theorem(c, &ctx.r, ctx.depth, ctx.cap, ctx.wordcap).map_err(input)?;
    out.line(format!(
        "{} input labels, {} comparison labels, {} germ operators, {} generator products, {} undetermined",
        rep.labels, rep.fine_labels, rep.germ_family, rep.cp_family, rep.undetermined
    ));
    if rep.vacuous() {
        out.line("no input labels; the check is vacuous");
    }
    for f in &rep.failures {
        out.fail();
        out.line(format!("failure: {f}"));
        out.rec(Record::new("violation").with("witness", f));
    }
    out.line(if rep.passed() { "families agree" } else { "families differ" });
    out.rec(
        Record::new("crosscheck")
            .with("labels", rep.labels)
            .with("fine_labels", rep.fine_labels)
            .with("columns", rep.compared_columns)
            .with("germ_family", rep.germ_family)
            .with("cp_family", rep.cp_family)
            .with("undetermined", rep.undetermined)
            .with("vacuous", rep.vacuous()),
    );
    out.finish()
}

pub fn action_validate(ctx: &Ctx) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let a = ctx.action()?;
    let mut out = Outcome::new();
    let rep = actions::validate_action(a, c, &ctx.r, ctx.cap, ctx.wordcap);
    for v in &rep.violations {
        out.fail();
        out.line(format!("violation {}: {}", v.condition, v.witness));
        out.rec(Record::new("violation").with("condition", v.condition).with("witness", &v.witness));
    }
    out.line(format!("|Y| = {}, R = {}, closed: {} (finite)", a.len(), ctx.r_names(), rep.closed));
    out.line(format!("θ checked on {} pairs and {} bracket pairs", rep.theta_pairs, rep.bracket_pairs));
    out.line(if rep.valid() { "valid" } else { "invalid" });
    out.rec(Record::new("action").with("points", a.len()).with("theta_pairs", rep.theta_pairs).with("bracket_pairs", rep.bracket_pairs));
    out.finish()
}

pub fn universal_map(ctx: &Ctx) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let a = ctx.action()?;
    let mut out = Outcome::new();
    let rho = match actions::universal_map(a, c, &ctx.r, ctx.depth) {
        Ok(r) => r,
        Err(e) => {
            out.fail();
            out.line(e.to_string());
            out.rec(Record::new("violation").with("witness", e));
            return out.finish();
        }
    };
    for (y, p) in rho.iter().enumerate() {
        out.line(format!("{} -> {}", a.names[y], c.path_name(p)));
        out.rec(Record::new("map").with("point", &a.names[y]).with("image", c.path_name(p)));
    }
    let bt = pathspace::build_boundary(c, &ctx.r, ctx.depth).map_err(input)?;
    let inside = rho.iter().all(|p| bt.contains(p));
    let eq = actions::check_equivariant(c, a, &TruncatedOmega::boundary(&bt), &|y: &usize| rho[*y].clone(), ctx.wordcap);
    out.line(format!("in BoundaryTrunc: {inside}, equivariant: {}", eq.equivariant()));
    for f in &eq.failures {
        out.line(format!("equivariance failure: {f}"));
    }
    out.rec(Record::new("universal").with("in_boundary", inside).with("equivariant", eq.equivariant()));
    if !(inside && eq.equivariant()) {
        out.fail();
    }
    out.finish()
}

pub fn uniqueness(ctx: &Ctx, budget: u128) -> Result<Outcome, InputError> {
    let c = ctx.c();
    let a = ctx.action()?;
    let mut out = Outcome::new();
    match actions::uniqueness_audit(a, c, ctx.depth, ctx.wordcap, budget) {
        AuditStatus::Completed { candidates, equivariant } => {
            out.line(format!("{candidates} candidates, {} equivariant", equivariant.len()));
            for m in &equivariant {
                let parts: Vec<String> = m.iter().zip(&a.names).map(|(p, y)| format!("{y} -> {}", c.path_name(p))).collect();
                out.line(parts.join(", "));
            }
            out.rec(Record::new("uniqueness").with("status", "completed").with("candidates", candidates).with("equivariant", equivariant.len()));
            if equivariant.len() != 1 {
                out.fail();
            }
        }
        AuditStatus::Skipped { candidates, budget } => {
            out.fail();
            out.line(format!("skipped: {candidates} candidates exceed the budget {budget}"));
            out.rec(Record::new("uniqueness").with("status", "skipped").with("candidates", candidates).with("budget", budget));
        }
    }
    out.finish()
}
