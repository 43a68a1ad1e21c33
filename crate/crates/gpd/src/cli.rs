//! Command dispatch. Exit codes: 0 when every check passed, 1 when a
//! mathematical check failed (the report names the tag and a witness),
//! 2 on input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use groupoid_core::action::{action_groupoid, graph_groupoid, graph_iso, is_action_morphism, validate_partial_action};
use groupoid_core::closure::complete;
use groupoid_core::equivalence::{classify_functor, eta, induced_partial_action, projection, tau};
use groupoid_core::globalization::{check_full_dense, globalize, verify_universal, Globalization};
use groupoid_core::product::{direct_product, semidirect_product, semidirect_trichotomy};
use groupoid_core::subgroupoid::{
    conjugate_set, embed_direct, internal_direct_report, is_normal, is_normal_bw, is_subgroupoid, is_wide,
    tuples_subgroupoid_check,
};
use groupoid_core::{ElementSet, GroupoidTable, PartialActionTable, ValidationReport};

use crate::dot::to_dot;
use crate::format::{
    parse_aut, parse_func, parse_groupoid, parse_pact, read_file, serialize_groupoid, serialize_pact, AutDocument,
    FileResolver, FuncDocument, GroupoidSource, PactDocument,
};

#[derive(Debug, Parser)]
#[command(name = "gpd", version, about = "Checks finite groupoids and partial groupoid actions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan a GPD file for every groupoid axiom.
    Validate { file: PathBuf },
    /// Close a partial composition table, printing the completed GPD.
    Complete { file: PathBuf },
    /// Is the element set a subgroupoid?
    CheckSub {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Is the element set a wide subgroupoid?
    CheckWide {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// Is the element set a normal subgroupoid (both definitions)?
    CheckNormal {
        file: PathBuf,
        #[arg(long)]
        set: String,
    },
    /// The five conditions characterizing internal direct products.
    DirectReport {
        file: PathBuf,
        /// Semicolon-separated list of comma-separated element ids.
        #[arg(long)]
        subs: String,
    },
    /// The factorization map into the n-fold direct product.
    Embed {
        file: PathBuf,
        #[arg(long)]
        subs: String,
    },
    /// Direct product of two or more GPD files.
    Product {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
    },
    /// Semidirect product of the target of an AUT file by its group.
    Semidirect { file: PathBuf },
    /// The three equivalent conditions for a semidirect product to be direct.
    Trichotomy { file: PathBuf },
    /// Check a PACT file against the partial action axioms.
    PactValidate { file: PathBuf },
    /// Print the action groupoid of a PACT file.
    ActionGroupoid { file: PathBuf },
    /// Verify the isomorphism between the action groupoid and the graph groupoid.
    GraphIso { file: PathBuf },
    /// Star injectivity, star surjectivity and covering of a FUNC file.
    Classify { file: PathBuf },
    /// The partial action induced by a star-injective functor.
    Induce { file: PathBuf },
    /// Verify tau (for a PACT file) or eta (for a FUNC file).
    Roundtrip { file: PathBuf },
    /// Universal globalization of a strict PACT file.
    Globalize {
        file: PathBuf,
        /// Write beta to this path and the class map to `<path>.classes`.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Fullness and density of the action groupoid inside its globalization.
    FullDense { file: PathBuf },
    /// Find the unique morphism from the globalization to a global action.
    Universal {
        file: PathBuf,
        target: PathBuf,
        /// Point map `x=y,...` from the base action into the target.
        #[arg(long)]
        map: String,
    },
    /// Graph description of a GPD file.
    Dot { file: PathBuf },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const OK: i32 = 0;
pub const CHECK_FAILED: i32 = 1;
pub const INPUT_ERROR: i32 = 2;

/// Input problems: unreadable file, bad syntax, unknown ids.
#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Res = Result<Output, InputError>;

fn done(pass: bool, stdout: String) -> Res {
    Ok(Output {
        code: if pass { OK } else { CHECK_FAILED },
        stdout,
        stderr: String::new(),
    })
}

pub fn run(cli: Cli) -> Output {
    match dispatch(cli.command) {
        Ok(o) => o,
        Err(InputError(msg)) => Output {
            code: INPUT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}

fn context(path: &Path) -> impl Fn(crate::format::FormatError) -> InputError + '_ {
    move |e| InputError(format!("{}: {e}", path.display()))
}

fn load_source(path: &Path) -> Result<GroupoidSource, InputError> {
    parse_groupoid(&read_file(path)?).map_err(context(path))
}

fn load_groupoid(path: &Path) -> Result<GroupoidTable, InputError> {
    load_source(path)?
        .build()
        .map_err(|e| InputError(format!("{}: {e}", path.display())))
}

/// A groupoid that must also pass the axiom scan.
fn load_valid_groupoid(path: &Path) -> Result<GroupoidTable, InputError> {
    let t = load_groupoid(path)?;
    let rep = t.validate();
    if !rep.passed() {
        return Err(InputError(format!("{} is not a groupoid:\n{rep}", path.display())));
    }
    Ok(t)
}

fn load_pact(path: &Path) -> Result<PactDocument, InputError> {
    parse_pact(&read_file(path)?, &mut FileResolver::beside(path)).map_err(context(path))
}

fn load_func(path: &Path) -> Result<FuncDocument, InputError> {
    parse_func(&read_file(path)?, &mut FileResolver::beside(path)).map_err(context(path))
}

fn load_aut(path: &Path) -> Result<AutDocument, InputError> {
    parse_aut(&read_file(path)?, &mut FileResolver::beside(path)).map_err(context(path))
}

fn is_func_file(path: &Path) -> Result<bool, InputError> {
    let text = read_file(path)?;
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("functor")))
}

/// Parses `a,b,c` into an element set.
pub fn parse_set(t: &GroupoidTable, spec: &str) -> Result<ElementSet, InputError> {
    let names: Vec<&str> = spec.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if names.is_empty() {
        return Err(InputError("empty element set".to_string()));
    }
    Ok(t.resolve_set(&names)?)
}

/// Parses `a,b;c,d` into a list of element sets.
pub fn parse_subs(t: &GroupoidTable, spec: &str) -> Result<Vec<ElementSet>, InputError> {
    spec.split(';').map(|s| parse_set(t, s)).collect()
}

fn report_lines(out: &mut String, rep: &ValidationReport) {
    for v in rep.violations() {
        writeln!(out, "FAIL {v}").unwrap();
    }
}

fn names(t: &GroupoidTable, s: &ElementSet) -> String {
    s.iter().map(|&g| t.name_of(g)).collect::<Vec<_>>().join(",")
}

/// First element of `s` witnessing that it is not closed.
fn closure_witness(t: &GroupoidTable, s: &ElementSet) -> Option<String> {
    for &g in s {
        if !s.contains(&t.inv(g)) {
            return Some(format!("[inverse] inv({}) = {} is missing", t.name_of(g), t.name_of(t.inv(g))));
        }
    }
    for &g in s {
        for &h in s {
            if let Some(k) = t.comp(g, h) {
                if t.composable(g, h) && !s.contains(&k) {
                    return Some(format!(
                        "[product] {} {} = {} is missing",
                        t.name_of(g),
                        t.name_of(h),
                        t.name_of(k)
                    ));
                }
            }
        }
    }
    None
}

fn point_map(p: &PartialActionTable, q: &PartialActionTable, spec: &str) -> Result<Vec<usize>, InputError> {
    let mut map = vec![None; p.carrier_len()];
    for entry in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (x, y) = entry
            .split_once('=')
            .ok_or_else(|| InputError(format!("expected `x=y`, found `{entry}`")))?;
        let xi = p
            .point_index(x.trim())
            .ok_or_else(|| InputError(format!("unknown point `{x}` of {}", p.name())))?;
        let yi = q
            .point_index(y.trim())
            .ok_or_else(|| InputError(format!("unknown point `{y}` of {}", q.name())))?;
        if map[xi].replace(yi).is_some() {
            return Err(InputError(format!("point `{x}` mapped twice")));
        }
    }
    map.iter()
        .enumerate()
        .map(|(x, m)| m.ok_or_else(|| InputError(format!("no image for point `{}`", p.point_name(x)))))
        .collect()
}

/// Sidecar listing each class of a globalization and the map ι.
pub fn serialize_classes(gl: &Globalization, base_ref: &str) -> String {
    let t = gl.base.groupoid();
    let mut out = String::new();
    writeln!(out, "classes {} of {base_ref}", gl.beta.name()).unwrap();
    for (c, members) in gl.classes.iter().enumerate() {
        write!(out, "class {}:", gl.class_name(c)).unwrap();
        for &(g, x) in members {
            write!(out, " ({}|{})", t.name_of(g), gl.base.point_name(x)).unwrap();
        }
        out.push('\n');
    }
    for (x, &c) in gl.iota.iter().enumerate() {
        writeln!(out, "iota {} = {}", gl.base.point_name(x), gl.class_name(c)).unwrap();
    }
    out.push_str("end\n");
    out
}

fn dispatch(cmd: Command) -> Res {
    match cmd {
        Command::Validate { file } => {
            let t = load_groupoid(&file)?;
            let rep = t.validate();
            let mut out = format!(
                "groupoid {}: {} elements, {} objects\n",
                t.name(),
                t.len(),
                t.objects().len()
            );
            report_lines(&mut out, &rep);
            if rep.passed() {
                out.push_str("PASS all groupoid axioms\n");
            }
            done(rep.passed(), out)
        }
        Command::Complete { file } => {
            let src = load_source(&file)?;
            match complete(&src.builder) {
                Ok(t) => done(true, serialize_groupoid(&t)),
                Err(e) => done(false, format!("FAIL [completion] {e}\n")),
            }
        }
        Command::CheckSub { file, set } => {
            let t = load_valid_groupoid(&file)?;
            let s = parse_set(&t, &set)?;
            let ok = is_subgroupoid(&t, &s)?;
            let out = match closure_witness(&t, &s) {
                None => format!("PASS {{{}}} is a subgroupoid\n", names(&t, &s)),
                Some(w) => format!("FAIL [subgroupoid] {w}\n"),
            };
            done(ok, out)
        }
        Command::CheckWide { file, set } => {
            let t = load_valid_groupoid(&file)?;
            let s = parse_set(&t, &set)?;
            if let Some(w) = closure_witness(&t, &s) {
                return done(false, format!("FAIL [subgroupoid] {w}\n"));
            }
            let ok = is_wide(&t, &s)?;
            let out = match t.objects().iter().find(|e| !s.contains(e)) {
                None => format!("PASS {{{}}} is a wide subgroupoid\n", names(&t, &s)),
                Some(&e) => format!("FAIL [wide] object {} is missing\n", t.name_of(e)),
            };
            done(ok, out)
        }
        Command::CheckNormal { file, set } => {
            let t = load_valid_groupoid(&file)?;
            let s = parse_set(&t, &set)?;
            let normal = is_normal(&t, &s);
            let mut out = String::new();
            if let Some(w) = closure_witness(&t, &s) {
                writeln!(out, "FAIL [subgroupoid] {w}").unwrap();
            } else if let Some(&e) = t.objects().iter().find(|e| !s.contains(e)) {
                writeln!(out, "FAIL [wide] object {} is missing", t.name_of(e)).unwrap();
            } else {
                let bw = is_normal_bw(&t, &s)?;
                if let Some(g) = t.elements().find(|&g| !conjugate_set(&t, &s, g).is_subset(&s)) {
                    let escaped = conjugate_set(&t, &s, g).difference(&s).next().copied().expect("not a subset");
                    writeln!(
                        out,
                        "FAIL [normal] conjugation by {} gives {} outside the set",
                        t.name_of(g),
                        t.name_of(escaped)
                    )
                    .unwrap();
                } else {
                    writeln!(out, "PASS {{{}}} is normal", names(&t, &s)).unwrap();
                }
                writeln!(out, "isotropy-wise normality agrees: {}", bw == normal).unwrap();
                if bw != normal {
                    return done(false, out);
                }
            }
            done(normal, out)
        }
        Command::DirectReport { file, subs } => {
            let t = load_valid_groupoid(&file)?;
            let subs = parse_subs(&t, &subs)?;
            let rep = internal_direct_report(&t, &subs)?;
            let labels = [
                "G = H1...Hn",
                "each Hi normal",
                "Hi meets the product of the others in G0",
                "unique composable factorization",
                "loops of distinct factors commute",
            ];
            let mut out = String::new();
            for ((tag, c), label) in rep.conditions().into_iter().zip(labels) {
                if c.holds {
                    writeln!(out, "({tag}) {label}: true").unwrap();
                } else {
                    writeln!(out, "({tag}) {label}: false (witness: {})", c.witness.join(" ")).unwrap();
                }
            }
            writeln!(
                out,
                "(i)-(iii): {}  (iv)-(v): {}  equivalent: {}",
                rep.first_three(),
                rep.last_two(),
                rep.first_three() == rep.last_two()
            )
            .unwrap();
            let tc = tuples_subgroupoid_check(&t, &subs)?;
            writeln!(
                out,
                "restricted tuples: {} (subgroupoid of the product: {}, criterion: {})",
                tc.tuple_count, tc.direct, tc.criterion
            )
            .unwrap();
            done(rep.all(), out)
        }
        Command::Embed { file, subs } => {
            let t = load_valid_groupoid(&file)?;
            let subs = parse_subs(&t, &subs)?;
            let emb = match embed_direct(&t, &subs) {
                Ok(e) => e,
                Err(groupoid_core::SubgroupoidError::ConditionFailed { condition, witness }) => {
                    return done(
                        false,
                        format!("FAIL [condition ({condition})] does not hold (witness: {})\n", witness.join(" ")),
                    )
                }
                Err(e) => return Err(e.into()),
            };
            let f = &emb.functor;
            let mut out = String::new();
            for g in t.elements() {
                writeln!(out, "{} -> {}", t.name_of(g), f.target().name_of(f.apply(g))).unwrap();
            }
            writeln!(out, "injective: {}", f.is_injective()).unwrap();
            writeln!(out, "image = restricted tuples: {}", emb.image_is_restricted).unwrap();
            writeln!(out, "functorial: {}", emb.is_functorial()).unwrap();
            report_lines(&mut out, &emb.report);
            done(emb.is_functorial() && f.is_injective() && emb.image_is_restricted, out)
        }
        Command::Product { files } => {
            let tables = files.iter().map(|f| load_valid_groupoid(f)).collect::<Result<Vec<_>, _>>()?;
            let p = direct_product(&tables)?;
            done(true, serialize_groupoid(p.table()))
        }
        Command::Semidirect { file } => {
            let doc = load_aut(&file)?;
            let rep = doc.action.validate();
            if !rep.passed() {
                let mut out = String::new();
                report_lines(&mut out, &rep);
                return done(false, out);
            }
            let s = semidirect_product(&doc.action)?;
            done(true, serialize_groupoid(s.table()))
        }
        Command::Trichotomy { file } => {
            let doc = load_aut(&file)?;
            let rep = doc.action.validate();
            if !rep.passed() {
                let mut out = String::new();
                report_lines(&mut out, &rep);
                return done(false, out);
            }
            let tri = semidirect_trichotomy(&doc.action)?;
            let mut out = String::new();
            writeln!(out, "identity map is a homomorphism: {}", tri.identity_is_homomorphism).unwrap();
            writeln!(out, "omega is trivial: {}", tri.omega_trivial).unwrap();
            writeln!(out, "objects x group is normal: {}", tri.objects_normal).unwrap();
            if tri.agree() {
                out.push_str("PASS the three conditions agree\n");
            } else {
                out.push_str("FAIL [trichotomy] the three conditions disagree\n");
            }
            done(tri.agree(), out)
        }
        Command::PactValidate { file } => {
            let doc = load_pact(&file)?;
            let p = &doc.action;
            let rep = validate_partial_action(p);
            let mut out = format!(
                "paction {}: {} points, {} domain pairs\n",
                p.name(),
                p.carrier_len(),
                p.domain_len()
            );
            report_lines(&mut out, &rep);
            if rep.passed() {
                writeln!(out, "PASS partial action axioms").unwrap();
                writeln!(out, "strict: {}", p.is_strict()).unwrap();
                writeln!(out, "global: {}", p.is_global()).unwrap();
            }
            done(rep.passed(), out)
        }
        Command::ActionGroupoid { file } => {
            let doc = load_pact(&file)?;
            match action_groupoid(&doc.action) {
                Ok(ag) => done(true, serialize_groupoid(ag.table())),
                Err(e) => done(false, format!("FAIL [paction] {e}\n")),
            }
        }
        Command::GraphIso { file } => {
            let doc = load_pact(&file)?;
            let (gr, f) = match (graph_groupoid(&doc.action), graph_iso(&doc.action)) {
                (Ok(gr), Ok(f)) => (gr, f),
                (Err(e), _) | (_, Err(e)) => return done(false, format!("FAIL [paction] {e}\n")),
            };
            let mut out = String::new();
            for g in f.source().elements() {
                writeln!(out, "{} -> {}", f.source().name_of(g), gr.name_of(f.apply(g))).unwrap();
            }
            let iso = f.is_isomorphism();
            writeln!(out, "isomorphism: {iso}").unwrap();
            report_lines(&mut out, &f.verify());
            done(iso, out)
        }
        Command::Classify { file } => {
            let doc = load_func(&file)?;
            match classify_functor(&doc.functor) {
                Ok(c) => {
                    let out = format!(
                        "star injective: {}\nstar surjective: {}\ncovering: {}\n",
                        c.star_injective, c.star_surjective, c.covering
                    );
                    done(true, out)
                }
                Err(e) => {
                    let mut out = format!("FAIL [functor] {e}\n");
                    report_lines(&mut out, &doc.functor.verify());
                    done(false, out)
                }
            }
        }
        Command::Induce { file } => {
            let doc = load_func(&file)?;
            match induced_partial_action(&doc.functor) {
                Ok(p) => done(true, serialize_pact(&p, &doc.target_ref)),
                Err(e) => done(false, format!("FAIL [star-injective] {e}\n")),
            }
        }
        Command::Roundtrip { file } => {
            if is_func_file(&file)? {
                let doc = load_func(&file)?;
                match eta(&doc.functor) {
                    Ok(e) => {
                        let mut out = String::new();
                        for h in e.source().elements() {
                            writeln!(out, "{} -> {}", e.source().name_of(h), e.target().name_of(e.apply(h))).unwrap();
                        }
                        out.push_str("PASS eta is an isomorphism commuting with the projections\n");
                        done(true, out)
                    }
                    Err(e) => done(false, format!("FAIL [eta] {e}\n")),
                }
            } else {
                let doc = load_pact(&file)?;
                let p = &doc.action;
                let rep = validate_partial_action(p);
                if !rep.passed() {
                    let mut out = String::new();
                    report_lines(&mut out, &rep);
                    return done(false, out);
                }
                match tau(p) {
                    Ok(map) => {
                        let (ag, gamma) = projection(p)?;
                        let mut out = String::new();
                        for (x, &y) in map.iter().enumerate() {
                            let obj = ag.table().objects()[y];
                            writeln!(out, "{} -> {}", p.point_name(x), ag.table().name_of(obj)).unwrap();
                        }
                        let class = classify_functor(&gamma)?;
                        let flags = class.covering == p.is_global();
                        writeln!(out, "covering = global: {flags}").unwrap();
                        if flags {
                            out.push_str("PASS tau is an isomorphism of partial actions\n");
                        } else {
                            out.push_str("FAIL [covering] projection covering flag differs from globality\n");
                        }
                        done(flags, out)
                    }
                    Err(e) => done(false, format!("FAIL [tau] {e}\n")),
                }
            }
        }
        Command::Globalize { file, out } => {
            let doc = load_pact(&file)?;
            let gl = match globalize(&doc.action) {
                Ok(gl) => gl,
                Err(e) => return done(false, format!("FAIL [globalize] {e}\n")),
            };
            let beta = serialize_pact(&gl.beta, &doc.groupoid_ref);
            let base_ref = file.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let classes = serialize_classes(&gl, &base_ref);
            match out {
                Some(path) => {
                    std::fs::write(&path, &beta)?;
                    let mut side = path.clone().into_os_string();
                    side.push(".classes");
                    std::fs::write(&side, &classes)?;
                    done(
                        true,
                        format!("wrote {} ({} classes) and {}\n", path.display(), gl.classes.len(), Path::new(&side).display()),
                    )
                }
                None => done(true, format!("{beta}{classes}")),
            }
        }
        Command::FullDense { file } => {
            let doc = load_pact(&file)?;
            let gl = match globalize(&doc.action) {
                Ok(gl) => gl,
                Err(e) => return done(false, format!("FAIL [globalize] {e}\n")),
            };
            let fd = check_full_dense(&gl)?;
            let mut out = format!("full: {}\ndense: {}\n", fd.full, fd.dense);
            report_lines(&mut out, &fd.report);
            done(fd.full && fd.dense, out)
        }
        Command::Universal { file, target, map } => {
            let doc = load_pact(&file)?;
            let q = load_pact(&target)?;
            // Compare the two groupoids by content; the files may differ.
            if **doc.action.groupoid() != **q.action.groupoid() {
                return Err(InputError("the two actions are over different groupoids".to_string()));
            }
            let q_action = rebase(&q.action, doc.action.groupoid().clone())?;
            let j = point_map(&doc.action, &q_action, &map)?;
            if !is_action_morphism(&j, &doc.action, &q_action)? {
                return done(false, "FAIL [morphism] the given map is not a morphism of partial actions\n".to_string());
            }
            let gl = match globalize(&doc.action) {
                Ok(gl) => gl,
                Err(e) => return done(false, format!("FAIL [globalize] {e}\n")),
            };
            match verify_universal(&gl, &q_action, &j) {
                Ok(k) => {
                    let mut out = String::new();
                    for (c, &y) in k.iter().enumerate() {
                        writeln!(out, "{} -> {}", gl.class_name(c), q_action.point_name(y)).unwrap();
                    }
                    out.push_str("PASS unique mediating morphism\n");
                    done(true, out)
                }
                Err(e) => done(false, format!("FAIL [universal] {e}\n")),
            }
        }
        Command::Dot { file } => {
            let t = load_groupoid(&file)?;
            done(true, to_dot(&t))
        }
    }
}

/// The same action over a content-equal groupoid handle.
fn rebase(p: &PartialActionTable, t: Arc<GroupoidTable>) -> Result<PartialActionTable, InputError> {
    let triples: Vec<_> = p.pairs().map(|((g, x), y)| (g, x, y)).collect();
    Ok(PartialActionTable::new(p.name(), t, p.points().to_vec(), triples)?)
}
