//! The line-oriented text formats: GPD (groupoids), PACT (partial
//! actions), FUNC (functors) and AUT (automorphism actions).
//!
//! `#` starts a comment. Blank lines are ignored. Every error carries the
//! 1-based line it was found on. Serialization emits canonical text, so
//! parsing a canonical file and serializing it again is byte-exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use groupoid_core::{
    AutAction, GroupoidFunctor, GroupoidTable, PartialActionTable, TableBuilder, TableError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate declaration: {message}")]
    Duplicate { line: usize, message: String },
    #[error("line {line}: unknown reference: {message}")]
    Reference { line: usize, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: {source}")]
    Table { line: usize, source: TableError },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

impl FormatError {
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Syntax { line, .. }
            | FormatError::Duplicate { line, .. }
            | FormatError::Reference { line, .. }
            | FormatError::Table { line, .. }
            | FormatError::Invalid { line, .. } => Some(*line),
            FormatError::Io { .. } => None,
        }
    }
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn duplicate(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Duplicate {
        line,
        message: message.into(),
    }
}

fn reference(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Reference {
        line,
        message: message.into(),
    }
}

/// Resolves the groupoid files a PACT, FUNC or AUT header refers to.
pub trait Resolver {
    fn groupoid(&mut self, reference: &str) -> Result<Arc<GroupoidTable>, FormatError>;
}

/// Loads GPD files relative to a base directory, caching each table so
/// that documents sharing a file share one `Arc`.
#[derive(Debug, Default)]
pub struct FileResolver {
    base: PathBuf,
    cache: BTreeMap<PathBuf, Arc<GroupoidTable>>,
}

impl FileResolver {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        Self {
            base: base.into(),
            cache: BTreeMap::new(),
        }
    }

    /// A resolver for references made from inside `file`.
    pub fn beside(file: &Path) -> Self {
        Self::new(file.parent().map(Path::to_path_buf).unwrap_or_default())
    }
}

impl Resolver for FileResolver {
    fn groupoid(&mut self, reference: &str) -> Result<Arc<GroupoidTable>, FormatError> {
        let path = self.base.join(reference);
        if let Some(t) = self.cache.get(&path) {
            return Ok(t.clone());
        }
        let text = read_file(&path)?;
        let table = Arc::new(parse_groupoid(&text)?.build().map_err(|e| FormatError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?);
        self.cache.insert(path, table.clone());
        Ok(table)
    }
}

/// In-memory resolver keyed by reference string.
#[derive(Debug, Default, Clone)]
pub struct MapResolver(pub BTreeMap<String, Arc<GroupoidTable>>);

impl MapResolver {
    pub fn with(mut self, reference: impl Into<String>, t: Arc<GroupoidTable>) -> Self {
        self.0.insert(reference.into(), t);
        self
    }
}

impl Resolver for MapResolver {
    fn groupoid(&mut self, reference: &str) -> Result<Arc<GroupoidTable>, FormatError> {
        self.0.get(reference).cloned().ok_or_else(|| FormatError::Io {
            path: reference.to_string(),
            message: "no such groupoid".to_string(),
        })
    }
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// A 1-based line number and the line's tokens.
type Line<'a> = (usize, Vec<&'a str>);

/// Non-blank lines with comments removed, as `(line number, tokens)`.
fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            (!tokens.is_empty()).then_some((i + 1, tokens))
        })
        .collect()
}

/// Splits off the header and checks the `end` terminator.
fn frame<'a>(
    text: &'a str,
    keyword: &str,
) -> Result<(Line<'a>, Vec<Line<'a>>), FormatError> {
    let mut ls = lines(text);
    if ls.is_empty() {
        return Err(syntax(1, format!("expected `{keyword}` header")));
    }
    let header = ls.remove(0);
    if header.1[0] != keyword {
        return Err(syntax(header.0, format!("expected `{keyword}` header, found `{}`", header.1[0])));
    }
    match ls.iter().position(|(_, t)| t[0] == "end") {
        None => {
            let last = ls.last().map_or(header.0, |l| l.0);
            Err(syntax(last, "missing `end`"))
        }
        Some(i) => {
            if ls[i].1.len() != 1 {
                return Err(syntax(ls[i].0, "`end` takes no arguments"));
            }
            if let Some((line, _)) = ls.get(i + 1) {
                return Err(syntax(*line, "content after `end`"));
            }
            ls.truncate(i);
            Ok((header, ls))
        }
    }
}

fn expect_shape(line: usize, tokens: &[&str], shape: &[Option<&str>], usage: &str) -> Result<(), FormatError> {
    let ok = tokens.len() == shape.len()
        && tokens
            .iter()
            .zip(shape)
            .all(|(t, s)| s.is_none_or(|s| *t == s));
    if ok {
        Ok(())
    } else {
        Err(syntax(line, format!("expected `{usage}`")))
    }
}

// ---------------------------------------------------------------- GPD

/// A parsed GPD file: the declarations, checked for references and
/// composability, not yet for the groupoid axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidSource {
    pub name: String,
    pub builder: TableBuilder,
    /// Number of elements, objects included.
    pub element_count: usize,
}

impl GroupoidSource {
    pub fn build(&self) -> Result<GroupoidTable, TableError> {
        self.builder.build()
    }
}

pub fn parse_groupoid(text: &str) -> Result<GroupoidSource, FormatError> {
    let (header, body) = frame(text, "groupoid")?;
    expect_shape(header.0, &header.1, &[Some("groupoid"), None], "groupoid <name>")?;
    let name = header.1[1].to_string();

    // id -> (line, d, r); objects map to themselves.
    let mut ends: BTreeMap<&str, (usize, &str, &str)> = BTreeMap::new();
    let mut objects: Vec<&str> = Vec::new();
    let mut arrows: Vec<(usize, &str, &str, &str)> = Vec::new();
    let mut inverses: Vec<(usize, &str, &str)> = Vec::new();
    let mut products: Vec<(usize, &str, &str, &str)> = Vec::new();
    let mut objects_line = None;

    for (line, t) in &body {
        let line = *line;
        match t[0] {
            "objects:" => {
                if let Some(prev) = objects_line {
                    return Err(duplicate(line, format!("`objects:` already given on line {prev}")));
                }
                objects_line = Some(line);
                for &o in &t[1..] {
                    if ends.insert(o, (line, o, o)).is_some() {
                        return Err(duplicate(line, format!("element `{o}`")));
                    }
                    objects.push(o);
                }
            }
            "arrow" => {
                expect_shape(line, t, &[Some("arrow"), None, Some(":"), None, Some("->"), None], "arrow <id> : <obj> -> <obj>")?;
                arrows.push((line, t[1], t[3], t[5]));
            }
            "inv" => {
                expect_shape(line, t, &[Some("inv"), None, Some("="), None], "inv <id> = <id>")?;
                inverses.push((line, t[1], t[3]));
            }
            "comp" => {
                expect_shape(line, t, &[Some("comp"), None, None, Some("="), None], "comp <id> <id> = <id>")?;
                products.push((line, t[1], t[2], t[4]));
            }
            other => return Err(syntax(line, format!("unknown declaration `{other}`"))),
        }
    }
    if objects.is_empty() {
        return Err(syntax(header.0, "a groupoid needs an `objects:` line with at least one object"));
    }
    for &(line, id, d, r) in &arrows {
        for end in [d, r] {
            if !objects.contains(&end) {
                return Err(reference(line, format!("`{end}` is not a declared object")));
            }
        }
        if ends.insert(id, (line, d, r)).is_some() {
            return Err(duplicate(line, format!("element `{id}`")));
        }
    }
    let known = |line: usize, id: &str| -> Result<(usize, &str, &str), FormatError> {
        ends.get(id)
            .copied()
            .ok_or_else(|| reference(line, format!("unknown element `{id}`")))
    };

    let mut inv: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for &(line, a, b) in &inverses {
        let (_, da, ra) = known(line, a)?;
        let (_, db, rb) = known(line, b)?;
        if (da, ra) != (rb, db) {
            return Err(reference(line, format!("`{b}` cannot invert `{a}`: {a} : {da} -> {ra} but {b} : {db} -> {rb}")));
        }
        if let Some((prev, _)) = inv.insert(a, (line, b)) {
            return Err(duplicate(line, format!("inverse of `{a}` already given on line {prev}")));
        }
    }
    for &(line, a, b) in &inverses {
        if let Some(&(_, c)) = inv.get(b) {
            if c != a {
                return Err(reference(line, format!("`inv {a} = {b}` conflicts with `inv {b} = {c}`")));
            }
        }
    }
    for &(line, id, _, _) in &arrows {
        let covered = inv.contains_key(id) || inv.values().any(|&(_, b)| b == id);
        if !covered {
            return Err(reference(line, format!("arrow `{id}` has no declared inverse")));
        }
    }

    let mut seen: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for &(line, g, h, k) in &products {
        let (_, dg, _) = known(line, g)?;
        let (_, _, rh) = known(line, h)?;
        known(line, k)?;
        if dg != rh {
            return Err(reference(line, format!("`{g}` and `{h}` are not composable: d({g}) = {dg} but r({h}) = {rh}")));
        }
        if let Some(prev) = seen.insert((g, h), line) {
            return Err(duplicate(line, format!("product `{g} {h}` already given on line {prev}")));
        }
    }

    let mut builder = TableBuilder::new(name.clone());
    builder.objects(objects.iter().copied());
    for &(_, id, d, r) in &arrows {
        builder.arrow(id, d, r);
    }
    for &(_, a, b) in &inverses {
        builder.inverse(a, b);
    }
    for &(_, g, h, k) in &products {
        builder.product(g, h, k);
    }
    // Everything the builder checks has been checked above with a line.
    builder.build().map_err(|source| FormatError::Table {
        line: header.0,
        source,
    })?;
    Ok(GroupoidSource {
        name,
        builder,
        element_count: objects.len() + arrows.len(),
    })
}

/// Canonical GPD text. Products with an identity factor are written only
/// where they differ from the default, and an inverse only where the
/// implied reverse declaration does not already give it.
pub fn serialize_groupoid(t: &GroupoidTable) -> String {
    let mut out = String::new();
    let nm = |g: usize| t.name_of(g);
    writeln!(out, "groupoid {}", t.name()).unwrap();
    out.push_str("objects:");
    for &o in t.objects() {
        write!(out, " {}", nm(o)).unwrap();
    }
    out.push('\n');
    // The parser places objects first, so emit them first and keep the
    // relative order of the rest.
    let order: Vec<usize> = t
        .objects()
        .iter()
        .copied()
        .chain(t.elements().filter(|&g| !t.is_object(g)))
        .collect();
    let rank: Vec<usize> = {
        let mut rank = vec![0; t.len()];
        for (i, &g) in order.iter().enumerate() {
            rank[g] = i;
        }
        rank
    };
    for &g in &order {
        if !t.is_object(g) {
            writeln!(out, "arrow {} : {} -> {}", nm(g), nm(t.d(g)), nm(t.r(g))).unwrap();
        }
    }
    for &g in &order {
        let h = t.inv(g);
        let implied_by_earlier = rank[h] < rank[g] && t.inv(h) == g;
        let default_for_object = t.is_object(g) && h == g;
        if !implied_by_earlier && !default_for_object {
            writeln!(out, "inv {} = {}", nm(g), nm(h)).unwrap();
        }
    }
    for &g in &order {
        for &h in &order {
            let Some(k) = t.comp(g, h) else { continue };
            let default = (t.is_object(g) && k == h) || (t.is_object(h) && k == g);
            if !default {
                writeln!(out, "comp {} {} = {}", nm(g), nm(h), nm(k)).unwrap();
            }
        }
    }
    out.push_str("end\n");
    out
}

// ---------------------------------------------------------------- PACT

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PactDocument {
    pub groupoid_ref: String,
    pub action: PartialActionTable,
}

pub fn parse_pact(text: &str, resolver: &mut dyn Resolver) -> Result<PactDocument, FormatError> {
    let (header, body) = frame(text, "paction")?;
    expect_shape(header.0, &header.1, &[Some("paction"), None, Some("on"), None], "paction <name> on <groupoid-file>")?;
    let groupoid_ref = header.1[3].to_string();
    let t = resolver
        .groupoid(&groupoid_ref)
        .map_err(|e| reference(header.0, e.to_string()))?;

    let mut points: Vec<String> = Vec::new();
    let mut point_at: BTreeMap<&str, usize> = BTreeMap::new();
    let mut set_line = None;
    let mut triples = Vec::new();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (line, tk) in &body {
        let line = *line;
        match tk[0] {
            "set:" => {
                if let Some(prev) = set_line {
                    return Err(duplicate(line, format!("`set:` already given on line {prev}")));
                }
                set_line = Some(line);
                for &p in &tk[1..] {
                    if point_at.insert(p, points.len()).is_some() {
                        return Err(duplicate(line, format!("point `{p}`")));
                    }
                    points.push(p.to_string());
                }
            }
            "act" => {
                expect_shape(line, tk, &[Some("act"), None, None, Some("="), None], "act <g> <x> = <y>")?;
                if set_line.is_none() {
                    return Err(syntax(line, "`set:` must come before `act`"));
                }
                let g = t
                    .index_of(tk[1])
                    .ok_or_else(|| reference(line, format!("unknown element `{}`", tk[1])))?;
                let pt = |p: &str| {
                    point_at
                        .get(p)
                        .copied()
                        .ok_or_else(|| reference(line, format!("unknown point `{p}`")))
                };
                let (x, y) = (pt(tk[2])?, pt(tk[4])?);
                if let Some(prev) = seen.insert((g, x), line) {
                    return Err(duplicate(line, format!("`{}·{}` already given on line {prev}", tk[1], tk[2])));
                }
                triples.push((g, x, y));
            }
            other => return Err(syntax(line, format!("unknown declaration `{other}`"))),
        }
    }
    if set_line.is_none() {
        return Err(syntax(header.0, "missing `set:` line"));
    }
    let action = PartialActionTable::new(header.1[1], t, points, triples).map_err(|e| FormatError::Invalid {
        line: header.0,
        message: e.to_string(),
    })?;
    Ok(PactDocument { groupoid_ref, action })
}

pub fn serialize_pact(p: &PartialActionTable, groupoid_ref: &str) -> String {
    let mut out = String::new();
    let t = p.groupoid();
    writeln!(out, "paction {} on {}", p.name(), groupoid_ref).unwrap();
    out.push_str("set:");
    for x in p.points() {
        write!(out, " {x}").unwrap();
    }
    out.push('\n');
    for ((g, x), y) in p.pairs() {
        writeln!(out, "act {} {} = {}", t.name_of(g), p.point_name(x), p.point_name(y)).unwrap();
    }
    out.push_str("end\n");
    out
}

// ---------------------------------------------------------------- FUNC

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncDocument {
    pub name: String,
    pub source_ref: String,
    pub target_ref: String,
    pub functor: GroupoidFunctor,
}

pub fn parse_func(text: &str, resolver: &mut dyn Resolver) -> Result<FuncDocument, FormatError> {
    let (header, body) = frame(text, "functor")?;
    expect_shape(
        header.0,
        &header.1,
        &[Some("functor"), None, Some(":"), None, Some("->"), None],
        "functor <name> : <src-file> -> <tgt-file>",
    )?;
    let (source_ref, target_ref) = (header.1[3].to_string(), header.1[5].to_string());
    let src = resolver.groupoid(&source_ref).map_err(|e| reference(header.0, e.to_string()))?;
    let tgt = resolver.groupoid(&target_ref).map_err(|e| reference(header.0, e.to_string()))?;
    let mut map: Vec<Option<(usize, usize)>> = vec![None; src.len()];
    for (line, tk) in &body {
        let line = *line;
        if tk[0] != "map" {
            return Err(syntax(line, format!("unknown declaration `{}`", tk[0])));
        }
        expect_shape(line, tk, &[Some("map"), None, Some("="), None], "map <id> = <id>")?;
        let a = src
            .index_of(tk[1])
            .ok_or_else(|| reference(line, format!("unknown source element `{}`", tk[1])))?;
        let b = tgt
            .index_of(tk[3])
            .ok_or_else(|| reference(line, format!("unknown target element `{}`", tk[3])))?;
        if let Some((prev, _)) = map[a] {
            return Err(duplicate(line, format!("image of `{}` already given on line {prev}", tk[1])));
        }
        map[a] = Some((line, b));
    }
    let map = map
        .iter()
        .enumerate()
        .map(|(a, m)| {
            m.map(|(_, b)| b)
                .ok_or_else(|| reference(header.0, format!("no image given for `{}`", src.name_of(a))))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let functor = GroupoidFunctor::new(src, tgt, map).map_err(|e| FormatError::Invalid {
        line: header.0,
        message: e.to_string(),
    })?;
    Ok(FuncDocument {
        name: header.1[1].to_string(),
        source_ref,
        target_ref,
        functor,
    })
}

pub fn serialize_func(name: &str, f: &GroupoidFunctor, source_ref: &str, target_ref: &str) -> String {
    let mut out = String::new();
    writeln!(out, "functor {name} : {source_ref} -> {target_ref}").unwrap();
    for a in f.source().elements() {
        writeln!(out, "map {} = {}", f.source().name_of(a), f.target().name_of(f.apply(a))).unwrap();
    }
    out.push_str("end\n");
    out
}

// ---------------------------------------------------------------- AUT

#[derive(Debug, Clone)]
pub struct AutDocument {
    pub name: String,
    pub group_ref: String,
    pub target_ref: String,
    pub action: AutAction,
}

pub fn parse_aut(text: &str, resolver: &mut dyn Resolver) -> Result<AutDocument, FormatError> {
    let (header, body) = frame(text, "autaction")?;
    expect_shape(
        header.0,
        &header.1,
        &[Some("autaction"), None, Some(":"), None, Some("on"), None],
        "autaction <name> : <group-file> on <groupoid-file>",
    )?;
    let (group_ref, target_ref) = (header.1[3].to_string(), header.1[5].to_string());
    let group = resolver.groupoid(&group_ref).map_err(|e| reference(header.0, e.to_string()))?;
    let target = resolver.groupoid(&target_ref).map_err(|e| reference(header.0, e.to_string()))?;
    let identity: Vec<usize> = target.elements().collect();
    let mut omega: Vec<Option<(usize, Vec<usize>)>> = vec![None; group.len()];
    for (line, tk) in &body {
        let line = *line;
        if tk[0] != "perm" || tk.len() < 2 {
            return Err(syntax(line, "expected `perm <group-elt>: <id>-><id> ...`"));
        }
        let (label, rest) = match tk[1].strip_suffix(':') {
            Some(label) if !label.is_empty() => (label, &tk[2..]),
            _ if tk.get(2) == Some(&":") => (tk[1], &tk[3..]),
            _ => return Err(syntax(line, "expected `perm <group-elt>: <id>-><id> ...`")),
        };
        let g = group
            .index_of(label)
            .ok_or_else(|| reference(line, format!("unknown group element `{label}`")))?;
        if let Some((prev, _)) = &omega[g] {
            return Err(duplicate(line, format!("permutation of `{label}` already given on line {prev}")));
        }
        let mut perm = identity.clone();
        let mut moved = vec![false; target.len()];
        for m in rest {
            let (a, b) = m
                .split_once("->")
                .ok_or_else(|| syntax(line, format!("expected `<id>-><id>`, found `{m}`")))?;
            let ia = target
                .index_of(a)
                .ok_or_else(|| reference(line, format!("unknown element `{a}`")))?;
            let ib = target
                .index_of(b)
                .ok_or_else(|| reference(line, format!("unknown element `{b}`")))?;
            if moved[ia] {
                return Err(duplicate(line, format!("image of `{a}`")));
            }
            moved[ia] = true;
            perm[ia] = ib;
        }
        omega[g] = Some((line, perm));
    }
    let omega: Vec<Vec<usize>> = omega
        .into_iter()
        .map(|p| p.map_or_else(|| identity.clone(), |(_, p)| p))
        .collect();
    let action = AutAction::new(group, target, omega).map_err(|e| FormatError::Invalid {
        line: header.0,
        message: e.to_string(),
    })?;
    Ok(AutDocument {
        name: header.1[1].to_string(),
        group_ref,
        target_ref,
        action,
    })
}

/// One `perm` line per group element, listing only moved elements.
pub fn serialize_aut(name: &str, a: &AutAction, group_ref: &str, target_ref: &str) -> String {
    let mut out = String::new();
    writeln!(out, "autaction {name} : {group_ref} on {target_ref}").unwrap();
    let (group, target) = (a.group(), a.target());
    for g in group.elements() {
        write!(out, "perm {}:", group.name_of(g)).unwrap();
        for x in target.elements() {
            let y = a.act(g, x);
            if y != x {
                write!(out, " {}->{}", target.name_of(x), target.name_of(y)).unwrap();
            }
        }
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

// ---------------------------------------------------------------- any

#[derive(Debug, Clone)]
pub enum Document {
    Groupoid(GroupoidSource),
    Paction(PactDocument),
    Functor(FuncDocument),
    AutAction(AutDocument),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Groupoid(_) => "groupoid",
            Document::Paction(_) => "paction",
            Document::Functor(_) => "functor",
            Document::AutAction(_) => "autaction",
        }
    }
}

/// Parses any of the four formats, chosen by the header keyword.
pub fn parse_document(text: &str, resolver: &mut dyn Resolver) -> Result<Document, FormatError> {
    let first = lines(text).into_iter().next();
    match first.as_ref().map(|(_, t)| t[0]) {
        Some("groupoid") => Ok(Document::Groupoid(parse_groupoid(text)?)),
        Some("paction") => Ok(Document::Paction(parse_pact(text, resolver)?)),
        Some("functor") => Ok(Document::Functor(parse_func(text, resolver)?)),
        Some("autaction") => Ok(Document::AutAction(parse_aut(text, resolver)?)),
        Some(other) => Err(syntax(first.unwrap().0, format!("unknown document kind `{other}`"))),
        None => Err(syntax(1, "empty document")),
    }
}

/// Canonical text of a document. A groupoid that does not build (for
/// example one declaring conflicting products) cannot be serialized.
pub fn serialize_document(doc: &Document) -> Result<String, TableError> {
    Ok(match doc {
        Document::Groupoid(g) => serialize_groupoid(&g.build()?),
        Document::Paction(p) => serialize_pact(&p.action, &p.groupoid_ref),
        Document::Functor(f) => serialize_func(&f.name, &f.functor, &f.source_ref, &f.target_ref),
        Document::AutAction(a) => serialize_aut(&a.name, &a.action, &a.group_ref, &a.target_ref),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use groupoid_core::catalog;

    const Z2: &str = "groupoid Z2\nobjects: e\narrow a : e -> e\ninv a = a\ncomp a a = e\nend\n";

    #[test]
    fn parses_the_z2_document() {
        let src = parse_groupoid(Z2).unwrap();
        let t = src.build().unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.validate().passed());
        assert_eq!(serialize_groupoid(&t), Z2);
    }

    #[test]
    fn e8_round_trips() {
        let text = serialize_groupoid(&catalog::e8());
        let src = parse_groupoid(&text).unwrap();
        assert_eq!(src.element_count, 8);
        assert_eq!(serialize_groupoid(&src.build().unwrap()), text);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# Z2\n\ngroupoid Z2   # name\nobjects: e\narrow a : e -> e\ninv a = a\n\ncomp a a = e\nend\n# trailing\n";
        let t = parse_groupoid(text).unwrap().build().unwrap();
        assert_eq!(serialize_groupoid(&t), Z2);
    }

    #[test]
    fn non_composable_product_is_a_reference_error_at_its_line() {
        let text = "groupoid P\nobjects: x y\narrow u : x -> y\ninv u = w\narrow w : y -> x\ncomp u u = x\nend\n";
        let err = parse_groupoid(text).unwrap_err();
        assert!(matches!(err, FormatError::Reference { line: 6, .. }), "{err}");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("groupoid Z\nobjects: e e\nend\n", 2, "duplicate"),
            ("groupoid Z\nobjects: e\narrow a : e -> f\ninv a = a\nend\n", 3, "unknown"),
            ("groupoid Z\nobjects: e\narrow a e e\nend\n", 3, "syntax"),
            ("groupoid Z\nobjects: e\narrow a : e -> e\nend\n", 3, "unknown"),
            ("groupoid Z\nobjects: e\narrow a : e -> e\ninv a = a\ncomp a a = e\ncomp a a = e\nend\n", 6, "duplicate"),
            ("groupoid Z\nobjects: e\nend\nextra\n", 4, "syntax"),
            ("groupoid Z\nobjects: e\n", 2, "syntax"),
            ("groupoid Z\nobjects: e\nbogus\nend\n", 3, "syntax"),
        ];
        for (text, line, kind) in cases {
            let err = parse_groupoid(text).unwrap_err();
            assert_eq!(err.line(), Some(line), "{text:?}: {err}");
            assert!(err.to_string().contains(kind), "{text:?}: {err}");
        }
    }

    #[test]
    fn pact_func_and_aut_round_trip() {
        let z2 = Arc::new(catalog::cyclic(2));
        let mut res = MapResolver::default().with("z2.gpd", z2.clone());
        let pact = "paction reg on z2.gpd\nset: p q\nact 1 p = p\nact 1 q = q\nact a p = q\nact a q = p\nend\n";
        let doc = parse_pact(pact, &mut res).unwrap();
        assert!(doc.action.is_global());
        assert_eq!(serialize_pact(&doc.action, &doc.groupoid_ref), pact);

        let func = "functor id : z2.gpd -> z2.gpd\nmap 1 = 1\nmap a = a\nend\n";
        let doc = parse_func(func, &mut res).unwrap();
        assert!(doc.functor.is_isomorphism());
        assert_eq!(serialize_func(&doc.name, &doc.functor, &doc.source_ref, &doc.target_ref), func);

        let aut = "autaction triv : z2.gpd on z2.gpd\nperm 1:\nperm a:\nend\n";
        let doc = parse_aut(aut, &mut res).unwrap();
        assert!(doc.action.is_trivial());
        assert_eq!(serialize_aut(&doc.name, &doc.action, &doc.group_ref, &doc.target_ref), aut);
    }

    #[test]
    fn pact_reference_errors() {
        let z2 = Arc::new(catalog::cyclic(2));
        let mut res = MapResolver::default().with("z2.gpd", z2);
        let err = parse_pact("paction p on z2.gpd\nset: p\nact b p = p\nend\n", &mut res).unwrap_err();
        assert!(matches!(err, FormatError::Reference { line: 3, .. }));
        let err = parse_pact("paction p on none.gpd\nset: p\nend\n", &mut res).unwrap_err();
        assert!(matches!(err, FormatError::Reference { line: 1, .. }));
        let err = parse_pact("paction p on z2.gpd\nset: p\nact 1 p = p\nact 1 p = p\nend\n", &mut res).unwrap_err();
        assert!(matches!(err, FormatError::Duplicate { line: 4, .. }));
    }

    #[test]
    fn document_dispatch_by_header() {
        let mut res = MapResolver::default();
        let doc = parse_document(Z2, &mut res).unwrap();
        assert_eq!(doc.kind(), "groupoid");
        assert_eq!(serialize_document(&doc).unwrap(), Z2);
        assert!(parse_document("monoid M\nend\n", &mut res).is_err());
    }
}
