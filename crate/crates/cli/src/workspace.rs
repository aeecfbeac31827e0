//! Line-oriented workspace files.
//!
//! ```text
//! [base]
//! objects: v e
//! morphism s : v -> e
//! identity v = id_v
//! compose id_v ; s = s
//!
//! [presheaf A]
//! v: x0 x1
//! e: a
//! action s: a->x0
//!
//! [map inc : dA -> A]
//! component v: x0->x0 x1->x1
//!
//! [genset IG]
//! point boundary
//!
//! [config]
//! fuel = 1024
//! bound = v:2 e:2
//! cross_check = false
//! ```
//!
//! Compositions with identities may be omitted; they are filled in.
//! Identity actions may be omitted. `#` starts a comment.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use thiserror::Error;

use minmodel::analysis::Bound;
use minmodel::base::{load_base, BaseCategory, BaseDescription};
use minmodel::factorization::GeneratingSet;
use minmodel::presheaf::{validate_map, validate_presheaf, MapData, Presheaf, PresheafData, PresheafMap};

#[derive(Debug, Error)]
pub enum WorkspaceError {
    #[error("line {line}: expected {expected}")]
    Parse { line: usize, expected: String },
    #[error("line {line}: {source}")]
    Validation {
        line: usize,
        #[source]
        source: minmodel::Error,
    },
    #[error("line {line}: duplicate {kind} `{name}`")]
    DuplicateName { line: usize, kind: &'static str, name: String },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

pub type WsResult<T> = std::result::Result<T, WorkspaceError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundSpec {
    Uniform(usize),
    PerObject(Vec<(String, usize)>),
}

impl BoundSpec {
    pub fn resolve(&self, base: &BaseCategory) -> Result<Bound, String> {
        match self {
            BoundSpec::Uniform(n) => Ok(Bound::uniform(base, *n)),
            BoundSpec::PerObject(pairs) => {
                let mut out = vec![None; base.object_count()];
                for (o, n) in pairs {
                    let id = base.object_id(o).ok_or_else(|| format!("unknown object `{o}` in bound"))?;
                    out[id] = Some(*n);
                }
                out.into_iter()
                    .enumerate()
                    .map(|(k, n)| n.ok_or_else(|| format!("bound misses object `{}`", base.objects()[k])))
                    .collect::<Result<_, _>>()
                    .map(Bound)
            }
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Ok(n) = s.parse() {
            return Some(BoundSpec::Uniform(n));
        }
        let pairs = s
            .split_whitespace()
            .map(|tok| {
                let (o, n) = tok.split_once(':')?;
                Some((o.to_string(), n.parse().ok()?))
            })
            .collect::<Option<Vec<_>>>()?;
        (!pairs.is_empty()).then_some(BoundSpec::PerObject(pairs))
    }

    fn render(&self) -> String {
        match self {
            BoundSpec::Uniform(n) => n.to_string(),
            BoundSpec::PerObject(p) => p.iter().map(|(o, n)| format!("{o}:{n}")).collect::<Vec<_>>().join(" "),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub fuel: usize,
    pub bound: BoundSpec,
    pub cross_check: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { fuel: 1024, bound: BoundSpec::Uniform(3), cross_check: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedMap {
    pub source: String,
    pub target: String,
    pub map: PresheafMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Workspace {
    pub base: Arc<BaseCategory>,
    pub presheaves: IndexMap<String, Arc<Presheaf>>,
    pub maps: IndexMap<String, NamedMap>,
    pub gensets: IndexMap<String, Vec<String>>,
    pub config: Config,
}

impl Workspace {
    pub fn presheaf(&self, name: &str) -> WsResult<&Arc<Presheaf>> {
        self.presheaves.get(name).ok_or_else(|| WorkspaceError::UnknownName { kind: "presheaf", name: name.into() })
    }

    pub fn map(&self, name: &str) -> WsResult<&PresheafMap> {
        self.maps
            .get(name)
            .map(|m| &m.map)
            .ok_or_else(|| WorkspaceError::UnknownName { kind: "map", name: name.into() })
    }

    pub fn genset(&self, name: &str) -> WsResult<GeneratingSet> {
        let names =
            self.gensets.get(name).ok_or_else(|| WorkspaceError::UnknownName { kind: "genset", name: name.into() })?;
        let maps = names.iter().map(|n| self.map(n).cloned()).collect::<WsResult<_>>()?;
        Ok(GeneratingSet::new(name, maps))
    }

    /// Name under which a map is declared, if any.
    pub fn map_name(&self, f: &PresheafMap) -> Option<&str> {
        self.maps.iter().find(|(_, m)| &m.map == f).map(|(n, _)| n.as_str())
    }
}

pub fn load_workspace(path: &Path) -> WsResult<Workspace> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| WorkspaceError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_workspace(&text)
}

enum Header {
    Base,
    Presheaf(String),
    Map(String, String, String),
    Genset(String),
    Config,
}

struct Section {
    line: usize,
    header: Header,
    body: Vec<(usize, String)>,
}

fn expected(line: usize, what: &str) -> WorkspaceError {
    WorkspaceError::Parse { line, expected: what.into() }
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(char::is_whitespace) && !s.contains("->") && !s.contains(['[', ']', '#'])
}

fn single_name(s: &str, line: usize, what: &str) -> WsResult<String> {
    let s = s.trim();
    if is_name(s) && !s.contains(':') {
        Ok(s.to_string())
    } else {
        Err(expected(line, what))
    }
}

/// `NAME : A -> B` (also used by morphism declarations).
fn arrow_decl(s: &str, line: usize, what: &str) -> WsResult<(String, String, String)> {
    let (name, rest) = s.split_once(':').ok_or_else(|| expected(line, what))?;
    let (a, b) = rest.split_once("->").ok_or_else(|| expected(line, what))?;
    Ok((single_name(name, line, what)?, single_name(a, line, what)?, single_name(b, line, what)?))
}

fn parse_header(s: &str, line: usize) -> WsResult<Header> {
    let inner = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(|| expected(line, "a section header"))?;
    let inner = inner.trim();
    let (kind, rest) = inner.split_once(char::is_whitespace).unwrap_or((inner, ""));
    match kind {
        "base" if rest.trim().is_empty() => Ok(Header::Base),
        "config" if rest.trim().is_empty() => Ok(Header::Config),
        "presheaf" => Ok(Header::Presheaf(single_name(rest, line, "`[presheaf NAME]`")?)),
        "genset" => Ok(Header::Genset(single_name(rest, line, "`[genset NAME]`")?)),
        "map" => {
            let (n, a, b) = arrow_decl(rest, line, "`[map NAME : SOURCE -> TARGET]`")?;
            Ok(Header::Map(n, a, b))
        }
        _ => Err(expected(line, "one of [base], [presheaf NAME], [map NAME : A -> B], [genset NAME], [config]")),
    }
}

fn split_sections(text: &str) -> WsResult<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            sections.push(Section { line, header: parse_header(content, line)?, body: Vec::new() });
        } else {
            match sections.last_mut() {
                Some(s) => s.body.push((line, content.to_string())),
                None => return Err(expected(line, "a section header before any content")),
            }
        }
    }
    Ok(sections)
}

/// `x->y` pairs separated by whitespace.
fn graph(s: &str, line: usize) -> WsResult<Vec<(String, String)>> {
    s.split_whitespace()
        .map(|tok| {
            let (x, y) = tok.split_once("->").ok_or_else(|| expected(line, "`element->element` pairs"))?;
            if is_name(x) && is_name(y) {
                Ok((x.to_string(), y.to_string()))
            } else {
                Err(expected(line, "`element->element` pairs"))
            }
        })
        .collect()
}

fn parse_base(sec: &Section) -> WsResult<BaseDescription> {
    let mut desc = BaseDescription::default();
    let mut saw_objects = false;
    for (line, l) in &sec.body {
        let line = *line;
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l.as_str(), ""));
        if let Some(objs) = l.strip_prefix("objects:") {
            if saw_objects {
                return Err(WorkspaceError::DuplicateName { line, kind: "declaration", name: "objects".into() });
            }
            saw_objects = true;
            for o in objs.split_whitespace() {
                desc.objects.push(single_name(o, line, "object names")?);
            }
            continue;
        }
        match kw {
            "morphism" => desc.morphisms.push(arrow_decl(rest, line, "`morphism NAME : DOM -> COD`")?),
            "identity" => {
                let (o, m) = rest.split_once('=').ok_or_else(|| expected(line, "`identity OBJECT = MORPHISM`"))?;
                desc.identities.push((single_name(o, line, "an object")?, single_name(m, line, "a morphism")?));
            }
            "compose" => {
                let what = "`compose F ; G = H`";
                let (fg, h) = rest.split_once('=').ok_or_else(|| expected(line, what))?;
                let (f, g) = fg.split_once(';').ok_or_else(|| expected(line, what))?;
                desc.compositions.push((
                    single_name(f, line, what)?,
                    single_name(g, line, what)?,
                    single_name(h, line, what)?,
                ));
            }
            _ => return Err(expected(line, "`objects:`, `morphism`, `identity` or `compose`")),
        }
    }
    // fill in unit laws that were not spelled out
    let dom_cod: IndexMap<&str, (&str, &str)> =
        desc.morphisms.iter().map(|(n, d, c)| (n.as_str(), (d.as_str(), c.as_str()))).collect();
    let mut extra = Vec::new();
    let listed = |f: &str, g: &str| desc.compositions.iter().any(|(a, b, _)| a == f && b == g);
    for (obj, id) in &desc.identities {
        for (m, (d, c)) in &dom_cod {
            if d == obj && !listed(id, m) && !extra.iter().any(|(a, b, _): &(String, String, String)| a == id && b == m) {
                extra.push((id.clone(), m.to_string(), m.to_string()));
            }
            if c == obj && !listed(m, id) && !extra.iter().any(|(a, b, _): &(String, String, String)| a == m && b == id) {
                extra.push((m.to_string(), id.clone(), m.to_string()));
            }
        }
    }
    desc.compositions.extend(extra);
    Ok(desc)
}

fn parse_presheaf(sec: &Section) -> WsResult<PresheafData> {
    let mut data = PresheafData::default();
    for (line, l) in &sec.body {
        let line = *line;
        let (head, rest) = l.split_once(':').ok_or_else(|| expected(line, "`OBJECT: elements` or `action MORPHISM: x->y ...`"))?;
        let words: Vec<&str> = head.split_whitespace().collect();
        match words.as_slice() {
            [obj] => {
                let elems = rest
                    .split_whitespace()
                    .map(|e| if is_name(e) { Ok(e.to_string()) } else { Err(expected(line, "element names")) })
                    .collect::<WsResult<_>>()?;
                data.carriers.push((single_name(obj, line, "an object")?, elems));
            }
            ["action", m] => data.actions.push((single_name(m, line, "a morphism")?, graph(rest, line)?)),
            _ => return Err(expected(line, "`OBJECT: elements` or `action MORPHISM: x->y ...`")),
        }
    }
    Ok(data)
}

fn parse_map(sec: &Section) -> WsResult<MapData> {
    let mut data = MapData::default();
    for (line, l) in &sec.body {
        let line = *line;
        let what = "`component OBJECT: x->y ...`";
        let (head, rest) = l.split_once(':').ok_or_else(|| expected(line, what))?;
        match head.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["component", o] => data.components.push((single_name(o, line, what)?, graph(rest, line)?)),
            _ => return Err(expected(line, what)),
        }
    }
    Ok(data)
}

fn parse_config(sec: &Section, config: &mut Config) -> WsResult<()> {
    for (line, l) in &sec.body {
        let line = *line;
        let (k, v) = l.split_once('=').ok_or_else(|| expected(line, "`key = value`"))?;
        let v = v.trim();
        match k.trim() {
            "fuel" => config.fuel = v.parse().map_err(|_| expected(line, "a non-negative integer fuel"))?,
            "bound" => config.bound = BoundSpec::parse(v).ok_or_else(|| expected(line, "`N` or `OBJECT:N ...`"))?,
            "cross_check" => config.cross_check = v.parse().map_err(|_| expected(line, "`true` or `false`"))?,
            _ => return Err(expected(line, "one of `fuel`, `bound`, `cross_check`")),
        }
    }
    Ok(())
}

pub fn parse_workspace(text: &str) -> WsResult<Workspace> {
    let sections = split_sections(text)?;
    let mut bases = sections.iter().filter(|s| matches!(s.header, Header::Base));
    let base_sec = bases.next().ok_or_else(|| expected(1, "a [base] section"))?;
    if let Some(dup) = bases.next() {
        return Err(WorkspaceError::DuplicateName { line: dup.line, kind: "section", name: "base".into() });
    }
    let base = Arc::new(
        load_base(&parse_base(base_sec)?)
            .map_err(|source| WorkspaceError::Validation { line: base_sec.line, source })?,
    );

    let mut config = Config::default();
    let mut saw_config = false;
    let mut presheaves: IndexMap<String, Arc<Presheaf>> = IndexMap::new();
    let mut maps: IndexMap<String, NamedMap> = IndexMap::new();
    let mut gensets: IndexMap<String, Vec<String>> = IndexMap::new();

    for sec in sections.iter().filter(|s| matches!(s.header, Header::Presheaf(_))) {
        let Header::Presheaf(name) = &sec.header else { unreachable!() };
        let p = validate_presheaf(&base, &parse_presheaf(sec)?)
            .map_err(|source| WorkspaceError::Validation { line: sec.line, source })?;
        if presheaves.insert(name.clone(), Arc::new(p)).is_some() {
            return Err(WorkspaceError::DuplicateName { line: sec.line, kind: "presheaf", name: name.clone() });
        }
    }
    for sec in &sections {
        match &sec.header {
            Header::Base | Header::Presheaf(_) => {}
            Header::Map(name, a, b) => {
                let lookup = |n: &str| {
                    presheaves.get(n).cloned().ok_or_else(|| WorkspaceError::UnknownName { kind: "presheaf", name: n.into() })
                };
                let (src, tgt) = (lookup(a)?, lookup(b)?);
                let map = validate_map(&src, &tgt, &parse_map(sec)?)
                    .map_err(|source| WorkspaceError::Validation { line: sec.line, source })?;
                let named = NamedMap { source: a.clone(), target: b.clone(), map };
                if maps.insert(name.clone(), named).is_some() {
                    return Err(WorkspaceError::DuplicateName { line: sec.line, kind: "map", name: name.clone() });
                }
            }
            Header::Genset(name) => {
                let names: Vec<String> =
                    sec.body.iter().flat_map(|(_, l)| l.split_whitespace().map(str::to_string)).collect();
                if gensets.insert(name.clone(), names).is_some() {
                    return Err(WorkspaceError::DuplicateName { line: sec.line, kind: "genset", name: name.clone() });
                }
            }
            Header::Config => {
                if saw_config {
                    return Err(WorkspaceError::DuplicateName { line: sec.line, kind: "section", name: "config".into() });
                }
                saw_config = true;
                parse_config(sec, &mut config)?;
            }
        }
    }
    for names in gensets.values() {
        for n in names {
            if !maps.contains_key(n) {
                return Err(WorkspaceError::UnknownName { kind: "map", name: n.clone() });
            }
        }
    }
    Ok(Workspace { base, presheaves, maps, gensets, config })
}

fn write_graph(out: &mut String, pairs: &[(String, String)]) {
    for (x, y) in pairs {
        let _ = write!(out, " {x}->{y}");
    }
    out.push('\n');
}

/// Writes a workspace back in the file format. Parsing the result gives an equal workspace.
pub fn serialize_workspace(ws: &Workspace) -> String {
    let mut out = String::new();
    let desc = ws.base.describe();
    out.push_str("[base]\nobjects:");
    for o in &desc.objects {
        let _ = write!(out, " {o}");
    }
    out.push('\n');
    for (n, d, c) in &desc.morphisms {
        let _ = writeln!(out, "morphism {n} : {d} -> {c}");
    }
    for (o, m) in &desc.identities {
        let _ = writeln!(out, "identity {o} = {m}");
    }
    for (f, g, h) in &desc.compositions {
        let _ = writeln!(out, "compose {f} ; {g} = {h}");
    }
    for (name, p) in &ws.presheaves {
        let data = p.to_data();
        let _ = writeln!(out, "\n[presheaf {name}]");
        for (o, elems) in &data.carriers {
            let _ = write!(out, "{o}:");
            for e in elems {
                let _ = write!(out, " {e}");
            }
            out.push('\n');
        }
        for (m, g) in &data.actions {
            let _ = write!(out, "action {m}:");
            write_graph(&mut out, g);
        }
    }
    for (name, m) in &ws.maps {
        let _ = writeln!(out, "\n[map {name} : {} -> {}]", m.source, m.target);
        for (o, g) in &m.map.to_data().components {
            let _ = write!(out, "component {o}:");
            write_graph(&mut out, g);
        }
    }
    for (name, maps) in &ws.gensets {
        let _ = writeln!(out, "\n[genset {name}]");
        let _ = writeln!(out, "{}", maps.join(" "));
    }
    let c = &ws.config;
    let _ = writeln!(
        out,
        "\n[config]\nfuel = {}\nbound = {}\ncross_check = {}",
        c.fuel,
        c.bound.render(),
        c.cross_check
    );
    out
}
