/*! The line-oriented textual formats: `.fcat` category blocks, `.ffib`
fibration documents, `.fidx` indexed categories.

Composition tables are explicit: the table IS the category, and nothing is
inferred on load. Every block validates through its module's validator the
moment it is parsed; cross-references resolve to earlier blocks only, which
keeps resolution acyclic. */

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::cat::{
    validate_category, AdjunctionData, Arr, CatViolation, FinCat, FunctorData, NatTransData, Obj,
    RawCat,
};
use crate::construct::{IndexedCat, InternalCat};
use crate::fib::FibrationData;
use crate::moens::DistributorData;

#[derive(Clone, Debug)]
pub enum Entity {
    Category(Arc<FinCat>),
    Functor(FunctorData),
    NatTrans(NatTransData),
    Fibration(Arc<FibrationData>),
    Indexed(IndexedCat),
    Internal(InternalCat),
    Adjunction(AdjunctionData),
    Distributor(DistributorData),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Category(_) => "category",
            Entity::Functor(_) => "functor",
            Entity::NatTrans(_) => "nattrans",
            Entity::Fibration(_) => "fibration",
            Entity::Indexed(_) => "indexed",
            Entity::Internal(_) => "internal",
            Entity::Adjunction(_) => "adjunction",
            Entity::Distributor(_) => "distributor",
        }
    }
}

/// A parsed document: named blocks in their original order.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub order: Vec<String>,
    pub entities: BTreeMap<String, Entity>,
}

#[derive(Clone, Debug, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unresolved reference `{name}` at line {line}")]
    UnresolvedReference { name: String, line: usize },
    #[error("duplicate block name `{0}`")]
    DuplicateName(String),
    #[error("validation of `{name}` failed: {details}")]
    Validation { name: String, details: String },
}

impl Document {
    pub fn category(&self, name: &str) -> Option<&Arc<FinCat>> {
        match self.entities.get(name) {
            Some(Entity::Category(c)) => Some(c),
            _ => None,
        }
    }

    pub fn functor(&self, name: &str) -> Option<&FunctorData> {
        match self.entities.get(name) {
            Some(Entity::Functor(f)) => Some(f),
            _ => None,
        }
    }

    pub fn fibration(&self, name: &str) -> Option<&Arc<FibrationData>> {
        match self.entities.get(name) {
            Some(Entity::Fibration(f)) => Some(f),
            _ => None,
        }
    }

    pub fn adjunction(&self, name: &str) -> Option<&AdjunctionData> {
        match self.entities.get(name) {
            Some(Entity::Adjunction(a)) => Some(a),
            _ => None,
        }
    }

    pub fn indexed(&self, name: &str) -> Option<&IndexedCat> {
        match self.entities.get(name) {
            Some(Entity::Indexed(h)) => Some(h),
            _ => None,
        }
    }

    pub fn internal(&self, name: &str) -> Option<&InternalCat> {
        match self.entities.get(name) {
            Some(Entity::Internal(c)) => Some(c),
            _ => None,
        }
    }

    pub fn insert(&mut self, name: &str, e: Entity) {
        if !self.entities.contains_key(name) {
            self.order.push(name.to_string());
        }
        self.entities.insert(name.to_string(), e);
    }

    /// Registers a category with a stable name, reusing an existing entry
    /// when the same table is already present.
    pub fn intern_category(&mut self, hint: &str, c: &Arc<FinCat>) -> String {
        for (name, e) in &self.entities {
            if let Entity::Category(existing) = e {
                if **existing == **c {
                    return name.clone();
                }
            }
        }
        let mut name = hint.to_string();
        let mut k = 1;
        while self.entities.contains_key(&name) {
            name = format!("{hint}_{k}");
            k += 1;
        }
        self.insert(&name, Entity::Category(c.clone()));
        name
    }
}

struct Parser<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i, l.split_whitespace().collect()))
            .collect();
        Parser { lines, pos: 0 }
    }

    fn peek(&self) -> Option<&(usize, Vec<&'a str>)> {
        self.lines.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        let l = self.lines.get(self.pos).cloned();
        self.pos += 1;
        l
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| FormatError::Syntax { line, message: format!("expected a number, got `{tok}`") })
}

/// Parses a document, validating every block as it is read.
pub fn parse(text: &str) -> Result<Document, FormatError> {
    let mut p = Parser::new(text);
    let mut doc = Document::default();
    while let Some((line, toks)) = p.next() {
        let kind = toks[0];
        if toks.len() != 2 {
            return Err(FormatError::Syntax { line, message: format!("`{kind}` needs exactly a name") });
        }
        let name = toks[1].to_string();
        if doc.entities.contains_key(&name) {
            return Err(FormatError::DuplicateName(name));
        }
        let entity = match kind {
            "category" => parse_category(&mut p, &name)?,
            "functor" => parse_functor(&mut p, &doc, &name)?,
            "nattrans" => parse_nattrans(&mut p, &doc, &name)?,
            "fibration" => parse_fibration(&mut p, &doc, &name)?,
            "indexed" => parse_indexed(&mut p, &doc, &name)?,
            "internal" => parse_internal(&mut p, &doc, &name)?,
            "adjunction" => parse_adjunction(&mut p, &doc, &name)?,
            "distributor" => parse_distributor(&mut p, &doc, &name)?,
            other => {
                return Err(FormatError::Syntax { line, message: format!("unknown block kind `{other}`") })
            }
        };
        doc.insert(&name, entity);
    }
    Ok(doc)
}

fn block_lines<'a>(p: &mut Parser<'a>) -> Result<Vec<(usize, Vec<&'a str>)>, FormatError> {
    let mut out = Vec::new();
    loop {
        match p.peek() {
            Some((_, toks)) if toks[0] == "end" => {
                p.next();
                return Ok(out);
            }
            Some(_) => out.push(p.next().unwrap()),
            None => {
                return Err(FormatError::Syntax { line: 0, message: "unterminated block (missing `end`)".into() })
            }
        }
    }
}

fn parse_category(p: &mut Parser<'_>, name: &str) -> Result<Entity, FormatError> {
    let mut raw = RawCat::default();
    for (line, toks) in block_lines(p)? {
        match toks[0] {
            "objects" if toks.len() == 2 => {
                let n = parse_usize(toks[1], line)?;
                raw.objects = (0..n).collect();
            }
            "arrow" if toks.len() == 4 => raw.arrows.push((
                parse_usize(toks[1], line)?,
                parse_usize(toks[2], line)?,
                parse_usize(toks[3], line)?,
            )),
            "identity" if toks.len() == 3 => raw
                .identity
                .push((parse_usize(toks[1], line)?, parse_usize(toks[2], line)?)),
            "compose" if toks.len() == 4 => raw.comp.push((
                (parse_usize(toks[1], line)?, parse_usize(toks[2], line)?),
                parse_usize(toks[3], line)?,
            )),
            other => {
                return Err(FormatError::Syntax { line, message: format!("unknown category field `{other}`") })
            }
        }
    }
    let (cat, _) = validate_category(&raw)
        .map_err(|v| FormatError::Validation { name: name.into(), details: violations_text(&v) })?;
    Ok(Entity::Category(Arc::new(cat)))
}

fn violations_text(v: &[CatViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

fn lookup_category(doc: &Document, name: &str, line: usize) -> Result<Arc<FinCat>, FormatError> {
    doc.category(name)
        .cloned()
        .ok_or_else(|| FormatError::UnresolvedReference { name: name.into(), line })
}

fn parse_mapping_tables(
    lines: &[(usize, Vec<&str>)],
    n_objects: usize,
    n_arrows: usize,
) -> Result<(Vec<Obj>, Vec<Arr>), FormatError> {
    let mut obj_map = vec![None; n_objects];
    let mut arr_map = vec![None; n_arrows];
    for (line, toks) in lines {
        match toks[0] {
            "object" if toks.len() == 3 => {
                let x = parse_usize(toks[1], *line)?;
                if x >= n_objects {
                    return Err(FormatError::Syntax { line: *line, message: format!("object {x} out of range") });
                }
                obj_map[x] = Some(Obj(parse_usize(toks[2], *line)?));
            }
            "arrow" if toks.len() == 3 => {
                let a = parse_usize(toks[1], *line)?;
                if a >= n_arrows {
                    return Err(FormatError::Syntax { line: *line, message: format!("arrow {a} out of range") });
                }
                arr_map[a] = Some(Arr(parse_usize(toks[2], *line)?));
            }
            _ => {}
        }
    }
    let obj_map = obj_map
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or(FormatError::Syntax { line: 0, message: format!("object {i} unmapped") }))
        .collect::<Result<_, _>>()?;
    let arr_map = arr_map
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.ok_or(FormatError::Syntax { line: 0, message: format!("arrow {i} unmapped") }))
        .collect::<Result<_, _>>()?;
    Ok((obj_map, arr_map))
}

fn parse_functor(p: &mut Parser<'_>, doc: &Document, name: &str) -> Result<Entity, FormatError> {
    let lines = block_lines(p)?;
    let mut source = None;
    let mut target = None;
    for (line, toks) in &lines {
        match toks[0] {
            "source" if toks.len() == 2 => source = Some(lookup_category(doc, toks[1], *line)?),
            "target" if toks.len() == 2 => target = Some(lookup_category(doc, toks[1], *line)?),
            _ => {}
        }
    }
    let (Some(source), Some(target)) = (source, target) else {
        return Err(FormatError::Syntax { line: 0, message: "functor needs source and target".into() });
    };
    let (obj_map, arr_map) = parse_mapping_tables(&lines, source.n_objects(), source.n_arrows())?;
    let f = FunctorData { source, target, obj_map, arr_map };
    f.validate()
        .map_err(|v| FormatError::Validation { name: name.into(), details: format!("{v:?}") })?;
    Ok(Entity::Functor(f))
}

fn parse_nattrans(p: &mut Parser<'_>, doc: &Document, name: &str) -> Result<Entity, FormatError> {
    let lines = block_lines(p)?;
    let mut source = None;
    let mut target = None;
    let mut comps = BTreeMap::new();
    for (line, toks) in &lines {
        match toks[0] {
            "source" if toks.len() == 2 => {
                source = Some(doc.functor(toks[1]).cloned().ok_or_else(|| {
                    FormatError::UnresolvedReference { name: toks[1].into(), line: *line }
                })?)
            }
            "target" if toks.len() == 2 => {
                target = Some(doc.functor(toks[1]).cloned().ok_or_else(|| {
                    FormatError::UnresolvedReference { name: toks[1].into(), line: *line }
                })?)
            }
            "component" if toks.len() == 3 => {
                comps.insert(parse_usize(toks[1], *line)?, Arr(parse_usize(toks[2], *line)?));
            }
            _ => {}
        }
    }
    let (Some(source), Some(target)) = (source, target) else {
        return Err(FormatError::Syntax { line: 0, message: "nattrans needs source and target".into() });
    };
    let components = (0..source.source.n_objects())
        .map(|i| {
            comps.get(&i).copied().ok_or(FormatError::Syntax {
                line: 0,
                message: format!("component at object {i} missing"),
            })
        })
        .collect::<Result<_, _>>()?;
    let t = NatTransData { source_functor: source, target_functor: target, components };
    t.validate()
        .map_err(|v| FormatError::Validation { name: name.into(), details: format!("{v:?}") })?;
    Ok(Entity::NatTrans(t))
}

fn parse_fibration(p: &mut Parser<'_>, doc: &Document, name: &str) -> Result<Entity, FormatError> {
    let lines = block_lines(p)?;
    let mut total = None;
    let mut base = None;
    for (line, toks) in &lines {
        match toks[0] {
            "total" if toks.len() == 2 => total = Some(lookup_category(doc, toks[1], *line)?),
            "base" if toks.len() == 2 => base = Some(lookup_category(doc, toks[1], *line)?),
            _ => {}
        }
    }
    let (Some(total), Some(base)) = (total, base) else {
        return Err(FormatError::Syntax { line: 0, message: "fibration needs total and base".into() });
    };
    let (obj_map, arr_map) = parse_mapping_tables(&lines, total.n_objects(), total.n_arrows())?;
    let proj = FunctorData { source: total, target: base, obj_map, arr_map };
    let fib = FibrationData::new(proj)
        .map_err(|e| FormatError::Validation { name: name.into(), details: e.to_string() })?;
    Ok(Entity::Fibration(Arc::new(fib)))
}

fn parse_indexed(p: &mut Parser<'_>, doc: &Document, name: &str) -> Result<Entity, FormatError> {
    let lines = block_lines(p)?;
    let mut base = None;
    let mut fibre_names = BTreeMap::new();
    let mut reindex_names = BTreeMap::new();
    for (line, toks) in &lines {
        match toks[0] {
            "base" if toks.len() == 2 => base = Some(lookup_category(doc, toks[1], *line)?),
            "fibre" if toks.len() == 3 => {
                fibre_names.insert(parse_usize(toks[1], *line)?, (toks[2].to_string(), *line));
            }
            "reindex" if toks.len() == 3 => {
                reindex_names.insert(parse_usize(toks[1], *line)?, (toks[2].to_string(), *line));
            }
            _ => {}
        }
    }
    let Some(base) = base else {
        return Err(FormatError::Syntax { line: 0, message: "indexed block needs a base".into() });
    };
    let fibres = (0..base.n_objects())
        .map(|i| {
            let (n, line) = fibre_names.get(&i).ok_or(FormatError::Syntax {
                line: 0,
                message: format!("fibre at object {i} missing"),
            })?;
            lookup_category(doc, n, *line)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let reindex = (0..base.n_arrows())
        .map(|u| {
            let (n, line) = reindex_names.get(&u).ok_or(FormatError::Syntax {
                line: 0,
                message: format!("reindexing at arrow {u} missing"),
            })?;
            doc.functor(n)
                .cloned()
                .ok_or_else(|| FormatError::UnresolvedReference { name: n.clone(), line: *line })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let h = IndexedCat { base, fibres, reindex };
    h.validate()
        .map_err(|e| FormatError::Validation { name: name.into(), details: e.to_string() })?;
    Ok(Entity::Indexed(h))
}

fn parse_internal(p: &mut Parser<'_>, doc: &Document, name: &str) -> Result<Entity, FormatError> {
    let lines = block_lines(p)?;
    let mut ambient = None;
    let mut data = None;
    for (line, toks) in &lines {
        match toks[0] {
            "ambient" if toks.len() == 2 => ambient = Some(lookup_category(doc, toks[1], *line)?),
            "data" if toks.len() == 10 => {
                let nums = toks[1..]
                    .iter()
                    .map(|t| parse_usize(t, *line))
                    .collect::<Result<Vec<_>, _>>()?;
                data = Some(nums);
            }
            _ => {}
        }
    }
    let (Some(ambient), Some(d)) = (ambient, data) else {
        return Err(FormatError::Syntax { line: 0, message: "internal block needs ambient and data".into() });
    };
    let c = InternalCat {
        ambient,
        c0: Obj(d[0]),
        c1: Obj(d[1]),
        d0: Arr(d[2]),
        d1: Arr(d[3]),
        i: Arr(d[4]),
        c2: Obj(d[5]),
        p1: Arr(d[6]),
        p2: Arr(d[7]),
        m: Arr(d[8]),
    };
    c.validate()
        .map_err(|e| FormatError::Validation { name: name.into(), details: e.to_string() })?;
    Ok(Entity::Internal(c))
}

fn parse_adjunction(p: &mut Parser<'_>, doc: &Document, name: &str) -> Result<Entity, FormatError> {
    let lines = block_lines(p)?;
    let mut left = None;
    let mut right = None;
    let mut unit = BTreeMap::new();
    let mut counit = BTreeMap::new();
    for (line, toks) in &lines {
        match toks[0] {
            "left" if toks.len() == 2 => {
                left = Some(doc.functor(toks[1]).cloned().ok_or_else(|| {
                    FormatError::UnresolvedReference { name: toks[1].into(), line: *line }
                })?)
            }
            "right" if toks.len() == 2 => {
                right = Some(doc.functor(toks[1]).cloned().ok_or_else(|| {
                    FormatError::UnresolvedReference { name: toks[1].into(), line: *line }
                })?)
            }
            "unit" if toks.len() == 3 => {
                unit.insert(parse_usize(toks[1], *line)?, Arr(parse_usize(toks[2], *line)?));
            }
            "counit" if toks.len() == 3 => {
                counit.insert(parse_usize(toks[1], *line)?, Arr(parse_usize(toks[2], *line)?));
            }
            _ => {}
        }
    }
    let (Some(left), Some(right)) = (left, right) else {
        return Err(FormatError::Syntax { line: 0, message: "adjunction needs left and right".into() });
    };
    let collect = |m: &BTreeMap<usize, Arr>, n: usize| -> Result<Vec<Arr>, FormatError> {
        (0..n)
            .map(|i| {
                m.get(&i).copied().ok_or(FormatError::Syntax {
                    line: 0,
                    message: format!("missing component at object {i}"),
                })
            })
            .collect()
    };
    let adj = AdjunctionData {
        unit: NatTransData {
            source_functor: FunctorData::identity(&left.source),
            target_functor: FunctorData::compose(&right, &left),
            components: collect(&unit, left.source.n_objects())?,
        },
        counit: NatTransData {
            source_functor: FunctorData::compose(&left, &right),
            target_functor: FunctorData::identity(&left.target),
            components: collect(&counit, left.target.n_objects())?,
        },
        left,
        right,
    };
    adj.validate()
        .map_err(|v| FormatError::Validation { name: name.into(), details: format!("{v:?}") })?;
    Ok(Entity::Adjunction(adj))
}

fn parse_distributor(p: &mut Parser<'_>, doc: &Document, name: &str) -> Result<Entity, FormatError> {
    let lines = block_lines(p)?;
    let mut a = None;
    let mut b = None;
    let mut value = BTreeMap::new();
    let mut b_action = BTreeMap::new();
    let mut a_action = BTreeMap::new();
    for (line, toks) in &lines {
        match toks[0] {
            "a" if toks.len() == 2 => a = Some(lookup_category(doc, toks[1], *line)?),
            "b" if toks.len() == 2 => b = Some(lookup_category(doc, toks[1], *line)?),
            "value" if toks.len() == 4 => {
                value.insert(
                    (Obj(parse_usize(toks[1], *line)?), Obj(parse_usize(toks[2], *line)?)),
                    parse_usize(toks[3], *line)?,
                );
            }
            "baction" if toks.len() >= 3 => {
                let v = Arr(parse_usize(toks[1], *line)?);
                let i = Obj(parse_usize(toks[2], *line)?);
                let map = toks[3..]
                    .iter()
                    .map(|t| parse_usize(t, *line))
                    .collect::<Result<Vec<_>, _>>()?;
                b_action.insert((v, i), map);
            }
            "aaction" if toks.len() >= 3 => {
                let k = Obj(parse_usize(toks[1], *line)?);
                let u = Arr(parse_usize(toks[2], *line)?);
                let map = toks[3..]
                    .iter()
                    .map(|t| parse_usize(t, *line))
                    .collect::<Result<Vec<_>, _>>()?;
                a_action.insert((k, u), map);
            }
            _ => {}
        }
    }
    let (Some(a), Some(b)) = (a, b) else {
        return Err(FormatError::Syntax { line: 0, message: "distributor needs a and b".into() });
    };
    let d = DistributorData { a, b, value, b_action, a_action };
    d.validate()
        .map_err(|e| FormatError::Validation { name: name.into(), details: e.to_string() })?;
    Ok(Entity::Distributor(d))
}

/// Canonical printing; `print ∘ parse` is the identity on canonical
/// documents and `parse ∘ print` is always the identity.
pub fn print(doc: &Document) -> String {
    let mut out = String::new();
    for name in &doc.order {
        let e = &doc.entities[name];
        match e {
            Entity::Category(c) => {
                let _ = writeln!(out, "category {name}");
                let _ = writeln!(out, "  objects {}", c.n_objects());
                for a in c.arrows() {
                    let _ = writeln!(out, "  arrow {} {} {}", a.0, c.dom(a).0, c.cod(a).0);
                }
                for x in c.objects() {
                    let _ = writeln!(out, "  identity {} {}", x.0, c.id(x).0);
                }
                for (g, f) in c.composable_pairs() {
                    let _ = writeln!(out, "  compose {} {} {}", g.0, f.0, c.compose(g, f).unwrap().0);
                }
                let _ = writeln!(out, "end");
            }
            Entity::Functor(f) => {
                let _ = writeln!(out, "functor {name}");
                let _ = writeln!(out, "  source {}", find_name(doc, &f.source));
                let _ = writeln!(out, "  target {}", find_name(doc, &f.target));
                for (i, o) in f.obj_map.iter().enumerate() {
                    let _ = writeln!(out, "  object {i} {}", o.0);
                }
                for (i, a) in f.arr_map.iter().enumerate() {
                    let _ = writeln!(out, "  arrow {i} {}", a.0);
                }
                let _ = writeln!(out, "end");
            }
            Entity::NatTrans(t) => {
                let _ = writeln!(out, "nattrans {name}");
                let _ = writeln!(out, "  source {}", find_functor_name(doc, &t.source_functor));
                let _ = writeln!(out, "  target {}", find_functor_name(doc, &t.target_functor));
                for (i, c) in t.components.iter().enumerate() {
                    let _ = writeln!(out, "  component {i} {}", c.0);
                }
                let _ = writeln!(out, "end");
            }
            Entity::Fibration(fib) => {
                let _ = writeln!(out, "fibration {name}");
                let _ = writeln!(out, "  total {}", find_name(doc, fib.total()));
                let _ = writeln!(out, "  base {}", find_name(doc, fib.base()));
                for (i, o) in fib.proj().obj_map.iter().enumerate() {
                    let _ = writeln!(out, "  object {i} {}", o.0);
                }
                for (i, a) in fib.proj().arr_map.iter().enumerate() {
                    let _ = writeln!(out, "  arrow {i} {}", a.0);
                }
                let _ = writeln!(out, "end");
            }
            Entity::Indexed(h) => {
                let _ = writeln!(out, "indexed {name}");
                let _ = writeln!(out, "  base {}", find_name(doc, &h.base));
                for (i, f) in h.fibres.iter().enumerate() {
                    let _ = writeln!(out, "  fibre {i} {}", find_name(doc, f));
                }
                for (u, r) in h.reindex.iter().enumerate() {
                    let _ = writeln!(out, "  reindex {u} {}", find_functor_name(doc, r));
                }
                let _ = writeln!(out, "end");
            }
            Entity::Internal(c) => {
                let _ = writeln!(out, "internal {name}");
                let _ = writeln!(out, "  ambient {}", find_name(doc, &c.ambient));
                let _ = writeln!(
                    out,
                    "  data {} {} {} {} {} {} {} {} {}",
                    c.c0.0, c.c1.0, c.d0.0, c.d1.0, c.i.0, c.c2.0, c.p1.0, c.p2.0, c.m.0
                );
                let _ = writeln!(out, "end");
            }
            Entity::Adjunction(adj) => {
                let _ = writeln!(out, "adjunction {name}");
                let _ = writeln!(out, "  left {}", find_functor_name(doc, &adj.left));
                let _ = writeln!(out, "  right {}", find_functor_name(doc, &adj.right));
                for (i, c) in adj.unit.components.iter().enumerate() {
                    let _ = writeln!(out, "  unit {i} {}", c.0);
                }
                for (i, c) in adj.counit.components.iter().enumerate() {
                    let _ = writeln!(out, "  counit {i} {}", c.0);
                }
                let _ = writeln!(out, "end");
            }
            Entity::Distributor(d) => {
                let _ = writeln!(out, "distributor {name}");
                let _ = writeln!(out, "  a {}", find_name(doc, &d.a));
                let _ = writeln!(out, "  b {}", find_name(doc, &d.b));
                for (&(k, i), &n) in &d.value {
                    let _ = writeln!(out, "  value {} {} {n}", k.0, i.0);
                }
                for (&(v, i), map) in &d.b_action {
                    let _ = write!(out, "  baction {} {}", v.0, i.0);
                    for e in map {
                        let _ = write!(out, " {e}");
                    }
                    let _ = writeln!(out);
                }
                for (&(k, u), map) in &d.a_action {
                    let _ = write!(out, "  aaction {} {}", k.0, u.0);
                    for e in map {
                        let _ = write!(out, " {e}");
                    }
                    let _ = writeln!(out);
                }
                let _ = writeln!(out, "end");
            }
        }
    }
    out
}

fn find_name(doc: &Document, c: &Arc<FinCat>) -> String {
    for (name, e) in &doc.entities {
        if let Entity::Category(x) = e {
            if **x == **c {
                return name.clone();
            }
        }
    }
    panic!("category printed before being interned in the document")
}

fn find_functor_name(doc: &Document, f: &FunctorData) -> String {
    for (name, e) in &doc.entities {
        if let Entity::Functor(x) = e {
            if x == f {
                return name.clone();
            }
        }
    }
    panic!("functor printed before being interned in the document")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn d2_roundtrips_byte_identical() {
        let mut doc = Document::default();
        doc.insert("d2", Entity::Category(corpus::d2()));
        let text = print(&doc);
        let reparsed = parse(&text).unwrap();
        assert_eq!(print(&reparsed), text);
        assert_eq!(reparsed.category("d2").unwrap(), &corpus::d2());
    }

    #[test]
    fn dangling_composition_is_a_validation_error() {
        let text = "category bad\n  objects 1\n  arrow 0 0 0\n  identity 0 0\n  compose 0 1 0\nend\n";
        match parse(text) {
            Err(FormatError::Validation { .. } | FormatError::Syntax { .. }) => {}
            other => panic!("expected an error, got {other:?}"),
        }
    }

    #[test]
    fn corrupted_composition_is_located() {
        // comp(1,1) = 3 in Z4 breaks associativity; the violation names the
        // offending triple.
        let mut text = String::from("category z4bad\n  objects 1\n");
        for a in 0..4 {
            text.push_str(&format!("  arrow {a} 0 0\n"));
        }
        text.push_str("  identity 0 0\n");
        for g in 0..4usize {
            for f in 0..4usize {
                let c = if (g, f) == (1, 1) { 3 } else { (g + f) % 4 };
                text.push_str(&format!("  compose {g} {f} {c}\n"));
            }
        }
        text.push_str("end\n");
        match parse(&text) {
            Err(FormatError::Validation { details, .. }) => {
                assert!(details.contains("associativity"), "got: {details}");
            }
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn functor_block_roundtrip() {
        let mut doc = Document::default();
        doc.insert("two", Entity::Category(corpus::ordinal2()));
        doc.insert("d2", Entity::Category(corpus::d2()));
        doc.insert(
            "incl",
            Entity::Functor(corpus::poset_functor(&corpus::ordinal2(), &corpus::d2(), &[0, 3])),
        );
        let text = print(&doc);
        let reparsed = parse(&text).unwrap();
        assert_eq!(print(&reparsed), text);
    }
}
