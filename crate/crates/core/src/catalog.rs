//! The surface catalog: built-in records, user record files and the
//! epicycloid family.
//!
//! A record file is a sequence of `key = value` lines. Records are separated
//! by a line holding `%%`; `#` starts a comment line.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::domain::{Chart, DomainSpec, Exclusion, Rect, DEFAULT_MARGIN};
use crate::enneper::{
    epicycloid_family, validate_at, CausalCharacter, ClosedForm, EnneperData, EnneperError, Harmonic, Immersion,
};
use crate::expr::real::{Equation, RealExpr};
use crate::expr::{self, ParseError};
use crate::verify::{verify, CurveCheck, Extras, VerificationReport, VerifyError};

const BUILTIN: &str = include_str!("../catalog/builtin.surf");

/// Epicycloid family members appended to the built-in records.
pub const EPICYCLOID_INDICES: [i64; 3] = [2, 3, 5];

/// Number of parameter values at which a pregeodesic is compared.
pub const PREGEODESIC_POINTS: usize = 41;

/// Extension of record files picked up from a catalog directory.
pub const RECORD_EXTENSION: &str = "surf";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown surface '{0}'")]
    UnknownSurface(String),
    #[error("{origin}:{line}: {message}")]
    Record { origin: String, line: usize, message: String },
    #[error("duplicate surface name '{0}'")]
    Duplicate(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Enneper(#[from] EnneperError),
}

/// A planar curve expected to lie on the surface along a chart curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Pregeodesic {
    /// Ambient coordinates in the parameter `t`.
    pub curve: [RealExpr; 3],
    /// Chart coordinates `(s, t)` in the parameter `t`.
    pub chart: [RealExpr; 2],
    pub range: (f64, f64),
    /// Plane containing the curve, in `x1, x2, x3`.
    pub plane: Option<Equation>,
}

impl Pregeodesic {
    pub fn point(&self, t: f64) -> [f64; 3] {
        self.curve.each_ref().map(|e| e.eval(&[t]))
    }

    pub fn chart_point(&self, t: f64) -> (f64, f64) {
        (self.chart[0].eval(&[t]), self.chart[1].eval(&[t]))
    }

    pub fn params(&self) -> Vec<f64> {
        crate::domain::linspace(self.range.0, self.range.1, PREGEODESIC_POINTS)
    }

    /// Largest relative residual of the plane equation along the curve.
    pub fn max_plane_residual(&self) -> Option<f64> {
        let plane = self.plane.as_ref()?;
        Some(self.params().iter().map(|&t| plane.relative_residual(&self.point(t))).fold(0.0, f64::max))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub data: EnneperData,
    /// Implicit equation in `x1, x2, x3` satisfied by the closed form.
    pub implicit: Option<Equation>,
    /// An independent parametrization in the chart coordinates `u, v`.
    pub surface: Option<[RealExpr; 3]>,
    pub pregeodesic: Option<Pregeodesic>,
    pub provenance: String,
    pub notes: String,
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        &self.data.name
    }

    /// Closed form if known, otherwise the path integral.
    pub fn immersion(&self) -> Immersion {
        Immersion::closed(&self.data).unwrap_or_else(|_| Immersion::integral(&self.data))
    }

    pub fn parametrization(&self) -> Option<Immersion> {
        let coords = self.surface.clone()?;
        Some(Immersion::parametric(self.data.character, self.data.domain.clone(), coords))
    }

    /// Parses a single record.
    pub fn from_record(text: &str) -> Result<CatalogEntry, CatalogError> {
        let mut all = parse_records(text, "<record>")?;
        match all.len() {
            1 => Ok(all.remove(0)),
            n => Err(CatalogError::Record {
                origin: "<record>".into(),
                line: 1,
                message: format!("expected one record, found {n}"),
            }),
        }
    }

    pub fn to_record(&self) -> String {
        let d = &self.data;
        let dom = &d.domain;
        let mut o = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(o, "{k} = {v}");
        };
        kv("name", &d.name);
        kv("character", &d.character);
        if dom.chart != Chart::Cartesian {
            kv("chart", &dom.chart);
        }
        kv("rect", &dom.rect);
        if dom.basepoint != dom.rect.center() {
            kv("basepoint", &format!("{}, {}", dom.basepoint.0, dom.basepoint.1));
        }
        if dom.margin != DEFAULT_MARGIN {
            kv("margin", &dom.margin);
        }
        for e in &dom.exclusions {
            kv("exclude", e);
        }
        kv("Lz", &d.lz);
        kv("Pz", &d.pz);
        kv("hz", &d.hz);
        if let Some(c) = &d.closed {
            kv("L", &c.l);
            kv("P", &c.p);
            kv("h", &c.h);
        }
        if let Some(eq) = &self.implicit {
            kv("implicit", eq);
        }
        if let Some(s) = &self.surface {
            kv("surface", &join(s));
        }
        if let Some(g) = &self.pregeodesic {
            kv("pregeodesic", &join(&g.curve));
            kv("pregeodesic-chart", &join(&g.chart));
            kv("pregeodesic-range", &format!("{}, {}", g.range.0, g.range.1));
            if let Some(p) = &g.plane {
                kv("pregeodesic-plane", p);
            }
        }
        if !self.provenance.is_empty() {
            kv("provenance", &self.provenance);
        }
        if !self.notes.is_empty() {
            kv("notes", &self.notes);
        }
        o
    }
}

fn join(parts: &[RealExpr]) -> String {
    parts.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Writes entries as a record file.
pub fn write_records(entries: &[CatalogEntry]) -> String {
    entries.iter().map(CatalogEntry::to_record).collect::<Vec<_>>().join("%%\n")
}

/// Parses every record in `text`. `origin` names the source in errors.
pub fn parse_records(text: &str, origin: &str) -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    let mut fields: Vec<Field> = Vec::new();
    let mut start = 1;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line == "%%" {
            if !fields.is_empty() {
                out.push(build(&fields, origin, start)?);
            }
            fields.clear();
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CatalogError::Record {
                origin: origin.into(),
                line: line_no,
                message: format!("expected 'key = value', got '{line}'"),
            });
        };
        if fields.is_empty() {
            start = line_no;
        }
        fields.push(Field { key: k.trim().to_string(), value: v.trim().to_string(), line: line_no });
    }
    if !fields.is_empty() {
        out.push(build(&fields, origin, start)?);
    }
    Ok(out)
}

struct Field {
    key: String,
    value: String,
    line: usize,
}

const KEYS: [&str; 21] = [
    "name",
    "character",
    "chart",
    "rect",
    "basepoint",
    "margin",
    "exclude",
    "Lz",
    "Pz",
    "hz",
    "L",
    "P",
    "h",
    "implicit",
    "surface",
    "pregeodesic",
    "pregeodesic-chart",
    "pregeodesic-range",
    "pregeodesic-plane",
    "provenance",
    "notes",
];

struct Record<'a> {
    fields: &'a [Field],
    origin: &'a str,
    start: usize,
}

impl<'a> Record<'a> {
    fn err(&self, line: usize, message: impl Into<String>) -> CatalogError {
        CatalogError::Record { origin: self.origin.into(), line, message: message.into() }
    }

    fn get(&self, key: &str) -> Option<&'a Field> {
        self.fields.iter().find(|f| f.key == key)
    }

    fn require(&self, key: &str) -> Result<&'a Field, CatalogError> {
        self.get(key).ok_or_else(|| self.err(self.start, format!("missing key '{key}'")))
    }

    fn parse_err(&self, f: &Field, e: impl std::fmt::Display) -> CatalogError {
        self.err(f.line, format!("{}: {e}", f.key))
    }

    fn exprs<const N: usize>(&self, f: &Field, vars: &[&str]) -> Result<[RealExpr; N], CatalogError> {
        let parts: Vec<&str> = f.value.split(';').collect();
        if parts.len() != N {
            return Err(self.err(f.line, format!("{}: expected {N} components separated by ';'", f.key)));
        }
        let parsed: Vec<RealExpr> = parts
            .iter()
            .map(|p| RealExpr::parse(p.trim(), vars))
            .collect::<Result<_, ParseError>>()
            .map_err(|e| self.parse_err(f, e))?;
        Ok(parsed.try_into().expect("length checked"))
    }

    fn numbers(&self, f: &Field, n: usize) -> Result<Vec<f64>, CatalogError> {
        let vals: Vec<f64> = f
            .value
            .split(',')
            .map(|p| RealExpr::parse(p.trim(), &[]).map(|e| e.eval(&[])))
            .collect::<Result<_, ParseError>>()
            .map_err(|e| self.parse_err(f, e))?;
        if vals.len() != n || vals.iter().any(|v| !v.is_finite()) {
            return Err(self.err(f.line, format!("{}: expected {n} finite numbers", f.key)));
        }
        Ok(vals)
    }
}

fn build(fields: &[Field], origin: &str, start: usize) -> Result<CatalogEntry, CatalogError> {
    let r = Record { fields, origin, start };
    for f in fields {
        if !KEYS.contains(&f.key.as_str()) {
            return Err(r.err(f.line, format!("unknown key '{}'", f.key)));
        }
        if f.key != "exclude" && fields.iter().filter(|g| g.key == f.key).count() > 1 {
            return Err(r.err(f.line, format!("repeated key '{}'", f.key)));
        }
    }
    let name = r.require("name")?.value.clone();
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        return Err(r.err(r.require("name")?.line, "name must be a non-empty word"));
    }
    let cf = r.require("character")?;
    let character: CausalCharacter = cf.value.parse().map_err(|e| r.parse_err(cf, e))?;
    let alg = character.algebra();

    let rf = r.require("rect")?;
    let rect: Rect = rf.value.parse().map_err(|e| r.parse_err(rf, e))?;
    let mut domain = DomainSpec::rect(rect);
    if let Some(f) = r.get("chart") {
        domain.chart = f.value.parse().map_err(|e| r.parse_err(f, e))?;
    }
    if let Some(f) = r.get("basepoint") {
        let b = r.numbers(f, 2)?;
        domain.basepoint = (b[0], b[1]);
    }
    if let Some(f) = r.get("margin") {
        let m = r.numbers(f, 1)?[0];
        if m <= 0.0 {
            return Err(r.err(f.line, "margin: must be positive"));
        }
        domain.margin = m;
    }
    for f in fields.iter().filter(|f| f.key == "exclude") {
        domain.exclusions.push(Exclusion::parse(&f.value, alg).map_err(|e| r.parse_err(f, e))?);
    }
    domain.check_basepoint(alg).map_err(|e| r.err(start, e.to_string()))?;

    let z_expr = |key: &str| -> Result<expr::Expr, CatalogError> {
        let f = r.require(key)?;
        expr::parse(&f.value, alg).map_err(|e| r.parse_err(f, e))
    };
    let mut data = EnneperData::new(name, character, z_expr("Lz")?, z_expr("Pz")?, z_expr("hz")?, domain)
        .map_err(|e| r.err(start, e.to_string()))?;

    let closed_keys = ["L", "P", "h"].map(|k| r.get(k));
    match closed_keys {
        [None, None, None] => {}
        [Some(_), Some(_), Some(hf)] => {
            let h = Harmonic::parse(&hf.value, alg).map_err(|e| r.parse_err(hf, e))?;
            let closed = ClosedForm { l: z_expr("L")?, p: z_expr("P")?, h };
            data = data.with_closed_form(closed).map_err(|e| r.err(start, e.to_string()))?;
        }
        _ => return Err(r.err(start, "closed form needs all of L, P and h")),
    }

    let implicit = match r.get("implicit") {
        Some(f) => Some(Equation::parse(&f.value, &["x1", "x2", "x3"]).map_err(|e| r.parse_err(f, e))?),
        None => None,
    };
    let surface = match r.get("surface") {
        Some(f) => Some(r.exprs::<3>(f, &["u", "v"])?),
        None => None,
    };
    let pregeodesic = match r.get("pregeodesic") {
        Some(f) => {
            let curve = r.exprs::<3>(f, &["t"])?;
            let chart = r.exprs::<2>(r.require("pregeodesic-chart")?, &["t"])?;
            let rf = r.require("pregeodesic-range")?;
            let range = r.numbers(rf, 2)?;
            if range[0] >= range[1] {
                return Err(r.err(rf.line, "pregeodesic-range: empty interval"));
            }
            let plane = match r.get("pregeodesic-plane") {
                Some(p) => Some(Equation::parse(&p.value, &["x1", "x2", "x3"]).map_err(|e| r.parse_err(p, e))?),
                None => None,
            };
            Some(Pregeodesic { curve, chart, range: (range[0], range[1]), plane })
        }
        None => {
            if let Some(f) =
                ["pregeodesic-chart", "pregeodesic-range", "pregeodesic-plane"].iter().find_map(|k| r.get(k))
            {
                return Err(r.err(f.line, format!("'{}' without 'pregeodesic'", f.key)));
            }
            None
        }
    };
    let text = |k: &str| r.get(k).map(|f| f.value.clone()).unwrap_or_default();
    Ok(CatalogEntry { data, implicit, surface, pregeodesic, provenance: text("provenance"), notes: text("notes") })
}

fn times(var: &str, k: i64) -> String {
    if k == 1 {
        var.to_string()
    } else {
        format!("{k}*{var}")
    }
}

fn over(k: i64) -> String {
    if k == 1 {
        String::new()
    } else {
        format!("/{k}")
    }
}

/// The catalog entry for the epicycloid family member `n`.
pub fn epicycloid_entry(n: i64) -> Result<CatalogEntry, CatalogError> {
    let fam = epicycloid_family(n)?;
    let (a, b) = (n - 1, n + 1);
    let (au, av, bu, bv) = (times("u", a), times("v", a), times("u", b), times("v", b));
    let surface = [
        format!("cos({au})*cos({av}){}-cos({bu})*cos({bv})/{b}", over(a)),
        format!("cos({au})*sin({av}){}-cos({bu})*sin({bv})/{b}", over(a)),
        "2*sin(u)*sin(v)".to_string(),
    ];
    let bt = format!("{b}*t{}", over(a));
    let curve =
        [format!("cos(t){}-cos({bt})/{b}", over(a)), format!("sin(t){}-sin({bt})/{b}", over(a)), "0".to_string()];
    let chart = ["0".to_string(), format!("t{}", over(a))];
    let parse = |s: &String, vars: &[&str]| RealExpr::parse(s, vars).expect("generated expression");
    let r = fam.data.domain.rect;
    let pregeodesic = Pregeodesic {
        curve: curve.each_ref().map(|s| parse(s, &["t"])),
        chart: chart.each_ref().map(|s| parse(s, &["t"])),
        range: (a as f64 * r.v_min, a as f64 * r.v_max),
        plane: Some(Equation::parse("x3 = 0", &["x1", "x2", "x3"]).expect("plane")),
    };
    let kind = fam.curve_kind();
    let rf = fam.fixed_radius;
    let rr = fam.rolling_radius;
    Ok(CatalogEntry {
        data: fam.data,
        implicit: None,
        surface: Some(surface.each_ref().map(|s| parse(s, &["u", "v"]))),
        pregeodesic: Some(pregeodesic),
        provenance: format!("timelike surface through the {kind} with fixed radius {rf} and rolling radius {rr}"),
        notes: "member of the epicycloid family".to_string(),
    })
}

/// An ordered collection of named entries.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The built-in records followed by the epicycloids with indices [`EPICYCLOID_INDICES`].
    pub fn builtin() -> Catalog {
        let mut cat = Catalog::default();
        for e in parse_records(BUILTIN, "builtin.surf").expect("built-in catalog parses") {
            cat.add(e).expect("built-in names are unique");
        }
        for n in EPICYCLOID_INDICES {
            cat.add(epicycloid_entry(n).expect("valid index")).expect("built-in names are unique");
        }
        cat
    }

    /// Built-in entries plus every `*.surf` file in `dir`, in file-name order.
    pub fn with_dir(dir: Option<&Path>) -> Result<Catalog, CatalogError> {
        let mut cat = Catalog::builtin();
        if let Some(d) = dir {
            cat.load_dir(d)?;
        }
        Ok(cat)
    }

    pub fn load_dir(&mut self, dir: &Path) -> Result<(), CatalogError> {
        let io = |e: std::io::Error| CatalogError::Io { path: dir.display().to_string(), message: e.to_string() };
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == RECORD_EXTENSION) && p.is_file())
            .collect();
        files.sort();
        for f in files {
            self.load_file(&f)?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), CatalogError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::Io { path: path.display().to_string(), message: e.to_string() })?;
        for e in parse_records(&text, &path.display().to_string())? {
            self.add(e)?;
        }
        Ok(())
    }

    pub fn add(&mut self, entry: CatalogEntry) -> Result<(), CatalogError> {
        if self.entries.iter().any(|e| e.name() == entry.name()) {
            return Err(CatalogError::Duplicate(entry.name().to_string()));
        }
        self.entries.push(entry);
        Ok(())
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(CatalogEntry::name).collect()
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries.iter().find(|e| e.name() == name).ok_or_else(|| CatalogError::UnknownSurface(name.to_string()))
    }
}

/// Validates and verifies an entry on its standard sample set.
pub fn verify_entry(entry: &CatalogEntry) -> Result<VerificationReport, VerifyError> {
    let points = entry.data.domain.samples(entry.data.algebra())?;
    verify_entry_at(entry, &points)
}

/// As [`verify_entry`], on the given chart points.
pub fn verify_entry_at(entry: &CatalogEntry, points: &[(f64, f64)]) -> Result<VerificationReport, VerifyError> {
    let validation = validate_at(&entry.data, points)?;
    let psi = entry.immersion();
    let param = entry.parametrization();
    let curve = |t: f64| entry.pregeodesic.as_ref().expect("checked").point(t);
    let chart_point = |t: f64| entry.pregeodesic.as_ref().expect("checked").chart_point(t);
    let pregeodesic =
        entry.pregeodesic.as_ref().map(|g| CurveCheck { curve: &curve, chart_point: &chart_point, params: g.params() });
    let extras = Extras {
        validation: Some(validation),
        implicit: entry.implicit.as_ref(),
        parametrization: param.as_ref(),
        pregeodesic,
    };
    verify(&psi, entry.name(), points, extras)
}
