use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use minsurf::catalog::{self, Catalog, CatalogEntry, CatalogError};
use minsurf::domain::{Chart, DomainError, Rect};
use minsurf::enneper::{self, to_weierstrass, CausalCharacter, EnneperData, EnneperError, Immersion};
use minsurf::expr;
use minsurf::mesh::{self, Format, Grid};
use minsurf::verify::VerifyError;

#[derive(Parser)]
#[command(name = "surfaces", version, about = "Minimal surfaces in Lorentz-Minkowski space from Enneper data")]
struct Cli {
    /// Directory with extra `*.surf` catalog records.
    #[arg(long, global = true, env = "SURF_CATALOG_DIR")]
    catalog_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog entries.
    List,
    /// Print the data sheet of an entry.
    Show { name: String },
    /// Sample a surface on a grid and write a mesh.
    Sample(SampleArgs),
    /// Run the verification suite.
    Verify {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiply an entry's data by a scalar function f(z) and save it as a new entry.
    Transform {
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        scale_expr: String,
        /// Name of the new entry; the record is written to `<catalog-dir>/<out>.surf`.
        #[arg(long)]
        out: String,
        /// Domain rect `u_min, u_max, v_min, v_max` replacing the inherited one.
        #[arg(long, allow_hyphen_values = true)]
        domain: Option<String>,
    },
    /// Build and verify a member of the epicycloid family.
    Family {
        #[arg(long)]
        n: i64,
        /// Write the entry record here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SampleArgs {
    /// Catalog entry; omit to give the data with --Lz/--Pz/--hz.
    name: Option<String>,
    #[arg(long = "Lz", allow_hyphen_values = true, requires_all = ["pz", "hz", "character", "domain"], conflicts_with = "name")]
    lz: Option<String>,
    #[arg(long = "Pz", allow_hyphen_values = true)]
    pz: Option<String>,
    #[arg(long = "hz", allow_hyphen_values = true)]
    hz: Option<String>,
    #[arg(long)]
    character: Option<String>,
    #[arg(long)]
    chart: Option<String>,
    /// Rect `u_min, u_max, v_min, v_max` in chart coordinates.
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    #[arg(long, default_value = "32x32")]
    grid: String,
    #[arg(long, default_value = "obj")]
    format: String,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Unknown(String),
    Parse(String),
    Degenerate(String),
    Validation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Unknown(_) | Failure::Parse(_) => 2,
            Failure::Degenerate(_) | Failure::Validation(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn report(&self) -> String {
        match self {
            Failure::Usage(m) => format!("error: {m}"),
            Failure::Unknown(m) => format!("error: UnknownSurface: {m}"),
            Failure::Parse(m) => format!("error: ParseError: {m}"),
            Failure::Degenerate(m) => format!("error: ScalarDegenerate: {m}"),
            Failure::Validation(m) => format!("error: ValidationFailed: {m}"),
            Failure::Io(m) => format!("error: IoError: {m}"),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Failure {
        match e {
            CatalogError::UnknownSurface(_) => Failure::Unknown(e.to_string()),
            CatalogError::Enneper(inner) => inner.into(),
            _ => Failure::Io(e.to_string()),
        }
    }
}

impl From<EnneperError> for Failure {
    fn from(e: EnneperError) -> Failure {
        match e {
            EnneperError::Parse(_) | EnneperError::WrongAlgebra { .. } | EnneperError::BadHarmonic(_) => {
                Failure::Parse(e.to_string())
            }
            EnneperError::BadFamilyIndex(_) | EnneperError::BadCharacter(_) => Failure::Usage(e.to_string()),
            EnneperError::Domain(
                DomainError::BadRect(_) | DomainError::BadChart(_) | DomainError::BadBasepoint(..),
            ) => Failure::Usage(e.to_string()),
            EnneperError::ScalarDegenerate { .. } => Failure::Degenerate(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Failure {
        match e {
            VerifyError::Enneper(inner) => inner.into(),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<DomainError> for Failure {
    fn from(e: DomainError) -> Failure {
        EnneperError::from(e).into()
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn show(entry: &CatalogEntry) -> String {
    let d = &entry.data;
    let dom = &d.domain;
    let mut o = String::new();
    let _ = writeln!(o, "name = {}", d.name);
    let _ = writeln!(o, "character = {}", d.character);
    let _ = writeln!(o, "algebra = {}", d.algebra());
    let _ = writeln!(o, "chart = {}", dom.chart);
    let _ = writeln!(o, "domain = {}", dom.rect);
    let _ = writeln!(o, "basepoint = {}, {}", dom.basepoint.0, dom.basepoint.1);
    for e in &dom.exclusions {
        let _ = writeln!(o, "exclude = {e}");
    }
    let _ = writeln!(o, "L_z = {}", d.lz);
    let _ = writeln!(o, "P_z = {}", d.pz);
    let _ = writeln!(o, "h_z = {}", d.hz);
    if let Some(c) = &d.closed {
        let _ = writeln!(o, "L = {}", c.l);
        let _ = writeln!(o, "P = {}", c.p);
        let _ = writeln!(o, "h = {}", c.h);
    }
    for (k, phi) in to_weierstrass(d).phi.iter().enumerate() {
        let _ = writeln!(o, "phi_{} = {phi}", k + 1);
    }
    if let Some(eq) = &entry.implicit {
        let _ = writeln!(o, "implicit = {eq}");
    }
    if let Some(s) = &entry.surface {
        let _ = writeln!(o, "surface = {}; {}; {}", s[0], s[1], s[2]);
    }
    if let Some(g) = &entry.pregeodesic {
        let _ = writeln!(o, "pregeodesic = {}; {}; {}", g.curve[0], g.curve[1], g.curve[2]);
        let _ = writeln!(o, "pregeodesic-chart = {}; {}", g.chart[0], g.chart[1]);
        let _ = writeln!(o, "pregeodesic-range = {}, {}", g.range.0, g.range.1);
        if let Some(p) = &g.plane {
            let _ = writeln!(o, "pregeodesic-plane = {p}");
        }
    }
    if !entry.provenance.is_empty() {
        let _ = writeln!(o, "provenance = {}", entry.provenance);
    }
    if !entry.notes.is_empty() {
        let _ = writeln!(o, "notes = {}", entry.notes);
    }
    o
}

fn parse_rect(src: &str) -> Result<Rect, Failure> {
    src.parse::<Rect>().map_err(|e| Failure::Usage(e.to_string()))
}

/// Replaces the rect and recenters the basepoint.
fn with_rect(mut data: EnneperData, rect: Rect) -> Result<EnneperData, Failure> {
    data.domain.rect = rect;
    data.domain.basepoint = rect.center();
    data.domain.check_basepoint(data.algebra())?;
    Ok(data)
}

fn sample(cat: &Catalog, a: SampleArgs) -> Result<(), Failure> {
    let grid: Grid = a.grid.parse().map_err(Failure::Usage)?;
    let format: Format = a.format.parse().map_err(Failure::Usage)?;
    let psi: Immersion = match (&a.name, &a.lz) {
        (Some(name), _) => {
            let entry = cat.get(name)?;
            match &a.domain {
                Some(r) => {
                    let data = with_rect(entry.data.clone(), parse_rect(r)?)?;
                    check_valid(&data)?;
                    Immersion::closed(&data).unwrap_or_else(|_| Immersion::integral(&data))
                }
                None => {
                    check_valid(&entry.data)?;
                    entry.immersion()
                }
            }
        }
        (None, Some(lz)) => {
            let character: CausalCharacter = a
                .character
                .as_deref()
                .unwrap_or_default()
                .parse()
                .map_err(|e: EnneperError| Failure::Usage(e.to_string()))?;
            let rect = parse_rect(a.domain.as_deref().unwrap_or_default())?;
            let mut domain = minsurf::domain::DomainSpec::rect(rect);
            if let Some(c) = &a.chart {
                domain.chart = c.parse::<Chart>()?;
            }
            let data = EnneperData::parse(
                "custom",
                character,
                lz,
                a.pz.as_deref().unwrap_or_default(),
                a.hz.as_deref().unwrap_or_default(),
                domain,
            )?;
            check_valid(&data)?;
            Immersion::integral(&data)
        }
        (None, None) => return Err(Failure::Usage("give a surface name or --Lz/--Pz/--hz data".into())),
    };
    let rect = psi.domain.rect;
    let buffer = mesh::sample(&psi, rect, grid)?;
    write_output(a.out.as_deref(), &buffer.render(format))
}

fn check_valid(data: &EnneperData) -> Result<(), Failure> {
    let report = enneper::validate(data)?;
    if report.pass {
        Ok(())
    } else {
        eprint!("{}", report.to_text());
        Err(Failure::Validation(report.failures().join("; ")))
    }
}

fn verify(cat: &Catalog, name: Option<String>, all: bool, out: Option<&Path>) -> Result<(), Failure> {
    let entries: Vec<&CatalogEntry> = match (name, all) {
        (_, true) => cat.entries().iter().collect(),
        (Some(n), false) => vec![cat.get(&n)?],
        (None, false) => return Err(Failure::Usage("give a surface name or --all".into())),
    };
    let mut text = String::new();
    let mut failed = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        let report = catalog::verify_entry(e)?;
        if k > 0 {
            text.push('\n');
        }
        text.push_str(&report.to_text());
        if !report.pass() {
            failed.push(e.name().to_string());
        }
    }
    write_output(out, &text)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("failed: {}", failed.join(", "))))
    }
}

fn transform(
    cat: &Catalog,
    dir: Option<&Path>,
    name: &str,
    scale: &str,
    out: &str,
    domain: Option<&str>,
) -> Result<(), Failure> {
    let entry = cat.get(name)?;
    let f = expr::parse(scale, entry.data.algebra()).map_err(|e| Failure::Parse(e.to_string()))?;
    let mut source = entry.data.clone();
    if let Some(r) = domain {
        source = with_rect(source, parse_rect(r)?)?;
    }
    let data = enneper::scale_transform(&source, &f, out)?;
    let report = enneper::validate(&data)?;
    print!("{}", report.to_text());
    if !report.pass {
        return Err(Failure::Validation(report.failures().join("; ")));
    }
    let new = CatalogEntry {
        data,
        implicit: None,
        surface: None,
        pregeodesic: None,
        provenance: format!("{name} scaled by f(z) = {f}"),
        notes: String::new(),
    };
    let path = dir.unwrap_or(Path::new(".")).join(format!("{out}.{}", catalog::RECORD_EXTENSION));
    std::fs::write(&path, new.to_record()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn family(n: i64, out: Option<&Path>) -> Result<(), Failure> {
    let fam = enneper::epicycloid_family(n)?;
    let entry = catalog::epicycloid_entry(n)?;
    let report = catalog::verify_entry(&entry)?;
    let mut text = String::new();
    let _ = writeln!(text, "[family]\nn = {n}");
    let _ = writeln!(text, "fixed_radius = {}", fam.fixed_radius);
    let _ = writeln!(text, "rolling_radius = {}", fam.rolling_radius);
    let _ = writeln!(text, "curve = {}\n", fam.curve_kind());
    text.push_str(&report.to_text());
    print!("{text}");
    if let Some(p) = out {
        std::fs::write(p, entry.to_record()).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
    }
    if report.pass() {
        Ok(())
    } else {
        Err(Failure::Validation(format!("epicycloid-{n} failed verification")))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let dir = cli.catalog_dir.as_deref();
    let cat = Catalog::with_dir(dir)?;
    match cli.command {
        Command::List => {
            for e in cat.entries() {
                println!("{}\t{}", e.name(), e.data.character);
            }
            Ok(())
        }
        Command::Show { name } => {
            print!("{}", show(cat.get(&name)?));
            Ok(())
        }
        Command::Sample(a) => sample(&cat, a),
        Command::Verify { name, all, out } => verify(&cat, name, all, out.as_deref()),
        Command::Transform { name, scale_expr, out, domain } => {
            transform(&cat, dir, &name, &scale_expr, &out, domain.as_deref())
        }
        Command::Family { n, out } => family(n, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.report());
            ExitCode::from(f.code())
        }
    }
}
