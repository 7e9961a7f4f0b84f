//! `asdc`: reproduce the worked examples, search for congruence-carrying
//! forms, expand in a hauptmodul, verify sequences and scan the tables.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use asdc_core::character::CharKind;
use asdc_core::data::{DataSet, VALIDATION_MAX_WEIGHT};
use asdc_core::engine::congruence::{
    verify_asd, verify_threeterm, verify_twisted, Check, CongruenceReport, SeqView,
};
use asdc_core::engine::search::{
    dlog, expand_in_t, find_corollary, find_theorem1, find_theorem2, identity_precision,
    SearchCertificate,
};
use asdc_core::engine::suite::{
    reproduce, scan, ExampleReport, PrimeStatus, ScanConfig, ScanRow, ScanTable, SuiteConfig,
};
use asdc_core::error::Error;
use asdc_core::eta::EtaQuotient;
use asdc_core::rational::{self, primes_up_to, Rational};
use asdc_core::spaces::{condition_star, dim_e, dim_m, dim_s, SpaceSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::{Format, Report, Table};

#[derive(Parser)]
#[command(
    name = "asdc",
    version,
    about = "Congruences for power-series coefficients of modular forms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "md")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory overriding the bundled tables and fixtures.
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SpaceArgs {
    #[arg(long)]
    level: u64,
    #[arg(long)]
    weight: i64,
    /// principal, 3, 5, 7, 13, -4 or a full key such as jacobi_top/5.
    #[arg(long, default_value = "principal")]
    character: String,
}

impl SpaceArgs {
    fn spec(&self) -> Result<SpaceSpec, Error> {
        SpaceSpec::new(self.level, CharKind::parse(&self.character)?, self.weight)
    }
}

#[derive(Args, Clone, Copy)]
struct Bounds {
    /// Largest prime checked.
    #[arg(long)]
    prime_max: Option<u64>,
    /// Largest index lp^r checked.
    #[arg(long)]
    index_bound: Option<usize>,
}

impl Bounds {
    fn resolve(self, prime_max: u64, index_bound: usize) -> Result<(u64, usize), Fail> {
        let p = self.prime_max.unwrap_or(prime_max);
        let b = self.index_bound.unwrap_or(index_bound);
        if p < 2 {
            return Err(Fail::usage("--prime-max must be at least 2"));
        }
        if (b as u64) < p {
            return Err(Fail::usage("--index-bound must be at least --prime-max"));
        }
        Ok((p, b))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    Table1,
    Table3,
}

#[derive(Subcommand)]
enum Command {
    /// Run a stored example end to end and compare with its recorded values.
    Reproduce {
        id: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Find f with f·θt/t Eisenstein (the hauptmodul construction).
    Search {
        #[command(flatten)]
        space: SpaceArgs,
        /// Hauptmodul as an eta quotient; defaults to the level's table entry.
        #[arg(long)]
        t: Option<String>,
        /// Use the equal-dimension construction, which returns one form per
        /// Eisenstein series of weight k+2.
        #[arg(long)]
        corollary: bool,
        /// Re-check the Eisenstein identity through this many coefficients.
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Find f with Φ_g(f) Eisenstein, for t = g/f.
    Search2 {
        #[command(flatten)]
        space: SpaceArgs,
        /// Eta quotient g of weight k with g = q + O(q^2).
        #[arg(long)]
        g: String,
        /// Coefficient of q in f; omitted means the echelon representative.
        #[arg(long)]
        pin: Option<String>,
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Coefficients b_n of f = Σ b_n t^n.
    Expand {
        /// Eta quotient, or @file with power-series coefficients.
        #[arg(long)]
        f: String,
        /// Eta quotient, or @file; must be q + O(q^2).
        #[arg(long)]
        t: String,
        #[arg(long)]
        level: Option<u64>,
        /// Number of coefficients b_0.. to print.
        #[arg(long, default_value_t = 20)]
        precision: usize,
    },
    /// Check congruences for a sequence read from a file.
    Verify {
        /// b-file (`n b_n` per line), plain list, or JSON array.
        #[arg(long)]
        b_file: PathBuf,
        /// Check only these primes (repeatable).
        #[arg(long = "prime")]
        primes: Vec<u64>,
        #[command(flatten)]
        bounds: Bounds,
        /// Twisted congruence with this character.
        #[arg(long, conflicts_with = "eigenform")]
        twist: Option<String>,
        /// Three-term congruence against this stored eigenform.
        #[arg(long, requires = "exponent")]
        eigenform: Option<String>,
        /// Weight exponent p^(exponent) of the three-term relation.
        #[arg(long)]
        exponent: Option<u32>,
    },
    /// Search and check every row of a table at its smallest usable weight.
    Scan {
        #[arg(value_enum)]
        table: TableName,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        max_level: Option<u64>,
        /// Scan at this weight instead of the smallest one.
        #[arg(long)]
        weight: Option<i64>,
    },
    /// Dimensions and the feasibility inequality, for one space or a table.
    Dims {
        #[arg(long, requires = "character")]
        level: Option<u64>,
        #[arg(long)]
        character: Option<String>,
        /// A single weight; otherwise 1..=max-weight.
        #[arg(long)]
        weight: Option<i64>,
        #[arg(long, default_value_t = 12)]
        max_weight: i64,
        /// Check every weight (up to 24) of a table's rows.
        #[arg(long, value_enum, conflicts_with = "level")]
        table: Option<TableName>,
    },
}

/// A failed run with its exit code.
struct Fail {
    code: u8,
    message: String,
}

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail {
            code: 2,
            message: msg.into(),
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        // an absent solution is a mathematical outcome; the rest are input problems
        let code = match e {
            Error::NoSolution(_) | Error::NonVanishingConstraint(_) => 1,
            _ => 2,
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = report.render(cli.format);
            let written = match &cli.out {
                Some(path) => {
                    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
                }
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                Ok(()) if report.pass => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(cli: &Cli) -> Result<DataSet, Error> {
    match &cli.data_dir {
        Some(d) => DataSet::load(d),
        None => DataSet::bundled(),
    }
}

fn run(cli: &Cli) -> Result<Report, Fail> {
    let data = load(cli)?;
    match &cli.command {
        Command::Reproduce { id, bounds } => {
            let (prime_max, index_bound) = bounds.resolve(50, 2000)?;
            let cfg = SuiteConfig {
                prime_max,
                index_bound,
                ..SuiteConfig::default()
            };
            Ok(reproduce_report(&reproduce(id, &data, &cfg)?))
        }
        Command::Search {
            space,
            t,
            corollary,
            precision,
        } => {
            let spec = space.spec()?;
            let t = match t {
                Some(s) => EtaQuotient::parse(s, Some(spec.level))?,
                None => data.tables.hauptmodul(spec.level).cloned().ok_or_else(|| {
                    Fail::usage(format!(
                        "no stored hauptmodul for level {}; pass --t",
                        spec.level
                    ))
                })?,
            };
            let certs = if *corollary {
                find_corollary(&spec, &t, &data)?
            } else {
                vec![find_theorem1(&spec, &t, &data)?]
            };
            certificate_report(&spec, certs, *precision)
        }
        Command::Search2 {
            space,
            g,
            pin,
            precision,
        } => {
            let spec = space.spec()?;
            let g = EtaQuotient::parse(g, Some(spec.level))?;
            let pin = pin.as_deref().map(rational::parse).transpose()?;
            let cert = find_theorem2(&spec, &g, pin.as_ref(), &data)?;
            certificate_report(&spec, vec![cert], *precision)
        }
        Command::Expand {
            f,
            t,
            level,
            precision,
        } => expand_report(f, t, *level, *precision),
        Command::Verify {
            b_file,
            primes,
            bounds,
            twist,
            eigenform,
            exponent,
        } => {
            let b = input::read_coefficients(b_file)?;
            if b.len() < 2 {
                return Err(Fail::usage("the sequence needs at least two terms"));
            }
            let default_bound = b.len() - 1;
            let (prime_max, bound) = bounds.resolve(50, default_bound.max(2))?;
            if bound > default_bound {
                return Err(Fail::usage(format!(
                    "--index-bound {bound} exceeds the {} terms in {}",
                    b.len(),
                    b_file.display()
                )));
            }
            let primes = if primes.is_empty() {
                primes_up_to(prime_max)
            } else {
                primes.clone()
            };
            let relation = match (twist, eigenform) {
                (Some(c), _) => Relation::Twisted(CharKind::parse(c)?),
                (_, Some(label)) => Relation::ThreeTerm(
                    data.eigenform(label)?.coeffs.clone(),
                    exponent.expect("required by clap"),
                ),
                _ => Relation::Plain,
            };
            verify_report(&b, &primes, bound, &relation, b_file)
        }
        Command::Scan {
            table,
            bounds,
            max_level,
            weight,
        } => {
            let (prime_max, index_bound) = bounds.resolve(50, 500)?;
            let cfg = ScanConfig {
                prime_max,
                index_bound,
                max_level: *max_level,
                weight: *weight,
            };
            let which = match table {
                TableName::Table1 => ScanTable::Table1,
                TableName::Table3 => ScanTable::Table3,
            };
            Ok(scan_report(&scan(&data, which, &cfg), &cfg))
        }
        Command::Dims {
            level,
            character,
            weight,
            max_weight,
            table,
        } => dims_report(
            &data,
            *level,
            character.as_deref(),
            *weight,
            *max_weight,
            *table,
        ),
    }
}

fn r2s(x: &Rational) -> String {
    rational::to_string(x)
}

fn join(xs: &[Rational]) -> String {
    xs.iter().map(r2s).collect::<Vec<_>>().join(", ")
}

fn witness(p: u64, c: &Check) -> String {
    let v = c.valuation.map_or("n/a".into(), |v| v.to_string());
    format!(
        "p={p}, l={}, r={} (index {}, {:?}, valuation {v})",
        c.ell, c.r, c.index, c.status
    )
}

fn status_name(s: PrimeStatus) -> &'static str {
    s.label()
}

fn reproduce_report(r: &ExampleReport) -> Report {
    let mut searches = Table::new(
        "searches",
        &["kind", "f", "Eisenstein combination", "primes"],
    );
    for c in &r.searches {
        searches.push(vec![
            format!("{:?}", c.kind),
            c.f.to_string(),
            c.combo.to_string(),
            c.predicate.clone(),
        ]);
    }
    let mut seqs = Table::new("sequences", &["label", "f", "t", "b", "certified primes"]);
    for s in &r.sequences {
        seqs.push(vec![
            s.label.clone(),
            s.f.clone(),
            s.t.clone(),
            join(&s.b),
            s.certificate
                .as_ref()
                .map_or("-".into(), |c| c.predicate.clone()),
        ]);
    }
    let mut items = Table::new("comparisons", &["item", "kind", "result", "detail"]);
    for i in &r.items {
        items.push(vec![
            i.label.clone(),
            format!("{:?}", i.kind).to_lowercase(),
            if i.pass { "pass" } else { "FAIL" }.into(),
            i.detail.clone(),
        ]);
    }
    let mut cong = Table::new(
        "congruences",
        &["sequence", "prime", "status", "checks", "result", "witness"],
    );
    for c in &r.congruences {
        cong.push(vec![
            c.sequence.clone(),
            c.prime.to_string(),
            status_name(c.status).into(),
            c.checks.to_string(),
            match (c.pass, c.status.is_claimed()) {
                (true, _) => "pass",
                (false, true) => "FAIL",
                (false, false) => "fail (not claimed)",
            }
            .into(),
            match (&c.witness, &c.error) {
                (_, Some(e)) => e.clone(),
                (Some(w), None) => witness(c.prime, w),
                (None, None) => String::new(),
            },
        ]);
    }
    let failures = r.failures();
    let mut notes = vec![
        format!("space: {}", r.spec),
        format!("source: {}", r.reference),
    ];
    notes.extend(failures.iter().map(|f| format!("failure: {f}")));
    Report {
        heading: format!("reproduce {}", r.id),
        notes,
        tables: vec![searches, seqs, items, cong],
        json: serde_json::to_value(r).expect("report serializes"),
        pass: r.pass,
    }
}

/// Recomputes f·θt/t against the combination through `prec` coefficients.
fn deep_check(c: &SearchCertificate, prec: i64) -> Result<bool, Error> {
    let f = c.f.series(prec)?;
    let t = c.t.series(c.spec.level, prec + 1)?;
    let lhs = f.mul(&dlog(&t)?);
    Ok(lhs.agrees_with(&c.combo.series(prec)?, prec))
}

fn certificate_report(
    spec: &SpaceSpec,
    certs: Vec<SearchCertificate>,
    precision: Option<i64>,
) -> Result<Report, Fail> {
    let min = identity_precision(spec);
    let mut pass = true;
    let mut notes = vec![format!("space: {spec}")];
    if let Some(p) = precision {
        if p < min {
            return Err(Fail::usage(format!(
                "--precision {p} is below the minimum {min} for {spec}"
            )));
        }
        for c in &certs {
            let ok = deep_check(c, p)?;
            pass &= ok;
            notes.push(format!(
                "identity through q^{}: {}",
                p - 1,
                if ok { "holds" } else { "FAILS" }
            ));
        }
    }
    let mut t = Table::new(
        "certificates",
        &["kind", "f", "t", "f·θt/t", "D", "primes", "table row"],
    );
    for c in &certs {
        t.push(vec![
            format!("{:?}", c.kind),
            c.f.to_string(),
            c.t.to_string(),
            c.combo.to_string(),
            c.denominator_d.to_string(),
            c.predicate.clone(),
            c.table_row
                .as_ref()
                .map_or("-".into(), |r| format!("{:?} vs '{}'", r.relation, r.row)),
        ]);
    }
    let json = if certs.len() == 1 {
        serde_json::to_value(&certs[0])
    } else {
        serde_json::to_value(&certs)
    }
    .expect("certificate serializes");
    Ok(Report {
        heading: format!("search {spec}"),
        notes,
        tables: vec![t],
        json,
        pass,
    })
}

fn expand_report(f: &str, t: &str, level: Option<u64>, n: usize) -> Result<Report, Fail> {
    if n == 0 {
        return Err(Fail::usage("--precision must be positive"));
    }
    let prec = n as i64 + 1;
    let fs = input::series_arg(f, level, prec)?;
    let ts = input::series_arg(t, level, prec)?;
    let e = expand_in_t(&fs, &ts, n - 1)?;
    let mut table = Table::new("coefficients", &["n", "b_n"]);
    for (i, b) in e.b.iter().enumerate().take(n) {
        table.push(vec![i.to_string(), r2s(b)]);
    }
    Ok(Report {
        heading: format!("expand {f} in {t}"),
        notes: Vec::new(),
        tables: vec![table],
        json: serde_json::to_value(&e).expect("expansion serializes"),
        pass: true,
    })
}

enum Relation {
    Plain,
    Twisted(CharKind),
    ThreeTerm(Vec<Rational>, u32),
}

fn verify_report(
    b: &[Rational],
    primes: &[u64],
    bound: usize,
    relation: &Relation,
    path: &std::path::Path,
) -> Result<Report, Fail> {
    let id = path.display().to_string();
    let view = SeqView::Exact(b);
    let reports: Vec<CongruenceReport> = primes
        .iter()
        .map(|&p| match relation {
            Relation::Plain => verify_asd(&id, view, p, bound as u64),
            Relation::Twisted(c) => verify_twisted(&id, view, p, *c, bound as u64),
            Relation::ThreeTerm(a, e) => verify_threeterm(&id, view, a, *e, p, bound as u64),
        })
        .collect::<Result<_, _>>()?;
    let mut t = Table::new("congruences", &["prime", "checks", "result", "witness"]);
    for r in &reports {
        let w = r.first_failure();
        t.push(vec![
            r.prime.to_string(),
            r.checks.len().to_string(),
            if r.verdict { "pass" } else { "FAIL" }.into(),
            w.map_or(String::new(), |c| witness(r.prime, c)),
        ]);
    }
    Ok(Report {
        heading: format!("verify {id}"),
        notes: vec![format!("{} terms, indices up to {bound}", b.len())],
        tables: vec![t],
        json: serde_json::to_value(&reports).expect("reports serialize"),
        pass: reports.iter().all(|r| r.verdict),
    })
}

/// One symbol per (row, prime): every sequence's cell at that prime.
fn scan_symbol(row: &ScanRow, p: u64) -> &'static str {
    let cells: Vec<_> = row.cells.iter().filter(|c| c.prime == p).collect();
    if cells.is_empty() {
        return "-";
    }
    if cells.iter().any(|c| c.error.is_some()) {
        "error"
    } else if cells
        .iter()
        .any(|c| !c.pass && c.status == PrimeStatus::Certified)
    {
        "FAIL"
    } else if cells.iter().any(|c| !c.pass) {
        "fail*"
    } else if cells.iter().all(|c| c.status == PrimeStatus::Certified) {
        "ok"
    } else {
        "ok*"
    }
}

fn scan_report(rows: &[ScanRow], cfg: &ScanConfig) -> Report {
    let primes = primes_up_to(cfg.prime_max);
    let mut headers = vec![
        "space".to_string(),
        "claimed".into(),
        "relation".into(),
        "verdict".into(),
    ];
    headers.extend(primes.iter().map(|p| p.to_string()));
    let header_refs: Vec<&str> = headers.iter().map(String::as_str).collect();
    let mut t = Table::new("matrix", &header_refs);
    let mut notes = vec![
        format!("primes up to {}, indices up to {}", cfg.prime_max, cfg.index_bound),
        "ok = certified and checked; ok* = checked but not certified; fail* = uncertified failure; - = not claimed".into(),
    ];
    for r in rows {
        let mut row = vec![
            r.spec.clone(),
            r.claimed.clone(),
            r.table_relation.map_or("-".into(), |x| format!("{x:?}")),
            if r.pass { "pass" } else { "FAIL" }.into(),
        ];
        row.extend(primes.iter().map(|&p| scan_symbol(r, p).to_string()));
        t.push(row);
        if let Some(e) = &r.error {
            notes.push(format!("{}: {e}", r.spec));
        }
    }
    let mut certs = Table::new("certificates", &["space", "certificate"]);
    for r in rows {
        for c in &r.certificates {
            certs.push(vec![r.spec.clone(), c.clone()]);
        }
    }
    Report {
        heading: format!(
            "scan {}",
            rows.first().map_or("", |r| match r.table {
                ScanTable::Table1 => "table1",
                ScanTable::Table3 => "table3",
            })
        ),
        notes,
        tables: vec![t, certs],
        json: serde_json::to_value(rows).expect("rows serialize"),
        pass: rows.iter().all(|r| r.pass),
    }
}

fn dims_report(
    data: &DataSet,
    level: Option<u64>,
    character: Option<&str>,
    weight: Option<i64>,
    max_weight: i64,
    table: Option<TableName>,
) -> Result<Report, Fail> {
    let mut specs: Vec<SpaceSpec> = Vec::new();
    let mut check_star = false;
    let mut check_t3 = false;
    match (level, table) {
        (Some(n), _) => {
            let kind = CharKind::parse(character.unwrap_or("principal"))?;
            let ks: Vec<i64> = match weight {
                Some(k) => vec![k],
                None => (1..=max_weight).collect(),
            };
            for k in ks {
                specs.push(SpaceSpec::new(n, kind, k)?);
            }
        }
        (None, Some(TableName::Table1)) => {
            check_star = true;
            for r in &data.tables.table1 {
                for k in r.weights(VALIDATION_MAX_WEIGHT) {
                    specs.push(SpaceSpec::new(r.level, r.character, k)?);
                }
            }
        }
        (None, Some(TableName::Table3)) => {
            check_t3 = true;
            for r in &data.tables.table3 {
                for k in r.weights(VALIDATION_MAX_WEIGHT) {
                    specs.push(SpaceSpec::new(r.level, r.character, k)?);
                }
            }
        }
        (None, None) => {
            return Err(Fail::usage(
                "dims needs --level and --character, or --table",
            ))
        }
    }
    let mut t = Table::new(
        "dimensions",
        &[
            "space",
            "dim M_k",
            "dim S_k",
            "dim E_k",
            "dim M_k+2",
            "dim E_k+2",
            "feasible (proof)",
            "feasible (display)",
            "check",
        ],
    );
    let mut pass = true;
    let mut rows_json = Vec::new();
    for spec in &specs {
        let v = condition_star(spec)?;
        let s = dim_s(spec)?;
        let check = if check_star {
            v.proof
        } else if check_t3 {
            v.dim_m_k == v.dim_m_k2 && v.dim_e_k2 == 2
        } else {
            true
        };
        pass &= check;
        debug_assert_eq!(dim_m(spec)?, v.dim_m_k);
        debug_assert_eq!(dim_e(spec)?, v.dim_e_k);
        t.push(vec![
            spec.to_string(),
            v.dim_m_k.to_string(),
            s.to_string(),
            v.dim_e_k.to_string(),
            v.dim_m_k2.to_string(),
            v.dim_e_k2.to_string(),
            v.proof.to_string(),
            v.display.to_string(),
            if check_star || check_t3 {
                if check { "pass" } else { "FAIL" }.into()
            } else {
                "-".into()
            },
        ]);
        rows_json.push(json!({
            "level": spec.level,
            "character": spec.kind(),
            "weight": spec.weight,
            "dim_S": s,
            "verdict": v,
            "check": check,
        }));
    }
    Ok(Report {
        heading: "dims".into(),
        notes: Vec::new(),
        tables: vec![t],
        json: json!(rows_json),
        pass,
    })
}
