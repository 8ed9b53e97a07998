//! Command-line front end for `isoprod-core`.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 internal consistency
//! violation.

pub mod args;
pub mod cache;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::sync::Arc;

use clap::Parser;
use isoprod_core::classify::{classify_all, ClassificationRecord, Keep, Report, SearchBounds};
use isoprod_core::covering::{enumerate_vectors, DedupMode, EnumerationOptions, GeneratingVector};
use isoprod_core::group::{
    build_group, builtin_groups, parse_group_list, BuildOptions, GroupSpec, GroupTable,
};
use isoprod_core::surface::{build_surface, example_surface_with, Family};
use isoprod_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::json;

use args::{
    BoundArgs, ClassifyArgs, Cli, Command, CoversArgs, Emit, GlobalArgs, SurfacesArgs, VerifyArgs,
};
use cache::DiskCache;
use output::{join, Sink};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Failure of a subcommand, already classified by exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } => EXIT_USAGE,
            e if e.is_internal() => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli) -> Result<i32, Failure> {
    let g = &cli.global;
    if let Some(n) = g.workers {
        // Already configured when called repeatedly in one process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n as usize)
            .build_global();
    }
    let cache = if g.no_cache {
        DiskCache::disabled()
    } else {
        DiskCache::new(g.cache_dir.clone())
    };
    let build = BuildOptions {
        seed: g.seed,
        ..BuildOptions::default()
    };
    let out: Box<dyn Write> = match &g.output {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| Failure {
            code: EXIT_VALIDATION,
            message: format!("{}: {e}", path.display()),
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.command {
        Command::Chartab { group } => chartab(g, out, &cache, &build, &group),
        Command::Covers(a) => covers(g, out, &build, &a),
        Command::Surfaces(a) => surfaces(g, out, &cache, &build, &a),
        Command::Classify(a) => classify(g, out, &cache, &build, &a),
        Command::VerifyExample(a) => verify_example(g, out, &cache, &build, &a),
    }
}

fn load_group(spec: &str, build: &BuildOptions) -> Result<Arc<GroupTable>, Failure> {
    let spec: GroupSpec = spec.parse()?;
    Ok(Arc::new(build_group(&spec, build)?))
}

fn chartab(
    g: &GlobalArgs,
    out: Box<dyn Write>,
    cache: &DiskCache,
    build: &BuildOptions,
    spec: &str,
) -> Result<i32, Failure> {
    let group = load_group(spec, build)?;
    let (table, _) = cache.table(&group)?;
    let classes = group.conjugacy_classes();
    let mut header = vec!["character".to_string(), "degree".to_string()];
    header.extend(
        classes
            .iter()
            .map(|c| group.label(c.representative).to_string()),
    );
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut sink = Sink::new(g.format, out, &header_refs);

    if g.format == args::Format::Json {
        let doc = json!({
            "group": group.spec(),
            "order": group.order(),
            "exponent": table.exponent(),
            "classes": classes.iter().map(|c| json!({
                "representative": group.label(c.representative),
                "size": c.size(),
                "element_order": group.element_order(c.representative),
            })).collect::<Vec<_>>(),
            "characters": (0..table.len()).map(|i| json!({
                "degree": table.degree(i),
                "values": classes.iter().map(|c| table.value_cyclo(i, c.representative).to_string()).collect::<Vec<_>>(),
                "multiplicities": table.character(i).values,
            })).collect::<Vec<_>>(),
        });
        sink.document(&doc)?;
    } else {
        let mut sizes = vec!["class size".to_string(), String::new()];
        sizes.extend(classes.iter().map(|c| c.size().to_string()));
        sink.row(&(), sizes)?;
        for i in 0..table.len() {
            let mut cells = vec![format!("chi{i}"), table.degree(i).to_string()];
            cells.extend(
                classes
                    .iter()
                    .map(|c| table.value_cyclo(i, c.representative).to_string()),
            );
            sink.row(&(), cells)?;
        }
    }
    sink.finish(None::<(&(), String)>)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CoverRow<'a> {
    group: &'a str,
    b: usize,
    alphas: &'a [usize],
    betas: &'a [usize],
    gammas: &'a [usize],
    branch_orders: Vec<usize>,
    genus: u64,
}

fn covers(
    g: &GlobalArgs,
    out: Box<dyn Write>,
    build: &BuildOptions,
    a: &CoversArgs,
) -> Result<i32, Failure> {
    let group = load_group(&a.group, build)?;
    let opts = EnumerationOptions {
        base_genus: a.base_genus as usize,
        max_r: a.branch.as_ref().map_or(a.max_r, Vec::len),
        branch_orders: a.branch.clone(),
        genus_cap: a.genus_cap,
        min_genus: a.min_genus,
        dedup: a.dedup,
        max_results: a.max_results,
        ..EnumerationOptions::default()
    };
    let found = enumerate_vectors(&group, &opts)?;
    let mut sink = Sink::new(
        g.format,
        out,
        &["b", "alphas", "betas", "gammas", "branch_orders", "genus"],
    );
    let label = |xs: &[usize]| join(xs.iter().map(|&x| group.label(x)));
    for c in &found.covers {
        let v = &c.vector;
        let row = CoverRow {
            group: group.spec(),
            b: v.base_genus(),
            alphas: v.alphas(),
            betas: v.betas(),
            gammas: v.gammas(),
            branch_orders: v.branch_orders(),
            genus: c.genus,
        };
        let cells = vec![
            row.b.to_string(),
            label(v.alphas()),
            label(v.betas()),
            label(v.gammas()),
            join(&row.branch_orders),
            c.genus.to_string(),
        ];
        sink.row(&row, cells)?;
    }
    let dedup = match found.dedup {
        DedupMode::Off => "off",
        DedupMode::Automorphisms => "automorphisms",
        DedupMode::Fingerprint => "fingerprint",
    };
    let summary = json!({"summary": {
        "covers": found.covers.len(),
        "truncated": found.truncated,
        "dedup": dedup,
    }});
    let text = format!(
        "{} covers{} (dedup: {dedup})",
        found.covers.len(),
        if found.truncated { ", truncated" } else { "" }
    );
    sink.finish(Some((&summary, text)))?;
    Ok(EXIT_OK)
}

/// A generating vector given on the command line; the group comes from the
/// positional argument.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorArg {
    #[serde(default)]
    b: Option<usize>,
    #[serde(default)]
    alphas: Vec<usize>,
    #[serde(default)]
    betas: Vec<usize>,
    #[serde(default)]
    gammas: Vec<usize>,
}

fn parse_vector(group: &Arc<GroupTable>, text: &str) -> Result<GeneratingVector, Failure> {
    let v: VectorArg = serde_json::from_str(text)
        .map_err(|e| usage(format!("cannot parse vector `{text}`: {e}")))?;
    if v.b.is_some_and(|b| b != v.alphas.len()) {
        return Err(usage(format!(
            "vector `{text}`: b does not match the number of alphas"
        )));
    }
    Ok(GeneratingVector::new(
        group.clone(),
        v.alphas,
        v.betas,
        v.gammas,
    )?)
}

const RECORD_HEADER: [&str; 15] = [
    "group", "vC", "vD", "gC", "gD", "q", "pg", "chi", "K2", "e", "b1", "b2", "aut0", "conforms",
    "reason",
];

fn record_cells(rec: &ClassificationRecord) -> Vec<String> {
    let j = rec.json();
    let s = &j.surface;
    let vector = |v: &isoprod_core::covering::VectorRecord| {
        format!(
            "({}; {}; {})",
            join(&v.alphas),
            join(&v.betas),
            join(&v.gammas)
        )
    };
    let inv = &s.invariants;
    vec![
        s.group.clone(),
        vector(&s.v_c),
        vector(&s.v_d),
        s.g_c.to_string(),
        s.g_d.to_string(),
        inv.q.to_string(),
        inv.pg.to_string(),
        inv.chi.to_string(),
        inv.k2.to_string(),
        inv.euler.to_string(),
        inv.b1.to_string(),
        inv.b2.to_string(),
        join(&j.aut0_labels),
        j.conforms.map(|c| c.to_string()).unwrap_or_default(),
        j.reason.unwrap_or_default(),
    ]
}

fn search_bounds(b: &BoundArgs, max_group_order: usize) -> Result<SearchBounds, Failure> {
    let bounds = SearchBounds {
        max_group_order,
        max_r: b.max_r as usize,
        max_s: b.max_s as usize,
        max_branch_order: b.max_branch_order as usize,
        genus_cap: b.genus_cap,
        base_genera: b.base_genera.clone(),
    };
    bounds.validate().map_err(|e| usage(e.to_string()))?;
    Ok(bounds)
}

fn surfaces(
    g: &GlobalArgs,
    out: Box<dyn Write>,
    cache: &DiskCache,
    build: &BuildOptions,
    a: &SurfacesArgs,
) -> Result<i32, Failure> {
    let group = load_group(&a.group, build)?;
    cache.table(&group)?;
    let mut sink = Sink::new(g.format, out, &RECORD_HEADER);
    if let (Some(vc), Some(vd)) = (&a.vc, &a.vd) {
        let vc = parse_vector(&group, vc)?;
        let vd = parse_vector(&group, vd)?;
        let rec = ClassificationRecord::new(build_surface(&vc, &vd)?);
        sink.row(&rec.json(), record_cells(&rec))?;
        sink.finish(None::<(&(), String)>)?;
        return Ok(EXIT_OK);
    }
    let bounds = search_bounds(&a.bounds, group.order())?;
    let spec: GroupSpec = a.group.parse()?;
    let report = classify_all(&bounds, &[spec], build, Keep::All, &|_| {})?;
    emit_report(sink, &report)
}

fn classify(
    g: &GlobalArgs,
    out: Box<dyn Write>,
    cache: &DiskCache,
    build: &BuildOptions,
    a: &ClassifyArgs,
) -> Result<i32, Failure> {
    let max_order = a.max_group_order as usize;
    let bounds = search_bounds(&a.bounds, max_order)?;
    let groups = match &a.groups {
        Some(list) => parse_group_list(list)?,
        None => builtin_groups(max_order),
    };
    // Warm the in-process memo from disk; groups that fail to build are
    // reported per record by the sweep itself.
    for spec in &groups {
        if let Ok(group) = build_group(spec, build) {
            if group.order() <= max_order {
                cache.table(&Arc::new(group))?;
            }
        }
    }
    let keep = match a.emit {
        Emit::All => Keep::All,
        Emit::Nontrivial => Keep::NontrivialAut0,
        Emit::None => Keep::Nothing,
    };
    let report = classify_all(&bounds, &groups, build, keep, &|_| {})?;
    emit_report(Sink::new(g.format, out, &RECORD_HEADER), &report)
}

fn emit_report(mut sink: Sink, report: &Report) -> Result<i32, Failure> {
    for rec in &report.records {
        sink.row(&rec.json(), record_cells(rec))?;
    }
    let s = &report.summary;
    let internal = report.errors.iter().filter(|e| e.internal).count();
    let summary = json!({"summary": s, "errors": report.errors});
    let text = format!(
        "{} surfaces, {} with nontrivial Aut0, {} conformance failures, {} errors ({internal} internal)",
        s.surfaces, s.nontrivial_aut0, s.conformance_failures, s.errors
    );
    for e in &report.errors {
        eprintln!("{}: {}", e.group, e.message);
    }
    sink.finish(Some((&summary, text)))?;
    Ok(if internal > 0 {
        EXIT_INTERNAL
    } else if s.conformance_failures > 0 {
        EXIT_VALIDATION
    } else {
        EXIT_OK
    })
}

fn verify_example(
    g: &GlobalArgs,
    out: Box<dyn Write>,
    cache: &DiskCache,
    build: &BuildOptions,
    a: &VerifyArgs,
) -> Result<i32, Failure> {
    let family: Family = a.family.parse()?;
    let ex = example_surface_with(family, a.m, a.n, a.k, a.l, build)?;
    let s = &ex.surface;
    cache.table(s.group())?;
    let rec = ClassificationRecord::new(s.clone());
    let group = s.group();

    // Genus of C is 2δm²nk + 1 for the family constant δ.
    let (m, n, k, l) = (a.m as i64, a.n as i64, a.k as i64, a.l as i64);
    let delta = match family {
        Family::Z2mZ2mn => 1,
        Family::Z2Z2mZ2mn => 2,
    };
    let inv = s.invariants();
    let sigma = ex.involution();
    let checks = [
        ("q = 2", inv.q == 2),
        ("pg = δm²nkl + 1", inv.pg == delta * m * m * n * k * l + 1),
        ("K² = 8δm²nkl", inv.k2 == 8 * delta * m * m * n * k * l),
        ("|Aut0| = 2", rec.aut0.len() == 2),
        (
            "Aut0 generated by γγ′",
            rec.aut0.contains(sigma) && sigma != group.identity(),
        ),
    ];
    let note = (family == Family::Z2Z2mZ2mn).then(|| {
        "for this family Riemann-Hurwitz gives gC = 4m²nk + 1, so the constant is δ = 2 in pg = δm²nkl + 1 and K² = 8δm²nkl"
            .to_string()
    });
    let passed = checks.iter().all(|(_, ok)| *ok);
    let doc = json!({
        "family": family.to_string(),
        "m": a.m, "n": a.n, "k": a.k, "l": a.l,
        "delta": delta,
        "record": rec.json(),
        "involution": group.label(sigma),
        "checks": checks.iter().map(|(name, ok)| json!({"check": name, "pass": ok})).collect::<Vec<_>>(),
        "note": note,
    });
    let mut sink = Sink::new(g.format, out, &["field", "value"]);
    match g.format {
        args::Format::Json => sink.document(&doc)?,
        _ => {
            let rows = [
                ("group", group.spec().to_string()),
                ("gC", s.cover_c().genus.to_string()),
                ("gD", s.cover_d().genus.to_string()),
                ("q", inv.q.to_string()),
                ("pg", inv.pg.to_string()),
                ("chi", inv.chi.to_string()),
                ("K2", inv.k2.to_string()),
                ("Aut0", join(rec.aut0.iter().map(|x| group.label(x)))),
                ("involution", group.label(sigma).to_string()),
            ];
            for (name, value) in rows {
                sink.row(&(), vec![name.to_string(), value])?;
            }
            for (name, ok) in checks {
                sink.row(&(), vec![name.to_string(), ok.to_string()])?;
            }
        }
    }
    sink.finish(None::<(&(), String)>)?;
    if let Some(note) = note {
        eprintln!("note: {note}");
    }
    Ok(if passed { EXIT_OK } else { EXIT_INTERNAL })
}
