//! Command-line front end. Every command reads one JSON document (from
//! `--in FILE` or stdin), runs one pipeline and prints a table or, with
//! `--format json`, a JSON document or report.
//!
//! Exit codes: 0 success, 1 domain error (invalid data or a failed check),
//! 2 usage or I/O error.

pub mod format;

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complexes::{ChainComplex, ChainMap};
use crate::cones::{cone, cone_ses, grid_lemma57, snake_les};
use crate::corpus::{generate, ExampleSpec};
use crate::equivariant::{
    assemble_morse_bott, assemble_s1_morse, borel_trivial_action, bv_delta, corollary_certificate, diagram17_check,
    filtration_drops, gysin_theorem11, les_solver, phi_e1, sawc_model, GysinDiagramInstance, MorseBottS1Datum,
    SolvedReport,
};
use crate::error::Error;
use crate::exactlin::Ring;
use crate::spectra::{check_cone_equals_gysin, filtered_order, FilteredComplex, TwoLineComplex};

pub use format::{parse_ring, Document, LesDoc, SCHEMA_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
}

#[derive(Args, Clone, Debug)]
struct Io {
    /// Input document (stdin when absent).
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Coefficient ring: Z, Q or Zp:<p> (converts the input).
    #[arg(long)]
    ring: Option<String>,
    #[arg(long, value_enum, default_value = "table")]
    format: OutputFormat,
}

#[derive(Parser, Debug)]
#[command(name = "gysin", version, about = "Exact mapping cones, two-line spectral sequences and Gysin sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology of a complex (the total complex for two-line input).
    Homology(Io),
    /// Mapping cone of a chain map.
    Cone(Io),
    /// Long exact sequence of the cone of a chain map.
    Snake(Io),
    /// Commutativity checks of the 3x3 grid of a morphism of short exact sequences.
    Grid57(Io),
    /// Spectral sequence pages of a filtered complex.
    Spectral {
        #[command(flatten)]
        io: Io,
        /// Last page to compute (default: the page where it stabilizes).
        #[arg(long)]
        pages: Option<usize>,
    },
    /// Gysin sequence of a two-line complex.
    Gysin(Io),
    /// Certifies that the cone sequence and the Gysin sequence coincide.
    #[command(name = "check-lemma58")]
    CheckLemma58(Io),
    /// Equivariant Morse complex of an S^1 Morse datum (or of a Morse-Bott datum).
    Equivariant(Io),
    /// Filtered complex of a Morse-Bott datum.
    #[command(name = "mb-assemble")]
    MbAssemble(Io),
    /// First-page identification of a Morse-Bott datum.
    Phi(Io),
    /// Gysin sequence of a Morse-Bott datum.
    Theorem11(Io),
    /// BV operator of a Morse-Bott datum.
    Bv(Io),
    /// Borel model of a complex with trivial circle action.
    Borel {
        #[command(flatten)]
        io: Io,
        /// Truncation of CP^infinity.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Gysin diagram of a split Morse-Bott datum.
    Diagram17 {
        #[command(flatten)]
        io: Io,
        /// Use the built-in vanishing model with this many orbit pairs and add its corollary certificate.
        #[arg(long)]
        sawc: Option<usize>,
    },
    /// Deduce what a partially known exact sequence forces.
    Solve(Io),
    /// Filtration order of a chain map between filtered complexes.
    Order(Io),
    /// Print an example document.
    Example {
        /// sphere(n), cpn(n), rp2, hopf, morse_bott_hopf, trivial_borel(inner,n),
        /// random_complex, random_two_line, random_ses_morphism, random_mb_datum
        name: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Load a document and re-check all of its invariants.
    Validate(Io),
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Either a document or a report, with its table rendering.
struct Output {
    json: Value,
    table: String,
}

fn report(command: &str, ring: Ring, fields: Value, table: String) -> Output {
    let mut obj = serde_json::Map::new();
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("kind".into(), json!("report"));
    obj.insert("command".into(), json!(command));
    obj.insert("ring".into(), Document::Complex(ChainComplex::zero(ring)).to_value()["ring"].clone());
    if let Value::Object(f) = fields {
        obj.extend(f);
    }
    Output {
        json: Value::Object(obj),
        table,
    }
}

fn document(doc: Document, table: String) -> Output {
    Output {
        json: doc.to_value(),
        table,
    }
}

fn wrong_kind(cmd: &str, doc: &Document, want: &str) -> Failure {
    Failure::Domain(Error::Document(format!("{cmd} expects {want}, got a {} document", doc.kind())))
}

fn read_input(io: &Io, stdin: &mut dyn Read) -> Outcome<Document> {
    let text = match &io.input {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    let doc = Document::from_json(&text)?;
    match &io.ring {
        Some(r) => Ok(convert_ring(doc, parse_ring(r)?)?),
        None => Ok(doc),
    }
}

fn map_to_ring(m: &ChainMap, ring: Ring) -> crate::Result<ChainMap> {
    let s = m.source().change_ring(ring)?;
    let t = m.target().change_ring(ring)?;
    let mats = if s.is_empty_range() { Default::default() } else { s.degrees().map(|k| (k, ring.reduce_matrix(&m.mat(k)))).collect() };
    ChainMap::new(s, t, m.shift(), mats)
}

fn filtered_to_ring(f: &FilteredComplex, ring: Ring) -> crate::Result<FilteredComplex> {
    FilteredComplex::new(f.complex().change_ring(ring)?, f.all_levels().to_vec())
}

/// Re-reads the document over another ring.
fn convert_ring(doc: Document, ring: Ring) -> crate::Result<Document> {
    Ok(match doc {
        Document::Complex(c) => Document::Complex(c.change_ring(ring)?),
        Document::FilteredComplex(f) => Document::FilteredComplex(filtered_to_ring(&f, ring)?),
        Document::TwoLine(t) => Document::TwoLine(TwoLineComplex::new(map_to_ring(t.f(), ring)?)?),
        Document::ChainMap { map, filtrations } => Document::ChainMap {
            map: map_to_ring(&map, ring)?,
            filtrations: match filtrations {
                Some((s, t)) => Some((filtered_to_ring(&s, ring)?, filtered_to_ring(&t, ring)?)),
                None => None,
            },
        },
        Document::S1MorseDatum(mut d) => {
            d.ring = ring;
            Document::S1MorseDatum(d)
        }
        Document::MbDatum(d) => Document::MbDatum(MorseBottS1Datum::new(ring, d.orbits, d.d1, d.d2)?),
        Document::Les { les, .. } => Document::Les { ring, les },
        other => {
            return Err(Error::BadParams(format!("--ring cannot convert a {} document", other.kind())));
        }
    })
}

fn homology_fields(c: &ChainComplex) -> Value {
    let rows: Vec<Value> = c
        .homology_all()
        .iter()
        .map(|(k, g)| {
            let mut v = format::group_value(g);
            v["degree"] = json!(k);
            v
        })
        .collect();
    json!({ "homology": rows })
}

fn mb_datum(cmd: &str, doc: &Document) -> Outcome<MorseBottS1Datum> {
    match doc {
        Document::MbDatum(d) => Ok(d.clone()),
        other => Err(wrong_kind(cmd, other, "an mb_datum")),
    }
}

fn two_line(cmd: &str, doc: &Document) -> Outcome<TwoLineComplex> {
    match doc {
        Document::TwoLine(t) => Ok(t.clone()),
        Document::MbDatum(d) => Ok(d.two_line()?),
        other => Err(wrong_kind(cmd, other, "a two_line document")),
    }
}

fn chain_map(cmd: &str, doc: &Document) -> Outcome<ChainMap> {
    match doc {
        Document::ChainMap { map, .. } => Ok(map.clone()),
        Document::TwoLine(t) => Ok(t.f().clone()),
        other => Err(wrong_kind(cmd, other, "a chain_map")),
    }
}

fn matrices_value(m: &std::collections::BTreeMap<i64, crate::exactlin::RatMatrix>) -> Value {
    Value::Object(m.iter().map(|(k, v)| (k.to_string(), format::rat_matrix_value(v))).collect())
}

fn solved_table(s: &SolvedReport, names: &[String], map_names: &[String]) -> String {
    let mut out = String::new();
    for (i, n) in names.iter().enumerate() {
        let d = s.dims[i].map_or("?".to_string(), |d| d.to_string());
        out.push_str(&format!("{n:<16} dim {d}\n"));
        if i < map_names.len() {
            out.push_str(&format!("   | {} : {:?}\n", map_names[i], s.statuses[i]));
        }
    }
    for d in &s.deductions {
        out.push_str(&format!("[{}] {}\n", d.rule, d.statement));
    }
    out
}

fn execute(cmd: Command, stdin: &mut dyn Read) -> Outcome<(Output, OutputFormat, Option<PathBuf>)> {
    let (io, out) = match &cmd {
        Command::Homology(io)
        | Command::Cone(io)
        | Command::Snake(io)
        | Command::Grid57(io)
        | Command::Gysin(io)
        | Command::CheckLemma58(io)
        | Command::Equivariant(io)
        | Command::MbAssemble(io)
        | Command::Phi(io)
        | Command::Theorem11(io)
        | Command::Bv(io)
        | Command::Solve(io)
        | Command::Order(io)
        | Command::Validate(io)
        | Command::Spectral { io, .. }
        | Command::Borel { io, .. }
        | Command::Diagram17 { io, .. } => (Some(io.clone()), io.out.clone()),
        Command::Example { out, .. } => (None, out.clone()),
    };
    let fmt = match (&cmd, &io) {
        (Command::Example { format, .. }, _) => *format,
        (_, Some(io)) => io.format,
        _ => OutputFormat::Table,
    };
    // the synthetic diagram model needs no input
    let skip_input = matches!(cmd, Command::Diagram17 { sawc: Some(_), .. } | Command::Example { .. });
    let doc = match (&io, skip_input) {
        (Some(io), false) => Some(read_input(io, stdin)?),
        _ => None,
    };
    let doc_ref = || doc.as_ref().expect("input was read");
    let output = match cmd {
        Command::Homology(_) => {
            let c = match doc_ref() {
                Document::Complex(c) => c.clone(),
                Document::FilteredComplex(f) => f.complex().clone(),
                Document::TwoLine(t) => t.total(),
                other => return Err(wrong_kind("homology", other, "a complex, filtered_complex or two_line document")),
            };
            report("homology", c.ring(), homology_fields(&c), c.homology_table() + "\n")
        }
        Command::Cone(_) => {
            let f = chain_map("cone", doc_ref())?;
            let c = cone(&f)?;
            let table = format!("{c}{}\n", c.homology_table());
            document(Document::Complex(c), table)
        }
        Command::Snake(_) => {
            let f = chain_map("snake", doc_ref())?;
            let les = snake_les(&cone_ses(&f)?)?;
            les.verify_exact()?;
            let table = les.table();
            document(
                Document::Les {
                    ring: f.ring(),
                    les: LesDoc::from_les(&les),
                },
                table,
            )
        }
        Command::Grid57(_) => {
            let m = match doc_ref() {
                Document::SesMorphism(m) => m.clone(),
                other => return Err(wrong_kind("grid57", other, "a ses_morphism")),
            };
            let r = grid_lemma57(&m)?;
            if let Some(f) = r.failures.first() {
                return Err(Failure::Domain(Error::Mismatch(f.clone())));
            }
            let table = format!(
                "squares checked: {}\nmarked square (anticommutes) checked in degrees {:?}\nall squares pass\n",
                r.squares_checked, r.marked_degrees
            );
            report(
                "grid57",
                m.f.ring(),
                json!({"passed": true, "squares_checked": r.squares_checked, "marked_degrees": r.marked_degrees}),
                table,
            )
        }
        Command::Spectral { pages, .. } => {
            let fc = match doc_ref() {
                Document::FilteredComplex(f) => f.clone(),
                Document::TwoLine(t) => t.filtered(),
                Document::MbDatum(d) => assemble_morse_bott(d)?,
                other => return Err(wrong_kind("spectral", other, "a filtered_complex, two_line or mb_datum document")),
            };
            let r_max = pages.unwrap_or_else(|| fc.r_infinity());
            let sp = fc.spectral_pages(r_max)?;
            sp.check_recursion()?;
            sp.check_convergence()?;
            let entries: Vec<Value> = sp
                .entries
                .iter()
                .filter(|(_, sq)| !sq.is_trivial())
                .map(|(&(r, p, q), sq)| {
                    let mut v = format::group_value(&sq.group());
                    v["r"] = json!(r);
                    v["p"] = json!(p);
                    v["q"] = json!(q);
                    v["differential"] = format::rat_matrix_value(&sp.diffs[&(r, p, q)]);
                    v
                })
                .collect();
            let einf: Vec<Value> = sp
                .e_infinity
                .iter()
                .filter(|(_, sq)| !sq.is_trivial())
                .map(|(&(p, q), sq)| {
                    let mut v = format::group_value(&sq.group());
                    v["p"] = json!(p);
                    v["q"] = json!(q);
                    v
                })
                .collect();
            let degenerate = (0..=r_max.max(1)).find(|&r| sp.degenerates_from(r));
            let table = format!(
                "{}recursion H(E^r) = E^(r+1): ok\nconvergence to H(total): ok\n",
                sp.table()
            );
            report(
                "spectral",
                fc.complex().ring(),
                json!({"r_max": r_max, "r_infinity": sp.r_inf, "entries": entries, "e_infinity": einf,
                       "degenerates_from": degenerate, "recursion_ok": true, "convergence_ok": true}),
                table,
            )
        }
        Command::Gysin(_) => {
            let t = two_line("gysin", doc_ref())?;
            let g = t.gysin()?;
            let table = g.les.table();
            document(
                Document::Les {
                    ring: t.ring(),
                    les: LesDoc::from_les(&g.les),
                },
                table,
            )
        }
        Command::CheckLemma58(_) => {
            let t = two_line("check-lemma58", doc_ref())?;
            let r = check_cone_equals_gysin(&t)?;
            let table = format!(
                "I = i_*, P = p_*, d2 = f_* = delta: {} identities in degrees {:?}\npage-3 factorizations: {}\n",
                r.identities, r.degrees, r.factorizations
            );
            report(
                "check-lemma58",
                t.ring(),
                json!({"passed": true, "degrees": r.degrees, "identities": r.identities, "factorizations": r.factorizations}),
                table,
            )
        }
        Command::Equivariant(_) => {
            let c = match doc_ref() {
                Document::S1MorseDatum(d) => assemble_s1_morse(d)?,
                Document::MbDatum(d) => d.equivariant_complex()?,
                other => return Err(wrong_kind("equivariant", other, "an s1_morse_datum or mb_datum")),
            };
            let table = format!("{c}{}\n", c.homology_table());
            document(Document::Complex(c), table)
        }
        Command::MbAssemble(_) => {
            let d = mb_datum("mb-assemble", doc_ref())?;
            let fc = assemble_morse_bott(&d)?;
            let drops: Vec<i64> = filtration_drops(&fc).into_iter().collect();
            let table = format!("{}filtration drops: {drops:?}\n{}\n", fc.complex(), fc.complex().homology_table());
            document(Document::FilteredComplex(fc), table)
        }
        Command::Phi(_) => {
            let d = mb_datum("phi", doc_ref())?;
            let r = phi_e1(&d)?;
            let phi_mats: Value = Value::Object(
                r.e1.degrees()
                    .map(|k| (k.to_string(), format::rat_matrix_value(&r.phi.mat(k).to_rational())))
                    .collect(),
            );
            let table = format!(
                "E^1 with d^1:\n{}SC (x) H(S^1):\n{}phi is a filtered chain isomorphism\n",
                r.e1, r.model
            );
            report(
                "phi",
                d.ring,
                json!({"passed": true, "e1": Document::Complex(r.e1.clone()).to_value(),
                       "model": Document::Complex(r.model.clone()).to_value(), "phi": phi_mats}),
                table,
            )
        }
        Command::Theorem11(_) => {
            let d = mb_datum("theorem11", doc_ref())?;
            let g = gysin_theorem11(&d)?;
            let table = g.les.table();
            document(
                Document::Les {
                    ring: d.ring,
                    les: LesDoc::from_les(&g.les),
                },
                table,
            )
        }
        Command::Bv(_) => {
            let d = mb_datum("bv", doc_ref())?;
            let r = bv_delta(&d)?;
            let mut table = String::from("Delta^2 = 0 at chain level\n");
            for (k, m) in &r.induced {
                table.push_str(&format!("Delta: H{k} -> H{} = {m}\n", k + 1));
            }
            table.push_str(&format!("Delta = M E on homology in degrees {:?}\n", r.degrees));
            report(
                "bv",
                d.ring,
                json!({"passed": true, "induced": matrices_value(&r.induced), "degrees": r.degrees}),
                table,
            )
        }
        Command::Borel { n, .. } => {
            let c = match doc_ref() {
                Document::Complex(c) => c.clone(),
                other => return Err(wrong_kind("borel", other, "a complex")),
            };
            let (model, r) = borel_trivial_action(&c, n)?;
            let table = format!(
                "{}\nD is the projection pattern in degrees {:?}\nstable (unchanged for n + 1) in degrees {:?}\n",
                model.homology_table(),
                r.d_map_degrees,
                r.stable_degrees
            );
            let mut fields = homology_fields(&model);
            fields["n"] = json!(n);
            fields["d_map_degrees"] = json!(r.d_map_degrees);
            fields["stable_degrees"] = json!(r.stable_degrees);
            report("borel", c.ring(), fields, table)
        }
        Command::Diagram17 { sawc, .. } => {
            let (inst, ring) = match sawc {
                Some(n) => (sawc_model(n)?, Ring::Rationals),
                None => {
                    let d = mb_datum("diagram17", doc_ref())?;
                    (GysinDiagramInstance::from_datum(&d)?, d.ring)
                }
            };
            let r = diagram17_check(&inst)?;
            if let Some(f) = r.first_failure() {
                return Err(Failure::Domain(Error::Mismatch(f.to_string())));
            }
            let mut table = format!(
                "diagram commutes: {} squares, marked squares in degrees {:?}\n",
                r.grid.squares_checked, r.grid.marked_degrees
            );
            let mut fields = json!({"passed": true, "squares_checked": r.grid.squares_checked,
                                    "marked_degrees": r.grid.marked_degrees});
            if sawc.is_some() {
                let cert = corollary_certificate(&inst)?;
                table.push_str("Gysin column:\n");
                for d in &cert.gysin_column.deductions {
                    table.push_str(&format!("  [{}] {}\n", d.rule, d.statement));
                }
                table.push_str("equivariant row:\n");
                for d in &cert.equivariant_row.deductions {
                    table.push_str(&format!("  [{}] {}\n", d.rule, d.statement));
                }
                for (name, steps) in &cert.vanishing {
                    table.push_str(&format!("{name} vanishes: {}\n", steps.join("; ")));
                }
                fields["certificate"] = json!({
                    "gysin_column": cert.gysin_column,
                    "equivariant_row": cert.equivariant_row,
                    "vanishing": cert.vanishing,
                });
            }
            report("diagram17", ring, fields, table)
        }
        Command::Solve(_) => {
            let (ring, les) = match doc_ref() {
                Document::Les { ring, les } => (*ring, les.clone()),
                other => return Err(wrong_kind("solve", other, "an les document")),
            };
            let partial = les.to_partial()?;
            let s = les_solver(&partial)?;
            let names: Vec<String> = partial.slots.iter().map(|s| s.name.clone()).collect();
            let map_names: Vec<String> = partial.maps.iter().map(|m| m.name.clone()).collect();
            let table = solved_table(&s, &names, &map_names);
            report("solve", ring, json!({ "solution": s }), table)
        }
        Command::Order(_) => {
            let (map, (s, t)) = match doc_ref() {
                Document::ChainMap {
                    map,
                    filtrations: Some(f),
                } => (map.clone(), f.clone()),
                other => return Err(wrong_kind("order", other, "a chain_map with filtrations on both ends")),
            };
            let k = filtered_order(&map, &s, &t);
            report("order", map.ring(), json!({ "order": k }), format!("order {k}\n"))
        }
        Command::Example {
            name, seed, size, ring, ..
        } => {
            let spec: ExampleSpec = name.parse()?;
            let spec = spec.with_seed_size(seed, size);
            let ring = match ring {
                Some(r) => parse_ring(&r)?,
                None => Ring::Integers,
            };
            let doc: Document = generate(&spec, ring)?.into();
            let table = doc.to_json();
            document(doc, table)
        }
        Command::Validate(_) => {
            let d = doc_ref();
            report(
                "validate",
                d.ring(),
                json!({"valid": true, "document_kind": d.kind()}),
                format!("ok: valid {} document\n", d.kind()),
            )
        }
    };
    Ok((output, fmt, out))
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, stdin) {
        Ok((output, fmt, out)) => {
            let text = match fmt {
                OutputFormat::Json => serde_json::to_string_pretty(&output.json).expect("serializable") + "\n",
                OutputFormat::Table => output.table,
            };
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text) {
                        let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                        return 2;
                    }
                }
                None => {
                    if stdout.write_all(text.as_bytes()).is_err() {
                        return 2;
                    }
                }
            }
            0
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

pub fn main() -> i32 {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
