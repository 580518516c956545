//! Command-line front end for the degree-set calculator.
//!
//! Every subcommand takes a manifold description in the textual language of
//! `selfmap_core::dsl` (see `selfmap --help` or the README for the grammar),
//! prints a text report to stdout, and signals problems through the exit
//! code: 0 on success, 1 for invalid input, 2 when the answer exists but is
//! outside what the tool supports (a band-only degree set asked to
//! enumerate, oversized parameters), 3 for an internal invariant violation.
//! `--json` switches stdout to a single-line JSON envelope with the same
//! content; parse diagnostics always go to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;
use selfmap_core::degset::{self, Membership};
use selfmap_core::dsl::{self, Diagnostic};
use selfmap_core::engine::{self, ReversalReport};
use selfmap_core::manifold::{canonicalize, classify, validate, Geometry, ManifoldDesc};
use selfmap_core::Error;

/// Widest `[--from, --to]` interval `list` will scan.
const MAX_RANGE_WIDTH: i64 = 10_000_000;

const ZERO_NOTE: &str =
    "the printed set omits 0, though constant maps always exist; pass --with-zero to include it";

#[derive(Parser)]
#[command(
    name = "selfmap",
    version,
    about = "Exact degree sets of self-maps of closed oriented 3-manifolds",
    after_help = "Negative numbers must follow a `--` separator, e.g.\n    \
                  selfmap contains \"TB[2,3;1,2]\" -- -1\n\
                  (for degree -1 the `minus-one` subcommand needs no separator)."
)]
struct Cli {
    /// Print a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Count constant maps: adds 0 to set-valued answers.
    #[arg(long, global = true)]
    with_zero: bool,

    /// Print only the answer itself, no geometry or notes (text mode only).
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the degree set of a manifold in closed form.
    Describe { description: String },

    /// List the members of the degree set inside [FROM, TO].
    List {
        description: String,
        #[arg(long)]
        from: i64,
        #[arg(long)]
        to: i64,
    },

    /// Test whether a given degree is realized (true / false / unknown).
    Contains {
        description: String,
        /// Degree to test; negative values go after `--`.
        degree: i64,
    },

    /// Print the geometry the description falls under.
    Classify { description: String },

    /// Test whether some self-map has degree -1.
    #[command(name = "minus-one")]
    MinusOne { description: String },

    /// Orientation-reversal facts for the lens space L(p, q).
    #[command(name = "lens-reversal")]
    LensReversal { p: i64, q: i64 },
}

enum Payload {
    Set { description: String },
    Members { members: Vec<i64> },
    Membership { value: Membership },
    Geometry { value: Geometry },
    Reversal { report: ReversalReport },
}

struct Outcome {
    geometry: Option<Geometry>,
    payload: Payload,
    notes: Vec<String>,
}

struct Failure {
    exit: u8,
    message: String,
    input: Option<String>,
    diagnostics: Vec<Diagnostic>,
}

fn main() -> ExitCode {
    let code = catch_unwind(AssertUnwindSafe(|| {
        let args: Vec<OsString> = std::env::args_os().collect();
        let mut out = std::io::stdout().lock();
        let mut err = std::io::stderr().lock();
        run(args, &mut out, &mut err)
    }))
    .unwrap_or_else(|payload| {
        let text = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unknown panic".to_string());
        eprintln!("error: internal invariant violation: {text}");
        3
    });
    ExitCode::from(code)
}

fn run(args: Vec<OsString>, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return 1;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            emit_ok(&cli, &outcome, out);
            0
        }
        Err(failure) => {
            emit_err(&cli, &failure, out, err);
            failure.exit
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Cmd::Describe { description } => {
            let desc = parse_desc(description)?;
            let set = engine::degrees(&desc).map_err(core_failure)?;
            let mut text = degset::describe(&set);
            let mut notes = Vec::new();
            match (cli.with_zero, set.contains(0)) {
                (true, Membership::Out) => text = format!("{text} \u{222a} {{0}}"),
                (false, Membership::Out) => notes.push(ZERO_NOTE.to_string()),
                _ => {}
            }
            Ok(Outcome {
                geometry: geometry_of(&desc),
                payload: Payload::Set { description: text },
                notes,
            })
        }
        Cmd::List { description, from, to } => {
            let desc = parse_desc(description)?;
            let width = (*to as i128) - (*from as i128);
            if width > MAX_RANGE_WIDTH as i128 {
                return Err(Failure {
                    exit: 1,
                    message: format!(
                        "range [{from}, {to}] is wider than the {MAX_RANGE_WIDTH} cap"
                    ),
                    input: None,
                    diagnostics: Vec::new(),
                });
            }
            let set = engine::degrees(&desc).map_err(core_failure)?;
            let mut members = degset::enumerate(&set, *from, *to).map_err(core_failure)?;
            let mut notes = Vec::new();
            if cli.with_zero {
                if *from <= 0 && 0 <= *to {
                    if let Err(pos) = members.binary_search(&0) {
                        members.insert(pos, 0);
                    }
                }
            } else if set.contains(0) == Membership::Out {
                notes.push(ZERO_NOTE.to_string());
            }
            Ok(Outcome {
                geometry: geometry_of(&desc),
                payload: Payload::Members { members },
                notes,
            })
        }
        Cmd::Contains { description, degree } => {
            let desc = parse_desc(description)?;
            let set = engine::degrees(&desc).map_err(core_failure)?;
            let value = if cli.with_zero && *degree == 0 {
                Membership::In
            } else {
                set.contains(*degree)
            };
            let mut notes = Vec::new();
            if !cli.with_zero && *degree == 0 && value == Membership::Out {
                notes.push(ZERO_NOTE.to_string());
            }
            Ok(Outcome {
                geometry: geometry_of(&desc),
                payload: Payload::Membership { value },
                notes,
            })
        }
        Cmd::Classify { description } => {
            let desc = parse_desc(description)?;
            if let Some(v) = validate(&desc).first() {
                return Err(Failure {
                    exit: 1,
                    message: v.to_string(),
                    input: None,
                    diagnostics: Vec::new(),
                });
            }
            let value = classify(&canonicalize(&desc)).map_err(core_failure)?;
            Ok(Outcome {
                geometry: Some(value),
                payload: Payload::Geometry { value },
                notes: Vec::new(),
            })
        }
        Cmd::MinusOne { description } => {
            let desc = parse_desc(description)?;
            let set = engine::degrees(&desc).map_err(core_failure)?;
            Ok(Outcome {
                geometry: geometry_of(&desc),
                payload: Payload::Membership {
                    value: set.contains(-1),
                },
                notes: Vec::new(),
            })
        }
        Cmd::LensReversal { p, q } => {
            let report = engine::lens_reversal_report(*p, *q).map_err(core_failure)?;
            Ok(Outcome {
                geometry: Some(Geometry::S3),
                payload: Payload::Reversal { report },
                notes: Vec::new(),
            })
        }
    }
}

fn parse_desc(text: &str) -> Result<ManifoldDesc, Failure> {
    dsl::parse(text).map_err(|diagnostics| Failure {
        exit: 1,
        message: diagnostics
            .first()
            .map(|d| d.message.clone())
            .unwrap_or_else(|| "invalid manifold description".to_string()),
        input: Some(text.to_string()),
        diagnostics,
    })
}

fn core_failure(e: Error) -> Failure {
    let exit = match &e {
        Error::BandNotEnumerable | Error::Unsupported(_) | Error::OrderTooLarge(..) => 2,
        Error::UnsupportedDiscriminant(_) => 3,
        _ => 1,
    };
    Failure {
        exit,
        message: e.to_string(),
        input: None,
        diagnostics: Vec::new(),
    }
}

/// Geometry echo for the report header. `degrees` has already accepted the
/// description, so classification is expected to succeed; `None` only covers
/// the connected sums whose summands we report as simply non-prime.
fn geometry_of(desc: &ManifoldDesc) -> Option<Geometry> {
    classify(&canonicalize(desc)).ok()
}

fn emit_ok(cli: &Cli, outcome: &Outcome, out: &mut dyn Write) {
    if cli.json {
        let envelope = json!({
            "status": "ok",
            "query": query_json(&cli.command),
            "geometry": outcome.geometry.map(|g| g.to_string()),
            "result": payload_json(&outcome.payload),
            "notes": outcome.notes,
        });
        let _ = writeln!(out, "{envelope}");
        return;
    }
    let header = !cli.quiet && !matches!(outcome.payload, Payload::Geometry { .. });
    if header {
        if let Some(g) = outcome.geometry {
            let _ = writeln!(out, "geometry: {g}");
        }
    }
    match &outcome.payload {
        Payload::Set { description } => {
            if cli.quiet {
                let _ = writeln!(out, "{description}");
            } else {
                let _ = writeln!(out, "set: {description}");
            }
        }
        Payload::Members { members } => {
            let words: Vec<String> = members.iter().map(|m| m.to_string()).collect();
            let _ = writeln!(out, "{}", words.join(" "));
        }
        Payload::Membership { value } => {
            let _ = writeln!(out, "{value}");
        }
        Payload::Geometry { value } => {
            let _ = writeln!(out, "{value}");
        }
        Payload::Reversal { report } => {
            let _ = writeln!(out, "degree -1 realized: {}", report.has_degree_minus_one);
            let _ = writeln!(
                out,
                "orientation-reversing self-homeomorphism: {}",
                report.has_orientation_reversing_homeo
            );
            let _ = writeln!(
                out,
                "every degree -1 map homotopic to such a homeomorphism: {}",
                report.every_deg_minus_one_homotopic_to_homeo
            );
        }
    }
    if !cli.quiet {
        for note in &outcome.notes {
            let _ = writeln!(out, "note: {note}");
        }
    }
}

fn emit_err(cli: &Cli, failure: &Failure, out: &mut dyn Write, err: &mut dyn Write) {
    if cli.json {
        let diagnostics: Vec<serde_json::Value> = failure
            .diagnostics
            .iter()
            .map(|d| {
                json!({
                    "begin": d.span.begin,
                    "end": d.span.end,
                    "message": d.message,
                })
            })
            .collect();
        let envelope = json!({
            "status": "error",
            "query": query_json(&cli.command),
            "error": {
                "message": failure.message,
                "diagnostics": diagnostics,
            },
        });
        let _ = writeln!(out, "{envelope}");
    }
    if failure.diagnostics.is_empty() {
        let _ = writeln!(err, "error: {}", failure.message);
        return;
    }
    let input = failure.input.as_deref().unwrap_or("");
    for d in &failure.diagnostics {
        let _ = write!(err, "{}", diagnostic_block(input, d));
    }
}

/// A headline, the offending line, and a caret underline. Spans are byte
/// offsets on char boundaries; the underline pads by chars so it stays
/// aligned for non-ASCII input.
fn diagnostic_block(input: &str, d: &Diagnostic) -> String {
    if input.contains('\n') || input.is_empty() {
        return format!("error: {d}\n");
    }
    let begin = d.span.begin.min(input.len());
    let end = d.span.end.clamp(begin, input.len());
    let pad = input[..begin].chars().count();
    let width = input[begin..end].chars().count().max(1);
    format!(
        "error: {}\n  {}\n  {}{}\n",
        d.message,
        input,
        " ".repeat(pad),
        "^".repeat(width)
    )
}

fn query_json(cmd: &Cmd) -> serde_json::Value {
    match cmd {
        Cmd::Describe { description } => json!({"command": "describe", "input": description}),
        Cmd::List { description, from, to } => {
            json!({"command": "list", "input": description, "from": from, "to": to})
        }
        Cmd::Contains { description, degree } => {
            json!({"command": "contains", "input": description, "degree": degree})
        }
        Cmd::Classify { description } => json!({"command": "classify", "input": description}),
        Cmd::MinusOne { description } => json!({"command": "minus-one", "input": description}),
        Cmd::LensReversal { p, q } => json!({"command": "lens-reversal", "p": p, "q": q}),
    }
}

fn payload_json(payload: &Payload) -> serde_json::Value {
    match payload {
        Payload::Set { description } => json!({"kind": "set", "description": description}),
        Payload::Members { members } => json!({"kind": "members", "members": members}),
        Payload::Membership { value } => json!({"kind": "membership", "value": value.to_string()}),
        Payload::Geometry { value } => json!({"kind": "geometry", "value": value.to_string()}),
        Payload::Reversal { report } => json!({
            "kind": "reversal",
            "has_degree_minus_one": report.has_degree_minus_one,
            "has_orientation_reversing_homeo": report.has_orientation_reversing_homeo,
            "every_deg_minus_one_homotopic_to_homeo": report.every_deg_minus_one_homotopic_to_homeo,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn capture(args: &[&str]) -> (u8, String, String) {
        let argv: Vec<OsString> = std::iter::once("selfmap")
            .chain(args.iter().copied())
            .map(OsString::from)
            .collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn describe_reports_geometry_and_set() {
        let (code, out, err) = capture(&["describe", "SF(o2; 1/5,1/5,-2/5,1/7,2/7,-3/7)"]);
        assert_eq!(code, 0);
        assert!(err.is_empty());
        assert_eq!(out, "geometry: H2xE1\nset: 35Z + {1, 11, 16}\n");
    }

    #[test]
    fn quiet_strips_everything_but_the_answer() {
        let (code, out, _) = capture(&["--quiet", "describe", "SF(o2; 1/5,1/5,-2/5,1/7,2/7,-3/7)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "35Z + {1, 11, 16}\n");
    }

    #[test]
    fn negative_degree_needs_the_separator() {
        let (code, out, _) = capture(&["contains", "TB[2,3;1,2]", "--", "-1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().last().unwrap(), "false");
        let (code, _, err) = capture(&["contains", "TB[2,3;1,2]", "-1"]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
    }

    #[test]
    fn parse_diagnostics_carry_carets() {
        let (code, out, err) = capture(&["describe", "L(6,2)"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("L(6,2)"));
        assert!(err.contains("^"));
    }

    #[test]
    fn band_listing_is_unsupported_not_fatal() {
        let (code, _, err) = capture(&["list", "SF(o2; 1/5,1/5)", "--from", "-5", "--to", "5"]);
        assert_eq!(code, 2);
        assert!(err.contains("enumeration"));
    }

    #[test]
    fn oversized_ranges_are_rejected() {
        let (code, _, err) = capture(&[
            "list",
            "L(5,1)",
            "--from",
            "0",
            "--to",
            "999999999999",
        ]);
        assert_eq!(code, 1);
        assert!(err.contains("cap"));
    }

    #[test]
    fn with_zero_extends_answers() {
        let (_, out, _) = capture(&["--quiet", "describe", "--with-zero", "TSB[0,1;1,-2]"]);
        assert_eq!(out, "{ (2l+1)^2 : l in Z } \u{222a} {0}\n");
        let (_, out, _) = capture(&["contains", "--with-zero", "TSB[0,1;1,-2]", "0"]);
        assert!(out.ends_with("true\n"));
        let (_, out, _) = capture(&[
            "--quiet",
            "list",
            "--with-zero",
            "TSB[0,1;1,-2]",
            "--from",
            "-2",
            "--to",
            "10",
        ]);
        assert_eq!(out, "0 1 9\n");
    }

    #[test]
    fn json_envelope_is_well_formed() {
        let (code, out, _) = capture(&["--json", "list", "TB[2,1;1,1]", "--from", "1", "--to", "20"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "ok");
        assert_eq!(v["geometry"], "Sol");
        assert_eq!(v["result"]["kind"], "members");
        let members: Vec<i64> = v["result"]["members"]
            .as_array()
            .unwrap()
            .iter()
            .map(|m| m.as_i64().unwrap())
            .collect();
        assert_eq!(members, vec![1, 4, 5, 9, 11, 16, 19, 20]);
    }

    #[test]
    fn json_errors_keep_the_envelope_on_stdout() {
        let (code, out, err) = capture(&["--json", "describe", "L(6,2)"]);
        assert_eq!(code, 1);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "error");
        assert!(v["error"]["diagnostics"].as_array().unwrap().len() >= 1);
        assert!(err.contains("^"));
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("minus-one"));
    }
}
