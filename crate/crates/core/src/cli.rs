//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for invalid input (bad class, non-forward
//! class, missing bounds, unparsable arguments), 3 when one of the internal
//! self-checks fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{SurfaceModel, SymplecticClass};
use crate::packing::{critical_capacities, BallConfig};
use crate::rational::{format_rational, int, parse_rational_list};
use crate::spheres::{enumerate_candidates, ClassCatalog, EnumerationBounds, Floor, SphereClassSet};
use crate::stability::{certify, max_stable_level, segment_walls, StabilityCertificate, StabilityVerdict};
use crate::strata::{enumerate_admissible, StratificationIndex};
use crate::wire;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "symstab", version, about = "Sphere classes, walls and stability ranges on rational surfaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, env = "SYMSTAB_FORMAT", default_value = "text")]
    pub format: Format,

    /// JSON object of flag values; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct BoundArgs {
    /// Lowest square to consider (required for blowup:9).
    #[arg(long, allow_hyphen_values = true)]
    pub square_min: Option<i64>,

    /// Coefficient box: a radius `R` or per-coordinate `lo:hi,lo:hi,...`.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub coefficient_box: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice data of a surface.
    Surface {
        /// `product` or `blowup:k` with 0 <= k <= 9
        #[arg(long)]
        surface: String,
    },
    /// All adjunction classes of one square.
    Enumerate {
        /// `product` or `blowup:k` with 0 <= k <= 9
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        square: i64,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Negative sphere-class set of a class.
    Sets {
        /// `product` or `blowup:k` with 0 <= k <= 9
        #[arg(long)]
        surface: String,
        /// Areas, e.g. `5/2,1` (product: B then F; blow-ups: H then E_i).
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Square floor `n`, or `inf` for the derived floor.
        #[arg(long, default_value = "inf")]
        floor: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Symmetric difference of two sets, from classes or from `sets` JSON files.
    Diff {
        /// `product` or `blowup:k` with 0 <= k <= 9
        #[arg(long)]
        surface: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        #[arg(long, default_value = "inf")]
        floor: String,
        #[arg(long, conflicts_with_all = ["surface", "u", "v"], requires = "right")]
        left: Option<PathBuf>,
        #[arg(long, requires = "left")]
        right: Option<PathBuf>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Admissible sets of codimension below a level.
    Strata {
        /// `product` or `blowup:k` with 0 <= k <= 9
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Even level `2n >= 2`.
        #[arg(long)]
        level: i64,
        /// Optional second class to compare against.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Stability verdict between two classes.
    Stability {
        /// `product` or `blowup:k` with 0 <= k <= 9
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Also build and check the wall-crossing certificate.
        #[arg(long)]
        certify: bool,
        /// Include the walls met by the segment.
        #[arg(long)]
        emit_walls: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Wall-crossing certificate between two classes.
    Certify {
        /// `product` or `blowup:k` with 0 <= k <= 9
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long)]
        emit_walls: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Critical capacities of balls along a ray of weights.
    Capacities {
        /// `product` or `blowup:k` with 0 <= k <= 9
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        /// Number of balls; defaults to the number of weights.
        #[arg(long)]
        balls: Option<usize>,
        /// Weights `w_1,..,w_m`; defaults to all ones.
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        EXIT_INTERNAL
    } else {
        EXIT_INVALID
    }
}

/// Appends `--key value` for every config entry not already on the command line.
fn merge_config(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(pos) = args.iter().position(|a| a == "--config") else {
        return Ok(args);
    };
    let path = args
        .get(pos + 1)
        .ok_or_else(|| Error::InvalidArgument("--config needs a file".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.to_string_lossy())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("config must be a JSON object".into()))?;
    let mut extra = Vec::new();
    for (key, v) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        if args.iter().any(|a| *a == *flag) {
            continue;
        }
        match v {
            Value::Bool(true) => extra.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => extra.extend([flag.into(), s.into()]),
            Value::Number(n) => extra.extend([flag.into(), n.to_string().into()]),
            Value::Array(items) => {
                let joined: Vec<String> = items
                    .iter()
                    .map(|x| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string()))
                    .collect();
                extra.extend([flag.into(), joined.join(",").into()]);
            }
            Value::Object(_) => return Err(Error::Parse(format!("config value for {key} must be a scalar or list"))),
        }
    }
    args.extend(extra);
    Ok(args)
}

/// Parses and runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => return failure(&e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    match execute(&cli) {
        Ok((value, text)) => Outcome {
            code: EXIT_OK,
            stdout: match cli.format {
                Format::Json => wire::to_text(&value),
                Format::Text => text,
            },
            stderr: String::new(),
        },
        Err(e) => failure(&e),
    }
}

fn failure(e: &Error) -> Outcome {
    Outcome {
        code: exit_code(e),
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

fn parse_bounds(surface: &SurfaceModel, b: &BoundArgs) -> Result<EnumerationBounds> {
    let coefficient_box = match &b.coefficient_box {
        None => None,
        Some(text) => {
            let t = text.trim();
            if let Ok(r) = t.parse::<i64>() {
                Some(vec![(-r, r); surface.rank()])
            } else {
                let parsed = t
                    .split(',')
                    .map(|pair| {
                        let (lo, hi) = pair
                            .split_once(':')
                            .ok_or_else(|| Error::Parse(format!("box entry {pair:?} is not lo:hi")))?;
                        let p = |x: &str| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad box bound {x:?}")));
                        Ok((p(lo)?, p(hi)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(parsed)
            }
        }
    };
    let bounds = EnumerationBounds {
        square_min: b.square_min,
        coefficient_box,
    };
    bounds.validate(surface)?;
    Ok(bounds)
}

fn parse_floor(text: &str) -> Result<Floor> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("unbounded") {
        return Ok(Floor::Unbounded);
    }
    t.parse::<i64>()
        .map(Floor::Finite)
        .map_err(|_| Error::Parse(format!("floor must be an integer or inf, got {text:?}")))
}

fn parse_class(surface: &SurfaceModel, text: &str) -> Result<SymplecticClass> {
    SymplecticClass::from_areas(surface, &parse_rational_list(text)?)
}

fn catalog_for(surface: &str, bounds: &BoundArgs) -> Result<ClassCatalog> {
    let s = wire::parse_surface(surface)?;
    ClassCatalog::new(s, parse_bounds(&s, bounds)?)
}

fn header(value: &mut Value, command: &str, surface: &SurfaceModel) {
    let obj = value.as_object_mut().expect("object");
    obj.insert("schema".into(), json!(wire::SCHEMA));
    obj.insert("command".into(), json!(command));
    obj.insert("surface".into(), wire::surface_json(surface));
}

fn set_text(out: &mut String, label: &str, set: &SphereClassSet) {
    let _ = writeln!(out, "{label} ({} classes, squares >= -{}):", set.len(), set.square_floor);
    for a in &set.classes {
        let _ = writeln!(out, "  {}  [square {}]", set.surface.format_class(a), set.surface.pair(a, a).unwrap_or_default());
    }
}

fn verdict_text(out: &mut String, v: &StabilityVerdict) {
    let _ = writeln!(out, "verdict: {}", wire::mode_text(v.mode));
    match v.range {
        Some((a, b)) => {
            let _ = writeln!(out, "range: pi_i isomorphic for {a} <= i <= {b}");
        }
        None if v.mode == crate::stability::StabilityMode::Full => {
            let _ = writeln!(out, "range: all i > 0");
        }
        None => {
            let _ = writeln!(out, "range: empty");
        }
    }
    let _ = writeln!(out, "pi_0 equal: {}", v.pi0_equal);
    let _ = writeln!(out, "certification: {}", v.certification_tier.as_str());
    let _ = writeln!(out, "compared down to square -{} ({} differing classes)", v.compared_floor, v.difference_size);
    for j in &v.justification {
        let _ = writeln!(out, "  - {j}");
    }
}

fn certificate_text(out: &mut String, c: &StabilityCertificate) {
    let s = &c.surface;
    if let Some(p) = &c.perturbation {
        let _ = writeln!(
            out,
            "perturbed start: {} (epsilon {}, coordinate {}, sign {})",
            s.format_areas(&p.point),
            format_rational(&p.epsilon),
            p.basis_index,
            p.sign
        );
    }
    let _ = writeln!(out, "walls ({}, generic: {}):", c.walls.len(), c.generic);
    for w in &c.walls {
        let _ = writeln!(out, "  {}", w.describe(s));
    }
    let _ = writeln!(out, "samples:");
    for (i, x) in c.samples.iter().enumerate() {
        let _ = writeln!(out, "  u_{i} = {}", s.format_areas(x));
    }
    for r in &c.chain {
        let names: Vec<String> = r.changed.iter().map(|a| s.format_class(a)).collect();
        let _ = writeln!(out, "  S(u_{}) {:?} S(u_{}) via {}", r.from, r.relation, r.to, names.join(", "));
    }
}

fn strata_text(out: &mut String, idx: &StratificationIndex) {
    let _ = writeln!(out, "level {}: {} strata below codimension {}", idx.level, idx.strata.len(), idx.level);
    for st in &idx.strata {
        let names: Vec<String> = st.classes.iter().map(|a| idx.surface.format_class(a)).collect();
        let label = if names.is_empty() { "(open stratum)".to_string() } else { names.join(", ") };
        let _ = writeln!(out, "  codim {}: {label}", st.codim);
    }
    let _ = writeln!(out, "residual: codimension >= {}", idx.residual_codim);
    let _ = writeln!(out, "certification: {}", idx.certification.as_str());
}

fn load_set(path: &PathBuf) -> Result<SphereClassSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    wire::set_from_json(&v)
}

fn truncate(set: &SphereClassSet, floor: i64) -> SphereClassSet {
    let mut out = set.clone();
    out.square_floor = floor;
    out.classes.retain(|a| set.surface.pair(a, a).unwrap_or(0) >= -floor);
    out.uncertified.clear();
    out.certification = crate::spheres::Certification::Candidate;
    out
}

/// Set difference of two stored sets, compared down to the smaller floor.
pub fn diff_sets(left: &SphereClassSet, right: &SphereClassSet) -> Result<(SphereClassSet, SphereClassSet)> {
    if left.surface != right.surface {
        return Err(Error::SurfaceMismatch(format!("{} vs {}", left.surface, right.surface)));
    }
    let floor = left.square_floor.min(right.square_floor);
    let (l, r) = (truncate(left, floor), truncate(right, floor));
    let mut only_l = l.clone();
    only_l.classes.retain(|a| !r.contains(a));
    let mut only_r = r.clone();
    only_r.classes.retain(|a| !l.contains(a));
    Ok((only_l, only_r))
}

fn execute(cli: &Cli) -> Result<(Value, String)> {
    let mut text = String::new();
    match &cli.command {
        Command::Surface { surface } => {
            let s = wire::parse_surface(surface)?;
            let v = wire::surface_report(&s);
            let _ = writeln!(text, "surface: {s}");
            let _ = writeln!(text, "basis: {}", s.basis_names().join(", "));
            let _ = writeln!(text, "rank: {}, Euler characteristic: {}", s.rank(), s.euler_characteristic());
            let _ = writeln!(text, "canonical class: {} (square {})", s.format_class(&s.canonical()), s.canonical_square());
            Ok((v, text))
        }
        Command::Enumerate { surface, square, bounds } => {
            let s = wire::parse_surface(surface)?;
            let b = parse_bounds(&s, bounds)?;
            let classes = enumerate_candidates(&s, *square, &b)?;
            let complete = !(s.canonical_square() == 0 && b.coefficient_box.is_some());
            let v = wire::class_list_report(&s, *square, &classes, complete);
            let _ = writeln!(text, "{} classes of square {square} on {s}:", classes.len());
            for a in &classes {
                let _ = writeln!(text, "  {}", s.format_class(a));
            }
            Ok((v, text))
        }
        Command::Sets { surface, u, floor, bounds } => {
            let cat = catalog_for(surface, bounds)?;
            let s = *cat.surface();
            let u = parse_class(&s, u)?;
            let n = cat.resolve_floor(parse_floor(floor)?, &[&u])?;
            let set = cat.spherical_set(&u, n)?.with_cremona_certification();
            let v = wire::sets_report(&set, &u);
            let _ = writeln!(text, "surface: {s}, u = {}", s.format_areas(&u));
            set_text(&mut text, "S_u", &set);
            let _ = writeln!(text, "certification: {}", set.certification.as_str());
            Ok((v, text))
        }
        Command::Diff { surface, u, v, floor, left, right, bounds } => {
            let (only_u, only_v) = if let (Some(l), Some(r)) = (left, right) {
                diff_sets(&load_set(l)?, &load_set(r)?)?
            } else {
                let (surface, u, v) = match (surface, u, v) {
                    (Some(s), Some(u), Some(v)) => (s, u, v),
                    _ => {
                        return Err(Error::InvalidArgument(
                            "diff needs --surface, --u and --v, or --left and --right".into(),
                        ))
                    }
                };
                let cat = catalog_for(surface, bounds)?;
                let s = *cat.surface();
                let (u, v) = (parse_class(&s, u)?, parse_class(&s, v)?);
                cat.symmetric_difference(&u, &v, parse_floor(floor)?)?
            };
            let value = wire::difference_report(&only_u, &only_v);
            set_text(&mut text, "only in S_u", &only_u);
            set_text(&mut text, "only in S_v", &only_v);
            Ok((value, text))
        }
        Command::Strata { surface, u, level, v, bounds } => {
            let cat = catalog_for(surface, bounds)?;
            let s = *cat.surface();
            let uu = parse_class(&s, u)?;
            let idx = enumerate_admissible(&cat, &uu, *level)?;
            let mut value = json!({"u": wire::areas_json(&s, &uu), "index": wire::strata_json(&idx)});
            strata_text(&mut text, &idx);
            if let Some(v) = v {
                let vv = parse_class(&s, v)?;
                let other = enumerate_admissible(&cat, &vv, *level)?;
                let same = idx.same_labels(&other);
                let obj = value.as_object_mut().expect("object");
                obj.insert("v".into(), wire::areas_json(&s, &vv));
                obj.insert("other".into(), wire::strata_json(&other));
                obj.insert("same_labels".into(), json!(same));
                let _ = writeln!(text, "same labels for v = {}: {same}", s.format_areas(&vv));
            }
            header(&mut value, "strata", &s);
            Ok((value, text))
        }
        Command::Stability { surface, u, v, certify: want_certificate, emit_walls, bounds } => {
            let cat = catalog_for(surface, bounds)?;
            let s = *cat.surface();
            let (uu, vv) = (parse_class(&s, u)?, parse_class(&s, v)?);
            let verdict = max_stable_level(&cat, &uu, &vv)?;
            let _ = writeln!(text, "u = {}, v = {}", s.format_areas(&uu), s.format_areas(&vv));
            verdict_text(&mut text, &verdict);
            let mut value = json!({
                "u": wire::areas_json(&s, &uu),
                "v": wire::areas_json(&s, &vv),
                "verdict": wire::verdict_json(&verdict),
            });
            if *emit_walls {
                let walls = segment_walls(&cat, &uu, &vv)?;
                value.as_object_mut().expect("object").insert("walls".into(), wire::walls_json(&s, &walls));
                let _ = writeln!(text, "walls:");
                for w in &walls {
                    let _ = writeln!(text, "  {}", w.describe(&s));
                }
            }
            if *want_certificate {
                let cert = certify(&cat, &uu, &vv)?;
                certificate_text(&mut text, &cert);
                value.as_object_mut().expect("object").insert("certificate".into(), wire::certificate_json(&cert));
            }
            header(&mut value, "stability", &s);
            Ok((value, text))
        }
        Command::Certify { surface, u, v, emit_walls: _, bounds } => {
            let cat = catalog_for(surface, bounds)?;
            let s = *cat.surface();
            let (uu, vv) = (parse_class(&s, u)?, parse_class(&s, v)?);
            let cert = certify(&cat, &uu, &vv)?;
            let _ = writeln!(text, "u = {}, v = {}", s.format_areas(&uu), s.format_areas(&vv));
            certificate_text(&mut text, &cert);
            verdict_text(&mut text, &cert.verdict);
            let mut value = json!({"certificate": wire::certificate_json(&cert)});
            header(&mut value, "certify", &s);
            Ok((value, text))
        }
        Command::Capacities { surface, u, balls, weights, bounds } => {
            let s = wire::parse_surface(surface)?;
            let b = parse_bounds(&s, bounds)?;
            let uu = parse_class(&s, u)?;
            let w = match (weights, balls) {
                (Some(w), _) => parse_rational_list(w)?,
                (None, Some(m)) => vec![int(1); *m],
                (None, None) => vec![int(1)],
            };
            if let Some(m) = balls {
                if *m != w.len() {
                    return Err(Error::InvalidArgument(format!("--balls {m} but {} weights given", w.len())));
                }
            }
            let config = BallConfig::new(s, w, true)?;
            let profile = critical_capacities(&s, &uu, &config, &b)?;
            let value = wire::profile_json(&profile);
            let t = &profile.blown_up;
            let _ = writeln!(
                text,
                "c_max = {}{}",
                if profile.c_max_exact { "" } else { "sqrt " },
                format_rational(if profile.c_max_exact { &profile.c_max } else { &profile.c_max_squared })
            );
            let _ = writeln!(text, "critical capacities ({}):", profile.critical_values.len());
            for cv in &profile.critical_values {
                let names: Vec<String> = cv.wall_classes.iter().map(|(a, _)| t.format_class(a)).collect();
                let _ = writeln!(text, "  {}  [{}]", format_rational(&cv.capacity), names.join(", "));
            }
            let _ = writeln!(text, "intervals:");
            for i in &profile.intervals {
                let upper = i.upper.as_ref().map(format_rational).unwrap_or_else(|| "c_max".into());
                let _ = writeln!(
                    text,
                    "  ({}, {upper}): stable = {}, {}",
                    format_rational(&i.lower),
                    i.stable,
                    i.certification.as_str()
                );
            }
            for w in &profile.warnings {
                let _ = writeln!(text, "note: {w}");
            }
            Ok((value, text))
        }
    }
}
