//! Command implementations behind the `dendron` binary. Each verb calls one
//! library function and serializes its result.

use std::path::Path;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dendron::face::{enumerate_faces, FaceKind};
use dendron::json::{self as io, InputError};
use dendron::necklace::{necklace_map_check, necklace_map_direct, Necklace};
use dendron::nw::NwLevel;
use dendron::presheaf::{horn_segal_check, segal_check, DendroidalSet, Presheaf};
use dendron::sset::SimplicialSet;
use dendron::tau::tau_operations;
use dendron::w::{closed_form_mapping_space, mapping_space, ClosedKind, Signature};
use dendron::{factorize, Tree, TreeMap};

pub const DEFAULT_BOUND: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "dendron", version, about = "Trees, necklaces and W_! at small size")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Parse a tree (DSL or tree JSON, inline or a file) and print it back.
    Parse {
        tree: String,
    },
    /// Validate a map and list its classes.
    Map(MapArgs),
    /// Classes of a map.
    Classify(MapArgs),
    /// The iso, degeneracy, inner face, outer face factorization.
    Factorize(MapArgs),
    /// Faces of a tree.
    Faces {
        tree: String,
        #[arg(long, default_value = "all")]
        kind: String,
    },
    /// Graft `upper` onto the leaf `at` of `lower`.
    Graft {
        #[arg(long)]
        lower: String,
        #[arg(long)]
        upper: String,
        #[arg(long)]
        at: String,
    },
    /// Necklace operations.
    Necklace {
        #[command(subcommand)]
        op: NecklaceOp,
    },
    /// Strings of NW(T) or NW(n) over a source tree.
    Nw {
        #[command(flatten)]
        base: NecklaceArgs,
        #[arg(long)]
        source: String,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    /// Mapping spaces of W_!(X).
    W {
        #[command(subcommand)]
        op: WOp,
    },
    /// Operations of the homotopy operad, by bounded search.
    Tau {
        #[arg(long)]
        presheaf: String,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Strict Segal condition on all trees up to the bound.
    Segal {
        #[arg(long)]
        presheaf: String,
        #[arg(long)]
        bound: Option<usize>,
        /// Use single-edge inner horns instead of Segal cores.
        #[arg(long)]
        horn: bool,
    },
    /// Re-emit a tree, map, necklace or simplicial set file.
    Export {
        input: String,
    },
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// Map JSON file; otherwise give --source, --target and --map.
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub source: Option<String>,
    #[arg(long)]
    pub target: Option<String>,
    /// `a:x,b:y,...`
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Args, Debug)]
pub struct NecklaceArgs {
    /// Necklace JSON file, or a tree (then --joints applies).
    #[arg(long)]
    pub necklace: Option<String>,
    #[arg(long)]
    pub tree: Option<String>,
    /// Comma-separated joint edges.
    #[arg(long)]
    pub joints: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum NecklaceOp {
    Beads {
        #[command(flatten)]
        n: NecklaceArgs,
    },
    /// Whether a face of the carrier, written in its edge names, lies in the necklace.
    Member {
        #[command(flatten)]
        n: NecklaceArgs,
        #[arg(long)]
        face: String,
    },
    /// Restrict to an outer face written in the edge names of the carrier.
    Restrict {
        #[command(flatten)]
        n: NecklaceArgs,
        #[arg(long)]
        face: String,
    },
    /// Whether a carrier map is a map of necklaces.
    MapCheck {
        #[command(flatten)]
        n: NecklaceArgs,
        #[arg(long)]
        target: String,
        #[arg(long)]
        target_joints: Option<String>,
        #[arg(long)]
        map: String,
    },
}

#[derive(Args, Debug)]
pub struct SpaceArgs {
    #[arg(long)]
    pub presheaf: String,
    /// `x1,...,xn;x0` or `leaf-root`.
    #[arg(long)]
    pub signature: String,
    /// Keep cells of at most this dimension.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub bound: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum WOp {
    Space(SpaceArgs),
    /// Non-degenerate cells per dimension.
    Count(SpaceArgs),
    /// The closed form for a representable, boundary or horn (`horn:e,f`).
    Closed {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        tree: String,
        #[arg(long)]
        signature: String,
        #[arg(long)]
        dim: Option<usize>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { kind: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage(m) => json!({"error": {"kind": "usage", "message": m}}),
            CliError::Domain { kind, message } => json!({"error": {"kind": kind, "message": message}}),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Domain { kind: e.kind(), message: e.to_string() }
    }
}

fn domain(kind: &'static str, message: impl Into<String>) -> CliError {
    CliError::Domain { kind, message: message.into() }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

pub enum Output {
    Json(Value),
    Dot(String),
}

impl Output {
    pub fn render(&self) -> String {
        match self {
            Output::Json(v) => format!("{}\n", serde_json::to_string_pretty(v).expect("values serialize")),
            Output::Dot(s) => s.clone(),
        }
    }
}

/// Contents of `arg` when it names a readable file.
pub fn read_file(arg: &str) -> Option<String> {
    let p = Path::new(arg);
    if p.is_file() {
        std::fs::read_to_string(p).ok()
    } else {
        None
    }
}

/// `--bound`, else `DENDRON_MAX_EDGES`, else 8.
pub fn bound_or_default(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var("DENDRON_MAX_EDGES") {
        Ok(v) => v.trim().parse().map_err(|_| usage(format!("DENDRON_MAX_EDGES must be a number, got `{v}`"))),
        Err(_) => Ok(DEFAULT_BOUND),
    }
}

fn tree(arg: &str) -> Result<Arc<Tree>, CliError> {
    Ok(Arc::new(io::tree_arg(arg, &read_file)?))
}

fn tree_value(t: &Tree) -> Value {
    let (c, ren) = t.canonical_form();
    json!({
        "tree": t.print(),
        "json": io::tree_to_json(t),
        "root": t.name(t.root()),
        "leaves": io::edge_names(t, t.leaf_mask()),
        "inner": io::edge_names(t, t.inner_mask()),
        "edges": t.len(),
        "canonical": {"tree": c.print(), "renaming": ren.into_iter().collect::<std::collections::BTreeMap<_, _>>()},
    })
}

fn tree_output(t: &Tree, format: Format) -> Output {
    match format {
        Format::Json => Output::Json(tree_value(t)),
        Format::Dot => Output::Dot(io::tree_to_dot(t)),
    }
}

fn json_only(format: Format, v: Value) -> Result<Output, CliError> {
    match format {
        Format::Json => Ok(Output::Json(v)),
        Format::Dot => Err(usage("this verb has no DOT form")),
    }
}

pub fn load_map(a: &MapArgs) -> Result<TreeMap, CliError> {
    if let Some(f) = &a.input {
        let body = read_file(f).ok_or_else(|| domain("input", format!("cannot read `{f}`")))?;
        let j: io::MapJson = serde_json::from_str(&body).map_err(InputError::from)?;
        return Ok(io::map_from_json(&j)?);
    }
    let (Some(s), Some(t), Some(m)) = (&a.source, &a.target, &a.map) else {
        return Err(usage("give --input, or all of --source, --target and --map"));
    };
    let pairs = io::parse_assignment(m)?;
    Ok(TreeMap::from_names(tree(s)?, tree(t)?, &pairs).map_err(InputError::from)?)
}

pub fn load_necklace(a: &NecklaceArgs) -> Result<Necklace, CliError> {
    match (&a.necklace, &a.tree) {
        (Some(f), None) => {
            let body = read_file(f).ok_or_else(|| domain("input", format!("cannot read `{f}`")))?;
            let j: io::NecklaceJson = serde_json::from_str(&body).map_err(InputError::from)?;
            Ok(io::necklace_from_json(&j)?)
        }
        (None, Some(t)) => {
            let t = tree(t)?;
            let d = io::parse_edges(&t, a.joints.as_deref().unwrap_or(""))?;
            Ok(Necklace::new(t, d).map_err(InputError::from)?)
        }
        _ => Err(usage("give exactly one of --necklace and --tree")),
    }
}

fn necklace_value(n: &Necklace) -> Value {
    let t = &n.carrier;
    let beads: Vec<String> = n.beads().iter().map(|b| t.face_tree(b).0.print()).collect();
    json!({
        "necklace": io::necklace_to_json(n),
        "joint_tree": n.joint_face().source().print(),
        "beads": beads,
    })
}

fn face_arg(t: &Tree, text: &str) -> Result<dendron::Face, CliError> {
    let sub = io::tree_arg(text, &read_file)?;
    io::face_from_tree(t, &sub).ok_or_else(|| domain("face", format!("`{}` is not a face of `{}`", sub.print(), t.print())))
}

fn presheaf(spec: &str) -> Result<Presheaf, CliError> {
    Ok(io::presheaf_spec(spec, &read_file)?)
}

/// Carrier bound for normal forms; a subpresheaf of `Ω[U]` never needs more than `|U|` edges.
fn space_bound(x: &Presheaf, flag: Option<usize>) -> Result<usize, CliError> {
    let b = bound_or_default(flag)?;
    Ok(match x.base() {
        Some(u) if flag.is_none() => b.min(u.len()),
        _ => b,
    })
}

pub fn space(a: &SpaceArgs) -> Result<SimplicialSet, CliError> {
    let x = presheaf(&a.presheaf)?;
    let sig = io::parse_signature(&x, &a.signature)?;
    let bound = space_bound(&x, a.bound)?;
    let s = mapping_space(&x, &sig, bound).map_err(|e| domain("space", e))?;
    Ok(truncate(s, a.dim))
}

fn truncate(s: SimplicialSet, dim: Option<usize>) -> SimplicialSet {
    match dim {
        Some(d) => {
            let dims = s.dims.clone();
            s.subcomplex(|c| dims[c] <= d)
        }
        None => s,
    }
}

fn sset_output(s: &SimplicialSet, format: Format) -> Output {
    match format {
        Format::Json => Output::Json(s.to_json()),
        Format::Dot => Output::Dot(s.to_dot()),
    }
}

pub fn closed(kind: &str, u: &str, signature: &str) -> Result<SimplicialSet, CliError> {
    let u = tree(u)?;
    let kind = match kind {
        "rep" | "representable" => ClosedKind::Representable,
        "boundary" => ClosedKind::Boundary,
        k => match k.strip_prefix("horn:") {
            Some(es) => {
                let e = io::parse_edges(&u, es)?;
                if e == 0 || e & !u.inner_mask() != 0 {
                    return Err(domain("input", "a horn needs a non-empty set of inner edges"));
                }
                ClosedKind::Horn(e)
            }
            None => return Err(usage(format!("unknown kind `{k}`"))),
        },
    };
    let x = Presheaf::representable(u.clone());
    let sig = io::parse_signature(&x, signature)?;
    let sig = Signature { leaves: sig.leaves.iter().map(|d| d.map[0]).collect(), root: sig.root.map[0] };
    Ok(closed_form_mapping_space(kind, &u, &sig))
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let f = cli.format;
    match &cli.verb {
        Verb::Parse { tree: t } => Ok(tree_output(&*tree(t)?, f)),
        Verb::Map(a) => {
            let m = load_map(a)?;
            json_only(f, json!({"map": io::map_to_json(&m), "classes": io::class_to_json(&m.classify())}))
        }
        Verb::Classify(a) => json_only(f, io::class_to_json(&load_map(a)?.classify())),
        Verb::Factorize(a) => {
            let m = load_map(a)?;
            let fz = factorize(&m);
            let mut v = io::factorization_to_json(&fz);
            v["recomposes"] = json!(fz.compose() == m);
            json_only(f, v)
        }
        Verb::Faces { tree: t, kind } => {
            let t = tree(t)?;
            let k = FaceKind::parse(kind).ok_or_else(|| usage(format!("unknown face kind `{kind}`")))?;
            let faces: Vec<Value> = enumerate_faces(&t, k).iter().map(|fc| io::face_to_json(&t, fc)).collect();
            json_only(f, json!({"tree": t.print(), "kind": kind, "faces": faces}))
        }
        Verb::Graft { lower, upper, at } => {
            let g = tree(lower)?.graft(&*tree(upper)?, at).map_err(InputError::from)?;
            Ok(tree_output(&g, f))
        }
        Verb::Necklace { op } => match op {
            NecklaceOp::Beads { n } => json_only(f, necklace_value(&load_necklace(n)?)),
            NecklaceOp::Member { n, face } => {
                let n = load_necklace(n)?;
                let u = face_arg(&n.carrier, face)?;
                json_only(f, json!({"face": io::face_to_json(&n.carrier, &u), "member": n.contains_face(&u)}))
            }
            NecklaceOp::Restrict { n, face } => {
                let n = load_necklace(n)?;
                let u = face_arg(&n.carrier, face)?;
                let (r, _) = n.restrict(&u).map_err(InputError::from)?;
                json_only(f, necklace_value(&r))
            }
            NecklaceOp::MapCheck { n, target, target_joints, map } => {
                let n = load_necklace(n)?;
                let n2 = load_necklace(&NecklaceArgs { necklace: None, tree: Some(target.clone()), joints: target_joints.clone() })?;
                let pairs = io::parse_assignment(map)?;
                let phi = TreeMap::from_names(n.carrier.clone(), n2.carrier.clone(), &pairs).map_err(InputError::from)?;
                let crit = necklace_map_check(&n, &n2, &phi);
                json_only(f, json!({"necklace_map": crit, "criterion": crit, "direct": necklace_map_direct(&n, &n2, &phi)}))
            }
        },
        Verb::Nw { base, source, level } => {
            let n = load_necklace(base)?;
            let s = tree(source)?;
            let joints = if base.joints.is_some() || base.necklace.is_some() { Some(n.joints) } else { None };
            let x = NwLevel::tree(n.carrier.clone(), *level).sibling(joints, *level);
            let strings: Vec<Value> = dendron::map::all_maps(&s, &n.carrier)
                .iter()
                .flat_map(|m| x.over(m))
                .map(|w| serde_json::to_value(w.print()).expect("strings serialize"))
                .collect();
            json_only(f, json!({"count": strings.len(), "level": level, "strings": strings}))
        }
        Verb::W { op } => match op {
            WOp::Space(a) => Ok(sset_output(&space(a)?, f)),
            WOp::Count(a) => json_only(f, json!({"counts": space(a)?.counts()})),
            WOp::Closed { kind, tree: u, signature, dim } => Ok(sset_output(&truncate(closed(kind, u, signature)?, *dim), f)),
        },
        Verb::Tau { presheaf: p, arity, bound } => {
            let x = presheaf(p)?;
            let bound = bound_or_default(*bound)?;
            let r = tau_operations(&x, *arity, bound);
            let classes: Vec<Value> = r
                .classes
                .iter()
                .map(|(sig, n)| json!({"signature": sig.iter().map(|c| x.label(c)).collect::<Vec<_>>(), "classes": n}))
                .collect();
            json_only(f, json!({"arity": arity, "bound": bound, "bounded_search": true, "triples": r.triples, "operations": classes}))
        }
        Verb::Segal { presheaf: p, bound, horn } => {
            let x = presheaf(p)?;
            let bound = bound_or_default(*bound)?;
            let r = if *horn { horn_segal_check(&x, bound) } else { segal_check(&x, bound) };
            json_only(f, serde_json::to_value(r).expect("reports serialize"))
        }
        Verb::Export { input } => export(input, f),
    }
}

/// Re-emit a file: simplicial sets, trees (DSL or JSON), maps and necklaces.
pub fn export(input: &str, f: Format) -> Result<Output, CliError> {
    let body = read_file(input).ok_or_else(|| domain("input", format!("cannot read `{input}`")))?;
    let text = body.trim();
    if !text.starts_with('{') {
        return Ok(tree_output(&io::tree_from_text(text)?, f));
    }
    let v: Value = serde_json::from_str(text).map_err(InputError::from)?;
    if v.get("cells").is_some() {
        let s = SimplicialSet::from_json(&v).map_err(|e| domain("sset", e))?;
        return Ok(sset_output(&s, f));
    }
    if v.get("root").is_some() {
        return Ok(tree_output(&io::tree_from_text(text)?, f));
    }
    if v.get("carrier").is_some() {
        let j: io::NecklaceJson = serde_json::from_value(v).map_err(InputError::from)?;
        return json_only(f, necklace_value(&io::necklace_from_json(&j)?));
    }
    if v.get("assignment").is_some() {
        let j: io::MapJson = serde_json::from_value(v).map_err(InputError::from)?;
        return json_only(f, serde_json::to_value(io::map_to_json(&io::map_from_json(&j)?)).expect("maps serialize"));
    }
    Err(domain("input", "unrecognized JSON document"))
}

/// Parse arguments and run; returns the text for stdout or stderr and the exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> (String, String, i32) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                return (e.to_string(), String::new(), 0);
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            let err = usage(first);
            return (String::new(), Output::Json(err.to_json()).render(), 2);
        }
    };
    match run(&cli) {
        Ok(out) => (out.render(), String::new(), 0),
        Err(e) => (String::new(), Output::Json(e.to_json()).render(), e.exit_code()),
    }
}
