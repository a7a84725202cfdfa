//! `srk`: deterministic JSON reports for C^r element and superspline spaces.
//!
//! Exit status: 0 when the computed property holds, 1 when it fails, 2 on
//! usage or input errors.

use std::io::Read;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use srk::bubble::enumerate_bubble;
use srk::dofs::unisolvency_check;
use srk::extend::{check_a1, check_a2, restriction_onto, verify_witness, witness_k_rd, witness_rd_rs, Witness};
use srk::simplicial::{builtin_mesh, MeshName, Triangulation};
use srk::spaces::{assemble_space, cell_poly, spaces_equal, SpaceKind};
use srk::{ContinuityVector, Rational};

#[derive(Parser)]
#[command(name = "srk", version, about = "Exact C^r finite element and superspline space computations")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog meshes.
    #[command(subcommand)]
    Mesh(MeshCommand),
    /// Bubble weight multi-indices for a face of codimension `s`.
    Bubble {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        r: ContinuityVector,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// DOF count and rank on the reference simplex.
    Unisolvency {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: ContinuityVector,
        #[arg(long)]
        k: usize,
    },
    /// Dimension of a global space on a mesh.
    Dim {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long = "space", default_value = "fe")]
        space_kind: Kind,
    },
    /// Whether the finite element and superspline spaces coincide.
    EqualSpaces {
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// Whether restriction to a subtriangulation is onto.
    Extend {
        #[command(flatten)]
        space: SpaceArgs,
        /// Cell indices of the subtriangulation, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        sub: Vec<usize>,
        #[arg(long = "space", default_value = "spline")]
        kind: Kind,
    },
    /// Evaluate the degree and continuity assumptions.
    Assumptions {
        #[arg(long)]
        r: ContinuityVector,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Build and verify a non-extendable function.
    Counterexample {
        #[arg(long = "case")]
        case: Case,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: ContinuityVector,
        #[arg(long)]
        k: Option<usize>,
        /// Codimension for the `rs` case.
        #[arg(long)]
        s: Option<usize>,
    },
}

#[derive(Subcommand)]
enum MeshCommand {
    /// Print a catalog mesh in the mesh JSON format.
    Builtin {
        #[arg(long)]
        name: MeshName,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "full")]
        part: Part,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    Full,
    Sub,
    /// Cell indices of the subtriangulation in the full mesh.
    SubIndices,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Fe,
    #[value(alias = "superspline")]
    Spline,
}

impl From<Kind> for SpaceKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Fe => SpaceKind::Fe,
            Kind::Spline => SpaceKind::Superspline,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    #[value(name = "k_rd")]
    KRd,
    Rd,
    Rs,
}

#[derive(clap::Args)]
struct SpaceArgs {
    /// Mesh JSON file, or `-` for standard input.
    #[arg(long)]
    mesh: String,
    #[arg(long)]
    r: ContinuityVector,
    #[arg(long)]
    k: usize,
}

/// A usage or input error, reported on stderr with exit status 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

struct Report {
    payload: Map<String, Value>,
    holds: bool,
}

struct Meta {
    command: &'static str,
    parameters: Map<String, Value>,
    mesh_sha256: Option<String>,
    matrix: Option<Value>,
}

impl Meta {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            parameters: Map::new(),
            mesh_sha256: None,
            matrix: None,
        }
    }

    fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    fn into_value(self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), self.command.into());
        m.insert("parameters".into(), Value::Object(self.parameters));
        m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
        if let Some(h) = self.mesh_sha256 {
            m.insert("mesh_sha256".into(), h.into());
        }
        if let Some(x) = self.matrix {
            m.insert("matrix".into(), x);
        }
        Value::Object(m)
    }
}

fn load_mesh(path: &str) -> Result<(Arc<Triangulation>, String), Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))?
    };
    let tri = Triangulation::from_json(&text)?;
    let hash = hex::encode(Sha256::digest(tri.to_json().as_bytes()));
    Ok((Arc::new(tri), hash))
}

fn to_object(v: impl serde::Serialize) -> Map<String, Value> {
    match serde_json::to_value(v).expect("report serializes") {
        Value::Object(m) => m,
        other => Map::from_iter([("result".to_string(), other)]),
    }
}

fn witness_polys(sub: &Triangulation, k: usize, v: &[Rational]) -> Result<Value, Failure> {
    let polys = (0..sub.num_cells())
        .map(|i| Ok(serde_json::to_value(cell_poly(sub, k, v, i)?.to_json())?))
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(Value::Array(polys))
}

fn space_meta(command: &'static str, a: &SpaceArgs, hash: String) -> Meta {
    let mut m = Meta::new(command)
        .param("d", a.r.d())
        .param("r", a.r.as_slice().to_vec())
        .param("k", a.k);
    m.mesh_sha256 = Some(hash);
    m
}

fn run(command: Command) -> Result<(Report, Option<Meta>), Failure> {
    match command {
        Command::Mesh(MeshCommand::Builtin { name, d, part }) => {
            let pair = builtin_mesh(name, d)?;
            let payload = match part {
                Part::Full => to_object(srk::simplicial::MeshJson::from(&pair.full)),
                Part::Sub => to_object(srk::simplicial::MeshJson::from(&pair.sub)),
                Part::SubIndices => Map::from_iter([("sub_indices".to_string(), json!(pair.sub_indices))]),
            };
            Ok((Report { payload, holds: true }, None))
        }
        Command::Bubble { d, s, r, k, n } => {
            let b = enumerate_bubble(d, s, &r, k, n)?;
            let meta = Meta::new("bubble")
                .param("d", d)
                .param("s", s)
                .param("r", r.as_slice().to_vec())
                .param("k", k)
                .param("n", n);
            let mut payload = Map::new();
            payload.insert("dim".into(), b.dim().into());
            payload.insert("indices".into(), json!(b.indices));
            Ok((Report { payload, holds: true }, Some(meta)))
        }
        Command::Unisolvency { d, r, k } => {
            let rep = unisolvency_check(d, &r, k)?;
            let mut meta = Meta::new("unisolvency")
                .param("d", d)
                .param("r", r.as_slice().to_vec())
                .param("k", k);
            meta.matrix = Some(json!({ "rows": rep.dof_count, "cols": rep.dim_pk }));
            let holds = rep.is_unisolvent();
            Ok((Report { payload: to_object(&rep), holds }, Some(meta)))
        }
        Command::Dim { space, space_kind } => {
            let (tri, hash) = load_mesh(&space.mesh)?;
            let kind = SpaceKind::from(space_kind);
            let s = assemble_space(tri, kind, &space.r, space.k)?;
            let stats = s.stats();
            let mut meta = space_meta("dim", &space, hash).param("space", kind.to_string());
            meta.matrix = Some(json!({ "rows": stats.n_constraints, "cols": stats.n_unknowns }));
            let mut payload = Map::new();
            payload.insert("dim".into(), s.dim().into());
            payload.extend(to_object(stats));
            Ok((Report { payload, holds: true }, Some(meta)))
        }
        Command::EqualSpaces { space } => {
            let (tri, hash) = load_mesh(&space.mesh)?;
            let e = assemble_space(tri.clone(), SpaceKind::Fe, &space.r, space.k)?;
            let s = assemble_space(tri, SpaceKind::Superspline, &space.r, space.k)?;
            let equal = spaces_equal(&e, &s)?;
            let mut meta = space_meta("equal-spaces", &space, hash);
            meta.matrix = Some(json!({
                "fe": { "rows": e.stats().n_constraints, "cols": e.stats().n_unknowns },
                "spline": { "rows": s.stats().n_constraints, "cols": s.stats().n_unknowns },
            }));
            let payload = Map::from_iter([
                ("equal".to_string(), json!(equal)),
                ("dim_fe".to_string(), json!(e.dim())),
                ("dim_spline".to_string(), json!(s.dim())),
            ]);
            Ok((Report { payload, holds: equal }, Some(meta)))
        }
        Command::Extend { space, sub, kind } => {
            let (tri, hash) = load_mesh(&space.mesh)?;
            let mut cells = sub.clone();
            cells.sort_unstable();
            cells.dedup();
            let subtri = Arc::new(tri.subtriangulation(&cells)?);
            let kind = SpaceKind::from(kind);
            let v = restriction_onto(tri, subtri.clone(), &space.r, space.k, kind)?;
            let mut meta = space_meta("extend", &space, hash)
                .param("sub", cells)
                .param("space", kind.to_string());
            meta.matrix = Some(json!({
                "full": { "rows": v.full_system.n_constraints, "cols": v.full_system.n_unknowns },
                "sub": { "rows": v.sub_system.n_constraints, "cols": v.sub_system.n_unknowns },
            }));
            let mut payload = to_object(&v);
            if let Some(w) = &v.witness {
                payload.insert("witness".into(), witness_polys(&subtri, space.k, w)?);
            }
            Ok((Report { payload, holds: v.onto }, Some(meta)))
        }
        Command::Assumptions { r, k } => {
            let a2 = check_a2(&r);
            let mut meta = Meta::new("assumptions").param("r", r.as_slice().to_vec());
            let mut payload = Map::new();
            let holds = match k {
                Some(k) => {
                    meta = meta.param("k", k);
                    let a1 = check_a1(&r, k);
                    payload.insert("a1".into(), a1.into());
                    a1
                }
                None => a2,
            };
            payload.insert("a2".into(), a2.into());
            Ok((Report { payload, holds }, Some(meta)))
        }
        Command::Counterexample { case, d, r, k, s } => {
            let w: Witness = match case {
                Case::KRd => witness_k_rd(d, &r, k.unwrap_or(2 * r.top()))?,
                Case::Rd => {
                    if s.is_some_and(|s| s != d) {
                        return Err(Failure("the rd case fixes s = d".into()));
                    }
                    witness_rd_rs(d, d, &r, k.unwrap_or(2 * r.top() + 1))?
                }
                Case::Rs => {
                    let s = s.ok_or_else(|| Failure("the rs case needs --s".into()))?;
                    witness_rd_rs(d, s, &r, k.unwrap_or(2 * r.top() + 1))?
                }
            };
            let u = w.coefficients();
            let rep = verify_witness(&w.pair.full, &w.pair.sub, &r, w.k, SpaceKind::Superspline, &u)?;
            let mesh_json = w.pair.full.to_json();
            let mut meta = Meta::new("counterexample")
                .param(
                    "case",
                    match case {
                        Case::KRd => "k_rd",
                        Case::Rd => "rd",
                        Case::Rs => "rs",
                    },
                )
                .param("d", d)
                .param("r", r.as_slice().to_vec())
                .param("k", w.k);
            if let (Case::Rs, Some(s)) = (case, s) {
                meta = meta.param("s", s);
            }
            meta.mesh_sha256 = Some(hex::encode(Sha256::digest(mesh_json.as_bytes())));
            let mut payload = to_object(&rep);
            payload.insert("mesh".into(), serde_json::from_str(&mesh_json)?);
            payload.insert("sub_indices".into(), json!(w.pair.sub_indices));
            payload.insert(
                "witness".into(),
                Value::Array(
                    w.polys
                        .iter()
                        .map(|p| serde_json::to_value(p.to_json()))
                        .collect::<Result<_, _>>()?,
                ),
            );
            let holds = rep.member_of_sub && !rep.extendable;
            Ok((Report { payload, holds }, Some(meta)))
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let n = match std::env::var("SRK_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .map_err(|_| Failure(format!("SRK_THREADS must be a positive integer, got {v:?}")))?,
        Err(_) => 1,
    };
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| run(cli.command));
    match result {
        Ok((report, meta)) => {
            let mut out = report.payload;
            if let Some(meta) = meta {
                out.insert("meta".into(), meta.into_value());
            }
            let v = Value::Object(out);
            let text = if cli.pretty {
                serde_json::to_string_pretty(&v)
            } else {
                serde_json::to_string(&v)
            }
            .expect("report serializes");
            println!("{text}");
            ExitCode::from(if report.holds { 0 } else { 1 })
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
