use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use cwpoints::construct::{
    collinear_plus_d_expression, collinear_triples, convex_expression, convex_plus_one_expression, grid_gadget,
    ConstructionReport,
};
use cwpoints::expr::{evaluate, parse_expression, validate, CwExpression, Mismatch};
use cwpoints::geometry::{convex_hull, order_type, Orientation, PointSet};
use cwpoints::mso::{
    check_with_witness, library_macros, parse_with_macros, AnnotatedStructure, Annotations, Assignment, Checker,
    Direction, MsoFormula,
};
use cwpoints::solvers::{
    general_position_subset, general_position_subset_dp, hitting_set_induced_lines, min_convex_partition,
    segmented_terrain_guarding, visibility_graph, Method, SolveResult, Witness,
};
use cwpoints::gen;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "cwpoints", version, about = "Clique-width expressions, MSO checking and point problems")]
struct Cli {
    /// Emit a single JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Point file checks.
    #[command(subcommand)]
    Points(PointsCmd),
    /// Print the counter-clockwise triples of a point set.
    Ordertype(PointsArg),
    /// Evaluate, validate or measure clique-width expressions.
    #[command(subcommand)]
    Expr(ExprCmd),
    /// Build expressions and gadgets for special point sets.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Model-check MSO formulas.
    #[command(subcommand)]
    Mso(MsoCmd),
    /// Solve the point problems.
    Solve(SolveArgs),
    /// Seeded random instances.
    Gen(GenArgs),
}

#[derive(Args)]
struct PointsArg {
    /// Point file: one `x y` per line, rationals as `p/q`, `#` comments.
    #[arg(value_name = "POINTS")]
    file: Option<PathBuf>,
    #[arg(long = "points", value_name = "FILE", conflicts_with = "file")]
    points: Option<PathBuf>,
}

impl PointsArg {
    fn path(&self) -> Result<&Path, CliError> {
        self.file.as_deref().or(self.points.as_deref()).ok_or_else(|| CliError::Usage("a point file is required".into()))
    }
}

#[derive(Subcommand)]
enum PointsCmd {
    /// Parse a point file and report its size and general position.
    Validate(PointsArg),
}

#[derive(Args)]
struct ExprArg {
    /// Expression file.
    #[arg(value_name = "EXPR")]
    file: Option<PathBuf>,
    #[arg(long = "expr", value_name = "FILE", conflicts_with = "file")]
    expr: Option<PathBuf>,
}

impl ExprArg {
    fn path(&self) -> Result<&Path, CliError> {
        self.file.as_deref().or(self.expr.as_deref()).ok_or_else(|| CliError::Usage("an expression file is required".into()))
    }
}

#[derive(Subcommand)]
enum ExprCmd {
    /// Print the value of an expression.
    Eval(ExprArg),
    /// Check that an expression produces the order type of a point set.
    Validate {
        /// Expression file.
        #[arg(value_name = "EXPR", required_unless_present = "expr_flag")]
        expr: Option<PathBuf>,
        /// Point file.
        #[arg(value_name = "POINTS", required_unless_present = "points_flag")]
        points: Option<PathBuf>,
        #[arg(long = "expr", value_name = "FILE", id = "expr_flag", conflicts_with = "expr")]
        expr_flag: Option<PathBuf>,
        #[arg(long = "points", value_name = "FILE", id = "points_flag", conflicts_with = "points")]
        points_flag: Option<PathBuf>,
    },
    /// Print the width of an expression.
    Width(ExprArg),
}

#[derive(Args)]
struct ConstructOut {
    /// Write the expression here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out_expr: Option<PathBuf>,
    /// Write the points, reordered to the expression's creation order.
    #[arg(long, value_name = "FILE")]
    out_points: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Width-4 expression for a strictly convex set.
    Convex {
        #[command(flatten)]
        points: PointsArg,
        #[command(flatten)]
        out: ConstructOut,
    },
    /// Expression for a collinear set plus outliers (the largest collinear subset is the line).
    Collinear {
        #[command(flatten)]
        points: PointsArg,
        #[command(flatten)]
        out: ConstructOut,
    },
    /// Width-8 expression for a convex set plus one interior point.
    Convex1 {
        #[command(flatten)]
        points: PointsArg,
        #[command(flatten)]
        out: ConstructOut,
    },
    /// Point gadget whose collinear triples encode a k x k grid.
    Grid {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Write the gadget points here instead of standard output.
        #[arg(long, value_name = "FILE")]
        out_points: Option<PathBuf>,
        /// Write the `grid` and `rowend` annotations here.
        #[arg(long, value_name = "FILE")]
        out_annot: Option<PathBuf>,
        /// Write JSON metadata naming the indices of m, n, p_i and q_i.
        #[arg(long, value_name = "FILE")]
        out_meta: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MsoArgs {
    /// Formula file; library definitions are available as macros.
    #[arg(long, value_name = "FILE")]
    formula: PathBuf,
    #[arg(long, value_name = "FILE")]
    points: PathBuf,
    /// Annotation file with `[name]` sections.
    #[arg(long, value_name = "FILE")]
    annot: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Min,
    Max,
}

#[derive(Subcommand)]
enum MsoCmd {
    /// Truth of a formula; free variables are bound with `--bind`.
    Check {
        #[command(flatten)]
        args: MsoArgs,
        /// `x=3` for an element, `X=0,2,5` for a set (`X=` for the empty set).
        #[arg(long, value_name = "VAR=VALUE")]
        bind: Vec<String>,
    },
    /// Best set for the single free set variable.
    Opt {
        #[command(flatten)]
        args: MsoArgs,
        #[arg(long, value_enum, default_value = "max")]
        direction: Dir,
    },
    /// All sets satisfying a formula with one free set variable.
    Enum {
        #[command(flatten)]
        args: MsoArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Gps,
    Hitting,
    Convpart,
    Terrain,
    Visibility,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    problem: Problem,
    #[arg(long, default_value = "oracle")]
    method: Method,
    #[arg(long, value_name = "FILE")]
    points: PathBuf,
    /// Annotation file; `[canguard]` restricts terrain guards.
    #[arg(long, value_name = "FILE")]
    annot: Option<PathBuf>,
    /// Expression file, required by the dp method.
    #[arg(long, value_name = "FILE")]
    expr: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Convex,
    Collinear,
    Convex1,
    General,
    Polygon,
    Terrain,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of outliers for `collinear`.
    #[arg(long, default_value_t = 2)]
    d: usize,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Input(String),
}

impl CliError {
    fn input(path: &Path, e: impl std::fmt::Display) -> CliError {
        CliError::Input(format!("{}: {e}", path.display()))
    }
}

/// What a command prints; `ok` selects exit status 0 or 1.
struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(path, e))
}

fn write(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::input(path, e))
}

fn load_points(path: &Path) -> Result<PointSet, CliError> {
    PointSet::parse(&read(path)?).map_err(|e| CliError::input(path, e))
}

fn load_expr(path: &Path) -> Result<CwExpression, CliError> {
    parse_expression(&read(path)?).map_err(|e| CliError::input(path, e))
}

fn load_annotations(path: Option<&Path>) -> Result<Annotations, CliError> {
    match path {
        Some(p) => Annotations::parse(&read(p)?).map_err(|e| CliError::input(p, e)),
        None => Ok(Annotations::default()),
    }
}

fn envelope(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(out), Value::Object(b)) = (&mut v, body) {
        out.extend(b);
    }
    v
}

fn point_strings(p: &PointSet) -> Vec<String> {
    p.iter().map(ToString::to_string).collect()
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Points(PointsCmd::Validate(a)) => {
            let p = load_points(a.path()?)?;
            let gp = p.in_general_position();
            Ok(Report {
                text: format!("OK n={} general_position={gp}", p.len()),
                json: envelope("points validate", json!({ "n": p.len(), "general_position": gp })),
                ok: true,
            })
        }
        Command::Ordertype(a) => {
            let p = load_points(a.path()?)?;
            let ot = order_type(&p);
            let triples: Vec<[usize; 3]> = ot.triples().iter().map(|(a, b, c)| [a, b, c]).collect();
            let text = triples.iter().map(|t| format!("{} {} {}", t[0], t[1], t[2])).collect::<Vec<_>>().join("\n");
            Ok(Report { text, json: envelope("ordertype", json!({ "n": p.len(), "triples": triples })), ok: true })
        }
        Command::Expr(cmd) => run_expr(cmd),
        Command::Construct(cmd) => run_construct(cmd),
        Command::Mso(cmd) => run_mso(cmd),
        Command::Solve(args) => run_solve(args),
        Command::Gen(args) => run_gen(args),
    }
}

fn run_expr(cmd: ExprCmd) -> Result<Report, CliError> {
    match cmd {
        ExprCmd::Eval(a) => {
            let e = load_expr(a.path()?)?;
            let v = evaluate(&e);
            let labels: Vec<&str> = v.unary_label.iter().map(|&l| e.unary_labels()[l as usize].as_str()).collect();
            let triples: Vec<[usize; 3]> = v.triples.iter().map(|(a, b, c)| [a, b, c]).collect();
            let mut text = format!("n={} width={}\nlabels: {}", v.n, e.width(), labels.join(" "));
            for t in &triples {
                text.push_str(&format!("\n{} {} {}", t[0], t[1], t[2]));
            }
            let json = envelope(
                "expr eval",
                json!({ "n": v.n, "width": e.width(), "labels": labels, "triples": triples }),
            );
            Ok(Report { text, json, ok: true })
        }
        ExprCmd::Validate { expr, points, expr_flag, points_flag } => {
            let missing = |what: &str| CliError::Usage(format!("{what} file is required"));
            let e = load_expr(&expr.or(expr_flag).ok_or_else(|| missing("an expression"))?)?;
            let p = load_points(&points.or(points_flag).ok_or_else(|| missing("a point"))?)?;
            Ok(match validate(&e, &p) {
                Ok(_) => Report {
                    text: format!("OK width={}", e.width()),
                    json: envelope("expr validate", json!({ "valid": true, "width": e.width() })),
                    ok: true,
                },
                Err(m) => {
                    let triple = match &m {
                        Mismatch::Triple { triple, .. } => Some([triple.0, triple.1, triple.2]),
                        Mismatch::CountMismatch { .. } => None,
                    };
                    Report {
                        text: format!("MISMATCH {m}"),
                        json: envelope(
                            "expr validate",
                            json!({ "valid": false, "width": e.width(), "reason": m.to_string(), "triple": triple }),
                        ),
                        ok: false,
                    }
                }
            })
        }
        ExprCmd::Width(a) => {
            let e = load_expr(a.path()?)?;
            Ok(Report {
                text: format!("width={} unary={} binary={}", e.width(), e.unary_labels().len(), e.binary_labels().len()),
                json: envelope(
                    "expr width",
                    json!({ "width": e.width(), "unary": e.unary_labels(), "binary": e.binary_labels() }),
                ),
                ok: true,
            })
        }
    }
}

fn largest_collinear(p: &PointSet) -> Vec<usize> {
    let n = p.len();
    let mut best: Vec<usize> = (0..n.min(2)).collect();
    for a in 0..n {
        for b in a + 1..n {
            let line: Vec<usize> =
                (0..n).filter(|&c| c == a || c == b || p.orient(a, b, c) == Orientation::Collinear).collect();
            if line.len() > best.len() {
                best = line;
            }
        }
    }
    best
}

fn construction(command: &str, p: &PointSet, rep: ConstructionReport, out: ConstructOut) -> Result<Report, CliError> {
    let ordered = rep.ordered_points(p);
    let text_expr = rep.expression.to_string();
    if let Some(path) = &out.out_points {
        write(path, &ordered.to_text())?;
    }
    let text = match &out.out_expr {
        Some(path) => {
            write(path, &format!("{text_expr}\n"))?;
            format!("width={} point_order={:?}", rep.expression.width(), rep.point_order)
        }
        None => text_expr.clone(),
    };
    let json = envelope(
        command,
        json!({
            "expression": text_expr,
            "width": rep.expression.width(),
            "claimed_width": rep.claimed_width,
            "point_order": rep.point_order,
        }),
    );
    Ok(Report { text, json, ok: true })
}

fn run_construct(cmd: ConstructCmd) -> Result<Report, CliError> {
    let fail = |e: cwpoints::ConstructError| CliError::Input(e.to_string());
    match cmd {
        ConstructCmd::Convex { points, out } => {
            let p = load_points(points.path()?)?;
            let rep = convex_expression(&p).map_err(fail)?;
            construction("construct convex", &p, rep, out)
        }
        ConstructCmd::Collinear { points, out } => {
            let p = load_points(points.path()?)?;
            let line = largest_collinear(&p);
            let rep = collinear_plus_d_expression(&p, &line).map_err(fail)?;
            construction("construct collinear", &p, rep, out)
        }
        ConstructCmd::Convex1 { points, out } => {
            let p = load_points(points.path()?)?;
            let hull = convex_hull(&p);
            let inside: Vec<usize> = (0..p.len()).filter(|i| !hull.contains(i)).collect();
            let [m] = inside[..] else {
                return Err(CliError::Input(format!("expected one interior point, found {}", inside.len())));
            };
            let rep = convex_plus_one_expression(&p, m).map_err(fail)?;
            construction("construct convex1", &p, rep, out)
        }
        ConstructCmd::Grid { k, out_points, out_annot, out_meta } => {
            let g = grid_gadget(k).map_err(fail)?;
            let ann = Annotations {
                binary: Default::default(),
                unary: [("grid".to_string(), g.grid().into_iter().collect()), ("rowend".to_string(), g.row_ends().into_iter().collect())]
                    .into_iter()
                    .collect(),
            };
            if let Some(path) = &out_annot {
                write(path, &ann.to_text())?;
            }
            let text = match &out_points {
                Some(path) => {
                    write(path, &g.points.to_text())?;
                    format!("k={k} points={} collinear_triples={}", g.points.len(), collinear_triples(&g.points).len())
                }
                None => g.points.to_text().trim_end().to_string(),
            };
            let json = envelope(
                "construct grid",
                json!({
                    "k": k,
                    "points": point_strings(&g.points),
                    "m": g.m,
                    "n": g.n,
                    "p": g.p,
                    "q": g.q,
                    "grid": g.grid(),
                    "row_ends": g.row_ends(),
                    "collinear_triples": collinear_triples(&g.points),
                    "edges": g.expected_edges(),
                }),
            );
            if let Some(path) = &out_meta {
                write(path, &format!("{json}\n"))?;
            }
            Ok(Report { text, json, ok: true })
        }
    }
}

fn mso_setup(args: &MsoArgs) -> Result<(AnnotatedStructure, MsoFormula), CliError> {
    let p = load_points(&args.points)?;
    let ann = load_annotations(args.annot.as_deref())?;
    let s = AnnotatedStructure::from_points(&p).with_annotations(&ann).map_err(|e| CliError::Input(e.to_string()))?;
    let f = parse_with_macros(&read(&args.formula)?, &s.signature(), library_macros())
        .map_err(|e| CliError::input(&args.formula, e))?;
    Ok((s, f))
}

fn parse_binding(a: Assignment, b: &str) -> Result<Assignment, CliError> {
    let (name, value) = b.split_once('=').ok_or_else(|| CliError::Usage(format!("binding `{b}` lacks `=`")))?;
    let bad = || CliError::Usage(format!("bad binding `{b}`"));
    if name.starts_with(|c: char| c.is_ascii_uppercase()) {
        let members = value
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(a.set(name, members))
    } else {
        Ok(a.element(name, value.trim().parse().map_err(|_| bad())?))
    }
}

fn assignment_json(a: &Assignment) -> Value {
    json!({ "elements": a.elements, "sets": a.sets })
}

fn run_mso(cmd: MsoCmd) -> Result<Report, CliError> {
    let err = |e: cwpoints::MsoError| CliError::Input(e.to_string());
    match cmd {
        MsoCmd::Check { args, bind } => {
            let (s, f) = mso_setup(&args)?;
            let a = bind.iter().try_fold(Assignment::new(), |a, b| parse_binding(a, b))?;
            let w = check_with_witness(&s, &f, &a).map_err(err)?;
            let value = w.is_some();
            let mut text = value.to_string();
            if let Some(w) = &w {
                for (k, v) in &w.elements {
                    text.push_str(&format!("\n{k} = {v}"));
                }
                for (k, v) in &w.sets {
                    text.push_str(&format!("\n{k} = {v:?}"));
                }
            }
            let json = envelope("mso check", json!({ "value": value, "witness": w.as_ref().map(assignment_json) }));
            Ok(Report { text, json, ok: value })
        }
        MsoCmd::Opt { args, direction } => {
            let (s, f) = mso_setup(&args)?;
            let dir = match direction {
                Dir::Min => Direction::Min,
                Dir::Max => Direction::Max,
            };
            let best = Checker::new(&s, &f).and_then(|c| c.optimize(dir)).map_err(err)?;
            let text = match &best {
                Some((set, size)) => format!("size={size} set={set:?}"),
                None => "unsatisfiable".to_string(),
            };
            let json = envelope(
                "mso opt",
                json!({
                    "satisfiable": best.is_some(),
                    "size": best.as_ref().map(|b| b.1),
                    "set": best.as_ref().map(|b| b.0.clone()),
                }),
            );
            Ok(Report { text, json, ok: best.is_some() })
        }
        MsoCmd::Enum { args } => {
            let (s, f) = mso_setup(&args)?;
            let sets = Checker::new(&s, &f).and_then(|c| c.enumerate()).map_err(err)?;
            let text = sets.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join("\n");
            let json = envelope("mso enum", json!({ "count": sets.len(), "sets": sets }));
            Ok(Report { text, json, ok: true })
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<Report, CliError> {
    let err = |e: cwpoints::SolveError| CliError::Input(e.to_string());
    let p = load_points(&args.points)?;
    let need_k = |what: &str| args.k.ok_or_else(|| CliError::Usage(format!("{what} needs --k")));
    let (name, result): (&str, SolveResult) = match args.problem {
        Problem::Gps => {
            let k = args.k.unwrap_or(0);
            let r = if args.method == Method::Dp {
                let path = args.expr.as_deref().ok_or_else(|| CliError::Usage("--method dp needs --expr".into()))?;
                let e = load_expr(path)?;
                let v = validate(&e, &p).map_err(|m| CliError::Input(format!("expression does not validate: {m}")))?;
                general_position_subset_dp(&v, k)
            } else {
                general_position_subset(&p, k, args.method)
            };
            ("gps", r.map_err(err)?)
        }
        Problem::Hitting => ("hitting", hitting_set_induced_lines(&p, args.method).map_err(err)?),
        Problem::Convpart => ("convpart", min_convex_partition(&p, need_k("convpart")?, args.method).map_err(err)?),
        Problem::Terrain => {
            let ann = load_annotations(args.annot.as_deref())?;
            let guards: Option<Vec<usize>> = ann.unary.get("canguard").map(|s| s.iter().copied().collect());
            ("terrain", segmented_terrain_guarding(&p, guards.as_deref(), args.method).map_err(err)?)
        }
        Problem::Visibility => ("visibility", visibility_graph(&p, args.method).map_err(err)?),
    };
    let objective = result.objective.map_or_else(|| "none".to_string(), |o| o.to_string());
    let mut text = format!(
        "{} feasible={} objective={objective} method={}",
        name,
        result.feasible,
        result.method
    );
    match &result.witness {
        Some(Witness::Set(s)) => text.push_str(&format!("\nwitness {s:?}")),
        Some(Witness::Partition(parts)) => {
            for part in parts {
                text.push_str(&format!("\nface {part:?}"));
            }
        }
        Some(Witness::Edges(edges)) => {
            for e in edges {
                text.push_str(&format!("\nedge {} {}", e[0], e[1]));
            }
        }
        None => {}
    }
    let mut body = serde_json::to_value(&result).expect("serializable");
    if let Value::Object(m) = &mut body {
        m.insert("problem".into(), json!(name));
        m.insert("k".into(), json!(args.k));
    }
    Ok(Report { text, json: envelope("solve", body), ok: result.feasible })
}

fn run_gen(args: GenArgs) -> Result<Report, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let n = args.n;
    let at_least = |k: usize| {
        if n < k {
            Err(CliError::Usage(format!("--n must be at least {k}")))
        } else {
            Ok(())
        }
    };
    let points = match args.family {
        Family::Convex => gen::convex(&mut rng, n),
        Family::Collinear => {
            at_least(args.d)?;
            gen::collinear_plus(&mut rng, n - args.d, args.d).0
        }
        Family::Convex1 => {
            at_least(4)?;
            gen::convex_plus_one(&mut rng, n).0
        }
        Family::General => gen::general_position(&mut rng, n, 4 * n as i64 + 10),
        Family::Polygon => {
            at_least(3)?;
            gen::polygon(&mut rng, n)
        }
        Family::Terrain => gen::terrain(&mut rng, n),
    };
    Ok(Report {
        text: points.to_text().trim_end().to_string(),
        json: envelope("gen", json!({ "n": n, "seed": args.seed, "points": point_strings(&points) })),
        ok: true,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_json = cli.json;
    match run(cli) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            let _ = if as_json {
                writeln!(out, "{}", r.json)
            } else if !r.text.is_empty() {
                writeln!(out, "{}", r.text)
            } else {
                Ok(())
            };
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let msg = match e {
                CliError::Usage(m) => format!("usage: {m}"),
                CliError::Input(m) => m,
            };
            if as_json {
                println!("{}", envelope("error", json!({ "error": msg })));
            }
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
