use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use clatf::affine::{
    chartwise_convex, chartwise_convex_for, first_return, mutate_polytope, tropicalize, wall_direction_hull, wall_generators,
    CutPolytope, LooijengaData,
};
use clatf::atbd::{
    frozen_groups, frozen_vertex_type, mutation_graph_with, seed_catalog, torus_class_in, Atbd, Depth, Group, MutationGraph,
    DEFAULT_STATE_BOUND,
};
use clatf::exact::{FiniteType, Polygon};
use clatf::scattering::{
    chamber_period, chambers, complete, complete_with_bound, dp5_canonical, dp5_monodromy_diagram, dp5_partially_pushed,
    initial_diagram_with_order, is_consistent, move_worm, mutate_diagram, ScatteringDiagram, Seed, Variant, WormParam,
    DEFAULT_ORDER,
};
use clatf::theta::{enumerate_broken_lines, BrokenLineCaps, ThetaEngine};
use clatf::{LatticeVec, RatVec, Vec2};
use serde_json::{json, Map, Value};

use crate::doc::{self, big, lattice, matrix, parse_rat, point, rat_str, DResult, DocError, Envelope};

#[derive(Parser, Debug)]
#[command(name = "clatf", version, about = "Scattering diagrams, theta functions, polytope mutation and almost-toric diagrams")]
pub struct Cli {
    /// Read the input document from this file instead of stdin.
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG picture of the output document.
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scattering diagrams.
    #[command(subcommand)]
    Scatter(Scatter),
    /// Broken lines and theta functions.
    #[command(subcommand)]
    Theta(Theta),
    /// Polytopes with cuts.
    #[command(subcommand)]
    Polytope(Poly),
    /// Tropicalization of a cycle of curves.
    #[command(subcommand)]
    Trop(Trop),
    /// Almost-toric base diagrams.
    #[command(subcommand)]
    Atbd(AtbdCmd),
    /// Draw a diagram, polytope or ATBD document as SVG.
    Render,
}

#[derive(Args, Debug, Clone)]
struct TypeArgs {
    /// Finite type: A1xA1, A2, B2, G2.
    #[arg(long = "type")]
    ty: Option<String>,
    /// Cluster variety: A or X.
    #[arg(long)]
    variant: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Scatter {
    /// Initial diagram of a seed, or a preset diagram.
    Init {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: u32,
        /// dp5, dp5-pushed or dp5-monodromy.
        #[arg(long)]
        preset: Option<String>,
    },
    /// Add outgoing walls until consistent.
    Complete {
        #[arg(long)]
        order: Option<u32>,
        #[arg(long)]
        max_walls: Option<usize>,
    },
    /// Mutate at direction k (1 or 2).
    Mutate {
        #[arg(long)]
        k: usize,
    },
    /// Consistency, chambers and ray directions.
    Check,
    /// Slide a singular point along its invariant line.
    Worm {
        /// Index of the singular point, from 1.
        #[arg(long)]
        sp: usize,
        /// New position (rational) or "inf".
        #[arg(long)]
        t: String,
    },
}

#[derive(Subcommand, Debug)]
enum Theta {
    /// Broken lines with initial exponent p ending at q.
    Lines {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, default_value_t = 24)]
        degree: u32,
        #[arg(long, default_value_t = 48)]
        bends: usize,
    },
    /// Structure constants of theta_p theta_q.
    Product {
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Products of all pairs of ray generators.
    Table {
        #[command(flatten)]
        t: TypeArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct PolyInput {
    /// Vertices "x,y;x,y;..." instead of an input document.
    #[arg(long, allow_hyphen_values = true)]
    vertices: Option<String>,
    /// Seed type for --vertices.
    #[arg(long = "seed-type", default_value = "A2")]
    seed_type: String,
}

#[derive(Subcommand, Debug)]
enum Poly {
    /// Alternating mutations starting at k (1 or 2).
    Mutate {
        #[command(flatten)]
        src: PolyInput,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Report the first return of the vertex set instead.
        #[arg(long)]
        first_return: bool,
        #[arg(long, default_value_t = 20)]
        max_steps: usize,
    },
    /// Convexity in every chart of the cut structure.
    Convex {
        #[command(flatten)]
        src: PolyInput,
        /// Check the polytope against this diagram's walls (input via --diagram FILE).
        #[arg(long)]
        diagram: Option<PathBuf>,
    },
    /// Positivity test up to dilation dmax.
    Positive {
        #[command(flatten)]
        src: PolyInput,
        #[command(flatten)]
        t: TypeArgs,
        #[arg(long, default_value_t = 3)]
        dmax: u32,
    },
    /// Convex hull of the primitive wall directions.
    Hull {
        #[command(flatten)]
        t: TypeArgs,
    },
    /// Lattice points of dilations 0..=d.
    Points {
        #[command(flatten)]
        src: PolyInput,
        #[arg(long, default_value_t = 3)]
        d: u32,
    },
}

#[derive(Subcommand, Debug)]
enum Trop {
    /// Rays, chart transitions and total monodromy.
    Build {
        /// Self-intersection numbers, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        self_intersections: String,
    },
}

#[derive(Subcommand, Debug)]
enum AtbdCmd {
    /// A named catalog diagram.
    Catalog { name: String },
    /// Nodal trade at a vertex, or the inverse at a node.
    Trade {
        #[arg(long, required_unless_present = "inverse")]
        vertex: Option<usize>,
        #[arg(long, default_value = "1/2")]
        t: String,
        /// Remove this node instead.
        #[arg(long)]
        inverse: Option<usize>,
    },
    /// Move a node along its cut.
    Slide {
        #[arg(long)]
        node: usize,
        #[arg(long)]
        t: String,
    },
    /// Mutate at a node (whole group unless --count).
    Mutate {
        #[arg(long)]
        node: usize,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Torus class, monotone point, divisors and frozen singularities.
    Classify {
        #[arg(long, default_value = "sl")]
        group: String,
    },
    /// Mutation graph.
    Graph {
        #[arg(long, conflicts_with = "depth")]
        exhaustive: bool,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value = "sl")]
        group: String,
        #[arg(long, default_value_t = DEFAULT_STATE_BOUND)]
        bound: usize,
        /// Look for cycles of these lengths.
        #[arg(long, value_delimiter = ',')]
        cycle: Vec<usize>,
    },
}

enum Output {
    Doc(Envelope),
    Svg(String),
}

struct Ctx<'a> {
    input: Option<PathBuf>,
    stdin: &'a mut dyn FnMut() -> DResult<String>,
    upstream: Value,
}

impl Ctx<'_> {
    fn read(&mut self) -> DResult<Envelope> {
        let text = match &self.input {
            Some(p) => std::fs::read_to_string(p).map_err(|e| DocError::Malformed(format!("{}: {e}", p.display())))?,
            None => (self.stdin)()?,
        };
        let e = Envelope::parse(&text)?;
        self.upstream = e.provenance.clone();
        Ok(e)
    }

    fn diagram(&mut self) -> DResult<ScatteringDiagram> {
        let e = self.read()?;
        doc::parse_diagram(e.expect("diagram")?)
    }

    fn atbd(&mut self) -> DResult<Atbd> {
        let e = self.read()?;
        doc::parse_atbd(e.expect("atbd")?)
    }

    fn polytope(&mut self, src: &PolyInput) -> DResult<CutPolytope> {
        match &src.vertices {
            Some(v) => {
                let pts = v.split(';').map(parse_point_arg).collect::<DResult<Vec<_>>>()?;
                let seed = Seed::standard(src.seed_type.parse()?);
                Ok(CutPolytope::new(pts, vec![], seed, Variant::X)?)
            }
            None => {
                let e = self.read()?;
                doc::parse_polytope(e.expect("polytope")?)
            }
        }
    }

    /// The completed diagram of --type, or the input diagram.
    fn typed_diagram(&mut self, t: &TypeArgs, default_variant: Variant) -> DResult<ScatteringDiagram> {
        match &t.ty {
            Some(ty) => {
                let v = match &t.variant {
                    Some(v) => v.parse()?,
                    None => default_variant,
                };
                let ft: FiniteType = ty.parse()?;
                Ok(complete(&initial_diagram_with_order(&Seed::standard(ft), v, DEFAULT_ORDER)?)?)
            }
            None => self.diagram(),
        }
    }
}

fn malformed<T>(m: impl Into<String>) -> DResult<T> {
    Err(DocError::Malformed(m.into()))
}

fn parse_point_arg(s: &str) -> DResult<RatVec> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [x, y] => Ok(Vec2::new(parse_rat(x)?, parse_rat(y)?)),
        _ => malformed(format!("expected x,y, got {s}")),
    }
}

fn parse_int(s: &str) -> DResult<i64> {
    s.trim().parse().map_err(|_| DocError::Malformed(format!("expected an integer, got {s}")))
}

/// "x,y" or "tN", the N-th ray generator counterclockwise from (1,0).
fn parse_exponent(s: &str, rays: &[LatticeVec]) -> DResult<LatticeVec> {
    if let Some(i) = s.strip_prefix('t') {
        let i = parse_int(i)?;
        return usize::try_from(i - 1)
            .ok()
            .and_then(|i| rays.get(i).copied())
            .ok_or_else(|| DocError::Malformed(format!("no ray {s}; there are {}", rays.len())));
    }
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [x, y] => Ok(Vec2::new(parse_int(x)?, parse_int(y)?)),
        _ => malformed(format!("expected x,y or tN, got {s}")),
    }
}

fn label(r: LatticeVec, rays: &[LatticeVec]) -> String {
    if r == Vec2::new(0, 0) {
        return "origin".into();
    }
    match rays.iter().position(|x| *x == r) {
        Some(i) => format!("t{}", i + 1),
        None => format!("{},{}", r.x, r.y),
    }
}

fn direction_index(k: usize) -> DResult<usize> {
    match k {
        1 | 2 => Ok(k - 1),
        _ => malformed(format!("direction index must be 1 or 2, got {k}")),
    }
}

fn product_json(engine: &mut ThetaEngine, p: LatticeVec, q: LatticeVec, rays: &[LatticeVec]) -> DResult<Value> {
    let row = engine.product(p, q)?;
    let entries: Map<String, Value> = row.iter().map(|(r, c)| (label(*r, rays), big(c))).collect();
    let terms: Vec<Value> = row.iter().map(|(r, c)| json!({"r": lattice(*r), "coeff": big(c)})).collect();
    Ok(json!({"p": lattice(p), "q": lattice(q), "entries": entries, "terms": terms}))
}

fn graph_json(g: &MutationGraph, cycles: &[usize]) -> Value {
    let classes: Vec<Value> = g
        .classes
        .iter()
        .map(|c| json!({"canonical_polygon": c.canonical_polygon.iter().map(point).collect::<Vec<_>>(), "vertices": c.vertex_count()}))
        .collect();
    let edges: Vec<Value> = g.edges.iter().map(|(a, d, b)| json!([a, lattice(*d), b])).collect();
    let state_edges: Vec<Value> = g.state_edges.iter().map(|(a, b)| json!([a, b])).collect();
    let state_classes: Vec<usize> = g.states.iter().map(|s| s.1).collect();
    let mut cyc = Map::new();
    for &l in cycles {
        cyc.insert(
            l.to_string(),
            json!({
                "classes": g.class_cycle(l),
                "states": g.state_cycle(l),
                "classes_on_state_cycle": g.classes_on_state_cycle(l),
            }),
        );
    }
    json!({
        "group": g.group.to_string(),
        "class_count": g.class_count(),
        "state_count": g.state_count(),
        "complete": g.complete,
        "classes": classes,
        "edges": edges,
        "state_classes": state_classes,
        "state_edges": state_edges,
        "class_girth": g.class_girth(),
        "state_girth": g.state_girth(),
        "cycles": cyc,
    })
}

fn group(s: &str) -> DResult<Group> {
    Ok(s.parse()?)
}

fn execute(cmd: Command, cx: &mut Ctx) -> DResult<Output> {
    let doc = |kind: &str, payload: Value| Ok(Output::Doc(Envelope::new(kind, payload, Value::Null)));
    match cmd {
        Command::Scatter(s) => match s {
            Scatter::Init { t, order, preset } => {
                let d = match preset.as_deref() {
                    Some("dp5") => dp5_canonical()?,
                    Some("dp5-pushed") => dp5_partially_pushed()?,
                    Some("dp5-monodromy") => dp5_monodromy_diagram()?,
                    Some(p) => return malformed(format!("unknown preset {p}")),
                    None => {
                        let ft: FiniteType = t.ty.as_deref().unwrap_or("A2").parse()?;
                        let v: Variant = t.variant.as_deref().unwrap_or("X").parse()?;
                        initial_diagram_with_order(&Seed::standard(ft), v, order)?
                    }
                };
                doc("diagram", doc::diagram(&d))
            }
            Scatter::Complete { order, max_walls } => {
                let mut d = cx.diagram()?;
                if let Some(o) = order {
                    d = d.with_order(o);
                }
                let c = match max_walls {
                    Some(m) => complete_with_bound(&d, m)?,
                    None => complete(&d)?,
                };
                doc("diagram", doc::diagram(&c))
            }
            Scatter::Mutate { k } => {
                let d = cx.diagram()?;
                doc("diagram", doc::diagram(&mutate_diagram(&d, direction_index(k)?)?))
            }
            Scatter::Check => {
                let d = cx.diagram()?;
                let rep = is_consistent(&d)?;
                let defects: Vec<Value> = rep
                    .defects
                    .iter()
                    .map(|x| {
                        json!({
                            "point": point(&x.point),
                            "grading": x.grading.as_ref().map(rat_str),
                            "terms": x.terms.iter().map(|(m, c)| json!({"m": lattice(*m), "coeff": big(c)})).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                let ch = chambers(&d).ok().map(|c| c.len());
                let rays = d.ray_directions().ok().map(|r| r.into_iter().map(lattice).collect::<Vec<_>>());
                doc(
                    "table",
                    json!({
                        "consistent": rep.consistent,
                        "junctions": rep.junctions,
                        "defects": defects,
                        "chambers": ch,
                        "rays": rays,
                        "walls": d.walls.len(),
                        "order": d.order,
                    }),
                )
            }
            Scatter::Worm { sp, t } => {
                let d = cx.diagram()?;
                let param = if t == "inf" { WormParam::Infinity } else { WormParam::At(parse_rat(&t)?) };
                let i = sp.checked_sub(1).ok_or_else(|| DocError::Malformed("singular points are numbered from 1".into()))?;
                doc("diagram", doc::diagram(&move_worm(&d, i, param)?))
            }
        },
        Command::Theta(t) => match t {
            Theta::Lines { t, p, q, degree, bends } => {
                let d = cx.typed_diagram(&t, Variant::A)?;
                let rays = d.ray_directions()?;
                let p = parse_exponent(&p, &rays)?;
                let q = parse_point_arg(&q)?;
                let lines = enumerate_broken_lines(&d, p, &q, BrokenLineCaps { degree, bends })?;
                let ls: Vec<Value> = lines
                    .iter()
                    .map(|l| {
                        json!({
                            "final_exponent": lattice(l.final_exponent()),
                            "final_coeff": big(l.final_coeff()),
                            "bends": l.bends(),
                            "segments": l.segments.iter().map(|s| json!({
                                "coeff": big(&s.coeff),
                                "exponent": lattice(s.exponent),
                                "start": s.start.as_ref().map(point),
                                "end": point(&s.end),
                            })).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                doc("table", json!({"p": lattice(p), "q": point(&q), "count": lines.len(), "lines": ls}))
            }
            Theta::Product { t, p, q } => {
                let d = cx.typed_diagram(&t, Variant::A)?;
                let rays = d.ray_directions()?;
                let (p, q) = (parse_exponent(&p, &rays)?, parse_exponent(&q, &rays)?);
                let mut e = ThetaEngine::new(&d, BrokenLineCaps::default())?;
                doc("table", product_json(&mut e, p, q, &rays)?)
            }
            Theta::Table { t } => {
                let d = cx.typed_diagram(&t, Variant::A)?;
                let rays = d.ray_directions()?;
                let mut e = ThetaEngine::new(&d, BrokenLineCaps::default())?;
                let mut rows = vec![];
                for i in 0..rays.len() {
                    for j in i..rays.len() {
                        let mut r = product_json(&mut e, rays[i], rays[j], &rays)?;
                        r["pair"] = json!([label(rays[i], &rays), label(rays[j], &rays)]);
                        rows.push(r);
                    }
                }
                doc("table", json!({"rays": rays.iter().map(|r| lattice(*r)).collect::<Vec<_>>(), "rows": rows}))
            }
        },
        Command::Polytope(p) => match p {
            Poly::Mutate { src, k, steps, first_return: fr, max_steps } => {
                let poly = cx.polytope(&src)?;
                let k0 = direction_index(k)?;
                if fr {
                    let ret = first_return(&poly, k0, max_steps)?;
                    let period = chamber_period(&poly.seed, k0, poly.variant)?;
                    return doc(
                        "table",
                        json!({"start": k, "first_return_steps": ret, "max_steps": max_steps, "chamber_period": period}),
                    );
                }
                let mut q = poly;
                let mut kk = k0;
                for _ in 0..steps {
                    q = mutate_polytope(&q, kk)?;
                    kk = 1 - kk;
                }
                doc("polytope", doc::polytope(&q))
            }
            Poly::Convex { src, diagram } => {
                let poly = cx.polytope(&src)?;
                let convex = match diagram {
                    Some(path) => {
                        let text = std::fs::read_to_string(&path).map_err(|e| DocError::Malformed(format!("{}: {e}", path.display())))?;
                        let e = Envelope::parse(&text)?;
                        chartwise_convex_for(&poly, &doc::parse_diagram(e.expect("diagram")?)?)?
                    }
                    None => chartwise_convex(&poly)?,
                };
                doc("table", json!({"chartwise_convex": convex, "cuts": poly.cuts.len()}))
            }
            Poly::Positive { src, t, dmax } => {
                let poly = cx.polytope(&src)?;
                let t = TypeArgs { ty: Some(t.ty.unwrap_or_else(|| poly.seed.label().to_string())), variant: t.variant };
                let d = cx.typed_diagram(&t, Variant::A)?;
                let rep = clatf::theta::is_positive(&Polygon::new(poly.vertices.clone())?, &d, dmax)?;
                doc(
                    "table",
                    json!({
                        "positive": rep.positive,
                        "witness": rep.witness.map(|(a, b, r)| json!({"p1": lattice(a), "p2": lattice(b), "r": lattice(r)})),
                        "dmax": rep.dmax,
                        "pairs_checked": rep.pairs_checked,
                    }),
                )
            }
            Poly::Hull { t } => {
                let d = cx.typed_diagram(&t, Variant::X)?;
                let mut h = doc::polytope(&wall_direction_hull(&d)?);
                h["generators"] = json!(wall_generators(&d).into_iter().map(lattice).collect::<Vec<_>>());
                doc("polytope", h)
            }
            Poly::Points { src, d } => {
                let poly = cx.polytope(&src)?;
                let layers: Vec<Value> = (0..=d)
                    .map(|k| {
                        let pts = poly.dilation_points(k);
                        json!({"d": k, "count": pts.len(), "points": pts.into_iter().map(lattice).collect::<Vec<_>>()})
                    })
                    .collect();
                doc("table", json!({"double_area": rat_str(&poly.double_area()), "dilations": layers}))
            }
        },
        Command::Trop(Trop::Build { self_intersections }) => {
            let ds = self_intersections.split(',').map(parse_int).collect::<DResult<Vec<_>>>()?;
            let atlas = tropicalize(&LooijengaData::new(ds.clone())?)?;
            let m = atlas.total_monodromy.matrix();
            doc(
                "table",
                json!({
                    "self_intersections": ds,
                    "rays": atlas.rays.iter().map(|r| lattice(*r)).collect::<Vec<_>>(),
                    "transitions": atlas.transitions.iter().map(matrix).collect::<Vec<_>>(),
                    "total_monodromy": matrix(&m),
                    "images": {"e1": lattice(m.column(0)), "e2": lattice(m.column(1))},
                    "determinant": m.det(),
                    "identity": m.is_identity(),
                }),
            )
        }
        Command::Atbd(a) => match a {
            AtbdCmd::Catalog { name } => doc("atbd", doc::atbd(&seed_catalog(&name)?)),
            AtbdCmd::Trade { vertex, t, inverse } => {
                let a = cx.atbd()?;
                let b = match (inverse, vertex) {
                    (Some(j), _) => a.inverse_nodal_trade(j)?,
                    (None, Some(i)) => a.nodal_trade(i, &parse_rat(&t)?)?,
                    (None, None) => return malformed("give --vertex or --inverse"),
                };
                doc("atbd", doc::atbd(&b))
            }
            AtbdCmd::Slide { node, t } => {
                let a = cx.atbd()?;
                doc("atbd", doc::atbd(&a.nodal_slide(node, &parse_rat(&t)?)?))
            }
            AtbdCmd::Mutate { node, count } => {
                let a = cx.atbd()?;
                let b = match count {
                    Some(c) => a.mutate_count(node, c)?,
                    None => a.mutate(node)?,
                };
                doc("atbd", doc::atbd(&b))
            }
            AtbdCmd::Classify { group: g } => {
                let a = cx.atbd()?;
                let c = torus_class_in(&a, group(&g)?)?;
                let frozen = frozen_groups(&a)
                    .iter()
                    .map(|grp| {
                        Ok(frozen_vertex_type(&a, grp)?.map(|f| {
                            json!({
                                "nodes": grp,
                                "count": f.nodes,
                                "point": f.point_label,
                                "chain_label": f.chain_label,
                                "node_label": f.node_label,
                            })
                        }))
                    })
                    .collect::<DResult<Vec<_>>>()?;
                doc(
                    "table",
                    json!({
                        "group": c.group.to_string(),
                        "canonical_polygon": c.canonical_polygon.iter().map(point).collect::<Vec<_>>(),
                        "vertices": c.vertex_count(),
                        "double_area": rat_str(&c.double_area()),
                        "monotone_point": point(&a.monotone_point()?),
                        "divisors": a.divisor_count()?,
                        "nodes": a.nodes.len(),
                        "frozen": frozen,
                    }),
                )
            }
            AtbdCmd::Graph { exhaustive, depth, group: g, bound, cycle } => {
                let a = cx.atbd()?;
                let dep = match (exhaustive, depth) {
                    (_, Some(d)) => Depth::Limited(d),
                    _ => Depth::Exhaustive,
                };
                let gr = mutation_graph_with(&a, dep, group(&g)?, bound)?;
                doc("graph", graph_json(&gr, &cycle))
            }
        },
        Command::Render => {
            let e = cx.read()?;
            Ok(Output::Svg(crate::svg::render(&e)?))
        }
    }
}

pub fn run(cli: Cli, args: &[String], stdin: &mut dyn FnMut() -> DResult<String>) -> DResult<()> {
    let mut cx = Ctx { input: cli.input.clone(), stdin, upstream: Value::Null };
    let out = execute(cli.command, &mut cx)?;
    let text = match out {
        Output::Svg(s) => s,
        Output::Doc(mut e) => {
            e.provenance = json!({
                "tool": concat!("clatf ", env!("CARGO_PKG_VERSION")),
                "argv": args,
                "input": cx.upstream,
            });
            if let Some(path) = &cli.svg {
                let s = crate::svg::render(&e)?;
                std::fs::write(path, s).map_err(|err| DocError::Malformed(format!("{}: {err}", path.display())))?;
            }
            e.emit()
        }
    };
    match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|err| DocError::Malformed(format!("{}: {err}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
