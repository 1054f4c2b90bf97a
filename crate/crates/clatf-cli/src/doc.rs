use std::collections::BTreeMap;

use clatf::affine::{Cut, CutPolytope};
use clatf::atbd::{Atbd, Node};
use clatf::exact::{Grading, SkewForm};
use clatf::scattering::{ScatteringDiagram, Seed, SingularPoint, Support, Variant, Wall, WallFunction};
use clatf::{LatticeVec, Mat2, Rat, RatVec, Vec2};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";
pub const KINDS: [&str; 5] = ["diagram", "polytope", "atbd", "graph", "table"];

#[derive(Debug, thiserror::Error)]
pub enum DocError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Domain(#[from] clatf::Error),
}

pub type DResult<T> = std::result::Result<T, DocError>;

fn bad<T>(msg: impl Into<String>) -> DResult<T> {
    Err(DocError::Malformed(msg.into()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub schema_version: String,
    pub kind: String,
    pub payload: Value,
    pub provenance: Value,
}

impl Envelope {
    pub fn new(kind: &str, payload: Value, provenance: Value) -> Self {
        Envelope { schema_version: SCHEMA_VERSION.into(), kind: kind.into(), payload, provenance }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": self.schema_version,
            "kind": self.kind,
            "payload": self.payload,
            "provenance": self.provenance,
        })
    }

    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> DResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| DocError::Malformed(e.to_string()))?;
        let o = v.as_object().ok_or_else(|| DocError::Malformed("envelope must be an object".into()))?;
        let s = |k: &str| o.get(k).and_then(Value::as_str).map(str::to_owned);
        let schema_version = s("schema_version").ok_or_else(|| DocError::Malformed("missing schema_version".into()))?;
        if schema_version != SCHEMA_VERSION {
            return bad(format!("unsupported schema_version {schema_version}"));
        }
        let kind = s("kind").ok_or_else(|| DocError::Malformed("missing kind".into()))?;
        if !KINDS.contains(&kind.as_str()) {
            return bad(format!("unknown kind {kind}"));
        }
        let payload = o.get("payload").cloned().ok_or_else(|| DocError::Malformed("missing payload".into()))?;
        let provenance = o.get("provenance").cloned().unwrap_or(Value::Null);
        Ok(Envelope { schema_version, kind, payload, provenance })
    }

    pub fn expect(&self, kind: &str) -> DResult<&Value> {
        if self.kind != kind {
            return bad(format!("expected a {kind} document, got {}", self.kind));
        }
        Ok(&self.payload)
    }
}

// ---- scalars

pub fn rat_str(q: &Rat) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> DResult<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| DocError::Malformed(format!("bad rational {s}")));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d == BigInt::from(0) {
                return bad(format!("zero denominator in {s}"));
            }
            Ok(Rat::new(parse_int(n)?, d))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

pub fn big(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(i) => json!(i),
        None => json!(c.to_string()),
    }
}

fn get<'a>(o: &'a Value, k: &str) -> DResult<&'a Value> {
    o.get(k).ok_or_else(|| DocError::Malformed(format!("missing field {k}")))
}

fn as_i64(v: &Value) -> DResult<i64> {
    v.as_i64().ok_or_else(|| DocError::Malformed(format!("expected an integer, got {v}")))
}

fn as_bool(v: &Value) -> DResult<bool> {
    v.as_bool().ok_or_else(|| DocError::Malformed(format!("expected a boolean, got {v}")))
}

fn as_arr(v: &Value) -> DResult<&Vec<Value>> {
    v.as_array().ok_or_else(|| DocError::Malformed(format!("expected an array, got {v}")))
}

fn as_str(v: &Value) -> DResult<&str> {
    v.as_str().ok_or_else(|| DocError::Malformed(format!("expected a string, got {v}")))
}

pub fn lattice(v: LatticeVec) -> Value {
    json!([v.x, v.y])
}

pub fn parse_lattice(v: &Value) -> DResult<LatticeVec> {
    match as_arr(v)?.as_slice() {
        [x, y] => Ok(Vec2::new(as_i64(x)?, as_i64(y)?)),
        _ => bad(format!("expected [x, y], got {v}")),
    }
}

pub fn point(p: &RatVec) -> Value {
    json!([rat_str(&p.x), rat_str(&p.y)])
}

fn rat_value(v: &Value) -> DResult<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(_) => Ok(Rat::from_integer(BigInt::from(as_i64(v)?))),
        _ => bad(format!("expected a rational, got {v}")),
    }
}

pub fn parse_point(v: &Value) -> DResult<RatVec> {
    match as_arr(v)?.as_slice() {
        [x, y] => Ok(Vec2::new(rat_value(x)?, rat_value(y)?)),
        _ => bad(format!("expected [x, y], got {v}")),
    }
}

fn points(ps: &[RatVec]) -> Value {
    Value::Array(ps.iter().map(point).collect())
}

fn parse_points(v: &Value) -> DResult<Vec<RatVec>> {
    as_arr(v)?.iter().map(parse_point).collect()
}

pub fn matrix(m: &Mat2) -> Value {
    json!(m.0)
}

fn parse_matrix(v: &Value) -> DResult<Mat2> {
    let rows = as_arr(v)?;
    if rows.len() != 2 {
        return bad("matrix must have two rows");
    }
    let r0 = parse_lattice(&rows[0])?;
    let r1 = parse_lattice(&rows[1])?;
    Ok(Mat2([[r0.x, r0.y], [r1.x, r1.y]]))
}

// ---- seeds

fn seed(s: &Seed, v: Variant) -> Value {
    let f = s.fixed_form();
    json!({
        "type": s.label().to_string(),
        "variant": v.to_string(),
        "skew": { "value": rat_str(&f.value), "d1": f.d1, "d2": f.d2 },
        "basis": [lattice(s.basis()[0]), lattice(s.basis()[1])],
    })
}

fn parse_seed(v: &Value) -> DResult<(Seed, Variant)> {
    let sk = get(v, "skew")?;
    let form = SkewForm::new(rat_value(get(sk, "value")?)?, as_i64(get(sk, "d1")?)?, as_i64(get(sk, "d2")?)?)?;
    let b = as_arr(get(v, "basis")?)?;
    if b.len() != 2 {
        return bad("basis must have two vectors");
    }
    let s = Seed::new(form, [parse_lattice(&b[0])?, parse_lattice(&b[1])?])?;
    let variant: Variant = as_str(get(v, "variant")?)?.parse()?;
    Ok((s, variant))
}

// ---- scattering diagrams

fn support(s: &Support) -> Value {
    match s {
        Support::Line { point: p, dir } => json!({"kind": "line", "point": point(p), "dir": lattice(*dir)}),
        Support::Ray { base, dir } => json!({"kind": "ray", "base": point(base), "dir": lattice(*dir)}),
        Support::Segment { start, end, dir } => {
            json!({"kind": "segment", "start": point(start), "end": point(end), "dir": lattice(*dir)})
        }
    }
}

fn parse_support(v: &Value) -> DResult<Support> {
    let dir = parse_lattice(get(v, "dir")?)?;
    match as_str(get(v, "kind")?)? {
        "line" => Ok(Support::Line { point: parse_point(get(v, "point")?)?, dir }),
        "ray" => Ok(Support::Ray { base: parse_point(get(v, "base")?)?, dir }),
        "segment" => Ok(Support::Segment { start: parse_point(get(v, "start")?)?, end: parse_point(get(v, "end")?)?, dir }),
        k => bad(format!("unknown support kind {k}")),
    }
}

fn wall_function(f: &WallFunction) -> Value {
    let factors: Map<String, Value> = f.factors().iter().map(|(k, c)| (k.to_string(), json!(c))).collect();
    json!({"base": lattice(f.base()), "factors": factors})
}

fn parse_wall_function(v: &Value) -> DResult<WallFunction> {
    let base = parse_lattice(get(v, "base")?)?;
    let mut factors = BTreeMap::new();
    let fs = get(v, "factors")?.as_object().ok_or_else(|| DocError::Malformed("factors must be an object".into()))?;
    for (k, c) in fs {
        let k: u32 = k.parse().map_err(|_| DocError::Malformed(format!("bad factor index {k}")))?;
        factors.insert(k, as_i64(c)?);
    }
    Ok(WallFunction::from_factors(base, factors)?)
}

pub fn diagram(d: &ScatteringDiagram) -> Value {
    let walls: Vec<Value> = d
        .walls
        .iter()
        .map(|w| json!({"support": support(&w.support), "normal": lattice(w.normal), "function": wall_function(&w.function)}))
        .collect();
    let sps: Vec<Value> = d
        .singular_points
        .iter()
        .map(|s| json!({"position": point(&s.position), "linear": matrix(&s.linear()), "cut": lattice(s.cut)}))
        .collect();
    json!({
        "seed": seed(&d.seed, d.variant),
        "order": d.order,
        "grading": [d.grading.gx, d.grading.gy, d.grading.den],
        "finite": d.finite,
        "walls": walls,
        "singular_points": sps,
    })
}

pub fn parse_diagram(v: &Value) -> DResult<ScatteringDiagram> {
    let (s, variant) = parse_seed(get(v, "seed")?)?;
    let g = as_arr(get(v, "grading")?)?;
    if g.len() != 3 {
        return bad("grading must be [gx, gy, den]");
    }
    let grading = Grading::new(as_i64(&g[0])?, as_i64(&g[1])?, as_i64(&g[2])?)?;
    let order = u32::try_from(as_i64(get(v, "order")?)?).map_err(|_| DocError::Malformed("bad order".into()))?;
    let mut d = ScatteringDiagram::empty(s, variant, grading, order);
    d.finite = as_bool(get(v, "finite")?)?;
    for w in as_arr(get(v, "walls")?)? {
        let mut wall = Wall::new(parse_support(get(w, "support")?)?, parse_wall_function(get(w, "function")?)?)?;
        if let Some(n) = w.get("normal") {
            wall.normal = parse_lattice(n)?;
        }
        d.walls.push(wall);
    }
    for s in as_arr(get(v, "singular_points")?)? {
        d.singular_points.push(SingularPoint::new(
            parse_point(get(s, "position")?)?,
            parse_matrix(get(s, "linear")?)?,
            parse_lattice(get(s, "cut")?)?,
        )?);
    }
    Ok(d)
}

// ---- polytopes

pub fn polytope(p: &CutPolytope) -> Value {
    let cuts: Vec<Value> = p
        .cuts
        .iter()
        .map(|c| json!({"base": point(&c.base), "direction": lattice(c.direction), "power": c.shear_power, "frozen": c.frozen}))
        .collect();
    json!({"vertices": points(&p.vertices), "cuts": cuts, "seed": seed(&p.seed, p.variant)})
}

pub fn parse_polytope(v: &Value) -> DResult<CutPolytope> {
    let (s, variant) = parse_seed(get(v, "seed")?)?;
    let mut cuts = vec![];
    for c in as_arr(get(v, "cuts")?)? {
        let mut cut = Cut::new(parse_point(get(c, "base")?)?, parse_lattice(get(c, "direction")?)?, as_i64(get(c, "power")?)?)?;
        cut.frozen = as_bool(get(c, "frozen")?)?;
        cuts.push(cut);
    }
    Ok(CutPolytope::new(parse_points(get(v, "vertices")?)?, cuts, s, variant)?)
}

// ---- almost-toric diagrams

pub fn atbd(a: &Atbd) -> Value {
    let nodes: Vec<Value> = a
        .nodes
        .iter()
        .map(|n| {
            json!({
                "position": point(&n.position),
                "direction": lattice(n.direction),
                "multiplicity": n.multiplicity,
                "frozen": n.frozen,
            })
        })
        .collect();
    json!({
        "boundary": points(&a.boundary),
        "nodes": nodes,
        "monotone_hint": a.monotone_hint.as_ref().map(point),
    })
}

pub fn parse_atbd(v: &Value) -> DResult<Atbd> {
    let mut nodes = vec![];
    for n in as_arr(get(v, "nodes")?)? {
        let mut node = Node::new(parse_point(get(n, "position")?)?, parse_lattice(get(n, "direction")?)?, as_bool(get(n, "frozen")?)?)?;
        node.multiplicity = as_i64(get(n, "multiplicity")?)?;
        if node.multiplicity < 1 {
            return bad("multiplicity must be positive");
        }
        nodes.push(node);
    }
    let hint = match v.get("monotone_hint") {
        None | Some(Value::Null) => None,
        Some(p) => Some(parse_point(p)?),
    };
    Ok(Atbd::new(parse_points(get(v, "boundary")?)?, nodes, hint)?)
}

#[cfg(test)]
/// Parse then re-emit the payload of a typed document; other kinds pass through.
pub fn canonical_payload(e: &Envelope) -> DResult<Value> {
    Ok(match e.kind.as_str() {
        "diagram" => diagram(&parse_diagram(&e.payload)?),
        "polytope" => polytope(&parse_polytope(&e.payload)?),
        "atbd" => atbd(&parse_atbd(&e.payload)?),
        _ => e.payload.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clatf::atbd::{seed_catalog, CATALOG};
    use clatf::exact::FiniteType;
    use clatf::scattering::{complete, dp5_monodromy_diagram, initial_diagram};

    fn round_trip(kind: &str, payload: Value) {
        let e = Envelope::new(kind, payload, json!({"argv": ["test"]}));
        let first = e.emit();
        let parsed = Envelope::parse(&first).unwrap();
        let again = Envelope::new(kind, canonical_payload(&parsed).unwrap(), parsed.provenance.clone()).emit();
        assert_eq!(first, again);
    }

    #[test]
    fn rationals() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(rat_str(&parse_rat(s).unwrap()), s);
        }
        assert_eq!(rat_str(&parse_rat("4/6").unwrap()), "2/3");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn catalog_round_trips() {
        for name in CATALOG {
            round_trip("atbd", atbd(&seed_catalog(name).unwrap()));
        }
    }

    #[test]
    fn diagrams_round_trip() {
        for t in [FiniteType::A2, FiniteType::B2, FiniteType::G2] {
            let d = complete(&initial_diagram(&Seed::standard(t), Variant::X).unwrap()).unwrap();
            assert_eq!(parse_diagram(&diagram(&d)).unwrap(), d);
            round_trip("diagram", diagram(&d));
        }
        let m = dp5_monodromy_diagram().unwrap();
        assert_eq!(parse_diagram(&diagram(&m)).unwrap(), m);
    }

    #[test]
    fn polytopes_round_trip() {
        let p = CutPolytope::plain(&[(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1)]).unwrap();
        assert_eq!(parse_polytope(&polytope(&p)).unwrap(), p);
        round_trip("polytope", polytope(&p));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(Envelope::parse("{"), Err(DocError::Malformed(_))));
        assert!(Envelope::parse(r#"{"schema_version":"1","kind":"nope","payload":{}}"#).is_err());
        assert!(Envelope::parse(r#"{"schema_version":"9","kind":"atbd","payload":{}}"#).is_err());
        let e = Envelope::parse(r#"{"schema_version":"1","kind":"atbd","payload":{"boundary":[]}}"#).unwrap();
        assert!(parse_atbd(&e.payload).is_err());
    }
}
