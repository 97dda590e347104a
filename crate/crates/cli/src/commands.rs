use std::io::Write;
use std::path::Path;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use stirling::bijection::{
    ary_to_seq_bundled, bundled_from_ftree, decode_ary, decode_bundled, decode_plane_recursive, encode_ary,
    encode_bundled, encode_plane_recursive, ftree_from_bundled, seq_bundled_to_ary, verify_codecs,
    verify_stat_transfer, FTree,
};
use stirling::dist::{
    block_binomial_moment_forms, block_count_pmf, mean_profile, tnormal_covariance, verify_exact_laws,
    zeta_density, zeta_moment,
};
use stirling::harness::{replicate_map, run_and_compare, with_threads, ExperimentSpec};
use stirling::perm::{block_decomposition, count_flavor, enumerate_flavor, sample_with, stat_profile, Flavor};
use stirling::rational::{display, to_f64, Rational};
use stirling::tree::{AryTree, BundledForest, BundledTree, PlaneTree};
use stirling::urn::{
    fixed_addition_covariance, nested_block_urns_with, simulate_with, urn_a_covariance, UrnKind, UrnSpec,
};
use stirling::StirlingPerm;

use crate::output::{csv_row, float, json as emit, SCHEMA_VERSION};
use crate::{input, BijectionArg, CovarianceArg, Failure, FlavorArg, Global, Outcome, UrnModel};

type Out<'a> = &'a mut dyn Write;

fn flavor(f: FlavorArg) -> Flavor {
    match f {
        FlavorArg::KStirling => Flavor::KStirling,
        FlavorArg::Bundled => Flavor::Bundled,
    }
}

fn flavor_name(f: Flavor) -> &'static str {
    match f {
        Flavor::KStirling => "kStirling",
        Flavor::Bundled => "bundled",
    }
}

fn threads(g: Global) -> Option<usize> {
    g.threads.map(|t| t as usize)
}

/// Compact string when every label is a digit, else the JSON array.
fn perm_value(p: &StirlingPerm) -> Value {
    match p.compact() {
        Some(s) => Value::String(s),
        None => json!(p.word()),
    }
}

fn perm_cell(p: &StirlingPerm) -> String {
    p.compact().unwrap_or_else(|| {
        let w: Vec<String> = p.word().iter().map(u32::to_string).collect();
        w.join(" ")
    })
}

/// Integers that fit in `u64` become JSON numbers, larger ones strings.
fn big_value(v: &num_bigint::BigUint) -> Value {
    match v.to_u64() {
        Some(x) => x.into(),
        None => v.to_string().into(),
    }
}

#[derive(Serialize)]
struct Fraction {
    numerator: String,
    denominator: String,
    float: f64,
}

fn fraction(r: &Rational) -> Fraction {
    Fraction {
        numerator: r.numer().to_string(),
        denominator: r.denom().to_string(),
        float: to_f64(r),
    }
}

fn fraction_cells(r: &Rational) -> [String; 3] {
    [r.numer().to_string(), r.denom().to_string(), float(to_f64(r))]
}

pub fn count(g: Global, out: Out, n: u64, k: u64, f: FlavorArg) -> Outcome {
    let f = flavor(f);
    if n == 0 || k == 0 {
        return Err(Failure::Invalid("n and k must be at least 1".into()));
    }
    let c = count_flavor(n, k, f);
    if g.csv {
        csv_row(out, &["n", "k", "flavor", "count"])?;
        csv_row(out, &[n.to_string(), k.to_string(), flavor_name(f).into(), c.to_string()])?;
    } else {
        emit(out, "count", &json!({"n": n, "k": k, "flavor": flavor_name(f), "count": big_value(&c)}))?;
    }
    Ok(true)
}

/// Streams one permutation per line; nothing but the current word is held.
pub fn enumerate(g: Global, out: Out, n: usize, k: u32, f: FlavorArg, cap: u64) -> Outcome {
    let f = flavor(f);
    let e = enumerate_flavor(n, k, f, cap)?;
    let total = e.total();
    if g.csv {
        csv_row(out, &["index", "permutation"])?;
        for (i, p) in e.enumerate() {
            csv_row(out, &[(i + 1).to_string(), perm_cell(&p)])?;
        }
        return Ok(true);
    }
    writeln!(out, "{{")?;
    writeln!(out, "  \"schemaVersion\": {SCHEMA_VERSION},")?;
    writeln!(out, "  \"command\": \"enumerate\",")?;
    writeln!(out, "  \"n\": {n},\n  \"k\": {k},\n  \"flavor\": \"{}\",", flavor_name(f))?;
    writeln!(out, "  \"count\": {total},")?;
    write!(out, "  \"permutations\": [")?;
    for (i, p) in e.enumerate() {
        let sep = if i == 0 { "\n" } else { ",\n" };
        write!(out, "{sep}    {}", perm_value(&p))?;
    }
    writeln!(out, "{}]\n}}", if total > 0 { "\n  " } else { "" })?;
    Ok(true)
}

pub fn sample(g: Global, out: Out, n: usize, k: u32, seed: u64, f: FlavorArg, count: u64) -> Outcome {
    let f = flavor(f);
    let perms = with_threads(threads(g), || replicate_map(seed, count, |rng| sample_with(n, k, f, rng)))?;
    if g.csv {
        csv_row(out, &["seed", "index", "permutation"])?;
        for (i, p) in perms.iter().enumerate() {
            csv_row(out, &[seed.to_string(), i.to_string(), perm_cell(p)])?;
        }
    } else {
        let list: Vec<Value> = perms.iter().map(perm_value).collect();
        emit(
            out,
            "sample",
            &json!({"n": n, "k": k, "flavor": flavor_name(f), "seed": seed, "samples": list}),
        )?;
    }
    Ok(true)
}

fn joined(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(";")
}

pub fn stats(g: Global, out: Out, arg: &str) -> Outcome {
    let p = input::perm(arg)?;
    let s = stat_profile(&p);
    let blocks = block_decomposition(&p).count();
    if g.csv {
        csv_row(
            out,
            &["permutation", "ascents", "descents", "plateaux", "blocks", "jAscents", "jDescents", "jPlateaux"],
        )?;
        csv_row(
            out,
            &[
                perm_cell(&p),
                s.ascents.to_string(),
                s.descents.to_string(),
                s.plateaux.to_string(),
                blocks.to_string(),
                joined(&s.j_ascents),
                joined(&s.j_descents),
                joined(&s.j_plateaux),
            ],
        )?;
    } else {
        emit(
            out,
            "stats",
            &json!({
                "permutation": perm_value(&p),
                "order": p.order(),
                "length": p.len(),
                "multiplicities": p.multiplicities(),
                "profile": s,
                "blocks": blocks,
            }),
        )?;
    }
    Ok(true)
}

pub fn blocks(g: Global, out: Out, arg: &str) -> Outcome {
    let p = input::perm(arg)?;
    let d = block_decomposition(&p);
    if g.csv {
        csv_row(out, &["label", "start", "end", "size"])?;
        for b in &d.blocks {
            csv_row(
                out,
                &[b.label.to_string(), (b.start + 1).to_string(), (b.end + 1).to_string(), b.size().to_string()],
            )?;
        }
    } else {
        let list: Vec<Value> = d
            .blocks
            .iter()
            .map(|b| json!({"label": b.label, "start": b.start + 1, "end": b.end + 1, "size": b.size()}))
            .collect();
        emit(
            out,
            "blocks",
            &json!({
                "permutation": perm_value(&p),
                "count": d.count(),
                "blocks": list,
                "sizesByLabel": d.sizes_by_label(),
                "sizesDescending": d.sizes_descending,
            }),
        )?;
    }
    Ok(true)
}

fn k_of(p: &StirlingPerm) -> u32 {
    p.multiplicities().of(1)
}

fn tree_value<T: Serialize>(t: &T) -> Result<Value, Failure> {
    Ok(serde_json::to_value(t)?)
}

/// Emits `input`, `output` and whether mapping back reproduces the input.
fn codec_report(g: Global, out: Out, command: &str, bij: BijectionArg, input: Value, output: Value, same: bool) -> Outcome {
    let name = match bij {
        BijectionArg::Ary => "ary",
        BijectionArg::Bundled => "bundled",
        BijectionArg::Seq => "seq",
        BijectionArg::Ftree => "ftree",
        BijectionArg::Plane => "plane",
    };
    if g.csv {
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        csv_row(out, &["bijection", "input", "output", "roundtrip"])?;
        csv_row(out, &[name.to_string(), cell(&input), cell(&output), same.to_string()])?;
    } else {
        emit(
            out,
            command,
            &json!({"bijection": name, "input": input, "output": output, "roundtrip": same}),
        )?;
    }
    Ok(same)
}

pub fn encode(g: Global, out: Out, bij: BijectionArg, arg: &str) -> Outcome {
    let (i, o, same) = match bij {
        BijectionArg::Ary => {
            let t: AryTree = input::json(arg)?;
            let p = encode_ary(&t)?;
            let back = decode_ary(&p, t.arity() as u32 - 1)?;
            (tree_value(&t)?, perm_value(&p), back == t)
        }
        BijectionArg::Bundled => {
            let t: BundledTree = input::json(arg)?;
            let p = encode_bundled(&t)?;
            let back = decode_bundled(&p, t.bundles() as u32 - 1)?;
            (tree_value(&t)?, perm_value(&p), back == t)
        }
        BijectionArg::Seq => {
            let f: BundledForest = input::json(arg)?;
            let t = seq_bundled_to_ary(&f)?;
            let back = ary_to_seq_bundled(&t)?;
            (tree_value(&f)?, tree_value(&t)?, back == f)
        }
        BijectionArg::Ftree => {
            let t: BundledTree = input::json(arg)?;
            let f = ftree_from_bundled(&t)?;
            let back = bundled_from_ftree(&f)?;
            (tree_value(&t)?, tree_value(&f)?, back == t)
        }
        BijectionArg::Plane => {
            let t: PlaneTree = input::json(arg)?;
            let p = encode_plane_recursive(&t);
            let back = decode_plane_recursive(&p)?;
            (tree_value(&t)?, perm_value(&p), back == t)
        }
    };
    codec_report(g, out, "encode", bij, i, o, same)
}

pub fn decode(g: Global, out: Out, bij: BijectionArg, arg: &str) -> Outcome {
    let (i, o, same) = match bij {
        BijectionArg::Ary => {
            let p = input::perm(arg)?;
            let t = decode_ary(&p, k_of(&p))?;
            let back = encode_ary(&t)?;
            (perm_value(&p), tree_value(&t)?, back == p)
        }
        BijectionArg::Bundled => {
            let p = input::perm(arg)?;
            let t = decode_bundled(&p, k_of(&p))?;
            let back = encode_bundled(&t)?;
            (perm_value(&p), tree_value(&t)?, back == p)
        }
        BijectionArg::Seq => {
            let t: AryTree = input::json(arg)?;
            let f = ary_to_seq_bundled(&t)?;
            let back = seq_bundled_to_ary(&f)?;
            (tree_value(&t)?, tree_value(&f)?, back == t)
        }
        BijectionArg::Ftree => {
            let f: FTree = input::json(arg)?;
            let t = bundled_from_ftree(&f)?;
            let back = ftree_from_bundled(&t)?;
            (tree_value(&f)?, tree_value(&t)?, back == f)
        }
        BijectionArg::Plane => {
            let p = input::perm(arg)?;
            let t = decode_plane_recursive(&p)?;
            let back = encode_plane_recursive(&t);
            (perm_value(&p), tree_value(&t)?, back == p)
        }
    };
    codec_report(g, out, "decode", bij, i, o, same)
}

pub struct UrnArgs {
    pub model: UrnModel,
    pub steps: u64,
    pub replicates: u64,
    pub seed: u64,
    pub k: u64,
    pub q: usize,
    pub init: Option<Vec<u64>>,
}

pub fn urn(g: Global, out: Out, a: UrnArgs) -> Outcome {
    if a.replicates == 0 {
        return Err(Failure::Invalid("replicates must be at least 1".into()));
    }
    let spec = match a.model {
        UrnModel::A => Some(UrnSpec::new(UrnKind::SymmetricA { q: a.q }, a.init.clone().unwrap_or(vec![1; a.q]))?),
        UrnModel::B => Some(match &a.init {
            Some(init) => UrnSpec::new(UrnKind::TriangularB { k: a.k }, init.clone())?,
            None => UrnSpec::triangular_b(a.k)?,
        }),
        UrnModel::C => Some(UrnSpec::new(UrnKind::PolyaC { k: a.k }, a.init.clone().unwrap_or(vec![1, 1]))?),
        UrnModel::Nested => {
            if a.init.is_some() {
                return Err(Failure::Usage("--init does not apply to the nested model".into()));
            }
            None
        }
    };
    let finals: Vec<Vec<u64>> = with_threads(threads(g), || {
        replicate_map(a.seed, a.replicates, |rng| match &spec {
            Some(s) => Ok(simulate_with(s, a.steps, rng, false)?.counts),
            None => nested_block_urns_with(a.k, a.steps + 1, rng),
        })
    })?;
    let model = match a.model {
        UrnModel::A => "a",
        UrnModel::B => "b",
        UrnModel::C => "c",
        UrnModel::Nested => "nested",
    };
    if g.csv {
        let mut header: Vec<String> = vec!["seed".into(), "replicate".into(), "steps".into()];
        match &spec {
            Some(s) => header.extend((1..=s.colours()).map(|j| format!("count{j}"))),
            None => header.push("blockSizes".into()),
        }
        csv_row(out, &header)?;
        for (i, c) in finals.iter().enumerate() {
            let mut row = vec![a.seed.to_string(), i.to_string(), a.steps.to_string()];
            match &spec {
                Some(_) => row.extend(c.iter().map(u64::to_string)),
                None => row.push(joined(c)),
            }
            csv_row(out, &row)?;
        }
    } else {
        let rows: Vec<Value> = finals
            .iter()
            .enumerate()
            .map(|(i, c)| json!({"replicate": i, "counts": c}))
            .collect();
        emit(
            out,
            "urn",
            &json!({
                "model": model,
                "urn": spec,
                "k": a.k,
                "steps": a.steps,
                "replicates": a.replicates,
                "seed": a.seed,
                "trajectories": rows,
            }),
        )?;
    }
    Ok(true)
}

pub fn pmf(g: Global, out: Out, n: u64, k: u64) -> Outcome {
    let t = block_count_pmf(n, k)?;
    if g.csv {
        csv_row(out, &["m", "numerator", "denominator", "float"])?;
        for (i, p) in t.probabilities.iter().enumerate() {
            let [a, b, c] = fraction_cells(p);
            csv_row(out, &[(i + 1).to_string(), a, b, c])?;
        }
    } else {
        let rows: Vec<Value> = t
            .probabilities
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let f = fraction(p);
                json!({"m": i + 1, "numerator": f.numerator, "denominator": f.denominator, "float": f.float})
            })
            .collect();
        emit(out, "pmf", &json!({"n": n, "k": k, "rows": rows}))?;
    }
    Ok(true)
}

pub fn moments(g: Global, out: Out, n: u64, k: u64, r_max: u64) -> Outcome {
    let kk = u32::try_from(k).map_err(|_| Failure::Invalid("k is too large".into()))?;
    let mut rows = Vec::new();
    let mut agree = true;
    for r in 0..=r_max {
        let (a, b) = block_binomial_moment_forms(n, k, r)?;
        agree &= a == b;
        rows.push((r, a.clone(), a == b, zeta_moment(kk, r as f64)?));
    }
    if g.csv {
        csv_row(out, &["r", "numerator", "denominator", "float", "formsAgree", "zetaMoment"])?;
        for (r, m, same, z) in &rows {
            let [a, b, c] = fraction_cells(m);
            csv_row(out, &[r.to_string(), a, b, c, same.to_string(), float(*z)])?;
        }
    } else {
        let list: Vec<Value> = rows
            .iter()
            .map(|(r, m, same, z)| {
                let f = fraction(m);
                json!({
                    "r": r,
                    "numerator": f.numerator,
                    "denominator": f.denominator,
                    "float": f.float,
                    "formsAgree": same,
                    "zetaMoment": z,
                })
            })
            .collect();
        emit(out, "moments", &json!({"n": n, "k": k, "rows": list}))?;
    }
    Ok(agree)
}

pub fn density(g: Global, out: Out, k: u32, xs: &[f64], term_cap: usize) -> Outcome {
    let vals = xs
        .iter()
        .map(|&x| zeta_density(k, x, term_cap).map(|d| (x, d)))
        .collect::<Result<Vec<_>, _>>()?;
    if g.csv {
        csv_row(out, &["x", "value", "errorEstimate", "terms"])?;
        for (x, d) in &vals {
            csv_row(
                out,
                &[float(*x), float(d.value), float(d.error_estimate), d.terms.to_string()],
            )?;
        }
    } else {
        let rows: Vec<Value> = vals
            .iter()
            .map(|(x, d)| json!({"x": x, "value": d.value, "errorEstimate": d.error_estimate, "terms": d.terms}))
            .collect();
        emit(out, "density", &json!({"k": k, "rows": rows}))?;
    }
    Ok(true)
}

pub fn means(g: Global, out: Out, n: u64, k: u64) -> Outcome {
    let m = mean_profile(n, k)?;
    let rows = [
        ("exterior", &m.exterior),
        ("interior", &m.interior),
        ("jAscents", &m.j_ascents),
        ("jDescents", &m.j_descents),
        ("jPlateaux", &m.j_plateaux),
        ("ascents", &m.ascents),
        ("descents", &m.descents),
        ("plateaux", &m.plateaux),
    ];
    if g.csv {
        csv_row(out, &["statistic", "numerator", "denominator", "float"])?;
        for (name, r) in rows {
            let [a, b, c] = fraction_cells(r);
            csv_row(out, &[name.to_string(), a, b, c])?;
        }
    } else {
        let mut body = serde_json::Map::new();
        body.insert("n".into(), n.into());
        body.insert("k".into(), k.into());
        for (name, r) in rows {
            body.insert(name.into(), serde_json::to_value(fraction(r))?);
        }
        emit(out, "means", &Value::Object(body))?;
    }
    Ok(true)
}

pub fn covariance(g: Global, out: Out, which: CovarianceArg, q: usize, s: &[u64], k: u64) -> Outcome {
    let (name, centering, matrix) = match which {
        CovarianceArg::UrnA => {
            let l = urn_a_covariance(q)?;
            ("urnA", Some(l.centering), l.matrix)
        }
        CovarianceArg::Fixed => {
            let l = fixed_addition_covariance(s)?;
            ("fixed", Some(l.centering), l.matrix)
        }
        CovarianceArg::Tnormal => ("tnormal", None, tnormal_covariance(k)?),
    };
    if g.csv {
        let dim = matrix.len();
        let header: Vec<String> = std::iter::once("row".to_string()).chain((1..=dim).map(|j| format!("c{j}"))).collect();
        csv_row(out, &header)?;
        for (i, row) in matrix.iter().enumerate() {
            let cells: Vec<String> = std::iter::once((i + 1).to_string()).chain(row.iter().map(display)).collect();
            csv_row(out, &cells)?;
        }
    } else {
        let strings = |m: &Vec<Vec<Rational>>| -> Vec<Vec<String>> {
            m.iter().map(|r| r.iter().map(display).collect()).collect()
        };
        let floats: Vec<Vec<f64>> = matrix.iter().map(|r| r.iter().map(to_f64).collect()).collect();
        let mut body = json!({"which": name, "matrix": strings(&matrix), "matrixFloat": floats});
        if let Some(c) = centering {
            body["centering"] = json!(c.iter().map(display).collect::<Vec<_>>());
        }
        emit(out, "covariance", &body)?;
    }
    Ok(true)
}

pub fn verify(g: Global, out: Out, max_n: usize, k: u32, cap: u64) -> Outcome {
    if max_n == 0 {
        return Err(Failure::Invalid("--max-n must be at least 1".into()));
    }
    let mut rep = verify_codecs(max_n, k, cap)?;
    rep.merge(verify_stat_transfer(max_n, k, cap)?);
    rep.merge(verify_exact_laws(max_n, k, cap)?);
    let passed = rep.passed();
    if g.csv {
        csv_row(out, &["check", "cases", "failures"])?;
        for c in &rep.checks {
            csv_row(out, &[c.name.clone(), c.cases.to_string(), c.failures.to_string()])?;
        }
    } else {
        let mut body = serde_json::to_value(&rep)?;
        body["passed"] = passed.into();
        emit(out, "verify", &body)?;
    }
    Ok(passed)
}

pub fn experiment(g: Global, out: Out, arg: &str, table: bool, samples: Option<&Path>) -> Outcome {
    let spec: ExperimentSpec = input::json(arg)?;
    let (matrix, report) = run_and_compare(&spec, threads(g))?;
    if let Some(path) = samples {
        std::fs::write(path, matrix.to_csv())?;
    }
    if g.csv {
        write!(out, "{}", matrix.to_csv())?;
    } else if table {
        write!(out, "{}", report.to_table())?;
    } else {
        emit(out, "experiment", &json!({"spec": spec, "report": report}))?;
    }
    Ok(report.passed)
}
