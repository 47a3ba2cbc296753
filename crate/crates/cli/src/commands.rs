use std::fs;
use std::path::Path;

use scidforge::bounds::{self, BoundReport};
use scidforge::certify::{self, Certificate, Verdict, ALL_INEQUALITIES};
use scidforge::geom;
use scidforge::gf::FieldCtx;
use scidforge::optimize;
use scidforge::scid::{self, Scid, Verification};
use scidforge::search::{self, SearchOptions};
use scidforge::{Error, Result};
use serde_json::{json, Value};

use crate::{Command, Report};

fn f8(x: f64) -> String {
    format!("{x:.8}")
}

fn opt8(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), f8)
}

fn sig12(x: f64) -> Value {
    if x.is_finite() {
        json!(format!("{x:.11e}").parse::<f64>().expect("formatted float parses"))
    } else {
        Value::Null
    }
}

fn opt12(x: Option<f64>) -> Value {
    x.map_or(Value::Null, sig12)
}

fn row(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

pub fn run(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Bounds { q, k, t } => run_bounds(*q, *k, *t),
        Command::Table1 => Ok(run_table1()),
        Command::Optimize { q, k, step, tol } => run_optimize(*q, *k, *step, *tol),
        Command::Certify { name, out } => run_certify(name.as_deref(), out.as_deref()),
        Command::Check { file, c, d } => run_check(file, c.zip(*d)),
        Command::Search {
            q,
            n,
            k,
            jobs,
            node_budget,
            size_cap,
            out,
        } => run_search(
            *q,
            *n,
            *k,
            *jobs,
            SearchOptions {
                size_cap: *size_cap,
                node_budget: *node_budget,
            },
            out.as_deref(),
        ),
        Command::Enum { q, n, k } => run_enum(*q, *n, *k),
    }
}

fn bound_json(r: &BoundReport) -> Value {
    json!({
        "q": r.q,
        "k": r.k,
        "t": r.t,
        "classical": r.classical.to_string(),
        "comparator": r.comparator.value.to_string(),
        "comparator_applicable": r.comparator.applicable,
        "classical_density": sig12(r.classical_density),
        "c_q": opt12(r.c_q),
        "B_q": opt12(r.b_q),
        "discriminant": opt12(r.discriminant),
        "F_q": opt12(r.f_q),
        "G_q": opt12(r.g_q),
        "asymptotic": sig12(r.asymptotic),
        "F_q_improves": r.f_q_improves,
        "asymptotic_improves": r.asymptotic_improves,
        "optimized": opt12(r.optimized),
    })
}

fn run_bounds(q: u64, k: u32, t: u32) -> Result<Report> {
    let mut r = bounds::bound_report(q, k, t)?;
    optimize::attach_optimized(&mut r)?;
    let rows = vec![
        row("q", r.q),
        row("k", r.k),
        row("t", r.t),
        row("classical", &r.classical),
        row("comparator", &r.comparator.value),
        row("comparator_applicable", r.comparator.applicable),
        row("classical_density", f8(r.classical_density)),
        row("c_q", opt8(r.c_q)),
        row("B_q", opt8(r.b_q)),
        row("discriminant", opt8(r.discriminant)),
        row("F_q", opt8(r.f_q)),
        row("G_q", opt8(r.g_q)),
        row("asymptotic", f8(r.asymptotic)),
        row("F_q_improves", r.f_q_improves),
        row("asymptotic_improves", r.asymptotic_improves),
        row("optimized", opt8(r.optimized)),
    ];
    Ok(Report::new(bound_json(&r), rows, true))
}

fn run_table1() -> Report {
    let table = bounds::table1();
    let json = Value::Array(
        table
            .iter()
            .map(|r| {
                json!({
                    "q": format!("2^{}", r.exponent),
                    "F_q": r.f_q,
                    "asymptotic": r.asymptotic,
                })
            })
            .collect(),
    );
    let mut text = format!("{:<6}{:>12}{:>14}\n", "q", "F_q", "asymptotic");
    for r in &table {
        text.push_str(&format!(
            "{:<6}{:>12.8}{:>14.8}\n",
            format!("2^{}", r.exponent),
            r.f_q,
            r.asymptotic
        ));
    }
    let mut report = Report::new(json, Vec::new(), true);
    report.text = Some(text);
    report.csv = Some(bounds::table1_csv());
    report
}

fn run_optimize(q: u64, k: u32, step: f64, tol: f64) -> Result<Report> {
    let r = optimize::optimize_cd(q, k, step, tol)?;
    let rows = vec![
        row("q", r.q),
        row("k", r.k),
        row("c", f8(r.c_star)),
        row("d", f8(r.d_star)),
        row("bound", f8(r.bound)),
        row("default_bound", opt8(r.default_bound)),
        row("F_q", opt8(r.f_q)),
        row("iterations", r.iterations),
        row("valid", r.valid),
    ];
    Ok(Report::new(r.to_json_value(), rows, r.valid))
}

fn run_certify(name: Option<&str>, out: Option<&Path>) -> Result<Report> {
    let certs: Vec<Certificate> = match name {
        Some(n) => vec![certify::certify_tail_sign(n)?],
        None => ALL_INEQUALITIES
            .iter()
            .map(|i| certify::certify_tail_sign(i.name()))
            .collect::<Result<_>>()?,
    };
    let json = Value::Array(certs.iter().map(Certificate::to_json_value).collect());
    if let Some(path) = out {
        let body = serde_json::to_string_pretty(&json)?;
        fs::write(path, body + "\n")
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    }
    let mut rows = Vec::new();
    for c in &certs {
        rows.push(row(
            &c.name,
            format!(
                "{} (P(t) {} 0 for t >= 7^(1/6); degree {}, {} real root(s) in [1, cauchy])",
                c.verdict.as_str(),
                c.claim().trim_end_matches('0'),
                c.polynomial.degree().unwrap_or(0),
                c.isolating_intervals.len()
            ),
        ));
        for d in &c.diagnostics {
            rows.push(row(&format!("{}.note", c.name), d));
        }
    }
    let ok = certs.iter().all(|c| c.verdict == Verdict::Certified);
    Ok(Report::new(json, rows, ok))
}

fn run_check(file: &Path, cd: Option<(f64, f64)>) -> Result<Report> {
    let text = fs::read_to_string(file)
        .map_err(|e| Error::Format(format!("{}: {e}", file.display())))?;
    let mut s = Scid::from_json(&text)?;
    let verification = s.verify();
    let mut json = json!({
        "q": s.q(),
        "n": s.n(),
        "k": s.k(),
        "size": s.len(),
        "valid": verification.is_valid(),
    });
    let mut rows = vec![
        row("q", s.q()),
        row("n", s.n()),
        row("k", s.k()),
        row("size", s.len()),
        row("valid", verification.is_valid()),
    ];
    if let Verification::Invalid {
        first,
        second,
        meet_dim,
    } = verification
    {
        json["offending_pair"] = json!([first, second]);
        json["meet_dim"] = json!(meet_dim);
        rows.push(row("offending_pair", format!("{first},{second}")));
        rows.push(row("meet_dim", meet_dim));
        return Ok(Report::new(json, rows, false));
    }

    let sf = scid::is_sunflower(&s)?;
    json["is_sunflower"] = json!(sf.is_sunflower);
    json["center"] = json!(sf.center.as_ref().map(|c| c.to_rows()));
    json["max_blocks_through_point"] = json!(scid::max_blocks_through_point(&s));
    rows.push(row("is_sunflower", sf.is_sunflower));
    if let Some(c) = &sf.center {
        rows.push(row("center", format!("{:?}", c.to_rows())));
    }
    rows.push(row("max_blocks_through_point", scid::max_blocks_through_point(&s)));

    let mut ok = true;
    if let Some((c, d)) = cd {
        let r = scid::diagnostic_report(&s, c, d)?;
        ok = !r.lemma_violated;
        json["diagnostics"] = json!({
            "c": sig12(r.c),
            "d": sig12(r.d),
            "s_exact": r.s_exact,
            "s": sig12(r.s),
            "vacuous": r.vacuous,
            "below_theorem_range": r.below_theorem_range,
            "rich_point_count_per_block": r.rich_point_count_per_block,
            "rich_line_count_per_block": r.rich_line_count_per_block,
            "poor_line_count_per_block": r.poor_line_count_per_block,
            "min_rich_lines": sig12(r.min_rich_lines),
            "poor_line_bound": sig12(r.poor_line_bound),
            "empirical_rich_line_avg": sig12(r.empirical_rich_line_avg),
            "f_s": sig12(r.f_s),
            "f_s_applicable": r.f_s_applicable,
            "lemma_violated": r.lemma_violated,
            "violations": r.violations,
        });
        let list = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        rows.extend([
            row("c", f8(r.c)),
            row("d", f8(r.d)),
            row("s", format!("{} ({})", r.s_exact, f8(r.s))),
            row("vacuous", r.vacuous),
            row("below_theorem_range", r.below_theorem_range),
            row("rich_points_per_block", list(&r.rich_point_count_per_block)),
            row("rich_lines_per_block", list(&r.rich_line_count_per_block)),
            row("poor_lines_per_block", list(&r.poor_line_count_per_block)),
            row("min_rich_lines", f8(r.min_rich_lines)),
            row("poor_line_bound", f8(r.poor_line_bound)),
            row("empirical_rich_line_avg", f8(r.empirical_rich_line_avg)),
            row("f_s", f8(r.f_s)),
            row("f_s_applicable", r.f_s_applicable),
            row("lemma_violated", r.lemma_violated),
        ]);
        for v in &r.violations {
            rows.push(row("violation", v));
        }
    }
    Ok(Report::new(json, rows, ok))
}

fn run_search(
    q: u64,
    n: usize,
    k: usize,
    jobs: Option<usize>,
    opts: SearchOptions,
    out: Option<&Path>,
) -> Result<Report> {
    let ctx = FieldCtx::with_order(q)?;
    let graph = search::build_intersection_graph(&ctx, n, k)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::ParamOutOfRange(format!("jobs: {e}")))?;
    let result = pool.install(|| search::max_nonsunflower_clique(&graph, opts))?;
    let report = bounds::bound_report(q, k as u32, 0)?;
    let cmp = search::compare_to_bounds(&result, &report)?;

    if let Some(path) = out {
        let write = |p: &Path, body: String| {
            fs::write(p, body).map_err(|e| Error::Format(format!("{}: {e}", p.display())))
        };
        if let Some(best) = &result.best_scid {
            write(path, best.to_json() + "\n")?;
        }
        let mut side = path.as_os_str().to_owned();
        side.push(".sidecar.json");
        write(
            Path::new(&side),
            serde_json::to_string_pretty(&result.sidecar_json())? + "\n",
        )?;
    }

    let json = json!({
        "q": q,
        "n": n,
        "k": k,
        "vertices": graph.len(),
        "edges": graph.edge_count(),
        "best_size": result.best_size,
        "exhaustive": result.exhaustive,
        "nodes": result.nodes_explored,
        "classical_bound": result.classical_bound.to_string(),
        "classical_margin": cmp.classical_margin.to_string(),
        "theorem_bound": opt12(cmp.theorem_bound),
        "theorem_margin": opt12(cmp.theorem_margin),
        "below_theorem_range": cmp.below_theorem_range,
        "within_bounds": result.within_bounds,
        "scid": result.best_scid.as_ref().map(|s| serde_json::to_value(s.to_file())).transpose()?,
    });
    let rows = vec![
        row("q", q),
        row("n", n),
        row("k", k),
        row("vertices", graph.len()),
        row("edges", graph.edge_count()),
        row("best_size", result.best_size),
        row("exhaustive", result.exhaustive),
        row("nodes", result.nodes_explored),
        row("classical_bound", &result.classical_bound),
        row("classical_margin", &cmp.classical_margin),
        row("theorem_bound", opt8(cmp.theorem_bound)),
        row("theorem_margin", opt8(cmp.theorem_margin)),
        row("below_theorem_range", cmp.below_theorem_range),
        row("within_bounds", result.within_bounds),
    ];
    Ok(Report::new(json, rows, result.within_bounds))
}

fn run_enum(q: u64, n: usize, k: usize) -> Result<Report> {
    let ctx = FieldCtx::with_order(q)?;
    if k > n {
        return Err(Error::KOutOfRange {
            n: n as u64,
            k: k as u64,
        });
    }
    let count = geom::enumerate_subspaces(&ctx, n, k as isize)?.count() as u64;
    let expected = geom::gaussian_binomial(n as u64 + 1, k as u64 + 1, q)?;
    let ok = expected == count.into();
    let json = json!({
        "q": q,
        "n": n,
        "k": k,
        "count": count,
        "gaussian_binomial": expected.to_string(),
        "match": ok,
    });
    let rows = vec![
        row("q", q),
        row("n", n),
        row("k", k),
        row("count", count),
        row("gaussian_binomial", &expected),
        row("match", ok),
    ];
    Ok(Report::new(json, rows, ok))
}
