//! Output rendering for each command in JSON, CSV and aligned-table form.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use tree_shuffle::ordering::index_ordering;
use tree_shuffle::spectrum::{Report, Separation, SpectrumTable, Stationary, TransitionMatrix};
use tree_shuffle::walk::ChainRun;
use tree_shuffle::PureTree;

use crate::{Failure, Format};

fn count(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn json_text(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    text
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("UTF-8 input")
}

fn table_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

fn tabular(
    format: Format,
    header: &[&str],
    rows: &[Vec<String>],
    json: impl FnOnce() -> Value,
) -> String {
    match format {
        Format::Json => json_text(&json()),
        Format::Csv => csv_text(header, rows),
        Format::Table => table_text(header, rows),
    }
}

pub fn info(tree: &PureTree, format: Format) -> String {
    let s = tree.stats();
    let fields = [
        ("depth", BigUint::from(s.depth)),
        ("inner_nodes", BigUint::from(s.inner_nodes)),
        ("leaves", BigUint::from(s.leaves)),
        ("state_count", s.state_count.clone()),
        ("lattice_size", s.lattice_size.clone()),
        ("semigroup_size", s.semigroup_size.clone()),
    ];
    let rows: Vec<Vec<String>> = fields
        .iter()
        .map(|(k, v)| vec![k.to_string(), v.to_string()])
        .collect();
    tabular(format, &["field", "value"], &rows, || {
        Value::Object(
            fields
                .iter()
                .map(|(k, v)| (k.to_string(), count(v)))
                .collect(),
        )
    })
}

pub fn spectrum(tree: &PureTree, table: &SpectrumTable, aggregate: bool, format: Format) -> String {
    let aggregated: Vec<(&BigRational, &BigUint)> = table.aggregated().iter().rev().collect();
    if aggregate {
        let rows: Vec<Vec<String>> = aggregated
            .iter()
            .map(|(e, m)| vec![e.to_string(), m.to_string()])
            .collect();
        return tabular(format, &["eigenvalue", "multiplicity"], &rows, || {
            json!({
                "aggregated": aggregated
                    .iter()
                    .map(|(e, m)| json!({ "eigenvalue": e.to_string(), "multiplicity": count(m) }))
                    .collect::<Vec<_>>()
            })
        });
    }
    let rows: Vec<Vec<String>> = table
        .rows()
        .iter()
        .map(|r| {
            vec![
                r.alpha.display(tree),
                r.eigenvalue.to_string(),
                r.multiplicity.to_string(),
            ]
        })
        .collect();
    tabular(
        format,
        &["alpha", "eigenvalue", "multiplicity"],
        &rows,
        || {
            json!({
                "rows": table
                    .rows()
                    .iter()
                    .map(|r| json!({
                        "alpha": r.alpha.to_json(tree),
                        "eigenvalue": r.eigenvalue.to_string(),
                        "multiplicity": count(&r.multiplicity),
                    }))
                    .collect::<Vec<_>>(),
                "aggregated": aggregated
                    .iter()
                    .map(|(e, m)| json!({ "eigenvalue": e.to_string(), "multiplicity": count(m) }))
                    .collect::<Vec<_>>(),
            })
        },
    )
}

pub fn matrix(tree: &PureTree, matrix: &TransitionMatrix, format: Format) -> String {
    let n = matrix.order();
    let dense = matrix.to_dense();
    match format {
        Format::Json => json_text(&json!({
            "states": matrix
                .states()
                .iter()
                .enumerate()
                .map(|(i, pi)| json!({ "index": i, "ordering": pi.to_json(tree) }))
                .collect::<Vec<_>>(),
            "matrix": dense
                .iter()
                .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })),
        Format::Csv | Format::Table => {
            let labels: Vec<String> = (0..n).map(|j| j.to_string()).collect();
            let mut header = vec!["state"];
            header.extend(labels.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = dense
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut cells = vec![i.to_string()];
                    cells.extend(row.iter().map(|x| x.to_string()));
                    cells
                })
                .collect();
            if format == Format::Csv {
                return csv_text(&header, &rows);
            }
            let legend: Vec<Vec<String>> = matrix
                .states()
                .iter()
                .enumerate()
                .map(|(i, pi)| vec![i.to_string(), pi.display(tree)])
                .collect();
            let mut out = table_text(&["state", "ordering"], &legend);
            out.push('\n');
            out.push_str(&table_text(&header, &rows));
            out
        }
    }
}

pub fn report(report: &Report, format: Format) -> String {
    let status = |c: &tree_shuffle::spectrum::Check| {
        serde_json::to_value(c.status)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    };
    let rows: Vec<Vec<String>> = report
        .checks
        .iter()
        .map(|c| vec![status(c), c.name.clone(), c.detail.clone()])
        .collect();
    tabular(format, &["status", "check", "detail"], &rows, || {
        json!({
            "passed": report.all_passed(),
            "checks": report
                .checks
                .iter()
                .map(|c| json!({ "check": c.name, "status": status(c), "detail": c.detail }))
                .collect::<Vec<_>>(),
        })
    })
}

pub fn separation(tree: &PureTree, result: &Separation, format: Format) -> String {
    let witness = result.witness.as_ref().map(|w| {
        (
            tree.label(w.parent).to_string(),
            tree.label(w.left).to_string(),
            tree.label(w.right).to_string(),
        )
    });
    let (node, left, right) = witness.clone().unwrap_or_default();
    let rows = vec![vec![result.separating.to_string(), node, left, right]];
    tabular(
        format,
        &["separating", "parent", "left", "right"],
        &rows,
        || {
            json!({
                "separating": result.separating,
                "witness": witness.map(|(p, l, r)| json!({ "parent": p, "pair": [l, r] })),
            })
        },
    )
}

fn legend(tree: &PureTree, i: usize) -> Result<tree_shuffle::LocalOrdering, Failure> {
    index_ordering(tree, i).map_err(Failure::from)
}

pub fn stationary(tree: &PureTree, result: &Stationary, format: Format) -> Result<String, Failure> {
    match result {
        Stationary::Unique(v) => {
            let mut rows = Vec::with_capacity(v.len());
            let mut entries = Vec::with_capacity(v.len());
            for (i, p) in v.iter().enumerate() {
                let pi = legend(tree, i)?;
                rows.push(vec![i.to_string(), pi.display(tree), p.to_string()]);
                entries.push(json!({ "index": i, "ordering": pi.to_json(tree), "probability": p.to_string() }));
            }
            Ok(tabular(
                format,
                &["state", "ordering", "probability"],
                &rows,
                || json!({ "unique": true, "distribution": entries }),
            ))
        }
        Stationary::NotUnique {
            eigenvalue_one_multiplicity: m,
        } => {
            let rows = vec![vec!["false".to_string(), m.to_string()]];
            Ok(tabular(
                format,
                &["unique", "eigenvalue_one_multiplicity"],
                &rows,
                || json!({ "unique": false, "eigenvalue_one_multiplicity": count(m) }),
            ))
        }
    }
}

pub fn simulation(
    tree: &PureTree,
    run: &ChainRun,
    exact: Option<&[BigRational]>,
    format: Format,
) -> Result<String, Failure> {
    if format == Format::Json {
        return Ok(json_text(&run.report(tree, exact)?));
    }
    let tv = match exact {
        Some(p) => Some(tree_shuffle::walk::tv_distance(&run.frequencies(), p)?),
        None => None,
    };
    let mut rows = Vec::new();
    for (&i, &c) in &run.counts {
        let pi = legend(tree, i)?;
        let expected = exact.map(|p| p[i].to_string()).unwrap_or_default();
        rows.push(vec![
            i.to_string(),
            pi.display(tree),
            c.to_string(),
            expected,
        ]);
    }
    let header = ["state", "ordering", "count", "stationary"];
    if format == Format::Csv {
        return Ok(csv_text(&header, &rows));
    }
    let mut out = format!(
        "seed {}  stream {}  steps {}  burn-in {}  tallied {}\n",
        run.seed,
        run.stream,
        run.steps,
        run.burn_in,
        run.tallied()
    );
    if let Some(tv) = tv {
        out.push_str(&format!(
            "tv distance {} (~{:.6})\n",
            tv,
            tv.to_f64().unwrap_or(f64::NAN)
        ));
    }
    out.push('\n');
    out.push_str(&table_text(&header, &rows));
    Ok(out)
}
