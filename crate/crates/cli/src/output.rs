//! Human-readable rendering.

use permreal::bench::BenchReport;
use permreal::verify::{CheckStatus, VerificationReport};
use permreal::{ConditionReport, Classification, Realization};

/// Right-aligned columns.
pub fn aligned(rows: &[Vec<String>]) -> String {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(0);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|c| format!("{c:>width$}")).collect();
            format!("  {}\n", cells.join("  "))
        })
        .collect()
}

pub fn report_lines(r: &VerificationReport) -> String {
    let mut out = format!("certificate: {}\n", if r.passed { "pass" } else { "fail" });
    out += &format!("  nonnegative: {} (min entry {})\n", r.nonneg_ok, r.min_entry);
    out += &format!("  structure: {}\n", r.structure_ok);
    out += &format!(
        "  characteristic polynomial: {} (max diff {:e}, tol {:e})\n",
        r.charpoly_ok, r.charpoly_max_diff, r.charpoly_tol
    );
    if r.eigenpair_ok == CheckStatus::NotApplicable {
        out += "  eigenpairs: n/a\n";
    } else {
        out += &format!("  eigenpairs: {} (max residual {:e})\n", r.eigenpair_ok, r.max_residual);
    }
    if r.exact {
        out += "  arithmetic: exact rational\n";
    }
    out
}

pub fn realization(r: &Realization) -> String {
    let mut out = format!("method: {}\n", r.method);
    if let Some(case) = r.params.case {
        out += &format!("case: {case}\n");
    }
    if r.params.block_sizes.len() > 1 {
        let sizes: Vec<String> = r.params.block_sizes.iter().map(usize::to_string).collect();
        out += &format!("blocks: {}\n", sizes.join("+"));
    }
    if let Some(t) = &r.params.tuple {
        out += &format!("tuple: {t}\n");
    }
    out += "matrix:\n";
    let rows: Vec<Vec<String>> = r
        .matrix
        .row_iter()
        .map(|row| row.iter().map(|v| v.to_string()).collect())
        .collect();
    out += &aligned(&rows);
    if let Some(c) = &r.certificate {
        out += &report_lines(c);
    }
    out
}

pub fn check(class: &Classification, cond: &ConditionReport) -> String {
    let kind = format!("{:?}", class.kind);
    let mut out = format!("kind: {kind}\n");
    out += &format!("positive entries: {}\n", class.positives);
    out += &format!("trace: {}\n", class.trace);
    out += &format!("spectral radius: {}\n", cond.spectral_radius);
    out += &format!("perron condition: {}\n", if cond.perron_ok { "pass" } else { "fail" });
    out += &format!(
        "power sums k = 1..{}: {}\n",
        cond.depth,
        if cond.power_sum_ok { "pass" } else { "fail" }
    );
    let shown: Vec<String> = cond.power_sums.iter().take(6).map(|s| format!("{s:e}")).collect();
    out += &format!("  s_1..s_{}: {}\n", shown.len(), shown.join(", "));
    out
}

pub fn bench(r: &BenchReport) -> String {
    let mut out = format!(
        "{:>6} {:>14} {:>14} {:>14} {:>12}\n",
        "n", "permutative s", "poly s", "companion s", "peak |c_k|"
    );
    for row in &r.rows {
        out += &format!(
            "{:>6} {:>14.3e} {:>14.3e} {:>14.3e} {:>12.3e}{}\n",
            row.n,
            row.permutative_secs,
            row.poly_from_roots_secs,
            row.companion_secs,
            row.peak_coeff_abs,
            if row.coeff_overflow { "  overflow" } else { "" }
        );
    }
    out += "growth per doubling (permutative, poly_from_roots, companion):\n";
    for q in &r.ratios {
        out += &format!(
            "{:>6} -> {:<6} {:>7.2} {:>7.2} {:>7.2}\n",
            q.from_n, q.to_n, q.permutative, q.poly_from_roots, q.companion
        );
    }
    out += &format!("n = 4 cross-check: {}\n", if r.cross_check_n4 { "pass" } else { "fail" });
    out += &format!("note: {}\n", r.note);
    out
}
