use std::fmt::Write;

use crate::document::{BasisTable, CohomologyRow, PagesTable, ReportDocument, Results};
use derham_core::theorems::VerificationReport;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Latex,
}

pub fn render(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
            s.push('\n');
            s
        }
        Format::Csv => match &doc.results {
            Results::Cohomology(rows) => cohomology_csv(rows),
            Results::Pages(table) => pages_csv(table),
            Results::Verify(reports) => verify_csv(reports),
            Results::Basis(table) => basis_csv(table),
        },
        Format::Latex => match &doc.results {
            Results::Cohomology(rows) => cohomology_latex(rows),
            Results::Pages(table) => pages_latex(table),
            Results::Verify(reports) => verify_latex(reports),
            Results::Basis(table) => basis_latex(table),
        },
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn cohomology_csv(rows: &[CohomologyRow]) -> String {
    let mut s = String::from("i,free_rank,invariant_factors\n");
    for row in rows {
        writeln!(s, "{},{},{}", row.i, row.free_rank, join(&row.invariant_factors, " ")).unwrap();
    }
    s
}

fn pages_csv(table: &PagesTable) -> String {
    let mut s = String::from("k,i,dim,differential_rank,expected_dim,identified,closed_form_agrees\n");
    for page in &table.pages {
        for (i, dim) in page.dims.iter().enumerate() {
            writeln!(
                s,
                "{},{},{},{},{},{},{}",
                page.k,
                i,
                dim,
                page.differential_ranks.get(i).copied().unwrap_or(0),
                page.expected_dims.get(i).copied().unwrap_or(0),
                page.identified,
                page.closed_form_agrees
            )
            .unwrap();
        }
    }
    s
}

fn failed_checks(report: &VerificationReport) -> Vec<&str> {
    report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn verify_csv(reports: &[VerificationReport]) -> String {
    let mut s = String::from("statement,r,n,p,k,status,failed_checks\n");
    for rep in reports {
        let status = if rep.passed() { "pass" } else { "fail" };
        let pm = &rep.parameters;
        writeln!(
            s,
            "{},{},{},{},{},{},{}",
            rep.statement.id(),
            pm.r,
            pm.n,
            opt(pm.p),
            opt(pm.k),
            status,
            failed_checks(rep).join(" ")
        )
        .unwrap();
    }
    s
}

fn basis_csv(table: &BasisTable) -> String {
    let mut s = String::from("index,alpha,wedge,form\n");
    for e in &table.elements {
        writeln!(s, "{},{},{},{}", e.index, join(&e.alpha, " "), join(&e.wedge, " "), e.form).unwrap();
    }
    s
}

/// `ℤ^f ⊕ (ℤ/d)^{m} ⊕ …` with repeated factors collected.
fn group_latex(free_rank: usize, factors: &[u64]) -> String {
    let mut parts = Vec::new();
    match free_rank {
        0 => {}
        1 => parts.push(r"\mathbb{Z}".to_string()),
        f => parts.push(format!(r"\mathbb{{Z}}^{{{f}}}")),
    }
    let mut idx = 0;
    while idx < factors.len() {
        let d = factors[idx];
        let m = factors[idx..].iter().take_while(|&&e| e == d).count();
        if m == 1 {
            parts.push(format!(r"\mathbb{{Z}}/{d}"));
        } else {
            parts.push(format!(r"(\mathbb{{Z}}/{d})^{{{m}}}"));
        }
        idx += m;
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(r" \oplus ")
    }
}

fn cohomology_latex(rows: &[CohomologyRow]) -> String {
    let mut s = String::from("\\begin{tabular}{rl}\n$i$ & $H^i$ \\\\\n\\hline\n");
    for row in rows {
        writeln!(s, "{} & ${}$ \\\\", row.i, group_latex(row.free_rank, &row.invariant_factors)).unwrap();
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn pages_latex(table: &PagesTable) -> String {
    let width = table.pages.iter().map(|pg| pg.dims.len()).max().unwrap_or(0);
    let mut s = format!("\\begin{{tabular}}{{r{}l}}\n$k$", "r".repeat(width));
    for i in 0..width {
        write!(s, " & $E_k^{{{i}}}$").unwrap();
    }
    s.push_str(" & identified \\\\\n\\hline\n");
    for page in &table.pages {
        write!(s, "{}", page.k).unwrap();
        for i in 0..width {
            write!(s, " & {}", page.dims.get(i).copied().unwrap_or(0)).unwrap();
        }
        writeln!(s, " & {} \\\\", if page.identified { "yes" } else { "no" }).unwrap();
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn verify_latex(reports: &[VerificationReport]) -> String {
    let mut s = String::from("\\begin{tabular}{lll}\nstatement & parameters & status \\\\\n\\hline\n");
    for rep in reports {
        let status = if rep.passed() { "pass" } else { "fail" };
        writeln!(s, "\\texttt{{{}}} & ${}$ & {} \\\\", rep.statement.id().replace('_', r"\_"), rep.parameters, status)
            .unwrap();
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn form_latex(alpha: &[u32], wedge: &[usize]) -> String {
    let name = |j: usize| {
        if alpha.len() <= 3 {
            ["x", "y", "z"][j].to_string()
        } else {
            format!("x_{{{}}}", j + 1)
        }
    };
    let mut poly = String::new();
    for (j, &a) in alpha.iter().enumerate() {
        match a {
            0 => {}
            1 => poly.push_str(&name(j)),
            _ => write!(poly, "{}^{{{a}}}", name(j)).unwrap(),
        }
    }
    let forms: Vec<String> = wedge.iter().map(|&t| format!("d{}", name(t))).collect();
    match (poly.is_empty(), forms.is_empty()) {
        (true, true) => "1".into(),
        (false, true) => poly,
        (true, false) => forms.join(r" \wedge "),
        (false, false) => format!(r"{poly}\,{}", forms.join(r" \wedge ")),
    }
}

fn basis_latex(table: &BasisTable) -> String {
    let mut s = String::from("\\begin{tabular}{rl}\nindex & element \\\\\n\\hline\n");
    for e in &table.elements {
        writeln!(s, "{} & ${}$ \\\\", e.index, form_latex(&e.alpha, &e.wedge)).unwrap();
    }
    s.push_str("\\end{tabular}\n");
    s
}
