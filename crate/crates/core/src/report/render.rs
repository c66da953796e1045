use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::util::{escape_cell, html_escape};

use super::rows::{ReportRow, TestReport, UniqueOperationIndex};
use super::ReportError;

/// File-system-safe sheet name for a menu label.
pub fn sheet_file_name(menu: &str) -> String {
    let stem: String = menu
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect();
    format!("{stem}.csv")
}

fn join_lines<T: ToString>(items: &[T]) -> String {
    escape_cell(&items.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
}

fn sheets(report: &TestReport) -> BTreeMap<&str, Vec<&ReportRow>> {
    let mut by_menu: BTreeMap<&str, Vec<&ReportRow>> = BTreeMap::new();
    for r in report.rows() {
        by_menu.entry(r.menu.as_str()).or_default().push(r);
    }
    by_menu
}

/// Builds the per-menu CSV sheets and `index.html` as `(file name, bytes)`.
pub fn render_files(report: &TestReport, index: &UniqueOperationIndex) -> Result<Vec<(String, Vec<u8>)>, ReportError> {
    let mut files = Vec::new();
    let sheets = sheets(report);
    for (menu, rows) in &sheets {
        let name = sheet_file_name(menu);
        let csv_err = |e: csv::Error| ReportError::Io { path: PathBuf::from(&name), message: e.to_string() };
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(["ID", "Actions", "Outputs"]).map_err(csv_err)?;
        for r in rows {
            w.write_record([r.id.clone(), join_lines(&r.actions), join_lines(&r.outputs)])
                .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| csv_err(e.into_error().into()))?;
        files.push((name, bytes));
    }
    files.push(("index.html".to_string(), index_html(&sheets, index).into_bytes()));
    Ok(files)
}

/// Writes [`render_files`] into `out_dir`; returns the written paths.
pub fn render(report: &TestReport, index: &UniqueOperationIndex, out_dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| ReportError::Io { path: out_dir.to_path_buf(), message: e.to_string() })?;
    let mut written = Vec::new();
    for (name, bytes) in render_files(report, index)? {
        let path = out_dir.join(name);
        fs::write(&path, bytes).map_err(|e| ReportError::Io { path: path.clone(), message: e.to_string() })?;
        written.push(path);
    }
    Ok(written)
}

fn index_html(sheets: &BTreeMap<&str, Vec<&ReportRow>>, index: &UniqueOperationIndex) -> String {
    let mut h = String::new();
    h.push_str("<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>Unique operations</title>\n");
    h.push_str("<style>table{border-collapse:collapse}td,th{border:1px solid #999;padding:2px 6px;vertical-align:top;font:12px monospace}</style>\n");
    h.push_str("</head><body>\n<h1>Unique operations</h1>\n");
    for (menu, m) in &index.menus {
        let _ = writeln!(h, "<h2>{} ({} test cases)</h2>\n<ul>", html_escape(menu), m.tests);
        for (op, rows) in &m.operations {
            let _ = write!(h, "<li>{} &times; {}:", html_escape(op), rows.len());
            for id in rows {
                let _ = write!(h, " <a href=\"#{0}\">{0}</a>", html_escape(id));
            }
            h.push_str("</li>\n");
        }
        h.push_str("</ul>\n");
    }
    for (menu, rows) in sheets {
        let _ = writeln!(h, "<h2>Sheet {}</h2>\n<table>\n<tr><th>ID</th><th>Actions</th><th>Outputs</th></tr>", html_escape(menu));
        for r in rows {
            let cell = |lines: Vec<String>| lines.iter().map(|l| html_escape(l)).collect::<Vec<_>>().join("<br>");
            let _ = writeln!(
                h,
                "<tr id=\"{0}\"><td>{0}</td><td>{1}</td><td>{2}</td></tr>",
                html_escape(&r.id),
                cell(r.actions.clone()),
                cell(r.outputs.iter().map(ToString::to_string).collect()),
            );
        }
        h.push_str("</table>\n");
    }
    h.push_str("</body></html>\n");
    h
}
