//! Generated matplotlib scripts for CSV output.

use std::fmt::Write as _;

/// What to draw from a CSV produced by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x: String,
    pub y: Vec<String>,
    /// Columns whose distinct value combinations become separate curves.
    pub group_by: Vec<String>,
    pub log_y: bool,
}

fn py_list(items: &[String]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| format!("{s:?}")).collect();
    format!("[{}]", quoted.join(", "))
}

/// Python source that plots `csv_path` (overridable on the command line).
pub fn render(spec: &PlotSpec, csv_path: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "#!/usr/bin/env python3");
    let _ = writeln!(
        s,
        "\"\"\"Plot {} from the CSV written by covert-relay.\"\"\"",
        spec.title
    );
    s.push_str(
        "import csv\nimport sys\nfrom collections import defaultdict\n\nimport matplotlib.pyplot as plt\n\n",
    );
    let _ = writeln!(
        s,
        "CSV_PATH = sys.argv[1] if len(sys.argv) > 1 else {csv_path:?}"
    );
    let _ = writeln!(s, "X = {:?}", spec.x);
    let _ = writeln!(s, "YS = {}", py_list(&spec.y));
    let _ = writeln!(s, "GROUP_BY = {}", py_list(&spec.group_by));
    let _ = writeln!(s, "LOG_Y = {}", if spec.log_y { "True" } else { "False" });
    let _ = writeln!(s, "TITLE = {:?}", spec.title);
    s.push_str(
        r#"

def number(cell):
    return float(cell) if cell.strip() else float("nan")


with open(CSV_PATH, newline="") as fh:
    rows = list(csv.DictReader(fh))

fig, axes = plt.subplots(len(YS), 1, figsize=(6.4, 3.2 * len(YS)), squeeze=False)
for ax, y in zip(axes[:, 0], YS):
    curves = defaultdict(lambda: ([], []))
    for row in rows:
        label = ", ".join(f"{g}={row[g].strip()}" for g in GROUP_BY)
        xs, ys = curves[label]
        xs.append(number(row[X]))
        ys.append(number(row[y]))
    for label, (xs, ys) in curves.items():
        ax.plot(xs, ys, marker=".", label=label or y)
    ax.set_xlabel(X)
    ax.set_ylabel(y)
    if LOG_Y:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize="small")
axes[0, 0].set_title(TITLE)
fig.tight_layout()
out = CSV_PATH.rsplit(".", 1)[0] + ".png"
fig.savefig(out, dpi=150)
print(f"wrote {out}")
"#,
    );
    s
}
