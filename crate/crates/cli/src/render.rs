//! Fixed-width text rendering for humans. JSON stays the canonical output.

use std::fmt::Write;

use entro::{EntropyDiagram, LogBase};

const CELL: usize = 14;

/// Four decimals, without a spurious sign on values that round to zero.
pub fn fixed4(v: f64) -> String {
    let v = if v.abs() < 5e-5 { 0.0 } else { v };
    format!("{v:.4}")
}

fn base_note(base: LogBase) -> &'static str {
    match base {
        LogBase::Bits => "log base 2, bits",
        LogBase::Nats => "log base e, nats",
    }
}

fn row(out: &mut String, entries: &[(String, f64)]) {
    let rule: String = entries
        .iter()
        .map(|_| format!("+{}", "-".repeat(CELL)))
        .collect::<String>()
        + "+";
    let names: String = entries
        .iter()
        .map(|(n, _)| format!("|{n:^CELL$}"))
        .collect::<String>()
        + "|";
    let values: String = entries
        .iter()
        .map(|(_, v)| format!("|{:^CELL$}", fixed4(*v)))
        .collect::<String>()
        + "|";
    let _ = writeln!(out, "{rule}\n{names}\n{values}\n{rule}");
}

/// Three cells side by side, or the seven tripartite cells as singles,
/// pairs, then the labeled center on its own row.
pub fn render_ascii_venn(d: &EntropyDiagram) -> String {
    let named: Vec<(String, f64)> = d
        .cell_names()
        .into_iter()
        .zip(d.cells().iter().copied())
        .collect();
    let mut out = format!(
        "entropy diagram over ({}) [{}]\n",
        d.labels().join(", "),
        base_note(d.log_base())
    );
    if named.len() == 3 {
        row(&mut out, &named);
    } else {
        row(&mut out, &named[0..3]);
        row(&mut out, &named[3..6]);
        let (name, v) = &named[6];
        let _ = writeln!(out, "center {name}: {}", fixed4(*v));
    }
    let _ = writeln!(out, "joint: {}", fixed4(d.joint()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bipartite_layout() {
        let d =
            EntropyDiagram::bipartite(["A".into(), "B".into()], [-1.0, 2.0, -1.0], LogBase::Bits);
        let text = render_ascii_venn(&d);
        for needle in ["A|B", "A:B", "B|A", "-1.0000", "2.0000", "log base 2"] {
            assert!(text.contains(needle), "{needle} missing from\n{text}");
        }
        let d =
            EntropyDiagram::bipartite(["A1".into(), "A2".into()], [1.0, 0.0, 1.0], LogBase::Nats);
        let text = render_ascii_venn(&d);
        assert!(text.contains("0.0000") && text.contains("A1:A2") && text.contains("log base e"));
    }

    #[test]
    fn tripartite_center_last() {
        let d = EntropyDiagram::from_subset_entropies(
            vec!["A".into(), "B".into(), "C".into()],
            LogBase::Bits,
            |m| Ok(f64::from(m.count_ones())),
        )
        .unwrap();
        let text = render_ascii_venn(&d);
        let center = text.find("center A:B:C").expect("center row");
        for name in ["A|BC", "B|AC", "C|AB", "A:B|C", "A:C|B", "B:C|A"] {
            assert!(text.find(name).unwrap() < center, "{name}");
        }
    }
}
