//! JSON, TSV and CSV writers for retrieval and alignment results.

use std::io::Write;

use serde::Serialize;

use super::{AlignmentPair, AlignmentReport, RankedList};

pub fn write_json<T: Serialize, W: Write>(value: &T, mut writer: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writeln!(writer)
}

/// `src_id<TAB>tgt_id<TAB>sim<TAB>group`, group empty when ungrouped.
pub fn write_alignment_tsv<W: Write>(pairs: &[AlignmentPair], mut writer: W) -> std::io::Result<()> {
    for p in pairs {
        writeln!(
            writer,
            "{}\t{}\t{:.6}\t{}",
            p.source,
            p.target,
            p.similarity,
            p.group.as_deref().unwrap_or("")
        )?;
    }
    Ok(())
}

/// `query<TAB>rank<TAB>candidate<TAB>sim`, one line per entry.
pub fn write_ranked_tsv<W: Write>(lists: &[RankedList], mut writer: W) -> std::io::Result<()> {
    for l in lists {
        for (i, e) in l.entries.iter().enumerate() {
            writeln!(writer, "{}\t{}\t{}\t{:.6}", l.query, i + 1, e.candidate, e.similarity)?;
        }
    }
    Ok(())
}

pub fn write_histogram_csv<W: Write>(report: &AlignmentReport, mut writer: W) -> std::io::Result<()> {
    writeln!(writer, "bin,lower,upper,count")?;
    let bound = |b: Option<f64>| b.map_or(String::new(), |x| format!("{x:.1}"));
    for b in &report.histogram {
        writeln!(writer, "\"{}\",{},{},{}", b.label(), bound(b.lower), bound(b.upper), b.count)?;
    }
    Ok(())
}

pub fn write_ranges_csv<W: Write>(report: &AlignmentReport, mut writer: W) -> std::io::Result<()> {
    writeln!(writer, "group,pairs,min,max")?;
    for g in &report.groups {
        writeln!(writer, "{},{},{:.6},{:.6}", g.group, g.pairs, g.min, g.max)?;
    }
    Ok(())
}
