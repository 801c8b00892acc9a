//! Inputs shared by the benchmarks.

use xling_core::bidict::Side;
use xling_core::corpus::AlignedCorpus;
use xling_core::synthetic::{Generator, SyntheticConfig};
use xling_core::textprep::{PipelineConfig, TextPipeline};

pub fn corpus(n: usize) -> AlignedCorpus {
    Generator::new(SyntheticConfig::default())
        .parallel_corpus(n, "d")
        .expect("synthetic corpus")
        .0
}

pub fn pipeline() -> TextPipeline {
    TextPipeline::new(PipelineConfig::default()).expect("default pipeline")
}

/// Processed source and target documents of a synthetic corpus.
pub fn processed(n: usize) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let c = corpus(n);
    let p = pipeline();
    let texts = |side: Side| -> Vec<String> {
        let docs = match side {
            Side::Source => c.source_docs(),
            Side::Target => c.target_docs(),
        };
        docs.iter().map(|d| d.text.clone()).collect()
    };
    (
        p.process_corpus(&texts(Side::Source), Side::Source),
        p.process_corpus(&texts(Side::Target), Side::Target),
    )
}

/// An article with templates, links, a table and references.
pub fn article(paragraphs: usize) -> String {
    let mut out = String::from("{{Infobox food|name=Olive oil|image=[[File:Oil.jpg|thumb]]}}\n'''Olive oil''' is a liquid fat.\n");
    for i in 0..paragraphs {
        out.push_str(&format!(
            "== Section {i} ==\nIt is obtained from [[olive]]s, see [[Mediterranean Basin|the basin]].<ref>{{{{cite web|url=http://x.org/{i}}}}}</ref>\n\
             {{| class=\"wikitable\"\n|-\n| cell {i} || value\n|}}\n<!-- note -->[http://example.org/{i} source] &amp; more.\n"
        ));
    }
    out.push_str("[[Category:Oils]]\n[[ar:زيت الزيتون]]\n[[fr:Huile d'olive]]\n");
    out
}
