use serde::Serialize;
use xling_core::retrieval::{
    align_corpora, alignment_report, gold_from_pairs, write_alignment_tsv, write_histogram_csv, write_json,
    write_ranges_csv, AlignOptions, GroupBy,
};
use xling_core::{Error, Result};

use super::{dictionary_path, load_corpus, resolve_pipeline, LoadedModel};
use crate::args::{AlignArgs, GroupArg, PipelineArgs};
use crate::config::{data_path, ConfigFile};
use crate::io::{read_documents, read_gold, sibling, write_atomic};
use crate::manifest::{manifest_path, Manifest};
use crate::pipeline::PipelineSpec;

#[derive(Debug, Serialize)]
struct AlignSettings {
    top_n: usize,
    group_by: Option<GroupBy>,
    mutual_best: bool,
    pipeline: PipelineSpec,
}

pub fn run(args: &AlignArgs, config: &ConfigFile) -> Result<()> {
    let loaded = LoadedModel::load(&args.model)?;
    let dict = dictionary_path(None, config)?;
    let (spec, pipeline) = resolve_pipeline(&PipelineArgs::default(), config, dict, Some(&loaded))?;
    let options = AlignOptions {
        top_n: config.pick(args.top_n, "top_n", 15)?,
        group_by: config.pick_opt(args.group_by, "group_by")?.map(GroupArg::into),
        mutual_best: args.mutual_best || config.get::<bool>("mutual_best")?.unwrap_or(false),
    };
    let mut inputs = vec![data_path(&args.model)];
    let (sources, targets, mut labels) = match (&args.corpus, &args.source, &args.target) {
        (Some(c), _, _) => {
            inputs.push(data_path(c));
            let corpus = load_corpus(c)?;
            let gold = gold_from_pairs(&corpus);
            let (s, t) = corpus.into_parts();
            (s, t, Some(gold))
        }
        (None, Some(s), Some(t)) => {
            let (s, t) = (data_path(s), data_path(t));
            let docs = (read_documents(&s)?, read_documents(&t)?);
            inputs.extend([s, t]);
            (docs.0, docs.1, None)
        }
        _ => return Err(Error::Precondition("give --corpus, or --source and --target".into())),
    };
    if let Some(g) = &args.gold {
        let g = data_path(g);
        labels = Some(read_gold(&g)?);
        inputs.push(g);
    }

    let alignment = align_corpora(&sources, &targets, &loaded.model, &pipeline, &options)?;
    let report = alignment_report(&alignment.pairs, labels.as_ref())?;
    let report_path = args.report.clone().unwrap_or_else(|| sibling(&args.output, ".report.json"));
    let hist_path = args.histogram.clone().unwrap_or_else(|| sibling(&args.output, ".histogram.csv"));
    let ranges_path = args.ranges.clone().unwrap_or_else(|| sibling(&args.output, ".ranges.csv"));
    write_atomic(&args.output, |w| write_alignment_tsv(&alignment.pairs, w))?;
    write_atomic(&report_path, |w| {
        write_json(
            &serde_json::json!({
                "report": report,
                "skipped_groups": alignment.skipped_groups,
            }),
            w,
        )
    })?;
    write_atomic(&hist_path, |w| write_histogram_csv(&report, w))?;
    write_atomic(&ranges_path, |w| write_ranges_csv(&report, w))?;

    let settings = AlignSettings {
        top_n: options.top_n,
        group_by: options.group_by,
        mutual_best: options.mutual_best,
        pipeline: spec,
    };
    let mut manifest = Manifest::new("align", &settings, None)?;
    for f in &inputs {
        manifest = manifest.input(f)?;
    }
    manifest
        .output(&args.output)?
        .output(&report_path)?
        .output(&hist_path)?
        .output(&ranges_path)?
        .write(&manifest_path(&args.output))?;

    println!("pairs {} groups {}", report.pairs, report.groups.len());
    if let Some(a) = report.accuracy {
        println!("accuracy {:.4} ({}/{})", a.rate, a.correct, a.total);
    }
    Ok(())
}
