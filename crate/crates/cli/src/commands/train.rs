use serde::Serialize;
use xling_core::bidict::Side;
use xling_core::corpus::{split_corpus, write_jsonl};
use xling_core::lsi::{write_model, LsiModel, SvdOptions, DEFAULT_RANK};
use xling_core::Result;

use super::{dictionary_path, load_corpus};
use crate::args::{KindArg, SideArg, TrainArgs};
use crate::config::{data_path, ConfigFile};
use crate::io::{sibling, write_atomic};
use crate::manifest::{manifest_path, Manifest};
use crate::pipeline::PipelineSpec;

#[derive(Debug, Serialize)]
struct TrainSettings {
    kind: KindArg,
    side: Option<SideArg>,
    k_requested: usize,
    k: usize,
    split: bool,
    train_fraction: f64,
    seed: u64,
    oversampling: usize,
    power_iterations: usize,
    tolerance: f64,
    source_lang: String,
    target_lang: String,
    train_pairs: usize,
    test_pairs: usize,
    terms: usize,
    pipeline: PipelineSpec,
}

pub fn run(args: &TrainArgs, config: &ConfigFile) -> Result<()> {
    let kind = config.pick(args.kind, "kind", KindArg::Cross)?;
    let side = config.pick(args.side, "side", SideArg::Target)?;
    let k = config.pick(args.k, "k", DEFAULT_RANK)?;
    let seed = config.pick(args.seed, "seed", 42)?;
    let train_fraction = config.pick(args.train_fraction, "train_fraction", 0.9)?;
    let defaults = SvdOptions::default();
    let options = SvdOptions {
        oversampling: config.pick(args.oversampling, "oversampling", defaults.oversampling)?,
        power_iterations: config.pick(args.power_iterations, "power_iterations", defaults.power_iterations)?,
        seed,
        ..defaults
    };
    let dictionary = dictionary_path(args.dictionary.as_deref(), config)?;
    let spec = PipelineSpec::resolve(&args.pipeline, config, dictionary.clone())?;
    let pipeline = spec.build()?;

    let corpus_path = data_path(&args.corpus);
    let corpus = load_corpus(&args.corpus)?;
    let test_path = args.test_output.clone().unwrap_or_else(|| sibling(&args.model, ".test.jsonl"));
    let (train, test) = if args.no_split {
        (corpus, None)
    } else {
        let (train, test) = split_corpus(&corpus, train_fraction, seed)?;
        (train, Some(test))
    };
    if let Some(test) = &test {
        write_atomic(&test_path, |w| write_jsonl(test, w))?;
    }

    let texts = |docs: &[xling_core::corpus::Document]| docs.iter().map(|d| d.text.clone()).collect::<Vec<_>>();
    let model = match kind {
        KindArg::Cross => {
            let src = pipeline.process_corpus(&texts(train.source_docs()), Side::Source);
            let tgt = pipeline.process_corpus(&texts(train.target_docs()), Side::Target);
            LsiModel::train_crosslingual(&src, &tgt, k, &options)?
        }
        KindArg::Mono => {
            let (docs, side) = match side {
                SideArg::Source => (train.source_docs(), Side::Source),
                SideArg::Target => (train.target_docs(), Side::Target),
            };
            LsiModel::train_monolingual(&pipeline.process_corpus(&texts(docs), side), k, &options)?
        }
    };
    write_atomic(&args.model, |w| write_model(&model, w))?;

    let settings = TrainSettings {
        kind,
        side: (kind == KindArg::Mono).then_some(side),
        k_requested: k,
        k: model.k(),
        split: test.is_some(),
        train_fraction,
        seed,
        oversampling: options.oversampling,
        power_iterations: options.power_iterations,
        tolerance: options.tolerance,
        source_lang: train.source_language().to_string(),
        target_lang: train.target_language().to_string(),
        train_pairs: train.len(),
        test_pairs: test.as_ref().map_or(0, |t| t.len()),
        terms: model.n_terms(),
        pipeline: spec,
    };
    let mut manifest = Manifest::new("train", &settings, Some(seed))?.input(&corpus_path)?;
    if let Some(d) = &dictionary {
        manifest = manifest.input(d)?;
    }
    manifest = manifest.output(&args.model)?;
    if test.is_some() {
        manifest = manifest.output(&test_path)?;
    }
    manifest.write(&manifest_path(&args.model))?;
    println!(
        "{} model: k={} terms={} training pairs={} held out={}",
        model.kind().name(),
        model.k(),
        model.n_terms(),
        settings.train_pairs,
        settings.test_pairs
    );
    Ok(())
}
