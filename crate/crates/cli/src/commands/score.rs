use serde::Serialize;
use xling_core::bidict::{bin_pooled, bin_symmetric, dict_cosine, oov_rate, matching_rate, BilingualDictionary, Side};
use xling_core::vsm::Vocabulary;
use xling_core::{Error, Result};

use super::{dictionary_path, load_corpus, resolve_pipeline};
use crate::args::{Measure, ScoreArgs};
use crate::config::{data_path, ConfigFile};
use crate::io::write_atomic;
use crate::manifest::{manifest_path, Manifest};

#[derive(Debug, Serialize)]
struct ScoreSettings {
    measure: Measure,
    pipeline: crate::pipeline::PipelineSpec,
}

pub fn run(args: &ScoreArgs, config: &ConfigFile) -> Result<()> {
    let measure = config.pick(args.measure, "measure", Measure::Bin)?;
    let dict_path = dictionary_path(args.dictionary.as_deref(), config)?
        .ok_or_else(|| Error::Precondition("score needs --dictionary".into()))?;
    let dict = BilingualDictionary::load(&dict_path)?;
    let (spec, pipeline) = resolve_pipeline(&args.pipeline, config, Some(dict_path.clone()), None)?;
    let corpus = load_corpus(&args.corpus)?;
    let texts = |docs: &[xling_core::corpus::Document]| docs.iter().map(|d| d.text.clone()).collect::<Vec<_>>();
    let src = pipeline.process_corpus(&texts(corpus.source_docs()), Side::Source);
    let tgt = pipeline.process_corpus(&texts(corpus.target_docs()), Side::Target);
    let stats = match measure {
        Measure::Bincos => Some((Vocabulary::build(&src)?, Vocabulary::build(&tgt)?)),
        _ => None,
    };

    let mut rows = Vec::with_capacity(corpus.len());
    for ((s_doc, t_doc), (d_s, d_t)) in corpus.pairs().zip(src.iter().zip(&tgt)) {
        let score = match measure {
            Measure::Bin => Some(bin_symmetric(d_s, d_t, &dict)),
            Measure::BinPooled => Some(bin_pooled(d_s, d_t, &dict)),
            Measure::Bincos => {
                let (vs, vt) = stats.as_ref().expect("built for bincos");
                Some(dict_cosine(d_s, d_t, &dict, vs, vt))
            }
            Measure::Oov => defined(oov_rate(d_s, d_t, &dict), &s_doc.id)?,
            Measure::Match => defined(matching_rate(d_s, d_t, &dict), &s_doc.id)?,
        };
        rows.push((s_doc.id.clone(), t_doc.id.clone(), score));
    }
    let scored: Vec<f64> = rows.iter().filter_map(|r| r.2).collect();
    let mean = if scored.is_empty() {
        f64::NAN
    } else {
        scored.iter().sum::<f64>() / scored.len() as f64
    };

    let write_rows = |w: &mut dyn std::io::Write| -> std::io::Result<()> {
        for (s, t, score) in &rows {
            match score {
                Some(x) => writeln!(w, "{s}\t{t}\t{x:.6}")?,
                None => writeln!(w, "{s}\t{t}\tNA")?,
            }
        }
        Ok(())
    };
    match &args.output {
        Some(path) => {
            write_atomic(path, |w| write_rows(w))?;
            Manifest::new("score", &ScoreSettings { measure, pipeline: spec }, None)?
                .input(&data_path(&args.corpus))?
                .input(&dict_path)?
                .output(path)?
                .write(&manifest_path(path))?;
        }
        None => write_rows(&mut std::io::stdout().lock()).map_err(|e| Error::Io {
            path: "<stdout>".into(),
            source: e,
        })?,
    }
    let summary = format!("mean {mean:.4} over {} of {} pairs", scored.len(), rows.len());
    if args.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

/// Undefined rates are reported as NA and left out of the mean.
fn defined(rate: Result<f64>, id: &str) -> Result<Option<f64>> {
    match rate {
        Ok(x) => Ok(Some(x)),
        Err(Error::UndefinedRate(reason)) => {
            log::warn!("pair {id}: {reason}");
            Ok(None)
        }
        Err(e) => Err(e),
    }
}
