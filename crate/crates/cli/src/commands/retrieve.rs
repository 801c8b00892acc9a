use std::collections::HashMap;
use std::path::PathBuf;

use serde::Serialize;
use xling_core::bidict::{BilingualDictionary, Side};
use xling_core::corpus::Document;
use xling_core::lsi::ModelKind;
use xling_core::retrieval::{
    embed_documents, evaluate, gold_from_pairs, oracle_experiment, par_map, retrieve, retrieve_by_measure,
    write_json, write_ranked_tsv, CachedTranslations, CandidateSet, DictMeasure, DictionaryTranslator,
    IdentityTranslator, RankedList, RetrievalRun, SkippedQuery, TranslationProvider,
};
use xling_core::textprep::TextPipeline;
use xling_core::{Error, Result};

use super::{dictionary_path, load_corpus, resolve_pipeline, LoadedModel};
use crate::args::{EvalArgs, InputArgs, Method, MethodArgs, ProviderArg, RetrieveArgs, SideArg};
use crate::config::{data_path, ConfigFile, KList};
use crate::io::{read_documents, read_gold, read_store, sibling, write_atomic, write_store};
use crate::manifest::{manifest_path, Manifest};
use crate::pipeline::PipelineSpec;

struct Inputs {
    queries: Vec<Document>,
    candidates: Vec<Document>,
    gold: Option<HashMap<String, String>>,
    files: Vec<PathBuf>,
}

fn load_inputs(args: &InputArgs) -> Result<Inputs> {
    let mut files = Vec::new();
    let (queries, candidates, mut gold) = match (&args.corpus, &args.queries) {
        (Some(c), _) => {
            files.push(data_path(c));
            let corpus = load_corpus(c)?;
            let gold = gold_from_pairs(&corpus);
            let (q, t) = corpus.into_parts();
            (q, t, Some(gold))
        }
        (None, Some(q)) => {
            let qp = data_path(q);
            let queries = read_documents(&qp)?;
            files.push(qp);
            let candidates = match &args.candidates {
                Some(c) => {
                    let cp = data_path(c);
                    let docs = read_documents(&cp)?;
                    files.push(cp);
                    docs
                }
                None => Vec::new(),
            };
            (queries, candidates, None)
        }
        (None, None) => return Err(Error::Precondition("give --corpus or --queries".into())),
    };
    if let Some(g) = &args.gold {
        let gp = data_path(g);
        gold = Some(read_gold(&gp)?);
        files.push(gp);
    }
    Ok(Inputs {
        queries,
        candidates,
        gold,
        files,
    })
}

#[derive(Debug, Serialize)]
struct RunSettings {
    method: Method,
    n: usize,
    provider: Option<ProviderArg>,
    pipeline: PipelineSpec,
}

/// Ranked lists for every query under the chosen method.
struct MethodRun {
    run: RetrievalRun,
    settings: RunSettings,
    inputs: Vec<PathBuf>,
}

fn candidate_vectors(
    method: &MethodArgs,
    candidates: &[Document],
    embed: impl FnOnce(&[Document]) -> Result<CandidateSet>,
) -> Result<CandidateSet> {
    let set = match &method.store {
        Some(p) => read_store(&data_path(p))?,
        None => {
            if candidates.is_empty() {
                return Err(Error::EmptyCandidates);
            }
            embed(candidates)?
        }
    };
    if let Some(p) = &method.save_store {
        write_store(&set, p)?;
    }
    Ok(set)
}

fn rank_all(queries: &CandidateSet, candidates: &CandidateSet, n: usize) -> Result<Vec<RankedList>> {
    let idx: Vec<usize> = (0..queries.len()).collect();
    par_map(&idx, |&i| retrieve(queries.id(i), queries.vector(i), candidates, n))
        .into_iter()
        .collect()
}

fn provider(
    kind: ProviderArg,
    method: &MethodArgs,
    config: &ConfigFile,
    pipeline: &TextPipeline,
) -> Result<Box<dyn TranslationProvider>> {
    Ok(match kind {
        ProviderArg::Identity => Box::new(IdentityTranslator),
        ProviderArg::Cache => {
            let path = config
                .pick_path(method.translations.as_deref(), "translations")?
                .ok_or_else(|| Error::Precondition("--provider cache needs --translations".into()))?;
            Box::new(CachedTranslations::load(&path)?)
        }
        ProviderArg::Dictionary => {
            let path = dictionary_path(method.dictionary.as_deref(), config)?
                .ok_or_else(|| Error::Precondition("--provider dictionary needs --dictionary".into()))?;
            Box::new(DictionaryTranslator::new(BilingualDictionary::load(&path)?, pipeline.clone()))
        }
    })
}

fn run_method(method: &MethodArgs, config: &ConfigFile, inputs: &Inputs, n: usize) -> Result<MethodRun> {
    let model = method.model.as_deref().map(LoadedModel::load).transpose()?;
    let chosen = match (method.method, config.get::<Method>("method")?, &model) {
        (Some(m), _, _) | (None, Some(m), _) => m,
        (None, None, Some(l)) if l.model.kind() == ModelKind::Monolingual => Method::ArLsi,
        (None, None, Some(_)) => Method::ClLsi,
        (None, None, None) => return Err(Error::Precondition("give --model or --method".into())),
    };
    let dict_path = dictionary_path(method.dictionary.as_deref(), config)?;
    let (spec, pipeline) = resolve_pipeline(&method.pipeline, config, dict_path.clone(), model.as_ref())?;
    let mut files: Vec<PathBuf> = Vec::new();
    if let Some(p) = &method.model {
        files.push(data_path(p));
    }
    let need_model = || {
        model
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("{chosen:?} needs --model")))
    };
    let mut used_provider = None;
    let run = match chosen {
        Method::ClLsi => {
            let m = &need_model()?.model;
            let cand = candidate_vectors(method, &inputs.candidates, |c| embed_documents(c, m, &pipeline, Side::Target))?;
            let q = embed_documents(&inputs.queries, m, &pipeline, Side::Source)?;
            RetrievalRun {
                lists: rank_all(&q, &cand, n)?,
                skipped: Vec::new(),
            }
        }
        Method::ArLsi => {
            let loaded = need_model()?;
            let m = &loaded.model;
            if m.kind() != ModelKind::Monolingual {
                return Err(Error::WrongModelKind {
                    expected: ModelKind::Monolingual.name(),
                    found: m.kind().name(),
                });
            }
            let kind = config.pick(method.provider, "provider", ProviderArg::Dictionary)?;
            used_provider = Some(kind);
            let translator = provider(kind, method, config, &pipeline)?;
            let cand = candidate_vectors(method, &inputs.candidates, |c| embed_documents(c, m, &pipeline, Side::Target))?;
            let language = inputs
                .candidates
                .first()
                .map(|d| d.language.clone())
                .or_else(|| loaded.target_language())
                .unwrap_or_else(|| xling_core::corpus::UNDETERMINED_LANGUAGE.to_string());
            let translated = par_map(&inputs.queries, |d| translator.translate(d, &language));
            let mut q = CandidateSet::new();
            let mut skipped = Vec::new();
            for (doc, t) in inputs.queries.iter().zip(translated) {
                match t {
                    Ok(t) => q.push(doc.id.clone(), m.embed(&pipeline.terms(&t.text, Side::Target))?),
                    Err(e) => {
                        log::warn!("query {} skipped: {e}", doc.id);
                        skipped.push(SkippedQuery {
                            query: doc.id.clone(),
                            reason: e.to_string(),
                        });
                    }
                }
            }
            RetrievalRun {
                lists: rank_all(&q, &cand, n)?,
                skipped,
            }
        }
        Method::Bin | Method::BinPooled | Method::Cosine => {
            let path = dict_path
                .clone()
                .ok_or_else(|| Error::Precondition(format!("{chosen:?} needs --dictionary")))?;
            let dict = BilingualDictionary::load(&path)?;
            let measure = match chosen {
                Method::Bin => DictMeasure::Bin,
                Method::BinPooled => DictMeasure::BinPooled,
                _ => DictMeasure::Cosine,
            };
            let processed = |docs: &[Document], side: Side| -> Vec<(String, Vec<String>)> {
                let texts: Vec<&str> = docs.iter().map(|d| d.text.as_str()).collect();
                docs.iter()
                    .map(|d| d.id.clone())
                    .zip(pipeline.process_corpus(&texts, side))
                    .collect()
            };
            let q = processed(&inputs.queries, Side::Source);
            let c = processed(&inputs.candidates, Side::Target);
            retrieve_by_measure(&q, &c, &dict, measure, n)?
        }
    };
    if let Some(p) = &dict_path {
        files.push(p.clone());
    }
    if let Some(p) = &method.store {
        files.push(data_path(p));
    }
    Ok(MethodRun {
        run,
        settings: RunSettings {
            method: chosen,
            n,
            provider: used_provider,
            pipeline: spec,
        },
        inputs: files,
    })
}

pub fn run_retrieve(args: &RetrieveArgs, config: &ConfigFile) -> Result<()> {
    let n = config.pick(args.n, "n", 10)?;
    let inputs = load_inputs(&args.input)?;
    let MethodRun {
        run,
        settings,
        inputs: mut files,
    } = run_method(&args.method, config, &inputs, n)?;
    files.extend(inputs.files.iter().cloned());
    write_atomic(&args.output, |w| write_ranked_tsv(&run.lists, w))?;
    let json = args.json.clone().unwrap_or_else(|| sibling(&args.output, ".json"));
    write_atomic(&json, |w| write_json(&run, w))?;
    let mut manifest = Manifest::new("retrieve", &settings, None)?;
    for f in &files {
        manifest = manifest.input(f)?;
    }
    manifest
        .output(&args.output)?
        .output(&json)?
        .write(&manifest_path(&args.output))?;
    println!("{} queries ranked, {} skipped", run.lists.len(), run.skipped.len());
    Ok(())
}

fn oracle(args: &EvalArgs, config: &ConfigFile) -> Result<()> {
    let path = args
        .method
        .model
        .as_deref()
        .ok_or_else(|| Error::Precondition("--oracle needs --model".into()))?;
    let loaded = LoadedModel::load(path)?;
    let dict = dictionary_path(args.method.dictionary.as_deref(), config)?;
    let (_, pipeline) = resolve_pipeline(&args.method.pipeline, config, dict, Some(&loaded))?;
    let side = config.pick(args.side, "side", SideArg::Source)?;
    let inputs = load_inputs(&args.input)?;
    let docs = match side {
        SideArg::Source => &inputs.queries,
        SideArg::Target => &inputs.candidates,
    };
    let side = match loaded.model.kind() {
        ModelKind::Crosslingual => side.into(),
        ModelKind::Monolingual => Side::Target,
    };
    let r1 = oracle_experiment(docs, &loaded.model, &pipeline, side)?;
    println!("R@1 {r1:.1}");
    Ok(())
}

pub fn run_eval(args: &EvalArgs, config: &ConfigFile) -> Result<()> {
    if args.oracle {
        return oracle(args, config);
    }
    let KList(ks) = config.pick(args.k_values.clone(), "k_values", KList(vec![1, 5]))?;
    let n = args.n.unwrap_or_else(|| ks.iter().copied().max().unwrap_or(1));
    let inputs = load_inputs(&args.input)?;
    let gold = inputs
        .gold
        .as_ref()
        .ok_or_else(|| Error::Precondition("eval needs gold pairs: --corpus or --gold".into()))?;
    let MethodRun {
        run,
        settings,
        inputs: mut files,
    } = run_method(&args.method, config, &inputs, n)?;
    files.extend(inputs.files.iter().cloned());
    let report = evaluate(&run.lists, gold, &ks, run.skipped.len())?;
    for (k, r) in &report.recall {
        println!("R@{k} {r:.4}");
    }
    println!("queries {} skipped {}", report.queries, report.skipped);
    if let Some(out) = &args.output {
        write_atomic(out, |w| write_json(&report, w))?;
        let mut manifest = Manifest::new("eval", &settings, None)?;
        for f in &files {
            manifest = manifest.input(f)?;
        }
        manifest.output(out)?.write(&manifest_path(out))?;
    }
    Ok(())
}
