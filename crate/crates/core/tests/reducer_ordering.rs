use xling_core::bidict::{matching_rate, oov_rate, BilingualDictionary, Side, Synset};
use xling_core::textprep::{PipelineConfig, ReducerKind, Reducers, TextPipeline};

const PAIRS: &[(&str, &str)] = &[
    ("write", "كتب"),
    ("study", "درس"),
    ("science", "علم"),
    ("office", "مكتب"),
    ("work", "عمل"),
    ("pen", "قلم"),
    ("sun", "شمس"),
    ("go", "ذهب"),
];

const SOURCE: &str = "He writes and wrote while studies of science went on in offices. \
                      Workers work with pens under the sun, writing and working.";
const TARGET: &str = "والكتب كاتب يكتب الدرس دارس العلم والعلوم المكتب مكتبة العمل عامل \
                      بالقلم الشمس شمسها ذهب وذهبت";

fn rate(source: ReducerKind, target: ReducerKind, dict: &BilingualDictionary) -> (f64, f64) {
    let config = PipelineConfig {
        reducer_source: source,
        reducer_target: target,
        ..PipelineConfig::passthrough()
    };
    let lemmas = [("wrote", "write"), ("went", "go"), ("workers", "work")]
        .map(|(w, l)| (w.to_string(), l.to_string()));
    let pipeline = TextPipeline::new(config)
        .unwrap()
        .with_reducers(Reducers::default().with_lemmas(lemmas))
        .with_dictionary(dict.clone());
    let d_s = pipeline.terms(SOURCE, Side::Source);
    let d_t = pipeline.terms(TARGET, Side::Target);
    (matching_rate(&d_s, &d_t, dict).unwrap(), oov_rate(&d_s, &d_t, dict).unwrap())
}

#[test]
fn morphar_with_lemmas_matches_at_least_any_single_technique() {
    let dict = BilingualDictionary::from_synsets(PAIRS.iter().map(|(s, t)| Synset::new([*s], [*t])));
    let (best, best_oov) = rate(ReducerKind::LemmaTable, ReducerKind::Morphar, &dict);
    let singles = [
        (ReducerKind::Identity, ReducerKind::Identity),
        (ReducerKind::SuffixStemmer, ReducerKind::Identity),
        (ReducerKind::LemmaTable, ReducerKind::Identity),
        (ReducerKind::Identity, ReducerKind::LightStemmer),
        (ReducerKind::Identity, ReducerKind::Rooter),
        (ReducerKind::Identity, ReducerKind::Morphar),
        (ReducerKind::LemmaTable, ReducerKind::LightStemmer),
        (ReducerKind::LemmaTable, ReducerKind::Rooter),
    ];
    for (s, t) in singles {
        let (m, o) = rate(s, t, &dict);
        assert!(best >= m, "{s:?}+{t:?}: {m} > {best}");
        assert!(best_oov <= o, "{s:?}+{t:?}: oov {o} < {best_oov}");
    }
    let (identity, _) = rate(ReducerKind::Identity, ReducerKind::Identity, &dict);
    assert!(best > identity);
}
