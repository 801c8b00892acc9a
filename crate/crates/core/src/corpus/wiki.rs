//! Interlanguage links and comparable-article extraction from MediaWiki XML dumps.
//!
//! Extraction makes two passes over the dump. The first pass indexes the byte
//! offset of every main-namespace page in the required languages; the second
//! streams the pivot-language pages and seeks back to the linked pages of each
//! qualifying article. Only the title index is held in memory.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Seek, SeekFrom};

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::markup::{is_language_code, strip_wiki_markup};
use super::UNDETERMINED_LANGUAGE;
use crate::error::{Error, Result};

/// Extracts every `[[xx:Title]]` link, where `xx` is a 2-3 letter lowercase code.
///
/// Titles are returned verbatim. Ordinary links, piped links and namespaced
/// links such as `[[Category:...]]` are not interlanguage links.
pub fn parse_interlanguage_links(wikitext: &str) -> Vec<(String, String)> {
    let mut links = Vec::new();
    let mut rest = wikitext;
    while let Some(start) = rest.find("[[") {
        let body = &rest[start + 2..];
        let Some(end) = body.find("]]") else { break };
        let inner = &body[..end];
        if let Some((code, title)) = inner.split_once(':') {
            if is_language_code(code)
                && !title.is_empty()
                && !title.contains(['[', '|', '\n'])
            {
                links.push((code.to_string(), title.to_string()));
                rest = &body[end + 2..];
                continue;
            }
        }
        rest = body;
    }
    links
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WikiArticle {
    pub title: String,
    pub language: String,
    pub wikitext: String,
    /// At most one entry per language code; the first occurrence wins.
    pub interlanguage_links: Vec<(String, String)>,
}

impl WikiArticle {
    pub fn new(title: impl Into<String>, language: impl Into<String>, wikitext: impl Into<String>) -> Self {
        let wikitext = wikitext.into();
        let mut interlanguage_links: Vec<(String, String)> = Vec::new();
        for (code, title) in parse_interlanguage_links(&wikitext) {
            if !interlanguage_links.iter().any(|(c, _)| *c == code) {
                interlanguage_links.push((code, title));
            }
        }
        Self {
            title: title.into(),
            language: language.into(),
            wikitext,
            interlanguage_links,
        }
    }

    pub fn link(&self, language: &str) -> Option<&str> {
        self.interlanguage_links
            .iter()
            .find(|(code, _)| code == language)
            .map(|(_, title)| title.as_str())
    }

    pub fn plain_text(&self) -> String {
        strip_wiki_markup(&self.wikitext)
    }
}

/// A pivot article with its linked articles, one per required language
/// (in ascending language-code order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparableTuple {
    pub pivot: WikiArticle,
    pub linked: Vec<WikiArticle>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExtractionStats {
    pub pivot_pages: usize,
    pub indexed_pages: usize,
    pub emitted: usize,
    /// Pivot articles carrying every required link, but where some linked title
    /// is absent from the dump.
    pub skipped_unresolved: usize,
}

/// Runs the two-pass extraction. `open` must return a fresh reader positioned at
/// the start of the dump each time it is called.
pub fn extract_comparable_articles<R, F, S>(
    mut open: F,
    pivot_language: &str,
    required_languages: &BTreeSet<String>,
    mut sink: S,
) -> Result<ExtractionStats>
where
    R: BufRead + Seek,
    F: FnMut() -> std::io::Result<R>,
    S: FnMut(ComparableTuple) -> Result<()>,
{
    let others: Vec<&str> = required_languages
        .iter()
        .map(String::as_str)
        .filter(|l| *l != pivot_language)
        .collect();
    let mut stats = ExtractionStats::default();

    // pass 1: title index
    let mut index: HashMap<(String, String), IndexEntry> = HashMap::new();
    {
        let reader = open().map_err(|e| Error::io("<dump>", e))?;
        let mut pages = PageReader::new(reader);
        while let Some(page) = pages.next_page()? {
            if !page.is_main_namespace() || !others.contains(&page.language.as_str()) {
                continue;
            }
            let key = (page.language.clone(), normalize_title(&page.title));
            let entry = match page.redirect {
                Some(target) => IndexEntry::Redirect(normalize_title(&target)),
                None => IndexEntry::Page(page.offset),
            };
            stats.indexed_pages += 1;
            index.entry(key).or_insert(entry);
        }
    }

    // pass 2: pivot pages in dump order
    let reader = open().map_err(|e| Error::io("<dump>", e))?;
    let mut pages = PageReader::new(reader);
    let mut lookup = open().map_err(|e| Error::io("<dump>", e))?;
    while let Some(page) = pages.next_page()? {
        if page.language != pivot_language || !page.is_main_namespace() || page.redirect.is_some() {
            continue;
        }
        stats.pivot_pages += 1;
        let pivot = WikiArticle::new(page.title, page.language, page.text);
        let Some(titles) = others
            .iter()
            .map(|lang| pivot.link(lang).map(|t| (*lang, t)))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let offsets: Option<Vec<(&str, u64)>> = titles
            .iter()
            .map(|(lang, title)| resolve(&index, lang, title).map(|o| (*lang, o)))
            .collect();
        let Some(offsets) = offsets else {
            stats.skipped_unresolved += 1;
            continue;
        };
        let mut linked = Vec::with_capacity(offsets.len());
        for (lang, offset) in offsets {
            lookup
                .seek(SeekFrom::Start(offset))
                .map_err(|e| Error::io("<dump>", e))?;
            let mut single = PageReader::at_offset(&mut lookup, offset, lang);
            let page = single.next_page()?.ok_or(Error::TruncatedStream { offset })?;
            linked.push(WikiArticle::new(page.title, lang, page.text));
        }
        stats.emitted += 1;
        sink(ComparableTuple { pivot, linked })?;
    }
    Ok(stats)
}

enum IndexEntry {
    Page(u64),
    Redirect(String),
}

fn resolve(index: &HashMap<(String, String), IndexEntry>, lang: &str, title: &str) -> Option<u64> {
    let mut key = (lang.to_string(), normalize_title(title));
    // follow at most one redirect hop
    for _ in 0..2 {
        match index.get(&key)? {
            IndexEntry::Page(offset) => return Some(*offset),
            IndexEntry::Redirect(target) => key.1 = target.clone(),
        }
    }
    None
}

/// MediaWiki title equivalence: underscores are spaces and the first letter is
/// case-insensitive.
fn normalize_title(title: &str) -> String {
    let spaced = title.replace('_', " ");
    let collapsed = spaced.split_whitespace().collect::<Vec<_>>().join(" ");
    let mut chars = collapsed.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => collapsed,
    }
}

struct RawPage {
    offset: u64,
    language: String,
    title: String,
    namespace: Option<i64>,
    redirect: Option<String>,
    text: String,
}

impl RawPage {
    fn is_main_namespace(&self) -> bool {
        self.namespace.is_none_or(|ns| ns == 0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Title,
    Ns,
    Text,
    Other,
}

/// Page-at-a-time reader over a dump. The language of a page is taken from
/// the `xml:lang` attribute of the enclosing `<mediawiki>` element.
struct PageReader<R: BufRead> {
    reader: Reader<R>,
    base: u64,
    language: String,
    depth: usize,
    single: bool,
    done: bool,
}

impl<R: BufRead> PageReader<R> {
    fn new(inner: R) -> Self {
        Self {
            reader: Reader::from_reader(inner),
            base: 0,
            language: UNDETERMINED_LANGUAGE.to_string(),
            depth: 0,
            single: false,
            done: false,
        }
    }

    /// Reads exactly one page starting at `offset` (the reader must already be
    /// positioned there).
    fn at_offset(inner: R, offset: u64, language: &str) -> Self {
        Self {
            reader: Reader::from_reader(inner),
            base: offset,
            language: language.to_string(),
            depth: 0,
            single: true,
            done: false,
        }
    }

    fn position(&self) -> u64 {
        self.base + self.reader.buffer_position()
    }

    fn read_error(&self, e: quick_xml::Error) -> Error {
        match e {
            // the only syntax errors quick-xml reports are unclosed constructs at end of input
            quick_xml::Error::Syntax(_) => Error::TruncatedStream {
                offset: self.base + self.reader.error_position(),
            },
            other => self.xml_error(other),
        }
    }

    fn xml_error(&self, e: impl std::fmt::Display) -> Error {
        Error::Xml {
            offset: self.base + self.reader.error_position(),
            message: e.to_string(),
        }
    }

    fn next_page(&mut self) -> Result<Option<RawPage>> {
        if self.done {
            return Ok(None);
        }
        let mut buf = Vec::new();
        loop {
            let offset = self.position();
            buf.clear();
            let event = self.reader.read_event_into(&mut buf).map_err(|e| self.read_error(e))?;
            match event {
                Event::Start(start) => {
                    self.depth += 1;
                    match start.local_name().as_ref() {
                        b"mediawiki" => {
                            if let Some(lang) = xml_lang(&start) {
                                self.language = lang;
                            }
                        }
                        b"page" => {
                            let page = self.read_page(offset)?;
                            self.depth -= 1;
                            if self.single {
                                self.done = true;
                            }
                            return Ok(Some(page));
                        }
                        _ => {}
                    }
                }
                Event::End(_) => self.depth = self.depth.saturating_sub(1),
                Event::Eof => {
                    if self.depth > 0 && !self.single {
                        return Err(Error::TruncatedStream {
                            offset: self.position(),
                        });
                    }
                    self.done = true;
                    return Ok(None);
                }
                _ => {}
            }
        }
    }

    fn read_page(&mut self, offset: u64) -> Result<RawPage> {
        let mut page = RawPage {
            offset,
            language: self.language.clone(),
            title: String::new(),
            namespace: None,
            redirect: None,
            text: String::new(),
        };
        let mut ns_text = String::new();
        let mut field = Field::Other;
        let mut depth = 1usize;
        let mut buf = Vec::new();
        loop {
            buf.clear();
            let event = self.reader.read_event_into(&mut buf).map_err(|e| self.read_error(e))?;
            match event {
                Event::Start(start) => {
                    depth += 1;
                    field = match start.local_name().as_ref() {
                        b"title" => Field::Title,
                        b"ns" => Field::Ns,
                        b"text" => Field::Text,
                        _ => Field::Other,
                    };
                }
                Event::Empty(start) => {
                    if start.local_name().as_ref() == b"redirect" {
                        page.redirect = Some(attribute(&start, b"title").unwrap_or_default());
                    }
                }
                Event::End(_) => {
                    depth -= 1;
                    field = Field::Other;
                    if depth == 0 {
                        break;
                    }
                }
                Event::Text(text) => {
                    let decoded = text.decode().map_err(|e| self.xml_error(e))?;
                    push_field(&mut page, &mut ns_text, field, &decoded);
                }
                Event::CData(data) => {
                    let decoded = data.decode().map_err(|e| self.xml_error(e))?;
                    push_field(&mut page, &mut ns_text, field, &decoded);
                }
                Event::GeneralRef(reference) => {
                    let resolved = match reference.resolve_char_ref().map_err(|e| self.xml_error(e))? {
                        Some(c) => c,
                        None => match reference.as_ref() {
                            b"amp" => '&',
                            b"lt" => '<',
                            b"gt" => '>',
                            b"quot" => '"',
                            b"apos" => '\'',
                            other => {
                                return Err(self.xml_error(format!(
                                    "unknown entity &{};",
                                    String::from_utf8_lossy(other)
                                )))
                            }
                        },
                    };
                    push_field(&mut page, &mut ns_text, field, resolved.encode_utf8(&mut [0; 4]));
                }
                Event::Eof => {
                    return Err(Error::TruncatedStream {
                        offset: self.position(),
                    })
                }
                _ => {}
            }
        }
        page.namespace = ns_text.trim().parse().ok();
        Ok(page)
    }
}

fn push_field(page: &mut RawPage, ns: &mut String, field: Field, text: &str) {
    match field {
        Field::Title => page.title.push_str(text),
        Field::Ns => ns.push_str(text),
        Field::Text => page.text.push_str(text),
        Field::Other => {}
    }
}

fn xml_lang(start: &BytesStart<'_>) -> Option<String> {
    attribute(start, b"xml:lang")
}

fn attribute(start: &BytesStart<'_>, name: &[u8]) -> Option<String> {
    start
        .attributes()
        .flatten()
        .find(|a| a.key.as_ref() == name)
        .and_then(|a| a.unescape_value().ok().map(|v| v.into_owned()))
}
