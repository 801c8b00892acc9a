//! Rule-based wikitext to plain text conversion.
//!
//! Words survive, syntax does not. Templates, tables, comments, references,
//! file/category links and interlanguage links are dropped; internal links keep
//! their visible label. Anything left unbalanced is dropped through to the end
//! of the input.

/// Link prefixes whose whole link is removed from the text.
const DROPPED_NAMESPACES: &[&str] = &[
    "file",
    "image",
    "media",
    "category",
    "fichier",
    "catégorie",
    "ملف",
    "صورة",
    "تصنيف",
];

/// Tags whose content is removed along with the tag.
const DROPPED_ELEMENTS: &[&str] = &["ref", "math", "gallery", "timeline", "score", "syntaxhighlight"];

const URL_SCHEMES: &[&str] = &["http://", "https://", "ftp://", "//"];

pub fn strip_wiki_markup(wikitext: &str) -> String {
    let lines = strip_line_markup(wikitext);
    let text = strip_inline(&lines);
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Headings, list markers and horizontal rules.
fn strip_line_markup(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.len() >= 4 && trimmed.chars().all(|c| c == '-') {
            out.push('\n');
            continue;
        }
        let mut body = trimmed;
        if body.starts_with("==") {
            body = body.trim_start_matches('=').trim_end_matches('=');
        } else {
            body = body.trim_start_matches(['*', '#', ':', ';']);
        }
        out.push_str(body);
        out.push('\n');
    }
    out
}

fn strip_inline(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    while pos < text.len() {
        let rest = &text[pos..];
        if rest.starts_with("<!--") {
            pos = rest.find("-->").map_or(text.len(), |i| pos + i + 3);
        } else if rest.starts_with("{{") || rest.starts_with("{|") {
            pos += skip_braces(rest);
        } else if rest.starts_with("[[") {
            let (consumed, visible) = internal_link(rest);
            out.push_str(&visible);
            pos += consumed;
        } else if rest.starts_with('[') && URL_SCHEMES.iter().any(|s| rest[1..].starts_with(s)) {
            match rest.find(']') {
                Some(end) => {
                    let inner = &rest[1..end];
                    if let Some((_, label)) = inner.split_once(' ') {
                        out.push_str(&strip_inline(label));
                    }
                    pos += end + 1;
                }
                None => pos = text.len(),
            }
        } else if rest.starts_with("''") {
            pos += rest.len() - rest.trim_start_matches('\'').len();
        } else if rest.starts_with("__") {
            match magic_word_len(rest) {
                Some(n) => pos += n,
                None => {
                    out.push_str("__");
                    pos += 2;
                }
            }
        } else if rest.starts_with('<') {
            match html_tag(rest) {
                Some(n) => {
                    out.push(' ');
                    pos += n;
                }
                None => {
                    out.push('<');
                    pos += 1;
                }
            }
        } else if rest.starts_with('&') {
            match entity(rest) {
                Some((n, c)) => {
                    out.push(c);
                    pos += n;
                }
                None => {
                    out.push('&');
                    pos += 1;
                }
            }
        } else {
            let c = rest.chars().next().unwrap();
            out.push(c);
            pos += c.len_utf8();
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Brace {
    Template,
    Parameter,
    Table,
}

/// Length of the balanced `{{...}}` / `{|...|}` run at the start of `text`,
/// or the whole input when it never closes.
fn skip_braces(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut stack: Vec<Brace> = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let rest = &bytes[i..];
        if rest.starts_with(b"{{{") {
            stack.push(Brace::Parameter);
            i += 3;
        } else if rest.starts_with(b"{{") {
            stack.push(Brace::Template);
            i += 2;
        } else if rest.starts_with(b"{|") {
            stack.push(Brace::Table);
            i += 2;
        } else if rest.starts_with(b"}}}") && stack.last() == Some(&Brace::Parameter) {
            stack.pop();
            i += 3;
        } else if (rest.starts_with(b"}}") && stack.last() == Some(&Brace::Template))
            || (rest.starts_with(b"|}") && stack.last() == Some(&Brace::Table))
        {
            stack.pop();
            i += 2;
        } else {
            i += 1;
        }
        if stack.is_empty() {
            return i;
        }
    }
    text.len()
}

/// Consumes a `[[...]]` link (with nested links) and returns its visible text.
fn internal_link(text: &str) -> (usize, String) {
    let bytes = text.as_bytes();
    let mut depth = 0usize;
    let mut i = 0;
    let mut end = None;
    while i < bytes.len() {
        if bytes[i..].starts_with(b"[[") {
            depth += 1;
            i += 2;
        } else if bytes[i..].starts_with(b"]]") {
            depth -= 1;
            i += 2;
            if depth == 0 {
                end = Some(i);
                break;
            }
        } else {
            i += 1;
        }
    }
    let Some(end) = end else {
        return (text.len(), String::new());
    };
    let inner = &text[2..end - 2];
    if let Some(visible) = inner.strip_prefix(':') {
        // [[:Category:X]] is a visible link to the page, not a categorisation
        return (end, link_label(visible));
    }
    if let Some((prefix, _)) = inner.split_once(':') {
        let prefix = prefix.trim();
        let lowered = prefix.to_lowercase();
        if DROPPED_NAMESPACES.contains(&lowered.as_str()) || is_language_code(prefix) {
            return (end, String::new());
        }
    }
    (end, link_label(inner))
}

fn link_label(inner: &str) -> String {
    let label = match top_level_pipe(inner) {
        Some(idx) => &inner[idx + 1..],
        None => inner,
    };
    strip_inline(label)
}

/// Position of the last `|` not nested in `[[ ]]` or `{{ }}`.
fn top_level_pipe(inner: &str) -> Option<usize> {
    let bytes = inner.as_bytes();
    let mut depth = 0i32;
    let mut last = None;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i..].starts_with(b"[[") || bytes[i..].starts_with(b"{{") {
            depth += 1;
            i += 2;
        } else if bytes[i..].starts_with(b"]]") || bytes[i..].starts_with(b"}}") {
            depth -= 1;
            i += 2;
        } else {
            if bytes[i] == b'|' && depth == 0 {
                last = Some(i);
            }
            i += 1;
        }
    }
    last
}

pub(crate) fn is_language_code(code: &str) -> bool {
    (2..=3).contains(&code.len()) && code.bytes().all(|b| b.is_ascii_lowercase())
}

fn magic_word_len(text: &str) -> Option<usize> {
    let body = &text[2..];
    let n = body.bytes().take_while(|b| b.is_ascii_uppercase()).count();
    (n > 0 && body[n..].starts_with("__")).then_some(n + 4)
}

/// Length of an html-like tag at the start of `text`, including the content of
/// dropped elements such as `<ref>...</ref>`.
fn html_tag(text: &str) -> Option<usize> {
    let body = text[1..].strip_prefix('/').unwrap_or(&text[1..]);
    let name_len = body
        .bytes()
        .take_while(|b| b.is_ascii_alphanumeric())
        .count();
    if name_len == 0 || !body.as_bytes()[0].is_ascii_alphabetic() {
        return None;
    }
    let close = text.find('>')?;
    if text[1..close].contains('<') {
        return None;
    }
    let name = body[..name_len].to_ascii_lowercase();
    let opening = !text[1..].starts_with('/');
    let self_closing = text[..close].ends_with('/');
    if opening && !self_closing && DROPPED_ELEMENTS.contains(&name.as_str()) {
        let end_tag = format!("</{name}");
        let lowered = text.to_ascii_lowercase();
        return Some(match lowered[close..].find(&end_tag) {
            Some(start) => {
                let start = close + start;
                text[start..].find('>').map_or(text.len(), |e| start + e + 1)
            }
            None => text.len(),
        });
    }
    Some(close + 1)
}

fn entity(text: &str) -> Option<(usize, char)> {
    let end = text[..text.len().min(10)].find(';')?;
    let name = &text[1..end];
    let c = match name {
        "nbsp" => ' ',
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "ndash" => '–',
        "mdash" => '—',
        _ => {
            let num = name.strip_prefix('#')?;
            let code = match num.strip_prefix(['x', 'X']) {
                Some(hex) => u32::from_str_radix(hex, 16).ok()?,
                None => num.parse().ok()?,
            };
            char::from_u32(code)?
        }
    };
    Some((end + 1, c))
}
