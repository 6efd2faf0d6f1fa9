//! Manual cleaning applied to raw abstracts before tokenization.

use alloc::string::String;
use alloc::vec::Vec;

/// Publisher boilerplate appended to database abstracts, matched verbatim
/// (including the misspelled "All right reserved" variant).
pub const DEFAULT_BOILERPLATE: &[&str] = &[
    "All rights reserved.",
    "The University of Chicago. All rights reserved.",
    "© The Author(s)",
    "Published by Oxford University Press on behalf of The Review of Economic Studies Limited",
    "by the President and Fellows of Harvard College and the Massachusetts Institute of Technology.",
    "Published by Oxford University Press on behalf of",
    "AEA. The American Economic Association is hosted by Vanderbilt University.",
    "All right reserved.",
    "All right reserved",
    "All rights reserved",
];

/// A set of boilerplate phrases, tried longest first.
#[derive(Debug, Clone)]
pub struct Boilerplate {
    phrases: Vec<String>,
}

impl Default for Boilerplate {
    fn default() -> Self {
        Self::new(DEFAULT_BOILERPLATE.iter().copied())
    }
}

impl Boilerplate {
    pub fn new<'a>(phrases: impl IntoIterator<Item = &'a str>) -> Self {
        let mut phrases: Vec<String> =
            phrases.into_iter().filter(|p| !p.trim().is_empty()).map(String::from).collect();
        // Longer phrases contain shorter ones ("... on behalf of The Review ...").
        phrases.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        phrases.dedup();
        Self { phrases }
    }

    /// The default list extended with `extra` phrases.
    pub fn with_extra<'a>(extra: impl IntoIterator<Item = &'a str>) -> Self {
        Self::new(DEFAULT_BOILERPLATE.iter().copied().chain(extra))
    }

    pub fn phrases(&self) -> &[String] {
        &self.phrases
    }

    /// Removes every phrase occurrence and every copyright sign (with an
    /// adjacent year). When anything was removed, whitespace runs collapse to
    /// single spaces and the result is trimmed; otherwise the input is
    /// returned unchanged. Repeats until no phrase remains, so the function
    /// is idempotent.
    pub fn strip(&self, text: &str) -> String {
        let mut current = String::from(text);
        let mut changed_any = false;
        loop {
            let mut changed = false;
            let mut next = drop_copyright_years(&current, &mut changed);
            for phrase in &self.phrases {
                if next.contains(phrase.as_str()) {
                    next = next.replace(phrase.as_str(), " ");
                    changed = true;
                }
            }
            if next.contains('©') {
                next = next.replace('©', " ");
                changed = true;
            }
            if !changed {
                break;
            }
            changed_any = true;
            current = collapse_whitespace(&next);
        }
        if changed_any {
            current
        } else {
            String::from(text)
        }
    }
}

/// Strips the default boilerplate list from `text`.
pub fn strip_boilerplate(text: &str) -> String {
    Boilerplate::default().strip(text)
}

/// `"© 2019, The Author(s)"` becomes `"© The Author(s)"` so the phrase
/// table matches regardless of the year.
fn drop_copyright_years(text: &str, changed: &mut bool) -> String {
    if !text.contains('©') {
        return String::from(text);
    }
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(pos) = rest.find('©') {
        out.push_str(&rest[..pos]);
        out.push('©');
        let after = &rest[pos + '©'.len_utf8()..];
        let trimmed = after.trim_start();
        let digits = trimmed.bytes().take_while(u8::is_ascii_digit).count();
        if digits == 4 {
            let mut tail = &trimmed[4..];
            if let Some(t) = tail.strip_prefix([',', '.']) {
                tail = t;
            }
            out.push(' ');
            rest = tail.trim_start();
            *changed = true;
        } else {
            rest = after;
        }
    }
    out.push_str(rest);
    out
}

fn collapse_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}

const EQUILIBRIUM_FORMS: [&str; 2] = ["equilibrium", "equilibria"];
const EQUILIBRIUM_STEM: &str = "equilibri";

/// Replaces whole-word, case-insensitive "equilibrium"/"equilibria" with
/// "equilibri". Word boundaries are non-alphabetic characters.
pub fn normalize_equilibrium(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut word_start: Option<usize> = None;
    let flush = |out: &mut String, word: &str| {
        if EQUILIBRIUM_FORMS.iter().any(|f| word.eq_ignore_ascii_case(f)) {
            out.push_str(EQUILIBRIUM_STEM);
        } else {
            out.push_str(word);
        }
    };
    for (i, c) in text.char_indices() {
        if c.is_alphabetic() {
            if word_start.is_none() {
                word_start = Some(i);
            }
        } else {
            if let Some(s) = word_start.take() {
                flush(&mut out, &text[s..i]);
            }
            out.push(c);
        }
    }
    if let Some(s) = word_start {
        flush(&mut out, &text[s..]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_author_notice() {
        assert_eq!(strip_boilerplate("We model X. © The Author(s)"), "We model X.");
    }

    #[test]
    fn clean_text_is_untouched() {
        let text = "We model  X.\n";
        assert_eq!(strip_boilerplate(text), text);
    }

    #[test]
    fn removes_misspelled_reservation() {
        assert_eq!(strip_boilerplate("Results shown. All right reserved."), "Results shown.");
    }

    #[test]
    fn removes_every_listed_phrase() {
        for phrase in DEFAULT_BOILERPLATE {
            let text = alloc::format!("Prices rise. {phrase}");
            assert_eq!(strip_boilerplate(&text), "Prices rise.", "{phrase}");
        }
    }

    #[test]
    fn copyright_year_is_absorbed() {
        assert_eq!(strip_boilerplate("Growth slows. © 2019, The Author(s)"), "Growth slows.");
        assert_eq!(
            strip_boilerplate("Growth slows. © 2015 The University of Chicago. All rights reserved."),
            "Growth slows."
        );
    }

    #[test]
    fn nested_phrases_are_removed_to_fixpoint() {
        let once = strip_boilerplate("A. All rights All rights reserved. reserved.");
        assert_eq!(once, "A.");
        assert_eq!(strip_boilerplate(&once), once);
    }

    #[test]
    fn equilibrium_forms() {
        assert_eq!(normalize_equilibrium("multiple equilibria exist"), "multiple equilibri exist");
        assert_eq!(normalize_equilibrium("no match here"), "no match here");
        assert_eq!(
            normalize_equilibrium("Equilibrium and equilibria").to_lowercase(),
            "equilibri and equilibri"
        );
        assert_eq!(normalize_equilibrium("disequilibrium, equilibria!"), "disequilibrium, equilibri!");
    }
}
