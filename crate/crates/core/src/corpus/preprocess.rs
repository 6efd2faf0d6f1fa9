use alloc::string::String;
use alloc::vec::Vec;

use super::porter;
use super::stopwords::StopwordList;

#[derive(Debug, Clone)]
pub struct PreprocessConfig {
    pub stopwords: StopwordList,
    pub stem: bool,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self { stopwords: StopwordList::default_english(), stem: true }
    }
}

/// Lowercases, maps every non-alphabetic character to a space, splits on
/// whitespace, drops stopwords, stems, and drops tokens that are stopwords
/// after stemming.
pub fn preprocess(text: &str, config: &PreprocessConfig) -> Vec<String> {
    let cleaned: String =
        text.chars().flat_map(char::to_lowercase).map(|c| if c.is_alphabetic() { c } else { ' ' }).collect();
    cleaned
        .split_whitespace()
        .filter(|w| !config.stopwords.contains(w))
        .map(|w| if config.stem { porter::stem(w) } else { String::from(w) })
        .filter(|w| !w.is_empty() && !config.stopwords.contains(w))
        .collect()
}
