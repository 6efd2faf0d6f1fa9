use alloc::collections::BTreeSet;
use alloc::string::String;

/// Bundled SMART English stopword list.
pub const SMART_STOPWORDS: &str = include_str!("smart_stopwords.txt");

/// Publishing vocabulary removed on top of the default list. Entries are
/// matched both before and after stemming.
pub const PUBLISHING_STOPWORDS: &[&str] = &["paper", "publish", "articl"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: BTreeSet<String>,
}

impl StopwordList {
    /// Parses one term per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        let mut list = Self::default();
        list.extend_from_text(text);
        list
    }

    /// SMART list plus the publishing additions.
    pub fn default_english() -> Self {
        let mut list = Self::parse(SMART_STOPWORDS);
        list.extend(PUBLISHING_STOPWORDS.iter().copied());
        list
    }

    pub fn extend_from_text(&mut self, text: &str) {
        for line in text.lines() {
            let term = line.split('#').next().unwrap_or("").trim();
            if !term.is_empty() {
                self.words.insert(term.to_lowercase());
            }
        }
    }

    pub fn extend<'a>(&mut self, words: impl IntoIterator<Item = &'a str>) {
        self.words.extend(words.into_iter().map(|w| w.trim().to_lowercase()));
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let l = StopwordList::parse("# header\nthe\n\n  And  # trailing\n");
        assert_eq!(l.len(), 2);
        assert!(l.contains("the") && l.contains("and"));
    }

    #[test]
    fn default_list_is_frozen() {
        let l = StopwordList::default_english();
        assert_eq!(StopwordList::parse(SMART_STOPWORDS).len(), 570);
        assert_eq!(l.len(), 573);
        assert!(l.contains("this") && l.contains("paper") && l.contains("publish"));
    }
}
