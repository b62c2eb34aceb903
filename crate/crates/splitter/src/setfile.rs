//! Reading and writing splitter sets.
//!
//! Two interchangeable forms:
//! * text — optional `#` comment lines, then one decimal element per line;
//!   the modulus and interval travel out of band (CLI flags);
//! * JSON — one object `{"modulus": .., "k1": .., "k2": .., "elements": [..]}`
//!   with elements ascending.
//!
//! Both round-trip byte for byte through `parse`/`render`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::splitter_core::{Interval, SplitterSet};

/// Parses the text form: `#` comments and blank lines skipped, one decimal
/// element per line.
pub fn parse_elements_text(input: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value = line.parse::<u64>().map_err(|_| {
            Error::MalformedSetFile(format!("line {}: expected a decimal element, got {line:?}", lineno + 1))
        })?;
        out.push(value);
    }
    Ok(out)
}

/// Renders the text form. `comments` go first, one `# `-prefixed line each.
pub fn render_elements_text(elements: &[u64], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    for &e in elements {
        out.push_str(&e.to_string());
        out.push('\n');
    }
    out
}

/// Parses the JSON form and checks that elements come sorted ascending
/// without repeats.
pub fn parse_set_json(input: &str) -> Result<SplitterSet> {
    let set: SplitterSet = serde_json::from_str(input)?;
    if set.elements.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::MalformedSetFile(
            "elements must be strictly ascending".into(),
        ));
    }
    SplitterSet::new(
        set.modulus,
        Interval::new(set.k1, set.k2)?,
        set.elements,
    )
}

/// Renders the JSON form with elements ascending, trailing newline included.
pub fn render_set_json(set: &SplitterSet) -> Result<String> {
    let mut canonical = set.clone();
    canonical.elements.sort_unstable();
    let mut out = serde_json::to_string_pretty(&canonical)?;
    out.push('\n');
    Ok(out)
}

/// Loads a set from a file, dispatching on the `.json` extension; text files
/// take the modulus and interval from the caller.
pub fn read_set_file(path: &Path, modulus: u64, interval: Interval) -> Result<SplitterSet> {
    let body = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        let set = parse_set_json(&body)?;
        if set.modulus != modulus || set.interval() != interval {
            return Err(Error::MalformedSetFile(format!(
                "file describes B{}({}) but B{}({}) was requested",
                set.interval(),
                set.modulus,
                interval,
                modulus
            )));
        }
        Ok(set)
    } else {
        let elements = parse_elements_text(&body)?;
        SplitterSet::new(modulus, interval, elements)
    }
}

/// Writes a set to a file; format follows the `.json` extension.
pub fn write_set_file(path: &Path, set: &SplitterSet, comments: &[String]) -> Result<()> {
    let body = if path.extension().is_some_and(|e| e == "json") {
        render_set_json(set)?
    } else {
        let mut elements = set.elements.clone();
        elements.sort_unstable();
        render_elements_text(&elements, comments)
    };
    std::fs::write(path, body)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SplitterSet {
        SplitterSet::new(13, Interval::new(2, 2).unwrap(), vec![1, 3, 9]).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let rendered = render_elements_text(&[1, 3, 9], &["a comment".into()]);
        assert_eq!(rendered, "# a comment\n1\n3\n9\n");
        assert_eq!(parse_elements_text(&rendered).unwrap(), vec![1, 3, 9]);
        assert_eq!(
            render_elements_text(&parse_elements_text(&rendered).unwrap(), &["a comment".into()]),
            rendered
        );
    }

    #[test]
    fn text_rejects_garbage() {
        assert!(parse_elements_text("12\nnope\n").is_err());
        assert!(parse_elements_text("-3\n").is_err());
        assert_eq!(parse_elements_text("\n# only comments\n").unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn json_round_trip() {
        let set = sample();
        let rendered = render_set_json(&set).unwrap();
        let parsed = parse_set_json(&rendered).unwrap();
        assert_eq!(parsed, set);
        assert_eq!(render_set_json(&parsed).unwrap(), rendered);
    }

    #[test]
    fn json_rejects_unsorted_or_invalid() {
        assert!(parse_set_json(r#"{"modulus":13,"k1":2,"k2":2,"elements":[3,1]}"#).is_err());
        assert!(parse_set_json(r#"{"modulus":13,"k1":2,"k2":2,"elements":[1,1]}"#).is_err());
        assert!(parse_set_json(r#"{"modulus":13,"k1":2,"k2":2,"elements":[0]}"#).is_err());
        assert!(parse_set_json("not json").is_err());
    }

    #[test]
    fn file_round_trip_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let set = sample();

        let txt = dir.path().join("b.txt");
        write_set_file(&txt, &set, &[]).unwrap();
        let back = read_set_file(&txt, 13, set.interval()).unwrap();
        assert_eq!(back.elements, vec![1, 3, 9]);

        let json = dir.path().join("b.json");
        write_set_file(&json, &set, &[]).unwrap();
        let back = read_set_file(&json, 13, set.interval()).unwrap();
        assert_eq!(back, set);
        // mismatched request
        assert!(read_set_file(&json, 17, set.interval()).is_err());
    }
}
