//! Site-list syntax: comma-separated 1-based sites and inclusive ranges,
//! e.g. `1-10,21-30,45`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteParseError {
    pub token: String,
    pub reason: &'static str,
}

impl fmt::Display for SiteParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad site token '{}': {}", self.token, self.reason)
    }
}

impl std::error::Error for SiteParseError {}

pub fn parse_site_list(input: &str) -> Result<Vec<i64>, SiteParseError> {
    let mut sites = Vec::new();
    for raw in input.split(',') {
        let token = raw.trim();
        if token.is_empty() {
            return Err(SiteParseError { token: raw.to_string(), reason: "empty token" });
        }
        match token.split_once('-') {
            Some((a, b)) => {
                let start = parse_site(a, token)?;
                let end = parse_site(b, token)?;
                if end < start {
                    return Err(SiteParseError {
                        token: token.to_string(),
                        reason: "range end below start",
                    });
                }
                sites.extend(start..=end);
            }
            None => sites.push(parse_site(token, token)?),
        }
    }
    if sites.is_empty() {
        return Err(SiteParseError { token: input.to_string(), reason: "no sites given" });
    }
    Ok(sites)
}

fn parse_site(text: &str, token: &str) -> Result<i64, SiteParseError> {
    let v: i64 = text
        .trim()
        .parse()
        .map_err(|_| SiteParseError { token: token.to_string(), reason: "not an integer" })?;
    if v < 1 {
        return Err(SiteParseError { token: token.to_string(), reason: "sites are 1-based" });
    }
    Ok(v)
}

/// Compact textual form of a sorted site list, inverse of `parse_site_list`.
pub fn format_site_list(sites: &[i64]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < sites.len() {
        let start = sites[i];
        let mut end = start;
        while i + 1 < sites.len() && sites[i + 1] == end + 1 {
            i += 1;
            end = sites[i];
        }
        if !out.is_empty() {
            out.push(',');
        }
        if end > start {
            out.push_str(&format!("{start}-{end}"));
        } else {
            out.push_str(&format!("{start}"));
        }
        i += 1;
    }
    out
}

pub fn parse_alpha_list(input: &str) -> Result<Vec<f64>, SiteParseError> {
    let mut out = Vec::new();
    for raw in input.split(',') {
        let token = raw.trim();
        let v: f64 = token.parse().map_err(|_| SiteParseError {
            token: token.to_string(),
            reason: "not a number",
        })?;
        out.push(v);
    }
    Ok(out)
}
