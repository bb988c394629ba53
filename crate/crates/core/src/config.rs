//! Line-oriented `key=value` system description.
//!
//! ```text
//! # light load
//! ns=100
//! users=10x(5,2)
//! seed=7
//! ```
//!
//! `users` takes space-separated groups `COUNTx(n,k)`; a bare `(n,k)` means one
//! user. `seed` defaults to 0. Blank lines and `#` comments are ignored.

use thiserror::Error;

use crate::model::{SystemConfig, UserCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key=value`")]
    Malformed { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: `{key}` must be a non-negative integer, got `{value}`")]
    NotANumber { line: usize, key: String, value: String },
    #[error("line {line}: cannot parse user group `{token}`, expected COUNTx(n,k)")]
    BadUserGroup { line: usize, token: String },
    #[error("line {line}: code ({n},{k}) needs 1 <= k <= n")]
    BadThreshold { line: usize, n: usize, k: usize },
    #[error("line {line}: code ({n},{k}) sends more bursts than the {ns} slots of the frame")]
    TooManyBursts { line: usize, n: usize, k: usize, ns: usize },
    #[error("line {line}: user list is empty")]
    EmptyUsers { line: usize },
    #[error("line {line}: ns must be at least 1")]
    EmptyFrame { line: usize },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
}

struct UserGroup {
    count: usize,
    n: usize,
    k: usize,
}

fn parse_number(line: usize, key: &str, value: &str) -> Result<u64, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::NotANumber {
        line,
        key: key.to_string(),
        value: value.trim().to_string(),
    })
}

fn parse_groups(line: usize, value: &str) -> Result<Vec<UserGroup>, ConfigError> {
    let bad = |token: &str| ConfigError::BadUserGroup {
        line,
        token: token.trim().to_string(),
    };
    let mut pieces: Vec<&str> = value.split(')').collect();
    let tail = pieces.pop().unwrap_or("");
    if !tail.trim().is_empty() {
        return Err(bad(tail));
    }
    pieces
        .into_iter()
        .map(|piece| {
            let (prefix, inner) = piece.split_once('(').ok_or_else(|| bad(piece))?;
            let prefix = prefix.trim();
            let count = if prefix.is_empty() {
                1
            } else {
                let digits = prefix.strip_suffix(['x', 'X']).ok_or_else(|| bad(piece))?;
                digits.trim().parse().map_err(|_| bad(piece))?
            };
            let (n, k) = inner.split_once(',').ok_or_else(|| bad(piece))?;
            let n = n.trim().parse().map_err(|_| bad(piece))?;
            let k = k.trim().parse().map_err(|_| bad(piece))?;
            Ok(UserGroup { count, n, k })
        })
        .collect()
}

/// Parses and validates a config document.
pub fn parse_config(text: &str) -> Result<SystemConfig, ConfigError> {
    let mut ns: Option<(usize, u64)> = None;
    let mut users: Option<(usize, Vec<UserGroup>)> = None;
    let mut seed: Option<(usize, u64)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(ConfigError::Malformed { line })?;
        let key = key.trim();
        let duplicate = || ConfigError::DuplicateKey {
            line,
            key: key.to_string(),
        };
        match key {
            "ns" => {
                if ns.is_some() {
                    return Err(duplicate());
                }
                ns = Some((line, parse_number(line, key, value)?));
            }
            "seed" => {
                if seed.is_some() {
                    return Err(duplicate());
                }
                seed = Some((line, parse_number(line, key, value)?));
            }
            "users" => {
                if users.is_some() {
                    return Err(duplicate());
                }
                users = Some((line, parse_groups(line, value)?));
            }
            _ => {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                })
            }
        }
    }

    let (ns_line, ns) = ns.ok_or(ConfigError::Missing("ns"))?;
    if ns == 0 {
        return Err(ConfigError::EmptyFrame { line: ns_line });
    }
    let ns = ns as usize;
    let (users_line, groups) = users.ok_or(ConfigError::Missing("users"))?;
    let mut list = Vec::new();
    for g in &groups {
        let code = UserCode::new(g.n, g.k).map_err(|_| ConfigError::BadThreshold {
            line: users_line,
            n: g.n,
            k: g.k,
        })?;
        if g.n > ns {
            return Err(ConfigError::TooManyBursts {
                line: users_line,
                n: g.n,
                k: g.k,
                ns,
            });
        }
        list.extend(std::iter::repeat_n(code, g.count));
    }
    if list.is_empty() {
        return Err(ConfigError::EmptyUsers { line: users_line });
    }
    let seed = seed.map_or(0, |(_, s)| s);
    SystemConfig::new(ns, list, seed).map_err(|_| ConfigError::EmptyUsers { line: users_line })
}

/// Inverse of [`parse_config`]; consecutive equal codes are grouped.
pub fn render_config(config: &SystemConfig) -> String {
    let mut groups: Vec<(UserCode, usize)> = Vec::new();
    for &code in config.users() {
        match groups.last_mut() {
            Some((last, count)) if *last == code => *count += 1,
            _ => groups.push((code, 1)),
        }
    }
    let users: Vec<String> = groups
        .iter()
        .map(|(c, count)| format!("{count}x({},{})", c.n(), c.k()))
        .collect();
    format!(
        "ns={}\nusers={}\nseed={}\n",
        config.ns(),
        users.join(" "),
        config.seed()
    )
}
