// Copyright 2026 The pb-bobw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Caps on the exhaustive (exponential-time) checks.

use crate::error::{Error, Result};

/// Environment variable overriding [`Limits::default`].
pub const LIMIT_ENV: &str = "PB_BOBW_LIMIT";

/// Subsets are handled as `u64` masks, so no limit may exceed this.
pub const HARD_CAP: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for checks enumerating voter subsets (GFS).
    pub max_voters: usize,
    /// Largest `m` for checks enumerating project subsets (EJR, FJR, GCR, …).
    pub max_projects: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_voters: 16,
            max_projects: 20,
        }
    }
}

impl Limits {
    /// Parses `"<voters>,<projects>"`, or a single value applied to both.
    pub fn parse(spec: &str) -> Result<Self> {
        let parse_one = |s: &str| -> Result<usize> {
            let v: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("invalid limit {s:?}")))?;
            if v > HARD_CAP {
                return Err(Error::Precondition(format!(
                    "limit {v} above hard cap {HARD_CAP}"
                )));
            }
            Ok(v)
        };
        match spec.split_once(',') {
            Some((v, p)) => Ok(Limits {
                max_voters: parse_one(v)?,
                max_projects: parse_one(p)?,
            }),
            None => {
                let v = parse_one(spec)?;
                Ok(Limits {
                    max_voters: v,
                    max_projects: v,
                })
            }
        }
    }

    /// Defaults, overridden by `PB_BOBW_LIMIT` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(LIMIT_ENV) {
            Ok(spec) => Limits::parse(&spec),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn check_voters(&self, n: usize) -> Result<()> {
        if n > self.max_voters {
            return Err(Error::Scale {
                what: "voter set",
                size: n,
                limit: self.max_voters,
            });
        }
        Ok(())
    }

    pub fn check_projects(&self, m: usize) -> Result<()> {
        if m > self.max_projects.min(HARD_CAP) {
            return Err(Error::Scale {
                what: "project set",
                size: m,
                limit: self.max_projects.min(HARD_CAP),
            });
        }
        Ok(())
    }
}
