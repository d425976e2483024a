// Copyright (c) 2026 ram-workbench contributors
// SPDX-License-Identifier: Apache-2.0

//! JSON persistence for a built [`PreprocContext`].
//!
//! The file is an envelope carrying a format version and the (n, c, d)
//! parameters next to the table payload; loading validates the version and
//! checks the header against the payload so a truncated or mixed-up file
//! is rejected instead of producing wrong answers.

use crate::{ArithError, ArithResult, PreprocContext};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Bumped whenever the table layout changes incompatibly.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Envelope {
    version: u32,
    n: u64,
    c: u64,
    d: u32,
    context: PreprocContext,
}

impl PreprocContext {
    pub fn to_json(&self) -> ArithResult<String> {
        let env = Envelope {
            version: FORMAT_VERSION,
            n: self.n,
            c: self.c,
            d: self.d,
            context: self.clone(),
        };
        serde_json::to_string(&env).map_err(|e| ArithError::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> ArithResult<PreprocContext> {
        let env: Envelope =
            serde_json::from_str(s).map_err(|e| ArithError::Serialization(e.to_string()))?;
        if env.version != FORMAT_VERSION {
            return Err(ArithError::Serialization(format!(
                "format version {} is not the supported {FORMAT_VERSION}",
                env.version
            )));
        }
        let ctx = env.context;
        if env.n != ctx.n || env.c != ctx.c || env.d != ctx.d {
            return Err(ArithError::Serialization(format!(
                "header (N={}, c={}, d={}) disagrees with payload (N={}, c={}, d={})",
                env.n, env.c, env.d, ctx.n, ctx.c, ctx.d
            )));
        }
        Ok(ctx)
    }

    pub fn save(&self, path: &Path) -> ArithResult<()> {
        let s = self.to_json()?;
        std::fs::write(path, s).map_err(|e| ArithError::Serialization(e.to_string()))
    }

    pub fn load(path: &Path) -> ArithResult<PreprocContext> {
        let s =
            std::fs::read_to_string(path).map_err(|e| ArithError::Serialization(e.to_string()))?;
        Self::from_json(&s)
    }
}

#[cfg(test)]
mod tests {
    use crate::build::build_context;
    use crate::ArithError;
    use crate::PreprocContext;

    #[test]
    fn roundtrip_preserves_queries() {
        let ctx = build_context(256, 8, 3).expect("build");
        let json = ctx.to_json().expect("serialize");
        let back = PreprocContext::from_json(&json).expect("deserialize");
        assert_eq!(back.n, 256);
        assert_eq!(back.total_build_steps, ctx.total_build_steps);
        for (a, b) in [(12345u128, 17u128), (999_999, 321)] {
            assert_eq!(
                back.divide(a, b).unwrap(),
                ctx.divide(a, b).unwrap(),
                "divide({a},{b}) changed across the roundtrip"
            );
        }
        assert_eq!(back.gen_root(65536, 4).unwrap().value, 16);
    }

    #[test]
    fn version_and_header_are_validated() {
        let ctx = build_context(64, 8, 2).expect("build");
        let json = ctx.to_json().expect("serialize");
        let wrong_version = json.replacen("\"version\":1", "\"version\":999", 1);
        assert!(matches!(
            PreprocContext::from_json(&wrong_version),
            Err(ArithError::Serialization(_))
        ));
        let wrong_n = json.replacen("\"n\":64", "\"n\":65", 1);
        assert!(matches!(
            PreprocContext::from_json(&wrong_n),
            Err(ArithError::Serialization(_))
        ));
        assert!(matches!(
            PreprocContext::from_json("{not json"),
            Err(ArithError::Serialization(_))
        ));
    }

    #[test]
    fn save_and_load_through_a_file() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("ctx.json");
        let ctx = build_context(64, 8, 2).expect("build");
        ctx.save(&path).expect("save");
        let back = PreprocContext::load(&path).expect("load");
        assert_eq!(back.n, 64);
        assert_eq!(back.divide(1000, 7).unwrap().value, 142);
    }
}
