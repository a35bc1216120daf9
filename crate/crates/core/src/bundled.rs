//! Example presentations shipped with the crate.

use crate::algebra::AlgebraPresentation;
use crate::error::Result;

/// `(name, JSON source)` for every bundled presentation.
pub const PRESENTATIONS: &[(&str, &str)] = &[
    ("free2", include_str!("../presentations/free2.json")),
    ("polyxy", include_str!("../presentations/polyxy.json")),
    ("ex33", include_str!("../presentations/ex33.json")),
    ("kx", include_str!("../presentations/kx.json")),
    ("z2grp", include_str!("../presentations/z2grp.json")),
    ("f2grp", include_str!("../presentations/f2grp.json")),
];

/// Pattern exhaustions for `ex33`: `W_n` with `y^a x` up to `a <= n²`, and
/// `W'_n` with `a <= n`.
pub const EX33_WN: &str = include_str!("../presentations/ex33_wn.json");
pub const EX33_WN_PRIME: &str = include_str!("../presentations/ex33_wn_prime.json");

/// Bundled exhaustion and module inputs, addressable by name from the CLI.
pub const INPUTS: &[(&str, &str)] = &[
    ("ex33_wn", EX33_WN),
    ("ex33_wn_prime", EX33_WN_PRIME),
    ("ex33_m", include_str!("../presentations/ex33_m.json")),
];

pub fn input(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    INPUTS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn source(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    PRESENTATIONS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Option<Result<AlgebraPresentation>> {
    source(name).map(AlgebraPresentation::from_json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::enumerate_basis;

    #[test]
    fn all_bundled_are_confluent() {
        for (name, _) in PRESENTATIONS {
            let p = load(name).unwrap().unwrap();
            assert!(enumerate_basis(&p, 4).is_ok(), "{name}");
        }
        assert!(source("kx.json").is_some());
        assert!(source("nope").is_none());
    }

    #[test]
    fn group_algebra_bases() {
        // K[Z^2]: x^a or X^a followed by y^b or Y^b; 4m sphere words at radius m
        let z2 = load("z2grp").unwrap().unwrap();
        let win = enumerate_basis(&z2, 4).unwrap();
        assert_eq!(win.columns_up_to(3), 1 + 4 + 8 + 12);
        // free group: 4·3^{m-1} reduced words of length m
        let f2 = load("f2grp").unwrap().unwrap();
        let win = enumerate_basis(&f2, 4).unwrap();
        assert_eq!(win.len(), 1 + 4 + 12 + 36 + 108);
    }
}
