//! Linear Hall transversals and truncated paradoxical decompositions.
//!
//! A certificate at basis degree `d` partitions the normal words of degree
//! `<= d` into parts `A_t` with translator pairs `(g_t, h_t)` such that all
//! vectors `e·g_t, e·h_t` (`e ∈ A_t`) are linearly independent. It only
//! speaks about the canonical deglex basis and about the window of degree
//! `d + deg S`; passing from finite pieces to a decomposition of the whole
//! basis needs a compactness argument that is not computational.

mod transversal;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use transversal::{
    double_transversal, hall_transversal, DeficiencyWitness, DoubleTransversal, HallOutcome, Transversal,
    TransversalInstance,
};

use crate::algebra::{enumerate_basis, AlgebraPresentation, CoordinateWindow, Element, Translator};
use crate::error::{Error, Result};
use crate::exactlin::{rank_of, RowSpace, SparseVec};
use crate::rational::{ratio, Rational};

pub const CERTIFICATE_LABEL: &str = "truncated certificate (canonical deglex normal-word basis)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParadoxPart {
    pub words: Vec<String>,
    pub g: String,
    pub h: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParadoxCertificate {
    pub label: String,
    pub algebra_hash: String,
    /// Words of degree `<= degree` form the basis slice `E`.
    pub degree: usize,
    pub degree_bound: usize,
    pub parts: Vec<ParadoxPart>,
}

impl ParadoxCertificate {
    /// One part holding every word of degree `<= d`, translated by `g` and `h`.
    pub fn single_part(pres: &AlgebraPresentation, d: usize, g: &Element, h: &Element, degree_bound: usize) -> Self {
        ParadoxCertificate {
            label: CERTIFICATE_LABEL.into(),
            algebra_hash: pres.content_hash(),
            degree: d,
            degree_bound,
            parts: vec![ParadoxPart {
                words: pres.normal_words_up_to(d).iter().map(|w| pres.format_word(w)).collect(),
                g: pres.format_element(g),
                h: pres.format_element(h),
            }],
        }
    }

    pub fn basis_size(&self) -> usize {
        self.parts.iter().map(|p| p.words.len()).sum()
    }
}

/// Normal words whose translates by `S` span fewer than `2|words|` dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParadoxDeficiency {
    pub algebra_hash: String,
    pub degree: usize,
    pub translators: Vec<String>,
    pub words: Vec<String>,
    pub dim: usize,
    pub required: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ParadoxOutcome {
    Certificate(ParadoxCertificate),
    Deficient(ParadoxDeficiency),
}

fn check_translators(s: &[Element], d: usize, window: &CoordinateWindow) -> Result<()> {
    if s.iter().any(Element::is_zero) {
        return Err(Error::ZeroElement);
    }
    let need = d + s.iter().map(Element::degree).max().unwrap_or(0);
    if need > window.degree_bound() {
        return Err(Error::overflow(need, window.degree_bound()));
    }
    Ok(())
}

/// The transversal instance with slots the words of degree `<= d` and
/// candidates their right translates by each element of `s`.
pub fn translate_instance(
    pres: &AlgebraPresentation,
    s: &[Element],
    d: usize,
    window: &CoordinateWindow,
) -> Result<TransversalInstance> {
    check_translators(s, d, window)?;
    let translators: Vec<Translator> = s.iter().map(|r| Translator::new(pres, window, r)).collect();
    let slots = (0..window.columns_up_to(d))
        .map(|c| translators.iter().map(|t| t.word(c)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    TransversalInstance::new(window.field(), window.len(), slots)
}

/// Partition of the degree-`d` basis slice with translators from `S × S`,
/// parts indexed by the chosen pair, or a deficient word set.
pub fn build_paradox(pres: &AlgebraPresentation, s: &[Element], d: usize, window: &CoordinateWindow) -> Result<ParadoxOutcome> {
    let inst = translate_instance(pres, s, d, window)?;
    Ok(match double_transversal(&inst) {
        HallOutcome::Found(t) => {
            let mut groups: BTreeMap<(usize, usize), Vec<String>> = BTreeMap::new();
            for (col, (&a, &b)) in t.phi.iter().zip(&t.psi).enumerate() {
                groups.entry((a, b)).or_default().push(pres.format_word(window.word(col)));
            }
            ParadoxOutcome::Certificate(ParadoxCertificate {
                label: CERTIFICATE_LABEL.into(),
                algebra_hash: pres.content_hash(),
                degree: d,
                degree_bound: window.degree_bound(),
                parts: groups
                    .into_iter()
                    .map(|((a, b), words)| ParadoxPart {
                        words,
                        g: pres.format_element(&s[a]),
                        h: pres.format_element(&s[b]),
                    })
                    .collect(),
            })
        }
        HallOutcome::Deficient(w) => ParadoxOutcome::Deficient(ParadoxDeficiency {
            algebra_hash: pres.content_hash(),
            degree: d,
            translators: s.iter().map(|e| pres.format_element(e)).collect(),
            words: w.slots.iter().map(|&c| pres.format_word(window.word(c))).collect(),
            dim: w.dim,
            required: w.required(),
        }),
    })
}

/// Parses the certificate's parts into `(word column, g, h)` triples in the
/// given window, failing if a word is not a normal word of degree `<= degree`.
fn certificate_rows(
    pres: &AlgebraPresentation,
    cert: &ParadoxCertificate,
    window: &CoordinateWindow,
) -> Result<Vec<(usize, Element, Element)>> {
    let mut rows = Vec::new();
    for part in &cert.parts {
        let g = pres.parse_element(&part.g)?;
        let h = pres.parse_element(&part.h)?;
        for w in &part.words {
            let word = pres.parse_word(w)?;
            let col = window
                .index_of(&word)
                .filter(|_| pres.is_normal_word(&word) && word.degree() <= cert.degree)
                .ok_or_else(|| Error::Invalid(format!("`{w}` is not a normal word of degree <= {}", cert.degree)))?;
            rows.push((col, g.clone(), h.clone()));
        }
    }
    Ok(rows)
}

fn translated_vectors(
    pres: &AlgebraPresentation,
    rows: &[(usize, Element, Element)],
    window: &CoordinateWindow,
) -> Result<Vec<SparseVec>> {
    let mut out = Vec::with_capacity(2 * rows.len());
    for (col, g, h) in rows {
        for r in [g, h] {
            out.push(window.vector(&pres.multiply_normal_word(window.word(*col), r))?);
        }
    }
    Ok(out)
}

/// Recomputes everything: the parts partition the words of degree `<=
/// degree`, and the `2|E|` translates have full rank.
pub fn verify_paradox(pres: &AlgebraPresentation, cert: &ParadoxCertificate) -> Result<bool> {
    if cert.algebra_hash != pres.content_hash() {
        return Err(Error::Invalid("certificate was issued for a different algebra".into()));
    }
    let window = enumerate_basis(pres, cert.degree_bound)?;
    if cert.degree > window.degree_bound() {
        return Err(Error::overflow(cert.degree, window.degree_bound()));
    }
    let rows = match certificate_rows(pres, cert, &window) {
        Ok(rows) => rows,
        Err(Error::Invalid(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    let cols: BTreeSet<usize> = rows.iter().map(|r| r.0).collect();
    let expected = window.columns_up_to(cert.degree);
    if cols.len() != rows.len() || cols.len() != expected {
        return Ok(false);
    }
    if rows.iter().any(|(_, g, h)| g.is_zero() || h.is_zero()) {
        return Ok(false);
    }
    let deg = rows.iter().map(|(_, g, h)| g.degree().max(h.degree())).max().unwrap_or(0);
    if cert.degree + deg > window.degree_bound() {
        return Err(Error::overflow(cert.degree + deg, window.degree_bound()));
    }
    let vs = translated_vectors(pres, &rows, &window)?;
    Ok(rank_of(window.field(), window.len(), &vs)? == 2 * rows.len())
}

/// `|{e·g_t, e·h_t} ∩ V| / dim V`: how much of `V` the doubled set fills.
pub fn mass_doubling_check(
    pres: &AlgebraPresentation,
    cert: &ParadoxCertificate,
    v: &RowSpace,
    window: &CoordinateWindow,
) -> Result<Rational> {
    if v.is_zero() {
        return Err(Error::ZeroSubspace);
    }
    let rows = certificate_rows(pres, cert, window)?;
    let vs = translated_vectors(pres, &rows, window)?;
    let mut inside = 0;
    for x in &vs {
        if v.contains(x)? {
            inside += 1;
        }
    }
    Ok(ratio(inside, v.dim()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(json: &str) -> AlgebraPresentation {
        AlgebraPresentation::from_json(json).unwrap()
    }

    #[test]
    fn free_algebra_is_paradoxical() {
        let free = pres(r#"{"generators":["x","y"]}"#);
        let win = enumerate_basis(&free, 5).unwrap();
        let s = free.generator_elements();
        let ParadoxOutcome::Certificate(c) = build_paradox(&free, &s, 4, &win).unwrap() else {
            panic!("expected a certificate")
        };
        assert!(c.parts.len() <= 4);
        assert_eq!(c.basis_size(), 31);
        assert!(verify_paradox(&free, &c).unwrap());

        let canon = ParadoxCertificate::single_part(&free, 4, &s[0], &s[1], 5);
        assert!(verify_paradox(&free, &canon).unwrap());
        let v = win.ball_words(5);
        assert_eq!(mass_doubling_check(&free, &canon, &v, &win).unwrap(), Rational::new(62, 63));
        assert_eq!(mass_doubling_check(&free, &canon, &win.ball_words(0), &win).unwrap(), Rational::from_integer(0));

        let mut dup = canon.clone();
        dup.parts[0].words.push("x".into());
        assert!(!verify_paradox(&free, &dup).unwrap());
        let mut zero = canon.clone();
        zero.parts[0].g = "0".into();
        assert!(!verify_paradox(&free, &zero).unwrap());
    }

    #[test]
    fn polynomial_ring_is_deficient() {
        let kx = pres(r#"{"generators":["x"]}"#);
        let win = enumerate_basis(&kx, 7).unwrap();
        let s = kx.parse_list("x, x*x").unwrap();
        let ParadoxOutcome::Deficient(w) = build_paradox(&kx, &s, 5, &win).unwrap() else {
            panic!("expected a deficiency")
        };
        assert!(w.dim < w.required);
        assert!(w.words.len() <= 6);
    }
}
