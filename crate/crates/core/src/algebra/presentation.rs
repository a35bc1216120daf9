use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::parse::{is_valid_generator_name, Parser};
use super::{Element, Word};
use crate::error::{Error, Result};
use crate::exactlin::{FieldSpec, DEFAULT_CHARACTERISTIC};

/// On-disk form of a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    #[serde(rename = "char", default = "default_char")]
    pub characteristic: u64,
    #[serde(default = "default_unital")]
    pub unital: bool,
    pub generators: Vec<String>,
    #[serde(default)]
    pub rules: Vec<RuleFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub lhs: String,
    pub rhs: String,
}

fn default_char() -> u64 {
    DEFAULT_CHARACTERISTIC
}

fn default_unital() -> bool {
    true
}

/// A rewrite rule `lhs -> rhs`; `rhs` is strictly deglex-smaller than `lhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Element,
}

/// A finitely presented associative algebra over GF(p), given by generators
/// and a terminating rewriting system.
#[derive(Debug, Clone)]
pub struct AlgebraPresentation {
    field: FieldSpec,
    generators: Vec<String>,
    unital: bool,
    rules: Vec<Rule>,
    // rule indices keyed by the last letter of their left-hand side
    by_last: HashMap<u16, Vec<usize>>,
    source: PresentationFile,
}

impl AlgebraPresentation {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresentationFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidPresentation(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn from_file(file: PresentationFile) -> Result<Self> {
        let field = FieldSpec::new(file.characteristic)?;
        let generators = file.generators.clone();
        if generators.len() > u16::MAX as usize {
            return Err(Error::InvalidPresentation("too many generators".into()));
        }
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !is_valid_generator_name(g) {
                return Err(Error::InvalidPresentation(format!("invalid generator name `{g}`")));
            }
            if !seen.insert(g.as_str()) {
                return Err(Error::InvalidPresentation(format!("duplicate generator `{g}`")));
            }
        }
        let mut rules = Vec::with_capacity(file.rules.len());
        for r in &file.rules {
            let (lhs, _) = Parser::new(&r.lhs, &generators, field).element()?;
            let lhs = match lhs.terms().collect::<Vec<_>>().as_slice() {
                [(w, 1)] if !w.is_unit() => (*w).clone(),
                _ => {
                    return Err(Error::InvalidPresentation(format!(
                        "rule lhs `{}` must be a single nonempty word",
                        r.lhs
                    )))
                }
            };
            let (rhs, rhs_unit) = Parser::new(&r.rhs, &generators, field).element()?;
            if rhs_unit && !file.unital {
                return Err(Error::UnitInNonUnital);
            }
            if let Some(w) = rhs.words().find(|w| **w >= lhs) {
                return Err(Error::InvalidPresentation(format!(
                    "rule `{} -> {}` does not decrease deglex order (rhs word of degree {})",
                    r.lhs,
                    r.rhs,
                    w.degree()
                )));
            }
            rules.push(Rule { lhs, rhs });
        }
        let mut by_last: HashMap<u16, Vec<usize>> = HashMap::new();
        for (i, r) in rules.iter().enumerate() {
            by_last.entry(r.lhs.last().unwrap()).or_default().push(i);
        }
        Ok(AlgebraPresentation {
            field,
            generators,
            unital: file.unital,
            rules,
            by_last,
            source: file,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn n_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn source(&self) -> &PresentationFile {
        &self.source
    }

    pub fn max_rule_degree(&self) -> usize {
        self.rules.iter().map(|r| r.lhs.degree()).max().unwrap_or(0)
    }

    /// SHA-256 of the canonical JSON serialization of the presentation.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_vec(&self.source).expect("presentation serializes");
        hex::encode(Sha256::digest(canonical))
    }

    pub fn generator(&self, name: &str) -> Result<Element> {
        let g = self
            .generators
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownGenerator(name.into()))?;
        Ok(Element::word(Word::letter(g as u16)))
    }

    pub fn generator_elements(&self) -> Vec<Element> {
        (0..self.generators.len())
            .map(|g| Element::word(Word::letter(g as u16)))
            .collect()
    }

    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let (raw, uses_unit) = Parser::new(text, &self.generators, self.field).element()?;
        if uses_unit && !self.unital {
            return Err(Error::UnitInNonUnital);
        }
        Ok(self.normal_form(&raw))
    }

    /// Parses a comma-separated list of elements.
    pub fn parse_list(&self, text: &str) -> Result<Vec<Element>> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.parse_element(s))
            .collect()
    }

    /// Parses a single word (`x*y*x`, or `1` for the unit).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let (raw, _) = Parser::new(text, &self.generators, self.field).element()?;
        match raw.terms().collect::<Vec<_>>().as_slice() {
            [(w, 1)] => {
                if w.is_unit() && !self.unital {
                    return Err(Error::UnitInNonUnital);
                }
                Ok((*w).clone())
            }
            _ => Err(Error::Invalid(format!("`{text}` is not a word"))),
        }
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_unit() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(|&g| self.generators[g as usize].as_str())
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Renders an element in the element grammar; terms in deglex order.
    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (w, c)) in e.terms().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            match (c, w.is_unit()) {
                (1, _) => out.push_str(&self.format_word(w)),
                (c, true) => out.push_str(&c.to_string()),
                (c, false) => {
                    out.push_str(&c.to_string());
                    out.push('*');
                    out.push_str(&self.format_word(w));
                }
            }
        }
        out
    }

    fn rule_at_suffix(&self, stack: &[u16]) -> Option<&Rule> {
        let last = *stack.last()?;
        let candidates = self.by_last.get(&last)?;
        candidates
            .iter()
            .map(|&i| &self.rules[i])
            .find(|r| stack.ends_with(r.lhs.letters()))
    }

    /// Is `w` free of every rule's left-hand side?
    pub fn is_normal_word(&self, w: &Word) -> bool {
        let l = w.letters();
        (1..=l.len()).all(|end| self.rule_at_suffix(&l[..end]).is_none())
    }

    /// Rewrites `prefix · input` to normal form, scaled by `coeff`, adding the
    /// result into `out`. `prefix` must already be a normal word.
    ///
    /// Letters are pushed one at a time onto a stack that is kept normal; when
    /// a rule's left-hand side appears as a suffix it is popped and the rule's
    /// right-hand side is fed back in front of the remaining input.
    fn reduce_into(&self, coeff: u32, prefix: &[u16], input: &[u16], out: &mut BTreeMap<Word, u32>) {
        let f = self.field;
        // pending input is stored reversed so the next letter is at the end
        let mut work: Vec<(u32, Vec<u16>, Vec<u16>)> =
            vec![(coeff, prefix.to_vec(), input.iter().rev().copied().collect())];
        'items: while let Some((mut c, mut stack, mut pending)) = work.pop() {
            while let Some(g) = pending.pop() {
                stack.push(g);
                let Some(rule) = self.rule_at_suffix(&stack) else { continue };
                stack.truncate(stack.len() - rule.lhs.degree());
                let mut terms = rule.rhs.terms();
                let Some((w0, c0)) = terms.next() else {
                    continue 'items;
                };
                for (w, cw) in terms {
                    let mut p = pending.clone();
                    p.extend(w.letters().iter().rev());
                    work.push((f.mul(c, cw), stack.clone(), p));
                }
                c = f.mul(c, c0);
                pending.extend(w0.letters().iter().rev());
            }
            let e = out.entry(Word::new(stack)).or_insert(0);
            *e = f.add(*e, c);
        }
    }

    fn collect(out: BTreeMap<Word, u32>) -> Element {
        out.into_iter().filter(|(_, c)| *c != 0).collect()
    }

    pub fn normal_form(&self, e: &Element) -> Element {
        let mut out = BTreeMap::new();
        for (w, c) in e.terms() {
            self.reduce_into(c, &[], w.letters(), &mut out);
        }
        Self::collect(out)
    }

    pub fn normal_form_word(&self, w: &Word) -> Element {
        let mut out = BTreeMap::new();
        self.reduce_into(1, &[], w.letters(), &mut out);
        Self::collect(out)
    }

    /// Canonical product of two elements.
    pub fn multiply(&self, a: &Element, b: &Element) -> Element {
        let f = self.field;
        let mut out = BTreeMap::new();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                let mut letters = u.letters().to_vec();
                letters.extend_from_slice(v.letters());
                self.reduce_into(f.mul(cu, cv), &[], &letters, &mut out);
            }
        }
        Self::collect(out)
    }

    /// Product `u · b` for a word `u` already in normal form.
    pub fn multiply_normal_word(&self, u: &Word, b: &Element) -> Element {
        let mut out = BTreeMap::new();
        for (v, cv) in b.terms() {
            self.reduce_into(cv, u.letters(), v.letters(), &mut out);
        }
        Self::collect(out)
    }

    /// Product `a · v` for a word `v`.
    pub fn multiply_by_word(&self, a: &Element, v: &Word) -> Element {
        let mut out = BTreeMap::new();
        for (u, cu) in a.terms() {
            let mut letters = u.letters().to_vec();
            letters.extend_from_slice(v.letters());
            self.reduce_into(cu, &[], &letters, &mut out);
        }
        Self::collect(out)
    }

    /// Overlap and inclusion ambiguities of combined degree at most `bound`
    /// whose two one-step reducts have different normal forms. An empty result
    /// means every ambiguity up to `bound` resolves.
    pub fn confluence_check(&self, bound: usize) -> Vec<String> {
        let mut bad: BTreeSet<Word> = BTreeSet::new();
        let mut check = |w: Word, a: Element, b: Element| {
            if w.degree() <= bound && self.normal_form(&a) != self.normal_form(&b) {
                bad.insert(w);
            }
        };
        let f = self.field;
        let splice = |pre: &[u16], mid: &Element, post: &[u16]| -> Element {
            let mut e = Element::zero();
            for (w, c) in mid.terms() {
                let mut l = pre.to_vec();
                l.extend_from_slice(w.letters());
                l.extend_from_slice(post);
                e.add_term(f, Word::new(l), c);
            }
            e
        };
        for (i, ri) in self.rules.iter().enumerate() {
            let li = ri.lhs.letters();
            for (j, rj) in self.rules.iter().enumerate() {
                let lj = rj.lhs.letters();
                // overlaps: a proper suffix of lhs_i equals a proper prefix of lhs_j
                for k in 1..li.len().min(lj.len()) {
                    if li[li.len() - k..] == lj[..k] {
                        let w = Word::new([li, &lj[k..]].concat());
                        let a = splice(&[], &ri.rhs, &lj[k..]);
                        let b = splice(&li[..li.len() - k], &rj.rhs, &[]);
                        check(w, a, b);
                    }
                }
                // inclusions: lhs_j occurs inside lhs_i
                if i != j && lj.len() <= li.len() {
                    for pos in 0..=li.len() - lj.len() {
                        if li[pos..pos + lj.len()] == *lj {
                            let a = ri.rhs.clone();
                            let b = splice(&li[..pos], &rj.rhs, &li[pos + lj.len()..]);
                            check(ri.lhs.clone(), a, b);
                        }
                    }
                }
            }
        }
        bad.iter().map(|w| self.format_word(w)).collect()
    }

    /// Searches pairs of normal words of degree at most `bound` whose product
    /// vanishes. Finding none is not a proof that the algebra is a domain.
    pub fn find_zero_divisors(&self, bound: usize) -> Option<(Element, Element)> {
        let words = self.normal_words_up_to(bound);
        for a in &words {
            for b in &words {
                let prod = self.multiply_normal_word(a, &Element::word(b.clone()));
                if prod.is_zero() {
                    return Some((Element::word(a.clone()), Element::word(b.clone())));
                }
            }
        }
        None
    }

    /// All normal words of degree at most `bound` in deglex order (the empty
    /// word only for unital algebras). Does not check confluence.
    pub fn normal_words_up_to(&self, bound: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer = vec![Word::unit()];
        if self.unital {
            out.push(Word::unit());
        }
        for _ in 0..bound {
            let mut next = Vec::with_capacity(layer.len() * self.generators.len());
            for w in &layer {
                for g in 0..self.generators.len() as u16 {
                    let mut l = w.letters().to_vec();
                    l.push(g);
                    if self.rule_at_suffix(&l).is_none() {
                        next.push(Word::new(l));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}
