//! Words in a free group, written `"g0 g1^-1 g0^2"`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{unimodular_inverse, IntMatrix};

/// Freely reduced word: (generator index, nonzero exponent) with no two
/// adjacent letters on the same generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<(usize, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (g, e) in letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word(out)
    }

    pub fn parse(s: &str, names: &[String]) -> Result<Self> {
        let index: HashMap<&str, usize> =
            names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut letters = Vec::new();
        for (pos, tok) in s.split_whitespace().enumerate() {
            if tok == "1" || tok == "e" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| {
                        Error::validation(format!("bad exponent in token {pos} ({tok:?}) of word {s:?}"))
                    })?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let g = index.get(name).ok_or_else(|| {
                Error::validation(format!("unknown generator {name:?} at token {pos} of word {s:?}"))
            })?;
            letters.push((*g, exp));
        }
        Ok(Word::from_letters(letters))
    }

    pub fn format(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|(g, e)| if *e == 1 { names[*g].clone() } else { format!("{}^{}", names[*g], e) })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|(g, e)| (*g, -e)).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|(g, _)| *g).max()
    }

    pub fn uses_inverses(&self) -> bool {
        self.0.iter().any(|(_, e)| *e < 0)
    }
}

/// Default generator names g0, g1, ...
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("g{i}")).collect()
}

fn mat_pow(m: &IntMatrix, mut e: u64) -> IntMatrix {
    let mut acc = IntMatrix::identity(m.rows());
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// Evaluates words at integer matrices, caching inverses.
pub struct IntEvaluator<'a> {
    gens: &'a [IntMatrix],
    inverses: Vec<Option<IntMatrix>>,
}

impl<'a> IntEvaluator<'a> {
    pub fn new(gens: &'a [IntMatrix]) -> Self {
        IntEvaluator { gens, inverses: vec![None; gens.len()] }
    }

    fn inverse(&mut self, g: usize) -> Result<IntMatrix> {
        if self.inverses[g].is_none() {
            let inv = unimodular_inverse(&self.gens[g]).map_err(|_| {
                Error::validation(format!("generator {g} is not invertible over the integers"))
            })?;
            self.inverses[g] = Some(inv);
        }
        Ok(self.inverses[g].clone().unwrap())
    }

    pub fn eval(&mut self, w: &Word) -> Result<IntMatrix> {
        let n = self.gens.first().map_or(0, |g| g.rows());
        let mut acc = IntMatrix::identity(n);
        for &(g, e) in &w.0 {
            if g >= self.gens.len() {
                return Err(Error::validation(format!(
                    "word uses generator {g} but only {} are given",
                    self.gens.len()
                )));
            }
            let m = if e > 0 { self.gens[g].clone() } else { self.inverse(g)? };
            acc = &acc * &mat_pow(&m, e.unsigned_abs());
        }
        Ok(acc)
    }
}
