//! JSON documents for forms.
//!
//! Multi-indices in documents are one-based, like the text syntax. Terms
//! and monomials appear in the canonical order, so a document produced
//! by [`FormDocument::from_form`] survives a round trip byte for byte.

use serde::{Deserialize, Serialize};

use pforms_core::{Exponents, MultiIndex, MultiPoly, Prime, RatForm, RatFun, Ring};

use crate::parse::ParseError;

pub const FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDocument {
    pub format: u32,
    pub p: u32,
    pub n: usize,
    pub degree: usize,
    pub terms: Vec<TermDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub index: Vec<usize>,
    pub coeff: CoeffDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffDocument {
    pub num: Vec<MonomialDocument>,
    pub den: Vec<MonomialDocument>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialDocument {
    pub exps: Vec<u32>,
    pub c: u32,
}

fn poly_doc(f: &MultiPoly) -> Vec<MonomialDocument> {
    f.terms()
        .map(|(e, c)| MonomialDocument {
            exps: e.to_vec(),
            c,
        })
        .collect()
}

impl FormDocument {
    pub fn from_form(form: &RatForm) -> Self {
        let ring = form.ring();
        let terms = form
            .terms()
            .map(|(idx, c)| TermDocument {
                index: idx.iter().map(|i| i + 1).collect(),
                coeff: CoeffDocument {
                    num: poly_doc(c.num()),
                    den: poly_doc(c.den()),
                },
            })
            .collect();
        FormDocument {
            format: FORMAT,
            p: ring.p(),
            n: ring.nvars(),
            degree: form.degree(),
            terms,
        }
    }

    /// The ring the document lives in, with the given degree cap.
    pub fn ring(&self, max_degree: u32) -> Result<Ring, ParseError> {
        let prime =
            Prime::new(self.p as u64).map_err(|_| ParseError::PrimeOutOfRange(self.p as u64))?;
        Ok(Ring::new(prime, self.n).with_max_degree(max_degree))
    }

    pub fn to_form(&self, ring: Ring) -> Result<RatForm, ParseError> {
        let bad = |msg: String| ParseError::Document(msg);
        if self.format != FORMAT {
            return Err(bad(format!("unsupported format {}", self.format)));
        }
        if self.p != ring.p() || self.n != ring.nvars() {
            return Err(bad(format!(
                "document has p={}, n={} but the command uses p={}, n={}",
                self.p,
                self.n,
                ring.p(),
                ring.nvars()
            )));
        }
        let poly = |terms: &[MonomialDocument]| -> Result<MultiPoly, ParseError> {
            let mut out = Vec::with_capacity(terms.len());
            for t in terms {
                if t.exps.len() != self.n {
                    return Err(bad(format!("exponent vector {:?} has length != n", t.exps)));
                }
                if t.c >= self.p {
                    return Err(bad(format!("residue {} is not in [0, p)", t.c)));
                }
                out.push((Exponents::new(t.exps.clone()), t.c));
            }
            Ok(MultiPoly::from_terms(ring, out))
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            if term.index.iter().any(|&i| i == 0 || i > self.n) {
                return Err(bad(format!(
                    "index {:?} out of range 1..={}",
                    term.index, self.n
                )));
            }
            let idx = MultiIndex::new(term.index.iter().map(|i| i - 1).collect())
                .map_err(|_| bad(format!("index {:?} is not strictly increasing", term.index)))?;
            if idx.len() != self.degree {
                return Err(bad(format!(
                    "index {:?} does not have length {}",
                    term.index, self.degree
                )));
            }
            let num = poly(&term.coeff.num)?;
            let den = poly(&term.coeff.den)?;
            let coeff = RatFun::new(num, den).map_err(|e| bad(e.to_string()))?;
            terms.push((idx, coeff));
        }
        RatForm::from_terms(ring, self.degree, terms).map_err(|e| bad(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Document(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_form;

    #[test]
    fn round_trip() {
        let ring = Ring::new(Prime::new(3).unwrap(), 2);
        let w = parse_form("x^2*y dx + (1/(x+y)) dy", ring).unwrap();
        let doc = FormDocument::from_form(&w);
        let json = doc.to_json();
        let back = FormDocument::from_json(&json).unwrap();
        assert_eq!(back, doc);
        let form = back.to_form(ring).unwrap();
        assert_eq!(form, w);
        assert_eq!(FormDocument::from_form(&form).to_json(), json);
        assert!(json.starts_with(r#"{"format":1,"p":3,"n":2,"degree":1,"terms":[{"index":[1]"#));
    }

    #[test]
    fn rejects_invalid_documents() {
        let ring = Ring::new(Prime::new(3).unwrap(), 1);
        let doc = |s: &str| FormDocument::from_json(s).unwrap().to_form(ring);
        let base = r#"{"format":1,"p":3,"n":1,"degree":1,"terms":[{"index":[1],"coeff":{"num":[{"exps":[1],"c":C}],"den":[{"exps":[0],"c":1}]}}]}"#;
        assert!(doc(&base.replace('C', "2")).is_ok());
        assert!(doc(&base.replace('C', "3")).is_err());
        assert!(doc(&base
            .replace("[1],\"coeff\"", "[2],\"coeff\"")
            .replace('C', "1"))
        .is_err());
        assert!(doc(&base.replace("\"p\":3", "\"p\":5").replace('C', "1")).is_err());
        assert!(FormDocument::from_json("{").is_err());
    }
}
