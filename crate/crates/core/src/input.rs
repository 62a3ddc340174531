//! The JSON input document and its conversion into toolkit objects.
//!
//! Every assumption is spelled out in the file: the field, the transcendental
//! symbols, the splitting `V ⊕ n`, and the character values at the lattice
//! generators. Unknown keys are rejected.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::character::{CharacterValue, LogReal, Phase};
use crate::chars::{DeclaredCharacters, LatticeEvaluation};
use crate::dolbeault::ComplexStructure;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldSpec};
use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::rational::{fmt_rational, parse_rational};

/// Current input schema tag.
pub const INPUT_SCHEMA: &str = "solvco-input/1";

/// Sparse vector written as basis name → field element.
pub type SparseDecl = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub schema: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub field: FieldDecl,
    /// Real symbols asserted to be Q-linearly independent.
    pub symbols: Vec<String>,
    pub algebra: AlgebraDecl,
    /// Characters as functionals on the V basis.
    pub characters: Vec<CharacterDecl>,
    pub lattice: Vec<GeneratorDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_structure: Option<ComplexStructureDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expectations: Option<Expectations>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDecl {
    pub name: String,
    /// Monic minimal polynomial, constant term first, as rational strings.
    pub min_poly: Vec<String>,
    pub generator: String,
    pub embedding_hint: Option<String>,
    pub i_adjoined: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDecl {
    pub basis: Vec<String>,
    /// Names of the basis vectors spanning V; the rest span n.
    pub v: Vec<String>,
    pub brackets: Vec<BracketDecl>,
}

/// `[left, right] = Σ value[name]·name`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDecl {
    pub left: String,
    pub right: String,
    pub value: SparseDecl,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterDecl {
    pub name: String,
    /// Values on the V basis; absent names are zero.
    pub values: SparseDecl,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    pub name: String,
    /// One entry per declared character.
    pub values: BTreeMap<String, ValueDecl>,
}

/// `exp(modulus) · exp(2πi·phase) · exp(i·angle)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueDecl {
    pub modulus: BTreeMap<String, String>,
    pub phase: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub angle: BTreeMap<String, String>,
}

/// Column `name` of `J`, i.e. `J(name)`, for every basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexStructureDecl {
    pub j: BTreeMap<String, SparseDecl>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionKind {
    /// `g = C^n ⋉ n` with V acting holomorphically; V is the `C^n` factor.
    Split,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDecl {
    pub kind: ActionKind,
}

/// Recorded results used for regression.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betti_differs_from_g: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<Vec<Vec<usize>>>,
    /// The Hodge table is recorded but does not gate regression.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub hodge_informational: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mostow_before_modify: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mostow_after_modify: Option<bool>,
}

/// A fully checked input.
#[derive(Clone, Debug)]
pub struct Problem {
    pub name: String,
    pub field: Field,
    pub symbols: Vec<String>,
    pub algebra: LieAlgebra,
    pub declared: DeclaredCharacters,
    pub lattice: LatticeEvaluation,
    pub complex_structure: Option<ComplexStructure>,
    pub split_action: bool,
    pub expectations: Expectations,
    pub document: InputDocument,
}

/// Parses a document, reporting the line and column of syntax errors.
pub fn parse_document(text: &str) -> Result<InputDocument> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn load_str(text: &str) -> Result<Problem> {
    parse_document(text)?.build()
}

pub fn load_path(path: &std::path::Path) -> Result<Problem> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    load_str(&text)
}

fn index_map(names: &[String], what: &str) -> Result<BTreeMap<String, usize>> {
    let mut out = BTreeMap::new();
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() {
            return Err(Error::InvalidPresentation(format!("empty {what} name")));
        }
        if out.insert(n.clone(), i).is_some() {
            return Err(Error::InvalidPresentation(format!("duplicate {what} name {n:?}")));
        }
    }
    Ok(out)
}

fn lookup(map: &BTreeMap<String, usize>, name: &str, what: &str) -> Result<usize> {
    map.get(name).copied().ok_or_else(|| Error::InvalidPresentation(format!("unknown {what} {name:?}")))
}

fn sparse(field: &Field, map: &BTreeMap<String, usize>, decl: &SparseDecl, what: &str) -> Result<Vec<FieldElement>> {
    let mut out = vec![field.zero(); map.len()];
    for (name, val) in decl {
        out[lookup(map, name, what)?] = field.parse(val)?;
    }
    Ok(out)
}

fn log_real(symbols: &BTreeSet<String>, decl: &BTreeMap<String, String>) -> Result<LogReal> {
    let mut terms = Vec::with_capacity(decl.len());
    for (s, c) in decl {
        if !symbols.contains(s) {
            return Err(Error::InvalidPresentation(format!("undeclared symbol {s:?}")));
        }
        terms.push((s.clone(), parse_rational(c)?));
    }
    Ok(LogReal::from_terms(terms))
}

impl InputDocument {
    pub fn build(self) -> Result<Problem> {
        if self.schema != INPUT_SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {:?}, expected {INPUT_SCHEMA:?}", self.schema)));
        }
        let spec = FieldSpec {
            name: self.field.name.clone(),
            min_poly: self.field.min_poly.iter().map(|c| parse_rational(c)).collect::<Result<_>>()?,
            generator: self.field.generator.clone(),
            embedding_hint: self.field.embedding_hint.clone(),
            i_adjoined: self.field.i_adjoined,
        };
        let field = Field::new(spec)?;

        let symbols: BTreeSet<String> = self.symbols.iter().cloned().collect();
        if symbols.len() != self.symbols.len() {
            return Err(Error::InvalidPresentation("duplicate symbol declaration".into()));
        }

        let a = &self.algebra;
        let basis = index_map(&a.basis, "basis")?;
        let v: Vec<usize> = a.v.iter().map(|n| lookup(&basis, n, "basis vector")).collect::<Result<_>>()?;
        let mut seen = BTreeSet::new();
        let mut brackets = Vec::new();
        for b in &a.brackets {
            let j = lookup(&basis, &b.left, "basis vector")?;
            let k = lookup(&basis, &b.right, "basis vector")?;
            if !seen.insert((j.min(k), j.max(k))) {
                return Err(Error::InvalidPresentation(format!("bracket [{}, {}] given twice", b.left, b.right)));
            }
            for (i, c) in sparse(&field, &basis, &b.value, "basis vector")?.into_iter().enumerate() {
                if !c.is_zero() {
                    brackets.push((j, k, i, c));
                }
            }
        }
        let algebra = LieAlgebra::new(&field, a.basis.clone(), &brackets, v.clone())?;

        let v_names: Vec<String> = v.iter().map(|&i| a.basis[i].clone()).collect();
        let v_map = index_map(&v_names, "V basis")?;
        let char_names: Vec<String> = self.characters.iter().map(|c| c.name.clone()).collect();
        let char_map = index_map(&char_names, "character")?;
        let functionals = self
            .characters
            .iter()
            .map(|c| {
                if let Some(bad) = c.values.keys().find(|n| !v_map.contains_key(*n)) {
                    return Err(Error::InvalidPresentation(format!(
                        "character {} is evaluated on {bad:?}, which is not in V",
                        c.name
                    )));
                }
                sparse(&field, &v_map, &c.values, "V basis vector")
            })
            .collect::<Result<Vec<_>>>()?;
        let declared = DeclaredCharacters::new(&field, char_names.clone(), functionals, v.len())?;

        let gen_names: Vec<String> = self.lattice.iter().map(|g| g.name.clone()).collect();
        index_map(&gen_names, "lattice generator")?;
        let mut values = Vec::with_capacity(self.lattice.len());
        for g in &self.lattice {
            let mut row = vec![None; char_names.len()];
            for (cname, val) in &g.values {
                let m = lookup(&char_map, cname, "character")?;
                row[m] = Some(CharacterValue {
                    modulus: log_real(&symbols, &val.modulus)?,
                    phase: Phase { lift: parse_rational(&val.phase)?, angle: log_real(&symbols, &val.angle)? },
                });
            }
            let row = row
                .into_iter()
                .enumerate()
                .map(|(m, x)| {
                    x.ok_or_else(|| {
                        Error::InvalidPresentation(format!("generator {} gives no value for {}", g.name, char_names[m]))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            values.push(row);
        }
        let lattice = LatticeEvaluation { generator_names: gen_names, values };
        if let Some((j, m)) = lattice.conjugation_failure(&declared) {
            return Err(Error::InvalidPresentation(format!(
                "values at {} are not closed under conjugation (character {})",
                lattice.generator_names[j], char_names[m]
            )));
        }

        let complex_structure = match &self.complex_structure {
            None => None,
            Some(cs) => {
                let d = algebra.dim();
                let mut jm = Matrix::zero(&field, d, d);
                for (name, col) in &cs.j {
                    let c = lookup(&basis, name, "basis vector")?;
                    for (r, x) in sparse(&field, &basis, col, "basis vector")?.into_iter().enumerate() {
                        jm.set(r, c, x);
                    }
                }
                if let Some(missing) = a.basis.iter().find(|n| !cs.j.contains_key(*n)) {
                    return Err(Error::InvalidPresentation(format!("J is not given on {missing:?}")));
                }
                Some(ComplexStructure::new(&algebra, jm)?)
            }
        };

        Ok(Problem {
            name: self.name.clone(),
            field,
            symbols: self.symbols.clone(),
            algebra,
            declared,
            lattice,
            complex_structure,
            split_action: matches!(self.action, Some(ActionDecl { kind: ActionKind::Split })),
            expectations: self.expectations.clone().unwrap_or_default(),
            document: self,
        })
    }
}

fn sparse_decl(names: &[String], v: &[FieldElement]) -> SparseDecl {
    v.iter().zip(names).filter(|(x, _)| !x.is_zero()).map(|(x, n)| (n.clone(), x.to_string())).collect()
}

/// The bracket list of `g` in document form.
pub fn brackets_decl(g: &LieAlgebra) -> Vec<BracketDecl> {
    let mut by_pair: BTreeMap<(usize, usize), Vec<FieldElement>> = BTreeMap::new();
    for (j, k, i, c) in g.structure_constants() {
        by_pair.entry((j, k)).or_insert_with(|| vec![g.field().zero(); g.dim()])[i] = c;
    }
    by_pair
        .into_iter()
        .map(|((j, k), v)| BracketDecl {
            left: g.names()[j].clone(),
            right: g.names()[k].clone(),
            value: sparse_decl(g.names(), &v),
        })
        .collect()
}

/// A copy of `doc` describing the algebra `g` instead, with the expectations dropped.
pub fn with_algebra(doc: &InputDocument, g: &LieAlgebra, name: &str) -> InputDocument {
    let mut out = doc.clone();
    out.name = name.to_string();
    out.algebra.brackets = brackets_decl(g);
    out.expectations = None;
    out
}

pub fn value_decl(v: &CharacterValue) -> ValueDecl {
    let terms = |l: &LogReal| l.terms().map(|(s, c)| (s.clone(), fmt_rational(c))).collect();
    ValueDecl { modulus: terms(&v.modulus), phase: fmt_rational(&v.phase.lift), angle: terms(&v.phase.angle) }
}
