//! Random inputs shared by the property and acceptance suites.
//!
//! Every generated algebra has real dimension at most 6 and is unimodular,
//! so all presentations are valid and every documented invariant applies.
#![allow(dead_code)]

use proptest::prelude::*;
use serde_json::{json, Map, Value};

use solvco::chars::{build_weight_system, WeightSystem};
use solvco::complex::{BigradedComplex, CochainComplex};
use solvco::field::Field;
use solvco::input::{load_str, Problem};
use solvco::jordan::jordan_chevalley;
use solvco::lie::compute_ad_s;
use solvco::matrix::Matrix;

pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(format!("{name}.json"))).expect("corpus file")
}

pub fn corpus_names() -> Vec<String> {
    let mut out: Vec<String> = std::fs::read_dir(corpus_dir())
        .expect("corpus dir")
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| p.file_stem().unwrap().to_string_lossy().into_owned())
        .collect();
    out.sort();
    out
}

/// `d_{p+1} ∘ d_p = 0` rechecked from the stored differentials.
pub fn d_squared_zero(c: &CochainComplex) -> bool {
    (0..c.top_degree().saturating_sub(1)).all(|p| c.differential(p + 1).mul(c.differential(p)).is_zero())
}

pub fn dbar_squared_zero(b: &BigradedComplex) -> bool {
    let (m, n) = b.top();
    (0..=m).all(|p| {
        (0..n.saturating_sub(1)).all(|q| match (b.dbar(p, q), b.dbar(p, q + 1)) {
            (Some(a), Some(c)) => c.mul(a).is_zero(),
            _ => true,
        })
    })
}

/// A block of `n` on which each `A_l` acts diagonally.
#[derive(Clone, Debug)]
pub enum Block {
    /// One vector, `[A_l, e] = a_l e`.
    Line(Vec<i64>),
    /// A plane, `[A_l, ·] = a_l·1 + b_l·rotation`.
    Plane(Vec<i64>, Vec<i64>),
    /// `[x, y] = z` with weights `a`, `b`, `a + b`.
    Heisenberg(Vec<i64>, Vec<i64>),
}

impl Block {
    fn dim(&self) -> usize {
        match self {
            Block::Line(_) => 1,
            Block::Plane(..) => 2,
            Block::Heisenberg(..) => 3,
        }
    }

    fn trace(&self, l: usize) -> i64 {
        match self {
            Block::Line(a) => a[l],
            Block::Plane(a, _) => 2 * a[l],
            Block::Heisenberg(a, b) => 2 * (a[l] + b[l]),
        }
    }
}

/// A real split solvable algebra `R^k ⋉ n` with a random lattice evaluation.
#[derive(Clone, Debug)]
pub struct RealCase {
    pub k: usize,
    pub blocks: Vec<Block>,
    /// `lifts[j][l]`: phase of the rotation character `u_l` at `g_j`.
    pub lifts: Vec<Vec<(i64, i64)>>,
}

fn q(n: i64) -> String {
    n.to_string()
}

fn lift_str((n, d): (i64, i64)) -> String {
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

fn qi_field() -> Value {
    json!({"name": "Q(i)", "min_poly": ["0", "1"], "generator": "theta", "embedding_hint": null, "i_adjoined": true})
}

fn add_bracket(brackets: &mut Vec<Value>, left: &str, right: &str, terms: &[(&str, i64)]) {
    let mut v = Map::new();
    for (n, c) in terms {
        if *c != 0 {
            v.insert(n.to_string(), Value::String(q(*c)));
        }
    }
    if !v.is_empty() {
        brackets.push(json!({"left": left, "right": right, "value": v}));
    }
}

fn lattice_json(k: usize, lifts: &[Vec<(i64, i64)>]) -> (Vec<String>, Vec<Value>) {
    let symbols: Vec<String> = (1..=k).map(|j| format!("t{j}")).collect();
    let gens = (0..k)
        .map(|j| {
            let mut values = Map::new();
            for l in 0..k {
                let modulus = if l == j { json!({ symbols[j].clone(): "1" }) } else { json!({}) };
                values.insert(format!("r{}", l + 1), json!({"modulus": modulus, "phase": "0"}));
                values.insert(format!("u{}", l + 1), json!({"modulus": {}, "phase": lift_str(lifts[j][l])}));
            }
            json!({"name": format!("g{}", j + 1), "values": values})
        })
        .collect();
    (symbols, gens)
}

fn characters_json(v_names: &[String]) -> Vec<Value> {
    let mut out = Vec::new();
    for (l, a) in v_names.iter().enumerate() {
        out.push(json!({"name": format!("r{}", l + 1), "values": { a.clone(): "1" }}));
    }
    for (l, a) in v_names.iter().enumerate() {
        out.push(json!({"name": format!("u{}", l + 1), "values": { a.clone(): "i" }}));
    }
    out
}

impl RealCase {
    pub fn dim(&self) -> usize {
        self.k + self.blocks.iter().map(Block::dim).sum::<usize>()
    }

    pub fn to_json(&self) -> String {
        let v_names: Vec<String> = (1..=self.k).map(|l| format!("A{l}")).collect();
        let mut basis = v_names.clone();
        let mut brackets = Vec::new();
        let mut next = 1;
        let mut fresh = |basis: &mut Vec<String>| {
            let n = format!("e{next}");
            next += 1;
            basis.push(n.clone());
            n
        };
        for b in &self.blocks {
            match b {
                Block::Line(a) => {
                    let e = fresh(&mut basis);
                    for (l, al) in v_names.iter().enumerate() {
                        add_bracket(&mut brackets, al, &e, &[(&e, a[l])]);
                    }
                }
                Block::Plane(a, r) => {
                    let x = fresh(&mut basis);
                    let y = fresh(&mut basis);
                    for (l, al) in v_names.iter().enumerate() {
                        add_bracket(&mut brackets, al, &x, &[(&x, a[l]), (&y, r[l])]);
                        add_bracket(&mut brackets, al, &y, &[(&x, -r[l]), (&y, a[l])]);
                    }
                }
                Block::Heisenberg(a, c) => {
                    let x = fresh(&mut basis);
                    let y = fresh(&mut basis);
                    let z = fresh(&mut basis);
                    add_bracket(&mut brackets, &x, &y, &[(&z, 1)]);
                    for (l, al) in v_names.iter().enumerate() {
                        add_bracket(&mut brackets, al, &x, &[(&x, a[l])]);
                        add_bracket(&mut brackets, al, &y, &[(&y, c[l])]);
                        add_bracket(&mut brackets, al, &z, &[(&z, a[l] + c[l])]);
                    }
                }
            }
        }
        let (symbols, lattice) = lattice_json(self.k, &self.lifts);
        json!({
            "schema": "solvco-input/1",
            "name": "random-real",
            "field": qi_field(),
            "symbols": symbols,
            "algebra": {"basis": basis, "v": v_names, "brackets": brackets},
            "characters": characters_json(&(1..=self.k).map(|l| format!("A{l}")).collect::<Vec<_>>()),
            "lattice": lattice,
        })
        .to_string()
    }

    pub fn problem(&self) -> Problem {
        load_str(&self.to_json()).expect("generated input loads")
    }
}

pub fn weight_system(p: &Problem) -> WeightSystem {
    build_weight_system(&p.algebra, &compute_ad_s(&p.algebra).unwrap(), &p.declared).unwrap()
}

fn small(k: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-2i64..=2, k)
}

fn block(k: usize) -> impl Strategy<Value = Block> {
    prop_oneof![
        small(k).prop_map(Block::Line),
        (small(k), small(k)).prop_map(|(a, b)| Block::Plane(a, b)),
        (small(k), small(k)).prop_map(|(a, b)| Block::Heisenberg(a, b)),
    ]
}

fn lift() -> impl Strategy<Value = (i64, i64)> {
    prop_oneof![Just((0, 1)), Just((1, 1)), Just((1, 2)), Just((1, 3)), Just((1, 4)), Just((2, 3)), Just((3, 2))]
}

/// Unimodularity is restored with a compensating line when the dimension allows it.
pub fn real_case() -> impl Strategy<Value = RealCase> {
    (1usize..=2)
        .prop_flat_map(|k| {
            let blocks = proptest::collection::vec(block(k), 1..=3);
            let lifts = proptest::collection::vec(proptest::collection::vec(lift(), k), k);
            (Just(k), blocks, lifts)
        })
        .prop_filter_map("dimension at most 6 after balancing", |(k, mut blocks, lifts)| {
            let traces: Vec<i64> = (0..k).map(|l| blocks.iter().map(|b| b.trace(l)).sum()).collect();
            if traces.iter().any(|&t| t != 0) {
                blocks.push(Block::Line(traces.iter().map(|t| -t).collect()));
            }
            let case = RealCase { k, blocks, lifts };
            (case.dim() <= 6).then_some(case)
        })
}

/// `C ⋉_φ C^m` with `φ(z)` acting on the `p`-th coordinate by
/// `exp(λ_p x + μ_p y)` for `z = x + iy`; any `μ` gives an integrable `J`.
#[derive(Clone, Debug)]
pub struct ComplexCase {
    /// `(Re λ, Im λ, Re μ, Im μ)` per coordinate.
    pub coeffs: Vec<(i64, i64, i64, i64)>,
    pub lifts: Vec<Vec<(i64, i64)>>,
}

impl ComplexCase {
    pub fn to_json(&self) -> String {
        let v_names = vec!["A1".to_string(), "A2".to_string()];
        let mut basis = v_names.clone();
        let mut brackets = Vec::new();
        let mut j = Map::new();
        j.insert("A1".into(), json!({"A2": "1"}));
        j.insert("A2".into(), json!({"A1": "-1"}));
        for (p, &(a, b, c, d)) in self.coeffs.iter().enumerate() {
            let e = format!("E{}", p + 1);
            let f = format!("F{}", p + 1);
            basis.push(e.clone());
            basis.push(f.clone());
            for (al, (re, im)) in [("A1", (a, b)), ("A2", (c, d))] {
                add_bracket(&mut brackets, al, &e, &[(&e, re), (&f, im)]);
                add_bracket(&mut brackets, al, &f, &[(&e, -im), (&f, re)]);
            }
            j.insert(e.clone(), json!({ f.clone(): "1" }));
            j.insert(f.clone(), json!({ e.clone(): "-1" }));
        }
        let (symbols, lattice) = lattice_json(2, &self.lifts);
        json!({
            "schema": "solvco-input/1",
            "name": "random-complex",
            "field": qi_field(),
            "symbols": symbols,
            "algebra": {"basis": basis, "v": v_names, "brackets": brackets},
            "characters": characters_json(&v_names),
            "lattice": lattice,
            "complex_structure": {"j": j},
            "action": {"kind": "split"},
        })
        .to_string()
    }

    pub fn problem(&self) -> Problem {
        load_str(&self.to_json()).expect("generated input loads")
    }
}

pub fn complex_case() -> impl Strategy<Value = ComplexCase> {
    let c = || (-2i64..=2, -2i64..=2, -2i64..=2, -2i64..=2);
    let lifts = || proptest::collection::vec(proptest::collection::vec(lift(), 2), 2);
    prop_oneof![
        (c(), lifts()).prop_map(|((_, b, _, d), lifts)| ComplexCase { coeffs: vec![(0, b, 0, d)], lifts }),
        (c(), c(), lifts()).prop_map(|((a, b, c0, d), (_, b2, _, d2), lifts)| ComplexCase {
            coeffs: vec![(a, b, c0, d), (-a, b2, -c0, d2)],
            lifts
        }),
    ]
}

/// `M = P (D + N) P⁻¹` with `D` diagonal and `N` nilpotent inside the
/// eigenspaces of `D`; the expected Jordan pair is `(P D P⁻¹, P N P⁻¹)`.
#[derive(Clone, Debug)]
pub struct JordanCase {
    pub eigen: Vec<i64>,
    /// `true` at `i` puts a 1 at `(i, i+1)` when `eigen[i] == eigen[i+1]`.
    pub links: Vec<bool>,
    /// Elementary operations `row_a += c·row_b` building `P`.
    pub ops: Vec<(usize, usize, i64)>,
}

impl JordanCase {
    pub fn matrices(&self, f: &Field) -> (Matrix, Matrix, Matrix) {
        let d = self.eigen.len();
        let dm = Matrix::diagonal(f, &self.eigen.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>());
        let mut nm = Matrix::zero(f, d, d);
        for i in 0..d.saturating_sub(1) {
            if self.links[i] && self.eigen[i] == self.eigen[i + 1] {
                nm.set(i, i + 1, f.one());
            }
        }
        let mut p = Matrix::identity(f, d);
        for &(a, b, c) in &self.ops {
            let (a, b) = (a % d, b % d);
            if a == b {
                continue;
            }
            let mut e = Matrix::identity(f, d);
            e.set(a, b, f.from_int(c));
            p = e.mul(&p);
        }
        let pinv = p.inverse().expect("elementary products are invertible");
        let s = p.mul(&dm).mul(&pinv);
        let n = p.mul(&nm).mul(&pinv);
        (s.add(&n), s, n)
    }
}

pub fn jordan_case() -> impl Strategy<Value = JordanCase> {
    (1usize..=6).prop_flat_map(|d| {
        (
            proptest::collection::vec(-2i64..=2, d).prop_map(|mut e| {
                e.sort_unstable();
                e
            }),
            proptest::collection::vec(any::<bool>(), d),
            proptest::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..8),
        )
            .prop_map(|(eigen, links, ops)| JordanCase { eigen, links, ops })
    })
}

/// Reassembly, commutation, nilpotency, and agreement with the constructed pair.
pub fn jordan_holds(case: &JordanCase) -> Result<(), String> {
    let f = Field::rationals();
    let (m, s, n) = case.matrices(&f);
    let pair = jordan_chevalley(&m).map_err(|e| e.to_string())?;
    if pair.s.add(&pair.n) != m {
        return Err("s + n ≠ m".into());
    }
    if !pair.s.commutes_with(&pair.n) {
        return Err("s and n do not commute".into());
    }
    if !pair.n.is_nilpotent().map_err(|e| e.to_string())? {
        return Err("n is not nilpotent".into());
    }
    if pair.s != s || pair.n != n {
        return Err("pair differs from the constructed one".into());
    }
    Ok(())
}
