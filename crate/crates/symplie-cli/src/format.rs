//! Line-oriented text format for algebras, forms, connections and marked subspaces.
//!
//! ```text
//! dim 3
//! basis X Y Z
//! bracket 0 1 = 2:1
//! omega 0 2 = 1/2
//! nabla 0 1 = 2:1, 1:-1
//! subspace C = 0,0,1
//! ```
//!
//! Indices are 0-based and `#` comments run to the end of the line. `alpha i j = k:c` gives a cocycle with values in the dual
//! (coordinate `k` on the dual basis), `phi i j = c` and `lambda i = c` are oxidation data.

use std::collections::BTreeMap;
use std::fmt;

use symplie::catalog::CatalogEntry;
use symplie::exactla::{Matrix, Subspace, Vector, Q};
use symplie::lagext::FlatLieAlgebra;
use symplie::liealg::{validate_jacobi, Cochain, Connection, LieAlgebra, LieError};
use symplie::symplectic::{SymplecticError, SymplecticLieAlgebra};

pub type Terms = Vec<(usize, Q)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// The first violated invariant of a parsed file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    Antisymmetry { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
    Closedness { i: usize, j: usize, k: usize },
    Degenerate,
    NotTorsionFree,
    NotFlat,
    Other(String),
}

impl Diagnostic {
    pub fn invariant(&self) -> &'static str {
        match self {
            Diagnostic::Antisymmetry { .. } => "antisymmetry",
            Diagnostic::Jacobi { .. } => "jacobi",
            Diagnostic::Closedness { .. } => "closedness",
            Diagnostic::Degenerate => "degeneracy",
            Diagnostic::NotTorsionFree => "torsion",
            Diagnostic::NotFlat => "curvature",
            Diagnostic::Other(_) => "other",
        }
    }

    pub fn witness(&self) -> Vec<usize> {
        match *self {
            Diagnostic::Antisymmetry { i, j } => vec![i, j],
            Diagnostic::Jacobi { i, j, k } | Diagnostic::Closedness { i, j, k } => vec![i, j, k],
            _ => vec![],
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Antisymmetry { i, j } => write!(f, "key ({i}, {j}) must satisfy i < j"),
            Diagnostic::Jacobi { i, j, k } => write!(f, "Jacobi identity fails on ({i}, {j}, {k})"),
            Diagnostic::Closedness { i, j, k } => write!(f, "omega is not closed on ({i}, {j}, {k})"),
            Diagnostic::Degenerate => write!(f, "omega is degenerate"),
            Diagnostic::NotTorsionFree => write!(f, "connection has torsion"),
            Diagnostic::NotFlat => write!(f, "connection is not flat"),
            Diagnostic::Other(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for Diagnostic {}

/// Raw contents of a file. Sections set to `Some` are present even when all entries vanish.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraFile {
    pub dim: usize,
    pub labels: Vec<String>,
    pub brackets: BTreeMap<(usize, usize), Terms>,
    pub omega: Option<BTreeMap<(usize, usize), Q>>,
    pub nabla: Option<BTreeMap<(usize, usize), Terms>>,
    pub alpha: Option<BTreeMap<(usize, usize), Terms>>,
    pub phi: Option<BTreeMap<(usize, usize), Q>>,
    pub lambda: Option<BTreeMap<usize, Q>>,
    pub subspaces: Vec<(String, Vec<Vector>)>,
}

/// Validated objects built from a file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub algebra: LieAlgebra,
    pub symplectic: Option<SymplecticLieAlgebra>,
    pub flat: Option<FlatLieAlgebra>,
    pub alpha: Option<Cochain>,
    pub phi: Option<Matrix>,
    pub lambda: Option<Cochain>,
    pub marked: Vec<(String, Subspace)>,
}

fn offset(line: &str, piece: &str) -> usize {
    piece.as_ptr() as usize - line.as_ptr() as usize + 1
}

struct LineCtx<'a> {
    no: usize,
    text: &'a str,
}

impl LineCtx<'_> {
    fn err(&self, at: &str, message: impl Into<String>) -> ParseError {
        ParseError { line: self.no, column: offset(self.text, at), message: message.into() }
    }

    fn index(&self, tok: &str, dim: usize) -> Result<usize, ParseError> {
        let i: usize = tok.parse().map_err(|_| self.err(tok, format!("expected an index, found {tok:?}")))?;
        if i >= dim {
            return Err(self.err(tok, format!("index {i} out of range for dim {dim}")));
        }
        Ok(i)
    }

    fn rational(&self, tok: &str) -> Result<Q, ParseError> {
        tok.parse::<Q>().map_err(|_| self.err(tok, format!("expected a rational p/q, found {tok:?}")))
    }

    /// `k:c, k:c, ...`; empty input is the zero vector.
    fn terms(&self, rhs: &str, dim: usize) -> Result<Terms, ParseError> {
        let mut out: Terms = Vec::new();
        if rhs.trim().is_empty() {
            return Ok(out);
        }
        for piece in rhs.split(',') {
            let piece = piece.trim();
            let (k, c) = piece.split_once(':').ok_or_else(|| self.err(piece, "expected k:p/q"))?;
            let k = self.index(k.trim(), dim)?;
            if out.iter().any(|(j, _)| *j == k) {
                return Err(self.err(piece, format!("coordinate {k} repeated")));
            }
            out.push((k, self.rational(c.trim())?));
        }
        Ok(out)
    }

    fn key2<'b>(&self, lhs: &'b str, dim: usize) -> Result<(usize, usize, &'b str), ParseError> {
        let toks: Vec<&str> = lhs.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(self.err(lhs.trim_start(), "expected two indices before '='"));
        }
        Ok((self.index(toks[0], dim)?, self.index(toks[1], dim)?, toks[0]))
    }

    fn vector(&self, s: &str, dim: usize) -> Result<Vector, ParseError> {
        let s = s.trim();
        let v: Vec<Q> = s.split(',').map(|t| self.rational(t.trim())).collect::<Result<_, _>>()?;
        if v.len() != dim {
            return Err(self.err(s, format!("vector has {} entries, expected {dim}", v.len())));
        }
        Ok(v)
    }
}

fn normalize(mut t: Terms) -> Terms {
    t.retain(|(_, c)| *c != Q::default());
    t.sort_by_key(|(k, _)| *k);
    t
}

pub fn parse(text: &str) -> Result<AlgebraFile, ParseError> {
    let mut f = AlgebraFile::default();
    let mut seen_dim = false;
    let mut seen_basis = false;
    for (no, raw) in text.lines().enumerate() {
        let ctx = LineCtx { no: no + 1, text: raw };
        let line = raw.split('#').next().unwrap_or("").trim_end();
        let body = line.trim_start();
        if body.is_empty() {
            continue;
        }
        let (kw, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        if kw != "dim" && !seen_dim {
            return Err(ctx.err(kw, "the first line must be `dim N`"));
        }
        let dim = f.dim;
        let eq = || -> Result<(&str, &str), ParseError> {
            rest.split_once('=').ok_or_else(|| ctx.err(kw, format!("`{kw}` needs '='")))
        };
        match kw {
            "dim" => {
                if seen_dim {
                    return Err(ctx.err(kw, "`dim` given twice"));
                }
                let t = rest.trim();
                f.dim = t.parse().map_err(|_| ctx.err(if t.is_empty() { kw } else { t }, "expected a dimension"))?;
                f.labels = (1..=f.dim).map(|i| format!("e{i}")).collect();
                seen_dim = true;
            }
            "basis" => {
                if seen_basis {
                    return Err(ctx.err(kw, "`basis` given twice"));
                }
                let ls: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
                if ls.len() != dim {
                    return Err(ctx.err(kw, format!("basis has {} labels, expected {dim}", ls.len())));
                }
                f.labels = ls;
                seen_basis = true;
            }
            "bracket" | "nabla" | "alpha" => {
                let (lhs, rhs) = eq()?;
                let (i, j, at) = ctx.key2(lhs, dim)?;
                let t = ctx.terms(rhs, dim)?;
                let map = match kw {
                    "bracket" => &mut f.brackets,
                    "nabla" => f.nabla.get_or_insert_with(BTreeMap::new),
                    _ => f.alpha.get_or_insert_with(BTreeMap::new),
                };
                if map.insert((i, j), t).is_some() {
                    return Err(ctx.err(at, format!("`{kw} {i} {j}` given twice")));
                }
            }
            "omega" | "phi" => {
                let (lhs, rhs) = eq()?;
                let (i, j, at) = ctx.key2(lhs, dim)?;
                let c = ctx.rational(rhs.trim())?;
                let map = if kw == "omega" { f.omega.get_or_insert_with(BTreeMap::new) } else { f.phi.get_or_insert_with(BTreeMap::new) };
                if map.insert((i, j), c).is_some() {
                    return Err(ctx.err(at, format!("`{kw} {i} {j}` given twice")));
                }
            }
            "lambda" => {
                let (lhs, rhs) = eq()?;
                let t = lhs.trim();
                let i = ctx.index(t, dim)?;
                let c = ctx.rational(rhs.trim())?;
                if f.lambda.get_or_insert_with(BTreeMap::new).insert(i, c).is_some() {
                    return Err(ctx.err(t, format!("`lambda {i}` given twice")));
                }
            }
            "subspace" => {
                let (lhs, rhs) = eq()?;
                let name = lhs.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(ctx.err(kw, "subspace name must be a single word"));
                }
                if f.subspaces.iter().any(|(n, _)| n == name) {
                    return Err(ctx.err(name, format!("subspace {name} given twice")));
                }
                let vs: Vec<Vector> = if rhs.trim().is_empty() {
                    vec![]
                } else {
                    rhs.split(';').map(|v| ctx.vector(v, dim)).collect::<Result<_, _>>()?
                };
                f.subspaces.push((name.to_owned(), vs));
            }
            _ => return Err(ctx.err(kw, format!("unknown keyword `{kw}`"))),
        }
    }
    if !seen_dim {
        return Err(ParseError { line: 1, column: 1, message: "missing `dim N`".into() });
    }
    Ok(f)
}

fn terms_str(t: &Terms) -> String {
    t.iter().map(|(k, c)| format!("{k}:{c}")).collect::<Vec<_>>().join(", ")
}

fn vec_str(v: &[Q]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

fn write_terms(out: &mut String, kw: &str, map: &BTreeMap<(usize, usize), Terms>) {
    let mut wrote = false;
    for (&(i, j), t) in map {
        let t = normalize(t.clone());
        if !t.is_empty() {
            out.push_str(&format!("{kw} {i} {j} = {}\n", terms_str(&t)));
            wrote = true;
        }
    }
    if !wrote {
        out.push_str(&format!("{kw} 0 0 =\n"));
    }
}

fn write_scalars(out: &mut String, kw: &str, map: &BTreeMap<(usize, usize), Q>) {
    let mut wrote = false;
    for (&(i, j), c) in map {
        if *c != Q::default() {
            out.push_str(&format!("{kw} {i} {j} = {c}\n"));
            wrote = true;
        }
    }
    if !wrote {
        out.push_str(&format!("{kw} 0 0 = 0\n"));
    }
}

/// Canonical text: fixed section order, sorted keys, zero entries dropped, subspaces in
/// reduced echelon form; a present but vanishing section keeps one zero entry.
pub fn serialize(f: &AlgebraFile) -> String {
    let mut out = format!("dim {}\n", f.dim);
    if f.dim > 0 {
        out.push_str(&format!("basis {}\n", f.labels.join(" ")));
    }
    for (&(i, j), t) in &f.brackets {
        let t = normalize(t.clone());
        if !t.is_empty() {
            out.push_str(&format!("bracket {i} {j} = {}\n", terms_str(&t)));
        }
    }
    if let Some(w) = &f.omega {
        if f.dim > 0 {
            write_scalars(&mut out, "omega", w);
        }
    }
    if let Some(n) = &f.nabla {
        write_terms(&mut out, "nabla", n);
    }
    if let Some(a) = &f.alpha {
        write_terms(&mut out, "alpha", a);
    }
    if let Some(p) = &f.phi {
        write_scalars(&mut out, "phi", p);
    }
    if let Some(l) = &f.lambda {
        let mut wrote = false;
        for (i, c) in l {
            if *c != Q::default() {
                out.push_str(&format!("lambda {i} = {c}\n"));
                wrote = true;
            }
        }
        if !wrote {
            out.push_str("lambda 0 = 0\n");
        }
    }
    for (name, vs) in &f.subspaces {
        let s = Subspace::span(f.dim, vs);
        let body = s.basis().iter().map(|v| vec_str(v)).collect::<Vec<_>>().join("; ");
        if body.is_empty() {
            out.push_str(&format!("subspace {name} =\n"));
        } else {
            out.push_str(&format!("subspace {name} = {body}\n"));
        }
    }
    out
}

/// `serialize(parse(text))`.
pub fn canonicalize(text: &str) -> Result<String, ParseError> {
    parse(text).map(|f| serialize(&f))
}

fn sparse(v: &[Q]) -> Terms {
    v.iter().enumerate().filter(|(_, c)| **c != Q::default()).map(|(k, c)| (k, c.clone())).collect()
}

impl AlgebraFile {
    pub fn from_parts(g: &LieAlgebra, omega: Option<&Matrix>, nabla: Option<&Connection>, marked: &[(String, Subspace)]) -> AlgebraFile {
        let n = g.dim();
        let mut f = AlgebraFile { dim: n, labels: g.labels().to_vec(), ..Default::default() };
        for i in 0..n {
            for j in i + 1..n {
                let t = sparse(&g.bracket_basis(i, j));
                if !t.is_empty() {
                    f.brackets.insert((i, j), t);
                }
            }
        }
        f.omega = omega.map(|w| {
            let mut m = BTreeMap::new();
            for i in 0..n {
                for j in i + 1..n {
                    if w[(i, j)] != Q::default() {
                        m.insert((i, j), w[(i, j)].clone());
                    }
                }
            }
            m
        });
        f.nabla = nabla.map(|c| {
            let mut m = BTreeMap::new();
            for i in 0..n {
                for j in 0..n {
                    let t = sparse(&c.matrices()[i].col(j));
                    if !t.is_empty() {
                        m.insert((i, j), t);
                    }
                }
            }
            m
        });
        f.subspaces = marked.iter().map(|(s, v)| (s.clone(), v.basis().to_vec())).collect();
        f
    }

    pub fn from_entry(e: &CatalogEntry) -> AlgebraFile {
        AlgebraFile::from_parts(e.algebra.algebra(), Some(e.algebra.form()), None, &e.marked)
    }

    pub fn from_symplectic(s: &SymplecticLieAlgebra, marked: &[(String, Subspace)]) -> AlgebraFile {
        AlgebraFile::from_parts(s.algebra(), Some(s.form()), None, marked)
    }

    fn check_key(&self, i: usize, j: usize) -> Result<(), Diagnostic> {
        if i >= j {
            return Err(Diagnostic::Antisymmetry { i, j });
        }
        Ok(())
    }

    fn dense(&self, t: &Terms) -> Vector {
        let mut v = vec![Q::default(); self.dim];
        for (k, c) in t {
            v[*k] = c.clone();
        }
        v
    }

    pub fn lie_algebra(&self) -> Result<LieAlgebra, Diagnostic> {
        let mut bs = Vec::new();
        for (&(i, j), t) in &self.brackets {
            self.check_key(i, j)?;
            bs.push((i, j, self.dense(t)));
        }
        let g = LieAlgebra::from_brackets_unchecked(self.dim, &bs).map_err(lie_diag)?;
        if let Some(&(i, j, k)) = validate_jacobi(&g).first() {
            return Err(Diagnostic::Jacobi { i, j, k });
        }
        Ok(g.with_labels(self.labels.clone()))
    }

    /// Validates every section in the order brackets, omega, connection, remaining data.
    pub fn load(&self) -> Result<Loaded, Diagnostic> {
        let n = self.dim;
        let g = self.lie_algebra()?;
        let symplectic = match (&self.omega, n) {
            (_, 0) => Some(SymplecticLieAlgebra::new(&g, &Matrix::zeros(0, 0)).map_err(symp_diag)?),
            (None, _) => None,
            (Some(w), _) => {
                let mut entries = Vec::new();
                for (&(i, j), c) in w {
                    self.check_key(i, j)?;
                    entries.push((i, j, c.clone()));
                }
                let m = SymplecticLieAlgebra::form_from_entries(n, &entries);
                Some(SymplecticLieAlgebra::new(&g, &m).map_err(symp_diag)?)
            }
        };
        let flat = match &self.nabla {
            None => None,
            Some(map) => {
                let c = Connection::from_fn(n, |i, j| map.get(&(i, j)).map(|t| self.dense(t)).unwrap_or_else(|| vec![Q::default(); n]));
                if !c.is_torsion_free(&g) {
                    return Err(Diagnostic::NotTorsionFree);
                }
                if !c.is_flat(&g) {
                    return Err(Diagnostic::NotFlat);
                }
                Some(FlatLieAlgebra::new(&g, &c).map_err(|e| Diagnostic::Other(e.to_string()))?)
            }
        };
        let alpha = match &self.alpha {
            None => None,
            Some(map) => {
                for &(i, j) in map.keys() {
                    self.check_key(i, j)?;
                }
                Some(Cochain::from_fn(2, n, n, |idx| map.get(&(idx[0], idx[1])).map(|t| self.dense(t)).unwrap_or_else(|| vec![Q::default(); n])))
            }
        };
        let phi = self.phi.as_ref().map(|p| Matrix::from_fn(n, n, |i, j| p.get(&(i, j)).cloned().unwrap_or_default()));
        let lambda = self.lambda.as_ref().map(|l| {
            Cochain::from_fn(1, n, 1, |idx| vec![l.get(&idx[0]).cloned().unwrap_or_default()])
        });
        let marked = self.subspaces.iter().map(|(s, vs)| (s.clone(), Subspace::span(n, vs))).collect();
        Ok(Loaded { algebra: g, symplectic, flat, alpha, phi, lambda, marked })
    }
}

fn lie_diag(e: LieError) -> Diagnostic {
    match e {
        LieError::NotAntisymmetric { i, j } => Diagnostic::Antisymmetry { i, j },
        LieError::Jacobi { i, j, k } => Diagnostic::Jacobi { i, j, k },
        e => Diagnostic::Other(e.to_string()),
    }
}

fn symp_diag(e: SymplecticError) -> Diagnostic {
    match e {
        SymplecticError::NotClosed { i, j, k } => Diagnostic::Closedness { i, j, k },
        SymplecticError::Degenerate => Diagnostic::Degenerate,
        SymplecticError::NotSkew { i, j } => Diagnostic::Antisymmetry { i, j },
        SymplecticError::Lie(e) => lie_diag(e),
        e => Diagnostic::Other(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const H3: &str = "dim 3\nbasis X Y Z\nbracket 0 1 = 2:1\nsubspace C = 0,0,1\n";

    #[test]
    fn heisenberg_round_trips() {
        let f = parse(H3).unwrap();
        assert_eq!(serialize(&f), H3);
        let l = f.load().unwrap();
        assert_eq!(l.algebra.dim(), 3);
        assert!(l.symplectic.is_none());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("dim 2\nbracket 0 x = 1:1\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 11));
        let e = parse("dim 2\nbracket 0 1 = 1:1/0\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse("basis X\n").is_err());
        assert!(parse("dim 2\nfoo 1\n").is_err());
    }

    #[test]
    fn reversed_keys_are_antisymmetry_violations() {
        let f = parse("dim 3\nbracket 1 0 = 2:1\n").unwrap();
        assert_eq!(f.load().unwrap_err(), Diagnostic::Antisymmetry { i: 1, j: 0 });
    }

    #[test]
    fn vanishing_sections_stay_present() {
        let f = parse("dim 2\nnabla 0 0 =\n").unwrap();
        assert_eq!(serialize(&f), "dim 2\nbasis e1 e2\nnabla 0 0 =\n");
        assert!(f.load().unwrap().flat.is_some());
    }
}
