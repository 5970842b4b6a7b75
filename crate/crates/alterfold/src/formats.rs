//! Line-oriented text formats for categories, triangulations and plumbing graphs.
//!
//! Every format ignores blank lines and text after `#`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use alterfold_core::surgery::PlumbingGraph;
use alterfold_core::triangulation::{GlueSpec, Gluing, Triangulation};
use alterfold_core::{CategoryData, Error, FKey, FusionCategory, RKey, Result, C64};

/// Non-empty lines with comments stripped, split into tokens, with 1-based line numbers.
fn tokenized(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(n, line)| {
        let body = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((n + 1, toks))
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn expect_len(line: usize, toks: &[&str], n: usize) -> Result<()> {
    if toks.len() != n {
        return Err(parse_err(line, format!("`{}` takes {} fields, found {}", toks[0], n - 1, toks.len() - 1)));
    }
    Ok(())
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("cannot parse `{tok}`")))
}

fn index(line: usize, tok: &str, rank: usize) -> Result<usize> {
    let i: usize = num(line, tok)?;
    if i >= rank {
        return Err(Error::Index(format!("line {line}: label {i} out of range for rank {rank}")));
    }
    Ok(i)
}

fn complex(line: usize, re: &str, im: &str) -> Result<C64> {
    Ok(C64::new(num(line, re)?, num(line, im)?))
}

/// Inserts into a declaration map, rejecting a conflicting redeclaration.
fn declare<K: Ord + std::fmt::Debug, V: PartialEq + Copy>(map: &mut BTreeMap<K, V>, key: K, value: V, what: &str) -> Result<()> {
    match map.get(&key) {
        Some(old) if *old != value => Err(Error::Inconsistent(format!("conflicting {what} declarations for {key:?}"))),
        _ => {
            map.insert(key, value);
            Ok(())
        }
    }
}

/// Parses a category file.
///
/// Grammar: `rank N`, `label i NAME`, `dual i j`, `fuse i j k m`,
/// `F a b c d e alpha beta f gamma delta RE IM`, `R a b c mu nu RE IM`,
/// `qdim i RE IM` and `tol X`. `rank` must come first. Undeclared fusion
/// entries are 0 except the unit rules `N[0][i][i] = N[i][0][i] = 1` and the
/// duality rule `N[i][dual(i)][0] = 1`, which are implied. Duals without a
/// `dual` line are read off the fusion rules. Missing dimensions are
/// derived from the F-symbols.
pub fn load_category(text: &str) -> Result<FusionCategory> {
    let mut lines = tokenized(text);
    let (line, first) = lines.next().ok_or_else(|| parse_err(1, "empty category file"))?;
    if first[0] != "rank" {
        return Err(parse_err(line, "the first declaration must be `rank N`"));
    }
    expect_len(line, &first, 2)?;
    let rank: usize = num(line, first[1])?;
    if rank == 0 {
        return Err(parse_err(line, "rank must be positive"));
    }
    let mut labels: BTreeMap<usize, String> = BTreeMap::new();
    let mut dual: BTreeMap<usize, usize> = BTreeMap::new();
    let mut fusion: BTreeMap<(usize, usize, usize), u32> = BTreeMap::new();
    let mut f_symbols: BTreeMap<FKey, C64> = BTreeMap::new();
    let mut r_symbols: BTreeMap<RKey, C64> = BTreeMap::new();
    let mut qdim: BTreeMap<usize, C64> = BTreeMap::new();
    let mut tol: Option<f64> = None;
    for (line, t) in lines {
        match t[0] {
            "rank" => return Err(parse_err(line, "`rank` declared twice")),
            "label" => {
                expect_len(line, &t, 3)?;
                let i = index(line, t[1], rank)?;
                let name = t[2].to_string();
                if labels.get(&i).is_some_and(|old| *old != name) {
                    return Err(Error::Inconsistent(format!("conflicting labels for {i}")));
                }
                labels.insert(i, name);
            }
            "dual" => {
                expect_len(line, &t, 3)?;
                let (i, j) = (index(line, t[1], rank)?, index(line, t[2], rank)?);
                declare(&mut dual, i, j, "dual")?;
                declare(&mut dual, j, i, "dual")?;
            }
            "fuse" => {
                expect_len(line, &t, 5)?;
                let key = (index(line, t[1], rank)?, index(line, t[2], rank)?, index(line, t[3], rank)?);
                declare(&mut fusion, key, num(line, t[4])?, "fusion")?;
            }
            "F" => {
                expect_len(line, &t, 13)?;
                let r = |k: usize| index(line, t[k], rank);
                let n = |k: usize| num::<usize>(line, t[k]);
                let key = FKey { a: r(1)?, b: r(2)?, c: r(3)?, d: r(4)?, e: r(5)?, alpha: n(6)?, beta: n(7)?, f: r(8)?, gamma: n(9)?, delta: n(10)? };
                declare(&mut f_symbols, key, complex(line, t[11], t[12])?, "F-symbol")?;
            }
            "R" => {
                expect_len(line, &t, 8)?;
                let key = RKey { a: index(line, t[1], rank)?, b: index(line, t[2], rank)?, c: index(line, t[3], rank)?, mu: num(line, t[4])?, nu: num(line, t[5])? };
                declare(&mut r_symbols, key, complex(line, t[6], t[7])?, "R-symbol")?;
            }
            "qdim" => {
                expect_len(line, &t, 4)?;
                declare(&mut qdim, index(line, t[1], rank)?, complex(line, t[2], t[3])?, "qdim")?;
            }
            "tol" => {
                expect_len(line, &t, 2)?;
                let x: f64 = num(line, t[1])?;
                if !(x >= 0.0) {
                    return Err(parse_err(line, "tolerance must be nonnegative"));
                }
                if tol.is_some_and(|old| old != x) {
                    return Err(Error::Inconsistent("conflicting tol declarations".into()));
                }
                tol = Some(x);
            }
            other => return Err(parse_err(line, format!("unknown declaration `{other}`"))),
        }
    }
    let mut data = CategoryData::new(rank);
    data.labels = (0..rank).map(|i| labels.get(&i).cloned().unwrap_or_else(|| i.to_string())).collect();
    for i in 0..rank {
        fusion.entry((0, i, i)).or_insert(1);
        fusion.entry((i, 0, i)).or_insert(1);
    }
    data.dual = (0..rank)
        .map(|i| {
            dual.get(&i)
                .copied()
                .or_else(|| (0..rank).find(|&j| fusion.get(&(i, j, 0)).copied().unwrap_or(0) > 0))
                .ok_or_else(|| Error::Inconsistent(format!("no dual declared or implied for {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 0..rank {
        fusion.entry((i, data.dual[i], 0)).or_insert(1);
    }
    for (&(i, j, k), &m) in &fusion {
        data.set_fusion(i, j, k, m);
    }
    data.f_symbols = f_symbols;
    data.r_symbols = (!r_symbols.is_empty()).then_some(r_symbols);
    if !qdim.is_empty() {
        if qdim.len() != rank {
            return Err(Error::Inconsistent("qdim must be declared for all simples or none".into()));
        }
        data.qdim = Some(qdim.into_values().collect());
    }
    data.tol = tol;
    FusionCategory::new(data)
}

fn push_complex(out: &mut String, z: C64) {
    let _ = write!(out, " {:?} {:?}", z.re, z.im);
}

/// Canonical serialization; [`load_category`] reproduces the category exactly.
pub fn serialize_category(cat: &FusionCategory) -> String {
    let r = cat.rank();
    let mut out = String::new();
    let _ = writeln!(out, "rank {r}");
    for i in 0..r {
        let _ = writeln!(out, "label {i} {}", cat.label(i));
    }
    for i in 0..r {
        let _ = writeln!(out, "dual {i} {}", cat.dual(i));
    }
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let m = cat.n(i, j, k);
                if m > 0 {
                    let _ = writeln!(out, "fuse {i} {j} {k} {m}");
                }
            }
        }
    }
    for (k, v) in cat.f_symbols() {
        let _ = write!(out, "F {} {} {} {} {} {} {} {} {} {}", k.a, k.b, k.c, k.d, k.e, k.alpha, k.beta, k.f, k.gamma, k.delta);
        push_complex(&mut out, *v);
        out.push('\n');
    }
    if let Some(rs) = cat.r_symbols() {
        for (k, v) in rs {
            let _ = write!(out, "R {} {} {} {} {}", k.a, k.b, k.c, k.mu, k.nu);
            push_complex(&mut out, *v);
            out.push('\n');
        }
    }
    for i in 0..r {
        let _ = write!(out, "qdim {i}");
        push_complex(&mut out, cat.qdim(i));
        out.push('\n');
    }
    let _ = writeln!(out, "tol {:?}", cat.tol());
    out
}

/// Parses a triangulation file: `tets N`, then `glue t f t' f' p0 p1 p2 p3`
/// lines where `p` lists the images of the local vertices of `t`.
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let mut lines = tokenized(text);
    let (line, first) = lines.next().ok_or_else(|| parse_err(1, "empty triangulation file"))?;
    if first[0] != "tets" {
        return Err(parse_err(line, "the first declaration must be `tets N`"));
    }
    expect_len(line, &first, 2)?;
    let n: usize = num(line, first[1])?;
    let mut specs = Vec::new();
    for (line, t) in lines {
        if t[0] != "glue" {
            return Err(parse_err(line, format!("unknown declaration `{}`", t[0])));
        }
        expect_len(line, &t, 9)?;
        let v = t[1..].iter().map(|x| num::<usize>(line, x)).collect::<Result<Vec<_>>>()?;
        specs.push(GlueSpec { tet: v[0], face: v[1], target: Gluing { tet: v[2], face: v[3], perm: [v[4], v[5], v[6], v[7]] } });
    }
    Triangulation::new(n, &specs)
}

/// Canonical serialization with gluings in ascending `(t, f)` order, each pair once.
pub fn serialize_triangulation(tri: &Triangulation) -> String {
    let mut out = format!("tets {}\n", tri.num_tets());
    for s in tri.specs() {
        let p = s.target.perm;
        let _ = writeln!(out, "glue {} {} {} {} {} {} {} {}", s.tet, s.face, s.target.tet, s.target.face, p[0], p[1], p[2], p[3]);
    }
    out
}

/// Parses a plumbing file of `vertex v f` and `edge u v` lines; vertices
/// must be numbered `0..n` and the edges must form a forest.
pub fn parse_plumbing(text: &str) -> Result<PlumbingGraph> {
    let mut framings: BTreeMap<usize, i64> = BTreeMap::new();
    let mut edges = Vec::new();
    for (line, t) in tokenized(text) {
        match t[0] {
            "vertex" => {
                expect_len(line, &t, 3)?;
                let v: usize = num(line, t[1])?;
                if framings.insert(v, num(line, t[2])?).is_some() {
                    return Err(Error::Inconsistent(format!("vertex {v} declared twice")));
                }
            }
            "edge" => {
                expect_len(line, &t, 3)?;
                edges.push((num(line, t[1])?, num(line, t[2])?));
            }
            other => return Err(parse_err(line, format!("unknown declaration `{other}`"))),
        }
    }
    if let Some((pos, (&v, _))) = framings.iter().enumerate().find(|(pos, (&v, _))| *pos != v) {
        return Err(Error::Index(format!("vertex {v} declared but vertex {pos} missing")));
    }
    PlumbingGraph::new(framings.into_values().collect(), edges)
}

/// Canonical serialization of a plumbing graph.
pub fn serialize_plumbing(g: &PlumbingGraph) -> String {
    let mut out = String::new();
    for (v, f) in g.framings().iter().enumerate() {
        let _ = writeln!(out, "vertex {v} {f}");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    out
}
