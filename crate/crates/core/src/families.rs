//! Catalog of named hypergraphs and set families.
//!
//! Fixed families (complete graphs, the Fano plane, small extremal examples)
//! and parametric builders (stars, pair-generated families, the balanced
//! five-part Turán construction, the two-sided pattern, the one-sided split
//! star) live here, together with exact edge-count formulas and the
//! closed-form Lagrangian values used by the verification suite.

use itertools::Itertools;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, SetFamily};

/// Errors from catalog lookups and builders.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    /// Unrecognized family name.
    #[error("unknown family {name:?}; known names: {known}")]
    Unknown { name: String, known: String },
    /// A required parameter is missing.
    #[error("family {name:?} needs parameter {param}")]
    MissingParameter { name: String, param: &'static str },
    /// A parameter was supplied that the family does not take.
    #[error("family {name:?} does not take parameter {param}")]
    UnexpectedParameter { name: String, param: &'static str },
    /// A parameter is below the family's minimum.
    #[error("parameter {param} = {got} is below the minimum {min} for family {name:?}")]
    BelowMinimum { name: String, param: &'static str, got: u32, min: u32 },
}

/// A closed-form value attached to a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `num / den`.
    Ratio { num: i64, den: i64 },
    /// `(add + mul * sqrt(root)) / den`.
    Surd { add: i64, mul: i64, root: u32, den: i64 },
    /// The star value `2 (n - 2) / (27 (n - 1))`, depending on `n`.
    StarRatio,
}

impl Form {
    /// Evaluates to `f64`; parametric forms need `n`.
    pub fn eval(&self, n: Option<u32>) -> Option<f64> {
        match *self {
            Form::Ratio { num, den } => Some(num as f64 / den as f64),
            Form::Surd { add, mul, root, den } => {
                Some((add as f64 + mul as f64 * (root as f64).sqrt()) / den as f64)
            }
            Form::StarRatio => {
                let n = n? as f64;
                Some(2.0 * (n - 2.0) / (27.0 * (n - 1.0)))
            }
        }
    }

    /// Human-readable rendering.
    pub fn describe(&self) -> String {
        match *self {
            Form::Ratio { num, den } => format!("{num}/{den}"),
            Form::Surd { add, mul, root, den } => format!("({add} + {mul}*sqrt({root}))/{den}"),
            Form::StarRatio => "2(n-2)/(27(n-1))".to_string(),
        }
    }
}

/// Expected Lagrangian of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    /// No claim recorded.
    None,
    /// The Lagrangian equals the form exactly.
    Exact(Form),
    /// The Lagrangian is at most the form.
    UpperBound(Form),
}

/// Structural claims about an entry, stated for its reference instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyFlags {
    /// Every two members share a vertex.
    pub intersecting: bool,
    /// Every vertex pair of the ground set lies in some member.
    pub covers_pairs: bool,
    /// Maximal among intersecting r-graphs on its ground set
    /// (only meaningful when `intersecting`).
    pub maximal: Option<bool>,
}

/// Parameter requirement of a builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    /// Smallest accepted value.
    pub min: u32,
}

/// A named catalog entry.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    /// Canonical lowercase name.
    pub name: &'static str,
    /// Accepted alternative spellings (case-insensitive matching applies too).
    pub aliases: &'static [&'static str],
    /// One-line description.
    pub summary: &'static str,
    /// Ground-set parameter, if the family is parametric in `n`.
    pub takes_n: Option<ParamSpec>,
    /// Uniformity parameter, if the family is parametric in `r`.
    pub takes_r: Option<ParamSpec>,
    /// Parameters used for listings and flag claims.
    pub reference_n: Option<u32>,
    pub reference_r: Option<u32>,
    /// Expected Lagrangian (evaluate with the instance's `n`).
    pub expected: Expected,
    /// Structural claims at the reference instance.
    pub flags: FamilyFlags,
}

/// A built catalog object: most entries are uniform hypergraphs, generator
/// entries are plain set families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogObject {
    Graph(Hypergraph),
    Family(SetFamily),
}

impl CatalogObject {
    /// The hypergraph inside, or a panic for generator entries (use only
    /// where the entry is known to be uniform).
    pub fn into_graph(self) -> Hypergraph {
        match self {
            CatalogObject::Graph(g) => g,
            CatalogObject::Family(f) => panic!("catalog object is a set family: {f:?}"),
        }
    }

    /// Number of members/edges.
    pub fn member_count(&self) -> usize {
        match self {
            CatalogObject::Graph(g) => g.edge_count(),
            CatalogObject::Family(f) => f.len(),
        }
    }
}

const INTERSECTING_COVERING: FamilyFlags =
    FamilyFlags { intersecting: true, covers_pairs: true, maximal: Some(true) };

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "k5_3",
        aliases: &["k5^3", "k53"],
        summary: "complete 3-graph on 5 vertices",
        takes_n: None,
        takes_r: None,
        reference_n: Some(5),
        reference_r: Some(3),
        expected: Expected::Exact(Form::Ratio { num: 2, den: 25 }),
        flags: INTERSECTING_COVERING,
    },
    CatalogEntry {
        name: "k5_3_minus",
        aliases: &["k5_3-", "k53_minus"],
        summary: "complete 3-graph on 5 vertices with one edge removed",
        takes_n: None,
        takes_r: None,
        reference_n: Some(5),
        reference_r: Some(3),
        expected: Expected::Exact(Form::Surd { add: -35, mul: 13, root: 13, den: 162 }),
        flags: FamilyFlags { intersecting: true, covers_pairs: true, maximal: Some(false) },
    },
    CatalogEntry {
        name: "f7",
        aliases: &["fano"],
        summary: "Fano plane: 7 lines on 7 points, every pair on one line",
        takes_n: None,
        takes_r: None,
        reference_n: Some(7),
        reference_r: Some(3),
        expected: Expected::Exact(Form::Ratio { num: 1, den: 27 }),
        flags: INTERSECTING_COVERING,
    },
    CatalogEntry {
        name: "star",
        aliases: &["gen_pt"],
        summary: "all triples through vertex 1 (generated by a point)",
        takes_n: Some(ParamSpec { min: 3 }),
        takes_r: None,
        reference_n: Some(6),
        reference_r: Some(3),
        expected: Expected::Exact(Form::StarRatio),
        flags: INTERSECTING_COVERING,
    },
    CatalogEntry {
        name: "gen_k3",
        aliases: &["gen_triangle"],
        summary: "triples containing a pair of the triangle {1,2,3} (value 1/16 holds for n >= 4)",
        takes_n: Some(ParamSpec { min: 3 }),
        takes_r: None,
        reference_n: Some(6),
        reference_r: Some(3),
        expected: Expected::Exact(Form::Ratio { num: 1, den: 16 }),
        flags: FamilyFlags { intersecting: true, covers_pairs: false, maximal: Some(true) },
    },
    CatalogEntry {
        name: "gen_f4",
        aliases: &["gen_blocked_star"],
        summary: "generated by {1,2},{1,3},{1,4},{2,3,4}",
        takes_n: Some(ParamSpec { min: 4 }),
        takes_r: None,
        reference_n: Some(6),
        reference_r: Some(3),
        expected: Expected::UpperBound(Form::Surd { add: -35, mul: 13, root: 13, den: 162 }),
        flags: FamilyFlags { intersecting: true, covers_pairs: false, maximal: Some(true) },
    },
    CatalogEntry {
        name: "gen_r5",
        aliases: &[],
        summary: "generated by {1,2},{1,4},{1,3,5},{2,3,4},{2,4,5}",
        takes_n: Some(ParamSpec { min: 5 }),
        takes_r: None,
        reference_n: Some(6),
        reference_r: Some(3),
        expected: Expected::UpperBound(Form::Surd { add: -35, mul: 13, root: 13, den: 162 }),
        flags: FamilyFlags { intersecting: true, covers_pairs: false, maximal: Some(true) },
    },
    CatalogEntry {
        name: "t6",
        aliases: &[],
        summary: "three parts of two: transversal triples plus cyclic pair-and-point triples",
        takes_n: None,
        takes_r: None,
        reference_n: Some(6),
        reference_r: Some(3),
        expected: Expected::UpperBound(Form::Ratio { num: 7, den: 108 }),
        flags: FamilyFlags { intersecting: false, covers_pairs: true, maximal: None },
    },
    CatalogEntry {
        name: "f6",
        aliases: &[],
        summary: "{1,2,3} plus every triple with one vertex in {1,2,3} and two in {4,5,6}",
        takes_n: None,
        takes_r: None,
        reference_n: Some(6),
        reference_r: Some(3),
        expected: Expected::Exact(Form::Surd { add: 9, mul: 1, root: 6, den: 225 }),
        flags: INTERSECTING_COVERING,
    },
    CatalogEntry {
        name: "ff6",
        aliases: &[],
        summary: "cyclic 10-edge family on 6 vertices covering every pair exactly twice",
        takes_n: None,
        takes_r: None,
        reference_n: Some(6),
        reference_r: Some(3),
        expected: Expected::UpperBound(Form::Ratio { num: 7, den: 108 }),
        flags: INTERSECTING_COVERING,
    },
    CatalogEntry {
        name: "t5_3",
        aliases: &["turan_t53"],
        summary: "balanced five-part construction: all transversal triples over three parts",
        takes_n: Some(ParamSpec { min: 5 }),
        takes_r: None,
        reference_n: Some(10),
        reference_r: Some(3),
        expected: Expected::Exact(Form::Ratio { num: 2, den: 25 }),
        flags: FamilyFlags { intersecting: false, covers_pairs: false, maximal: None },
    },
    CatalogEntry {
        name: "k333",
        aliases: &["k_33_3"],
        summary: "two disjoint r-sets plus, for each cross pair, an edge through private vertices",
        takes_n: None,
        takes_r: Some(ParamSpec { min: 3 }),
        reference_n: Some(15),
        reference_r: Some(3),
        expected: Expected::None,
        flags: FamilyFlags { intersecting: false, covers_pairs: false, maximal: None },
    },
    CatalogEntry {
        name: "s_r",
        aliases: &["split_star"],
        summary: "one side A plus all edges with one vertex in A and r-1 in the rest",
        takes_n: Some(ParamSpec { min: 4 }),
        takes_r: Some(ParamSpec { min: 3 }),
        reference_n: Some(6),
        reference_r: Some(3),
        expected: Expected::None,
        flags: FamilyFlags { intersecting: false, covers_pairs: false, maximal: None },
    },
    CatalogEntry {
        name: "pt",
        aliases: &["point"],
        summary: "generator: the single point {1}",
        takes_n: None,
        takes_r: None,
        reference_n: Some(1),
        reference_r: None,
        expected: Expected::None,
        flags: FamilyFlags { intersecting: true, covers_pairs: true, maximal: None },
    },
    CatalogEntry {
        name: "k3",
        aliases: &["triangle"],
        summary: "generator: the three pairs on {1,2,3}",
        takes_n: None,
        takes_r: None,
        reference_n: Some(3),
        reference_r: None,
        expected: Expected::None,
        flags: FamilyFlags { intersecting: true, covers_pairs: true, maximal: None },
    },
    CatalogEntry {
        name: "f4",
        aliases: &[],
        summary: "generator: {1,2},{1,3},{1,4},{2,3,4}",
        takes_n: None,
        takes_r: None,
        reference_n: Some(4),
        reference_r: None,
        expected: Expected::None,
        flags: FamilyFlags { intersecting: true, covers_pairs: true, maximal: None },
    },
    CatalogEntry {
        name: "r5",
        aliases: &[],
        summary: "generator: {1,2},{1,4},{1,3,5},{2,3,4},{2,4,5}",
        takes_n: None,
        takes_r: None,
        reference_n: Some(5),
        reference_r: None,
        expected: Expected::None,
        flags: FamilyFlags { intersecting: true, covers_pairs: true, maximal: None },
    },
];

/// The full catalog, in listing order.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

fn normalize(name: &str) -> String {
    name.to_ascii_lowercase().replace('-', "_")
}

/// Looks up an entry by canonical name or alias (case-insensitive).
pub fn find_entry(name: &str) -> Option<&'static CatalogEntry> {
    let probe = normalize(name);
    CATALOG.iter().find(|e| {
        e.name == probe || e.aliases.iter().any(|a| normalize(a) == probe)
    })
}

/// Builds a catalog object by name; `n`/`r` are required exactly when the
/// entry is parametric in them.
pub fn build(name: &str, n: Option<u32>, r: Option<u32>) -> Result<CatalogObject, FamilyError> {
    let entry = find_entry(name).ok_or_else(|| FamilyError::Unknown {
        name: name.to_string(),
        known: CATALOG.iter().map(|e| e.name).join(", "),
    })?;
    let check = |spec: Option<ParamSpec>, got: Option<u32>, param: &'static str| {
        match (spec, got) {
            (Some(spec), Some(v)) if v < spec.min => Err(FamilyError::BelowMinimum {
                name: entry.name.to_string(),
                param,
                got: v,
                min: spec.min,
            }),
            (Some(_), None) => {
                Err(FamilyError::MissingParameter { name: entry.name.to_string(), param })
            }
            (None, Some(_)) => {
                Err(FamilyError::UnexpectedParameter { name: entry.name.to_string(), param })
            }
            _ => Ok(()),
        }
    };
    check(entry.takes_n, n, "n")?;
    check(entry.takes_r, r, "r")?;

    let g = |h: Hypergraph| CatalogObject::Graph(h);
    Ok(match entry.name {
        "k5_3" => g(Hypergraph::complete(5, 3)),
        "k5_3_minus" => {
            let edges: Vec<Vec<u32>> = Hypergraph::complete(5, 3)
                .edges_vec()
                .into_iter()
                .filter(|e| e != &vec![1, 2, 3])
                .collect();
            g(Hypergraph::new(5, 3, edges).expect("valid edges"))
        }
        "f7" => g(fano()),
        "star" => g(point_generator().generate(n.unwrap(), 3).expect("valid generator")),
        "gen_k3" => g(triangle_generator().generate(n.unwrap(), 3).expect("valid generator")),
        "gen_f4" => g(blocked_star_generator().generate(n.unwrap(), 3).expect("valid generator")),
        "gen_r5" => g(five_vertex_generator().generate(n.unwrap(), 3).expect("valid generator")),
        "t6" => g(three_part_cyclic()),
        "f6" => g(one_three_split()),
        "ff6" => g(double_cover_six()),
        "t5_3" => g(build_turan_t53(n.unwrap())),
        "k333" => g(build_k333(r.unwrap())),
        "s_r" => {
            let (n, r) = (n.unwrap(), r.unwrap());
            if n <= r {
                return Err(FamilyError::BelowMinimum {
                    name: entry.name.to_string(),
                    param: "n",
                    got: n,
                    min: r + 1,
                });
            }
            g(build_star_sr(n, r))
        }
        "pt" => CatalogObject::Family(point_generator()),
        "k3" => CatalogObject::Family(triangle_generator()),
        "f4" => CatalogObject::Family(blocked_star_generator()),
        "r5" => CatalogObject::Family(five_vertex_generator()),
        other => unreachable!("catalog entry {other} has no builder"),
    })
}

/// The single-point generator on ground set {1}.
pub fn point_generator() -> SetFamily {
    SetFamily::new(1, vec![vec![1]]).expect("valid family")
}

/// The triangle generator: all pairs on {1,2,3}.
pub fn triangle_generator() -> SetFamily {
    SetFamily::new(3, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).expect("valid family")
}

/// The blocked-star generator {1,2},{1,3},{1,4},{2,3,4}.
pub fn blocked_star_generator() -> SetFamily {
    SetFamily::new(4, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3, 4]])
        .expect("valid family")
}

/// The five-vertex generator {1,2},{1,4},{1,3,5},{2,3,4},{2,4,5}.
pub fn five_vertex_generator() -> SetFamily {
    SetFamily::new(
        5,
        vec![vec![1, 2], vec![1, 4], vec![1, 3, 5], vec![2, 3, 4], vec![2, 4, 5]],
    )
    .expect("valid family")
}

/// The Fano plane on 7 points.
pub fn fano() -> Hypergraph {
    Hypergraph::new(
        7,
        3,
        vec![
            vec![1, 2, 3],
            vec![1, 4, 5],
            vec![1, 6, 7],
            vec![2, 4, 6],
            vec![2, 5, 7],
            vec![3, 4, 7],
            vec![3, 5, 6],
        ],
    )
    .expect("valid edges")
}

/// Three parts {1,2}, {3,4}, {5,6}: the eight transversal triples plus, for
/// each part cyclically, both vertices of the part with each vertex of the
/// next part (14 edges).
pub fn three_part_cyclic() -> Hypergraph {
    let parts = [[1u32, 2], [3, 4], [5, 6]];
    let mut edges = Vec::new();
    for &a in &parts[0] {
        for &b in &parts[1] {
            for &c in &parts[2] {
                edges.push(vec![a, b, c]);
            }
        }
    }
    for i in 0..3 {
        let next = (i + 1) % 3;
        for &b in &parts[next] {
            edges.push(vec![parts[i][0], parts[i][1], b]);
        }
    }
    Hypergraph::new(6, 3, edges).expect("valid edges")
}

/// `{1,2,3}` plus every triple with exactly one vertex in `{1,2,3}` and two
/// in `{4,5,6}` (10 edges).
pub fn one_three_split() -> Hypergraph {
    let mut edges = vec![vec![1, 2, 3]];
    for a in 1..=3u32 {
        for pair in (4..=6u32).combinations(2) {
            let mut e = vec![a];
            e.extend(pair);
            edges.push(e);
        }
    }
    Hypergraph::new(6, 3, edges).expect("valid edges")
}

/// Cyclic 10-edge family on 6 vertices: `{i, i+1, i+2}` and `{i, i+2, 6}`
/// for `i` in `1..=5`, arithmetic mod 5 with residues in `1..=5`. Covers
/// every vertex pair exactly twice.
pub fn double_cover_six() -> Hypergraph {
    let m5 = |x: u32| ((x - 1) % 5) + 1;
    let mut edges = Vec::new();
    for i in 1..=5u32 {
        edges.push(vec![i, m5(i + 1), m5(i + 2)]);
        edges.push(vec![i, m5(i + 2), 6]);
    }
    Hypergraph::new(6, 3, edges).expect("valid edges")
}

/// Sizes of the five parts of the balanced construction: `floor((n+i)/5)`
/// for `i = 0..5`, ascending.
pub fn t53_part_sizes(n: u32) -> [u32; 5] {
    let mut sizes = [0u32; 5];
    for (i, s) in sizes.iter_mut().enumerate() {
        *s = (n + i as u32) / 5;
    }
    sizes
}

/// Balanced five-part construction on `n >= 5` vertices: parts are
/// consecutive ascending blocks with sizes `floor((n+i)/5)`, edges are all
/// triples meeting three distinct parts.
pub fn build_turan_t53(n: u32) -> Hypergraph {
    assert!(n >= 5, "the five-part construction needs n >= 5, got {n}");
    let sizes = t53_part_sizes(n);
    let mut ranges = [(0u32, 0u32); 5]; // inclusive (start, end) per part
    let mut next = 1u32;
    for (k, &s) in sizes.iter().enumerate() {
        ranges[k] = (next, next + s - 1);
        next += s;
    }
    debug_assert_eq!(next, n + 1);
    let mut flat = Vec::with_capacity(t53_count(n as u64) as usize * 3);
    for pa in 0..5 {
        for a in ranges[pa].0..=ranges[pa].1 {
            for pb in pa + 1..5 {
                for b in ranges[pb].0..=ranges[pb].1 {
                    for pc in pb + 1..5 {
                        for c in ranges[pc].0..=ranges[pc].1 {
                            flat.extend_from_slice(&[a, b, c]);
                        }
                    }
                }
            }
        }
    }
    Hypergraph::from_flat_sorted(n, 3, flat)
}

/// Exact edge count of the balanced five-part construction.
pub fn t53_count(n: u64) -> u64 {
    let s: Vec<u64> = (0..5).map(|i| (n + i) / 5).collect();
    let mut total = 0u64;
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                total += s[i] * s[j] * s[k];
            }
        }
    }
    total
}

/// Exact minimum degree of the balanced five-part construction on `n >= 6`
/// vertices; equals `t53_count(n) - t53_count(n - 1)`.
pub fn delta53_count(n: u64) -> u64 {
    let s: Vec<u64> = (0..4).map(|i| (n + i) / 5).collect();
    let mut total = 0u64;
    for i in 0..4 {
        for j in i + 1..4 {
            total += s[i] * s[j];
        }
    }
    total
}

/// Two disjoint `r`-sets (the sides) plus, for every cross pair of side
/// vertices, an edge through `r - 2` private extra vertices. For `r = 3`:
/// 15 vertices and 11 edges.
pub fn build_k333(r: u32) -> Hypergraph {
    assert!(r >= 3, "the two-sided pattern needs r >= 3, got {r}");
    let x = |i: u32| i; // 1..=r
    let y = |i: u32| r + i;
    let extra_base = 2 * r;
    let z = |i: u32, j: u32, k: u32| extra_base + ((i - 1) * r + (j - 1)) * (r - 2) + k;
    let n = 2 * r + r * r * (r - 2);
    let mut edges = Vec::new();
    edges.push((1..=r).map(x).collect::<Vec<u32>>());
    edges.push((1..=r).map(y).collect::<Vec<u32>>());
    for i in 1..=r {
        for j in 1..=r {
            let mut e = vec![x(i), y(j)];
            for k in 1..=r - 2 {
                e.push(z(i, j, k));
            }
            edges.push(e);
        }
    }
    Hypergraph::new(n, r, edges).expect("valid edges")
}

/// Size of side `A` chosen by the split-star rule: the `a` maximizing
/// `a * C(n - a, r - 1)`, ties resolved toward smaller `a`.
pub fn star_sr_side(n: u32, r: u32) -> u32 {
    assert!(r >= 3 && n > r, "split star needs n > r >= 3, got n = {n}, r = {r}");
    let mut best = (0u64, 1u32);
    for a in 1..=n - r + 1 {
        let count = a as u64 * binomial((n - a) as u64, (r - 1) as u64);
        if count > best.0 {
            best = (count, a);
        }
    }
    best.1
}

/// Exact edge count of the split star.
pub fn star_sr_count(n: u64, r: u64) -> u64 {
    assert!(r >= 3 && n > r);
    (1..=n - r + 1)
        .map(|a| a * binomial(n - a, r - 1))
        .max()
        .expect("nonempty range")
}

/// Split star: side `A = {1..a}` with `a` from [`star_sr_side`], and all
/// edges with exactly one vertex in `A` and `r - 1` in the rest.
pub fn build_star_sr(n: u32, r: u32) -> Hypergraph {
    let a = star_sr_side(n, r);
    let rest: Vec<u32> = (a + 1..=n).collect();
    let mut edges = Vec::new();
    for v in 1..=a {
        for tail in rest.iter().copied().combinations((r - 1) as usize) {
            let mut e = vec![v];
            e.extend(tail);
            edges.push(e);
        }
    }
    Hypergraph::new(n, r, edges).expect("valid edges")
}

/// Binomial coefficient over `u64` (small arguments).
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_family_edge_counts() {
        assert_eq!(fano().edge_count(), 7);
        assert_eq!(three_part_cyclic().edge_count(), 14);
        assert_eq!(one_three_split().edge_count(), 10);
        assert_eq!(double_cover_six().edge_count(), 10);
        assert_eq!(build_k333(3).edge_count(), 11);
        assert_eq!(build_k333(3).n(), 15);
        assert_eq!(build_k333(4).n(), 40);
        assert_eq!(build_k333(4).edge_count(), 18);
    }

    #[test]
    fn fano_covers_every_pair_exactly_once() {
        assert_eq!(fano().pair_coverage_profile(), vec![1u64; 21]);
        assert!(fano().is_intersecting());
        assert_eq!(fano().is_maximal_intersecting(), Ok(true));
    }

    #[test]
    fn double_cover_six_covers_every_pair_exactly_twice() {
        let g = double_cover_six();
        assert_eq!(g.pair_coverage_profile(), vec![2u64; 15]);
        assert!(g.is_intersecting());
        assert_eq!(g.is_maximal_intersecting(), Ok(true));
    }

    #[test]
    fn double_cover_six_embeds_into_three_part_cyclic() {
        let found = crate::canon::embeds_as_subfamily(&double_cover_six(), &three_part_cyclic())
            .unwrap();
        assert!(found.is_some(), "a relabeling must make the 10-edge family a subfamily");
    }

    #[test]
    fn three_part_cyclic_is_not_intersecting() {
        assert!(!three_part_cyclic().is_intersecting());
    }

    #[test]
    fn one_three_split_is_maximal_intersecting() {
        let g = one_three_split();
        assert!(g.is_intersecting());
        assert_eq!(g.is_maximal_intersecting(), Ok(true));
        assert!(g.covers_pairs(&[1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn parametric_builders_match_count_formulas() {
        for n in 4..=12u32 {
            let star = build("star", Some(n), None).unwrap().into_graph();
            assert_eq!(star.edge_count() as u64, binomial(n as u64 - 1, 2));
            let k3 = build("gen_k3", Some(n), None).unwrap().into_graph();
            assert_eq!(k3.edge_count() as u64, 3 * n as u64 - 8);
            if n >= 4 {
                let f4 = build("gen_f4", Some(n), None).unwrap().into_graph();
                assert_eq!(f4.edge_count() as u64, 3 * n as u64 - 8);
            }
            if n >= 5 {
                let r5 = build("gen_r5", Some(n), None).unwrap().into_graph();
                assert_eq!(r5.edge_count() as u64, 2 * n as u64 - 2);
            }
        }
    }

    #[test]
    fn gen_six_triangle_has_ten_distinct_edges() {
        let g = build("gen_k3", Some(6), None).unwrap().into_graph();
        assert_eq!(g.edge_count(), 10);
    }

    #[test]
    fn five_part_construction_counts() {
        assert_eq!(t53_count(5), 10);
        assert_eq!(t53_count(6), 16);
        assert_eq!(t53_count(10), 80);
        assert_eq!(t53_count(11), 104);
        for n in 5..=60u64 {
            assert_eq!(build_turan_t53(n as u32).edge_count() as u64, t53_count(n));
        }
    }

    #[test]
    fn five_part_min_degree_matches_difference_formula() {
        for n in 6..=60u64 {
            assert_eq!(delta53_count(n), t53_count(n) - t53_count(n - 1));
            assert_eq!(build_turan_t53(n as u32).min_degree(), Some(delta53_count(n)));
        }
    }

    #[test]
    fn five_part_part_sizes_are_ascending_blocks() {
        assert_eq!(t53_part_sizes(6), [1, 1, 1, 1, 2]);
        assert_eq!(t53_part_sizes(11), [2, 2, 2, 2, 3]);
        assert_eq!(t53_part_sizes(13), [2, 2, 3, 3, 3]);
    }

    #[test]
    fn balanced_construction_equals_blowup_of_complete_five() {
        assert_eq!(
            build_turan_t53(10),
            Hypergraph::complete(5, 3).blow_up(2).unwrap()
        );
        assert_eq!(
            build_turan_t53(15),
            Hypergraph::complete(5, 3).blow_up(3).unwrap()
        );
    }

    #[test]
    fn split_star_count_example() {
        assert_eq!(star_sr_count(6, 3), 12);
        assert_eq!(star_sr_side(6, 3), 2);
        let g = build_star_sr(6, 3);
        assert_eq!(g.edge_count(), 12);
        // Edges have exactly one vertex in {1, 2}.
        assert!(g
            .edges()
            .all(|e| e.iter().filter(|&&v| v <= 2).count() == 1));
    }

    #[test]
    fn catalog_lookup_accepts_aliases_and_case() {
        assert_eq!(find_entry("K5_3").unwrap().name, "k5_3");
        assert_eq!(find_entry("fano").unwrap().name, "f7");
        assert_eq!(find_entry("K5_3-").unwrap().name, "k5_3_minus");
        assert!(find_entry("nope").is_none());
    }

    #[test]
    fn build_validates_parameters() {
        assert!(matches!(
            build("star", None, None),
            Err(FamilyError::MissingParameter { .. })
        ));
        assert!(matches!(
            build("star", Some(2), None),
            Err(FamilyError::BelowMinimum { .. })
        ));
        assert!(matches!(
            build("f7", Some(9), None),
            Err(FamilyError::UnexpectedParameter { .. })
        ));
        assert!(matches!(
            build("wat", None, None),
            Err(FamilyError::Unknown { .. })
        ));
    }

    #[test]
    fn catalog_flags_hold_at_reference_instances() {
        for entry in catalog() {
            let obj = build(entry.name, entry.takes_n.map(|_| entry.reference_n.unwrap()),
                entry.takes_r.map(|_| entry.reference_r.unwrap())).unwrap();
            match obj {
                CatalogObject::Graph(h) => {
                    assert_eq!(h.is_intersecting(), entry.flags.intersecting, "{}", entry.name);
                    let all: Vec<u32> = (1..=h.n()).collect();
                    assert_eq!(h.covers_pairs(&all), entry.flags.covers_pairs, "{}", entry.name);
                    if let Some(maximal) = entry.flags.maximal {
                        assert_eq!(
                            h.is_maximal_intersecting(),
                            Ok(maximal),
                            "{}",
                            entry.name
                        );
                    }
                }
                CatalogObject::Family(f) => {
                    assert_eq!(f.is_intersecting(), entry.flags.intersecting, "{}", entry.name);
                    let all: Vec<u32> = (1..=f.n()).collect();
                    assert_eq!(f.covers_pairs(&all), entry.flags.covers_pairs, "{}", entry.name);
                }
            }
        }
    }

    #[test]
    fn closed_form_evaluation() {
        assert_eq!(Form::Ratio { num: 2, den: 25 }.eval(None), Some(0.08));
        let surd = Form::Surd { add: -35, mul: 13, root: 13, den: 162 };
        assert!((surd.eval(None).unwrap() - 0.073_284_978_9).abs() < 1e-9);
        let star = Form::StarRatio;
        assert!((star.eval(Some(9)).unwrap() - (7.0 / 8.0) * (2.0 / 27.0)).abs() < 1e-15);
        assert_eq!(star.eval(None), None);
    }
}
