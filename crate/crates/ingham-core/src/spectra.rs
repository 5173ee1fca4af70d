//! Frequency families in R^N, class partitions, and the gap geometry they
//! induce: the global gap gamma, per-class gaps gamma_j, the class radii
//! R_j = 2 sqrt(mu) / gamma_j, and the critical radius R_0 = sum R_j.
//!
//! Families are finite and immutable. Exact duplicate points are rejected at
//! construction since a zero gap voids every estimate downstream;
//! near-duplicates are allowed and simply produce a tiny gap.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A finite set of distinct frequency vectors with one label per point.
#[derive(Debug, Clone)]
pub struct FrequencyFamily {
    dimension: usize,
    points: Vec<Vec<f64>>,
    labels: Vec<String>,
}

impl FrequencyFamily {
    /// Validates dimensions, label uniqueness, and pairwise distinctness.
    /// Labels default to the point indices when `None`.
    pub fn new(
        dimension: usize,
        points: Vec<Vec<f64>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidFamily("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidFamily("family must contain a point".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dimension {
                return Err(Error::InvalidFamily(format!(
                    "point {i} has {} coordinates, expected {dimension}",
                    p.len()
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidFamily(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        let labels = match labels {
            Some(l) => {
                if l.len() != points.len() {
                    return Err(Error::InvalidFamily(format!(
                        "{} labels for {} points",
                        l.len(),
                        points.len()
                    )));
                }
                l
            }
            None => (0..points.len()).map(|i| i.to_string()).collect(),
        };
        {
            let mut seen = std::collections::HashSet::new();
            for l in &labels {
                if !seen.insert(l.as_str()) {
                    return Err(Error::InvalidFamily(format!("duplicate label {l:?}")));
                }
            }
        }
        for i in 0..points.len() {
            for k in i + 1..points.len() {
                if points[i] == points[k] {
                    return Err(Error::InvalidFamily(format!(
                        "points {:?} and {:?} coincide",
                        labels[i], labels[k]
                    )));
                }
            }
        }
        Ok(FrequencyFamily {
            dimension,
            points,
            labels,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one point by construction
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Euclidean distance between points i and k.
    pub fn distance(&self, i: usize, k: usize) -> f64 {
        self.points[i]
            .iter()
            .zip(&self.points[k])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Indices sorted by the single coordinate; only meaningful for N = 1.
    fn sorted_indices_1d(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.points.len()).collect();
        idx.sort_by(|&a, &b| self.points[a][0].total_cmp(&self.points[b][0]));
        idx
    }
}

/// gamma = min over pairs of Euclidean distances; +inf for a single point.
pub fn minimal_gap(family: &FrequencyFamily) -> f64 {
    let k = family.len();
    if k == 1 {
        return f64::INFINITY;
    }
    let mut best = f64::INFINITY;
    for i in 0..k {
        for j in i + 1..k {
            best = best.min(family.distance(i, j));
        }
    }
    best
}

/// A family with every point assigned to a class in 1..=m, no class empty.
#[derive(Debug, Clone)]
pub struct PartitionedFamily {
    family: FrequencyFamily,
    classes: Vec<usize>, // aligned with points, values in 1..=m
    m: usize,
}

impl PartitionedFamily {
    pub fn new(family: FrequencyFamily, classes: Vec<usize>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidPartition("m must be positive".into()));
        }
        if classes.len() != family.len() {
            return Err(Error::InvalidPartition(format!(
                "{} class assignments for {} points",
                classes.len(),
                family.len()
            )));
        }
        let mut used = vec![false; m];
        for (i, &c) in classes.iter().enumerate() {
            if c == 0 || c > m {
                return Err(Error::InvalidPartition(format!(
                    "point {:?} assigned class {c}, valid classes are 1..={m}",
                    family.labels()[i]
                )));
            }
            used[c - 1] = true;
        }
        if let Some(j) = used.iter().position(|u| !u) {
            return Err(Error::InvalidPartition(format!("class {} is empty", j + 1)));
        }
        Ok(PartitionedFamily { family, classes, m })
    }

    /// The whole family as a single class.
    pub fn single_class(family: FrequencyFamily) -> Self {
        let classes = vec![1; family.len()];
        PartitionedFamily {
            family,
            classes,
            m: 1,
        }
    }

    pub fn family(&self) -> &FrequencyFamily {
        &self.family
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Class of the i-th point, in 1..=m.
    pub fn class_of_index(&self, i: usize) -> usize {
        self.classes[i]
    }

    pub fn class_of_label(&self, label: &str) -> Option<usize> {
        self.family.index_of(label).map(|i| self.classes[i])
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    /// Point indices belonging to class j (1-based).
    pub fn class_indices(&self, j: usize) -> Vec<usize> {
        (0..self.family.len())
            .filter(|&i| self.classes[i] == j)
            .collect()
    }
}

/// Within-class gaps gamma_j; a singleton class has gap +inf by convention
/// (the infimum over an empty pair set), which makes its radius R_j zero.
pub fn class_gaps(pf: &PartitionedFamily) -> Vec<f64> {
    let mut gaps = vec![f64::INFINITY; pf.m];
    let fam = &pf.family;
    for i in 0..fam.len() {
        for k in i + 1..fam.len() {
            if pf.classes[i] == pf.classes[k] {
                let j = pf.classes[i] - 1;
                gaps[j] = gaps[j].min(fam.distance(i, k));
            }
        }
    }
    gaps
}

/// Gap data and the induced critical radii for a partitioned family.
#[derive(Debug, Clone, Serialize)]
pub struct GapGeometry {
    pub gamma: f64,
    /// per-class gaps; +inf for singleton classes (serialized as null)
    pub class_gammas: Vec<f64>,
    pub mu: f64,
    /// R_j = 2 sqrt(mu) / gamma_j, zero for singleton classes
    pub class_radii: Vec<f64>,
    /// R_0 = sum of class radii
    pub critical_radius: f64,
}

/// Assemble the geometry for a given first eigenvalue mu of the unit ball.
pub fn geometry(pf: &PartitionedFamily, mu: f64) -> Result<GapGeometry> {
    if !(mu > 0.0) {
        return Err(Error::OutOfRange(format!("mu = {mu} must be positive")));
    }
    let gamma = minimal_gap(&pf.family);
    let class_gammas = class_gaps(pf);
    let class_radii: Vec<f64> = class_gammas
        .iter()
        .map(|&g| {
            if g.is_infinite() {
                0.0
            } else {
                2.0 * mu.sqrt() / g
            }
        })
        .collect();
    let critical_radius = class_radii.iter().sum();
    Ok(GapGeometry {
        gamma,
        class_gammas,
        mu,
        class_radii,
        critical_radius,
    })
}

/// The averaged m-th gap of a one-dimensional family:
/// gamma'_m = min over k of (omega_{k+m} - omega_k) / m, taken over the
/// sorted points.
pub fn one_d_mth_gap(family: &FrequencyFamily, m: usize) -> Result<f64> {
    if family.dimension() != 1 {
        return Err(Error::InvalidFamily(format!(
            "m-th gap is defined for dimension 1, family has dimension {}",
            family.dimension()
        )));
    }
    if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    if family.len() <= m {
        return Err(Error::InvalidFamily(format!(
            "family too small for m-th gap: {} points, m = {m}",
            family.len()
        )));
    }
    let idx = family.sorted_indices_1d();
    let coord = |i: usize| family.point(idx[i])[0];
    let mut best = f64::INFINITY;
    for k in 0..family.len() - m {
        best = best.min((coord(k + m) - coord(k)) / m as f64);
    }
    Ok(best)
}

/// Partition a sorted one-dimensional family into m residue classes: the
/// k-th smallest point goes to class (k mod m) + 1. The resulting class
/// gaps satisfy gamma_j >= m * gamma'_m.
pub fn residue_partition(family: &FrequencyFamily, m: usize) -> Result<PartitionedFamily> {
    if family.dimension() != 1 {
        return Err(Error::InvalidFamily(format!(
            "residue partition is defined for dimension 1, family has dimension {}",
            family.dimension()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidPartition("m must be positive".into()));
    }
    if m > family.len() {
        return Err(Error::InvalidPartition(format!(
            "m = {m} exceeds the family size {}; some class would be empty",
            family.len()
        )));
    }
    let idx = family.sorted_indices_1d();
    let mut classes = vec![0usize; family.len()];
    for (rank, &i) in idx.iter().enumerate() {
        classes[i] = rank % m + 1;
    }
    PartitionedFamily::new(family.clone(), classes, m)
}

/// Critical radius obtained by applying the theorem's formula to the
/// residue partition of a one-dimensional family (with mu = pi^2/4).
pub fn theorem_radius(family: &FrequencyFamily, m: usize) -> Result<f64> {
    let pf = residue_partition(family, m)?;
    let geom = geometry(&pf, crate::ball::dirichlet_mu(1)?)?;
    Ok(geom.critical_radius)
}

/// The alternative critical radius 2 pi / gamma'_m for one-dimensional
/// families. This is at least twice `theorem_radius`; certificates use the
/// theorem-derived value, the smaller of the two, since it is the one the
/// constant chain supports. Both are reported so the discrepancy is visible.
pub fn remark_radius(family: &FrequencyFamily, m: usize) -> Result<f64> {
    Ok(2.0 * std::f64::consts::PI / one_d_mth_gap(family, m)?)
}

#[derive(Deserialize)]
struct FamilyDoc {
    dimension: usize,
    points: Vec<Vec<f64>>,
    #[serde(default)]
    labels: Option<Vec<serde_json::Value>>,
    #[serde(default)]
    classes: Option<Vec<usize>>,
}

/// Parse a family document:
/// `{"dimension": N, "points": [[..], ..], "labels": [..], "classes": [..]}`.
/// Labels may be strings or numbers and default to point indices; `classes`,
/// when present, assigns each point a class in 1..=m and is returned
/// alongside the family.
pub fn parse_family(json: &str) -> Result<(FrequencyFamily, Option<Vec<usize>>)> {
    let doc: FamilyDoc = serde_json::from_str(json)?;
    let labels = match doc.labels {
        None => None,
        Some(vals) => {
            let mut out = Vec::with_capacity(vals.len());
            for v in vals {
                match v {
                    serde_json::Value::String(s) => out.push(s),
                    serde_json::Value::Number(n) => out.push(n.to_string()),
                    other => {
                        return Err(Error::InvalidFamily(format!(
                            "label {other} is neither a string nor a number"
                        )))
                    }
                }
            }
            Some(out)
        }
    };
    let family = FrequencyFamily::new(doc.dimension, doc.points, labels)?;
    if let Some(classes) = &doc.classes {
        if classes.len() != family.len() {
            return Err(Error::InvalidPartition(format!(
                "{} class entries for {} points",
                classes.len(),
                family.len()
            )));
        }
    }
    Ok((family, doc.classes))
}

/// Build the partition for a parsed family: explicit classes if present,
/// otherwise a single class.
pub fn partition_from_classes(
    family: FrequencyFamily,
    classes: Option<Vec<usize>>,
) -> Result<PartitionedFamily> {
    match classes {
        Some(c) => {
            let m = c.iter().copied().max().unwrap_or(1);
            PartitionedFamily::new(family, c, m)
        }
        None => Ok(PartitionedFamily::single_class(family)),
    }
}
