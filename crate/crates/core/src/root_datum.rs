//! Relative root systems, Weyl groups and their action on the coroot lattice.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{GaussKind, IntMatrix, LatticeVector};

pub const DEFAULT_WEYL_BOUND: usize = 1152;
pub const MAX_RANK: usize = 4;

/// Rank-one piece attached to a simple relative root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Marker {
    pub kind: GaussKind,
    #[serde(rename = "d", default = "one")]
    pub degree: u32,
}

fn one() -> u32 {
    1
}

impl Default for Marker {
    fn default() -> Self {
        Marker { kind: GaussKind::Sl2, degree: 1 }
    }
}

impl Marker {
    pub fn parse(s: &str) -> Result<Marker> {
        let bad = || Error::InvalidField { field: "markers".into(), reason: format!("cannot parse `{s}`") };
        let (kind, deg) = match s.split_once(':') {
            Some((k, d)) => (k.trim(), d.trim().parse::<u32>().map_err(|_| bad())?),
            None => (s.trim(), 1),
        };
        let kind = match kind.to_ascii_uppercase().as_str() {
            "SL2" => GaussKind::Sl2,
            "SU3" => GaussKind::Su3,
            _ => return Err(bad()),
        };
        if deg == 0 {
            return Err(bad());
        }
        Ok(Marker { kind, degree: deg })
    }
}

/// Element of the Weyl group: a word in simple reflections plus its matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeylElem {
    pub word: Vec<usize>,
    pub matrix: IntMatrix,
    /// Matrix of the inverse element.
    pub inverse_matrix: IntMatrix,
}

impl WeylElem {
    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn act(&self, v: &LatticeVector) -> LatticeVector {
        self.matrix.apply(v)
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Word written as s1,s2 with 1-based indices.
    pub fn word_label(&self) -> String {
        if self.word.is_empty() {
            "e".into()
        } else {
            self.word.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join(",")
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElem>,
    index: HashMap<IntMatrix, usize>,
    longest: usize,
}

impl WeylGroup {
    pub fn elements(&self) -> &[WeylElem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn longest(&self) -> &WeylElem {
        &self.elements[self.longest]
    }

    /// Canonical element with the given matrix.
    pub fn lookup(&self, m: &IntMatrix) -> Option<&WeylElem> {
        self.index.get(m).map(|&i| &self.elements[i])
    }
}

#[derive(Clone, Debug)]
pub struct RelativeRootDatum {
    name: String,
    rank: usize,
    /// cartan[i][j] = <alpha_i, alpha_j^vee>
    cartan: Vec<Vec<i64>>,
    markers: Vec<Marker>,
    reflections: Vec<IntMatrix>,
    positive_coroots: Vec<LatticeVector>,
    weyl: WeylGroup,
}

/// Simple-root Gram matrix (integral scaling) of an irreducible type.
fn gram(letter: char, r: usize) -> Result<Vec<Vec<i64>>> {
    let unsupported = || Error::Unsupported(format!("{letter}{r}"));
    let mut g = vec![vec![0i64; r]; r];
    let chain = |g: &mut Vec<Vec<i64>>, len: i64| {
        for i in 0..r {
            g[i][i] = len;
            if i + 1 < r {
                g[i][i + 1] = -len / 2;
                g[i + 1][i] = -len / 2;
            }
        }
    };
    match (letter, r) {
        ('A', 1..=4) => chain(&mut g, 2),
        ('B', 2..=4) => {
            chain(&mut g, 2);
            g[r - 1][r - 1] = 1;
            g[r - 2][r - 1] = -1;
            g[r - 1][r - 2] = -1;
        }
        ('C', 2..=4) => {
            chain(&mut g, 2);
            g[r - 1][r - 1] = 4;
            g[r - 2][r - 1] = -2;
            g[r - 1][r - 2] = -2;
        }
        ('D', 4) => {
            for i in 0..4 {
                g[i][i] = 2;
            }
            for j in [0, 2, 3] {
                g[1][j] = -1;
                g[j][1] = -1;
            }
        }
        ('G', 2) => {
            g = vec![vec![2, -3], vec![-3, 6]];
        }
        ('F', 4) => {
            g = vec![
                vec![4, -2, 0, 0],
                vec![-2, 4, -2, 0],
                vec![0, -2, 2, -1],
                vec![0, 0, -1, 2],
            ];
        }
        _ => return Err(unsupported()),
    }
    Ok(g)
}

fn parse_type(spec: &str) -> Result<Vec<Vec<i64>>> {
    let mut blocks = Vec::new();
    for part in spec.split(['x', 'X', '×']).map(str::trim) {
        let mut chars = part.chars();
        let letter = chars.next().ok_or_else(|| Error::Unsupported(spec.to_string()))?.to_ascii_uppercase();
        let r: usize = chars.as_str().parse().map_err(|_| Error::Unsupported(spec.to_string()))?;
        blocks.push(gram(letter, r)?);
    }
    let rank: usize = blocks.iter().map(Vec::len).sum();
    if rank == 0 || rank > MAX_RANK {
        return Err(Error::Unsupported(format!("{spec}: rank {rank} exceeds {MAX_RANK}")));
    }
    let mut g = vec![vec![0i64; rank]; rank];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                g[off + i][off + j] = v;
            }
        }
        off += b.len();
    }
    Ok(g)
}

impl RelativeRootDatum {
    pub fn build(type_spec: &str, markers: Option<Vec<Marker>>) -> Result<Self> {
        Self::build_with_bound(type_spec, markers, DEFAULT_WEYL_BOUND)
    }

    pub fn build_with_bound(type_spec: &str, markers: Option<Vec<Marker>>, bound: usize) -> Result<Self> {
        let g = parse_type(type_spec)?;
        let rank = g.len();
        let cartan: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| 2 * g[i][j] / g[j][j]).collect()).collect();
        let markers = markers.unwrap_or_else(|| vec![Marker::default(); rank]);
        if markers.len() != rank {
            return Err(Error::InvalidField {
                field: "markers".into(),
                reason: format!("expected {rank} markers, got {}", markers.len()),
            });
        }
        for i in 0..rank {
            for j in 0..rank {
                if cartan[i][j] * cartan[j][i] == 1 && markers[i] != markers[j] {
                    return Err(Error::InvalidField {
                        field: "markers".into(),
                        reason: format!("W-conjugate nodes {} and {} carry different markers", i + 1, j + 1),
                    });
                }
            }
        }
        let reflections: Vec<IntMatrix> = (0..rank)
            .map(|i| {
                let mut m = IntMatrix::identity(rank);
                for j in 0..rank {
                    m.set(i, j, m.get(i, j) - cartan[i][j]);
                }
                m
            })
            .collect();
        let weyl = enumerate_weyl(&reflections, rank, bound)?;
        let mut pos = BTreeSet::new();
        for w in &weyl.elements {
            for i in 0..rank {
                let v = w.matrix.apply(&LatticeVector::basis(rank, i));
                if v.coords().iter().all(|&c| c >= 0) {
                    pos.insert(v);
                }
            }
        }
        let mut positive_coroots: Vec<LatticeVector> = pos.into_iter().collect();
        positive_coroots.sort_by_key(|v| (v.coords().iter().sum::<i64>(), std::cmp::Reverse(v.clone())));
        Ok(RelativeRootDatum {
            name: type_spec.to_string(),
            rank,
            cartan,
            markers,
            reflections,
            positive_coroots,
            weyl,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn markers(&self) -> &[Marker] {
        &self.markers
    }

    pub fn marker(&self, i: usize) -> Marker {
        self.markers[i]
    }

    pub fn is_split(&self) -> bool {
        self.markers.iter().all(|m| *m == Marker::default())
    }

    pub fn reflection(&self, i: usize) -> &IntMatrix {
        &self.reflections[i]
    }

    /// <alpha_i, λ>
    pub fn pairing(&self, i: usize, v: &LatticeVector) -> i64 {
        self.cartan[i].iter().zip(v.coords()).map(|(a, b)| a * b).sum()
    }

    pub fn reflect(&self, i: usize, v: &LatticeVector) -> LatticeVector {
        self.reflections[i].apply(v)
    }

    pub fn is_dominant(&self, v: &LatticeVector) -> bool {
        (0..self.rank).all(|i| self.pairing(i, v) >= 0)
    }

    pub fn positive_coroots(&self) -> &[LatticeVector] {
        &self.positive_coroots
    }

    pub fn is_positive(v: &LatticeVector) -> bool {
        !v.is_zero() && v.coords().iter().all(|&c| c >= 0)
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn longest(&self) -> &WeylElem {
        self.weyl.longest()
    }

    pub fn identity(&self) -> WeylElem {
        WeylElem { word: Vec::new(), matrix: IntMatrix::identity(self.rank), inverse_matrix: IntMatrix::identity(self.rank) }
    }

    /// Element for an arbitrary word (not checked for reducedness).
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElem> {
        let mut m = IntMatrix::identity(self.rank);
        let mut inv = IntMatrix::identity(self.rank);
        for &i in word {
            if i >= self.rank {
                return Err(Error::InvalidField { field: "word".into(), reason: format!("index {} out of range", i + 1) });
            }
            m = m.mul(&self.reflections[i]);
            inv = self.reflections[i].mul(&inv);
        }
        Ok(WeylElem { word: word.to_vec(), matrix: m, inverse_matrix: inv })
    }

    /// Element for a word that must be reduced.
    pub fn reduced(&self, word: &[usize]) -> Result<WeylElem> {
        let w = self.from_word(word)?;
        if self.inversion_set(&w).len() != word.len() {
            return Err(Error::NotReduced(word.to_vec()));
        }
        Ok(w)
    }

    pub fn inverse(&self, w: &WeylElem) -> WeylElem {
        let word: Vec<usize> = w.word.iter().rev().copied().collect();
        WeylElem { word, matrix: w.inverse_matrix.clone(), inverse_matrix: w.matrix.clone() }
    }

    /// Canonical (shortlex) representative of w1 w2.
    pub fn mul(&self, a: &WeylElem, b: &WeylElem) -> WeylElem {
        self.weyl.lookup(&a.matrix.mul(&b.matrix)).expect("group is closed").clone()
    }

    pub fn canonical(&self, w: &WeylElem) -> WeylElem {
        self.weyl.lookup(&w.matrix).expect("group is closed").clone()
    }

    /// Positive coroots sent to negative ones by w.
    pub fn inversion_set(&self, w: &WeylElem) -> Vec<LatticeVector> {
        self.positive_coroots
            .iter()
            .filter(|b| w.act(b).coords().iter().all(|&c| c <= 0))
            .cloned()
            .collect()
    }

    pub fn length_sign(&self, w: &WeylElem) -> (usize, i64) {
        let l = self.inversion_set(w).len();
        (l, if l % 2 == 0 { 1 } else { -1 })
    }

    /// Index of the simple coroot this positive coroot is W-conjugate to.
    pub fn simple_conjugate(&self, beta: &LatticeVector) -> usize {
        for w in self.weyl.elements() {
            for i in 0..self.rank {
                if &w.act(&LatticeVector::basis(self.rank, i)) == beta {
                    return i;
                }
            }
        }
        unreachable!("every root is conjugate to a simple root")
    }

    pub fn check_rank(&self, v: &LatticeVector) -> Result<()> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: v.rank() });
        }
        Ok(())
    }
}

fn enumerate_weyl(reflections: &[IntMatrix], rank: usize, bound: usize) -> Result<WeylGroup> {
    let id = IntMatrix::identity(rank);
    let mut elements = vec![WeylElem { word: Vec::new(), matrix: id.clone(), inverse_matrix: id.clone() }];
    let mut index = HashMap::new();
    index.insert(id, 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for (i, s) in reflections.iter().enumerate() {
            let m = s.mul(&elements[k].matrix);
            if index.contains_key(&m) {
                continue;
            }
            if elements.len() >= bound {
                return Err(Error::WeylBound(bound));
            }
            let mut word = vec![i];
            word.extend_from_slice(&elements[k].word);
            index.insert(m.clone(), elements.len());
            queue.push_back(elements.len());
            let inverse_matrix = elements[k].inverse_matrix.mul(s);
            elements.push(WeylElem { word, matrix: m, inverse_matrix });
        }
    }
    let longest = (0..elements.len()).max_by_key(|&k| elements[k].word.len()).unwrap_or(0);
    Ok(WeylGroup { elements, index, longest })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_orders() {
        for (t, order, npos) in [
            ("A1", 2, 1),
            ("A2", 6, 3),
            ("A3", 24, 6),
            ("A4", 120, 10),
            ("B2", 8, 4),
            ("C3", 48, 9),
            ("B4", 384, 16),
            ("D4", 192, 12),
            ("G2", 12, 6),
            ("F4", 1152, 24),
            ("A1xA1", 4, 2),
        ] {
            let d = RelativeRootDatum::build(t, None).unwrap();
            assert_eq!(d.weyl().order(), order, "{t}");
            assert_eq!(d.positive_coroots().len(), npos, "{t}");
            assert_eq!(d.longest().length(), npos, "{t}");
        }
    }

    #[test]
    fn rejects_unsupported() {
        assert!(RelativeRootDatum::build("A5", None).is_err());
        assert!(RelativeRootDatum::build("E6", None).is_err());
        assert!(RelativeRootDatum::build("A2xA3", None).is_err());
        assert!(matches!(RelativeRootDatum::build_with_bound("B3", None, 10), Err(Error::WeylBound(10))));
    }

    #[test]
    fn a2_reflection_and_dominance() {
        let d = RelativeRootDatum::build("A2", None).unwrap();
        assert_eq!(d.reflect(0, &LatticeVector(vec![0, 1])), LatticeVector(vec![1, 1]));
        let a = RelativeRootDatum::build("A1", None).unwrap();
        assert!(a.is_dominant(&LatticeVector(vec![1])));
        assert!(!a.is_dominant(&LatticeVector(vec![-1])));
        assert_eq!(a.reflect(0, &LatticeVector(vec![3])), LatticeVector(vec![-3]));
    }

    #[test]
    fn braid_words_agree() {
        let d = RelativeRootDatum::build("A2", None).unwrap();
        let w1 = d.reduced(&[0, 1, 0]).unwrap();
        let w2 = d.reduced(&[1, 0, 1]).unwrap();
        assert_eq!(w1.matrix, w2.matrix);
        assert_eq!(d.inversion_set(&w1).len(), 3);
        assert!(d.reduced(&[0, 0]).is_err());
    }
}
